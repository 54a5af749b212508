#include "lmc/mc.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace lmc {

namespace {

bool is_odd(int k) { return k % 2 != 0; }

Rational koszul(bool odd) { return odd ? Rational(-1) : Rational(1); }

Rational scalar_of(const PolyForm& f) {
  if (f.is_zero()) return Rational(0);
  return f.terms().begin()->second;
}

// del tensor 1 alone, without the de Rham part: used for the pointwise form
// of the edge equation, where all components are 0-forms in the clock.
Element algebra_differential(const SLieAlgebra& a, const Element& e) {
  Element out(e.dim);
  for (const auto& [sym, f] : e.comp) {
    for (const auto& [tgt, c] : a.differential_entry(sym).comp) {
      out.add(tgt, f * scalar_of(c));
    }
  }
  return out;
}

// Componentwise antiderivative vanishing at 0, for dim-1 elements of 0-forms.
Element element_integrate(const Element& e) {
  Element out(e.dim);
  for (const auto& [sym, f] : e.comp) out.add(sym, integrate_from_zero(f));
  return out;
}

void require_edge(const Element& e, const char* what) {
  if (e.dim != 1) throw InputError(std::string(what) + " requires a dim-1 element");
}

}  // namespace

bool is_mc(const SLieAlgebra& a, const Element& e) {
  if (!is_homogeneous(a, e, 0)) return false;
  return curvature(a, e).is_zero();
}

Element mc_residual(const SLieAlgebra& a, const Element& e) { return curvature(a, e); }

Element stub_of(const SLieAlgebra& a, const Element& e, int i) {
  if (i < 0 || i > e.dim) throw InputError("stub vertex out of range");
  return differential(a, element_h(a, e, i));
}

std::optional<std::string> stub_check(const SLieAlgebra& a, const Element& nu, int i) {
  if (i < 0 || i > nu.dim) throw InputError("stub vertex out of range");
  if (!is_homogeneous(a, nu, 0)) return "stub is not homogeneous of degree 0";
  if (!differential(a, nu).is_zero()) return "stub is not closed";
  if (!element_vertex(nu, i).is_zero()) return "stub does not vanish at its vertex";
  return std::nullopt;
}

Element reconstruct(const SLieAlgebra& a, int n, int i, const Element& mu, const Element& nu,
                    int* iterations) {
  if (n < 1) throw InputError("reconstruction needs dimension >= 1");
  if (nu.dim != n) throw InputError("stub dimension mismatch");
  if (mu.dim != 0) throw InputError("vertex value must be a dim-0 element");
  if (i < 0 || i > n) throw InputError("stub vertex out of range");
  if (!is_mc(a, mu)) {
    throw PreconditionError("reconstruction requires a Maurer-Cartan vertex value");
  }
  if (auto why = stub_check(a, nu, i)) {
    throw PreconditionError("reconstruction requires a stub: " + *why);
  }

  const Element base = element_tensor(mu, PolyForm::scalar(n, Rational(1))) + nu;
  Element cur = base;
  const int cap = a.truncation() + 2;
  for (int it = 0;; ++it) {
    if (it > cap) throw std::logic_error("reconstruction failed to stabilize");
    Element next = base;
    for (int m = 2; m <= a.max_arity(); ++m) {
      Element br = bracket(a, std::vector<Element>(m, cur));
      if (br.is_zero()) continue;
      next -= element_h(a, br, i) * inv_factorial(m);
    }
    if (next == cur) {
      if (iterations) *iterations = it;
      break;
    }
    cur = std::move(next);
  }
  if (!curvature(a, cur).is_zero()) {
    throw std::logic_error("reconstructed simplex is not Maurer-Cartan");
  }
  return cur;
}

Element edge_start(const Element& e) {
  require_edge(e, "edge start");
  return element_vertex(e, 1);
}

Element edge_end(const Element& e) {
  require_edge(e, "edge end");
  return element_vertex(e, 0);
}

Element edge_beta0(const Element& e) {
  require_edge(e, "edge path");
  Element out(1);
  for (const auto& [sym, f] : e.comp) out.add(sym, f.degree_part(0));
  return out;
}

Element edge_beta1_raw(const Element& e) {
  require_edge(e, "edge dt-part");
  Element out(1);
  for (const auto& [sym, f] : e.comp) {
    PolyForm g(1);
    for (const auto& [m, c] : f.terms()) {
      if (m.degree() == 1) g.add_term(FormMonomial{m.expo, {}}, c);
    }
    out.add(sym, g);
  }
  return out;
}

Element edge_reverse(const Element& e) {
  require_edge(e, "edge reversal");
  PolyForm flip = PolyForm::scalar(1, Rational(1)) - PolyForm::variable(1, 1);
  return element_substitute_var(e, 1, flip);
}

Element edge_beta1_path(const SLieAlgebra& a, const Element& e) {
  Element raw = edge_beta1_raw(e);
  PolyForm flip = PolyForm::scalar(1, Rational(1)) - PolyForm::variable(1, 1);
  Element out(1);
  for (const auto& [sym, f] : raw.comp) {
    out.add(sym, substitute_var(f, 1, flip) * koszul(is_odd(a.symbol(sym).degree + 1)));
  }
  return out;
}

bool is_rectified(const Element& e) {
  require_edge(e, "rectification test");
  for (const auto& [sym, f] : e.comp) {
    for (const auto& [m, c] : f.terms()) {
      if (m.degree() == 1 && m.expo[0] != 0) return false;
    }
  }
  return true;
}

Element rectified_beta1(const SLieAlgebra& a, const Element& e) {
  if (!is_rectified(e)) throw PreconditionError("edge is not rectified");
  Element path = edge_beta1_path(a, e);
  Element out(0);
  for (const auto& [sym, f] : path.comp) out.add(sym, PolyForm::scalar(0, scalar_of(f)));
  return out;
}

Element integrate_edge(const SLieAlgebra& a, const Element& start, const Element& rho1,
                       int* iterations) {
  if (start.dim != 0) throw InputError("integration start must be a dim-0 element");
  if (rho1.dim != 1) throw InputError("integrand must be a dim-1 element");
  for (const auto& [sym, f] : rho1.comp) {
    if (f.degree_part(0) != f) throw InputError("integrand components must be 0-forms");
  }
  if (!is_mc(a, start)) {
    throw PreconditionError("integration requires a Maurer-Cartan start point");
  }
  if (!is_homogeneous(a, rho1, -1)) {
    throw PreconditionError("integrand must be homogeneous of degree -1");
  }

  // Picard iteration for beta_0(clock) in the clock coordinate: the stored
  // variable means the clock until the final flip.
  const Element base = element_tensor(start, PolyForm::scalar(1, Rational(1)));
  Element rho0 = base;
  const int cap = a.truncation() + 2;
  for (int it = 0;; ++it) {
    if (it > cap) throw std::logic_error("edge integration failed to stabilize");
    Element integrand = algebra_differential(a, rho1);
    for (int k = 1; k + 1 <= a.max_arity(); ++k) {
      std::vector<Element> args(k, rho0);
      args.push_back(rho1);
      Element br = bracket(a, args);
      if (br.is_zero()) continue;
      integrand += br * inv_factorial(k);
    }
    Element next = base + element_integrate(integrand);
    if (next == rho0) {
      if (iterations) *iterations = it;
      break;
    }
    rho0 = std::move(next);
  }

  // Assemble in clock coordinates, then flip to canonical storage. Writing
  // dt wedge beta_1 as an element inserts the Koszul factor per symbol.
  Element clock = rho0;
  const PolyForm dt1 = PolyForm::dt(1, 1);
  for (const auto& [sym, f] : rho1.comp) {
    clock.add(sym, wedge(f, dt1) * koszul(is_odd(a.symbol(sym).degree)));
  }
  PolyForm flip = PolyForm::scalar(1, Rational(1)) - PolyForm::variable(1, 1);
  Element out = element_substitute_var(clock, 1, flip);

  if (!is_mc(a, out)) throw std::logic_error("integrated edge is not Maurer-Cartan");
  if (!(edge_start(out) == start)) {
    throw std::logic_error("integrated edge does not begin at its start point");
  }
  return out;
}

Element rectify(const SLieAlgebra& a, const Element& e, int k) {
  require_edge(e, "rectification");
  if (k < 1) throw InputError("rectification floor must be >= 1");
  if (!is_mc(a, e)) throw PreconditionError("rectification requires a Maurer-Cartan edge");
  if (!edge_beta1_raw(e).is_zero() && min_weight(a, edge_beta1_raw(e)) < k) {
    throw PreconditionError("weight floor violated");
  }
  if (is_rectified(e)) return e;

  const Element mu = edge_start(e);
  const PolyForm t1v = PolyForm::variable(2, 1);
  const PolyForm t2v = PolyForm::variable(2, 2);
  const PolyForm t0v = PolyForm::scalar(2, Rational(1)) - t1v - t2v;

  // The running triangle: its t_0 = 0 face stays the input (reversed in
  // canonical face storage), its t_2 = 0 face rectifies weight by weight.
  Element gamma = element_degeneracy(edge_reverse(e), 0);
  for (int m = k; m <= a.truncation(); ++m) {
    Element sigma_edge = element_face(gamma, 1);
    Element sigma1(1);
    for (const auto& [sym, f] : edge_beta1_raw(sigma_edge).comp) {
      sigma1.add(sym, f * koszul(is_odd(a.symbol(sym).degree)));
    }
    if (min_weight(a, sigma1) < m) {
      throw std::logic_error("rectification invariant violated");
    }
    Element layer = weight_part(a, sigma1, m);
    if (layer.is_zero()) continue;

    int top = 0;
    for (const auto& [sym, f] : layer.comp) top = std::max(top, f.max_poly_degree());
    std::vector<Element> coef(top + 1, Element(0));
    for (const auto& [sym, f] : layer.comp) {
      for (const auto& [mono, c] : f.terms()) {
        coef[mono.expo[0]].add(sym, PolyForm::scalar(0, c));
      }
    }
    // delta[s] - delta[s+1] = coef[s] / (s+1), solved descending from zero.
    std::vector<Element> delta(top + 2, Element(0));
    for (int s = top; s >= 0; --s) {
      delta[s] = coef[s] * rat(1, s + 1) + delta[s + 1];
    }
    Element correction(2);
    for (int s = 0; s <= top; ++s) {
      if (delta[s].is_zero()) continue;
      correction += element_tensor(delta[s], wedge(t0v, polyform_pow(t2v, s)));
    }
    Element nu = differential(a, correction + element_h(a, gamma, 1));
    gamma = reconstruct(a, 2, 1, mu, nu);
  }

  Element out = element_face(gamma, 2);
  if (!is_rectified(out)) throw std::logic_error("rectified output has a non-constant dt-part");
  if (!is_mc(a, out)) throw std::logic_error("rectified output is not Maurer-Cartan");
  if (!(edge_start(out) == edge_start(e)) || !(edge_end(out) == edge_end(e))) {
    throw std::logic_error("rectification moved an endpoint");
  }
  if (!edge_beta1_raw(out).is_zero() && min_weight(a, edge_beta1_raw(out)) < k) {
    throw std::logic_error("rectified output violates the weight floor");
  }
  return out;
}

ComposeResult compose_edges(const SLieAlgebra& a, const Element& e_left, const Element& e_right) {
  require_edge(e_left, "composition");
  require_edge(e_right, "composition");
  if (!is_mc(a, e_left) || !is_mc(a, e_right)) {
    throw PreconditionError("composition requires Maurer-Cartan edges");
  }
  if (!(edge_end(e_left) == edge_start(e_right))) {
    throw PreconditionError("endpoint mismatch");
  }

  // The left edge glues onto the t_0 = 0 face (its own orientation), the
  // right edge onto the t_2 = 0 face; both meet at vertex 1. The stub is the
  // differential of the glued vertex-1 homotopies: the left one pulled back
  // through t_2, the right one through t_1 + t_2, so each restricts to its
  // face's homotopy and vanishes on the other face.
  Element g2 = element_rename_vars(element_h(a, e_left, 0), 2, {2});
  Element r1 = element_rename_vars(element_h(a, e_right, 1), 2, {1});
  Element r2 = element_substitute_var(r1, 1, PolyForm::variable(2, 1) + PolyForm::variable(2, 2));
  Element nu = differential(a, g2 + r2);

  Element eta = reconstruct(a, 2, 1, edge_start(e_right), nu);
  if (!(element_face(eta, 0) == e_left)) {
    throw std::logic_error("composition triangle lost its left face");
  }
  if (!(element_face(eta, 2) == e_right)) {
    throw std::logic_error("composition triangle lost its right face");
  }
  ComposeResult out;
  out.composite = element_face(eta, 1);
  out.triangle = std::move(eta);
  return out;
}

Element concatenate(const SLieAlgebra& a, const std::vector<Element>& edges) {
  if (edges.empty()) throw InputError("concatenation requires at least one edge");
  for (std::size_t j = 0; j < edges.size(); ++j) {
    require_edge(edges[j], "concatenation");
    if (!is_mc(a, edges[j])) {
      throw PreconditionError("concatenation requires Maurer-Cartan edges");
    }
    Element raw_j = edge_beta1_raw(edges[j]);
    bool deep_enough = raw_j.is_zero() || min_weight(a, raw_j) >= static_cast<int>(j) + 1;
    bool chained = j == 0 || edge_end(edges[j - 1]) == edge_start(edges[j]);
    if (!deep_enough || !chained) {
      throw PreconditionError("violated weight schedule or endpoint chain");
    }
  }
  Element composite = edges.front();
  for (std::size_t j = 1; j < edges.size(); ++j) {
    composite = compose_edges(a, composite, edges[j]).composite;
  }
  return composite;
}

Element shift_base(const SLieAlgebra& a, const Element& alpha, const Element& s) {
  if (alpha.dim != 0) throw InputError("base point must be a dim-0 element");
  if (!is_homogeneous(a, alpha, 0) || !curvature(a, alpha).is_zero()) {
    throw NotMaurerCartan(is_homogeneous(a, alpha, 0) ? curvature(a, alpha) : Element(0));
  }
  SLieAlgebra tw = twist_algebra(a, alpha);
  if (!is_mc(tw, s)) {
    throw PreconditionError("base shift requires a Maurer-Cartan simplex of the twisted algebra");
  }
  Element out = s + element_tensor(alpha, PolyForm::scalar(s.dim, Rational(1)));
  if (!is_mc(a, out)) throw std::logic_error("base shift produced a non-Maurer-Cartan simplex");
  return out;
}

}  // namespace lmc
