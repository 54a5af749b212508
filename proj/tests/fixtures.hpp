#pragma once

// Shared fixture algebras, morphisms, and deterministic random generators for
// the unit and acceptance suites. Every generator takes an explicit mt19937 so
// reruns are reproducible bit for bit.

#include <random>
#include <vector>

#include "lmc/gm.hpp"
#include "lmc/mc.hpp"
#include "lmc/slie.hpp"

namespace fixtures {

using lmc::Element;
using lmc::InftyMorphism;
using lmc::PolyForm;
using lmc::Rational;
using lmc::SLieAlgebra;

using Rng = std::mt19937;

// ---------------------------------------------------------------------------
// Fixture algebras
// ---------------------------------------------------------------------------

// Abelian, truncation 2: an exact pair in weight 1 plus closed symbols.
// Symbols: p(-1,1), q(0,1), r(0,2), m(1,2); dp = q.
inline SLieAlgebra abelian2() {
  SLieAlgebra a(2, 2);
  int p = a.add_symbol("p", -1, 1);
  a.add_symbol("q", 0, 1);
  a.add_symbol("r", 0, 2);
  a.add_symbol("m", 1, 2);
  a.set_differential(p, lmc::basis_element(1));
  return a;
}

// Nilpotent dg Lie, truncation 2: x(0,1), xi(-1,1), y(1,2), z(0,2);
// dxi = x, dz = -y; {x,x} = y, {x,xi} = z. Maurer-Cartan elements are
// exactly c*x + (c^2/2)*z.
inline SLieAlgebra heis() {
  SLieAlgebra a(2, 2);
  int x = a.add_symbol("x", 0, 1);
  int xi = a.add_symbol("xi", -1, 1);
  int y = a.add_symbol("y", 1, 2);
  int z = a.add_symbol("z", 0, 2);
  a.set_differential(xi, lmc::basis_element(x));
  a.set_differential(z, lmc::scaled_basis_element(y, Rational(-1)));
  a.set_bracket({x, x}, lmc::basis_element(y));
  a.set_bracket({x, xi}, lmc::basis_element(z));
  return a;
}

// heis extended by an acyclic pair u(0,1), w(1,1) with du = w. The strict
// projection back onto heis kills the pair and is a filtered quasi-iso.
inline SLieAlgebra heis_plus() {
  SLieAlgebra a = heis();
  int u = a.add_symbol("u", 0, 1);
  int w = a.add_symbol("w", 1, 1);
  a.set_differential(u, lmc::basis_element(w));
  return a;
}

inline InftyMorphism proj_morphism() {
  InftyMorphism u(heis_plus(), heis());
  for (int s = 0; s < 4; ++s) u.set_taylor({s}, lmc::basis_element(s));
  return u;
}

// Truncation 3, arity 3, with an interacting 3-bracket: x(0,1), y(1,2),
// q(2,3), p(1,3), w(0,2), rho(-1,3); dp = -3q; {x,x} = y, {x,y} = q,
// {x,x,x} = p. The arity-3 coherence relation on (x,x,x) forces dp = -3q.
inline SLieAlgebra cubic3() {
  SLieAlgebra a(3, 3);
  int x = a.add_symbol("x", 0, 1);
  int y = a.add_symbol("y", 1, 2);
  int q = a.add_symbol("q", 2, 3);
  int p = a.add_symbol("p", 1, 3);
  a.add_symbol("w", 0, 2);
  a.add_symbol("rho", -1, 3);
  a.set_differential(p, lmc::scaled_basis_element(q, Rational(-3)));
  a.set_bracket({x, x}, lmc::basis_element(y));
  a.set_bracket({x, y}, lmc::basis_element(q));
  a.set_bracket({x, x, x}, lmc::basis_element(p));
  return a;
}

// Nilpotent Lie algebra entered in the ordinary convention and shifted:
// ordinary generators A(0,1), B(0,2), C(0,3) with [A,B] = C, truncation 3.
// After the shift all three sit in degree -1, so edges can move in weights
// 1, 2, 3 while the only Maurer-Cartan point is 0.
inline SLieAlgebra glam() {
  lmc::OrdinaryLInfinity l;
  l.truncation = 3;
  l.max_arity = 2;
  l.symbols = {{"a", 0, 1}, {"b", 0, 2}, {"c", 0, 3}};
  l.brackets[{0, 1}] = lmc::basis_element(2);
  return lmc::shift_convention(l);
}

// Abelian, truncation 4, degrees spread over [-3, 1].
// s3(-3,1), s2(-2,1), s1b(-1,1), s1(-1,2), s0(0,3), s0b(0,1), t1(1,4);
// ds3 = s2, ds0 = t1.
inline SLieAlgebra abelian4() {
  SLieAlgebra a(4, 2);
  int s3 = a.add_symbol("s3", -3, 1);
  a.add_symbol("s2", -2, 1);
  a.add_symbol("s1b", -1, 1);
  a.add_symbol("s1", -1, 2);
  int s0 = a.add_symbol("s0", 0, 3);
  a.add_symbol("s0b", 0, 1);
  int t1 = a.add_symbol("t1", 1, 4);
  a.set_differential(s3, lmc::basis_element(1));
  a.set_differential(s0, lmc::basis_element(t1));
  return a;
}

// Source and target of the quadratic quasi-iso: both are
// x(0,1), v(-1,2), z(0,2), eta(0,2), y(1,2) with dv = z, deta = y,
// {x,x} = y. Maurer-Cartan points are a*x + b*z - (a^2/2)*eta.
inline SLieAlgebra quad_side() {
  SLieAlgebra a(2, 2);
  int x = a.add_symbol("x", 0, 1);
  int v = a.add_symbol("v", -1, 2);
  a.add_symbol("z", 0, 2);
  int eta = a.add_symbol("eta", 0, 2);
  int y = a.add_symbol("y", 1, 2);
  a.set_differential(v, lmc::basis_element(2));
  a.set_differential(eta, lmc::basis_element(y));
  a.set_bracket({x, x}, lmc::basis_element(y));
  return a;
}

// Identity on symbols plus the quadratic coefficient U_2(x,x) = z.
inline InftyMorphism quad_morphism() {
  InftyMorphism u(quad_side(), quad_side());
  for (int s = 0; s < 5; ++s) u.set_taylor({s}, lmc::basis_element(s));
  u.set_taylor({0, 0}, lmc::basis_element(2));
  return u;
}

// Degenerate morphisms refuting the quasi-iso hypothesis.
inline SLieAlgebra point_algebra() { return SLieAlgebra(1, 2); }

inline SLieAlgebra line_algebra() {
  SLieAlgebra a(1, 2);
  a.add_symbol("x", 0, 1);
  return a;
}

// Nothing hits the weight-1 class of the target.
inline InftyMorphism empty_to_line() {
  return InftyMorphism(point_algebra(), line_algebra());
}

// The source class dies; its two Maurer-Cartan points cannot be connected
// over the one-point target.
inline InftyMorphism line_to_point() {
  return InftyMorphism(line_algebra(), point_algebra());
}

// Maurer-Cartan points used by the twisting and edge generators.
inline std::vector<Element> mc_points(const SLieAlgebra& a,
                                      const std::string& which) {
  std::vector<Element> out;
  out.push_back(Element(0));
  if (which == "abelian2") {
    out.push_back(lmc::basis_element(1));
    out.push_back(lmc::basis_element(1) * Rational(-2) + lmc::basis_element(2));
    out.push_back(lmc::basis_element(2) * Rational(3, 2));
  } else if (which == "heis") {
    out.push_back(lmc::basis_element(0) + lmc::scaled_basis_element(3, Rational(1, 2)));
    out.push_back(lmc::scaled_basis_element(0, Rational(-1)) +
                  lmc::scaled_basis_element(3, Rational(1, 2)));
    out.push_back(lmc::scaled_basis_element(0, Rational(2)) + lmc::scaled_basis_element(3, Rational(2)));
  } else if (which == "cubic3") {
    out.push_back(lmc::basis_element(4));
    out.push_back(lmc::scaled_basis_element(4, Rational(-3)));
  } else if (which == "abelian4") {
    out.push_back(lmc::basis_element(5));
    out.push_back(lmc::scaled_basis_element(5, Rational(7, 3)));
  } else if (which == "quad") {
    for (Rational c : {Rational(1), Rational(-2)}) {
      out.push_back(lmc::scaled_basis_element(0, c) + lmc::basis_element(2) * Rational(1, 3) -
                    lmc::scaled_basis_element(3, c * c * Rational(1, 2)));
    }
  }
  for (const Element& e : out) {
    if (!lmc::curvature(a, e).is_zero()) throw std::logic_error("fixture MC point is not MC");
  }
  return out;
}

struct Fixture {
  std::string name;
  SLieAlgebra algebra;
  std::vector<Element> mc;
};

inline std::vector<Fixture> all_fixtures() {
  std::vector<Fixture> out;
  out.push_back({"abelian2", abelian2(), mc_points(abelian2(), "abelian2")});
  out.push_back({"heis", heis(), mc_points(heis(), "heis")});
  out.push_back({"cubic3", cubic3(), mc_points(cubic3(), "cubic3")});
  out.push_back({"glam", glam(), mc_points(glam(), "glam")});
  out.push_back({"abelian4", abelian4(), mc_points(abelian4(), "abelian4")});
  out.push_back({"quad", quad_side(), mc_points(quad_side(), "quad")});
  return out;
}

// ---------------------------------------------------------------------------
// Random generators
// ---------------------------------------------------------------------------

inline int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Rational random_rational(Rng& rng, bool allow_zero = false) {
  int num = uniform(rng, -9, 9);
  if (!allow_zero && num == 0) num = 1;
  return Rational(num, uniform(rng, 1, 9));
}

// Random polynomial form on the n-simplex: up to max_terms monomials of
// polynomial degree <= max_poly and random exterior parts.
inline PolyForm random_form(Rng& rng, int n, int max_poly = 4, int max_terms = 5) {
  PolyForm f(n);
  int terms = uniform(rng, 0, max_terms);
  for (int t = 0; t < terms; ++t) {
    lmc::FormMonomial m;
    m.expo.assign(n, 0);
    int budget = uniform(rng, 0, max_poly);
    for (int b = 0; b < budget && n > 0; ++b) ++m.expo[uniform(rng, 0, n - 1)];
    for (int v = 1; v <= n; ++v) {
      if (uniform(rng, 0, 2) == 0) m.dts.push_back(v);
    }
    f.add_term(m, random_rational(rng));
  }
  return f;
}

// Random 0-form (polynomial function) on the n-simplex.
inline PolyForm random_poly(Rng& rng, int n, int max_poly = 2, int max_terms = 3) {
  PolyForm f(n);
  int terms = uniform(rng, 0, max_terms);
  for (int t = 0; t < terms; ++t) {
    lmc::FormMonomial m;
    m.expo.assign(n, 0);
    int budget = uniform(rng, 0, max_poly);
    for (int b = 0; b < budget && n > 0; ++b) ++m.expo[uniform(rng, 0, n - 1)];
    f.add_term(m, random_rational(rng));
  }
  return f;
}

// Random dim-0 element supported on the symbols of the given degree.
inline Element random_homogeneous(Rng& rng, const SLieAlgebra& a, int d) {
  Element e(0);
  for (int s = 0; s < a.symbol_count(); ++s) {
    if (a.symbol(s).degree != d) continue;
    Rational c = random_rational(rng, true);
    if (c != 0) e.add(s, PolyForm::scalar(0, c));
  }
  return e;
}

inline Element random_degree0(Rng& rng, const SLieAlgebra& a) {
  return random_homogeneous(rng, a, 0);
}

// Random degree-0 extended element over the n-simplex: a symbol of degree d
// contributes a random form of exterior degree -d (only 0 >= d >= -n can).
inline Element random_extended0(Rng& rng, const SLieAlgebra& a, int n) {
  Element e(n);
  for (int s = 0; s < a.symbol_count(); ++s) {
    int k = -a.symbol(s).degree;
    if (k < 0 || k > n) continue;
    PolyForm f = random_form(rng, n, 2, 2).degree_part(k);
    if (!f.is_zero()) e.add(s, f);
  }
  return e;
}

// Random Maurer-Cartan n-simplex with vertex value mu: reconstructed from the
// stub D(h^i psi) for a random degree-0 psi. Such stubs satisfy the stub
// conditions for every psi because D^2 = 0 and h^i output vanishes at vertex i.
inline Element random_mc_simplex(Rng& rng, const SLieAlgebra& a, int n, int i,
                                 const Element& mu) {
  Element psi = random_extended0(rng, a, n);
  Element nu = lmc::differential(a, lmc::element_h(a, psi, i));
  return lmc::reconstruct(a, n, i, mu, nu);
}

// Random Maurer-Cartan edge out of a Maurer-Cartan point whose direction is
// supported on degree -1 symbols of weight >= k, with polynomial clock
// dependence.
inline Element random_edge(Rng& rng, const SLieAlgebra& a, const Element& start,
                           int k) {
  Element dir(1);
  for (int s = 0; s < a.symbol_count(); ++s) {
    if (a.symbol(s).degree != -1 || a.symbol(s).weight < k) continue;
    PolyForm f = random_poly(rng, 1, 2, 2);
    if (!f.is_zero()) dir.add(s, f);
  }
  return lmc::integrate_edge(a, start, dir);
}

// Largest weight carried by a degree -1 symbol, 0 when there is none.
inline int max_direction_weight(const SLieAlgebra& a) {
  int w = 0;
  for (int s = 0; s < a.symbol_count(); ++s) {
    if (a.symbol(s).degree == -1) w = std::max(w, a.symbol(s).weight);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Twisted operations at an arbitrary (not necessarily Maurer-Cartan) alpha
// ---------------------------------------------------------------------------

// del^alpha v = Dv + sum_{k>=1} 1/k! {alpha^k, v}.
inline Element twisted_differential(const SLieAlgebra& a, const Element& alpha,
                                    const Element& v) {
  Element out = lmc::differential(a, v);
  Rational fact(1);
  for (int k = 1; k + 1 <= a.max_arity(); ++k) {
    fact /= k;
    std::vector<Element> args(static_cast<size_t>(k), alpha);
    args.push_back(v);
    out += lmc::bracket(a, args) * fact;
  }
  return out;
}

// {args}^alpha = sum_{k>=0} 1/k! {alpha^k, args}.
inline Element twisted_bracket(const SLieAlgebra& a, const Element& alpha,
                               const std::vector<Element>& args) {
  Element out(args.empty() ? 0 : args.front().dim);
  Rational fact(1);
  for (int k = 0; k + static_cast<int>(args.size()) <= a.max_arity(); ++k) {
    if (k > 0) fact /= k;
    std::vector<Element> full(static_cast<size_t>(k), alpha);
    for (const Element& e : args) full.push_back(e);
    if (full.size() >= 2) out += lmc::bracket(a, full) * fact;
  }
  return out;
}

}  // namespace fixtures
