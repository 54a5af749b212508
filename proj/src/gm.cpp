#include "lmc/gm.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lmc/forms.hpp"

namespace lmc {

namespace {

Rational scalar_of(const PolyForm& f) {
  if (f.is_zero()) return Rational(0);
  return f.terms().begin()->second;
}

Matrix identity_matrix(int d) {
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) m.set(i, i, Rational(1));
  return m;
}

bool same_matrix(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a.entries() == b.entries();
}

// Zero-filled matrix of the differential leaving `degree`, shaped correctly
// even outside the complex window.
Matrix diff_or_zero(const CochainComplex& c, int degree) {
  if (const Matrix* m = c.differential(degree)) return *m;
  return Matrix(c.dim(degree + 1), c.dim(degree));
}

// Matrix of the weight-preserving part of the linear Taylor coefficient on
// one degree of the weight-n graded pieces.
Matrix graded_linear_map(const InftyMorphism& u, const GradedPiece& gs, const GradedPiece& gt,
                         int degree) {
  const int cols = gs.complex.dim(degree);
  const int rows = gt.complex.dim(degree);
  Matrix m(rows, cols);
  if (rows == 0 || cols == 0) return m;
  const auto& syms = gs.basis.at(degree - gs.d_min);
  for (int j = 0; j < cols; ++j) {
    Element img = apply_taylor(u, {basis_element(syms[j])});
    for (const auto& [r, v] : graded_coordinates(u.target(), gt, degree, img)) m.set(r, j, v);
  }
  return m;
}

// Coordinates of the class of the cocycle z in the representative basis of h,
// obtained from the canonical solution of [reps | boundary] x = z. nullopt
// when z is not a cocycle of this degree at all.
std::optional<Vec> class_coordinates(const Cohomology& h, const Matrix& boundary_in, const Vec& z,
                                     int ambient_dim) {
  const int k = h.dim();
  Matrix m(ambient_dim, k + boundary_in.cols());
  for (int j = 0; j < k; ++j) {
    for (const auto& [r, v] : h.reps[j]) m.set(r, j, v);
  }
  for (const auto& [rc, v] : boundary_in.entries()) m.set(rc.first, k + rc.second, v);
  auto sol = solve_linear(m, z);
  if (!sol) return std::nullopt;
  Vec cls;
  for (const auto& [i, v] : *sol) {
    if (i < k) cls[i] = v;
  }
  return cls;
}

// The joint layer system: rows of a (padded with zero columns on the right)
// stacked over rows of [b | c]. a and b must agree on column count.
Matrix stack_blocks(const Matrix& a, const Matrix& b, const Matrix& c) {
  Matrix m(a.rows() + b.rows(), a.cols() + c.cols());
  for (const auto& [rc, v] : a.entries()) m.set(rc.first, rc.second, v);
  for (const auto& [rc, v] : b.entries()) m.set(a.rows() + rc.first, rc.second, v);
  for (const auto& [rc, v] : c.entries()) m.set(a.rows() + rc.first, a.cols() + rc.second, v);
  return m;
}

Element constant_edge_direction(const Element& dim0) {
  return element_tensor(dim0, PolyForm::scalar(1, Rational(1)));
}

}  // namespace

QisoReport check_filtered_qiso(const InftyMorphism& u) {
  QisoReport rep;
  const SLieAlgebra& s = u.source();
  const SLieAlgebra& t = u.target();
  for (int n = 1; n <= s.truncation(); ++n) {
    GradedPiece gs = graded_piece(s, n);
    GradedPiece gt = graded_piece(t, n);
    bool any = false;
    int lo = 0;
    int hi = -1;
    auto widen = [&](const GradedPiece& g) {
      if (g.degree_count() == 0) return;
      const int g_lo = g.d_min;
      const int g_hi = g.d_min + g.degree_count() - 1;
      if (!any) {
        lo = g_lo;
        hi = g_hi;
        any = true;
      } else {
        lo = std::min(lo, g_lo);
        hi = std::max(hi, g_hi);
      }
    };
    widen(gs);
    widen(gt);
    if (!any) continue;
    for (int d = lo; d <= hi; ++d) {
      Cohomology hs = cohomology_basis(gs.complex, d);
      Cohomology ht = cohomology_basis(gt.complex, d);
      if (hs.dim() != ht.dim()) {
        rep.failures.push_back({n, d});
        continue;
      }
      if (hs.dim() == 0) continue;
      Matrix phi = graded_linear_map(u, gs, gt, d);
      Matrix boundary = diff_or_zero(gt.complex, d - 1);
      Matrix induced(ht.dim(), hs.dim());
      bool broken = false;
      for (int j = 0; j < hs.dim(); ++j) {
        Vec img = phi.apply(hs.reps[j]);
        auto cls = class_coordinates(ht, boundary, img, gt.complex.dim(d));
        if (!cls) {
          broken = true;
          break;
        }
        for (const auto& [r, v] : *cls) induced.set(r, j, v);
      }
      if (broken || rank(induced) != hs.dim()) rep.failures.push_back({n, d});
    }
  }
  return rep;
}

TransferResult mc_preimage(const InftyMorphism& u, const Element& alpha_tilde) {
  const SLieAlgebra& s = u.source();
  const SLieAlgebra& t = u.target();
  if (alpha_tilde.dim != 0) throw InputError("preimage input must be a dim-0 element");
  {
    Element c = curvature(t, alpha_tilde);
    if (!c.is_zero()) throw NotMaurerCartan(std::move(c));
  }
  const int n_cap = s.truncation();

  TransferCertificate cert;
  cert.kind = "preimage";
  cert.alpha_prime = alpha_tilde;

  Element alpha;
  Element beta1;
  Element beta = integrate_edge(t, alpha_tilde, constant_edge_direction(beta1));

  for (int n = 0; n <= n_cap; ++n) {
    PreimageLayer layer;
    layer.layer = n;
    layer.alpha_n = alpha;
    Element ztilde = edge_end(beta) - pushforward(u, alpha);
    layer.defect = ztilde;
    if (!ztilde.is_zero() && min_weight(t, ztilde) < n + 1) {
      throw std::logic_error("preimage defect violates the weight tower");
    }

    Element gamma;
    Element xi;
    const int w = n + 1;
    if (w <= n_cap) {
      GradedPiece gs = graded_piece(s, w);
      GradedPiece gt = graded_piece(t, w);
      Matrix d_src = diff_or_zero(gs.complex, 0);
      Matrix phi = graded_linear_map(u, gs, gt, 0);
      Matrix d_tgt = diff_or_zero(gt.complex, -1);
      Matrix neg_dt(d_tgt.rows(), d_tgt.cols());
      for (const auto& [rc, v] : d_tgt.entries()) neg_dt.set(rc.first, rc.second, -v);
      Matrix m = stack_blocks(d_src, phi, neg_dt);
      Vec b;
      for (const auto& [r, v] : graded_coordinates(t, gt, 0, ztilde)) b[d_src.rows() + r] = v;
      auto sol = solve_linear(m, b);
      if (!sol) {
        Refutation ref;
        ref.weight = w;
        ref.degree = 0;
        ref.in_target = true;
        ref.cls = weight_part(t, ztilde, w);
        ref.detail = "the weight-" + std::to_string(w) +
                     " defect class of the target edge is not hit by a source cocycle";
        TransferResult res;
        res.refutation = std::move(ref);
        return res;
      }
      Vec gv;
      Vec xv;
      const int c1 = d_src.cols();
      for (const auto& [i, v] : *sol) {
        if (i < c1) {
          gv[i] = v;
        } else {
          xv[i - c1] = v;
        }
      }
      gamma = graded_element(gs, 0, gv);
      xi = graded_element(gt, -1, xv);
    } else if (!ztilde.is_zero()) {
      throw std::logic_error("preimage defect failed to vanish at the truncation");
    }
    layer.gamma = gamma;
    layer.xi = xi;
    alpha += gamma;
    beta1 += xi;
    layer.beta1 = beta1;
    int picard = 0;
    beta = integrate_edge(t, alpha_tilde, constant_edge_direction(beta1), &picard);
    layer.picard_iterations = picard;

    Element c = curvature(s, alpha);
    if (!c.is_zero() && min_weight(s, c) < n + 2) {
      throw std::logic_error("preimage curvature violates the weight tower");
    }
    Element sigma;
    const int w2 = n + 2;
    if (w2 <= n_cap) {
      GradedPiece gs2 = graded_piece(s, w2);
      Matrix d0 = diff_or_zero(gs2.complex, 0);
      Vec b;
      for (const auto& [r, v] : graded_coordinates(s, gs2, 1, c)) b[r] = -v;
      auto sol = solve_linear(d0, b);
      if (!sol) {
        Refutation ref;
        ref.weight = w2;
        ref.degree = 1;
        ref.in_target = false;
        ref.cls = weight_part(s, c, w2);
        ref.detail = "the weight-" + std::to_string(w2) +
                     " curvature class of the layer point is not exact in the source";
        TransferResult res;
        res.refutation = std::move(ref);
        return res;
      }
      sigma = graded_element(gs2, 0, *sol);
    } else if (!c.is_zero()) {
      throw std::logic_error("preimage curvature failed to vanish at the truncation");
    }
    layer.sigma = sigma;
    alpha += sigma;
    cert.preimage_layers.push_back(std::move(layer));
  }

  if (!curvature(s, alpha).is_zero()) {
    throw std::logic_error("preimage output is not Maurer-Cartan");
  }
  if (!(edge_end(beta) == pushforward(u, alpha))) {
    throw std::logic_error("preimage edge misses the pushforward");
  }
  cert.alpha = alpha;
  cert.edge = beta;
  TransferResult res;
  res.certificate = std::move(cert);
  return res;
}

TransferResult transfer_connect(const InftyMorphism& u, const Element& alpha,
                                const Element& alpha_prime, const Element& beta_tilde) {
  const SLieAlgebra& s = u.source();
  const SLieAlgebra& t = u.target();
  if (alpha.dim != 0 || alpha_prime.dim != 0) {
    throw InputError("connection endpoints must be dim-0 elements");
  }
  {
    Element c = curvature(s, alpha);
    if (!c.is_zero()) throw NotMaurerCartan(std::move(c));
    Element c2 = curvature(s, alpha_prime);
    if (!c2.is_zero()) throw NotMaurerCartan(std::move(c2));
  }
  if (beta_tilde.dim != 1) throw InputError("connecting data must be a dim-1 element");
  if (!is_mc(t, beta_tilde)) {
    throw PreconditionError("connection requires a Maurer-Cartan edge");
  }
  if (!(edge_start(beta_tilde) == pushforward(u, alpha)) ||
      !(edge_end(beta_tilde) == pushforward(u, alpha_prime))) {
    throw InputError("edge endpoint mismatch");
  }
  const int n_cap = s.truncation();

  TransferCertificate cert;
  cert.kind = "connect";
  cert.alpha = alpha;
  cert.alpha_prime = alpha_prime;

  Element beta = rectify(t, beta_tilde, 1);
  Element cur = alpha;
  std::vector<Element> edges;

  const PolyForm one2 = PolyForm::scalar(2, Rational(1));
  const PolyForm t1v = PolyForm::variable(2, 1);
  const PolyForm t2v = PolyForm::variable(2, 2);
  const PolyForm t0v = one2 - t1v - t2v;
  const PolyForm gform =
      wedge(t2v, PolyForm::dt(2, 1)) * Rational(-1) + wedge(t1v - one2, PolyForm::dt(2, 2));

  for (int n = 1; n <= n_cap; ++n) {
    ConnectLayer layer;
    layer.layer = n;
    layer.alpha_n = cur;
    Element b1 = rectified_beta1(t, beta);
    layer.beta1 = b1;
    Element diff_a = alpha_prime - cur;
    if (!diff_a.is_zero() && min_weight(s, diff_a) < n) {
      throw std::logic_error("connection endpoints violate the weight tower");
    }
    if (!b1.is_zero() && min_weight(t, b1) < n) {
      throw std::logic_error("connection edge violates the weight tower");
    }

    GradedPiece gs = graded_piece(s, n);
    GradedPiece gt = graded_piece(t, n);
    Matrix d_src = diff_or_zero(gs.complex, -1);
    Matrix phi = graded_linear_map(u, gs, gt, -1);
    Matrix d_tgt = diff_or_zero(gt.complex, -2);
    Matrix m = stack_blocks(d_src, phi, d_tgt);
    Vec b;
    for (const auto& [r, v] : graded_coordinates(s, gs, 0, diff_a)) b[r] = v;
    const int r1 = d_src.rows();
    for (const auto& [r, v] : graded_coordinates(t, gt, -1, b1)) b[r1 + r] = v;
    auto sol = solve_linear(m, b);
    if (!sol) {
      Refutation ref;
      ref.weight = n;
      Vec b_top;
      for (const auto& [r, v] : graded_coordinates(s, gs, 0, diff_a)) b_top[r] = v;
      auto sol_top = solve_linear(d_src, b_top);
      if (!sol_top) {
        ref.degree = 0;
        ref.in_target = false;
        ref.cls = weight_part(s, diff_a, n);
        ref.detail = "the weight-" + std::to_string(n) +
                     " endpoint difference class is not exact in the source";
      } else {
        Element rho0 = graded_element(gs, -1, *sol_top);
        ref.degree = -1;
        ref.in_target = true;
        ref.cls = weight_part(t, b1 - apply_taylor(u, {rho0}), n);
        ref.detail = "the weight-" + std::to_string(n) +
                     " edge direction class is not hit by a source cocycle";
      }
      TransferResult res;
      res.refutation = std::move(ref);
      return res;
    }
    Vec rv;
    Vec gv;
    const int c1 = d_src.cols();
    for (const auto& [i, v] : *sol) {
      if (i < c1) {
        rv[i] = v;
      } else {
        gv[i - c1] = v;
      }
    }
    Element rho1 = graded_element(gs, -1, rv);
    Element gamma_t = graded_element(gt, -2, gv);
    layer.rho1 = rho1;
    layer.gamma_t = gamma_t;

    int picard = 0;
    Element rho_edge = integrate_edge(s, cur, constant_edge_direction(rho1), &picard);
    layer.picard_iterations = picard;
    layer.rho_edge = rho_edge;
    edges.push_back(rho_edge);

    Element rho_t = pushforward(u, rho_edge);
    Element x = element_h(t, rho_t, 1);
    Element xi2 = element_substitute_var(element_rename_vars(x, 2, {2}), 2, one2 - t2v);
    Element stub_potential = xi2 + element_tensor(b1, t0v) + element_tensor(gamma_t, gform);
    Element nu = differential(t, stub_potential);
    int horn = 0;
    Element eta = reconstruct(t, 2, 1, pushforward(u, cur), nu, &horn);
    layer.horn_iterations = horn;
    if (!(element_face(eta, 2) == beta)) {
      throw std::logic_error("connection horn lost the transferred edge");
    }
    if (!(element_face(eta, 0) == edge_reverse(rho_t))) {
      throw std::logic_error("connection horn lost the pushforward edge");
    }
    Element eta1 = element_face(eta, 1);
    if (!edge_beta1_raw(eta1).is_zero() && min_weight(t, edge_beta1_raw(eta1)) < n + 1) {
      throw std::logic_error("connection horn output violates the weight tower");
    }
    beta = rectify(t, eta1, n + 1);
    cur = edge_end(rho_edge);
    cert.connect_layers.push_back(std::move(layer));
  }

  if (!(cur == alpha_prime)) throw std::logic_error("connection tower failed to converge");
  Element out = concatenate(s, edges);
  if (!(edge_start(out) == alpha) || !(edge_end(out) == alpha_prime)) {
    throw std::logic_error("connection edge misses its endpoints");
  }
  cert.edge = out;
  TransferResult res;
  res.certificate = std::move(cert);
  return res;
}

std::vector<std::string> validate_certificate(const InftyMorphism& u,
                                              const TransferCertificate& c) {
  std::vector<std::string> out;
  const SLieAlgebra& s = u.source();
  const SLieAlgebra& t = u.target();
  const int n_cap = s.truncation();
  auto fail = [&out](std::string m) { out.push_back(std::move(m)); };

  if (c.kind != "preimage" && c.kind != "connect") {
    fail("unknown certificate kind");
    return out;
  }
  if (c.alpha.dim != 0 || c.alpha_prime.dim != 0) {
    fail("certificate points must be dim-0 elements");
    return out;
  }
  if (c.edge.dim != 1) {
    fail("certificate edge must be a dim-1 element");
    return out;
  }

  if (c.kind == "preimage") {
    if (!c.connect_layers.empty()) fail("preimage certificate carries connection layers");
    if (!is_mc(t, c.alpha_prime)) fail("certified input is not Maurer-Cartan");
    if (!is_mc(s, c.alpha)) fail("certified preimage is not Maurer-Cartan");
    if (!is_mc(t, c.edge)) fail("certificate edge is not Maurer-Cartan");
    if (!(edge_start(c.edge) == c.alpha_prime)) fail("certificate edge does not start at the input");
    if (!(edge_end(c.edge) == pushforward(u, c.alpha))) {
      fail("certificate edge does not end at the pushforward");
    }
    if (!is_rectified(c.edge)) fail("certificate edge is not rectified");
    if (static_cast<int>(c.preimage_layers.size()) != n_cap + 1) {
      fail("preimage certificate has the wrong layer count");
      return out;
    }
    Element alpha_acc;
    Element beta1_acc;
    for (int j = 0; j <= n_cap; ++j) {
      const PreimageLayer& l = c.preimage_layers[j];
      const std::string at = "layer " + std::to_string(j) + ": ";
      if (l.layer != j) fail(at + "layer index mismatch");
      bool shaped = true;
      auto need = [&](const Element& e, const SLieAlgebra& alg, int degree, const char* what) {
        if (e.dim != 0 || !is_homogeneous(alg, e, degree)) {
          fail(at + std::string(what) + " has the wrong shape");
          shaped = false;
        }
      };
      need(l.alpha_n, s, 0, "tower point");
      need(l.defect, t, 0, "defect");
      need(l.gamma, s, 0, "gamma");
      need(l.xi, t, -1, "xi");
      need(l.sigma, s, 0, "sigma");
      need(l.beta1, t, -1, "edge direction");
      if (!shaped) continue;
      if (!(l.alpha_n == alpha_acc)) fail(at + "tower point does not chain");
      if (j == 0 && !(l.defect == c.alpha_prime)) fail(at + "base defect must equal the input");
      if (!l.defect.is_zero() && min_weight(t, l.defect) < j + 1) {
        fail(at + "defect violates the filtration");
      }
      if (!(l.gamma == weight_part(s, l.gamma, j + 1))) {
        fail(at + "gamma is not pure weight " + std::to_string(j + 1));
      }
      if (!(l.xi == weight_part(t, l.xi, j + 1))) {
        fail(at + "xi is not pure weight " + std::to_string(j + 1));
      }
      if (!(l.sigma == weight_part(s, l.sigma, j + 2))) {
        fail(at + "sigma is not pure weight " + std::to_string(j + 2));
      }
      if (!weight_part(s, differential(s, l.gamma), j + 1).is_zero()) {
        fail(at + "gamma is not a graded cocycle");
      }
      Element resid = apply_taylor(u, {l.gamma}) - differential(t, l.xi) - l.defect;
      if (!weight_part(t, resid, j + 1).is_zero()) fail(at + "defect equation fails");
      beta1_acc += l.xi;
      if (!(l.beta1 == beta1_acc)) fail(at + "edge direction does not chain");
      Element curv_mid = curvature(s, l.alpha_n + l.gamma);
      if (!curv_mid.is_zero() && min_weight(s, curv_mid) < j + 2) {
        fail(at + "curvature violates the filtration");
      }
      if (!weight_part(s, curv_mid + differential(s, l.sigma), j + 2).is_zero()) {
        fail(at + "curvature equation fails");
      }
      alpha_acc = l.alpha_n + l.gamma + l.sigma;
    }
    if (!(alpha_acc == c.alpha)) fail("tower does not converge to the certified preimage");
    if (!(rectified_beta1(t, c.edge) == c.preimage_layers.back().beta1)) {
      fail("certificate edge direction does not match the final layer");
    }
    return out;
  }

  if (!c.preimage_layers.empty()) fail("connection certificate carries preimage layers");
  if (!is_mc(s, c.alpha)) fail("certified left endpoint is not Maurer-Cartan");
  if (!is_mc(s, c.alpha_prime)) fail("certified right endpoint is not Maurer-Cartan");
  if (!is_mc(s, c.edge)) fail("certificate edge is not Maurer-Cartan");
  if (!(edge_start(c.edge) == c.alpha)) fail("certificate edge does not start at the left endpoint");
  if (!(edge_end(c.edge) == c.alpha_prime)) {
    fail("certificate edge does not end at the right endpoint");
  }
  if (static_cast<int>(c.connect_layers.size()) != n_cap) {
    fail("connection certificate has the wrong layer count");
    return out;
  }
  for (int j = 0; j < n_cap; ++j) {
    const ConnectLayer& l = c.connect_layers[j];
    const int n = j + 1;
    const std::string at = "layer " + std::to_string(n) + ": ";
    if (l.layer != n) fail(at + "layer index mismatch");
    bool shaped = true;
    auto need = [&](const Element& e, const SLieAlgebra& alg, int degree, const char* what) {
      if (e.dim != 0 || !is_homogeneous(alg, e, degree)) {
        fail(at + std::string(what) + " has the wrong shape");
        shaped = false;
      }
    };
    need(l.alpha_n, s, 0, "base point");
    need(l.beta1, t, -1, "edge direction");
    need(l.rho1, s, -1, "rho1");
    need(l.gamma_t, t, -2, "gamma");
    if (l.rho_edge.dim != 1) {
      fail(at + "layer edge must be a dim-1 element");
      shaped = false;
    }
    if (!shaped) continue;
    if (j == 0 && !(l.alpha_n == c.alpha)) fail(at + "tower must start at the left endpoint");
    if (!is_mc(s, l.rho_edge)) fail(at + "layer edge is not Maurer-Cartan");
    if (!is_rectified(l.rho_edge)) fail(at + "layer edge is not rectified");
    if (!(rectified_beta1(s, l.rho_edge) == l.rho1)) {
      fail(at + "layer edge does not follow rho1");
    }
    if (!(edge_start(l.rho_edge) == l.alpha_n)) fail(at + "layer edge does not chain");
    const Element& next_point =
        (j + 1 < n_cap) ? c.connect_layers[j + 1].alpha_n : c.alpha_prime;
    if (!(edge_end(l.rho_edge) == next_point)) fail(at + "layer edge misses the next point");
    if (!(l.rho1 == weight_part(s, l.rho1, n))) {
      fail(at + "rho1 is not pure weight " + std::to_string(n));
    }
    if (!(l.gamma_t == weight_part(t, l.gamma_t, n))) {
      fail(at + "gamma is not pure weight " + std::to_string(n));
    }
    Element diff_a = c.alpha_prime - l.alpha_n;
    if (!diff_a.is_zero() && min_weight(s, diff_a) < n) {
      fail(at + "endpoint difference violates the filtration");
    }
    if (!weight_part(s, differential(s, l.rho1) - diff_a, n).is_zero()) {
      fail(at + "endpoint equation fails");
    }
    if (!l.beta1.is_zero() && min_weight(t, l.beta1) < n) {
      fail(at + "edge direction violates the filtration");
    }
    Element resid = l.beta1 - apply_taylor(u, {l.rho1}) - differential(t, l.gamma_t);
    if (!weight_part(t, resid, n).is_zero()) fail(at + "edge direction equation fails");
  }
  return out;
}

std::vector<std::string> check_simplicial(const SimplicialVectorSpace& v) {
  std::vector<std::string> out;
  const int levels = v.levels();
  if (levels < 0) {
    out.push_back("a simplicial vector space needs at least level 0");
    return out;
  }
  for (int n = 0; n <= levels; ++n) {
    if (v.dims[n] < 0) out.push_back("negative dimension at level " + std::to_string(n));
  }
  if (static_cast<int>(v.face.size()) != levels + 1) {
    out.push_back("face table must have one entry per level");
  }
  if (static_cast<int>(v.degeneracy.size()) != levels + 1) {
    out.push_back("degeneracy table must have one entry per level");
  }
  if (!out.empty()) return out;

  for (int n = 0; n <= levels; ++n) {
    const int want_faces = (n == 0) ? 0 : n + 1;
    if (static_cast<int>(v.face[n].size()) != want_faces) {
      out.push_back("level " + std::to_string(n) + " must carry " + std::to_string(want_faces) +
                    " face maps");
      continue;
    }
    for (int j = 0; j < want_faces; ++j) {
      const Matrix& m = v.face[n][j];
      if (m.rows() != v.dims[n - 1] || m.cols() != v.dims[n]) {
        out.push_back("face " + std::to_string(j) + " at level " + std::to_string(n) +
                      " has the wrong shape");
      }
    }
    const int want_deg = (n == levels) ? 0 : n + 1;
    if (static_cast<int>(v.degeneracy[n].size()) != want_deg) {
      out.push_back("level " + std::to_string(n) + " must carry " + std::to_string(want_deg) +
                    " degeneracy maps");
      continue;
    }
    for (int j = 0; j < want_deg; ++j) {
      const Matrix& m = v.degeneracy[n][j];
      if (m.rows() != v.dims[n + 1] || m.cols() != v.dims[n]) {
        out.push_back("degeneracy " + std::to_string(j) + " at level " + std::to_string(n) +
                      " has the wrong shape");
      }
    }
  }
  if (!out.empty()) return out;

  for (int n = 2; n <= levels; ++n) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        if (!same_matrix(v.face[n - 1][i].multiply(v.face[n][j]),
                         v.face[n - 1][j - 1].multiply(v.face[n][i]))) {
          out.push_back("face identity fails at level " + std::to_string(n) + " (i=" +
                        std::to_string(i) + ", j=" + std::to_string(j) + ")");
        }
      }
    }
  }
  for (int n = 0; n + 2 <= levels; ++n) {
    for (int i = 0; i <= n; ++i) {
      for (int j = i; j <= n; ++j) {
        if (!same_matrix(v.degeneracy[n + 1][i].multiply(v.degeneracy[n][j]),
                         v.degeneracy[n + 1][j + 1].multiply(v.degeneracy[n][i]))) {
          out.push_back("degeneracy identity fails at level " + std::to_string(n) + " (i=" +
                        std::to_string(i) + ", j=" + std::to_string(j) + ")");
        }
      }
    }
  }
  for (int n = 0; n + 1 <= levels; ++n) {
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= n + 1; ++i) {
        Matrix lhs = v.face[n + 1][i].multiply(v.degeneracy[n][j]);
        Matrix rhs;
        if (i == j || i == j + 1) {
          rhs = identity_matrix(v.dims[n]);
        } else if (i < j) {
          rhs = v.degeneracy[n - 1][j - 1].multiply(v.face[n][i]);
        } else {
          rhs = v.degeneracy[n - 1][j].multiply(v.face[n][i - 1]);
        }
        if (!same_matrix(lhs, rhs)) {
          out.push_back("mixed identity fails at level " + std::to_string(n) + " (i=" +
                        std::to_string(i) + ", j=" + std::to_string(j) + ")");
        }
      }
    }
  }
  return out;
}

MooreHomology moore_homology(const SimplicialVectorSpace& v, int i, int cutoff) {
  if (i < 0) throw InputError("homology degree must be >= 0");
  if (cutoff < i + 1) throw InputError("cutoff must be at least the degree plus one");
  if (cutoff > v.levels()) throw InputError("cutoff exceeds the stored levels");
  auto bad = check_simplicial(v);
  if (!bad.empty()) throw InputError("not a simplicial vector space: " + bad.front());

  CochainComplex c;
  c.d_min = -cutoff;
  c.dims.resize(cutoff + 1);
  for (int n = 0; n <= cutoff; ++n) c.dims[cutoff - n] = v.dims[n];
  c.diff.resize(cutoff);
  for (int k = 0; k < cutoff; ++k) {
    const int n = cutoff - k;
    Matrix m(v.dims[n - 1], v.dims[n]);
    for (int j = 0; j <= n; ++j) {
      const Rational sign((j % 2 == 0) ? 1 : -1);
      for (const auto& [rc, val] : v.face[n][j].entries()) {
        m.add(rc.first, rc.second, val * sign);
      }
    }
    c.diff[k] = std::move(m);
  }
  Cohomology h = cohomology_basis(c, -i);
  MooreHomology out;
  out.dimension = h.dim();
  out.basis = h.reps;
  return out;
}

namespace {

// All strictly increasing vertex lists of the given size inside {0..top},
// in lexicographic order.
std::vector<std::vector<int>> combinations(int top, int size) {
  std::vector<std::vector<int>> out;
  if (size < 1 || size > top + 1) return out;
  std::vector<int> cur(size);
  for (int i = 0; i < size; ++i) cur[i] = i;
  for (;;) {
    out.push_back(cur);
    int k = size - 1;
    while (k >= 0 && cur[k] == top - (size - 1 - k)) --k;
    if (k < 0) break;
    ++cur[k];
    for (int j = k + 1; j < size; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

// Basis of (algebra symbol, simplex face) pairs spanning one total degree of
// the cochain-extended algebra over the n-simplex.
struct PairBasis {
  std::vector<std::pair<int, std::vector<int>>> items;
  std::map<std::pair<int, std::vector<int>>, int> index;

  int size() const { return static_cast<int>(items.size()); }
  void push(int sym, std::vector<int> face) {
    index.emplace(std::make_pair(sym, face), size());
    items.emplace_back(sym, std::move(face));
  }
};

PairBasis pair_basis(const SLieAlgebra& a, int n, int degree) {
  PairBasis b;
  for (int sym = 0; sym < a.symbol_count(); ++sym) {
    const int size = degree - a.symbol(sym).degree + 1;
    for (auto& f : combinations(n, size)) b.push(sym, std::move(f));
  }
  return b;
}

// Matrix of D(v tensor c) = del v tensor c + (-1)^{deg v} v tensor dc between
// pair bases over the n-simplex.
Matrix pair_differential(const SLieAlgebra& a, int n, const PairBasis& from, const PairBasis& to) {
  Matrix m(to.size(), from.size());
  for (int j = 0; j < from.size(); ++j) {
    const auto& [sym, face] = from.items[j];
    for (const auto& [w, cf] : a.differential_entry(sym).comp) {
      auto it = to.index.find({w, face});
      if (it != to.index.end()) m.add(it->second, j, scalar_of(cf));
    }
    ElementaryCochain ec;
    ec.dim = n;
    ec.add(face, Rational(1));
    const Rational sign((a.symbol(sym).degree % 2 == 0) ? 1 : -1);
    for (const auto& [g, cf] : cochain_d(ec).coef) {
      auto it = to.index.find({sym, g});
      if (it != to.index.end()) m.add(it->second, j, cf * sign);
    }
  }
  return m;
}

// Matrix of a simplicial operator acting on the cochain factor of pairs.
template <typename Op>
Matrix pair_operator(int n, const PairBasis& from, const PairBasis& to, Op op) {
  Matrix m(to.size(), from.size());
  for (int j = 0; j < from.size(); ++j) {
    const auto& [sym, face] = from.items[j];
    ElementaryCochain ec;
    ec.dim = n;
    ec.add(face, Rational(1));
    for (const auto& [g, cf] : op(ec).coef) {
      auto it = to.index.find({sym, g});
      if (it != to.index.end()) m.add(it->second, j, cf);
    }
  }
  return m;
}

}  // namespace

SimplicialVectorSpace abelian_mc_simplicial(const SLieAlgebra& a, int levels) {
  if (!a.bracket_table().empty()) {
    throw PreconditionError("homotopy computation requires an abelian algebra");
  }
  if (levels < 0) throw InputError("levels must be >= 0");

  std::vector<PairBasis> bases;
  std::vector<std::vector<Vec>> kernels;
  std::vector<Matrix> kernel_cols;
  std::vector<Echelon> coords;
  bases.reserve(levels + 1);
  kernels.reserve(levels + 1);
  for (int n = 0; n <= levels; ++n) {
    bases.push_back(pair_basis(a, n, 0));
    PairBasis target = pair_basis(a, n, 1);
    kernels.push_back(kernel_basis(pair_differential(a, n, bases[n], target)));
    Matrix k(bases[n].size(), static_cast<int>(kernels[n].size()));
    for (int c = 0; c < static_cast<int>(kernels[n].size()); ++c) {
      for (const auto& [r, v] : kernels[n][c]) k.set(r, c, v);
    }
    coords.emplace_back(k);
    kernel_cols.push_back(std::move(k));
  }

  SimplicialVectorSpace v;
  v.dims.resize(levels + 1);
  v.face.resize(levels + 1);
  v.degeneracy.resize(levels + 1);
  for (int n = 0; n <= levels; ++n) v.dims[n] = static_cast<int>(kernels[n].size());

  auto in_coordinates = [&](int level, const Vec& ambient) {
    auto sol = coords[level].solve(ambient);
    if (!sol) {
      throw std::logic_error("simplicial operator left the cocycle space at level " +
                             std::to_string(level));
    }
    return *sol;
  };

  for (int n = 1; n <= levels; ++n) {
    for (int j = 0; j <= n; ++j) {
      Matrix amb = pair_operator(n, bases[n], bases[n - 1],
                                 [j](const ElementaryCochain& ec) { return cochain_face(ec, j); });
      Matrix fk(v.dims[n - 1], v.dims[n]);
      for (int c = 0; c < v.dims[n]; ++c) {
        for (const auto& [r, val] : in_coordinates(n - 1, amb.apply(kernels[n][c]))) {
          fk.set(r, c, val);
        }
      }
      v.face[n].push_back(std::move(fk));
    }
  }
  for (int n = 0; n < levels; ++n) {
    for (int j = 0; j <= n; ++j) {
      Matrix amb =
          pair_operator(n, bases[n], bases[n + 1],
                        [j](const ElementaryCochain& ec) { return cochain_degeneracy(ec, j); });
      Matrix sk(v.dims[n + 1], v.dims[n]);
      for (int c = 0; c < v.dims[n]; ++c) {
        for (const auto& [r, val] : in_coordinates(n + 1, amb.apply(kernels[n][c]))) {
          sk.set(r, c, val);
        }
      }
      v.degeneracy[n].push_back(std::move(sk));
    }
  }
  return v;
}

int abelian_homotopy(const SLieAlgebra& a, int i) {
  if (!a.bracket_table().empty()) {
    throw PreconditionError("homotopy computation requires an abelian algebra");
  }
  if (i < 0) throw InputError("homotopy degree must be >= 0");
  if (a.symbol_count() == 0) return 0;

  int lo = a.symbol(0).degree;
  int hi = lo;
  for (int sym = 1; sym < a.symbol_count(); ++sym) {
    lo = std::min(lo, a.symbol(sym).degree);
    hi = std::max(hi, a.symbol(sym).degree);
  }
  std::vector<std::vector<int>> slots(hi - lo + 1);
  std::vector<int> pos(a.symbol_count());
  for (int sym = 0; sym < a.symbol_count(); ++sym) {
    auto& slot = slots[a.symbol(sym).degree - lo];
    pos[sym] = static_cast<int>(slot.size());
    slot.push_back(sym);
  }
  CochainComplex c;
  c.d_min = lo;
  c.dims.resize(slots.size());
  for (size_t k = 0; k < slots.size(); ++k) c.dims[k] = static_cast<int>(slots[k].size());
  c.diff.resize(slots.size() - 1);
  for (size_t k = 0; k + 1 < slots.size(); ++k) {
    Matrix m(c.dims[k + 1], c.dims[k]);
    for (int j = 0; j < c.dims[k]; ++j) {
      for (const auto& [w, cf] : a.differential_entry(slots[k][j]).comp) {
        m.add(pos[w], j, scalar_of(cf));
      }
    }
    c.diff[k] = std::move(m);
  }
  return cohomology_basis(c, -i).dim();
}

}  // namespace lmc
