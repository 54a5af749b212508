#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "lmc/gm.hpp"
#include "lmc/mc.hpp"

using namespace lmc;

namespace {

Element el(int sym) { return basis_element(sym); }
Element el(int sym, const Rational& c) { return scaled_basis_element(sym, c); }

Element const_dir(const Element& c) {
  return element_tensor(c, PolyForm::scalar(1, Rational(1)));
}

bool has_failure(const QisoReport& r, int weight, int degree) {
  return std::any_of(r.failures.begin(), r.failures.end(), [&](const QisoFailure& f) {
    return f.weight == weight && f.degree == degree;
  });
}

}  // namespace

TEST_CASE("filtered quasi-iso check") {
  CHECK(check_filtered_qiso(identity_morphism(fixtures::heis())).pass());
  CHECK(check_filtered_qiso(fixtures::proj_morphism()).pass());
  CHECK(check_filtered_qiso(fixtures::quad_morphism()).pass());

  QisoReport empty_report = check_filtered_qiso(fixtures::empty_to_line());
  CHECK(!empty_report.pass());
  CHECK(has_failure(empty_report, 1, 0));

  QisoReport kill_report = check_filtered_qiso(fixtures::line_to_point());
  CHECK(!kill_report.pass());
  CHECK(has_failure(kill_report, 1, 0));
}

TEST_CASE("preimage through the identity is exact") {
  SLieAlgebra a = fixtures::heis();
  InftyMorphism id = identity_morphism(a);
  Element alpha_tilde = el(0) + el(3, Rational(1, 2));

  TransferResult r = mc_preimage(id, alpha_tilde);
  REQUIRE(r.ok());
  const TransferCertificate& c = *r.certificate;
  CHECK(c.kind == "preimage");
  CHECK(c.alpha == alpha_tilde);
  CHECK(c.alpha_prime == alpha_tilde);
  CHECK(is_mc(a, c.alpha));
  CHECK(edge_start(c.edge) == alpha_tilde);
  CHECK(edge_end(c.edge) == pushforward(id, c.alpha));
  CHECK(is_mc(a, c.edge));
  CHECK(validate_certificate(id, c).empty());
  CHECK(!r.refutation.has_value());
}

TEST_CASE("preimage through the strict surjection") {
  InftyMorphism u = fixtures::proj_morphism();
  Element alpha_tilde = el(0) + el(3, Rational(1, 2));

  TransferResult r = mc_preimage(u, alpha_tilde);
  REQUIRE(r.ok());
  const TransferCertificate& c = *r.certificate;
  CHECK(is_mc(u.source(), c.alpha));
  CHECK(curvature(u.source(), c.alpha).is_zero());
  CHECK(edge_start(c.edge) == alpha_tilde);
  CHECK(edge_end(c.edge) == pushforward(u, c.alpha));
  CHECK(validate_certificate(u, c).empty());
}

TEST_CASE("preimage through the quadratic quasi-iso") {
  InftyMorphism u = fixtures::quad_morphism();
  Element alpha = el(0) + el(2, Rational(1, 3)) - el(3, Rational(1, 2));
  Element alpha_tilde = pushforward(u, alpha);

  TransferResult r = mc_preimage(u, alpha_tilde);
  REQUIRE(r.ok());
  CHECK(is_mc(u.source(), r.certificate->alpha));
  CHECK(edge_start(r.certificate->edge) == alpha_tilde);
  CHECK(edge_end(r.certificate->edge) == pushforward(u, r.certificate->alpha));
  CHECK(validate_certificate(u, *r.certificate).empty());
}

TEST_CASE("connecting edges transfer backwards") {
  SLieAlgebra a = fixtures::heis();
  InftyMorphism id = identity_morphism(a);
  Element alpha_prime = el(0) + el(3, Rational(1, 2));
  Element beta_tilde = integrate_edge(a, Element(0), const_dir(el(1)));
  REQUIRE(edge_end(beta_tilde) == alpha_prime);

  TransferResult r = transfer_connect(id, Element(0), alpha_prime, beta_tilde);
  REQUIRE(r.ok());
  const TransferCertificate& c = *r.certificate;
  CHECK(c.kind == "connect");
  CHECK(c.alpha == Element(0));
  CHECK(c.alpha_prime == alpha_prime);
  CHECK(edge_start(c.edge) == Element(0));
  CHECK(edge_end(c.edge) == alpha_prime);
  CHECK(is_mc(a, c.edge));
  CHECK(validate_certificate(id, c).empty());
}

TEST_CASE("connecting through the quadratic quasi-iso") {
  InftyMorphism u = fixtures::quad_morphism();
  const SLieAlgebra& s = u.source();
  Element alpha = el(0) + el(2, Rational(1, 3)) - el(3, Rational(1, 2));
  Element e = integrate_edge(s, alpha, const_dir(el(1, Rational(2))));
  Element alpha_prime = edge_end(e);
  Element beta_tilde = pushforward(u, e);
  CHECK(is_mc(u.target(), beta_tilde));
  CHECK(edge_start(beta_tilde) == pushforward(u, alpha));
  CHECK(edge_end(beta_tilde) == pushforward(u, alpha_prime));

  TransferResult r = transfer_connect(u, alpha, alpha_prime, beta_tilde);
  REQUIRE(r.ok());
  CHECK(edge_start(r.certificate->edge) == alpha);
  CHECK(edge_end(r.certificate->edge) == alpha_prime);
  CHECK(validate_certificate(u, *r.certificate).empty());
}

TEST_CASE("refutations carry the obstructing class") {
  // Nothing in the empty source hits the weight-1 target class.
  TransferResult r1 = mc_preimage(fixtures::empty_to_line(), el(0));
  CHECK(!r1.ok());
  REQUIRE(r1.refutation.has_value());
  CHECK(r1.refutation->weight == 1);
  CHECK(r1.refutation->degree == 0);
  CHECK(r1.refutation->in_target);
  CHECK(r1.refutation->cls == el(0));
  CHECK(r1.refutation->detail.find("not hit") != std::string::npos);

  // The two source points of the dying class cannot be connected over the
  // one-point target.
  TransferResult r2 =
      transfer_connect(fixtures::line_to_point(), Element(0), el(0), Element(1));
  CHECK(!r2.ok());
  REQUIRE(r2.refutation.has_value());
  CHECK(r2.refutation->weight == 1);
  CHECK(r2.refutation->degree == 0);
  CHECK(!r2.refutation->in_target);
  CHECK(r2.refutation->cls == el(0));
}

TEST_CASE("transfer guards") {
  InftyMorphism id = identity_morphism(fixtures::heis());
  CHECK_THROWS_AS(mc_preimage(id, el(0)), PreconditionError);  // not Maurer-Cartan

  Element alpha_prime = el(0) + el(3, Rational(1, 2));
  Element beta = integrate_edge(fixtures::heis(), Element(0), const_dir(el(1)));
  // Wrong endpoints: the edge must connect the two pushforwards.
  CHECK_THROWS_AS(transfer_connect(id, alpha_prime, Element(0), beta), InputError);
  // Non-MC source points are rejected first.
  CHECK_THROWS_AS(transfer_connect(id, el(0), Element(0), beta), PreconditionError);

  // Mismatched truncations are rejected at morphism construction.
  CHECK_THROWS_AS(InftyMorphism(fixtures::line_algebra(), fixtures::heis()), InputError);
}

TEST_CASE("certificate validation re-checks stored facts") {
  InftyMorphism u = fixtures::proj_morphism();
  Element alpha_tilde = el(0) + el(3, Rational(1, 2));
  TransferCertificate c = *mc_preimage(u, alpha_tilde).certificate;
  CHECK(validate_certificate(u, c).empty());

  TransferCertificate tampered = c;
  tampered.alpha += el(3);  // breaks both the layer equations and the edge
  CHECK(!validate_certificate(u, tampered).empty());

  tampered = c;
  REQUIRE(!tampered.preimage_layers.empty());
  tampered.preimage_layers[0].gamma += el(0, Rational(1, 7));
  CHECK(!validate_certificate(u, tampered).empty());

  tampered = c;
  tampered.kind = "unknown";
  CHECK(!validate_certificate(u, tampered).empty());

  // A certificate of the wrong kind for the data is already inconsistent.
  tampered = c;
  tampered.kind = "connect";
  CHECK(!validate_certificate(u, tampered).empty());
}

namespace {

SLieAlgebra one_symbol(int degree) {
  SLieAlgebra a(1, 2);
  a.add_symbol("e", degree, 1);
  return a;
}

}  // namespace

TEST_CASE("abelian realization has the expected level dimensions") {
  // A single degree-0 symbol: constants at every level.
  SimplicialVectorSpace v0 = abelian_mc_simplicial(one_symbol(0), 3);
  CHECK(check_simplicial(v0).empty());
  CHECK(v0.dims == std::vector<int>{1, 1, 1, 1});

  // A single degree -1 symbol: exact 1-cochains, dimensions 0,1,2,3.
  SimplicialVectorSpace v1 = abelian_mc_simplicial(one_symbol(-1), 3);
  CHECK(check_simplicial(v1).empty());
  CHECK(v1.dims == std::vector<int>{0, 1, 2, 3});

  // A single degree -2 symbol: 2-cocycles, dimensions 0,0,1,3.
  SimplicialVectorSpace v2 = abelian_mc_simplicial(one_symbol(-2), 3);
  CHECK(check_simplicial(v2).empty());
  CHECK(v2.dims == std::vector<int>{0, 0, 1, 3});

  CHECK_THROWS_AS(abelian_mc_simplicial(fixtures::heis(), 2), PreconditionError);
}

TEST_CASE("moore homology matches the homotopy groups by hand") {
  CHECK(abelian_homotopy(one_symbol(0), 0) == 1);
  CHECK(abelian_homotopy(one_symbol(0), 1) == 0);
  CHECK(abelian_homotopy(one_symbol(0), 2) == 0);

  CHECK(abelian_homotopy(one_symbol(-1), 0) == 0);
  CHECK(abelian_homotopy(one_symbol(-1), 1) == 1);
  CHECK(abelian_homotopy(one_symbol(-1), 2) == 0);

  CHECK(abelian_homotopy(one_symbol(-2), 2) == 1);
  CHECK(abelian_homotopy(one_symbol(-2), 1) == 0);

  // Two-term acyclic complex: everything vanishes.
  SLieAlgebra pair(1, 2);
  int xi = pair.add_symbol("xi", -1, 1);
  int x = pair.add_symbol("x", 0, 1);
  pair.set_differential(xi, basis_element(x));
  CHECK(abelian_homotopy(pair, 0) == 0);
  CHECK(abelian_homotopy(pair, 1) == 0);

  // Agreement with the Moore complex computed on more levels than needed.
  SimplicialVectorSpace v = abelian_mc_simplicial(one_symbol(-1), 3);
  MooreHomology h1 = moore_homology(v, 1, 3);
  CHECK(h1.dimension == 1);
  CHECK(h1.basis.size() == 1);
  MooreHomology h0 = moore_homology(v, 0, 2);
  CHECK(h0.dimension == 0);
  CHECK_THROWS_AS(moore_homology(v, 3, 3), InputError);  // cutoff must exceed i
}

TEST_CASE("simplicial identity checker") {
  SimplicialVectorSpace v = abelian_mc_simplicial(one_symbol(0), 2);
  CHECK(check_simplicial(v).empty());
  v.face[1][0].set(0, 0, Rational(7));  // break a face map
  CHECK(!check_simplicial(v).empty());
}
