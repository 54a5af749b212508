#include "doctest.h"
#include "fixtures.hpp"
#include "lmc/gm.hpp"
#include "lmc/io.hpp"
#include "lmc/mc.hpp"

using namespace lmc;

namespace {

Element el(int sym) { return basis_element(sym); }
Element el(int sym, const Rational& c) { return scaled_basis_element(sym, c); }

Element const_dir(const Element& c) {
  return element_tensor(c, PolyForm::scalar(1, Rational(1)));
}

}  // namespace

TEST_CASE("document parsing") {
  CHECK_THROWS_AS(parse_document("not json"), InputError);
  CHECK_THROWS_AS(parse_document("[1,2]"), InputError);  // documents are objects
  CHECK_THROWS_AS(load_document("/nonexistent/file.json"), InputError);
  Json doc = parse_document("{\"a\": 1}");
  CHECK(doc["a"] == 1);
  // Serialization is stable byte for byte.
  CHECK(dump_document(doc) == dump_document(doc));
  CHECK(dump_document(doc).back() == '\n');
}

TEST_CASE("algebra round trip") {
  SLieAlgebra a = fixtures::heis();
  Json doc = algebra_to_json(a);
  CHECK(doc["schema_version"] == 1);
  CHECK(document_kind(doc) == "algebra");
  SLieAlgebra back = algebra_from_json(doc);
  CHECK(back == a);
  CHECK(dump_document(algebra_to_json(back)) == dump_document(doc));

  for (const SLieAlgebra& f :
       {fixtures::abelian2(), fixtures::cubic3(), fixtures::glam(),
        fixtures::abelian4(), fixtures::quad_side(), fixtures::point_algebra()}) {
    CHECK(algebra_from_json(algebra_to_json(f)) == f);
  }

  // Nested emission omits the version stamp; parsing enforces the rule both ways.
  Json nested = algebra_to_json(a, false);
  CHECK(!nested.contains("schema_version"));
  CHECK(algebra_from_json(nested, false) == a);
  CHECK_THROWS_AS(algebra_from_json(nested, true), InputError);
  CHECK_THROWS_AS(algebra_from_json(doc, false), InputError);
}

TEST_CASE("algebra document rejections") {
  Json good = algebra_to_json(fixtures::heis());

  Json bad = good;
  bad["surprise"] = 1;
  CHECK_THROWS_AS(algebra_from_json(bad), InputError);  // unknown key

  bad = good;
  bad["schema_version"] = 2;
  CHECK_THROWS_AS(algebra_from_json(bad), InputError);

  bad = good;
  bad["basis"][0]["weight"] = 9;  // outside 1..N
  CHECK_THROWS_AS(algebra_from_json(bad), InputError);

  bad = good;
  bad["differential"]["xi"][0]["coef"] = "1/0";
  CHECK_THROWS_AS(algebra_from_json(bad), InputError);

  bad = good;
  bad["differential"]["ghost"] = Json::array();
  CHECK_THROWS_AS(algebra_from_json(bad), InputError);  // unknown symbol

  bad = good;
  bad["brackets"][0]["inputs"] = Json::array({"xi", "x"});  // unsorted tuple
  CHECK_THROWS_AS(algebra_from_json(bad), InputError);
}

TEST_CASE("morphism round trip") {
  InftyMorphism u = fixtures::quad_morphism();
  Json doc = morphism_to_json(u);
  CHECK(document_kind(doc) == "morphism");
  InftyMorphism back = morphism_from_json(doc);
  CHECK(back == u);
  CHECK(dump_document(morphism_to_json(back)) == dump_document(doc));

  // Sides can name loaded algebras instead of inlining them.
  SLieAlgebra h = fixtures::heis();
  Json named = morphism_to_json(identity_morphism(h));
  named["source"] = "heis";
  AlgebraLookup lookup = [&](const std::string& name) -> const SLieAlgebra* {
    return name == "heis" ? &h : nullptr;
  };
  InftyMorphism byname = morphism_from_json(named, lookup);
  CHECK(byname == identity_morphism(h));
  named["source"] = "missing";
  CHECK_THROWS_AS(morphism_from_json(named, lookup), InputError);

  // Taylor entries over unknown symbols or unsorted tuples are rejected.
  Json bad = doc;
  bad["taylor"][0]["inputs"] = Json::array({"y", "x"});
  CHECK_THROWS_AS(morphism_from_json(bad), InputError);
}

TEST_CASE("element round trip") {
  SLieAlgebra a = fixtures::heis();
  Element e = el(0) + el(3, Rational(-7, 4));
  Json doc = element_to_json(a, e);
  CHECK(element_from_json(a, doc) == e);
  CHECK(element_from_json(a, doc, 0) == e);
  CHECK_THROWS_AS(element_from_json(a, doc, 1), InputError);  // dimension mismatch

  // A full edge: polynomial and dt parts survive exactly.
  Element edge = integrate_edge(a, Element(0), const_dir(el(1)));
  Json edge_doc = element_to_json(a, edge);
  CHECK(element_from_json(a, edge_doc) == edge);
  CHECK(dump_document(element_to_json(a, element_from_json(a, edge_doc))) ==
        dump_document(edge_doc));

  CHECK(element_from_json(a, element_to_json(a, Element(0))) == Element(0));

  Json bad = edge_doc;
  bad["terms"][0]["basis"] = "ghost";
  CHECK_THROWS_AS(element_from_json(a, bad), InputError);

  bad = edge_doc;
  bad["terms"][0].erase("t");
  CHECK_THROWS_AS(element_from_json(a, bad), InputError);

  bad = edge_doc;
  bad["terms"][0]["coef"] = "nonsense";
  CHECK_THROWS_AS(element_from_json(a, bad), InputError);
}

TEST_CASE("simplex documents certify themselves") {
  SLieAlgebra a = fixtures::heis();
  Element edge = integrate_edge(a, Element(0), const_dir(el(1)));
  Json doc = simplex_to_json(a, "heis", edge);
  CHECK(document_kind(doc) == "simplex");
  CHECK(doc["certified"] == true);
  CHECK(simplex_algebra_name(doc) == "heis");
  CHECK(simplex_value_from_json(a, doc) == edge);

  // Certification is re-derived from the value, never copied in.
  Element broken = edge + element_tensor(el(0), PolyForm::scalar(1, Rational(1)));
  Json broken_doc = simplex_to_json(a, "heis", broken);
  CHECK(!broken_doc.contains("certified"));

  Json forged = broken_doc;
  forged["certified"] = true;  // parsing tolerates the flag but the value rules
  CHECK(simplex_value_from_json(a, forged) == broken);
}

TEST_CASE("certificate round trip re-validates independently") {
  InftyMorphism u = fixtures::proj_morphism();
  Element alpha_tilde = el(0) + el(3, Rational(1, 2));
  TransferCertificate c = *mc_preimage(u, alpha_tilde).certificate;

  Json doc = certificate_to_json(u, c);
  CHECK(document_kind(doc) == "certificate");
  CertificateDocument parsed = certificate_from_json(doc);
  CHECK(parsed.morphism == u);
  CHECK(validate_certificate(parsed.morphism, parsed.certificate).empty());
  CHECK(dump_document(certificate_to_json(parsed.morphism, parsed.certificate)) ==
        dump_document(doc));

  // Tampering with the serialized witness breaks re-validation.
  Json forged = doc;
  forged["alpha"]["terms"][0]["coef"] = "2";
  CertificateDocument reparsed = certificate_from_json(forged);
  CHECK(!validate_certificate(reparsed.morphism, reparsed.certificate).empty());

  // Connect certificates round trip the same way.
  SLieAlgebra h = fixtures::heis();
  InftyMorphism id = identity_morphism(h);
  Element beta = integrate_edge(h, Element(0), const_dir(el(1)));
  TransferCertificate cc =
      *transfer_connect(id, Element(0), edge_end(beta), beta).certificate;
  Json cdoc = certificate_to_json(id, cc);
  CertificateDocument cparsed = certificate_from_json(cdoc);
  CHECK(validate_certificate(cparsed.morphism, cparsed.certificate).empty());
  CHECK(dump_document(certificate_to_json(cparsed.morphism, cparsed.certificate)) ==
        dump_document(cdoc));
}

TEST_CASE("refutation documents") {
  InftyMorphism u = fixtures::empty_to_line();
  TransferResult r = mc_preimage(u, el(0));
  REQUIRE(r.refutation.has_value());
  Json doc = refutation_to_json(u, *r.refutation);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["result"] == "refuted");
  CHECK(doc["weight"] == 1);
  CHECK(doc["degree"] == 0);
  CHECK(doc["in"] == "target");
  CHECK(doc["class"]["terms"][0]["basis"] == "x");
  CHECK(!doc["detail"].get<std::string>().empty());
}

TEST_CASE("document kind detection") {
  CHECK_THROWS_AS(document_kind(parse_document("{}")), InputError);
  CHECK_THROWS_AS(document_kind(parse_document("{\"schema_version\": 1}")), InputError);
}
