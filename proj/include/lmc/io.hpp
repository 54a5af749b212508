#pragma once

#include <functional>
#include <string>

#include "json.hpp"

#include "lmc/gm.hpp"
#include "lmc/mc.hpp"
#include "lmc/slie.hpp"

namespace lmc {

// Order-preserving JSON: emission order is fixed by the writers below, so
// identical values serialize to identical bytes.
using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Documents on disk. Every top-level document carries "schema_version": 1;
// nested objects (inline algebras inside morphisms, morphisms inside
// certificates) do not. Unknown keys are rejected everywhere.
// ---------------------------------------------------------------------------

Json parse_document(const std::string& text);
Json load_document(const std::string& path);
// Canonical text form: two-space indent, insertion-ordered keys, trailing
// newline. verify-grade equality is equality of these bytes.
std::string dump_document(const Json& doc);
void write_document(const Json& doc, const std::string& path);

// "algebra" | "morphism" | "simplex" | "certificate", decided by shape.
std::string document_kind(const Json& doc);

// ---------------------------------------------------------------------------
// Algebras: { "truncation", "max_arity", "basis": [{"name","degree","weight"}],
// "differential": {name: [term]}, "brackets": [{"inputs","output"}] }.
// Bracket inputs must be sorted by basis position. No validation beyond
// shape: run check_slie on the result to certify it.
// ---------------------------------------------------------------------------

SLieAlgebra algebra_from_json(const Json& doc, bool top_level = true);
Json algebra_to_json(const SLieAlgebra& a, bool top_level = true);

// ---------------------------------------------------------------------------
// Morphisms: { "source", "target", "taylor": [{"inputs","output"}] }.
// source/target are inline algebra objects, or names resolved by the lookup
// (loaded-workspace use); emission always inlines.
// ---------------------------------------------------------------------------

using AlgebraLookup = std::function<const SLieAlgebra*(const std::string&)>;

InftyMorphism morphism_from_json(const Json& doc, const AlgebraLookup& lookup = {},
                                 bool top_level = true);
Json morphism_to_json(const InftyMorphism& u, bool top_level = true);

// ---------------------------------------------------------------------------
// Elements: { "dim": d, "terms": [{"coef","basis","t","dt"}] }. Terms of
// dim-0 elements omit "t"/"dt"; terms of extended elements require them
// ("t" = exponents of t_1..t_d, "dt" = strictly increasing 1-based factor
// list). "dim" may be omitted when the context fixes it (expected_dim >= 0);
// a present "dim" must then agree.
// ---------------------------------------------------------------------------

Element element_from_json(const SLieAlgebra& a, const Json& doc, int expected_dim = -1);
Json element_to_json(const SLieAlgebra& a, const Element& e);

// ---------------------------------------------------------------------------
// Simplex documents: { "algebra": name, "dim", "terms", "certified" }. The
// algebra is referenced by workspace name; "certified": true is emitted only
// after an independent is_mc pass here, and is never trusted on load.
// ---------------------------------------------------------------------------

std::string simplex_algebra_name(const Json& doc);
Element simplex_value_from_json(const SLieAlgebra& a, const Json& doc);
Json simplex_to_json(const SLieAlgebra& a, const std::string& algebra_name, const Element& value);

// ---------------------------------------------------------------------------
// Transfer certificates: self-contained — the morphism is embedded inline, so
// a certificate re-validates from the one file alone.
// ---------------------------------------------------------------------------

struct CertificateDocument {
  InftyMorphism morphism;
  TransferCertificate certificate;
};

CertificateDocument certificate_from_json(const Json& doc);
Json certificate_to_json(const InftyMorphism& u, const TransferCertificate& c);

// Failure report for an unsolvable transfer layer; the class is serialized
// over the side it lives in.
Json refutation_to_json(const InftyMorphism& u, const Refutation& r);

}  // namespace lmc
