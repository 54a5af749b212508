#include "lmc/io.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

namespace lmc {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw InputError(msg); }

void check_keys(const Json& obj, const std::string& what,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) bad(what + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) bad("unknown key \"" + item.key() + "\" in " + what);
  }
}

const Json& require_key(const Json& obj, const char* key, const std::string& what) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(what + " is missing \"" + key + "\"");
  return *it;
}

int require_int(const Json& obj, const char* key, const std::string& what) {
  const Json& v = require_key(obj, key, what);
  if (!v.is_number_integer()) bad("\"" + std::string(key) + "\" in " + what + " must be an integer");
  return v.get<int>();
}

std::string require_string(const Json& obj, const char* key, const std::string& what) {
  const Json& v = require_key(obj, key, what);
  if (!v.is_string()) bad("\"" + std::string(key) + "\" in " + what + " must be a string");
  return v.get<std::string>();
}

const Json& require_array(const Json& obj, const char* key, const std::string& what) {
  const Json& v = require_key(obj, key, what);
  if (!v.is_array()) bad("\"" + std::string(key) + "\" in " + what + " must be an array");
  return v;
}

void require_schema(const Json& doc, const std::string& what) {
  int v = require_int(doc, "schema_version", what);
  if (v != 1) bad(what + " has unsupported schema_version " + std::to_string(v));
}

Rational coef_from_json(const Json& term, const std::string& what) {
  std::string s = require_string(term, "coef", what);
  auto r = rational_from_string(s);
  if (!r) bad("invalid rational \"" + s + "\" in " + what);
  return *r;
}

int symbol_from_json(const SLieAlgebra& a, const Json& obj, const char* key,
                     const std::string& what) {
  std::string name = require_string(obj, key, what);
  auto idx = a.find_symbol(name);
  if (!idx) bad("unknown basis symbol \"" + name + "\" in " + what);
  return *idx;
}

std::vector<int> int_list_from_json(const Json& v, const std::string& what) {
  if (!v.is_array()) bad(what + " must be an array of integers");
  std::vector<int> out;
  for (const Json& x : v) {
    if (!x.is_number_integer()) bad(what + " must contain only integers");
    out.push_back(x.get<int>());
  }
  return out;
}

// One serialized term list -> extended element of the given dimension.
Element terms_from_json(const SLieAlgebra& a, const Json& arr, int dim, const std::string& what) {
  if (!arr.is_array()) bad(what + " must be an array of terms");
  Element out(dim);
  int pos = 0;
  for (const Json& term : arr) {
    std::string at = what + ", term " + std::to_string(pos++);
    check_keys(term, at, {"coef", "basis", "t", "dt"});
    Rational c = coef_from_json(term, at);
    int sym = symbol_from_json(a, term, "basis", at);
    FormMonomial mono = FormMonomial::one(dim);
    if (dim == 0) {
      for (const char* k : {"t", "dt"}) {
        auto it = term.find(k);
        if (it != term.end() && !(it->is_array() && it->empty()))
          bad("\"" + std::string(k) + "\" must be absent or empty for dim-0 " + at);
      }
    } else {
      mono.expo = int_list_from_json(require_key(term, "t", at), "\"t\" in " + at);
      if (static_cast<int>(mono.expo.size()) != dim)
        bad("\"t\" in " + at + " must list exactly " + std::to_string(dim) + " exponents");
      for (int e : mono.expo)
        if (e < 0) bad("negative exponent in " + at);
      mono.dts = int_list_from_json(require_key(term, "dt", at), "\"dt\" in " + at);
      for (std::size_t i = 0; i < mono.dts.size(); ++i) {
        if (mono.dts[i] < 1 || mono.dts[i] > dim) bad("\"dt\" index out of range in " + at);
        if (i > 0 && mono.dts[i] <= mono.dts[i - 1])
          bad("\"dt\" must be strictly increasing in " + at);
      }
    }
    out.add(sym, PolyForm::term(dim, mono, c));
  }
  return out;
}

Json terms_to_json(const SLieAlgebra& a, const Element& e) {
  Json arr = Json::array();
  for (const auto& [sym, form] : e.comp) {
    for (const auto& [mono, c] : form.terms()) {
      Json term;
      term["coef"] = rational_to_string(c);
      term["basis"] = a.symbol(sym).name;
      if (e.dim >= 1) {
        term["t"] = mono.expo;
        term["dt"] = mono.dts;
      }
      arr.push_back(std::move(term));
    }
  }
  return arr;
}

// Shared body for taylor tables and bracket tables: a list of
// {"inputs": [names], "output": [terms]} rows keyed by sorted input tuples.
std::vector<int> inputs_from_json(const SLieAlgebra& a, const Json& row, const std::string& at) {
  const Json& names = require_array(row, "inputs", at);
  std::vector<int> idx;
  for (const Json& n : names) {
    if (!n.is_string()) bad("\"inputs\" in " + at + " must contain symbol names");
    auto i = a.find_symbol(n.get<std::string>());
    if (!i) bad("unknown basis symbol \"" + n.get<std::string>() + "\" in " + at);
    idx.push_back(*i);
  }
  if (!std::is_sorted(idx.begin(), idx.end()))
    bad("\"inputs\" in " + at + " must be sorted by basis position");
  return idx;
}

}  // namespace

Json parse_document(const std::string& text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) bad("invalid JSON document");
  if (!doc.is_object()) bad("document must be a JSON object");
  return doc;
}

Json load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot read \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

std::string dump_document(const Json& doc) { return doc.dump(2) + "\n"; }

void write_document(const Json& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) bad("cannot write \"" + path + "\"");
  out << dump_document(doc);
  if (!out) bad("cannot write \"" + path + "\"");
}

std::string document_kind(const Json& doc) {
  if (!doc.is_object()) bad("a document must be a JSON object");
  if (doc.contains("truncation") && doc.contains("basis")) return "algebra";
  if (doc.contains("source") && doc.contains("target")) return "morphism";
  if (doc.contains("kind") && doc.contains("layers")) return "certificate";
  if (doc.contains("algebra") && doc.contains("terms")) return "simplex";
  bad("unrecognized document shape");
}

SLieAlgebra algebra_from_json(const Json& doc, bool top_level) {
  std::string what = top_level ? "algebra document" : "algebra object";
  if (top_level) {
    check_keys(doc, what,
               {"schema_version", "truncation", "max_arity", "basis", "differential", "brackets"});
    require_schema(doc, what);
  } else {
    check_keys(doc, what, {"truncation", "max_arity", "basis", "differential", "brackets"});
  }
  int n = require_int(doc, "truncation", what);
  int arity = require_int(doc, "max_arity", what);
  SLieAlgebra a(n, arity);

  const Json& basis = require_array(doc, "basis", what);
  int pos = 0;
  for (const Json& sym : basis) {
    std::string at = what + ", basis entry " + std::to_string(pos++);
    check_keys(sym, at, {"name", "degree", "weight"});
    a.add_symbol(require_string(sym, "name", at), require_int(sym, "degree", at),
                 require_int(sym, "weight", at));
  }

  if (auto it = doc.find("differential"); it != doc.end()) {
    if (!it->is_object()) bad("\"differential\" in " + what + " must be an object");
    for (const auto& item : it->items()) {
      std::string at = what + ", differential of \"" + item.key() + "\"";
      auto idx = a.find_symbol(item.key());
      if (!idx) bad("unknown basis symbol \"" + item.key() + "\" in " + what + " differential");
      a.set_differential(*idx, terms_from_json(a, item.value(), 0, at));
    }
  }

  if (auto it = doc.find("brackets"); it != doc.end()) {
    if (!it->is_array()) bad("\"brackets\" in " + what + " must be an array");
    int row = 0;
    for (const Json& br : *it) {
      std::string at = what + ", bracket " + std::to_string(row++);
      check_keys(br, at, {"inputs", "output"});
      std::vector<int> inputs = inputs_from_json(a, br, at);
      a.set_bracket(inputs, terms_from_json(a, require_array(br, "output", at), 0, at));
    }
  }
  return a;
}

Json algebra_to_json(const SLieAlgebra& a, bool top_level) {
  Json doc;
  if (top_level) doc["schema_version"] = 1;
  doc["truncation"] = a.truncation();
  doc["max_arity"] = a.max_arity();
  Json basis = Json::array();
  for (int i = 0; i < a.symbol_count(); ++i) {
    const BasisSymbol& s = a.symbol(i);
    basis.push_back({{"name", s.name}, {"degree", s.degree}, {"weight", s.weight}});
  }
  doc["basis"] = std::move(basis);
  Json diff = Json::object();
  for (int i = 0; i < a.symbol_count(); ++i) {
    const Element& v = a.differential_entry(i);
    if (!v.is_zero()) diff[a.symbol(i).name] = terms_to_json(a, v);
  }
  doc["differential"] = std::move(diff);
  Json brackets = Json::array();
  for (const auto& [inputs, value] : a.bracket_table()) {
    if (value.is_zero()) continue;
    Json names = Json::array();
    for (int i : inputs) names.push_back(a.symbol(i).name);
    brackets.push_back({{"inputs", std::move(names)}, {"output", terms_to_json(a, value)}});
  }
  doc["brackets"] = std::move(brackets);
  return doc;
}

InftyMorphism morphism_from_json(const Json& doc, const AlgebraLookup& lookup, bool top_level) {
  std::string what = top_level ? "morphism document" : "morphism object";
  if (top_level) {
    check_keys(doc, what, {"schema_version", "source", "target", "taylor"});
    require_schema(doc, what);
  } else {
    check_keys(doc, what, {"source", "target", "taylor"});
  }
  auto side = [&](const char* key) -> SLieAlgebra {
    const Json& v = require_key(doc, key, what);
    if (v.is_string()) {
      const SLieAlgebra* found = lookup ? lookup(v.get<std::string>()) : nullptr;
      if (!found)
        bad("\"" + std::string(key) + "\" in " + what + " names an algebra that is not loaded: \"" +
            v.get<std::string>() + "\"");
      return *found;
    }
    return algebra_from_json(v, false);
  };
  InftyMorphism u(side("source"), side("target"));
  if (auto it = doc.find("taylor"); it != doc.end()) {
    if (!it->is_array()) bad("\"taylor\" in " + what + " must be an array");
    int row = 0;
    for (const Json& entry : *it) {
      std::string at = what + ", taylor entry " + std::to_string(row++);
      check_keys(entry, at, {"inputs", "output"});
      std::vector<int> inputs = inputs_from_json(u.source(), entry, at);
      u.set_taylor(inputs, terms_from_json(u.target(), require_array(entry, "output", at), 0, at));
    }
  }
  return u;
}

Json morphism_to_json(const InftyMorphism& u, bool top_level) {
  Json doc;
  if (top_level) doc["schema_version"] = 1;
  doc["source"] = algebra_to_json(u.source(), false);
  doc["target"] = algebra_to_json(u.target(), false);
  Json taylor = Json::array();
  for (const auto& [inputs, value] : u.taylor_table()) {
    if (value.is_zero()) continue;
    Json names = Json::array();
    for (int i : inputs) names.push_back(u.source().symbol(i).name);
    taylor.push_back({{"inputs", std::move(names)}, {"output", terms_to_json(u.target(), value)}});
  }
  doc["taylor"] = std::move(taylor);
  return doc;
}

Element element_from_json(const SLieAlgebra& a, const Json& doc, int expected_dim) {
  std::string what = "element";
  check_keys(doc, what, {"dim", "terms"});
  int dim = expected_dim >= 0 ? expected_dim : 0;
  if (auto it = doc.find("dim"); it != doc.end()) {
    if (!it->is_number_integer()) bad("\"dim\" in " + what + " must be an integer");
    dim = it->get<int>();
    if (dim < 0) bad("\"dim\" in " + what + " must be non-negative");
    if (expected_dim >= 0 && dim != expected_dim)
      bad(what + " must have dim " + std::to_string(expected_dim));
  }
  return terms_from_json(a, require_array(doc, "terms", what), dim, what);
}

Json element_to_json(const SLieAlgebra& a, const Element& e) {
  Json doc;
  doc["dim"] = e.dim;
  doc["terms"] = terms_to_json(a, e);
  return doc;
}

std::string simplex_algebra_name(const Json& doc) {
  std::string what = "simplex document";
  check_keys(doc, what, {"schema_version", "algebra", "dim", "terms", "certified"});
  require_schema(doc, what);
  return require_string(doc, "algebra", what);
}

Element simplex_value_from_json(const SLieAlgebra& a, const Json& doc) {
  std::string what = "simplex document";
  check_keys(doc, what, {"schema_version", "algebra", "dim", "terms", "certified"});
  require_schema(doc, what);
  if (auto it = doc.find("certified"); it != doc.end() && !it->is_boolean())
    bad("\"certified\" in " + what + " must be a boolean");
  int dim = require_int(doc, "dim", what);
  if (dim < 0) bad("\"dim\" in " + what + " must be non-negative");
  return terms_from_json(a, require_array(doc, "terms", what), dim, what);
}

Json simplex_to_json(const SLieAlgebra& a, const std::string& algebra_name, const Element& value) {
  Json doc;
  doc["schema_version"] = 1;
  doc["algebra"] = algebra_name;
  doc["dim"] = value.dim;
  doc["terms"] = terms_to_json(a, value);
  // Certification is re-derived here, never copied from the producer.
  if (is_homogeneous(a, value, 0) && is_mc(a, value)) doc["certified"] = true;
  return doc;
}

namespace {

// Field-by-field layer (de)serialization; the algebra each element lives in
// depends on the certificate kind.
Json preimage_layer_to_json(const SLieAlgebra& s, const SLieAlgebra& t, const PreimageLayer& l) {
  Json doc;
  doc["layer"] = l.layer;
  doc["alpha_n"] = element_to_json(s, l.alpha_n);
  doc["defect"] = element_to_json(t, l.defect);
  doc["gamma"] = element_to_json(s, l.gamma);
  doc["xi"] = element_to_json(t, l.xi);
  doc["sigma"] = element_to_json(s, l.sigma);
  doc["beta1"] = element_to_json(t, l.beta1);
  doc["picard_iterations"] = l.picard_iterations;
  return doc;
}

PreimageLayer preimage_layer_from_json(const SLieAlgebra& s, const SLieAlgebra& t,
                                       const Json& doc, const std::string& at) {
  check_keys(doc, at,
             {"layer", "alpha_n", "defect", "gamma", "xi", "sigma", "beta1", "picard_iterations"});
  PreimageLayer l;
  l.layer = require_int(doc, "layer", at);
  l.alpha_n = element_from_json(s, require_key(doc, "alpha_n", at), 0);
  l.defect = element_from_json(t, require_key(doc, "defect", at), 0);
  l.gamma = element_from_json(s, require_key(doc, "gamma", at), 0);
  l.xi = element_from_json(t, require_key(doc, "xi", at), 0);
  l.sigma = element_from_json(s, require_key(doc, "sigma", at), 0);
  l.beta1 = element_from_json(t, require_key(doc, "beta1", at), 0);
  l.picard_iterations = require_int(doc, "picard_iterations", at);
  return l;
}

Json connect_layer_to_json(const SLieAlgebra& s, const SLieAlgebra& t, const ConnectLayer& l) {
  Json doc;
  doc["layer"] = l.layer;
  doc["alpha_n"] = element_to_json(s, l.alpha_n);
  doc["beta1"] = element_to_json(t, l.beta1);
  doc["rho1"] = element_to_json(s, l.rho1);
  doc["gamma_t"] = element_to_json(t, l.gamma_t);
  doc["rho_edge"] = element_to_json(s, l.rho_edge);
  doc["picard_iterations"] = l.picard_iterations;
  doc["horn_iterations"] = l.horn_iterations;
  return doc;
}

ConnectLayer connect_layer_from_json(const SLieAlgebra& s, const SLieAlgebra& t, const Json& doc,
                                     const std::string& at) {
  check_keys(doc, at, {"layer", "alpha_n", "beta1", "rho1", "gamma_t", "rho_edge",
                       "picard_iterations", "horn_iterations"});
  ConnectLayer l;
  l.layer = require_int(doc, "layer", at);
  l.alpha_n = element_from_json(s, require_key(doc, "alpha_n", at), 0);
  l.beta1 = element_from_json(t, require_key(doc, "beta1", at), 0);
  l.rho1 = element_from_json(s, require_key(doc, "rho1", at), 0);
  l.gamma_t = element_from_json(t, require_key(doc, "gamma_t", at), 0);
  l.rho_edge = element_from_json(s, require_key(doc, "rho_edge", at), 1);
  l.picard_iterations = require_int(doc, "picard_iterations", at);
  l.horn_iterations = require_int(doc, "horn_iterations", at);
  return l;
}

}  // namespace

CertificateDocument certificate_from_json(const Json& doc) {
  std::string what = "certificate document";
  check_keys(doc, what,
             {"schema_version", "kind", "morphism", "alpha", "alpha_prime", "edge", "layers"});
  require_schema(doc, what);
  std::string kind = require_string(doc, "kind", what);
  if (kind != "preimage" && kind != "connect")
    bad("unknown certificate kind \"" + kind + "\"");
  InftyMorphism u = morphism_from_json(require_key(doc, "morphism", what), {}, false);
  const SLieAlgebra& s = u.source();
  const SLieAlgebra& t = u.target();
  const SLieAlgebra& prime_side = kind == "preimage" ? t : s;
  const SLieAlgebra& edge_side = kind == "preimage" ? t : s;

  TransferCertificate c;
  c.kind = kind;
  c.alpha = element_from_json(s, require_key(doc, "alpha", what), 0);
  c.alpha_prime = element_from_json(prime_side, require_key(doc, "alpha_prime", what), 0);
  c.edge = element_from_json(edge_side, require_key(doc, "edge", what), 1);
  const Json& layers = require_array(doc, "layers", what);
  int pos = 0;
  for (const Json& l : layers) {
    std::string at = what + ", layer " + std::to_string(pos++);
    if (kind == "preimage")
      c.preimage_layers.push_back(preimage_layer_from_json(s, t, l, at));
    else
      c.connect_layers.push_back(connect_layer_from_json(s, t, l, at));
  }
  return CertificateDocument{std::move(u), std::move(c)};
}

Json certificate_to_json(const InftyMorphism& u, const TransferCertificate& c) {
  if (c.kind != "preimage" && c.kind != "connect")
    bad("unknown certificate kind \"" + c.kind + "\"");
  const SLieAlgebra& s = u.source();
  const SLieAlgebra& t = u.target();
  const SLieAlgebra& prime_side = c.kind == "preimage" ? t : s;
  const SLieAlgebra& edge_side = c.kind == "preimage" ? t : s;
  Json doc;
  doc["schema_version"] = 1;
  doc["kind"] = c.kind;
  doc["morphism"] = morphism_to_json(u, false);
  doc["alpha"] = element_to_json(s, c.alpha);
  doc["alpha_prime"] = element_to_json(prime_side, c.alpha_prime);
  doc["edge"] = element_to_json(edge_side, c.edge);
  Json layers = Json::array();
  if (c.kind == "preimage")
    for (const PreimageLayer& l : c.preimage_layers) layers.push_back(preimage_layer_to_json(s, t, l));
  else
    for (const ConnectLayer& l : c.connect_layers) layers.push_back(connect_layer_to_json(s, t, l));
  doc["layers"] = std::move(layers);
  return doc;
}

Json refutation_to_json(const InftyMorphism& u, const Refutation& r) {
  const SLieAlgebra& side = r.in_target ? u.target() : u.source();
  Json doc;
  doc["schema_version"] = 1;
  doc["result"] = "refuted";
  doc["weight"] = r.weight;
  doc["degree"] = r.degree;
  doc["in"] = r.in_target ? "target" : "source";
  doc["class"] = element_to_json(side, r.cls);
  doc["detail"] = r.detail;
  return doc;
}

}  // namespace lmc
