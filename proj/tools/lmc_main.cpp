#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lmc/gm.hpp"
#include "lmc/io.hpp"
#include "lmc/mc.hpp"
#include "lmc/slie.hpp"

using namespace lmc;

namespace {

// An exit-1 outcome (validation or hypothesis failure) carrying its report
// document. InputError stays exit 2 and reports on stderr instead.
struct Failure {
  Json doc;
};

Json fail_doc(const std::string& error) {
  Json doc;
  doc["schema_version"] = 1;
  doc["result"] = "fail";
  doc["error"] = error;
  return doc;
}

std::string basename_of(const std::string& path) {
  std::string b = path;
  auto slash = b.find_last_of("/\\");
  if (slash != std::string::npos) b = b.substr(slash + 1);
  if (b.size() > 5 && b.compare(b.size() - 5, 5, ".json") == 0) b.resize(b.size() - 5);
  return b;
}

// ---------------------------------------------------------------------------
// Workspace: documents loaded from --input files, named by basename. A
// --truncation override replaces every loaded object by its image in
// L/F_{N+1}L; deepening is impossible (the dropped data does not exist).
// ---------------------------------------------------------------------------

struct AlgebraSlot {
  std::string name;
  SLieAlgebra original;
  SLieAlgebra algebra;  // working copy, truncated when q is set
  std::optional<QuotientResult> q;
};

struct MorphismSlot {
  std::string name;
  std::string source_name;  // "source"/"target" when the algebras are inline
  std::string target_name;
  InftyMorphism original;
  InftyMorphism morphism;  // working copy
  std::optional<QuotientResult> qs, qt;
};

struct SimplexSlot {
  std::string name;
  std::string algebra_name;
  Element value;
};

struct CertificateSlot {
  std::string name;
  CertificateDocument doc;
};

struct ResolvedAlgebra {
  const SLieAlgebra* original = nullptr;
  const SLieAlgebra* working = nullptr;
  const QuotientResult* q = nullptr;
};

struct Workspace {
  std::vector<AlgebraSlot> algebras;
  std::vector<MorphismSlot> morphisms;
  std::vector<SimplexSlot> simplices;
  std::vector<CertificateSlot> certificates;

  bool name_taken(const std::string& n) const {
    for (const auto& a : algebras)
      if (a.name == n) return true;
    for (const auto& m : morphisms)
      if (m.name == n) return true;
    for (const auto& s : simplices)
      if (s.name == n) return true;
    for (const auto& c : certificates)
      if (c.name == n) return true;
    return false;
  }

  // Algebra slots first, then the sides of loaded morphisms.
  std::optional<ResolvedAlgebra> resolve(const std::string& n) const {
    for (const auto& a : algebras)
      if (a.name == n) return ResolvedAlgebra{&a.original, &a.algebra, a.q ? &*a.q : nullptr};
    for (const auto& m : morphisms) {
      if (m.source_name == n)
        return ResolvedAlgebra{&m.original.source(), &m.morphism.source(), m.qs ? &*m.qs : nullptr};
      if (m.target_name == n)
        return ResolvedAlgebra{&m.original.target(), &m.morphism.target(), m.qt ? &*m.qt : nullptr};
    }
    return std::nullopt;
  }
};

InftyMorphism truncate_morphism(const InftyMorphism& u, const QuotientResult& qs,
                                const QuotientResult& qt) {
  InftyMorphism out(qs.algebra, qt.algebra);
  for (const auto& [inputs, value] : u.taylor_table()) {
    std::vector<int> mapped;
    bool dropped = false;
    for (int i : inputs) {
      int m = qs.symbol_map[i];
      if (m < 0) {
        dropped = true;
        break;
      }
      mapped.push_back(m);
    }
    if (dropped) continue;
    Element v = quotient_project(qt, value);
    if (!v.is_zero()) out.set_taylor(mapped, v);
  }
  return out;
}

// enforce = abort with a Failure report when a loaded object fails its
// validator; validate/verify run with enforce = false and report instead.
Workspace load_workspace(const std::vector<std::string>& inputs, std::optional<int> trunc,
                         bool enforce) {
  if (trunc && *trunc < 1) throw InputError("--truncation must be >= 1");
  Workspace w;
  for (const std::string& path : inputs) {
    Json doc = load_document(path);
    std::string kind = document_kind(doc);
    std::string name = basename_of(path);
    if (w.name_taken(name)) throw InputError("duplicate input name \"" + name + "\"");

    if (kind == "algebra") {
      SLieAlgebra a = algebra_from_json(doc);
      AlgebraSlot slot{name, a, a, std::nullopt};
      if (trunc && *trunc > a.truncation())
        throw InputError("--truncation cannot exceed the stored truncation of \"" + name + "\"");
      if (trunc && *trunc < a.truncation()) {
        slot.q = quotient(a, *trunc + 1);
        slot.algebra = slot.q->algebra;
      }
      if (enforce) {
        std::vector<std::string> bad = check_slie(slot.algebra);
        if (!bad.empty()) {
          Json d = fail_doc("algebra \"" + name + "\" fails validation");
          d["violations"] = bad;
          throw Failure{std::move(d)};
        }
      }
      w.algebras.push_back(std::move(slot));
    } else if (kind == "morphism") {
      AlgebraLookup lookup = [&w](const std::string& n) -> const SLieAlgebra* {
        auto r = w.resolve(n);
        return r ? r->original : nullptr;
      };
      auto side_name = [&doc](const char* key, const char* fallback) {
        return doc.contains(key) && doc[key].is_string() ? doc[key].get<std::string>()
                                                         : std::string(fallback);
      };
      MorphismSlot slot{name,
                        side_name("source", "source"),
                        side_name("target", "target"),
                        morphism_from_json(doc, lookup),
                        morphism_from_json(doc, lookup),
                        std::nullopt,
                        std::nullopt};
      if (trunc && *trunc > slot.original.source().truncation())
        throw InputError("--truncation cannot exceed the stored truncation of \"" + name + "\"");
      if (trunc && *trunc < slot.original.source().truncation()) {
        slot.qs = quotient(slot.original.source(), *trunc + 1);
        slot.qt = quotient(slot.original.target(), *trunc + 1);
        slot.morphism = truncate_morphism(slot.original, *slot.qs, *slot.qt);
      }
      if (enforce) {
        std::vector<std::string> bad = check_infty_morphism(slot.morphism);
        if (!bad.empty()) {
          Json d = fail_doc("morphism \"" + name + "\" fails validation");
          d["violations"] = bad;
          throw Failure{std::move(d)};
        }
      }
      w.morphisms.push_back(std::move(slot));
    } else if (kind == "simplex") {
      std::string aname = simplex_algebra_name(doc);
      auto r = w.resolve(aname);
      if (!r)
        throw InputError("simplex \"" + name + "\" references an algebra that is not loaded: \"" +
                         aname + "\" (load it first)");
      Element v = simplex_value_from_json(*r->original, doc);
      if (r->q) v = quotient_project(*r->q, v);
      if (enforce && !is_mc(*r->working, v)) {
        Json d = fail_doc("simplex \"" + name + "\" is not Maurer-Cartan");
        if (is_homogeneous(*r->working, v, 0))
          d["residual"] = element_to_json(*r->working, mc_residual(*r->working, v));
        throw Failure{std::move(d)};
      }
      w.simplices.push_back({name, aname, std::move(v)});
    } else {
      if (trunc) throw InputError("certificates cannot be re-truncated");
      w.certificates.push_back({name, certificate_from_json(doc)});
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Payload helpers for the --element flag.
// ---------------------------------------------------------------------------

void payload_keys(const Json& obj, const std::string& what,
                  std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InputError(what + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) known = true;
    if (!known) throw InputError("unknown key \"" + item.key() + "\" in " + what);
  }
}

int payload_int(const Json& obj, const char* key, const std::string& what) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(what + " is missing \"" + key + "\"");
  if (!it->is_number_integer())
    throw InputError("\"" + std::string(key) + "\" in " + what + " must be an integer");
  return it->get<int>();
}

Json require_element_flag(const std::optional<std::string>& element, const char* cmd) {
  if (!element) throw InputError(std::string("--element is required for ") + cmd);
  return parse_document(*element);
}

// ---------------------------------------------------------------------------
// Input-count rules per operation.
// ---------------------------------------------------------------------------

const AlgebraSlot& only_algebra(const Workspace& w, const char* cmd, int simplices_min,
                                int simplices_max) {
  if (w.algebras.size() != 1 || !w.morphisms.empty() || !w.certificates.empty())
    throw InputError(std::string(cmd) + " requires exactly one algebra input");
  int n = static_cast<int>(w.simplices.size());
  if (n < simplices_min || n > simplices_max)
    throw InputError(std::string(cmd) + " got an unexpected number of simplex inputs");
  return w.algebras.front();
}

const MorphismSlot& only_morphism(const Workspace& w, const char* cmd, int simplices_max) {
  if (w.morphisms.size() != 1 || !w.certificates.empty())
    throw InputError(std::string(cmd) + " requires exactly one morphism input");
  if (static_cast<int>(w.simplices.size()) > simplices_max)
    throw InputError(std::string(cmd) + " got an unexpected number of simplex inputs");
  return w.morphisms.front();
}

// ---------------------------------------------------------------------------
// Subcommand bodies. Each returns the result document; failures throw.
// ---------------------------------------------------------------------------

Json run_validate(const Workspace& w, bool check_qiso) {
  Json reports = Json::array();
  bool all = true;
  for (const auto& slot : w.algebras) {
    Json entry;
    entry["input"] = slot.name;
    entry["kind"] = "algebra";
    std::vector<std::string> bad = check_slie(slot.algebra);
    entry["result"] = bad.empty() ? "pass" : "fail";
    entry["violations"] = bad;
    all = all && bad.empty();
    reports.push_back(std::move(entry));
  }
  for (const auto& slot : w.morphisms) {
    Json entry;
    entry["input"] = slot.name;
    entry["kind"] = "morphism";
    std::vector<std::string> bad = check_infty_morphism(slot.morphism);
    entry["structure"] = bad.empty() ? "pass" : "fail";
    entry["violations"] = bad;
    bool ok = bad.empty();
    if (check_qiso) {
      if (ok) {
        QisoReport q = check_filtered_qiso(slot.morphism);
        entry["quasi_isomorphism"] = q.pass() ? "pass" : "fail";
        Json fails = Json::array();
        for (const QisoFailure& f : q.failures)
          fails.push_back({{"weight", f.weight}, {"degree", f.degree}});
        entry["failures"] = std::move(fails);
        ok = q.pass();
      } else {
        entry["quasi_isomorphism"] = "skipped";
      }
    }
    entry["result"] = ok ? "pass" : "fail";
    all = all && ok;
    reports.push_back(std::move(entry));
  }
  for (const auto& slot : w.simplices) {
    Json entry;
    entry["input"] = slot.name;
    entry["kind"] = "simplex";
    auto r = w.resolve(slot.algebra_name);
    bool ok = is_mc(*r->working, slot.value);
    entry["result"] = ok ? "pass" : "fail";
    if (!ok) {
      if (is_homogeneous(*r->working, slot.value, 0))
        entry["residual"] = element_to_json(*r->working, mc_residual(*r->working, slot.value));
      else
        entry["violations"] = Json::array({"not homogeneous of degree 0"});
    }
    all = all && ok;
    reports.push_back(std::move(entry));
  }
  for (const auto& slot : w.certificates) {
    Json entry;
    entry["input"] = slot.name;
    entry["kind"] = "certificate";
    std::vector<std::string> bad = validate_certificate(slot.doc.morphism, slot.doc.certificate);
    entry["result"] = bad.empty() ? "pass" : "fail";
    entry["violations"] = bad;
    all = all && bad.empty();
    reports.push_back(std::move(entry));
  }
  Json doc;
  doc["schema_version"] = 1;
  doc["result"] = all ? "pass" : "fail";
  doc["reports"] = std::move(reports);
  if (!all) throw Failure{std::move(doc)};
  return doc;
}

Json run_curv(const Workspace& w, const std::optional<std::string>& element) {
  const AlgebraSlot& slot = only_algebra(w, "curv", 0, 0);
  Element e = element_from_json(slot.algebra, require_element_flag(element, "curv"));
  return simplex_to_json(slot.algebra, slot.name, curvature(slot.algebra, e));
}

Json run_twist(const Workspace& w, const std::optional<std::string>& element) {
  Json payload = require_element_flag(element, "twist");
  if (w.morphisms.size() == 1 && w.algebras.empty()) {
    const MorphismSlot& slot = only_morphism(w, "twist", 0);
    Element alpha = element_from_json(slot.morphism.source(), payload, 0);
    try {
      return morphism_to_json(twist_morphism(slot.morphism, alpha));
    } catch (const NotMaurerCartan& e) {
      Json d = fail_doc(e.what());
      d["curvature"] = element_to_json(slot.morphism.source(), e.curv);
      throw Failure{std::move(d)};
    }
  }
  const AlgebraSlot& slot = only_algebra(w, "twist", 0, 0);
  Element alpha = element_from_json(slot.algebra, payload, 0);
  try {
    return algebra_to_json(twist_algebra(slot.algebra, alpha));
  } catch (const NotMaurerCartan& e) {
    Json d = fail_doc(e.what());
    d["curvature"] = element_to_json(slot.algebra, e.curv);
    throw Failure{std::move(d)};
  }
}

Json run_pushforward(const Workspace& w, const std::optional<std::string>& element) {
  const MorphismSlot& slot = only_morphism(w, "pushforward", 0);
  Element e = element_from_json(slot.morphism.source(),
                                require_element_flag(element, "pushforward"));
  return simplex_to_json(slot.morphism.target(), slot.target_name,
                         pushforward(slot.morphism, e));
}

Json run_reconstruct(const Workspace& w, const std::optional<std::string>& element) {
  const AlgebraSlot& slot = only_algebra(w, "reconstruct", 0, 0);
  Json payload = require_element_flag(element, "reconstruct");
  payload_keys(payload, "reconstruct payload", {"dim", "vertex", "mu", "nu"});
  int n = payload_int(payload, "dim", "reconstruct payload");
  int i = payload_int(payload, "vertex", "reconstruct payload");
  if (!payload.contains("mu") || !payload.contains("nu"))
    throw InputError("reconstruct payload needs \"mu\" and \"nu\"");
  Element mu = element_from_json(slot.algebra, payload["mu"], 0);
  Element nu = element_from_json(slot.algebra, payload["nu"], n);
  return simplex_to_json(slot.algebra, slot.name, reconstruct(slot.algebra, n, i, mu, nu));
}

Json run_rectify(const Workspace& w, const std::optional<std::string>& element) {
  const AlgebraSlot& slot = only_algebra(w, "rectify", 0, 1);
  int floor = 1;
  std::optional<Element> edge;
  if (element) {
    Json payload = parse_document(*element);
    payload_keys(payload, "rectify payload", {"floor", "edge"});
    if (payload.contains("floor")) floor = payload_int(payload, "floor", "rectify payload");
    if (payload.contains("edge")) edge = element_from_json(slot.algebra, payload["edge"], 1);
  }
  if (w.simplices.size() == 1) {
    if (edge) throw InputError("rectify got both a simplex input and an inline edge");
    edge = w.simplices.front().value;
  }
  if (!edge) throw InputError("rectify needs an edge (simplex input or inline payload)");
  return simplex_to_json(slot.algebra, slot.name, rectify(slot.algebra, *edge, floor));
}

Json run_compose(const Workspace& w) {
  const AlgebraSlot& slot = only_algebra(w, "compose", 2, 2);
  ComposeResult r =
      compose_edges(slot.algebra, w.simplices[0].value, w.simplices[1].value);
  return simplex_to_json(slot.algebra, slot.name, r.composite);
}

Json run_concatenate(const Workspace& w) {
  const AlgebraSlot& slot = only_algebra(w, "concatenate", 1, 1 << 20);
  std::vector<Element> edges;
  for (const auto& s : w.simplices) edges.push_back(s.value);
  return simplex_to_json(slot.algebra, slot.name, concatenate(slot.algebra, edges));
}

Json run_preimage(const Workspace& w, const std::optional<std::string>& element) {
  const MorphismSlot& slot = only_morphism(w, "preimage", 0);
  Element alpha_tilde = element_from_json(slot.morphism.target(),
                                          require_element_flag(element, "preimage"), 0);
  try {
    TransferResult r = mc_preimage(slot.morphism, alpha_tilde);
    if (!r.ok()) throw Failure{refutation_to_json(slot.morphism, *r.refutation)};
    return certificate_to_json(slot.morphism, *r.certificate);
  } catch (const NotMaurerCartan& e) {
    Json d = fail_doc(e.what());
    d["curvature"] = element_to_json(slot.morphism.target(), e.curv);
    throw Failure{std::move(d)};
  }
}

Json run_transfer_connect(const Workspace& w, const std::optional<std::string>& element) {
  const MorphismSlot& slot = only_morphism(w, "transfer-connect", 1);
  Json payload = require_element_flag(element, "transfer-connect");
  payload_keys(payload, "transfer-connect payload", {"alpha", "alpha_prime", "beta_tilde"});
  if (!payload.contains("alpha") || !payload.contains("alpha_prime"))
    throw InputError("transfer-connect payload needs \"alpha\" and \"alpha_prime\"");
  Element alpha = element_from_json(slot.morphism.source(), payload["alpha"], 0);
  Element alpha_prime = element_from_json(slot.morphism.source(), payload["alpha_prime"], 0);
  std::optional<Element> beta;
  if (payload.contains("beta_tilde"))
    beta = element_from_json(slot.morphism.target(), payload["beta_tilde"], 1);
  if (w.simplices.size() == 1) {
    if (beta) throw InputError("transfer-connect got both a simplex input and an inline edge");
    beta = w.simplices.front().value;
  }
  if (!beta)
    throw InputError("transfer-connect needs the target edge (simplex input or \"beta_tilde\")");
  try {
    TransferResult r = transfer_connect(slot.morphism, alpha, alpha_prime, *beta);
    if (!r.ok()) throw Failure{refutation_to_json(slot.morphism, *r.refutation)};
    return certificate_to_json(slot.morphism, *r.certificate);
  } catch (const NotMaurerCartan& e) {
    Json d = fail_doc(e.what());
    d["curvature"] = element_to_json(slot.morphism.source(), e.curv);
    throw Failure{std::move(d)};
  }
}

Json run_pi_abelian(const Workspace& w, const std::optional<std::string>& element) {
  const AlgebraSlot& slot = only_algebra(w, "pi-abelian", 0, 0);
  Json payload = require_element_flag(element, "pi-abelian");
  payload_keys(payload, "pi-abelian payload", {"index"});
  int i = payload_int(payload, "index", "pi-abelian payload");
  if (i < 0) throw InputError("\"index\" must be non-negative");
  Json doc;
  doc["schema_version"] = 1;
  doc["algebra"] = slot.name;
  doc["index"] = i;
  doc["dimension"] = abelian_homotopy(slot.algebra, i);
  return doc;
}

Json run_moore_homology(const Workspace& w, const std::optional<std::string>& element) {
  const AlgebraSlot& slot = only_algebra(w, "moore-homology", 0, 0);
  Json payload = require_element_flag(element, "moore-homology");
  payload_keys(payload, "moore-homology payload", {"index", "levels"});
  int i = payload_int(payload, "index", "moore-homology payload");
  if (i < 0) throw InputError("\"index\" must be non-negative");
  int levels = i + 1;
  if (payload.contains("levels")) levels = payload_int(payload, "levels", "moore-homology payload");
  if (levels < i + 1) throw InputError("\"levels\" must be at least index + 1");
  SimplicialVectorSpace v = abelian_mc_simplicial(slot.algebra, levels);
  MooreHomology h = moore_homology(v, i, levels);
  Json doc;
  doc["schema_version"] = 1;
  doc["algebra"] = slot.name;
  doc["index"] = i;
  doc["levels"] = levels;
  doc["dimension"] = h.dimension;
  return doc;
}

void emit(const Json& doc, const std::string& output) {
  if (output.empty())
    std::cout << dump_document(doc);
  else
    write_document(doc, output);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Maurer-Cartan spaces of truncated filtered shifted L-infinity algebras"};
  app.require_subcommand(1);

  std::vector<std::string> inputs;
  std::optional<int> trunc;
  std::string output;
  std::string format = "json";
  std::optional<std::string> element;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "check loaded algebras, morphisms, simplices, certificates"},
      {"curv", "curvature of an inline element over the loaded algebra"},
      {"twist", "twist the loaded algebra or morphism by a Maurer-Cartan element"},
      {"pushforward", "push an element forward along the loaded morphism"},
      {"reconstruct", "rebuild a simplex from a vertex value and a stub"},
      {"rectify", "make an edge's dt-component constant, preserving endpoints"},
      {"compose", "compose two loaded edges via the inner horn"},
      {"concatenate", "compose a chain of loaded edges"},
      {"preimage", "lift a target Maurer-Cartan element through the morphism"},
      {"transfer-connect", "connect two source points whose images are connected"},
      {"pi-abelian", "homotopy group dimension of an abelian algebra"},
      {"moore-homology", "Moore-complex homology of the abelian cocycle spaces"},
      {"verify", "re-validate emitted documents without re-running constructions"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    cmd->add_option("--input", inputs, "input document file (repeatable)");
    cmd->add_option("--truncation", trunc, "re-truncate every loaded object to this depth");
    cmd->add_option("--output", output, "write the result document to this file");
    cmd->add_option("--format", format, "output format (only \"json\")");
    cmd->add_option("--element", element, "inline JSON payload for the operation");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (format != "json") throw InputError("unsupported --format \"" + format + "\"");
    if (inputs.empty()) throw InputError(cmd + " needs at least one --input file");
    bool report_mode = cmd == "validate" || cmd == "verify";
    Workspace w = load_workspace(inputs, trunc, !report_mode);

    Json doc;
    if (cmd == "validate")
      doc = run_validate(w, true);
    else if (cmd == "verify")
      doc = run_validate(w, false);
    else if (cmd == "curv")
      doc = run_curv(w, element);
    else if (cmd == "twist")
      doc = run_twist(w, element);
    else if (cmd == "pushforward")
      doc = run_pushforward(w, element);
    else if (cmd == "reconstruct")
      doc = run_reconstruct(w, element);
    else if (cmd == "rectify")
      doc = run_rectify(w, element);
    else if (cmd == "compose")
      doc = run_compose(w);
    else if (cmd == "concatenate")
      doc = run_concatenate(w);
    else if (cmd == "preimage")
      doc = run_preimage(w, element);
    else if (cmd == "transfer-connect")
      doc = run_transfer_connect(w, element);
    else if (cmd == "pi-abelian")
      doc = run_pi_abelian(w, element);
    else
      doc = run_moore_homology(w, element);
    emit(doc, output);
    return 0;
  } catch (const Failure& f) {
    try {
      emit(f.doc, output);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
    return 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    emit(fail_doc(e.what()), output);
    return 1;
  } catch (const std::logic_error& e) {
    emit(fail_doc(std::string("internal check failed: ") + e.what()), output);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
