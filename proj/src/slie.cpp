#include "lmc/slie.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace lmc {

namespace {

const PolyForm& zero_form() {
  static const PolyForm z(0);
  return z;
}

Rational parity(int k) { return (k % 2 == 0) ? Rational(1) : Rational(-1); }

// The unique coefficient of a dim-0 form.
Rational scalar_of(const PolyForm& f) {
  if (f.is_zero()) return Rational(0);
  return f.terms().begin()->second;
}

bool is_sorted_key(const std::vector<int>& key) {
  return std::is_sorted(key.begin(), key.end());
}

std::string tuple_names(const SLieAlgebra& a, const std::vector<int>& key) {
  std::string s = "(";
  for (size_t i = 0; i < key.size(); ++i) {
    if (i) s += ", ";
    s += a.symbol(key[i]).name;
  }
  return s + ")";
}

}  // namespace

// ---------------------------------------------------------------------------
// Element

void Element::add(int sym, const PolyForm& f) {
  if (f.is_zero()) return;
  auto it = comp.find(sym);
  if (it == comp.end()) {
    comp.emplace(sym, f);
    return;
  }
  it->second += f;
  if (it->second.is_zero()) comp.erase(it);
}

const PolyForm& Element::at(int sym) const {
  auto it = comp.find(sym);
  if (it == comp.end()) return zero_form();
  return it->second;
}

Element& Element::operator+=(const Element& o) {
  if (dim != o.dim && !o.is_zero() && !is_zero())
    throw InputError("element dimension mismatch");
  if (is_zero()) dim = o.dim;
  for (const auto& [s, f] : o.comp) add(s, f);
  return *this;
}

Element& Element::operator-=(const Element& o) {
  Element neg = o;
  neg *= Rational(-1);
  return *this += neg;
}

Element& Element::operator*=(const Rational& c) {
  if (c == 0) {
    comp.clear();
    return *this;
  }
  for (auto& [s, f] : comp) f *= c;
  return *this;
}

Element basis_element(int sym) { return scaled_basis_element(sym, Rational(1)); }

Element scaled_basis_element(int sym, const Rational& c) {
  Element e(0);
  e.add(sym, PolyForm::scalar(0, c));
  return e;
}

Element element_tensor(const Element& dim0, const PolyForm& omega) {
  if (dim0.dim != 0) throw InputError("element_tensor needs a dim-0 element");
  Element out(omega.dim());
  for (const auto& [s, f] : dim0.comp) out.add(s, omega * scalar_of(f));
  return out;
}

// ---------------------------------------------------------------------------
// SLieAlgebra tables

SLieAlgebra::SLieAlgebra(int truncation, int max_arity)
    : truncation_(truncation), max_arity_(max_arity) {
  if (truncation < 1) throw InputError("truncation must be >= 1");
  if (max_arity < 2) throw InputError("max_arity must be >= 2");
}

int SLieAlgebra::add_symbol(const std::string& name, int degree, int weight) {
  if (name.empty()) throw InputError("symbol name must be nonempty");
  if (by_name_.count(name)) throw InputError("duplicate symbol name: " + name);
  if (weight < 1 || weight > truncation_)
    throw InputError("symbol weight out of range 1..N: " + name);
  symbols_.push_back(BasisSymbol{name, degree, weight});
  int idx = static_cast<int>(symbols_.size()) - 1;
  by_name_[name] = idx;
  return idx;
}

std::optional<int> SLieAlgebra::find_symbol(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

void SLieAlgebra::set_differential(int sym, const Element& value) {
  if (sym < 0 || sym >= symbol_count()) throw InputError("differential: bad symbol index");
  if (!value.is_zero() && value.dim != 0) throw InputError("differential value must be dim 0");
  for (const auto& [s, f] : value.comp) {
    (void)f;
    if (s < 0 || s >= symbol_count()) throw InputError("differential value: bad symbol index");
  }
  if (value.is_zero())
    differential_.erase(sym);
  else
    differential_[sym] = value;
}

void SLieAlgebra::set_bracket(const std::vector<int>& inputs, const Element& value) {
  int m = static_cast<int>(inputs.size());
  if (m < 2 || m > max_arity_) throw InputError("bracket arity out of range 2..A");
  if (!is_sorted_key(inputs)) throw InputError("bracket key must be sorted");
  for (int s : inputs)
    if (s < 0 || s >= symbol_count()) throw InputError("bracket key: bad symbol index");
  if (!value.is_zero() && value.dim != 0) throw InputError("bracket value must be dim 0");
  for (const auto& [s, f] : value.comp) {
    (void)f;
    if (s < 0 || s >= symbol_count()) throw InputError("bracket value: bad symbol index");
  }
  if (value.is_zero())
    brackets_.erase(inputs);
  else
    brackets_[inputs] = value;
}

const Element& SLieAlgebra::differential_entry(int sym) const {
  static const Element zero(0);
  auto it = differential_.find(sym);
  if (it == differential_.end()) return zero;
  return it->second;
}

// ---------------------------------------------------------------------------
// Evaluation engine

namespace {

struct Triple {
  int sym = 0;
  FormMonomial mono;
  Rational coef;
  int sym_degree = 0;
  int form_degree = 0;

  int total_degree() const { return sym_degree + form_degree; }
};

// Stable insertion sort by symbol index; returns the Koszul sign of the
// performed adjacent transpositions in the total grading.
Rational sort_by_symbol(std::vector<Triple>& ts) {
  Rational sign(1);
  for (size_t i = 1; i < ts.size(); ++i) {
    for (size_t j = i; j > 0 && ts[j - 1].sym > ts[j].sym; --j) {
      if ((ts[j - 1].total_degree() % 2 != 0) && (ts[j].total_degree() % 2 != 0)) sign = -sign;
      std::swap(ts[j - 1], ts[j]);
    }
  }
  return sign;
}

// Shared multilinear table application: expands every argument into
// (symbol, monomial) summands, canonically sorts each summand tuple by symbol
// index (Koszul signs in the total grading), moves all form factors to the
// right of all symbols (the split sign), looks the sorted symbol tuple up in
// the table, and wedges the form factors in the sorted order. degrees_of
// supplies the symbol degrees of the arguments (the table's domain algebra).
Element apply_table(const SLieAlgebra& degrees_of,
                    const std::map<std::vector<int>, Element>& table,
                    const std::vector<Element>& args, int dim) {
  Element out(dim);
  size_t m = args.size();
  std::vector<Triple> chosen(m);

  auto finish = [&](const std::vector<Triple>& picked) {
    std::vector<Triple> ts = picked;
    Rational sign = sort_by_symbol(ts);
    // split sign: each form factor moves right past the later symbols
    int parity_acc = 0;
    for (size_t i = 0; i + 1 < m; ++i)
      for (size_t j = i + 1; j < m; ++j)
        if ((ts[i].form_degree % 2 != 0) && (ts[j].sym_degree % 2 != 0)) ++parity_acc;
    if (parity_acc % 2 != 0) sign = -sign;

    std::vector<int> key(m);
    for (size_t i = 0; i < m; ++i) key[i] = ts[i].sym;
    auto it = table.find(key);
    if (it == table.end()) return;

    PolyForm w = PolyForm::scalar(dim, sign);
    for (size_t i = 0; i < m; ++i) {
      w = wedge(w, PolyForm::term(dim, ts[i].mono, ts[i].coef));
      if (w.is_zero()) return;
    }
    for (const auto& [s, f] : it->second.comp) out.add(s, w * scalar_of(f));
  };

  auto expand = [&](auto&& self, size_t level) -> void {
    if (level == m) {
      finish(chosen);
      return;
    }
    for (const auto& [s, f] : args[level].comp) {
      int sd = degrees_of.symbol(s).degree;
      for (const auto& [mono, c] : f.terms()) {
        chosen[level] = Triple{s, mono, c, sd, mono.degree()};
        self(self, level + 1);
      }
    }
  };
  expand(expand, 0);
  return out;
}

// Arity above the table's reach means the operation is zero, not an error.
Element bracket_or_zero(const SLieAlgebra& a, const std::vector<Element>& args, int dim) {
  if (static_cast<int>(args.size()) > a.max_arity()) return Element(dim);
  return apply_table(a, a.bracket_table(), args, dim);
}

int common_dim(const std::vector<Element>& args) {
  if (args.empty()) throw InputError("empty argument list");
  int dim = args.front().dim;
  for (const auto& e : args)
    if (e.dim != dim) throw InputError("element dimension mismatch");
  return dim;
}

}  // namespace

Element differential(const SLieAlgebra& a, const Element& e) {
  Element out(e.dim);
  for (const auto& [s, f] : e.comp) {
    for (const auto& [w, g] : a.differential_entry(s).comp) out.add(w, f * scalar_of(g));
    out.add(s, d(f) * parity(a.symbol(s).degree));
  }
  return out;
}

Element bracket(const SLieAlgebra& a, const std::vector<Element>& args) {
  int m = static_cast<int>(args.size());
  if (m < 2 || m > a.max_arity()) throw InputError("bracket arity out of range 2..A");
  int dim = common_dim(args);
  return apply_table(a, a.bracket_table(), args, dim);
}

Element curvature(const SLieAlgebra& a, const Element& e) {
  if (!is_homogeneous(a, e, 0))
    throw PreconditionError("curvature input must be homogeneous of degree 0");
  Element out = differential(a, e);
  int top = std::min(a.max_arity(), a.truncation());
  for (int m = 2; m <= top; ++m) {
    std::vector<Element> args(m, e);
    out += bracket(a, args) * inv_factorial(m);
  }
  return out;
}

bool is_homogeneous(const SLieAlgebra& a, const Element& e, int d) {
  for (const auto& [s, f] : e.comp) {
    int sd = a.symbol(s).degree;
    for (const auto& [m, c] : f.terms()) {
      (void)c;
      if (sd + m.degree() != d) return false;
    }
  }
  return true;
}

int min_weight(const SLieAlgebra& a, const Element& e) {
  int w = a.truncation() + 1;
  for (const auto& [s, f] : e.comp) {
    (void)f;
    w = std::min(w, a.symbol(s).weight);
  }
  return w;
}

Element weight_part(const SLieAlgebra& a, const Element& e, int w) {
  Element out(e.dim);
  for (const auto& [s, f] : e.comp)
    if (a.symbol(s).weight == w) out.add(s, f);
  return out;
}

Element weight_tail(const SLieAlgebra& a, const Element& e, int w) {
  Element out(e.dim);
  for (const auto& [s, f] : e.comp)
    if (a.symbol(s).weight >= w) out.add(s, f);
  return out;
}

// ---------------------------------------------------------------------------
// check_slie

namespace {

// All sorted arity-m tuples of symbol indices with total weight <= cap.
void enumerate_tuples(const SLieAlgebra& a, int m, int cap,
                      const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> tuple;
  auto rec = [&](auto&& self, int from, int weight_left, int slots) -> void {
    if (slots == 0) {
      visit(tuple);
      return;
    }
    for (int s = from; s < a.symbol_count(); ++s) {
      int w = a.symbol(s).weight;
      if (w * slots > weight_left) continue;
      tuple.push_back(s);
      self(self, s, weight_left - w, slots - 1);
      tuple.pop_back();
    }
  };
  rec(rec, 0, cap, m);
}

// Koszul sign (on symbol degrees) of pulling the subset positions to the
// front, preserving relative order on both sides.
Rational unshuffle_sign(const SLieAlgebra& a, const std::vector<int>& tuple,
                        const std::vector<bool>& in_subset) {
  int parity_acc = 0;
  int m = static_cast<int>(tuple.size());
  for (int i = 0; i < m; ++i) {
    if (in_subset[i]) continue;
    for (int j = i + 1; j < m; ++j) {
      if (!in_subset[j]) continue;
      if ((a.symbol(tuple[i]).degree % 2 != 0) && (a.symbol(tuple[j]).degree % 2 != 0))
        ++parity_acc;
    }
  }
  return parity(parity_acc);
}

// The full shifted-Jacobi combination for one sorted tuple; zero iff the
// relation holds there.
Element jacobi_combination(const SLieAlgebra& a, const std::vector<int>& tuple) {
  int m = static_cast<int>(tuple.size());
  std::vector<Element> args;
  args.reserve(m);
  for (int s : tuple) args.push_back(basis_element(s));

  Element total(0);
  if (m == 1) {
    total += differential(a, a.differential_entry(tuple[0]));
    return total;
  }
  if (m <= a.max_arity()) {
    total += differential(a, bracket_or_zero(a, args, 0));
    int prefix = 0;
    for (int i = 0; i < m; ++i) {
      std::vector<Element> with_d = args;
      with_d[i] = a.differential_entry(tuple[i]);
      total += bracket_or_zero(a, with_d, 0) * parity(prefix);
      prefix += a.symbol(tuple[i]).degree;
    }
  }
  for (int k = 2; k <= m - 1; ++k) {
    std::vector<bool> in_subset(m, false);
    std::fill(in_subset.begin(), in_subset.begin() + k, true);
    // enumerate k-subsets as sorted position lists via prev_permutation on the mask
    std::vector<bool> mask = in_subset;
    do {
      std::vector<Element> inner_args;
      std::vector<Element> outer_args;
      for (int i = 0; i < m; ++i)
        if (mask[i]) inner_args.push_back(args[i]);
      outer_args.push_back(bracket_or_zero(a, inner_args, 0));
      for (int i = 0; i < m; ++i)
        if (!mask[i]) outer_args.push_back(args[i]);
      total += bracket_or_zero(a, outer_args, 0) * unshuffle_sign(a, tuple, mask);
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  return total;
}

}  // namespace

std::vector<std::string> check_slie(const SLieAlgebra& a) {
  std::vector<std::string> report;

  for (int v = 0; v < a.symbol_count(); ++v) {
    const Element& dv = a.differential_entry(v);
    for (const auto& [w, f] : dv.comp) {
      (void)f;
      if (a.symbol(w).degree != a.symbol(v).degree + 1)
        report.push_back("differential of " + a.symbol(v).name + ": component " +
                         a.symbol(w).name + " is not of degree " +
                         std::to_string(a.symbol(v).degree + 1));
      if (a.symbol(w).weight < a.symbol(v).weight)
        report.push_back("differential of " + a.symbol(v).name + ": component " +
                         a.symbol(w).name + " drops the filtration weight");
    }
  }

  for (const auto& [key, value] : a.bracket_table()) {
    int deg_sum = 0, weight_sum = 0;
    bool repeated_odd = false;
    for (size_t i = 0; i < key.size(); ++i) {
      deg_sum += a.symbol(key[i]).degree;
      weight_sum += a.symbol(key[i]).weight;
      if (i > 0 && key[i] == key[i - 1] && a.symbol(key[i]).degree % 2 != 0)
        repeated_odd = true;
    }
    for (const auto& [w, f] : value.comp) {
      (void)f;
      if (a.symbol(w).degree != deg_sum + 1)
        report.push_back("bracket " + tuple_names(a, key) + ": component " + a.symbol(w).name +
                         " is not of degree " + std::to_string(deg_sum + 1));
      if (a.symbol(w).weight < weight_sum)
        report.push_back("bracket " + tuple_names(a, key) + ": component " + a.symbol(w).name +
                         " has weight below " + std::to_string(weight_sum));
    }
    if (repeated_odd && !value.is_zero())
      report.push_back("bracket " + tuple_names(a, key) +
                       ": repeated odd symbol forces a zero value");
  }

  for (int m = 1; m <= a.max_arity() + 1; ++m) {
    enumerate_tuples(a, m, a.truncation(), [&](const std::vector<int>& tuple) {
      Element total = jacobi_combination(a, tuple);
      if (!total.is_zero())
        report.push_back("Jacobi relation fails at " + tuple_names(a, tuple) + ": residual " +
                         to_string(a, total));
    });
  }
  return report;
}

// ---------------------------------------------------------------------------
// InftyMorphism

InftyMorphism::InftyMorphism(SLieAlgebra source, SLieAlgebra target)
    : source_(std::move(source)), target_(std::move(target)) {
  if (source_.truncation() != target_.truncation())
    throw InputError("morphism endpoints must share the truncation depth");
}

void InftyMorphism::set_taylor(const std::vector<int>& inputs, const Element& value) {
  if (inputs.empty()) throw InputError("taylor arity must be >= 1");
  if (!is_sorted_key(inputs)) throw InputError("taylor key must be sorted");
  for (int s : inputs)
    if (s < 0 || s >= source_.symbol_count()) throw InputError("taylor key: bad symbol index");
  if (!value.is_zero() && value.dim != 0) throw InputError("taylor value must be dim 0");
  for (const auto& [s, f] : value.comp) {
    (void)f;
    if (s < 0 || s >= target_.symbol_count()) throw InputError("taylor value: bad symbol index");
  }
  if (value.is_zero())
    taylor_.erase(inputs);
  else
    taylor_[inputs] = value;
}

int InftyMorphism::max_taylor_arity() const {
  int m = 1;
  for (const auto& [key, value] : taylor_) {
    (void)value;
    m = std::max(m, static_cast<int>(key.size()));
  }
  return m;
}

InftyMorphism identity_morphism(const SLieAlgebra& a) {
  InftyMorphism u(a, a);
  for (int s = 0; s < a.symbol_count(); ++s) u.set_taylor({s}, basis_element(s));
  return u;
}

Element apply_taylor(const InftyMorphism& u, const std::vector<Element>& args) {
  int dim = common_dim(args);
  return apply_table(u.source(), u.taylor_table(), args, dim);
}

Element pushforward(const InftyMorphism& u, const Element& alpha) {
  if (!is_homogeneous(u.source(), alpha, 0))
    throw PreconditionError("pushforward input must be homogeneous of degree 0");
  Element out(alpha.dim);
  if (alpha.is_zero()) return out;
  int top = std::min(u.max_taylor_arity(), u.source().truncation());
  for (int m = 1; m <= top; ++m) {
    std::vector<Element> args(m, alpha);
    out += apply_taylor(u, args) * inv_factorial(m);
  }
  return out;
}

namespace {

// LHS minus RHS of the intertwining relation for one sorted source tuple.
Element intertwining_combination(const InftyMorphism& u, const std::vector<int>& tuple) {
  const SLieAlgebra& src = u.source();
  const SLieAlgebra& tgt = u.target();
  int m = static_cast<int>(tuple.size());
  std::vector<Element> args;
  args.reserve(m);
  for (int s : tuple) args.push_back(basis_element(s));

  Element lhs(0);
  // k = 1: differential inserted in place.
  {
    int prefix = 0;
    for (int i = 0; i < m; ++i) {
      std::vector<Element> with_d = args;
      with_d[i] = src.differential_entry(tuple[i]);
      lhs += apply_taylor(u, with_d) * parity(prefix);
      prefix += src.symbol(tuple[i]).degree;
    }
  }
  // k = 2..m: source bracket on an unshuffled block, then the Taylor map.
  for (int k = 2; k <= m; ++k) {
    std::vector<bool> mask(m, false);
    std::fill(mask.begin(), mask.begin() + k, true);
    do {
      std::vector<Element> inner_args;
      std::vector<Element> outer_args;
      for (int i = 0; i < m; ++i)
        if (mask[i]) inner_args.push_back(args[i]);
      outer_args.push_back(bracket_or_zero(src, inner_args, 0));
      for (int i = 0; i < m; ++i)
        if (!mask[i]) outer_args.push_back(args[i]);
      lhs += apply_taylor(u, outer_args) * unshuffle_sign(src, tuple, mask);
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }

  Element rhs(0);
  // Partitions of the positions as restricted growth strings; blocks are
  // ordered by first occurrence, which is also ascending minimal position.
  std::vector<int> rgs(m, 0);
  auto handle_partition = [&](int blocks) {
    if (blocks == 1) {
      rhs += differential(tgt, apply_taylor(u, args));
      return;
    }
    std::vector<std::vector<int>> block_positions(blocks);
    for (int i = 0; i < m; ++i) block_positions[rgs[i]].push_back(i);
    // Koszul sign of rearranging (v_1 .. v_m) into block order.
    std::vector<int> order;
    for (const auto& b : block_positions) order.insert(order.end(), b.begin(), b.end());
    int parity_acc = 0;
    for (size_t x = 0; x + 1 < order.size(); ++x)
      for (size_t y = x + 1; y < order.size(); ++y)
        if (order[x] > order[y] && src.symbol(tuple[order[x]]).degree % 2 != 0 &&
            src.symbol(tuple[order[y]]).degree % 2 != 0)
          ++parity_acc;
    std::vector<Element> images;
    images.reserve(blocks);
    for (const auto& b : block_positions) {
      std::vector<Element> block_args;
      for (int i : b) block_args.push_back(args[i]);
      images.push_back(apply_taylor(u, block_args));
    }
    rhs += bracket_or_zero(tgt, images, 0) * parity(parity_acc);
  };
  auto rec = [&](auto&& self, int i, int max_used) -> void {
    if (i == m) {
      handle_partition(max_used + 1);
      return;
    }
    for (int b = 0; b <= max_used + 1; ++b) {
      rgs[i] = b;
      self(self, i + 1, std::max(max_used, b));
    }
  };
  rgs[0] = 0;
  rec(rec, 1, 0);

  return lhs - rhs;
}

}  // namespace

std::vector<std::string> check_infty_morphism(const InftyMorphism& u) {
  std::vector<std::string> report;
  const SLieAlgebra& src = u.source();
  const SLieAlgebra& tgt = u.target();

  for (const auto& [key, value] : u.taylor_table()) {
    int deg_sum = 0, weight_sum = 0;
    for (int s : key) {
      deg_sum += src.symbol(s).degree;
      weight_sum += src.symbol(s).weight;
    }
    for (const auto& [w, f] : value.comp) {
      (void)f;
      if (tgt.symbol(w).degree != deg_sum)
        report.push_back("taylor " + tuple_names(src, key) + ": component " +
                         tgt.symbol(w).name + " is not of degree " + std::to_string(deg_sum));
      if (tgt.symbol(w).weight < weight_sum)
        report.push_back("taylor " + tuple_names(src, key) + ": component " +
                         tgt.symbol(w).name + " has weight below " + std::to_string(weight_sum));
    }
  }

  int arity_cap =
      std::max({src.max_arity(), tgt.max_arity(), u.max_taylor_arity()});
  for (int m = 1; m <= arity_cap + 1; ++m) {
    enumerate_tuples(src, m, src.truncation(), [&](const std::vector<int>& tuple) {
      Element total = intertwining_combination(u, tuple);
      if (!total.is_zero())
        report.push_back("intertwining relation fails at " + tuple_names(src, tuple) +
                         ": residual " + to_string(tgt, total));
    });
  }
  return report;
}

// ---------------------------------------------------------------------------
// Twisting

SLieAlgebra twist_algebra(const SLieAlgebra& a, const Element& alpha) {
  if (alpha.dim != 0 && !alpha.is_zero()) throw InputError("twist_algebra needs a dim-0 element");
  Element c = curvature(a, alpha);
  if (!c.is_zero()) throw NotMaurerCartan(c);

  SLieAlgebra out(a.truncation(), a.max_arity());
  for (int s = 0; s < a.symbol_count(); ++s) {
    const BasisSymbol& b = a.symbol(s);
    out.add_symbol(b.name, b.degree, b.weight);
  }
  for (int s = 0; s < a.symbol_count(); ++s) {
    Element dv = a.differential_entry(s);
    for (int k = 1; k + 1 <= a.max_arity(); ++k) {
      std::vector<Element> args(k, alpha);
      args.push_back(basis_element(s));
      dv += bracket(a, args) * inv_factorial(k);
    }
    out.set_differential(s, dv);
  }
  for (int m = 2; m <= a.max_arity(); ++m) {
    enumerate_tuples(a, m, a.truncation(), [&](const std::vector<int>& tuple) {
      Element value(0);
      for (int k = 0; m + k <= a.max_arity(); ++k) {
        std::vector<Element> args(k, alpha);
        for (int s : tuple) args.push_back(basis_element(s));
        value += bracket(a, args) * inv_factorial(k);
      }
      if (!value.is_zero()) out.set_bracket(tuple, value);
    });
  }
  return out;
}

InftyMorphism twist_morphism(const InftyMorphism& u, const Element& alpha) {
  if (alpha.dim != 0 && !alpha.is_zero())
    throw InputError("twist_morphism needs a dim-0 element");
  Element c = curvature(u.source(), alpha);
  if (!c.is_zero()) throw NotMaurerCartan(c);

  SLieAlgebra new_source = twist_algebra(u.source(), alpha);
  SLieAlgebra new_target = twist_algebra(u.target(), pushforward(u, alpha));
  InftyMorphism out(new_source, new_target);
  int arity_cap = u.max_taylor_arity();
  for (int m = 1; m <= arity_cap; ++m) {
    enumerate_tuples(u.source(), m, u.source().truncation(), [&](const std::vector<int>& tuple) {
      Element value(0);
      for (int k = 0; m + k <= arity_cap; ++k) {
        std::vector<Element> args(k, alpha);
        for (int s : tuple) args.push_back(basis_element(s));
        value += apply_taylor(u, args) * inv_factorial(k);
      }
      if (!value.is_zero()) out.set_taylor(tuple, value);
    });
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quotients

QuotientResult quotient(const SLieAlgebra& a, int n) {
  if (n < 1 || n > a.truncation() + 1)
    throw PreconditionError("quotient level out of range 1..N+1");
  SLieAlgebra out(n - 1, a.max_arity());
  std::vector<int> symbol_map(a.symbol_count(), -1);
  for (int s = 0; s < a.symbol_count(); ++s) {
    const BasisSymbol& b = a.symbol(s);
    if (b.weight >= n) continue;
    symbol_map[s] = out.add_symbol(b.name, b.degree, b.weight);
  }
  QuotientResult q{std::move(out), std::move(symbol_map)};

  for (int s = 0; s < a.symbol_count(); ++s) {
    if (q.symbol_map[s] < 0) continue;
    Element v = quotient_project(q, a.differential_entry(s));
    if (!v.is_zero()) q.algebra.set_differential(q.symbol_map[s], v);
  }
  for (const auto& [key, value] : a.bracket_table()) {
    std::vector<int> new_key;
    new_key.reserve(key.size());
    bool alive = true;
    for (int s : key) {
      if (q.symbol_map[s] < 0) {
        alive = false;
        break;
      }
      new_key.push_back(q.symbol_map[s]);
    }
    if (!alive) continue;
    Element v = quotient_project(q, value);
    if (!v.is_zero()) q.algebra.set_bracket(new_key, v);
  }
  return q;
}

Element quotient_project(const QuotientResult& q, const Element& e) {
  Element out(e.dim);
  for (const auto& [s, f] : e.comp) {
    if (q.symbol_map.at(s) < 0) continue;
    out.add(q.symbol_map[s], f);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Degree shift conventions

namespace {

// (-1)^{sum_i (m-i) deg(v_i)} with 1-based i and ordinary-side degrees.
Rational decalage_sign(const std::vector<int>& ordinary_degrees) {
  int m = static_cast<int>(ordinary_degrees.size());
  int parity_acc = 0;
  for (int i = 1; i <= m; ++i) parity_acc += (m - i) * ordinary_degrees[i - 1];
  return parity(parity_acc);
}

}  // namespace

SLieAlgebra shift_convention(const OrdinaryLInfinity& l) {
  SLieAlgebra out(l.truncation, l.max_arity);
  for (const auto& b : l.symbols) out.add_symbol(b.name, b.degree - 1, b.weight);
  for (const auto& [s, v] : l.differential) out.set_differential(s, v);
  for (const auto& [key, value] : l.brackets) {
    if (!is_sorted_key(key)) throw InputError("ordinary bracket key must be sorted");
    std::vector<int> degs;
    degs.reserve(key.size());
    for (int s : key) degs.push_back(l.symbols.at(s).degree);
    Element v = value;
    v *= decalage_sign(degs);
    if (!v.is_zero()) out.set_bracket(key, v);
  }
  return out;
}

OrdinaryLInfinity unshift_convention(const SLieAlgebra& a) {
  OrdinaryLInfinity out;
  out.truncation = a.truncation();
  out.max_arity = a.max_arity();
  for (int s = 0; s < a.symbol_count(); ++s) {
    const BasisSymbol& b = a.symbol(s);
    out.symbols.push_back(BasisSymbol{b.name, b.degree + 1, b.weight});
  }
  for (int s = 0; s < a.symbol_count(); ++s) {
    const Element& v = a.differential_entry(s);
    if (!v.is_zero()) out.differential[s] = v;
  }
  for (const auto& [key, value] : a.bracket_table()) {
    std::vector<int> degs;
    degs.reserve(key.size());
    for (int s : key) degs.push_back(a.symbol(s).degree + 1);
    Element v = value;
    v *= decalage_sign(degs);
    if (!v.is_zero()) out.brackets[key] = v;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Componentwise simplicial operations

Element element_face(const Element& e, int i) {
  Element out(e.dim - 1);
  for (const auto& [s, f] : e.comp) out.add(s, simplicial_face(f, i));
  return out;
}

Element element_degeneracy(const Element& e, int j) {
  Element out(e.dim + 1);
  for (const auto& [s, f] : e.comp) out.add(s, simplicial_degeneracy(f, j));
  return out;
}

Element element_vertex(const Element& e, int i) {
  Element out(0);
  for (const auto& [s, f] : e.comp) {
    Rational c = eval_vertex(f, i);
    if (c != 0) out.add(s, PolyForm::scalar(0, c));
  }
  return out;
}

Element element_h(const SLieAlgebra& a, const Element& e, int i) {
  Element out(e.dim);
  for (const auto& [s, f] : e.comp) out.add(s, h_op(i, f) * parity(a.symbol(s).degree));
  return out;
}

Element element_substitute_var(const Element& e, int var, const PolyForm& value) {
  Element out(e.dim);
  for (const auto& [s, f] : e.comp) out.add(s, substitute_var(f, var, value));
  return out;
}

Element element_rename_vars(const Element& e, int new_dim, const std::vector<int>& remap) {
  Element out(new_dim);
  for (const auto& [s, f] : e.comp) out.add(s, rename_vars(f, new_dim, remap));
  return out;
}

Element element_scale_form(const Element& e, const PolyForm& f) {
  if (f != f.degree_part(0)) throw InputError("element_scale_form needs a 0-form");
  Element out(e.dim);
  for (const auto& [s, g] : e.comp) out.add(s, wedge(f, g));
  return out;
}

// ---------------------------------------------------------------------------
// Associated graded pieces

int GradedPiece::position(int degree, int sym) const {
  int k = degree - d_min;
  if (k < 0 || k >= degree_count()) return -1;
  const auto& slot = basis[k];
  auto it = std::lower_bound(slot.begin(), slot.end(), sym);
  if (it == slot.end() || *it != sym) return -1;
  return static_cast<int>(it - slot.begin());
}

GradedPiece graded_piece(const SLieAlgebra& a, int n) {
  GradedPiece g;
  g.weight = n;
  std::vector<int> syms;
  for (int s = 0; s < a.symbol_count(); ++s)
    if (a.symbol(s).weight == n) syms.push_back(s);
  if (syms.empty()) {
    g.d_min = 0;
    g.complex = CochainComplex{0, {}, {}};
    return g;
  }
  int d_min = a.symbol(syms.front()).degree, d_max = d_min;
  for (int s : syms) {
    d_min = std::min(d_min, a.symbol(s).degree);
    d_max = std::max(d_max, a.symbol(s).degree);
  }
  g.d_min = d_min;
  g.basis.assign(d_max - d_min + 1, {});
  for (int s : syms) g.basis[a.symbol(s).degree - d_min].push_back(s);

  g.complex.d_min = d_min;
  for (const auto& slot : g.basis) g.complex.dims.push_back(static_cast<int>(slot.size()));
  for (int k = 0; k + 1 < g.degree_count(); ++k) {
    Matrix m(g.complex.dims[k + 1], g.complex.dims[k]);
    for (int col = 0; col < g.complex.dims[k]; ++col) {
      int v = g.basis[k][col];
      for (const auto& [w, f] : a.differential_entry(v).comp) {
        if (a.symbol(w).weight != n) continue;
        int row = g.position(d_min + k + 1, w);
        if (row >= 0) m.set(row, col, scalar_of(f));
      }
    }
    g.complex.diff.push_back(std::move(m));
  }
  return g;
}

Vec graded_coordinates(const SLieAlgebra& a, const GradedPiece& g, int degree, const Element& e) {
  Vec out;
  for (const auto& [s, f] : e.comp) {
    if (a.symbol(s).weight != g.weight || a.symbol(s).degree != degree) continue;
    int pos = g.position(degree, s);
    if (pos < 0) continue;
    Rational c = scalar_of(f);
    if (c != 0) out[pos] = c;
  }
  return out;
}

Element graded_element(const GradedPiece& g, int degree, const Vec& v) {
  Element out(0);
  int k = degree - g.d_min;
  for (const auto& [pos, c] : v) out.add(g.basis.at(k).at(pos), PolyForm::scalar(0, c));
  return out;
}

std::string to_string(const SLieAlgebra& a, const Element& e) {
  if (e.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [s, f] : e.comp) {
    if (!first) os << " + ";
    first = false;
    os << a.symbol(s).name << "*(" << to_string(f) << ")";
  }
  return os.str();
}

}  // namespace lmc
