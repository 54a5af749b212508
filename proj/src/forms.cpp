#include "lmc/forms.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace lmc {

namespace {

// (-1)^k
int parity(int k) { return (k % 2 == 0) ? 1 : -1; }

Rational binom(int n, int k) {
  if (k < 0 || k > n) return Rational(0);
  return Rational(factorial(n), factorial(k) * factorial(n - k));
}

// Integral over the standard k-simplex {s_i >= 0, sum <= 1} of the monomial
// with the given exponents: prod(e_i!) / (k + sum e_i)!.
Rational dirichlet(const std::vector<int>& expo) {
  int k = static_cast<int>(expo.size());
  Integer num = 1;
  int total = 0;
  for (int e : expo) {
    num *= factorial(e);
    total += e;
  }
  return Rational(num, factorial(k + total));
}

// Sign of dt_j ∧ dt_K relative to dt_{K ∪ {j}}; 0 if j already occurs.
int insert_sign(const std::vector<int>& dts, int j, std::vector<int>* merged) {
  int before = 0;
  for (int k : dts) {
    if (k == j) return 0;
    if (k < j) ++before;
  }
  if (merged) {
    merged->clear();
    merged->reserve(dts.size() + 1);
    bool placed = false;
    for (int k : dts) {
      if (!placed && k > j) {
        merged->push_back(j);
        placed = true;
      }
      merged->push_back(k);
    }
    if (!placed) merged->push_back(j);
  }
  return parity(before);
}

}  // namespace

int FormMonomial::poly_degree() const {
  int s = 0;
  for (int e : expo) s += e;
  return s;
}

PolyForm PolyForm::scalar(int dim, const Rational& c) {
  PolyForm f(dim);
  f.add_term(FormMonomial::one(dim), c);
  return f;
}

PolyForm PolyForm::variable(int dim, int i) {
  if (i < 1 || i > dim) throw std::out_of_range("PolyForm::variable");
  FormMonomial m = FormMonomial::one(dim);
  m.expo[i - 1] = 1;
  return term(dim, m, Rational(1));
}

PolyForm PolyForm::dt(int dim, int i) {
  if (i < 1 || i > dim) throw std::out_of_range("PolyForm::dt");
  FormMonomial m = FormMonomial::one(dim);
  m.dts = {i};
  return term(dim, m, Rational(1));
}

PolyForm PolyForm::term(int dim, FormMonomial m, const Rational& c) {
  PolyForm f(dim);
  f.add_term(m, c);
  return f;
}

void PolyForm::add_term(const FormMonomial& m, const Rational& c) {
  if (c == 0) return;
  if (static_cast<int>(m.expo.size()) != dim_)
    throw std::invalid_argument("PolyForm term dimension mismatch");
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

PolyForm& PolyForm::operator+=(const PolyForm& o) {
  if (dim_ != o.dim_ && !o.terms_.empty())
    throw std::invalid_argument("PolyForm dimension mismatch");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

PolyForm& PolyForm::operator-=(const PolyForm& o) {
  if (dim_ != o.dim_ && !o.terms_.empty())
    throw std::invalid_argument("PolyForm dimension mismatch");
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

PolyForm& PolyForm::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

PolyForm PolyForm::degree_part(int k) const {
  PolyForm out(dim_);
  for (const auto& [m, c] : terms_)
    if (m.degree() == k) out.add_term(m, c);
  return out;
}

int PolyForm::max_poly_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.poly_degree());
  return d;
}

PolyForm wedge(const PolyForm& a, const PolyForm& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("wedge dimension mismatch");
  PolyForm out(a.dim());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      // merge dt lists, counting inversions across the pair
      int inversions = 0;
      bool clash = false;
      for (int x : ma.dts) {
        for (int y : mb.dts) {
          if (x == y) {
            clash = true;
            break;
          }
          if (x > y) ++inversions;
        }
        if (clash) break;
      }
      if (clash) continue;
      FormMonomial m;
      m.expo.resize(a.dim());
      for (int i = 0; i < a.dim(); ++i) m.expo[i] = ma.expo[i] + mb.expo[i];
      m.dts.resize(ma.dts.size() + mb.dts.size());
      std::merge(ma.dts.begin(), ma.dts.end(), mb.dts.begin(), mb.dts.end(),
                 m.dts.begin());
      out.add_term(m, ca * cb * parity(inversions));
    }
  }
  return out;
}

PolyForm d(const PolyForm& a) {
  PolyForm out(a.dim());
  for (const auto& [m, c] : a.terms()) {
    for (int i = 0; i < a.dim(); ++i) {
      if (m.expo[i] == 0) continue;
      std::vector<int> merged;
      int sign = insert_sign(m.dts, i + 1, &merged);
      if (sign == 0) continue;
      FormMonomial nm;
      nm.expo = m.expo;
      nm.expo[i] -= 1;
      nm.dts = std::move(merged);
      out.add_term(nm, c * m.expo[i] * sign);
    }
  }
  return out;
}

PolyForm polyform_pow(const PolyForm& a, int k) {
  PolyForm out = PolyForm::scalar(a.dim(), Rational(1));
  for (int i = 0; i < k; ++i) out = wedge(out, a);
  return out;
}

namespace {

// Substitutes t_var := value (a 0-form) and dt_var := dvalue inside the
// normalized coordinates of a, leaving the variable unused in the result.
PolyForm substitute(const PolyForm& a, int var, const PolyForm& value,
                    const PolyForm& dvalue) {
  PolyForm out(a.dim());
  for (const auto& [m, c] : a.terms()) {
    // the part of the monomial not involving var
    FormMonomial rest = m;
    int e = rest.expo[var - 1];
    rest.expo[var - 1] = 0;
    bool has_dt = std::find(rest.dts.begin(), rest.dts.end(), var) != rest.dts.end();
    PolyForm piece = PolyForm::term(a.dim(), rest, c);
    if (has_dt) {
      // dt_K = sign * dt_var ∧ dt_{K \ var}; replace dt_var by dvalue.
      std::vector<int> remaining;
      int before = 0;
      for (int k : rest.dts) {
        if (k == var) continue;
        if (k < var) ++before;
        remaining.push_back(k);
      }
      FormMonomial mr = rest;
      mr.dts = remaining;
      piece = wedge(dvalue, PolyForm::term(a.dim(), mr, c * parity(before)));
    }
    if (e > 0) piece = wedge(polyform_pow(value, e), piece);
    out += piece;
  }
  return out;
}

// Injectively renames variables; remap[old-1] is the new 1-based index or 0 if
// the variable must not occur.
PolyForm renumber(const PolyForm& a, int new_dim, const std::vector<int>& remap) {
  PolyForm out(new_dim);
  for (const auto& [m, c] : a.terms()) {
    FormMonomial nm = FormMonomial::one(new_dim);
    bool dead = false;
    for (int i = 0; i < a.dim(); ++i) {
      if (m.expo[i] == 0) continue;
      if (remap[i] == 0) {
        dead = true;
        break;
      }
      nm.expo[remap[i] - 1] = m.expo[i];
    }
    if (dead) continue;
    for (int k : m.dts) {
      if (remap[k - 1] == 0) {
        dead = true;
        break;
      }
      nm.dts.push_back(remap[k - 1]);
    }
    if (dead) continue;
    // remap is monotone in all our uses, so dts stays sorted; sort defensively
    std::sort(nm.dts.begin(), nm.dts.end());
    out.add_term(nm, c);
  }
  return out;
}

}  // namespace

PolyForm substitute_var(const PolyForm& a, int var, const PolyForm& value) {
  if (var < 1 || var > a.dim()) throw std::out_of_range("substitute_var index");
  if (value.dim() != a.dim()) throw std::invalid_argument("substitute_var dim mismatch");
  if (value != value.degree_part(0)) throw std::invalid_argument("substitute_var value must be a 0-form");
  return substitute(a, var, value, d(value));
}

PolyForm rename_vars(const PolyForm& a, int new_dim, const std::vector<int>& remap) {
  if (static_cast<int>(remap.size()) != a.dim())
    throw std::invalid_argument("rename_vars remap size mismatch");
  std::vector<bool> used(new_dim, false);
  for (int v : remap) {
    if (v < 0 || v > new_dim) throw std::out_of_range("rename_vars target index");
    if (v > 0) {
      if (used[v - 1]) throw std::invalid_argument("rename_vars not injective");
      used[v - 1] = true;
    }
  }
  return renumber(a, new_dim, remap);
}

PolyForm integrate_from_zero(const PolyForm& a) {
  if (a.dim() != 1) throw std::invalid_argument("integrate_from_zero needs dim 1");
  PolyForm out(1);
  for (const auto& [m, c] : a.terms()) {
    if (!m.dts.empty()) throw std::invalid_argument("integrate_from_zero needs a 0-form");
    FormMonomial nm = m;
    nm.expo[0] += 1;
    out.add_term(nm, c / Rational(nm.expo[0]));
  }
  return out;
}

PolyForm simplicial_face(const PolyForm& a, int i) {
  int n = a.dim();
  if (i < 0 || i > n) throw std::out_of_range("simplicial_face index");
  if (n == 0) throw std::invalid_argument("simplicial_face on a point");
  if (i >= 1) {
    // t_i := 0 (dt_i := 0), then close the gap.
    PolyForm killed(n);
    for (const auto& [m, c] : a.terms()) {
      if (m.expo[i - 1] != 0) continue;
      if (std::find(m.dts.begin(), m.dts.end(), i) != m.dts.end()) continue;
      killed.add_term(m, c);
    }
    std::vector<int> remap(n, 0);
    for (int v = 1; v <= n; ++v) {
      if (v < i) remap[v - 1] = v;
      if (v > i) remap[v - 1] = v - 1;
    }
    return renumber(killed, n - 1, remap);
  }
  // i == 0: on the face, t_1 = 1 - t_2 - ... - t_n becomes the new implicit
  // coordinate. Substitute it away, then shift every index down.
  PolyForm value = PolyForm::scalar(n, Rational(1));
  PolyForm dvalue(n);
  for (int v = 2; v <= n; ++v) {
    value -= PolyForm::variable(n, v);
    dvalue -= PolyForm::dt(n, v);
  }
  PolyForm sub = substitute(a, 1, value, dvalue);
  std::vector<int> remap(n, 0);
  for (int v = 2; v <= n; ++v) remap[v - 1] = v - 1;
  return renumber(sub, n - 1, remap);
}

PolyForm simplicial_degeneracy(const PolyForm& a, int j) {
  int n = a.dim();
  if (j < 0 || j > n) throw std::out_of_range("simplicial_degeneracy index");
  if (j == 0) {
    // t_0 := t_0 + t_1 is implicit; every stored variable moves up by one.
    std::vector<int> remap(n);
    for (int v = 1; v <= n; ++v) remap[v - 1] = v + 1;
    return renumber(a, n + 1, remap);
  }
  // Variables above j move up; t_j := t_j + t_{j+1}.
  std::vector<int> remap(n);
  for (int v = 1; v <= n; ++v) remap[v - 1] = (v <= j) ? v : v + 1;
  PolyForm shifted = renumber(a, n + 1, remap);
  PolyForm value = PolyForm::variable(n + 1, j) + PolyForm::variable(n + 1, j + 1);
  PolyForm dvalue = PolyForm::dt(n + 1, j) + PolyForm::dt(n + 1, j + 1);
  return substitute(shifted, j, value, dvalue);
}

Rational eval_vertex(const PolyForm& a, int i) {
  if (i < 0 || i > a.dim()) throw std::out_of_range("eval_vertex index");
  Rational out(0);
  for (const auto& [m, c] : a.terms()) {
    if (!m.dts.empty()) continue;
    bool live = true;
    for (int k = 0; k < a.dim(); ++k) {
      if (m.expo[k] != 0 && k != i - 1) {
        live = false;
        break;
      }
    }
    if (live) out += c;  // t_i^e = 1 at the vertex; all other factors are 1
  }
  return out;
}

PolyForm h_op(int i, const PolyForm& a) {
  int n = a.dim();
  if (i < 0 || i > n) throw std::out_of_range("h_op vertex");
  PolyForm out(n);
  for (const auto& [m, c] : a.terms()) {
    int mdeg = m.degree();
    if (mdeg == 0) continue;
    // Expand the polynomial part along phi_i(u, t) = u t + (1-u) e_i as a
    // polynomial in u; entries: u-degree -> monomial exponents and scale.
    // Every variable except t_i contributes u^{e_k} t_k^{e_k}; t_i (when
    // i >= 1) contributes binomial terms (u t_i + 1 - u)^{e_i}.
    int base_u = mdeg - 1;
    int fixed_u = 0;
    for (int k = 0; k < n; ++k)
      if (k != i - 1) fixed_u += m.expo[k];

    struct UPiece {
      int a;      // exponent kept on t_i
      Rational w; // binomial weight, integrated against u below
      int up;     // u-degree contributed, plus (1-u)-degree handled in beta
      int q;      // (1-u)-degree
    };
    std::vector<UPiece> pieces;
    if (i >= 1 && m.expo[i - 1] > 0) {
      int e = m.expo[i - 1];
      for (int aa = 0; aa <= e; ++aa)
        pieces.push_back({aa, binom(e, aa), aa, e - aa});
    } else {
      pieces.push_back({0, Rational(1), 0, 0});
    }

    for (size_t j = 0; j < m.dts.size(); ++j) {
      int kj = m.dts[j];
      std::vector<int> rest;
      for (size_t l = 0; l < m.dts.size(); ++l)
        if (l != j) rest.push_back(m.dts[l]);

      for (const auto& piece : pieces) {
        // integral of u^{base_u + fixed_u + piece.up} (1-u)^{piece.q}
        int p = base_u + fixed_u + piece.up;
        Rational beta(factorial(p) * factorial(piece.q), factorial(p + piece.q + 1));
        Rational weight = c * parity(static_cast<int>(j)) * piece.w * beta;
        if (weight == 0) continue;

        FormMonomial nm = FormMonomial::one(n);
        for (int k = 0; k < n; ++k)
          if (k != i - 1) nm.expo[k] = m.expo[k];
        if (i >= 1) nm.expo[i - 1] = piece.a;
        nm.dts = rest;

        // prefactor (t_{kj} - delta_{i,kj})
        FormMonomial with_t = nm;
        with_t.expo[kj - 1] += 1;
        out.add_term(with_t, weight);
        if (i == kj) out.add_term(nm, -weight);
      }
    }
  }
  return out;
}

PolyForm whitney(int n, const std::vector<int>& face) {
  if (face.empty()) throw std::invalid_argument("whitney: empty face");
  for (size_t j = 0; j + 1 < face.size(); ++j)
    if (face[j] >= face[j + 1]) throw std::invalid_argument("whitney: face not increasing");
  if (face.front() < 0 || face.back() > n) throw std::out_of_range("whitney: vertex");

  auto coord = [&](int v) {
    if (v >= 1) return PolyForm::variable(n, v);
    PolyForm t0 = PolyForm::scalar(n, Rational(1));
    for (int k = 1; k <= n; ++k) t0 -= PolyForm::variable(n, k);
    return t0;
  };
  auto dcoord = [&](int v) {
    if (v >= 1) return PolyForm::dt(n, v);
    PolyForm dt0(n);
    for (int k = 1; k <= n; ++k) dt0 -= PolyForm::dt(n, k);
    return dt0;
  };

  int k = static_cast<int>(face.size()) - 1;
  PolyForm out(n);
  for (int j = 0; j <= k; ++j) {
    PolyForm termf = coord(face[j]) * Rational(parity(j) * factorial(k));
    for (int l = 0; l <= k; ++l) {
      if (l == j) continue;
      termf = wedge(termf, dcoord(face[l]));
    }
    out += termf;
  }
  return out;
}

Rational integrate_face(const PolyForm& a, const std::vector<int>& face) {
  int n = a.dim();
  for (size_t j = 0; j + 1 < face.size(); ++j)
    if (face[j] >= face[j + 1])
      throw std::invalid_argument("integrate_face: face not increasing");
  if (face.empty() || face.front() < 0 || face.back() > n)
    throw std::invalid_argument("integrate_face: bad face");

  // Restrict by deleting the complement vertices from the top down.
  PolyForm restricted = a;
  for (int v = n; v >= 0; --v) {
    if (std::find(face.begin(), face.end(), v) != face.end()) continue;
    restricted = simplicial_face(restricted, v);
  }
  int k = static_cast<int>(face.size()) - 1;
  if (k == 0) return eval_vertex(restricted, 0);

  Rational total(0);
  std::vector<int> full(k);
  for (int j = 0; j < k; ++j) full[j] = j + 1;
  for (const auto& [m, c] : restricted.terms())
    if (m.dts == full) total += c * dirichlet(m.expo);
  return total;
}

void ElementaryCochain::add(const std::vector<int>& face, const Rational& c) {
  if (c == 0) return;
  auto it = coef.find(face);
  if (it == coef.end()) {
    coef.emplace(face, c);
  } else {
    it->second += c;
    if (it->second == 0) coef.erase(it);
  }
}

ElementaryCochain cochain_d(const ElementaryCochain& c) {
  ElementaryCochain out{c.dim, {}};
  for (const auto& [face, v] : c.coef) {
    for (int j = 0; j <= c.dim; ++j) {
      std::vector<int> bigger;
      int pos = insert_sign(face, j, &bigger);
      if (pos == 0) continue;
      out.add(bigger, v * pos);
    }
  }
  return out;
}

ElementaryCochain cochain_face(const ElementaryCochain& c, int i) {
  ElementaryCochain out{c.dim - 1, {}};
  for (const auto& [face, v] : c.coef) {
    // keep faces contained in the i-th coface image, relabeled
    std::vector<int> mapped;
    bool dead = false;
    for (int w : face) {
      if (w == i) {
        dead = true;
        break;
      }
      mapped.push_back(w < i ? w : w - 1);
    }
    if (!dead) out.add(mapped, v);
  }
  return out;
}

ElementaryCochain cochain_degeneracy(const ElementaryCochain& c, int j) {
  ElementaryCochain out{c.dim + 1, {}};
  // pullback along the codegeneracy vertex map sigma_j: v -> v (v <= j),
  // v-1 (v > j); a face of the target maps to a face of the source unless it
  // contains both j and j+1.
  for (int mask = 1; mask < (1 << (c.dim + 2)); ++mask) {
    std::vector<int> face;
    for (int w = 0; w <= c.dim + 1; ++w)
      if (mask & (1 << w)) face.push_back(w);
    bool both = std::find(face.begin(), face.end(), j) != face.end() &&
                std::find(face.begin(), face.end(), j + 1) != face.end();
    if (both) continue;
    std::vector<int> src;
    for (int w : face) src.push_back(w <= j ? w : w - 1);
    auto it = c.coef.find(src);
    if (it != c.coef.end()) out.add(face, it->second);
  }
  return out;
}

PolyForm whitney_realization(const ElementaryCochain& c) {
  PolyForm out(c.dim);
  for (const auto& [face, v] : c.coef) out += whitney(c.dim, face) * v;
  return out;
}

ElementaryCochain dupont_P(const PolyForm& a) {
  int n = a.dim();
  ElementaryCochain out{n, {}};
  for (int mask = 1; mask < (1 << (n + 1)); ++mask) {
    std::vector<int> face;
    for (int w = 0; w <= n; ++w)
      if (mask & (1 << w)) face.push_back(w);
    PolyForm part = a.degree_part(static_cast<int>(face.size()) - 1);
    if (part.is_zero()) continue;
    out.add(face, integrate_face(part, face));
  }
  return out;
}

PolyForm dupont_P_form(const PolyForm& a) { return whitney_realization(dupont_P(a)); }

namespace {

void dupont_s_rec(const PolyForm& reduced, int next_vertex, int n,
                  std::vector<int>& chosen, PolyForm& acc) {
  if (!chosen.empty()) {
    PolyForm term = wedge(whitney(n, chosen), reduced);
    if ((chosen.size() - 1) % 2 == 1) term *= Rational(-1);
    acc += term;
  }
  if (reduced.is_zero()) return;
  for (int v = next_vertex; v <= n; ++v) {
    chosen.push_back(v);
    dupont_s_rec(h_op(v, reduced), v + 1, n, chosen, acc);
    chosen.pop_back();
  }
}

}  // namespace

PolyForm dupont_s(const PolyForm& a) {
  // s = sum over vertex chains i_0 < ... < i_k of
  //     (-1)^k whitney(i_0..i_k) ∧ h^{i_k}( ... h^{i_0}(a) ... ).
  int n = a.dim();
  PolyForm acc(n);
  std::vector<int> chosen;
  for (int v = 0; v <= n; ++v) {
    chosen.push_back(v);
    dupont_s_rec(h_op(v, a), v + 1, n, chosen, acc);
    chosen.pop_back();
  }
  return acc;
}

std::string to_string(const PolyForm& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : a.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << rational_to_string(c) << ")";
    for (int i = 0; i < a.dim(); ++i) {
      if (m.expo[i] == 0) continue;
      os << "*t" << (i + 1);
      if (m.expo[i] > 1) os << "^" << m.expo[i];
    }
    for (int k : m.dts) os << "*dt" << k;
  }
  return os.str();
}

}  // namespace lmc
