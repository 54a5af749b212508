#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "lmc/rational.hpp"

namespace lmc {

// One monomial of the polynomial de Rham algebra on the n-simplex, in the
// normal form that eliminates t_0 and dt_0 via t_0 = 1 - t_1 - ... - t_n.
// expo holds the exponents of t_1..t_n (size exactly n); dts holds the
// strictly increasing 1-based indices of the dt factors.
struct FormMonomial {
  std::vector<int> expo;
  std::vector<int> dts;

  int degree() const { return static_cast<int>(dts.size()); }
  int poly_degree() const;
  auto operator<=>(const FormMonomial&) const = default;

  static FormMonomial one(int dim) { return FormMonomial{std::vector<int>(dim, 0), {}}; }
};

// Polynomial differential form on the n-simplex with exact rational
// coefficients, stored in normal form with no zero terms.
class PolyForm {
 public:
  PolyForm() = default;
  explicit PolyForm(int dim) : dim_(dim) {}

  static PolyForm scalar(int dim, const Rational& c);
  static PolyForm variable(int dim, int i);        // t_i, 1 <= i <= dim
  static PolyForm dt(int dim, int i);              // dt_i, 1 <= i <= dim
  static PolyForm term(int dim, FormMonomial m, const Rational& c);

  int dim() const { return dim_; }
  const std::map<FormMonomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const FormMonomial& m, const Rational& c);

  PolyForm& operator+=(const PolyForm& o);
  PolyForm& operator-=(const PolyForm& o);
  PolyForm& operator*=(const Rational& c);
  friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
  friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
  friend PolyForm operator*(PolyForm a, const Rational& c) { return a *= c; }
  bool operator==(const PolyForm& o) const = default;

  // Part of the form of the given exterior degree.
  PolyForm degree_part(int k) const;
  int max_poly_degree() const;

 private:
  int dim_ = 0;
  std::map<FormMonomial, Rational> terms_;
};

PolyForm wedge(const PolyForm& a, const PolyForm& b);
PolyForm d(const PolyForm& a);
PolyForm polyform_pow(const PolyForm& a, int k);

// Pullback along the i-th coface (sets t_i := 0 and renumbers the remaining
// coordinates): a form on the n-simplex becomes one on the (n-1)-simplex.
PolyForm simplicial_face(const PolyForm& a, int i);

// Pullback along the j-th codegeneracy (substitutes t_j := t_j + t_{j+1} and
// renumbers): a form on the n-simplex becomes one on the (n+1)-simplex.
PolyForm simplicial_degeneracy(const PolyForm& a, int j);

// Substitutes t_var := value (a 0-form on the same simplex), dt_var := d(value).
// Safe for self-referential substitutions such as t_1 := 1 - t_1.
PolyForm substitute_var(const PolyForm& a, int var, const PolyForm& value);

// Injective variable renaming; remap[old-1] is the new 1-based index, or 0 when
// the variable must not occur in a. The result lives on the new_dim-simplex.
PolyForm rename_vars(const PolyForm& a, int new_dim, const std::vector<int>& remap);

// Antiderivative in t_1 vanishing at 0, for 0-forms on the 1-simplex.
PolyForm integrate_from_zero(const PolyForm& a);

// Value of the 0-form part at vertex i (t_i = 1, all other coordinates 0).
Rational eval_vertex(const PolyForm& a, int i);

// Dupont's vertex-i homotopy operator: lowers exterior degree by one and
// satisfies d h + h d = id - eval_vertex(., i) and h∘h = 0.
PolyForm h_op(int i, const PolyForm& a);

// Whitney elementary form of the face with the given strictly increasing
// vertex list, normalized so its integral over that face is 1.
PolyForm whitney(int n, const std::vector<int>& face);

// Integral over the face spanned by the listed vertices (oriented by the
// vertex order) of the pullback of the form; degree mismatches integrate to 0.
Rational integrate_face(const PolyForm& a, const std::vector<int>& face);

// Simplicial cochain on the n-simplex: a rational per face (nonempty strictly
// increasing vertex list), no zero coefficients stored.
struct ElementaryCochain {
  int dim = 0;
  std::map<std::vector<int>, Rational> coef;

  bool operator==(const ElementaryCochain&) const = default;
  void add(const std::vector<int>& face, const Rational& c);
};

// Simplicial coboundary, matching d on Whitney realizations.
ElementaryCochain cochain_d(const ElementaryCochain& c);
ElementaryCochain cochain_face(const ElementaryCochain& c, int i);
ElementaryCochain cochain_degeneracy(const ElementaryCochain& c, int j);

// Sum of coef[I] * whitney(I).
PolyForm whitney_realization(const ElementaryCochain& c);

// Dupont projection: face-integral cochain of the form.
ElementaryCochain dupont_P(const PolyForm& a);

// The projection followed by the Whitney realization, as an operator on forms.
PolyForm dupont_P_form(const PolyForm& a);

// Dupont's contraction homotopy: id - dupont_P_form = d∘s + s∘d, with
// dupont_P(dupont_s(a)) = 0, and s commutes with faces and degeneracies.
PolyForm dupont_s(const PolyForm& a);

std::string to_string(const PolyForm& a);  // debugging aid

}  // namespace lmc
