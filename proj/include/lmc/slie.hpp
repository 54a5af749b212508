#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmc/forms.hpp"
#include "lmc/linalg.hpp"

namespace lmc {

// Malformed data: bad shapes, unknown names, unsorted keys.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A well-formed input that violates a documented operation precondition.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One basis symbol of a filtered graded vector space. Filtration weights are
// integers >= 1; a symbol of weight w spans part of F_w \ F_{w+1}.
struct BasisSymbol {
  std::string name;
  int degree = 0;
  int weight = 1;

  bool operator==(const BasisSymbol&) const = default;
};

// Element of A tensor Omega_dim, stored per basis symbol as a polynomial form
// on the dim-simplex. dim = 0 is a plain algebra element (forms on the point
// are scalars). No zero forms are stored, so equality is structural.
struct Element {
  int dim = 0;
  std::map<int, PolyForm> comp;

  Element() = default;
  explicit Element(int d) : dim(d) {}

  bool operator==(const Element&) const = default;
  bool is_zero() const { return comp.empty(); }

  void add(int sym, const PolyForm& f);
  const PolyForm& at(int sym) const;  // zero form when absent

  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  Element& operator*=(const Rational& c);
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(Element a, const Rational& c) { return a *= c; }
};

// Basis element of the plain algebra (dim 0, coefficient 1).
Element basis_element(int sym);
// Dim-0 element with the given rational coefficient on one symbol.
Element scaled_basis_element(int sym, const Rational& c);
// v tensor omega for every (v, scalar) in a dim-0 element.
Element element_tensor(const Element& dim0, const PolyForm& omega);

// A shifted L-infinity algebra presented by tables: finitely many graded
// symbols with filtration weights, a degree +1 differential, and symmetric
// degree +1 multi-brackets keyed by sorted tuples of symbol indices. All
// structure is truncated at filtration depth N: weights run 1..N and
// F_{N+1} = 0. Construction is permissive about the graded/filtration rules
// for table values; check_slie reports violations instead of refusing them.
class SLieAlgebra {
 public:
  SLieAlgebra(int truncation, int max_arity);

  int truncation() const { return truncation_; }
  int max_arity() const { return max_arity_; }

  // Rejects duplicate names and weights outside 1..N. Returns the index.
  int add_symbol(const std::string& name, int degree, int weight);
  int symbol_count() const { return static_cast<int>(symbols_.size()); }
  const BasisSymbol& symbol(int i) const { return symbols_.at(i); }
  std::optional<int> find_symbol(const std::string& name) const;

  // value must be a dim-0 element.
  void set_differential(int sym, const Element& value);
  // inputs must be a sorted tuple of 2..max_arity symbol indices.
  void set_bracket(const std::vector<int>& inputs, const Element& value);

  const Element& differential_entry(int sym) const;  // zero element when unset
  const std::map<std::vector<int>, Element>& bracket_table() const { return brackets_; }

  bool operator==(const SLieAlgebra&) const = default;

 private:
  int truncation_ = 1;
  int max_arity_ = 2;
  std::vector<BasisSymbol> symbols_;
  std::map<std::string, int> by_name_;
  std::map<int, Element> differential_;
  std::map<std::vector<int>, Element> brackets_;
};

// Extended differential D = del tensor 1 + 1 tensor d on A tensor Omega_n.
Element differential(const SLieAlgebra& a, const Element& e);

// Symmetric bracket of extended elements; the arity is args.size(). Arity
// outside 2..max_arity is an InputError.
Element bracket(const SLieAlgebra& a, const std::vector<Element>& args);

// curv(e) = D(e) + sum_{m>=2} 1/m! {e,...,e}_m for homogeneous e of total
// degree 0 (symbol degree plus form degree); anything else is a
// PreconditionError.
Element curvature(const SLieAlgebra& a, const Element& e);

// True when every monomial of every component has symbol degree + exterior
// degree equal to d.
bool is_homogeneous(const SLieAlgebra& a, const Element& e, int d);

// Smallest symbol weight occurring in e; N+1 for the zero element.
int min_weight(const SLieAlgebra& a, const Element& e);

// The part of e spanned by symbols of weight exactly w / at least w.
Element weight_part(const SLieAlgebra& a, const Element& e, int w);
Element weight_tail(const SLieAlgebra& a, const Element& e, int w);

// Checks the generalized Jacobi relations on all sorted symbol tuples of
// arity 1..max_arity+1 with total weight <= N, plus the structural rules
// (degrees, weights, repeated odd symbols). Returns human-readable report
// lines; empty means the tables present a shifted L-infinity algebra.
std::vector<std::string> check_slie(const SLieAlgebra& a);

// An infinity-morphism between shifted L-infinity algebras on the same
// truncation, presented by its Taylor table: sorted source tuples of arity
// >= 1 mapped to dim-0 target elements. Degree 0, weight non-decreasing.
class InftyMorphism {
 public:
  InftyMorphism(SLieAlgebra source, SLieAlgebra target);

  const SLieAlgebra& source() const { return source_; }
  const SLieAlgebra& target() const { return target_; }

  void set_taylor(const std::vector<int>& inputs, const Element& value);
  const std::map<std::vector<int>, Element>& taylor_table() const { return taylor_; }
  int max_taylor_arity() const;

  bool operator==(const InftyMorphism&) const = default;

 private:
  SLieAlgebra source_;
  SLieAlgebra target_;
  std::map<std::vector<int>, Element> taylor_;
};

// Identity morphism of a (Taylor table = the linear identity).
InftyMorphism identity_morphism(const SLieAlgebra& a);

// Multilinear application of the Taylor table to extended source elements;
// the result lives in target tensor Omega_n.
Element apply_taylor(const InftyMorphism& u, const std::vector<Element>& args);

// U_*(alpha) = sum_{m>=1} 1/m! U'(alpha^m) for homogeneous degree-0 alpha.
Element pushforward(const InftyMorphism& u, const Element& alpha);

// Checks that the Taylor table intertwines the two structures: for every
// sorted source tuple of arity 1..(largest relevant arity)+1 with total
// weight <= N, the bracket-then-apply and apply-then-bracket expansions
// agree. Report lines as in check_slie.
std::vector<std::string> check_infty_morphism(const InftyMorphism& u);

// Thrown when twisting is attempted at a non-Maurer-Cartan element; carries
// the offending curvature.
struct NotMaurerCartan : PreconditionError {
  Element curv;
  explicit NotMaurerCartan(Element c)
      : PreconditionError("twisting requires a Maurer-Cartan element"), curv(std::move(c)) {}
};

// The algebra twisted by an MC element alpha of A: the differential becomes
// del^alpha = del + sum_k 1/k! {alpha^k, -} and the brackets gain alpha
// insertions the same way. The result passes check_slie whenever A does.
SLieAlgebra twist_algebra(const SLieAlgebra& a, const Element& alpha);

// The morphism twisted by an MC element alpha of the source: source is
// twisted by alpha, target by U_*(alpha), and the Taylor table gains alpha
// insertions: (U^alpha)_m = sum_k 1/k! U_{k+m}(alpha^k, -).
InftyMorphism twist_morphism(const InftyMorphism& u, const Element& alpha);

// Quotient by F_n: drops every symbol of weight >= n; the result is truncated
// at n-1. symbol_map sends old indices to new ones (-1 = dropped).
struct QuotientResult {
  SLieAlgebra algebra;
  std::vector<int> symbol_map;
};
QuotientResult quotient(const SLieAlgebra& a, int n);
Element quotient_project(const QuotientResult& q, const Element& e);

// An ordinary L-infinity algebra: graded antisymmetric brackets ell_m of
// degree 2-m, keyed by sorted symbol tuples; a repeated even-degree symbol
// forces the entry to vanish. Only the data carrier: validation happens by
// converting and running check_slie.
struct OrdinaryLInfinity {
  int truncation = 1;
  int max_arity = 2;
  std::vector<BasisSymbol> symbols;
  std::map<int, Element> differential;
  std::map<std::vector<int>, Element> brackets;

  bool operator==(const OrdinaryLInfinity&) const = default;
};

// Degree shift: symbols drop one degree and the brackets acquire the
// decalage sign (-1)^{sum_i (m-i) deg(v_i)} (degrees on the ordinary side),
// turning antisymmetric ell_m of degree 2-m into symmetric degree +1
// brackets. unshift_convention is the exact inverse; the round trip is the
// identity on tables.
SLieAlgebra shift_convention(const OrdinaryLInfinity& l);
OrdinaryLInfinity unshift_convention(const SLieAlgebra& a);

// Componentwise simplicial operations on extended elements. The homotopy
// element_h carries the sign (-1)^{deg v} per symbol so that
// D h + h D = id - vertex_i on A tensor Omega_n.
Element element_face(const Element& e, int i);
Element element_degeneracy(const Element& e, int j);
Element element_vertex(const Element& e, int i);  // dim-0 result
Element element_h(const SLieAlgebra& a, const Element& e, int i);
// Componentwise variable substitution (t_var := value, a 0-form).
Element element_substitute_var(const Element& e, int var, const PolyForm& value);
// Componentwise injective renaming into dimension new_dim.
Element element_rename_vars(const Element& e, int new_dim, const std::vector<int>& remap);
// Multiplies every component by a 0-form.
Element element_scale_form(const Element& e, const PolyForm& f);

// One associated-graded piece gr_n = F_n / F_{n+1} as a finite cochain
// complex: per degree the ascending list of weight-n symbol indices, and the
// weight-preserving part of the differential in that basis.
struct GradedPiece {
  int weight = 0;
  int d_min = 0;
  std::vector<std::vector<int>> basis;  // index: degree - d_min
  CochainComplex complex;

  int degree_count() const { return static_cast<int>(basis.size()); }
  // Position of a symbol inside its degree slot, -1 when absent.
  int position(int degree, int sym) const;
};
GradedPiece graded_piece(const SLieAlgebra& a, int n);

// Coordinates of the weight-n degree-d part of a dim-0 element in the graded
// basis, and back.
Vec graded_coordinates(const SLieAlgebra& a, const GradedPiece& g, int degree, const Element& e);
Element graded_element(const GradedPiece& g, int degree, const Vec& v);

std::string to_string(const SLieAlgebra& a, const Element& e);  // debugging aid

}  // namespace lmc
