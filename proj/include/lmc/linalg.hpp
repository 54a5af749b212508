#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lmc/rational.hpp"

namespace lmc {

// Sparse vector over Q, indexed by 0-based coordinates. Invariant: no zero
// values are stored.
using Vec = std::map<int, Rational>;

void vec_add(Vec& into, const Vec& other, const Rational& scale = Rational(1));
bool vec_is_zero(const Vec& v);

// Sparse exact matrix. Only nonzero entries are stored; writing a zero erases
// the entry. Out-of-range access is a logic error.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational at(int r, int c) const;
  void set(int r, int c, Rational v);
  void add(int r, int c, const Rational& v);

  const std::map<std::pair<int, int>, Rational>& entries() const { return e_; }

  Vec apply(const Vec& x) const;            // matrix * column vector
  Matrix multiply(const Matrix& rhs) const;  // this * rhs
  bool is_zero() const { return e_.empty(); }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::map<std::pair<int, int>, Rational> e_;
};

// Row echelon data for A (m x n), produced by Gauss-Jordan elimination with
// the deterministic pivot rule: columns are scanned left to right and the
// first unused row with a nonzero entry in the column becomes the pivot row
// (lexicographically first pivot choice). Rows are fully reduced (RREF) and
// the elimination operations are recorded so the same reduction can be
// replayed on right-hand sides.
class Echelon {
 public:
  explicit Echelon(const Matrix& a);

  int rank() const { return static_cast<int>(pivot_cols_.size()); }
  const std::vector<int>& pivot_cols() const { return pivot_cols_; }

  // Canonical solution of A x = b: every non-pivot coordinate is zero. Returns
  // nullopt when the system is inconsistent. If b = 0 the result is 0.
  std::optional<Vec> solve(const Vec& b) const;

  // Canonical kernel basis: one vector per free column, listed by ascending
  // free column, with a 1 in the free coordinate.
  std::vector<Vec> kernel_basis() const;

  // Reduces v against the row space of A (viewing rows of A as generators):
  // not used; reduction here is against the column space via solve().

 private:
  int n_ = 0;                     // number of columns (unknowns)
  std::vector<Vec> rows_;         // RREF rows, pivot rows first
  std::vector<int> pivot_cols_;   // pivot column of each pivot row
  std::vector<Vec> transform_;    // row i of the elimination matrix E (E*A = R)
  int m_ = 0;                     // original row count
};

// Canonical solution of M x = b (see Echelon::solve). One-shot convenience.
std::optional<Vec> solve_linear(const Matrix& m, const Vec& b);

std::vector<Vec> kernel_basis(const Matrix& m);
int rank(const Matrix& m);

// A cochain complex supported on the finite degree window [d_min, d_max].
// dims[k] is the dimension in degree d_min + k; diff[k] is the matrix of the
// differential from degree d_min + k to d_min + k + 1 (so diff has one entry
// fewer than dims, and the differential leaving d_max is zero by fiat).
struct CochainComplex {
  int d_min = 0;
  std::vector<int> dims;
  std::vector<Matrix> diff;

  int dim(int degree) const;
  const Matrix* differential(int degree) const;  // nullptr when out of window
  bool valid(std::string* why = nullptr) const;  // shapes and d∘d = 0
};

// Answers exactness questions in a fixed degree of a complex: whether a
// cocycle is a coboundary, and if so produces the canonical primitive.
class ExactnessOracle {
 public:
  // boundary_in: matrix of the differential landing in the degree of interest
  // (may be a 0 x n matrix when the window starts there).
  explicit ExactnessOracle(const Matrix& boundary_in);

  bool is_exact(const Vec& z) const;
  // Canonical p with (boundary_in) p = z, nullopt if z is not exact.
  std::optional<Vec> primitive(const Vec& z) const;

 private:
  Echelon ech_;
};

struct Cohomology {
  // Canonical representatives: kernel basis vectors reduced modulo the image,
  // kept when nonzero. Deterministic for a fixed complex.
  std::vector<Vec> reps;
  ExactnessOracle oracle;

  int dim() const { return static_cast<int>(reps.size()); }
};

// Cohomology of the complex in one degree. Degrees outside the window have
// zero cohomology (reps empty, oracle over an empty matrix).
Cohomology cohomology_basis(const CochainComplex& c, int degree);

// Canonical primitive of z in the given degree, nullopt if z is not exact.
// Precondition: z is a cocycle.
std::optional<Vec> primitive(const CochainComplex& c, int degree, const Vec& z);

}  // namespace lmc
