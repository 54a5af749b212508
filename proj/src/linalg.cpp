#include "lmc/linalg.hpp"

#include <sstream>
#include <stdexcept>

namespace lmc {

std::string rational_to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

std::optional<Rational> rational_from_string(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::string num = s, den = "1";
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    num = s.substr(0, slash);
    den = s.substr(slash + 1);
    if (num.empty() || den.empty()) return std::nullopt;
  }
  auto is_int = [](const std::string& t, bool allow_sign) {
    size_t i = 0;
    if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  if (!is_int(num, true) || !is_int(den, false)) return std::nullopt;
  Integer d(den);
  if (d == 0) return std::nullopt;
  return Rational(Integer(num), d);
}

Integer factorial(int n) {
  Integer f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void vec_add(Vec& into, const Vec& other, const Rational& scale) {
  if (scale == 0) return;
  if (&into == &other) {
    Vec copy = other;
    vec_add(into, copy, scale);
    return;
  }
  for (const auto& [i, v] : other) {
    auto it = into.find(i);
    if (it == into.end()) {
      into.emplace(i, v * scale);
    } else {
      it->second += v * scale;
      if (it->second == 0) into.erase(it);
    }
  }
}

bool vec_is_zero(const Vec& v) { return v.empty(); }

Rational Matrix::at(int r, int c) const {
  auto it = e_.find({r, c});
  return it == e_.end() ? Rational(0) : it->second;
}

void Matrix::set(int r, int c, Rational v) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
    throw std::out_of_range("Matrix::set index");
  if (v == 0)
    e_.erase({r, c});
  else
    e_[{r, c}] = std::move(v);
}

void Matrix::add(int r, int c, const Rational& v) {
  if (v == 0) return;
  set(r, c, at(r, c) + v);
}

Vec Matrix::apply(const Vec& x) const {
  Vec out;
  for (const auto& [rc, v] : e_) {
    auto it = x.find(rc.second);
    if (it != x.end()) {
      Rational& slot = out[rc.first];
      slot += v * it->second;
    }
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

Matrix Matrix::multiply(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("Matrix::multiply shapes");
  Matrix out(rows_, rhs.cols_);
  for (const auto& [rc, v] : e_)
    for (int c = 0; c < rhs.cols_; ++c) {
      Rational w = rhs.at(rc.second, c);
      if (w != 0) out.add(rc.first, c, v * w);
    }
  return out;
}

Echelon::Echelon(const Matrix& a) : n_(a.cols()), m_(a.rows()) {
  std::vector<Vec> rows(a.rows());
  std::vector<Vec> trans(a.rows());
  for (const auto& [rc, v] : a.entries()) rows[rc.first][rc.second] = v;
  for (int i = 0; i < a.rows(); ++i) trans[i][i] = Rational(1);

  std::vector<bool> used(a.rows(), false);
  std::vector<int> pivot_row;
  for (int col = 0; col < n_; ++col) {
    int pivot = -1;
    for (int r = 0; r < a.rows(); ++r) {
      if (used[r]) continue;
      auto it = rows[r].find(col);
      if (it != rows[r].end()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    used[pivot] = true;

    Rational inv = Rational(1) / rows[pivot][col];
    if (inv != 1) {
      for (auto& [c, v] : rows[pivot]) v *= inv;
      for (auto& [c, v] : trans[pivot]) v *= inv;
    }
    // Eliminate the pivot column from every other row, earlier pivot rows
    // included, so the final matrix is fully reduced.
    for (int r = 0; r < a.rows(); ++r) {
      if (r == pivot) continue;
      auto it = rows[r].find(col);
      if (it == rows[r].end()) continue;
      Rational factor = -it->second;
      vec_add(rows[r], rows[pivot], factor);
      vec_add(trans[r], trans[pivot], factor);
    }
    pivot_cols_.push_back(col);
    pivot_row.push_back(pivot);
  }
  for (int r : pivot_row) {
    rows_.push_back(std::move(rows[r]));
    transform_.push_back(std::move(trans[r]));
  }
  // Keep the eliminated (now zero) rows' transforms: they certify the
  // consistency conditions for solve().
  for (int r = 0; r < a.rows(); ++r)
    if (!used[r]) {
      rows_.push_back(std::move(rows[r]));
      transform_.push_back(std::move(trans[r]));
    }
}

std::optional<Vec> Echelon::solve(const Vec& b) const {
  Vec x;
  int nrows = static_cast<int>(rows_.size());
  for (int i = 0; i < nrows; ++i) {
    Rational w(0);
    for (const auto& [j, c] : transform_[i]) {
      auto it = b.find(j);
      if (it != b.end()) w += c * it->second;
    }
    if (i < static_cast<int>(pivot_cols_.size())) {
      if (w != 0) x[pivot_cols_[i]] = w;
    } else if (w != 0) {
      return std::nullopt;  // inconsistent: a zero row with nonzero reduced rhs
    }
  }
  return x;
}

std::vector<Vec> Echelon::kernel_basis() const {
  std::vector<bool> is_pivot(n_, false);
  for (int c : pivot_cols_) is_pivot[c] = true;
  std::vector<Vec> out;
  for (int f = 0; f < n_; ++f) {
    if (is_pivot[f]) continue;
    Vec v;
    v[f] = Rational(1);
    for (size_t r = 0; r < pivot_cols_.size(); ++r) {
      auto it = rows_[r].find(f);
      if (it != rows_[r].end()) v[pivot_cols_[r]] = -it->second;
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<Vec> solve_linear(const Matrix& m, const Vec& b) {
  return Echelon(m).solve(b);
}

std::vector<Vec> kernel_basis(const Matrix& m) { return Echelon(m).kernel_basis(); }

int rank(const Matrix& m) { return Echelon(m).rank(); }

int CochainComplex::dim(int degree) const {
  int k = degree - d_min;
  if (k < 0 || k >= static_cast<int>(dims.size())) return 0;
  return dims[k];
}

const Matrix* CochainComplex::differential(int degree) const {
  int k = degree - d_min;
  if (k < 0 || k >= static_cast<int>(diff.size())) return nullptr;
  return &diff[k];
}

bool CochainComplex::valid(std::string* why) const {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (diff.size() + 1 != dims.size() && !(dims.empty() && diff.empty()))
    return fail("differential count must be one less than degree count");
  for (size_t k = 0; k < diff.size(); ++k) {
    if (diff[k].rows() != dims[k + 1] || diff[k].cols() != dims[k])
      return fail("differential shape mismatch");
    if (k + 1 < diff.size()) {
      if (!diff[k + 1].multiply(diff[k]).is_zero())
        return fail("d∘d is nonzero");
    }
  }
  return true;
}

ExactnessOracle::ExactnessOracle(const Matrix& boundary_in) : ech_(boundary_in) {}

bool ExactnessOracle::is_exact(const Vec& z) const { return ech_.solve(z).has_value(); }

std::optional<Vec> ExactnessOracle::primitive(const Vec& z) const {
  return ech_.solve(z);
}

Cohomology cohomology_basis(const CochainComplex& c, int degree) {
  int n = c.dim(degree);
  const Matrix* out = c.differential(degree);
  const Matrix* in = c.differential(degree - 1);
  Matrix in_m = in ? *in : Matrix(n, 0);
  Matrix out_m = out ? *out : Matrix(0, n);

  Cohomology h{{}, ExactnessOracle(in_m)};
  // Reduce each cocycle-kernel basis vector modulo the image; nonzero and
  // independent residues become the canonical representatives.
  Echelon image(in_m);
  std::vector<Vec> span_rows;  // growing echelon of chosen residues
  auto reduce_against = [](std::vector<Vec>& rows, Vec v) -> Vec {
    for (const auto& row : rows) {
      if (row.empty()) continue;
      int lead = row.begin()->first;
      auto it = v.find(lead);
      if (it != v.end()) vec_add(v, row, -it->second / row.begin()->second);
    }
    return v;
  };
  // Residue of v modulo the image subspace: subtract the image part. We use
  // the oracle trick: solve in the augmented matrix [image columns] for the
  // best reduction by echelonizing image columns as rows.
  std::vector<Vec> image_rows;
  {
    std::vector<Vec> cols(in_m.cols());
    for (const auto& [rc, v] : in_m.entries()) cols[rc.second][rc.first] = v;
    for (auto& col : cols) {
      Vec r = reduce_against(image_rows, std::move(col));
      if (!r.empty()) {
        Rational inv = Rational(1) / r.begin()->second;
        if (inv != 1)
          for (auto& [i, val] : r) val *= inv;
        image_rows.push_back(std::move(r));
      }
    }
  }
  for (Vec& z : kernel_basis(out_m)) {
    Vec r = reduce_against(image_rows, z);
    r = reduce_against(span_rows, std::move(r));
    if (!r.empty()) {
      Rational inv = Rational(1) / r.begin()->second;
      if (inv != 1)
        for (auto& [i, val] : r) val *= inv;
      h.reps.push_back(r);
      span_rows.push_back(std::move(r));
    }
  }
  return h;
}

std::optional<Vec> primitive(const CochainComplex& c, int degree, const Vec& z) {
  const Matrix* in = c.differential(degree - 1);
  Matrix in_m = in ? *in : Matrix(c.dim(degree), 0);
  return ExactnessOracle(in_m).primitive(z);
}

}  // namespace lmc
