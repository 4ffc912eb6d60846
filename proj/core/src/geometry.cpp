#include "addgeo/geometry.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

namespace addgeo {

Matrix::Matrix(FieldPtr field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix::Matrix(FieldPtr field, std::size_t rows, std::size_t cols, std::vector<Elem> entries)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) throw Error("matrix entry count does not match its shape");
  for (Elem e : data_)
    if (e >= field_->q()) throw Error("matrix entry outside the field");
}

Matrix Matrix::identity(FieldPtr field, std::size_t n) {
  Matrix m(std::move(field), n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(FieldPtr field, std::size_t cols, const std::vector<std::vector<Elem>>& rows) {
  Matrix m(std::move(field), rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw Error("row width does not match the ambient dimension");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw Error("matrix dimension mismatch in product");
  const Field& f = *field_;
  Matrix out(field_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      Elem a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) = f.add(out(i, j), f.mul(a, o(k, j)));
    }
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Matrix Matrix::frobenius(std::uint32_t e) const {
  Matrix out = *this;
  if (e % field_->l() == 0) return out;
  for (auto& x : out.data_) x = field_->frobenius(x, e);
  return out;
}

std::vector<Elem> Matrix::left_multiply(std::span<const Elem> v) const {
  if (v.size() != rows_) throw Error("vector length does not match matrix rows");
  const Field& f = *field_;
  std::vector<Elem> out(cols_, 0);
  for (std::size_t k = 0; k < rows_; ++k) {
    if (v[k] == 0) continue;
    for (std::size_t j = 0; j < cols_; ++j) out[j] = f.add(out[j], f.mul(v[k], (*this)(k, j)));
  }
  return out;
}

std::size_t Matrix::rank() const { return rref(*this).rows(); }

Matrix Matrix::inverse() const {
  if (rows_ != cols_) throw Error("inverse of a non-square matrix");
  const std::size_t n = rows_;
  Matrix aug(field_, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
    aug(i, n + i) = 1;
  }
  Matrix red = rref(aug);
  if (red.rows() < n) throw Error("matrix is singular");
  for (std::size_t i = 0; i < n; ++i)
    if (red(i, i) != 1) throw Error("matrix is singular");
  Matrix out(field_, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = red(i, n + j);
  return out;
}

bool Matrix::operator<(const Matrix& o) const {
  if (rows_ != o.rows_) return rows_ < o.rows_;
  if (cols_ != o.cols_) return cols_ < o.cols_;
  return data_ < o.data_;
}

Matrix rref(const Matrix& m) {
  const Field& f = *m.field();
  Matrix a = m;
  std::size_t lead = 0;
  const std::size_t rows = a.rows(), cols = a.cols();
  for (std::size_t c = 0; c < cols && lead < rows; ++c) {
    std::size_t piv = lead;
    while (piv < rows && a(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != lead)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a(piv, j), a(lead, j));
    const Elem s = f.inv(a(lead, c));
    if (s != 1)
      for (std::size_t j = c; j < cols; ++j) a(lead, j) = f.mul(a(lead, j), s);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == lead || a(i, c) == 0) continue;
      const Elem factor = f.neg(a(i, c));
      for (std::size_t j = c; j < cols; ++j)
        if (a(lead, j) != 0) a(i, j) = f.add(a(i, j), f.mul(factor, a(lead, j)));
    }
    ++lead;
  }
  std::vector<Elem> kept(a.entries().begin(), a.entries().begin() + static_cast<std::ptrdiff_t>(lead * cols));
  return Matrix(m.field(), lead, cols, std::move(kept));
}

std::vector<std::size_t> pivot_columns(const Matrix& r) {
  std::vector<std::size_t> piv;
  piv.reserve(r.rows());
  for (std::size_t i = 0; i < r.rows(); ++i) {
    std::size_t c = 0;
    while (c < r.cols() && r(i, c) == 0) ++c;
    piv.push_back(c);
  }
  return piv;
}

Subspace::Subspace(const Matrix& generators) : basis_(rref(generators)), pivots_(pivot_columns(basis_)) {}

Subspace Subspace::zero(FieldPtr field, std::size_t r) { return Subspace(Matrix(std::move(field), 0, r)); }

Subspace Subspace::full(FieldPtr field, std::size_t r) { return Subspace(Matrix::identity(std::move(field), r)); }

std::vector<Elem> Subspace::reduce(std::span<const Elem> v) const {
  const Field& f = *field();
  std::vector<Elem> out(v.begin(), v.end());
  for (std::size_t i = 0; i < dim(); ++i) {
    const Elem c = out[pivots_[i]];
    if (c == 0) continue;
    const Elem factor = f.neg(c);
    auto row = basis_.row(i);
    for (std::size_t j = pivots_[i]; j < out.size(); ++j)
      if (row[j] != 0) out[j] = f.add(out[j], f.mul(factor, row[j]));
  }
  return out;
}

bool Subspace::contains(std::span<const Elem> v) const {
  if (v.size() != ambient()) throw Error("ambient dimension mismatch");
  auto red = reduce(v);
  return std::all_of(red.begin(), red.end(), [](Elem e) { return e == 0; });
}

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient() != ambient()) throw Error("ambient dimension mismatch");
  for (std::size_t i = 0; i < other.dim(); ++i)
    if (!contains(other.basis().row(i))) return false;
  return true;
}

bool Subspace::operator<(const Subspace& o) const {
  if (ambient() != o.ambient()) return ambient() < o.ambient();
  if (dim() != o.dim()) return dim() < o.dim();
  return basis_.entries() < o.basis_.entries();
}

std::size_t Subspace::hash() const {
  std::size_t h = 1469598103934665603ull ^ (ambient() * 131 + dim());
  for (Elem e : basis_.entries()) h = (h ^ e) * 1099511628211ull;
  return h;
}

Subspace subspace_from_rows(FieldPtr field, std::size_t r, const std::vector<std::vector<Elem>>& rows) {
  return Subspace(Matrix::from_rows(std::move(field), r, rows));
}

namespace {
void require_same_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw Error("ambient dimension mismatch");
}
}  // namespace

Subspace span_pair(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  Matrix stacked(a.field(), a.dim() + b.dim(), a.ambient());
  for (std::size_t i = 0; i < a.dim(); ++i) std::ranges::copy(a.basis().row(i), stacked.row(i).begin());
  for (std::size_t i = 0; i < b.dim(); ++i) std::ranges::copy(b.basis().row(i), stacked.row(a.dim() + i).begin());
  return Subspace(stacked);
}

std::size_t intersect_dim(const Subspace& a, const Subspace& b) {
  return a.dim() + b.dim() - span_pair(a, b).dim();
}

Subspace intersection(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  // a ∩ b = (a^⊥ + b^⊥)^⊥
  return dual_space(span_pair(dual_space(a), dual_space(b)));
}

Subspace dual_space(const Subspace& s) {
  const Field& f = *s.field();
  const std::size_t r = s.ambient();
  const auto& piv = s.pivots();
  std::vector<bool> is_pivot(r, false);
  for (auto c : piv) is_pivot[c] = true;
  // For each free column c: x_c = 1, x_{piv_i} = -basis(i, c), other free = 0.
  Matrix out(s.field(), r - s.dim(), r);
  std::size_t k = 0;
  for (std::size_t c = 0; c < r; ++c) {
    if (is_pivot[c]) continue;
    out(k, c) = 1;
    for (std::size_t i = 0; i < s.dim(); ++i) out(k, piv[i]) = f.neg(s.basis()(i, c));
    ++k;
  }
  return Subspace(out);
}

std::vector<Elem> project_vector(std::span<const Elem> v, const Subspace& u) {
  auto red = u.reduce(v);
  std::vector<bool> is_pivot(u.ambient(), false);
  for (auto c : u.pivots()) is_pivot[c] = true;
  std::vector<Elem> out;
  out.reserve(u.ambient() - u.dim());
  for (std::size_t c = 0; c < u.ambient(); ++c)
    if (!is_pivot[c]) out.push_back(red[c]);
  return out;
}

Subspace project_through(const Subspace& s, const Subspace& u) {
  require_same_ambient(s, u);
  Matrix img(s.field(), s.dim(), u.ambient() - u.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    auto pv = project_vector(s.basis().row(i), u);
    std::ranges::copy(pv, img.row(i).begin());
  }
  return Subspace(img);
}

bool in_hyperplane(const Subspace& s, std::span<const Elem> normal) {
  if (normal.size() != s.ambient()) throw Error("normal vector length does not match ambient dimension");
  const Field& f = *s.field();
  for (std::size_t i = 0; i < s.dim(); ++i) {
    Elem acc = 0;
    auto row = s.basis().row(i);
    for (std::size_t j = 0; j < row.size(); ++j) acc = f.add(acc, f.mul(row[j], normal[j]));
    if (acc != 0) return false;
  }
  return true;
}

namespace {
// Odometer step over digits[lo..], last digit least significant.  Returns
// false (with all those digits reset to 0) after the final combination.
template <class T>
bool advance(std::vector<T>& digits, std::size_t lo, std::uint32_t base) {
  for (std::size_t i = digits.size(); i-- > lo;) {
    if (++digits[i] < base) return true;
    digits[i] = 0;
  }
  return false;
}
}  // namespace

void for_each_point(const Subspace& s, const std::function<void(std::span<const Elem>)>& fn) {
  const Field& f = *s.field();
  const std::size_t d = s.dim(), r = s.ambient();
  if (d == 0) return;
  const std::uint32_t q = f.q();
  std::vector<Elem> coef(d, 0), v(r, 0);
  // Leading coefficient position t gets 1, earlier ones 0, later ones free.
  for (std::size_t t = 0; t < d; ++t) {
    std::fill(coef.begin(), coef.end(), 0);
    coef[t] = 1;
    do {
      std::fill(v.begin(), v.end(), 0);
      for (std::size_t i = t; i < d; ++i) {
        if (coef[i] == 0) continue;
        auto row = s.basis().row(i);
        for (std::size_t j = 0; j < r; ++j)
          if (row[j] != 0) v[j] = f.add(v[j], f.mul(coef[i], row[j]));
      }
      fn(v);
    } while (advance(coef, t + 1, q));
  }
}

ProjectiveSpace::ProjectiveSpace(FieldPtr field, std::size_t r) : field_(std::move(field)), r_(r) {
  const std::uint64_t q = field_->q();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < r_; ++i) {
    total *= q;
    if (total > (1ull << 24)) throw Error("projective space too large for enumeration");
  }
  count_ = static_cast<std::size_t>((total - 1) / (q - 1));
  coords_.reserve(count_ * r_);
  dense_index_.assign(total, -1);
  std::vector<Elem> v(r_, 0);
  std::size_t idx = 0;
  // Normalised vectors in lexicographic order: leading 1 at position t.
  for (std::size_t t = r_; t-- > 0;) {
    // v = (0,...,0,1,*,...,*) with the 1 at t, iterate the tail lexicographically.
    const std::size_t tail = r_ - t - 1;
    std::uint64_t combos = 1;
    for (std::size_t i = 0; i < tail; ++i) combos *= q;
    for (std::uint64_t c = 0; c < combos; ++c) {
      std::fill(v.begin(), v.end(), 0);
      v[t] = 1;
      std::uint64_t cc = c;
      for (std::size_t i = r_; i-- > t + 1;) {
        v[i] = static_cast<Elem>(cc % q);
        cc /= q;
      }
      coords_.insert(coords_.end(), v.begin(), v.end());
      dense_index_[key(v)] = static_cast<std::int32_t>(idx++);
    }
  }
  // The loop over t from r-1 down to 0 yields (0..01) < (0..1*) < ... which is
  // exactly lexicographic order with 0 < 1 < alpha < ...
}

std::shared_ptr<const ProjectiveSpace> ProjectiveSpace::get(const FieldPtr& field, std::size_t r) {
  static std::mutex mu;
  static std::map<std::pair<const Field*, std::size_t>, std::shared_ptr<const ProjectiveSpace>> cache;
  std::lock_guard lock(mu);
  auto key = std::make_pair(field.get(), r);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto ps = std::make_shared<const ProjectiveSpace>(field, r);
  cache.emplace(key, ps);
  return ps;
}

std::uint64_t ProjectiveSpace::key(std::span<const Elem> v) const {
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < r_; ++i) k = k * field_->q() + v[i];
  return k;
}

std::size_t ProjectiveSpace::index_of(std::span<const Elem> v) const {
  if (v.size() != r_) throw Error("vector length does not match ambient dimension");
  std::size_t t = 0;
  while (t < r_ && v[t] == 0) ++t;
  if (t == r_) throw Error("zero vector has no projective point");
  if (v[t] == 1) return static_cast<std::size_t>(dense_index_[key(v)]);
  const Field& f = *field_;
  const Elem s = f.inv(v[t]);
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < r_; ++i) k = k * f.q() + f.mul(v[i], s);
  return static_cast<std::size_t>(dense_index_[k]);
}

Subspace ProjectiveSpace::point_subspace(std::size_t idx) const {
  return Subspace(Matrix(field_, 1, r_, std::vector<Elem>(point(idx).begin(), point(idx).end())));
}

std::vector<std::uint32_t> ProjectiveSpace::points_of(const Subspace& s) const {
  if (s.ambient() != r_) throw Error("ambient dimension mismatch");
  std::vector<std::uint32_t> out;
  for_each_point(s, [&](std::span<const Elem> v) { out.push_back(static_cast<std::uint32_t>(index_of(v))); });
  return out;
}

std::vector<std::uint32_t> ProjectiveSpace::hyperplanes_containing(const Subspace& s) const {
  return points_of(dual_space(s));
}

bool ProjectiveSpace::incident(std::size_t pt, std::size_t hp) const {
  const Field& f = *field_;
  Elem acc = 0;
  auto a = point(pt), b = point(hp);
  for (std::size_t i = 0; i < r_; ++i) acc = f.add(acc, f.mul(a[i], b[i]));
  return acc == 0;
}

std::vector<Subspace> enumerate_points(FieldPtr field, std::size_t r) {
  ProjectiveSpace ps(field, r);
  std::vector<Subspace> out;
  out.reserve(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) out.push_back(ps.point_subspace(i));
  return out;
}

std::vector<std::vector<Elem>> enumerate_hyperplanes(FieldPtr field, std::size_t r) {
  ProjectiveSpace ps(std::move(field), r);
  std::vector<std::vector<Elem>> out;
  out.reserve(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) out.emplace_back(ps.point(i).begin(), ps.point(i).end());
  return out;
}

std::uint64_t gaussian_binomial(std::uint64_t q, std::uint64_t r, std::uint64_t k) {
  if (k > r) return 0;
  // prod_{i<k} (q^(r-i) - 1) / (q^(i+1) - 1), computed incrementally (exact).
  unsigned __int128 num = 1, den = 1;
  auto qpow = [q](std::uint64_t e) {
    unsigned __int128 x = 1;
    for (std::uint64_t i = 0; i < e; ++i) x *= q;
    return x;
  };
  std::uint64_t result = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    num = static_cast<unsigned __int128>(result) * (qpow(r - i) - 1);
    den = qpow(i + 1) - 1;
    result = static_cast<std::uint64_t>(num / den);
  }
  return result;
}

std::vector<Subspace> enumerate_subspaces(FieldPtr field, std::size_t r, std::size_t k, std::size_t cap) {
  const std::uint64_t total = gaussian_binomial(field->q(), r, k);
  if (total > cap) throw Error("subspace enumeration exceeds the configured cap");
  std::vector<Subspace> out;
  out.reserve(total);
  const std::uint32_t q = field->q();
  // Pivot patterns in lexicographic order; free entries are the non-pivot
  // columns to the right of each pivot.
  std::vector<std::size_t> piv(k);
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t i, std::size_t start) {
    if (i == k) {
      std::vector<std::pair<std::size_t, std::size_t>> free;
      std::vector<bool> is_piv(r, false);
      for (auto c : piv) is_piv[c] = true;
      for (std::size_t row = 0; row < k; ++row)
        for (std::size_t c = piv[row] + 1; c < r; ++c)
          if (!is_piv[c]) free.emplace_back(row, c);
      std::vector<Elem> vals(free.size(), 0);
      while (true) {
        Matrix m(field, k, r);
        for (std::size_t row = 0; row < k; ++row) m(row, piv[row]) = 1;
        for (std::size_t t = 0; t < free.size(); ++t) m(free[t].first, free[t].second) = vals[t];
        out.emplace_back(m);
        if (!advance(vals, 0, q)) break;
      }
      return;
    }
    for (std::size_t c = start; c + (k - i) <= r; ++c) {
      piv[i] = c;
      choose(i + 1, c + 1);
    }
  };
  choose(0, 0);
  return out;
}

}  // namespace addgeo
