#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "addgeo/field.hpp"

namespace addgeo {

/// Dense row-major matrix over a finite field.
class Matrix {
 public:
  Matrix() = default;
  Matrix(FieldPtr field, std::size_t rows, std::size_t cols);
  Matrix(FieldPtr field, std::size_t rows, std::size_t cols, std::vector<Elem> entries);
  static Matrix identity(FieldPtr field, std::size_t n);
  /// Matrix whose rows are the given vectors (all of width cols).
  static Matrix from_rows(FieldPtr field, std::size_t cols, const std::vector<std::vector<Elem>>& rows);

  const FieldPtr& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Elem operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Elem& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::span<const Elem> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<Elem> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  const std::vector<Elem>& entries() const { return data_; }

  Matrix operator*(const Matrix& o) const;
  Matrix transpose() const;
  /// Entrywise x -> x^(p^e).
  Matrix frobenius(std::uint32_t e) const;
  /// Row vector times matrix.
  std::vector<Elem> left_multiply(std::span<const Elem> v) const;
  std::size_t rank() const;
  /// Inverse of a square matrix; throws Error if singular.
  Matrix inverse() const;

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator<(const Matrix& o) const;

 private:
  FieldPtr field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Elem> data_;
};

/// Reduced row echelon form with zero rows removed.  Pivots are 1 and pivot
/// columns are zero outside their pivot row.
Matrix rref(const Matrix& m);

/// Pivot columns of a matrix that is already in RREF.
std::vector<std::size_t> pivot_columns(const Matrix& rref_matrix);

/// A linear subspace of GF(q)^r stored by its canonical RREF basis.  Two
/// subspaces compare equal iff they are the same subspace.
class Subspace {
 public:
  Subspace() = default;
  /// Row space of the given matrix (any rank, zero rows allowed).
  explicit Subspace(const Matrix& generators);
  static Subspace zero(FieldPtr field, std::size_t r);
  static Subspace full(FieldPtr field, std::size_t r);

  const FieldPtr& field() const { return basis_.field(); }
  std::size_t ambient() const { return basis_.cols(); }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// True iff the vector lies in the subspace.
  bool contains(std::span<const Elem> v) const;
  bool contains(const Subspace& other) const;
  /// Reduce v modulo the subspace (clear the pivot coordinates).
  std::vector<Elem> reduce(std::span<const Elem> v) const;

  bool operator==(const Subspace& o) const {
    return ambient() == o.ambient() && basis_ == o.basis_;
  }
  bool operator!=(const Subspace& o) const { return !(*this == o); }
  /// Total order: by dimension, then basis entries lexicographically.
  bool operator<(const Subspace& o) const;
  std::size_t hash() const;

 private:
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

struct SubspaceHash {
  std::size_t operator()(const Subspace& s) const { return s.hash(); }
};

Subspace subspace_from_rows(FieldPtr field, std::size_t r, const std::vector<std::vector<Elem>>& rows);
Subspace span_pair(const Subspace& a, const Subspace& b);
std::size_t intersect_dim(const Subspace& a, const Subspace& b);
Subspace intersection(const Subspace& a, const Subspace& b);
/// Annihilator {x : s.basis * x^T = 0}.
Subspace dual_space(const Subspace& s);
/// Image of s in GF(q)^r / u, coordinatised by the non-pivot columns of u.
Subspace project_through(const Subspace& s, const Subspace& u);
/// Image of a single vector under the same quotient map.
std::vector<Elem> project_vector(std::span<const Elem> v, const Subspace& u);
/// Hyperplane test: every basis row is orthogonal to the normal vector.
bool in_hyperplane(const Subspace& s, std::span<const Elem> normal);

/// Calls fn(v) for each normalised nonzero vector v of the subspace, i.e. one
/// representative per projective point.  Order: coefficient vectors in
/// lexicographic order of the canonical element order.
void for_each_point(const Subspace& s, const std::function<void(std::span<const Elem>)>& fn);

/// The projective space PG(r-1, q): canonical enumeration of its [r]_q points
/// (normalised vectors, first nonzero coordinate 1, lexicographic order) and
/// O(1) lookup from a vector to its point index.  Hyperplanes are indexed by
/// the same list through their normal vectors.
class ProjectiveSpace {
 public:
  ProjectiveSpace(FieldPtr field, std::size_t r);
  /// Shared, lazily built instance for (field, r).
  static std::shared_ptr<const ProjectiveSpace> get(const FieldPtr& field, std::size_t r);

  const FieldPtr& field() const { return field_; }
  std::size_t ambient() const { return r_; }
  std::size_t size() const { return count_; }
  std::span<const Elem> point(std::size_t idx) const { return {coords_.data() + idx * r_, r_}; }
  /// Index of the projective point spanned by a nonzero vector.
  std::size_t index_of(std::span<const Elem> v) const;
  Subspace point_subspace(std::size_t idx) const;

  /// Indices of the points of s.
  std::vector<std::uint32_t> points_of(const Subspace& s) const;
  /// Indices of the hyperplanes containing s.
  std::vector<std::uint32_t> hyperplanes_containing(const Subspace& s) const;
  /// True iff point index pt lies on hyperplane index hp.
  bool incident(std::size_t pt, std::size_t hp) const;

 private:
  std::uint64_t key(std::span<const Elem> v) const;

  FieldPtr field_;
  std::size_t r_;
  std::size_t count_;
  std::vector<Elem> coords_;
  std::vector<std::int32_t> dense_index_;  // key -> index for normalised keys
};

/// Canonical point list of PG(r-1, q) as 1-dimensional subspaces.
std::vector<Subspace> enumerate_points(FieldPtr field, std::size_t r);
/// Normal vectors of all hyperplanes, same canonical order as the points.
std::vector<std::vector<Elem>> enumerate_hyperplanes(FieldPtr field, std::size_t r);
/// All k-dimensional subspaces of GF(q)^r in canonical order (by pivot pattern,
/// then free entries).  Throws if the count exceeds cap.
std::vector<Subspace> enumerate_subspaces(FieldPtr field, std::size_t r, std::size_t k,
                                          std::size_t cap = 5'000'000);

/// Number of k-dimensional subspaces of GF(q)^r.
std::uint64_t gaussian_binomial(std::uint64_t q, std::uint64_t r, std::uint64_t k);

}  // namespace addgeo
