#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "addgeo/geometry.hpp"

namespace addgeo {

/// A multiset of subspaces of dimension at most h in GF(q)^r.
class ProjSystem {
 public:
  ProjSystem() = default;
  ProjSystem(FieldPtr field, std::size_t r, std::size_t h, bool allow_degenerate = false);

  const FieldPtr& field() const { return field_; }
  std::size_t r() const { return r_; }
  std::size_t h() const { return h_; }
  bool allow_degenerate() const { return allow_degenerate_; }
  std::size_t n() const { return elements_.size(); }
  const std::vector<Subspace>& elements() const { return elements_; }

  /// Appends an element; throws on ambient mismatch, dim > h, or dim 0 when
  /// degenerate elements are not allowed.
  void add(const Subspace& s);
  void add(const Subspace& s, std::size_t multiplicity);
  /// True iff every element has dimension exactly h.
  bool faithful() const;

 private:
  FieldPtr field_;
  std::size_t r_ = 0;
  std::size_t h_ = 0;
  bool allow_degenerate_ = false;
  std::vector<Subspace> elements_;
};

struct SystemReport {
  std::size_t n = 0;
  std::size_t s = 0;      // max elements in a hyperplane
  std::size_t s_min = 0;  // min elements in a hyperplane
  std::size_t mu = 0;     // max elements through a point
  bool faithful = true;
  bool spanning = false;  // s < n
  /// Element count per hyperplane, indexed like ProjectiveSpace points.
  std::vector<std::uint32_t> hyperplane_counts;
  /// histogram[c] = number of hyperplanes containing exactly c elements.
  std::map<std::size_t, std::size_t> histogram;
  std::size_t s_witness = 0;   // a hyperplane index attaining s
  std::size_t mu_witness = 0;  // a point index attaining mu
};

/// Exact hyperplane and point statistics of a system.
SystemReport verify(const ProjSystem& sys);

/// Subfield construction: columns of a k x n generator matrix over GF(q^h)
/// become n subspaces of GF(q)^(kh).  Row i of the matrix yields the rows
/// alpha^0 * row_i, ..., alpha^(h-1) * row_i of the expanded matrix, and every
/// entry is written over the basis (1, alpha, ..., alpha^(h-1)).
ProjSystem subfield_construct(const Matrix& code_gen, const FieldPtr& small);

/// Coverage counts over the canonical point list of PG(r-1, q).
struct PointMultiset {
  FieldPtr field;
  std::size_t r = 0;
  std::vector<std::uint32_t> counts;
  std::uint64_t total() const;
};

/// Replace every element by its [h]_q points.  Requires a faithful system.
PointMultiset expand_points(const ProjSystem& sys);

struct WeightDistribution {
  /// weight -> number of hyperplanes (one codeword per hyperplane up to scalars)
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t length = 0;         // n' = total number of points
  std::uint64_t max_on_hyperplane = 0;  // s'
  std::uint64_t min_weight = 0;     // d'
  std::uint64_t max_weight = 0;
};

/// Weights w(H) = n' - |points on H| over all hyperplanes H.
WeightDistribution weight_distribution(const PointMultiset& pm);

/// True iff every hyperplane weight is divisible by delta.
bool divisibility_check(const PointMultiset& pm, std::uint64_t delta);

struct MultispreadReport {
  bool valid = false;
  std::uint64_t lambda = 0;
  std::uint64_t mu = 0;  // constant weighted coverage when valid
  std::int64_t s = 0;    // n - q^(k-h) mu
  std::size_t k = 0;
  std::size_t witness_point = 0;  // point with deviating coverage when invalid
  bool equation_s_holds = false;        // s = n - q^(k-h) mu agrees with verify()
  bool equation_lambda_holds = false;   // (q^h - 1) s = (q^(k-h) - 1) mu + lambda
  bool congruence_holds = false;        // lambda = -mu (q^k - 1) mod (q^h - 1)
  std::string failure;
};

/// Multispread test with weight q^(h - dim S) for each element S.
MultispreadReport multispread_check(const ProjSystem& sys, std::size_t h);
MultispreadReport multispread_check(const ProjSystem& sys, std::size_t h, const SystemReport& report);

struct CodeParams {
  std::size_t n = 0;
  std::size_t k_num = 0;  // dimension r/h as the fraction k_num / k_den
  std::size_t k_den = 1;
  std::size_t d = 0;
};

/// Additive code parameters [n, r/h, n - s]_q^h of the system.
CodeParams code_params(const ProjSystem& sys, const SystemReport& report);
CodeParams code_params(const ProjSystem& sys);

/// Subfield generator matrix of a faithful system: an r x (n h) matrix over
/// GF(q) whose j-th block of h columns is the transposed basis of element j.
Matrix subfield_generator_matrix(const ProjSystem& sys);
/// Inverse of subfield_generator_matrix: element j is the span of the j-th
/// block of h columns.
ProjSystem system_from_generator(const Matrix& generator, std::size_t h);

std::uint64_t qpow(std::uint64_t q, std::uint64_t e);
/// [t]_q = (q^t - 1) / (q - 1).
std::uint64_t qint(std::uint64_t q, std::uint64_t t);

}  // namespace addgeo
