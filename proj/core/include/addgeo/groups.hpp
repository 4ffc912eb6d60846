#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "addgeo/projsys.hpp"

namespace addgeo {

/// v -> sigma^frob(v) * mat for row vectors v, where sigma is the Frobenius
/// automorphism x -> x^p applied entrywise.
class SemilinearMap {
 public:
  SemilinearMap() = default;
  /// Throws Error if mat is not square and invertible.
  SemilinearMap(Matrix mat, std::uint32_t frob = 0);
  static SemilinearMap identity(const FieldPtr& field, std::size_t r);

  const Matrix& matrix() const { return mat_; }
  std::uint32_t frob() const { return frob_; }
  const FieldPtr& field() const { return mat_.field(); }
  std::size_t dim() const { return mat_.rows(); }

  std::vector<Elem> apply(std::span<const Elem> v) const;
  Subspace apply(const Subspace& s) const;
  /// The map "first this, then second".
  SemilinearMap then(const SemilinearMap& second) const;
  SemilinearMap inverse() const;

  bool operator==(const SemilinearMap& o) const { return frob_ == o.frob_ && mat_ == o.mat_; }
  bool operator<(const SemilinearMap& o) const {
    return frob_ != o.frob_ ? frob_ < o.frob_ : mat_ < o.mat_;
  }

 private:
  Matrix mat_;
  std::uint32_t frob_ = 0;
};

/// How a listed generator (M, e) is turned into a map.  The default is
/// row-vector-right with the automorphism first; the others are the fallback
/// readings tried when declared orbit sizes do not match.
enum class ActionConvention {
  right,                 // v -> sigma^e(v) M
  transpose,             // v -> sigma^e(v) M^T
  frobenius_last,        // v -> sigma^e(v M)
  transpose_frobenius_last,  // v -> sigma^e(v M^T)
};

std::string to_string(ActionConvention c);
const std::vector<ActionConvention>& all_conventions();
SemilinearMap adapt(const SemilinearMap& g, ActionConvention c);

/// A finite group of semilinear maps given by generators.
class Group {
 public:
  Group() = default;
  /// Trivial group on GF(q)^r.
  Group(FieldPtr field, std::size_t r);
  /// Closure of the generators; throws Error if the order exceeds cap.
  Group(FieldPtr field, std::size_t r, std::vector<SemilinearMap> generators, std::size_t cap = 100000);

  const FieldPtr& field() const { return field_; }
  std::size_t dim() const { return r_; }
  const std::vector<SemilinearMap>& generators() const { return generators_; }
  const std::vector<SemilinearMap>& elements() const { return elements_; }
  std::size_t order() const { return elements_.size(); }

  /// Orbit of s in canonical (sorted) order.
  std::vector<Subspace> orbit(const Subspace& s) const;
  std::size_t stabilizer_order(const Subspace& s) const;

 private:
  FieldPtr field_;
  std::size_t r_ = 0;
  std::vector<SemilinearMap> generators_;
  std::vector<SemilinearMap> elements_;
};

Group closure(const FieldPtr& field, std::size_t r, const std::vector<SemilinearMap>& generators,
              std::size_t cap = 100000);

/// One entry of an orbit-representative listing.  A declared orbit size
/// marks a representative; unmarked entries are either single elements or the
/// remaining members of the preceding representative's orbit.
struct ListingEntry {
  Subspace element;
  std::optional<std::size_t> orbit_size;
};

struct OrbitListing {
  std::vector<ListingEntry> entries;
};

/// Expands a listing into a system.  A representative marked k followed by no
/// unmarked entries contributes its whole computed orbit; followed by exactly
/// k-1 unmarked entries, those must be the rest of the orbit.  Unmarked
/// entries not following a representative are taken as they are.  Throws
/// Error naming the representative on any mismatch.
ProjSystem expand_listing(const Group& group, const OrbitListing& listing, std::size_t h,
                          bool allow_degenerate = false);

struct InvarianceReport {
  bool invariant = true;
  std::size_t generator = 0;  // first generator that moves the multiset
  std::size_t element = 0;    // an element whose image has the wrong multiplicity
};

/// True iff every generator (hence every group element) permutes the multiset.
InvarianceReport stabilizer_invariance_check(const Group& group, const ProjSystem& sys);

}  // namespace addgeo
