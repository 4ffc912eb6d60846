#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "addgeo/groups.hpp"
#include "addgeo/projsys.hpp"

namespace addgeo {

/// Maximise the number of elements of a projective h-(n, r, s)_q system that
/// is a union of orbits of a prescribed group (with multiplicities).
struct SearchProblem {
  FieldPtr field;
  std::size_t r = 0;
  std::size_t h = 0;
  std::uint64_t s = 0;
  std::optional<Group> group;  // trivial when absent
  bool faithful_only = true;   // otherwise subspaces of dimension 1..h are allowed
  std::optional<std::uint32_t> mu_cap;  // points covered at most this often
  std::uint32_t max_multiplicity = 0;   // per element; 0 means limited only by s and mu_cap
  std::vector<Subspace> seed;           // forced elements
  // Elements of a group that preserves s, mu_cap and the seed.  The first
  // symmetry_depth choices are taken up to this symmetry only, which keeps
  // the outcome exhaustive.  Requires the trivial prescribed group.
  std::vector<SemilinearMap> symmetry;
  std::size_t symmetry_depth = 0;
  std::optional<std::uint64_t> target;  // stop once n >= target
  std::uint64_t node_limit = 0;         // 0 = unlimited
  double time_limit = 0;                // seconds, 0 = unlimited
  // Optional tabu search that supplies a starting incumbent; overloads cost
  // warm_start_penalty per unit against one per element gained.
  std::uint64_t warm_start_iterations = 0;
  double warm_start_penalty = 2.0;
  std::uint64_t warm_start_tenure = 10;
  std::uint64_t rng_seed = 1;
};

struct SearchOutcome {
  ProjSystem best;
  std::uint64_t n_best = 0;
  bool exhaustive = false;  // maximum proven under the constraints
  bool target_reached = false;
  std::uint64_t nodes = 0;
  double elapsed = 0;
  std::uint64_t upper_cap = 0;  // global upper bound used for pruning
};

/// Depth-first branch and bound over orbit multiplicities.  At each node the
/// orbits are ordered by how few live incidences they would saturate (ties by
/// orbit index), larger multiplicities first; hyperplane residual capacities
/// are updated incrementally.  Pruning uses the remaining hyperplane slots,
/// the slots on hyperplanes through each chosen element, a greedy hyperplane
/// cover of the live elements, and the best known upper bound on
/// n_q(r, h; s).  Deterministic.  Throws Error if the seed already violates
/// the constraints.
SearchOutcome search_max(const SearchProblem& problem);

/// All invertible r x r matrices that map each coordinate block
/// <e_off, ..., e_(off+b-1)> (blocks taken in order from e_0) onto itself.
/// Throws Error if there would be more than cap of them.
std::vector<SemilinearMap> coordinate_block_stabilizer(const FieldPtr& field, std::size_t r,
                                                       const std::vector<std::size_t>& blocks,
                                                       std::size_t cap = 2'000'000);

struct CoverProblem {
  ProjSystem partial;
  std::size_t h = 0;        // dimension of the added spaces
  std::uint64_t mu = 0;     // required weighted coverage of every point
  std::uint64_t node_limit = 0;
  double time_limit = 0;
};

struct CoverOutcome {
  bool found = false;
  bool exhaustive = false;  // infeasibility proven when !found
  ProjSystem result;        // partial plus the added h-spaces
  std::size_t added = 0;
  std::uint64_t nodes = 0;
  double elapsed = 0;
};

/// Adds h-spaces (repetition allowed) until every point has weighted coverage
/// exactly mu, where an element S covers its points q^(h - dim S) times.
/// Exact multicover: the rows are the points and the hyperplanes, since every
/// hyperplane of a multispread holds the same number of elements; the search
/// branches on the row with the fewest usable spaces.  Throws Error if the
/// partial system already exceeds mu somewhere or the total deficit is not a
/// multiple of [h]_q.
CoverOutcome complete_multispread(const CoverProblem& problem);

/// True iff `depth` more elements of dimension h can be added to sys
/// without any hyperplane exceeding s.  depth = 1 is a plain scan.
bool extendability_check(const ProjSystem& sys, std::uint64_t s, std::size_t depth = 1,
                         std::uint64_t node_limit = 1'000'000);

}  // namespace addgeo
