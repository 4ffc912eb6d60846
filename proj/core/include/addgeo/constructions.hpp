#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "addgeo/groups.hpp"
#include "addgeo/projsys.hpp"

namespace addgeo {

enum class OvalKind { conic, hyperoval };

/// Points of an oval or hyperoval in PG(2, q).
struct OvalSpec {
  FieldPtr field;
  OvalKind kind = OvalKind::conic;
  std::vector<Subspace> points;
};

/// {(1, t, t^2)} together with (0, 0, 1); q + 1 points.
OvalSpec make_conic(const FieldPtr& field);
/// The conic plus its nucleus (0, 1, 0); q + 2 points, even q only.
OvalSpec make_hyperoval(const FieldPtr& field);
/// Largest number of the given points on one line of PG(2, q).
std::size_t max_points_on_line(const std::vector<Subspace>& points);

/// The q^2 + 1 lines of GF(q)^4 obtained from the points of PG(1, q^2) by
/// the subfield construction.  big must have order small^2.
ProjSystem line_spread(const FieldPtr& small, const FieldPtr& big);

/// Faithful h-(q^h + 2, floor(5h/2), 2)_q system.  The points of a conic in
/// PG(2, q^h) other than P = (0,0,1) are expanded to h-spaces, then
/// everything is projected through ceil(h/2) basis vectors of the image of
/// P.  Two h-spaces through the image of P that span the image of the
/// tangent at P are added.  Verified before returning; throws Error on
/// failure.
ProjSystem construct_oval_system(const FieldPtr& small, std::size_t h);

/// The extended Reed-Solomon frame over GF(q^h): the (s+1) x q^h matrix with
/// column (1, x, x^2, ..., x^s) for every x, and the coordinate subspaces
/// S_i spanned by the last i unit vectors.
struct RSFrame {
  FieldPtr big;
  std::size_t s = 0;
  Matrix generator;
  /// S_i for 1 <= i <= s + 1.
  Subspace tail(std::size_t i) const;
};

RSFrame make_rs_frame(const FieldPtr& big, std::size_t s);

/// Checks on random samples that any s + 1 - i columns span a space of that
/// dimension meeting S_i trivially, for i in 1..s.
bool rs_spans_avoid_tails(const RSFrame& frame, std::size_t samples, std::uint64_t seed);

/// Faithful h-(q^h + 2, hs + floor(h/2), s)_q system from the frame above:
/// the column spaces are expanded and projected so that the image of S_1 has
/// dimension floor(h/2), and two h-spaces b, b' with image(S_1) in both and
/// b + b' = image(S_2) are added.  Verified before returning.
ProjSystem construct_rs_system(const FieldPtr& small, std::size_t h, std::size_t s);

/// The commuting generators A = I + E02 + E13 + E24 and
/// B = I + beta E03 + E12 + E34 of GF(q)^5, beta the smallest non-square.
std::pair<SemilinearMap, SemilinearMap> orbit_generators(std::uint32_t q);

/// The q + 1 lines fixed by A and B: first <e3, e4>, then the lines
/// <(0,0,1,y,0), (0,0,0,0,1)> for y = 0, 1, ..., q-1.
std::vector<Subspace> invariant_lines(std::uint32_t q);

/// Orbit under <A, B> of the line with rows (1, 0, 1/2, 0, z) and
/// (0, 1, -1/2, 0, z') plus the chosen invariant lines (indices into
/// invariant_lines).  The default adds <e3,e4> and <e2,e4>, giving a faithful
/// 2-(q^2 + 2, 5, 2)_q system; q must be an odd prime.  Verified before
/// returning.
ProjSystem construct_orbit_system(std::uint32_t q, std::uint32_t z = 0, std::uint32_t zp = 0,
                                  const std::vector<std::size_t>& extra = {0, 1});

}  // namespace addgeo
