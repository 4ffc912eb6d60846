#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "addgeo/error.hpp"

namespace addgeo {

enum class BoundKind { upper, lower, exact };

struct BoundResult {
  std::uint64_t value = 0;
  BoundKind kind = BoundKind::upper;
  std::string source;
  bool unbounded = false;  // no finite upper bound from this method
};

std::string to_string(BoundKind k);

/// [t]_q, the number of points of PG(t-1, q).
std::uint64_t gauss_count(std::uint64_t q, std::uint64_t t);

/// Griesmer length g_q(k, d) = sum_{i<k} ceil(d / q^i).
std::uint64_t griesmer(std::uint64_t q, std::uint64_t k, std::uint64_t d);

/// Smallest length of an additive [n, r/h, d]_q^h code allowed by the
/// Griesmer bound applied to the associated linear code:
/// d + ceil((g_q(r-h+1, d) - d) / [h]_q).
std::uint64_t additive_griesmer_min_n(std::uint64_t q, std::uint64_t r, std::uint64_t h, std::uint64_t d);

/// Largest n such that an h-(n, r, s)_q system is not excluded by the
/// additive Griesmer bound with d = n - s.
BoundResult griesmer_max_n(std::uint64_t q, std::uint64_t r, std::uint64_t h, std::uint64_t s);

/// Projection bound for n_q(th + j, h; s):
/// floor((s - t + 1) [h+j]_q / [j]_q + t - 1), requires s >= t >= 2, h, j >= 1.
BoundResult projection_bound(std::uint64_t q, std::uint64_t h, std::uint64_t j, std::uint64_t s, std::uint64_t t);

/// Refined projection bound when some (th - i)-space holds t elements:
/// floor(((s - t + 1)[h+j]_q - [i+j]_q) / [j]_q) + t, requires 0 <= i <= h.
BoundResult projection_bound_refined(std::uint64_t q, std::uint64_t h, std::uint64_t j, std::uint64_t s,
                                     std::uint64_t t, std::uint64_t i);

/// Strict bound for n_q(2h + j, h; s) from the two-weight code argument:
/// n < (s - 1)[h+j]_q / [j]_q + 1, valid when s has a prime factor other than
/// the characteristic of GF(q) and no system of that size can meet every
/// hyperplane in exactly s elements.  Returns nullopt when not applicable.
std::optional<BoundResult> two_weight_bound(std::uint64_t q, std::uint64_t h, std::uint64_t j, std::uint64_t s);

/// Existence oracle for linear [n, k, d]_q codes: true (exists), false (does
/// not exist) or nullopt (unknown).
using LinearCodeOracle = std::function<std::optional<bool>(std::uint64_t n, std::uint64_t k, std::uint64_t d)>;

/// Oracle answering only from the Griesmer bound: false if n < g_q(k, d),
/// otherwise unknown.
LinearCodeOracle griesmer_oracle(std::uint64_t q);

/// Weak coding bound: the largest n for which a linear
/// [n [h]_q, r, q^(h-1) (n - s)]_q code is not known to be impossible.
/// Answers of the user oracle take precedence; when it returns nullopt the
/// Griesmer test decides.  Scans n upwards from s + 1.
BoundResult coding_bound(std::uint64_t q, std::uint64_t r, std::uint64_t h, std::uint64_t s,
                         const LinearCodeOracle& oracle = {});

/// Smallest of the applicable upper bounds above for n_q(r, h; s).
BoundResult best_upper_bound(std::uint64_t q, std::uint64_t r, std::uint64_t h, std::uint64_t s);

}  // namespace addgeo
