#include "addgeo/bounds.hpp"

#include <algorithm>
#include <limits>

#include "addgeo/field.hpp"

namespace addgeo {

namespace {

std::uint64_t upow(std::uint64_t q, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / q) throw Error("integer overflow in q^e");
    r *= q;
  }
  return r;
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

void require_q(std::uint64_t q) {
  if (q < 2) throw Error("field size must be at least 2");
}

// Smallest prime factor of q.
std::uint64_t characteristic(std::uint64_t q) {
  for (std::uint64_t p = 2; p * p <= q; ++p)
    if (q % p == 0) return p;
  return q;
}

}  // namespace

std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::upper:
      return "upper";
    case BoundKind::lower:
      return "lower";
    case BoundKind::exact:
      return "exact";
  }
  return "unknown";
}

std::uint64_t gauss_count(std::uint64_t q, std::uint64_t t) {
  require_q(q);
  return (upow(q, t) - 1) / (q - 1);
}

std::uint64_t griesmer(std::uint64_t q, std::uint64_t k, std::uint64_t d) {
  require_q(q);
  if (d == 0) return 0;
  std::uint64_t sum = 0, pw = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    if (pw >= d) return sum + (k - i);  // all remaining terms equal 1
    sum += ceil_div(d, pw);
    pw *= q;
  }
  return sum;
}

std::uint64_t additive_griesmer_min_n(std::uint64_t q, std::uint64_t r, std::uint64_t h, std::uint64_t d) {
  require_q(q);
  if (h == 0) throw Error("h must be positive");
  if (r < h) return d;
  const std::uint64_t extra = griesmer(q, r - h + 1, d) - d;
  return d + ceil_div(extra, gauss_count(q, h));
}

BoundResult griesmer_max_n(std::uint64_t q, std::uint64_t r, std::uint64_t h, std::uint64_t s) {
  require_q(q);
  if (s < 1) throw Error("s must be at least 1");
  BoundResult res{0, BoundKind::upper, "griesmer", false};
  if (r <= h) {
    res.unbounded = true;
    return res;
  }
  // n = s + d is allowed iff additive_griesmer_min_n(d) <= s + d, a condition
  // monotone in d.
  std::uint64_t d = 0;
  while (additive_griesmer_min_n(q, r, h, d + 1) <= s + d + 1) ++d;
  res.value = s + d;
  return res;
}

BoundResult projection_bound(std::uint64_t q, std::uint64_t h, std::uint64_t j, std::uint64_t s, std::uint64_t t) {
  require_q(q);
  if (!(s >= t && t >= 2)) throw Error("projection bound requires s >= t >= 2");
  if (h < 1 || j < 1) throw Error("projection bound requires h, j >= 1");
  const std::uint64_t num = (s - t + 1) * gauss_count(q, h + j);
  return {num / gauss_count(q, j) + t - 1, BoundKind::upper, "projection", false};
}

BoundResult projection_bound_refined(std::uint64_t q, std::uint64_t h, std::uint64_t j, std::uint64_t s,
                                     std::uint64_t t, std::uint64_t i) {
  require_q(q);
  if (!(s >= t && t >= 2)) throw Error("refined projection bound requires s >= t >= 2");
  if (h < 1 || j < 1) throw Error("refined projection bound requires h, j >= 1");
  if (i > h) throw Error("refined projection bound requires 0 <= i <= h");
  const std::uint64_t num = (s - t + 1) * gauss_count(q, h + j) - gauss_count(q, i + j);
  return {num / gauss_count(q, j) + t, BoundKind::upper, "projection-refined", false};
}

std::optional<BoundResult> two_weight_bound(std::uint64_t q, std::uint64_t h, std::uint64_t j, std::uint64_t s) {
  require_q(q);
  if (s < 2) throw Error("two-weight bound requires s >= 2");
  if (h < 1 || j < 1) throw Error("two-weight bound requires h, j >= 1");
  const std::uint64_t p = characteristic(q);
  std::uint64_t rest = s;
  while (rest % p == 0) rest /= p;
  if (rest == 1) return std::nullopt;
  // Largest integer strictly below ((s-1)[h+j] + [j]) / [j].
  const std::uint64_t den = gauss_count(q, j);
  const std::uint64_t num = (s - 1) * gauss_count(q, h + j) + den;
  // If a system of that size could meet every hyperplane in exactly s
  // elements, its code has one weight and the argument does not apply
  // (e.g. all seven points of PG(2,2) with s = 3).
  if (num % den == 0 && (num / den) * gauss_count(q, h + j) == s * gauss_count(q, 2 * h + j)) return std::nullopt;
  return BoundResult{(num - 1) / den, BoundKind::upper, "two-weight", false};
}

LinearCodeOracle griesmer_oracle(std::uint64_t q) {
  return [q](std::uint64_t n, std::uint64_t k, std::uint64_t d) -> std::optional<bool> {
    if (n < griesmer(q, k, d)) return false;
    return std::nullopt;
  };
}

BoundResult coding_bound(std::uint64_t q, std::uint64_t r, std::uint64_t h, std::uint64_t s,
                         const LinearCodeOracle& oracle) {
  require_q(q);
  if (s < 1) throw Error("s must be at least 1");
  BoundResult res{0, BoundKind::upper, "coding", false};
  if (r <= h) {
    res.unbounded = true;
    return res;
  }
  const auto fallback = griesmer_oracle(q);
  const std::uint64_t hq = gauss_count(q, h), scale = upow(q, h - 1);
  for (std::uint64_t n = s + 1;; ++n) {
    const std::uint64_t len = n * hq, dist = scale * (n - s);
    std::optional<bool> ans;
    if (oracle) ans = oracle(len, r, dist);
    if (!ans) ans = fallback(len, r, dist);
    if (ans && !*ans) {
      res.value = n - 1;
      return res;
    }
  }
}

BoundResult best_upper_bound(std::uint64_t q, std::uint64_t r, std::uint64_t h, std::uint64_t s) {
  BoundResult best = griesmer_max_n(q, r, h, s);
  auto consider = [&](const BoundResult& b) {
    if (b.unbounded) return;
    if (best.unbounded || b.value < best.value) best = b;
  };
  if (h >= 1 && s >= 2) {
    for (std::uint64_t t = 2; t <= s && t * h < r; ++t) consider(projection_bound(q, h, r - t * h, s, t));
    if (2 * h < r)
      if (auto tw = two_weight_bound(q, h, r - 2 * h, s)) consider(*tw);
  }
  return best;
}

}  // namespace addgeo
