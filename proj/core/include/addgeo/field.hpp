#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "addgeo/error.hpp"

namespace addgeo {

/// A field element in index form: 0 is zero, k+1 is alpha^k for the
/// primitive element alpha of the field.  The natural order of indices
/// (0 < 1 < alpha < alpha^2 < ...) is the element order used by every
/// canonical form in the library.
using Elem = std::uint16_t;

/// Largest supported field size.
inline constexpr std::uint32_t kMaxFieldSize = 1u << 16;

/// Exact arithmetic in GF(p^l).
///
/// The field is GF(p)[x]/(m(x)) for a fixed primitive polynomial m; alpha is
/// the residue class of x.  For prime fields m(x) = x - g where g is the
/// smallest primitive root mod p, so alpha = g.  Instances are immutable and
/// interned: Field::get returns the same object for the same (p, l).
class Field {
 public:
  static std::shared_ptr<const Field> get(std::uint32_t p, std::uint32_t l);
  /// Convenience overload taking q directly; q must be a prime power.
  static std::shared_ptr<const Field> of_order(std::uint32_t q);

  std::uint32_t p() const { return p_; }
  std::uint32_t l() const { return l_; }
  std::uint32_t q() const { return q_; }
  bool is_prime() const { return l_ == 1; }

  /// Modulus coefficients, lowest degree first, length l+1, monic.
  std::span<const std::uint32_t> modulus() const { return modulus_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  /// alpha^k for any integer k (reduced mod q-1).
  Elem pow_alpha(std::int64_t k) const;
  /// Discrete log of a nonzero element, in 0..q-2.
  std::uint32_t log(Elem a) const;

  Elem add(Elem a, Elem b) const {
    if (a == 0) return b;
    if (b == 0) return a;
    if (add_table_.empty()) return add_slow(a, b);
    return add_table_[static_cast<std::size_t>(a) * q_ + b];
  }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem sub(Elem a, Elem b) const { return add(a, neg_[b]); }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    std::uint32_t e = (a - 1u) + (b - 1u);
    if (e >= q_ - 1) e -= q_ - 1;
    return static_cast<Elem>(e + 1);
  }
  /// Multiplicative inverse; throws Error on zero.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const;
  /// The field automorphism x -> x^(p^e).
  Elem frobenius(Elem a, std::uint32_t e) const;

  /// Element from its integer polynomial encoding sum c_i p^i (c_i the
  /// coefficient of alpha^i), and back.
  Elem from_poly(std::uint32_t code) const { return from_poly_[code]; }
  std::uint32_t to_poly(Elem a) const { return to_poly_[a]; }
  /// Prime-field element for the integer v mod p.
  Elem from_int(std::int64_t v) const;
  /// Integer value of a prime-subfield element (only for prime fields or
  /// elements of GF(p)); throws otherwise.
  std::uint32_t to_int(Elem a) const;

  /// Text token of an element: digits for prime fields, 0/1/w/v for GF(4),
  /// "a^k" otherwise (with "0" and "1" for zero and one).
  std::string token(Elem a) const;
  /// Inverse of token(); also accepts "a^k" for any field.  Throws Error on
  /// unknown tokens.
  Elem parse_token(std::string_view tok) const;

  /// True iff a is a square in the field.
  bool is_square(Elem a) const;

  bool operator==(const Field& o) const { return p_ == o.p_ && l_ == o.l_; }

  Field(std::uint32_t p, std::uint32_t l);  // use get()

 private:
  Elem add_slow(Elem a, Elem b) const;

  std::uint32_t p_;
  std::uint32_t l_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> to_poly_;  // index -> polynomial code
  std::vector<Elem> from_poly_;         // polynomial code -> index
  std::vector<Elem> neg_;
  std::vector<Elem> add_table_;  // q*q, only when q <= 256
};

using FieldPtr = std::shared_ptr<const Field>;

/// True iff n is prime.
bool is_prime(std::uint64_t n);

/// The embedding GF(q) -> GF(q^h) together with coordinate expansion over the
/// basis (1, alpha, ..., alpha^(h-1)) of the big field.
class FieldExtension {
 public:
  FieldExtension(FieldPtr big, FieldPtr small);

  const FieldPtr& big() const { return big_; }
  const FieldPtr& small() const { return small_; }
  std::uint32_t degree() const { return h_; }

  /// Image of a small-field element in the big field.
  Elem embed(Elem e) const { return embed_[e]; }
  /// Coordinates (c_0, ..., c_{h-1}) over the small field with
  /// sum c_i alpha_big^i = e.
  std::vector<Elem> expand(Elem e) const;
  /// Evaluation: sum c_i alpha_big^i.
  Elem evaluate(std::span<const Elem> coords) const;
  /// Small-field element mapped to e, or throws if e is not in the subfield.
  Elem restrict(Elem e) const;

 private:
  FieldPtr big_;
  FieldPtr small_;
  std::uint32_t h_ = 0;
  std::vector<Elem> embed_;
  std::vector<Elem> unembed_;          // big -> small, 0xFFFF if not in subfield
  std::vector<Elem> expand_;           // big.q * h coordinates
};

/// Free-function forms of the field operations.
inline Elem add(const Field& f, Elem a, Elem b) { return f.add(a, b); }
inline Elem mul(const Field& f, Elem a, Elem b) { return f.mul(a, b); }
inline Elem inv(const Field& f, Elem a) { return f.inv(a); }
Elem embed_subfield(const Field& big, const Field& small, Elem e);
std::vector<Elem> expand_coords(const Field& big, const Field& small, Elem e);

}  // namespace addgeo
