#include "addgeo/field.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <utility>

namespace addgeo {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

std::uint32_t ipow(std::uint32_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    r *= b;
    if (r > kMaxFieldSize) throw Error("field size exceeds 2^16");
  }
  return static_cast<std::uint32_t>(r);
}

// Polynomial codes: coefficient of x^i is the i-th base-p digit.
std::vector<std::uint32_t> digits(std::uint32_t code, std::uint32_t p, std::uint32_t l) {
  std::vector<std::uint32_t> d(l);
  for (std::uint32_t i = 0; i < l; ++i) {
    d[i] = code % p;
    code /= p;
  }
  return d;
}

std::uint32_t undigits(const std::vector<std::uint32_t>& d, std::uint32_t p) {
  std::uint32_t code = 0;
  for (std::size_t i = d.size(); i-- > 0;) code = code * p + d[i];
  return code;
}

// Multiply the polynomial code by x modulo the monic modulus.
std::uint32_t times_x(std::uint32_t code, const std::vector<std::uint32_t>& mod,
                      std::uint32_t p, std::uint32_t l) {
  auto d = digits(code, p, l);
  std::uint32_t top = d[l - 1];
  for (std::uint32_t i = l - 1; i > 0; --i) d[i] = d[i - 1];
  d[0] = 0;
  // x^l = -(m_0 + ... + m_{l-1} x^{l-1})
  for (std::uint32_t i = 0; i < l; ++i) d[i] = (d[i] + (p - mod[i]) % p * top) % p;
  return undigits(d, p);
}

// Order of x modulo mod equals q-1 (and mod has nonzero constant term).
bool is_primitive(const std::vector<std::uint32_t>& mod, std::uint32_t p, std::uint32_t l) {
  if (mod[0] % p == 0) return false;
  const std::uint32_t q = ipow(p, l);
  std::uint32_t x = (l == 1) ? (p - mod[0]) % p : p;  // code of the residue of x
  if (l == 1) {
    // residue of x is the root -m_0
    std::uint64_t cur = x;
    for (std::uint32_t k = 1; k < q - 1; ++k) {
      if (cur == 1) return false;
      cur = cur * x % p;
    }
    return cur == 1;
  }
  std::uint32_t cur = x;
  for (std::uint32_t k = 1; k < q - 1; ++k) {
    if (cur == 1) return false;
    cur = times_x(cur, mod, p, l);
  }
  return cur == 1;
}

std::vector<std::uint32_t> documented_modulus(std::uint32_t p, std::uint32_t l) {
  if (p == 2 && l == 2) return {1, 1, 1};     // x^2 + x + 1
  if (p == 2 && l == 3) return {1, 1, 0, 1};  // x^3 + x + 1
  if (p == 3 && l == 2) return {2, 2, 1};     // x^2 + 2x + 2
  if (p == 2 && l == 4) return {1, 1, 0, 0, 1};  // x^4 + x + 1
  if (p == 5 && l == 2) return {2, 4, 1};     // x^2 + 4x + 2
  return {};
}

std::vector<std::uint32_t> find_modulus(std::uint32_t p, std::uint32_t l) {
  if (auto m = documented_modulus(p, l); !m.empty()) return m;
  if (l == 1) {
    for (std::uint32_t g = 1; g < p; ++g) {
      std::vector<std::uint32_t> m{(p - g) % p, 1};
      if (p == 2 || is_primitive(m, p, 1)) return m;
    }
  }
  const std::uint32_t q = ipow(p, l);
  for (std::uint32_t code = 1; code < q; ++code) {
    auto m = digits(code, p, l);
    m.push_back(1);
    if (is_primitive(m, p, l)) return m;
  }
  throw Error("no primitive polynomial found");
}

}  // namespace

Field::Field(std::uint32_t p, std::uint32_t l) : p_(p), l_(l) {
  if (!addgeo::is_prime(p)) throw Error("field characteristic " + std::to_string(p) + " is not prime");
  if (l < 1) throw Error("extension degree must be positive");
  q_ = ipow(p, l);
  modulus_ = find_modulus(p, l);

  to_poly_.assign(q_, 0);
  from_poly_.assign(q_, 0);
  std::uint32_t cur = 1;
  const std::uint32_t x = (l == 1) ? (p - modulus_[0]) % p : p;
  for (std::uint32_t k = 0; k + 1 < q_; ++k) {
    to_poly_[k + 1] = cur;
    from_poly_[cur] = static_cast<Elem>(k + 1);
    if (l == 1)
      cur = static_cast<std::uint32_t>(static_cast<std::uint64_t>(cur) * x % p);
    else
      cur = times_x(cur, modulus_, p, l);
  }
  if (cur != 1) throw Error("modulus is not primitive");

  neg_.assign(q_, 0);
  for (std::uint32_t a = 0; a < q_; ++a) {
    auto d = digits(to_poly_[a], p, l);
    for (auto& c : d) c = (p - c) % p;
    neg_[a] = from_poly_[undigits(d, p)];
  }
  if (q_ <= 256) {
    add_table_.assign(static_cast<std::size_t>(q_) * q_, 0);
    for (std::uint32_t a = 0; a < q_; ++a)
      for (std::uint32_t b = 0; b < q_; ++b)
        add_table_[static_cast<std::size_t>(a) * q_ + b] = add_slow(static_cast<Elem>(a), static_cast<Elem>(b));
  }
}

Elem Field::add_slow(Elem a, Elem b) const {
  std::uint32_t ca = to_poly_[a], cb = to_poly_[b], out = 0, scale = 1;
  for (std::uint32_t i = 0; i < l_; ++i) {
    out += ((ca % p_ + cb % p_) % p_) * scale;
    ca /= p_;
    cb /= p_;
    scale *= p_;
  }
  return from_poly_[out];
}

std::shared_ptr<const Field> Field::get(std::uint32_t p, std::uint32_t l) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, std::shared_ptr<const Field>> cache;
  std::lock_guard lock(mu);
  auto key = std::make_pair(p, l);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto f = std::make_shared<const Field>(p, l);
  cache.emplace(key, f);
  return f;
}

std::shared_ptr<const Field> Field::of_order(std::uint32_t q) {
  for (std::uint32_t p = 2; p <= q; ++p) {
    if (q % p != 0) continue;
    std::uint32_t l = 0, r = q;
    while (r % p == 0) {
      r /= p;
      ++l;
    }
    if (r != 1) break;
    return get(p, l);
  }
  throw Error("field order " + std::to_string(q) + " is not a prime power");
}

Elem Field::pow_alpha(std::int64_t k) const {
  const std::int64_t m = q_ - 1;
  std::int64_t r = k % m;
  if (r < 0) r += m;
  return static_cast<Elem>(r + 1);
}

std::uint32_t Field::log(Elem a) const {
  if (a == 0) throw Error("discrete log of zero");
  return a - 1u;
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw Error("division by zero");
  return pow_alpha(-static_cast<std::int64_t>(a - 1));
}

Elem Field::pow(Elem a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  return pow_alpha(static_cast<std::int64_t>(((a - 1ull) * (e % (q_ - 1))) % (q_ - 1)));
}

Elem Field::frobenius(Elem a, std::uint32_t e) const {
  if (a == 0) return 0;
  std::uint64_t f = 1;
  for (std::uint32_t i = 0; i < e % l_; ++i) f *= p_;
  return pow_alpha(static_cast<std::int64_t>(((a - 1ull) * f) % (q_ - 1)));
}

Elem Field::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return from_poly_[static_cast<std::uint32_t>(r)];
}

std::uint32_t Field::to_int(Elem a) const {
  std::uint32_t c = to_poly_[a];
  if (c >= p_) throw Error("element is not in the prime field");
  return c;
}

std::string Field::token(Elem a) const {
  if (a == 0) return "0";
  if (a == 1) return "1";
  if (l_ == 1) return std::to_string(to_poly_[a]);
  if (q_ == 4) return a == 2 ? "w" : "v";
  return "a^" + std::to_string(a - 1);
}

Elem Field::parse_token(std::string_view tok) const {
  if (tok.empty()) throw Error("empty element token");
  if (tok.size() > 2 && tok[0] == 'a' && tok[1] == '^') {
    std::int64_t k = 0;
    for (char c : tok.substr(2)) {
      if (c < '0' || c > '9') throw Error("bad element token '" + std::string(tok) + "'");
      k = k * 10 + (c - '0');
    }
    return pow_alpha(k);
  }
  if (q_ == 4 && (tok == "w" || tok == "v")) return tok == "w" ? 2 : 3;
  std::uint64_t v = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') throw Error("unknown element token '" + std::string(tok) + "'");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  if (l_ == 1) {
    if (v >= p_) throw Error("element token '" + std::string(tok) + "' out of range");
    return from_poly_[static_cast<std::uint32_t>(v)];
  }
  if (v > 1) throw Error("element token '" + std::string(tok) + "' invalid for GF(" + std::to_string(q_) + ")");
  return static_cast<Elem>(v);
}

bool Field::is_square(Elem a) const {
  if (a == 0 || p_ == 2) return true;
  return (a - 1u) % 2 == 0;
}

FieldExtension::FieldExtension(FieldPtr big, FieldPtr small)
    : big_(std::move(big)), small_(std::move(small)) {
  if (big_->p() != small_->p() || big_->l() % small_->l() != 0)
    throw Error("GF(" + std::to_string(small_->q()) + ") is not a subfield of GF(" +
                std::to_string(big_->q()) + ")");
  h_ = big_->l() / small_->l();
  const std::uint32_t Q = big_->q(), q = small_->q();
  const std::uint32_t step = (Q - 1) / (q - 1);

  // Image of the small primitive element: a root of the small modulus among
  // the generators alpha_big^(m*step), gcd(m, q-1) = 1, smallest m first.
  auto mod = small_->modulus();
  Elem beta = 0;
  for (std::uint32_t m = 1; m < std::max<std::uint32_t>(q, 2) && beta == 0; ++m) {
    if (q > 2 && std::gcd(m, q - 1) != 1) continue;
    Elem cand = big_->pow_alpha(static_cast<std::int64_t>(m) * step);
    Elem val = 0, pw = 1;
    for (std::size_t i = 0; i < mod.size(); ++i) {
      val = big_->add(val, big_->mul(big_->from_poly(mod[i]), pw));
      pw = big_->mul(pw, cand);
    }
    if (val == 0) beta = cand;
  }
  if (beta == 0) throw Error("no compatible subfield embedding");

  embed_.assign(q, 0);
  unembed_.assign(Q, 0xFFFF);
  unembed_[0] = 0;
  for (std::uint32_t k = 0; k + 1 < q; ++k) {
    embed_[k + 1] = big_->pow(beta, k);
    unembed_[embed_[k + 1]] = static_cast<Elem>(k + 1);
  }

  expand_.assign(static_cast<std::size_t>(Q) * h_, 0);
  std::vector<Elem> coords(h_, 0);
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < h_; ++i) total *= q;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (std::uint32_t i = 0; i < h_; ++i) {
      coords[i] = static_cast<Elem>(c % q);
      c /= q;
    }
    Elem e = evaluate(coords);
    for (std::uint32_t i = 0; i < h_; ++i) expand_[static_cast<std::size_t>(e) * h_ + i] = coords[i];
  }
}

std::vector<Elem> FieldExtension::expand(Elem e) const {
  auto first = expand_.begin() + static_cast<std::ptrdiff_t>(e) * h_;
  return {first, first + h_};
}

Elem FieldExtension::evaluate(std::span<const Elem> coords) const {
  Elem acc = 0;
  for (std::size_t i = 0; i < coords.size(); ++i)
    acc = big_->add(acc, big_->mul(embed_[coords[i]], big_->pow_alpha(static_cast<std::int64_t>(i))));
  return acc;
}

Elem FieldExtension::restrict(Elem e) const {
  if (unembed_[e] == 0xFFFF) throw Error("element is not in the subfield");
  return unembed_[e];
}

Elem embed_subfield(const Field& big, const Field& small, Elem e) {
  FieldExtension ext(Field::get(big.p(), big.l()), Field::get(small.p(), small.l()));
  return ext.embed(e);
}

std::vector<Elem> expand_coords(const Field& big, const Field& small, Elem e) {
  FieldExtension ext(Field::get(big.p(), big.l()), Field::get(small.p(), small.l()));
  return ext.expand(e);
}

}  // namespace addgeo
