#include "addgeo/constructions.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace addgeo {

namespace {

Subspace point3(const FieldPtr& f, Elem a, Elem b, Elem c) { return Subspace(Matrix(f, 1, 3, {a, b, c})); }

Subspace rows_subspace(const FieldPtr& f, std::size_t r, const std::vector<std::vector<Elem>>& rows) {
  return Subspace(Matrix::from_rows(f, r, rows));
}

std::vector<std::vector<Elem>> rows_of(const Subspace& s) {
  std::vector<std::vector<Elem>> out;
  for (std::size_t i = 0; i < s.dim(); ++i) out.emplace_back(s.basis().row(i).begin(), s.basis().row(i).end());
  return out;
}

FieldPtr extension_of(const FieldPtr& small, std::size_t h) {
  std::uint64_t big = qpow(small->q(), h);
  if (h == 0 || big > kMaxFieldSize) throw Error("GF(" + std::to_string(small->q()) + "^" + std::to_string(h) + ") is not supported");
  return Field::get(small->p(), small->l() * static_cast<std::uint32_t>(h));
}

void expect(const ProjSystem& sys, std::uint64_t n, std::uint64_t s, const char* what) {
  auto rep = verify(sys);
  if (rep.n != n || rep.s != s || !rep.faithful)
    throw Error(std::string(what) + " produced n=" + std::to_string(rep.n) + " s=" + std::to_string(rep.s) +
                (rep.faithful ? "" : " (unfaithful)") + ", expected n=" + std::to_string(n) + " s=" + std::to_string(s));
}

// Projects the expanded columns through the first ceil(h/2) basis vectors of
// the removed point's image, then adds two h-spaces through the projected
// point that together span the projected tangent.
ProjSystem project_and_complete(const FieldPtr& small, std::size_t h, const std::vector<Subspace>& columns,
                                const Subspace& point, const Subspace& tangent) {
  const std::size_t up = (h + 1) / 2;
  const std::size_t r = point.ambient();
  Matrix u(small, up, r);
  for (std::size_t i = 0; i < up; ++i) std::copy(point.basis().row(i).begin(), point.basis().row(i).end(), u.row(i).begin());
  const Subspace center(u);
  ProjSystem sys(small, r - up, h);
  for (const auto& c : columns) sys.add(project_through(c, center));

  const Subspace p2 = project_through(point, center);
  const Subspace l2 = project_through(tangent, center);
  std::vector<std::vector<Elem>> comp;
  Subspace acc = p2;
  for (std::size_t i = 0; i < l2.dim() && comp.size() < h; ++i) {
    std::vector<Elem> row(l2.basis().row(i).begin(), l2.basis().row(i).end());
    if (acc.contains(row)) continue;
    acc = span_pair(acc, rows_subspace(small, r - up, {row}));
    comp.push_back(std::move(row));
  }
  if (comp.size() != h || acc != l2) throw Error("projected tangent has unexpected dimension");
  auto first = rows_of(p2), second = rows_of(p2);
  first.insert(first.end(), comp.begin(), comp.begin() + static_cast<std::ptrdiff_t>(up));
  second.insert(second.end(), comp.end() - static_cast<std::ptrdiff_t>(up), comp.end());
  sys.add(rows_subspace(small, r - up, first));
  sys.add(rows_subspace(small, r - up, second));
  return sys;
}

}  // namespace

OvalSpec make_conic(const FieldPtr& field) {
  OvalSpec o{field, OvalKind::conic, {}};
  for (Elem t = 0; t < field->q(); ++t) o.points.push_back(point3(field, 1, t, field->mul(t, t)));
  o.points.push_back(point3(field, 0, 0, 1));
  return o;
}

OvalSpec make_hyperoval(const FieldPtr& field) {
  if (field->p() != 2) throw Error("hyperovals exist only for even q");
  OvalSpec o = make_conic(field);
  o.kind = OvalKind::hyperoval;
  o.points.push_back(point3(field, 0, 1, 0));
  return o;
}

std::size_t max_points_on_line(const std::vector<Subspace>& points) {
  if (points.empty()) return 0;
  std::size_t best = 0;
  for (const auto& normal : enumerate_hyperplanes(points.front().field(), 3)) {
    std::size_t on = 0;
    for (const auto& p : points) on += in_hyperplane(p, normal);
    best = std::max(best, on);
  }
  return best;
}

ProjSystem line_spread(const FieldPtr& small, const FieldPtr& big) {
  if (big->p() != small->p() || big->l() != 2 * small->l()) throw Error("line spread needs GF(q^2) over GF(q)");
  Matrix g(big, 2, big->q() + 1);
  g(1, 0) = 1;
  for (Elem x = 0; x < big->q(); ++x) {
    g(0, x + 1u) = 1;
    g(1, x + 1u) = x;
  }
  ProjSystem sys = subfield_construct(g, small);
  ProjSystem out(small, 4, 2);
  for (const auto& e : sys.elements()) out.add(e);
  expect(out, big->q() + 1, 1, "line spread");
  return out;
}

ProjSystem construct_oval_system(const FieldPtr& small, std::size_t h) {
  if (h < 2) throw Error("oval construction needs h >= 2");
  const FieldPtr big = extension_of(small, h);
  const std::uint32_t Q = big->q();
  // Columns: conic points (1, t, t^2), then P = (0,0,1), then (0,1,0) on the
  // tangent at P.
  Matrix g(big, 3, Q + 2);
  for (Elem t = 0; t < Q; ++t) {
    g(0, t) = 1;
    g(1, t) = t;
    g(2, t) = big->mul(t, t);
  }
  g(2, Q) = 1;
  g(1, Q + 1) = 1;
  ProjSystem ex = subfield_construct(g, small);
  const auto& el = ex.elements();
  std::vector<Subspace> columns(el.begin(), el.begin() + Q);
  ProjSystem sys = project_and_complete(small, h, columns, el[Q], span_pair(el[Q], el[Q + 1]));
  expect(sys, Q + 2, 2, "oval construction");
  return sys;
}

Subspace RSFrame::tail(std::size_t i) const {
  if (i == 0 || i > s + 1) throw Error("tail index out of range");
  Matrix m(big, i, s + 1);
  for (std::size_t k = 0; k < i; ++k) m(k, s + 1 - i + k) = 1;
  return Subspace(m);
}

RSFrame make_rs_frame(const FieldPtr& big, std::size_t s) {
  RSFrame fr{big, s, Matrix(big, s + 1, big->q())};
  for (Elem x = 0; x < big->q(); ++x) {
    Elem v = 1;
    for (std::size_t i = 0; i <= s; ++i) {
      fr.generator(i, x) = v;
      v = big->mul(v, x);
    }
  }
  return fr;
}

bool rs_spans_avoid_tails(const RSFrame& frame, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t cols = frame.generator.cols();
  std::vector<std::size_t> idx(cols);
  std::iota(idx.begin(), idx.end(), 0);
  std::uniform_int_distribution<std::size_t> pick_i(1, frame.s);
  for (std::size_t it = 0; it < samples; ++it) {
    const std::size_t i = pick_i(rng);
    const std::size_t k = frame.s + 1 - i;
    if (k > cols) continue;
    for (std::size_t a = 0; a < k; ++a) std::swap(idx[a], idx[std::uniform_int_distribution<std::size_t>(a, cols - 1)(rng)]);
    Subspace t = frame.tail(i);
    Matrix m(frame.big, k + i, frame.s + 1);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t row = 0; row <= frame.s; ++row) m(a, row) = frame.generator(row, idx[a]);
    for (std::size_t b = 0; b < i; ++b) std::copy(t.basis().row(b).begin(), t.basis().row(b).end(), m.row(k + b).begin());
    if (m.rank() != frame.s + 1) return false;
  }
  return true;
}

ProjSystem construct_rs_system(const FieldPtr& small, std::size_t h, std::size_t s) {
  if (h < 2 || s < 2) throw Error("Reed-Solomon construction needs h, s >= 2");
  const FieldPtr big = extension_of(small, h);
  const std::uint32_t Q = big->q();
  if (s >= Q) throw Error("s must be below q^h");
  RSFrame fr = make_rs_frame(big, s);
  Matrix g(big, s + 1, Q + 2);
  for (std::size_t i = 0; i <= s; ++i)
    for (std::size_t x = 0; x < Q; ++x) g(i, x) = fr.generator(i, x);
  g(s, Q) = 1;          // spans S_1
  g(s - 1, Q + 1) = 1;  // with the previous column spans S_2
  ProjSystem ex = subfield_construct(g, small);
  const auto& el = ex.elements();
  std::vector<Subspace> columns(el.begin(), el.begin() + Q);
  ProjSystem sys = project_and_complete(small, h, columns, el[Q], span_pair(el[Q], el[Q + 1]));
  expect(sys, Q + 2, s, "Reed-Solomon construction");
  return sys;
}

namespace {

FieldPtr odd_prime_field(std::uint32_t q) {
  if (q == 2 || !is_prime(q)) throw Error("q must be an odd prime");
  return Field::get(q, 1);
}

}  // namespace

std::pair<SemilinearMap, SemilinearMap> orbit_generators(std::uint32_t q) {
  auto f = odd_prime_field(q);
  Elem beta = 0;
  for (std::uint32_t k = 2; k < q && !beta; ++k)
    if (!f->is_square(f->from_int(k))) beta = f->from_int(k);
  Matrix a = Matrix::identity(f, 5), b = Matrix::identity(f, 5);
  a(0, 2) = a(1, 3) = a(2, 4) = 1;
  b(0, 3) = beta;
  b(1, 2) = b(3, 4) = 1;
  return {SemilinearMap(a), SemilinearMap(b)};
}

std::vector<Subspace> invariant_lines(std::uint32_t q) {
  auto f = odd_prime_field(q);
  std::vector<Subspace> out;
  out.push_back(rows_subspace(f, 5, {{0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}}));
  for (std::uint32_t y = 0; y < q; ++y) out.push_back(rows_subspace(f, 5, {{0, 0, 1, f->from_int(y), 0}, {0, 0, 0, 0, 1}}));
  return out;
}

ProjSystem construct_orbit_system(std::uint32_t q, std::uint32_t z, std::uint32_t zp, const std::vector<std::size_t>& extra) {
  auto f = odd_prime_field(q);
  auto [a, b] = orbit_generators(q);
  Group g(f, 5, {a, b});
  const Elem half = f->inv(f->from_int(2));
  Subspace rep = rows_subspace(f, 5, {{1, 0, half, 0, f->from_int(z)}, {0, 1, f->neg(half), 0, f->from_int(zp)}});
  ProjSystem sys(f, 5, 2);
  for (const auto& l : g.orbit(rep)) sys.add(l);
  auto lines = invariant_lines(q);
  for (auto i : extra) {
    if (i >= lines.size()) throw Error("invariant line index " + std::to_string(i) + " out of range");
    sys.add(lines[i]);
  }
  expect(sys, static_cast<std::uint64_t>(q) * q + extra.size(), 2, "orbit construction");
  return sys;
}

}  // namespace addgeo
