#include "addgeo/projsys.hpp"

#include <algorithm>
#include <numeric>

namespace addgeo {

std::uint64_t qpow(std::uint64_t q, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r *= q;
  return r;
}

std::uint64_t qint(std::uint64_t q, std::uint64_t t) { return (qpow(q, t) - 1) / (q - 1); }

ProjSystem::ProjSystem(FieldPtr field, std::size_t r, std::size_t h, bool allow_degenerate)
    : field_(std::move(field)), r_(r), h_(h), allow_degenerate_(allow_degenerate) {
  if (!field_) throw Error("projective system needs a field");
  if (r_ == 0) throw Error("ambient dimension must be positive");
}

void ProjSystem::add(const Subspace& s) { add(s, 1); }

void ProjSystem::add(const Subspace& s, std::size_t multiplicity) {
  if (s.ambient() != r_)
    throw Error("element ambient dimension " + std::to_string(s.ambient()) + " differs from r=" + std::to_string(r_));
  if (s.field().get() != field_.get()) throw Error("element lives over a different field");
  if (s.dim() > h_) throw Error("element dimension " + std::to_string(s.dim()) + " exceeds h=" + std::to_string(h_));
  if (s.dim() == 0 && !allow_degenerate_) throw Error("zero-dimensional element not allowed");
  for (std::size_t i = 0; i < multiplicity; ++i) elements_.push_back(s);
}

bool ProjSystem::faithful() const {
  return std::all_of(elements_.begin(), elements_.end(), [&](const Subspace& s) { return s.dim() == h_; });
}

SystemReport verify(const ProjSystem& sys) {
  SystemReport rep;
  rep.n = sys.n();
  rep.faithful = sys.faithful();
  auto ps = ProjectiveSpace::get(sys.field(), sys.r());
  rep.hyperplane_counts.assign(ps->size(), 0);
  std::vector<std::uint32_t> point_cover(ps->size(), 0);
  // Identical elements share the same incidence; group them.
  std::map<Subspace, std::uint32_t> mult;
  for (const auto& e : sys.elements()) ++mult[e];
  for (const auto& [e, m] : mult) {
    for (auto hp : ps->hyperplanes_containing(e)) rep.hyperplane_counts[hp] += m;
    for (auto pt : ps->points_of(e)) point_cover[pt] += m;
  }
  auto [mn, mx] = std::minmax_element(rep.hyperplane_counts.begin(), rep.hyperplane_counts.end());
  rep.s = *mx;
  rep.s_min = *mn;
  rep.s_witness = static_cast<std::size_t>(mx - rep.hyperplane_counts.begin());
  auto mp = std::max_element(point_cover.begin(), point_cover.end());
  rep.mu = *mp;
  rep.mu_witness = static_cast<std::size_t>(mp - point_cover.begin());
  for (auto c : rep.hyperplane_counts) ++rep.histogram[c];
  rep.spanning = rep.s < rep.n;
  return rep;
}

ProjSystem subfield_construct(const Matrix& code_gen, const FieldPtr& small) {
  FieldExtension ext(code_gen.field(), small);
  const Field& big = *code_gen.field();
  const std::size_t h = ext.degree(), k = code_gen.rows(), n = code_gen.cols();
  ProjSystem sys(small, k * h, h, true);
  for (std::size_t j = 0; j < n; ++j) {
    // Column block j of the expanded matrix, transposed: row c holds the c-th
    // coordinate of alpha^t * g_ij at position i*h + t.
    Matrix block(small, h, k * h);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t t = 0; t < h; ++t) {
        auto coords = ext.expand(big.mul(big.pow_alpha(static_cast<std::int64_t>(t)), code_gen(i, j)));
        for (std::size_t c = 0; c < h; ++c) block(c, i * h + t) = coords[c];
      }
    sys.add(Subspace(block));
  }
  return sys;
}

std::uint64_t PointMultiset::total() const { return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}); }

PointMultiset expand_points(const ProjSystem& sys) {
  if (!sys.faithful()) throw Error("point expansion requires a faithful system");
  auto ps = ProjectiveSpace::get(sys.field(), sys.r());
  PointMultiset pm{sys.field(), sys.r(), std::vector<std::uint32_t>(ps->size(), 0)};
  for (const auto& e : sys.elements())
    for (auto pt : ps->points_of(e)) ++pm.counts[pt];
  return pm;
}

namespace {
std::vector<std::uint64_t> points_per_hyperplane(const PointMultiset& pm) {
  auto ps = ProjectiveSpace::get(pm.field, pm.r);
  std::vector<std::uint64_t> on(ps->size(), 0);
  for (std::size_t hp = 0; hp < ps->size(); ++hp) {
    Subspace plane = dual_space(ps->point_subspace(hp));
    for (auto pt : ps->points_of(plane)) on[hp] += pm.counts[pt];
  }
  return on;
}
}  // namespace

WeightDistribution weight_distribution(const PointMultiset& pm) {
  WeightDistribution wd;
  wd.length = pm.total();
  auto on = points_per_hyperplane(pm);
  wd.max_on_hyperplane = on.empty() ? 0 : *std::max_element(on.begin(), on.end());
  for (auto c : on) ++wd.counts[wd.length - c];
  if (!wd.counts.empty()) {
    wd.min_weight = wd.counts.begin()->first;
    wd.max_weight = wd.counts.rbegin()->first;
  }
  return wd;
}

bool divisibility_check(const PointMultiset& pm, std::uint64_t delta) {
  if (delta == 0) throw Error("divisor must be positive");
  auto wd = weight_distribution(pm);
  return std::all_of(wd.counts.begin(), wd.counts.end(), [&](const auto& kv) { return kv.first % delta == 0; });
}

MultispreadReport multispread_check(const ProjSystem& sys, std::size_t h) { return multispread_check(sys, h, verify(sys)); }

MultispreadReport multispread_check(const ProjSystem& sys, std::size_t h, const SystemReport& report) {
  MultispreadReport mr;
  const std::uint64_t q = sys.field()->q();
  const std::size_t k = sys.r();
  mr.k = k;
  if (h > k) {
    mr.failure = "h exceeds the ambient dimension";
    return mr;
  }
  auto ps = ProjectiveSpace::get(sys.field(), k);
  std::vector<std::uint64_t> cover(ps->size(), 0);
  for (const auto& e : sys.elements()) {
    if (e.dim() > h) {
      mr.failure = "element of dimension " + std::to_string(e.dim()) + " exceeds h";
      return mr;
    }
    const std::uint64_t w = qpow(q, h - e.dim());
    mr.lambda += w - 1;
    for (auto pt : ps->points_of(e)) cover[pt] += w;
  }
  mr.mu = cover.empty() ? 0 : *std::max_element(cover.begin(), cover.end());
  for (std::size_t i = 0; i < cover.size(); ++i)
    if (cover[i] != mr.mu) {
      mr.witness_point = i;
      mr.failure = "point " + std::to_string(i) + " covered " + std::to_string(cover[i]) +
                   " times, maximum coverage " + std::to_string(mr.mu);
      return mr;
    }
  const std::int64_t n = static_cast<std::int64_t>(sys.n());
  const std::int64_t mu = static_cast<std::int64_t>(mr.mu);
  const std::int64_t lambda = static_cast<std::int64_t>(mr.lambda);
  const std::int64_t qkh = static_cast<std::int64_t>(qpow(q, k - h));
  const std::int64_t qh1 = static_cast<std::int64_t>(qpow(q, h)) - 1;
  mr.s = n - qkh * mu;
  mr.equation_s_holds = report.s == report.s_min && static_cast<std::int64_t>(report.s) == mr.s;
  mr.equation_lambda_holds = qh1 * mr.s == (qkh - 1) * mu + lambda;
  if (qh1 == 0) {
    mr.congruence_holds = true;
  } else {
    const std::int64_t qk1 = static_cast<std::int64_t>(qpow(q, k)) - 1;
    std::int64_t lhs = lambda % qh1;
    std::int64_t rhs = ((-(mu % qh1) * (qk1 % qh1)) % qh1 + qh1) % qh1;
    mr.congruence_holds = lhs == rhs;
  }
  mr.valid = mr.equation_s_holds && mr.equation_lambda_holds && mr.congruence_holds;
  if (!mr.valid) mr.failure = "multispread parameter equations do not hold";
  return mr;
}

CodeParams code_params(const ProjSystem& sys, const SystemReport& report) {
  CodeParams cp;
  cp.n = sys.n();
  const std::size_t g = std::gcd(sys.r(), sys.h() == 0 ? 1 : sys.h());
  cp.k_num = sys.r() / g;
  cp.k_den = (sys.h() == 0 ? 1 : sys.h()) / g;
  cp.d = report.n - report.s;
  return cp;
}

CodeParams code_params(const ProjSystem& sys) { return code_params(sys, verify(sys)); }

Matrix subfield_generator_matrix(const ProjSystem& sys) {
  if (!sys.faithful()) throw Error("subfield generator matrix requires a faithful system");
  const std::size_t h = sys.h();
  Matrix g(sys.field(), sys.r(), sys.n() * h);
  for (std::size_t j = 0; j < sys.n(); ++j) {
    const Matrix& b = sys.elements()[j].basis();
    for (std::size_t c = 0; c < h; ++c)
      for (std::size_t i = 0; i < sys.r(); ++i) g(i, j * h + c) = b(c, i);
  }
  return g;
}

ProjSystem system_from_generator(const Matrix& generator, std::size_t h) {
  if (h == 0 || generator.cols() % h != 0) throw Error("column count is not a multiple of h");
  ProjSystem sys(generator.field(), generator.rows(), h, true);
  for (std::size_t j = 0; j < generator.cols() / h; ++j) {
    Matrix block(generator.field(), h, generator.rows());
    for (std::size_t c = 0; c < h; ++c)
      for (std::size_t i = 0; i < generator.rows(); ++i) block(c, i) = generator(i, j * h + c);
    sys.add(Subspace(block));
  }
  return sys;
}

}  // namespace addgeo
