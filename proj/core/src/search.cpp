#include "addgeo/search.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>
#include <random>
#include <unordered_map>

#include "addgeo/bounds.hpp"

namespace addgeo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Incidence {
  std::vector<std::uint32_t> idx;
  std::vector<std::uint32_t> cnt;
};

Incidence tally(std::vector<std::uint32_t> all) {
  std::sort(all.begin(), all.end());
  Incidence inc;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    inc.idx.push_back(all[i]);
    inc.cnt.push_back(static_cast<std::uint32_t>(j - i));
    i = j;
  }
  return inc;
}

struct Orbit {
  std::vector<std::uint32_t> members;  // candidate indices
  Incidence hyp;
  Incidence pt;
};

class BranchAndBound {
 public:
  explicit BranchAndBound(const SearchProblem& p) : p_(p), t0_(Clock::now()) {
    if (!p.field) throw Error("search needs a field");
    if (p.h == 0 || p.h > p.r) throw Error("search needs 1 <= h <= r");
    if (p.group && (p.group->dim() != p.r || p.group->field().get() != p.field.get()))
      throw Error("group does not act on the search space");
    ps_ = ProjectiveSpace::get(p.field, p.r);
    const std::size_t np = ps_->size();
    cap_.assign(np, static_cast<std::int64_t>(p.s));
    if (p.mu_cap) mu_.assign(np, static_cast<std::int64_t>(*p.mu_cap));
    touched_.assign(np, 0);
    tmin_ = qint(p.field->q(), p.r - p.h);
    local_ok_ = 2 * p.h < p.r;

    for (std::size_t d = p.faithful_only ? p.h : 1; d <= p.h; ++d)
      for (auto& s : enumerate_subspaces(p.field, p.r, d)) cands_.push_back(std::move(s));
    auto& where = where_;
    for (std::uint32_t i = 0; i < cands_.size(); ++i) where.emplace(cands_[i], i);
    pos_of_.assign(cands_.size(), -1);
    cand_hyps_.resize(cands_.size());
    hyp_cands_.resize(np);
    for (std::uint32_t i = 0; i < cands_.size(); ++i) {
      cand_hyps_[i] = ps_->hyperplanes_containing(cands_[i]);
      for (auto hp : cand_hyps_[i]) hyp_cands_[hp].push_back(i);
    }
    live_cand_.assign(cands_.size(), 0);
    uncovered_.assign(np, 0);
    live_on_.assign(np, 0);

    std::vector<char> seen(cands_.size(), 0);
    for (std::uint32_t i = 0; i < cands_.size(); ++i) {
      if (seen[i]) continue;
      Orbit o;
      if (p.group) {
        for (const auto& s : p.group->orbit(cands_[i])) o.members.push_back(where.at(s));
        std::sort(o.members.begin(), o.members.end());
      } else {
        o.members.push_back(i);
      }
      std::vector<std::uint32_t> hs, pts;
      for (auto m : o.members) {
        seen[m] = 1;
        hs.insert(hs.end(), cand_hyps_[m].begin(), cand_hyps_[m].end());
        if (p.mu_cap) {
          auto pp = ps_->points_of(cands_[m]);
          pts.insert(pts.end(), pp.begin(), pp.end());
        }
      }
      o.hyp = tally(std::move(hs));
      o.pt = tally(std::move(pts));
      orbits_.push_back(std::move(o));
    }

    for (const auto& e : p.seed) {
      if (e.ambient() != p.r || e.field().get() != p.field.get() || e.dim() == 0 || e.dim() > p.h)
        throw Error("seed element does not fit the search space");
      seed_hyps_.push_back(ps_->hyperplanes_containing(e));
      for (auto hp : seed_hyps_.back())
        if (--cap_[hp] < 0) throw Error("seed exceeds s on hyperplane " + std::to_string(hp));
      if (p.mu_cap)
        for (auto pt : ps_->points_of(e))
          if (--mu_[pt] < 0) throw Error("seed exceeds the point cap on point " + std::to_string(pt));
    }
    n_ = p.seed.size();

    if (!p.symmetry.empty() && p.symmetry_depth > 0) {
      if (p.group && p.group->order() > 1) throw Error("symmetry reduction needs the trivial prescribed group");
      std::map<Subspace, std::size_t> seed_count;
      for (const auto& e : p.seed) ++seed_count[e];
      for (const auto& g : p.symmetry) {
        if (g.dim() != p.r || g.field().get() != p.field.get()) throw Error("symmetry map does not act on GF(q)^r");
        std::map<Subspace, std::size_t> img;
        for (const auto& [e, m] : seed_count) img[g.apply(e)] += m;
        if (img != seed_count) throw Error("symmetry map does not preserve the seed");
      }
      sym_.resize(p.symmetry_depth);
      sym_[0] = p.symmetry;
    }

    auto ub = best_upper_bound(p.field->q(), p.r, p.h, p.s);
    upper_ = ub.unbounded ? std::numeric_limits<std::uint64_t>::max() : std::max<std::uint64_t>(ub.value, p.s);
  }

  SearchOutcome run() {
    best_n_ = n_;
    std::vector<std::uint32_t> live, mult;
    for (std::uint32_t o = 0; o < orbits_.size(); ++o)
      if (auto m = max_mult(o)) {
        live.push_back(o);
        mult.push_back(m);
      }
    bool complete = true;
    if (p_.warm_start_iterations && !finished()) warm_start();
    if (!finished() && !timed_out_ && !hit_node_limit()) complete = dfs(live, mult);
    else complete = finished();

    SearchOutcome out;
    out.best = ProjSystem(p_.field, p_.r, p_.h);
    for (const auto& e : p_.seed) out.best.add(e);
    for (auto [o, m] : best_choice_)
      for (auto c : orbits_[o].members) out.best.add(cands_[c], m);
    out.n_best = best_n_;
    out.target_reached = p_.target && best_n_ >= *p_.target;
    out.exhaustive = (complete && !p_.target) || best_n_ >= upper_;
    out.nodes = nodes_;
    out.elapsed = seconds_since(t0_);
    out.upper_cap = upper_;
    if (out.best.n() && verify(out.best).s > p_.s) throw Error("internal error: search result exceeds s");
    return out;
  }

 private:
  std::uint32_t max_mult(std::uint32_t o) const {
    std::int64_t m = p_.max_multiplicity ? p_.max_multiplicity : std::numeric_limits<std::int64_t>::max();
    const Orbit& orb = orbits_[o];
    for (std::size_t k = 0; k < orb.hyp.idx.size() && m > 0; ++k)
      m = std::min<std::int64_t>(m, cap_[orb.hyp.idx[k]] / orb.hyp.cnt[k]);
    for (std::size_t k = 0; k < orb.pt.idx.size() && m > 0; ++k)
      m = std::min<std::int64_t>(m, mu_[orb.pt.idx[k]] / orb.pt.cnt[k]);
    return static_cast<std::uint32_t>(std::max<std::int64_t>(m, 0));
  }

  void apply(std::uint32_t o, std::int64_t m) {
    const Orbit& orb = orbits_[o];
    for (std::size_t k = 0; k < orb.hyp.idx.size(); ++k) cap_[orb.hyp.idx[k]] -= m * orb.hyp.cnt[k];
    for (std::size_t k = 0; k < orb.pt.idx.size(); ++k) mu_[orb.pt.idx[k]] -= m * orb.pt.cnt[k];
    n_ = static_cast<std::uint64_t>(static_cast<std::int64_t>(n_) + m * static_cast<std::int64_t>(orb.members.size()));
  }

  bool finished() const {
    return best_n_ >= upper_ || (p_.target && best_n_ >= *p_.target);
  }

  // Tabu search over orbit multiplicities with hyperplane overloads
  // penalised; feasible states improve the incumbent.  Seeded, so repeatable.
  void warm_start() {
    std::mt19937_64 rng(p_.rng_seed);
    const std::size_t no = orbits_.size();
    std::vector<std::uint32_t> x(no, 0);
    std::vector<std::uint64_t> tabu_until(no, 0);
    auto overload = [&](std::uint32_t o, std::int64_t m) {
      // Change in total overload if m copies of o are added (m may be negative).
      const Orbit& orb = orbits_[o];
      std::int64_t d = 0;
      for (std::size_t k = 0; k < orb.hyp.idx.size(); ++k) {
        const std::int64_t c = cap_[orb.hyp.idx[k]];
        const std::int64_t after = c - m * orb.hyp.cnt[k];
        d += std::max<std::int64_t>(0, -after) - std::max<std::int64_t>(0, -c);
      }
      for (std::size_t k = 0; k < orb.pt.idx.size(); ++k) {
        const std::int64_t c = mu_[orb.pt.idx[k]];
        const std::int64_t after = c - m * orb.pt.cnt[k];
        d += std::max<std::int64_t>(0, -after) - std::max<std::int64_t>(0, -c);
      }
      return d;
    };
    const std::uint32_t limit = p_.max_multiplicity ? p_.max_multiplicity : static_cast<std::uint32_t>(p_.s);
    std::int64_t over = 0;
    const double weight = p_.warm_start_penalty;
    for (std::uint64_t it = 1; it <= p_.warm_start_iterations && !finished(); ++it) {
      if ((it & 1023) == 0 && p_.time_limit > 0 && seconds_since(t0_) > p_.time_limit) {
        timed_out_ = true;
        break;
      }
      double best_gain = -std::numeric_limits<double>::infinity();
      std::uint32_t pick = 0;
      std::int64_t pick_m = 0, pick_d = 0;
      std::uint64_t ties = 0;
      for (std::uint32_t o = 0; o < no; ++o) {
        for (std::int64_t m : {std::int64_t{1}, std::int64_t{-1}}) {
          if ((m > 0 && x[o] >= limit) || (m < 0 && x[o] == 0)) continue;
          const std::int64_t d = overload(o, m);
          const double gain = static_cast<double>(m * static_cast<std::int64_t>(orbits_[o].members.size())) -
                              weight * static_cast<double>(d);
          const bool aspire = over + d == 0 &&
                              n_ + m * static_cast<std::int64_t>(orbits_[o].members.size()) > best_n_;
          if (tabu_until[o] > it && !aspire) continue;
          if (gain > best_gain) {
            best_gain = gain;
            pick = o;
            pick_m = m;
            pick_d = d;
            ties = 1;
          } else if (gain == best_gain && std::uniform_int_distribution<std::uint64_t>(0, ties++)(rng) == 0) {
            pick = o;
            pick_m = m;
            pick_d = d;
          }
        }
      }
      if (best_gain == -std::numeric_limits<double>::infinity()) break;
      apply(pick, pick_m);
      x[pick] = static_cast<std::uint32_t>(static_cast<std::int64_t>(x[pick]) + pick_m);
      over += pick_d;
      tabu_until[pick] = it + 1 + std::uniform_int_distribution<std::uint64_t>(0, p_.warm_start_tenure)(rng);
      if (over == 0 && n_ > best_n_) {
        best_n_ = n_;
        best_choice_.clear();
        for (std::uint32_t o = 0; o < no; ++o)
          if (x[o]) best_choice_.emplace_back(o, x[o]);
      }
    }
    for (std::uint32_t o = 0; o < no; ++o)
      if (x[o]) apply(o, -static_cast<std::int64_t>(x[o]));
  }

  bool hit_node_limit() const { return p_.node_limit && nodes_ >= p_.node_limit; }

  bool out_of_budget() {
    if (hit_node_limit()) return true;
    if (p_.time_limit > 0 && (nodes_ & 1023) == 0 && seconds_since(t0_) > p_.time_limit) timed_out_ = true;
    return timed_out_;
  }

  // Largest n reachable from this node.
  std::uint64_t bound(const std::vector<std::uint32_t>& live, const std::vector<std::uint32_t>& mult, std::uint64_t need) {
    std::uint64_t by_sum = 0;
    for (std::size_t i = 0; i < live.size(); ++i) by_sum += std::uint64_t{mult[i]} * orbits_[live[i]].members.size();
    std::uint64_t best = by_sum;
    if (best == 0) return n_;

    // Slots left on hyperplanes that some live element could still use.
    marked_.clear();
    for (auto o : live)
      for (auto hp : orbits_[o].hyp.idx)
        if (!touched_[hp]) {
          touched_[hp] = 1;
          marked_.push_back(hp);
        }
    std::uint64_t slots = 0;
    for (auto hp : marked_) slots += static_cast<std::uint64_t>(cap_[hp]);
    best = std::min(best, slots / tmin_);

    // The hyperplanes through a chosen element cover every live element when
    // 2h < r, since their span is a proper subspace.
    if (local_ok_) {
      auto local = [&](const std::vector<std::uint32_t>& hyps) {
        std::uint64_t sum = 0;
        for (auto hp : hyps)
          if (touched_[hp]) sum += static_cast<std::uint64_t>(cap_[hp]);
        best = std::min(best, sum);
      };
      for (const auto& hs : seed_hyps_) local(hs);
      for (const auto& [o, m] : choice_)
        for (auto c : orbits_[o].members) local(cand_hyps_[c]);
    }
    if (n_ + best > need) best = std::min(best, cover_bound(live, need - n_));
    for (auto hp : marked_) touched_[hp] = 0;
    return std::min(n_ + best, upper_);
  }

  // Every future element lies in a chosen hyperplane of a cover of the live
  // elements, so the residual capacities of a cover bound their number.
  // Greedy cover; gives up once the total exceeds `enough`.
  std::uint64_t cover_bound(const std::vector<std::uint32_t>& live, std::uint64_t enough) {
    for (auto o : live)
      for (auto c : orbits_[o].members) live_cand_[c] = 1;
    for (auto hp : marked_) {
      std::uint32_t k = 0;
      for (auto c : hyp_cands_[hp]) k += live_cand_[c];
      uncovered_[hp] = k;
    }
    std::uint64_t total = 0;
    for (;;) {
      std::uint32_t pick = 0, pk = 0;
      std::int64_t pcap = 1;
      for (auto hp : marked_) {
        const std::uint32_t k = uncovered_[hp];
        if (k && (pk == 0 || std::int64_t{k} * pcap > std::int64_t{pk} * cap_[hp])) {
          pick = hp;
          pk = k;
          pcap = cap_[hp];
        }
      }
      if (pk == 0) break;
      total += static_cast<std::uint64_t>(pcap);
      if (total > enough) break;
      for (auto c : hyp_cands_[pick])
        if (live_cand_[c]) {
          live_cand_[c] = 0;
          for (auto hp : cand_hyps_[c]) --uncovered_[hp];
        }
    }
    for (auto o : live)
      for (auto c : orbits_[o].members) live_cand_[c] = 0;
    return total;
  }

  void record() {
    if (n_ > best_n_) {
      best_n_ = n_;
      best_choice_ = choice_;
    }
  }

  // Returns false if the search stopped on a budget.
  bool dfs(const std::vector<std::uint32_t>& live, const std::vector<std::uint32_t>& mult) {
    ++nodes_;
    record();
    if (finished()) return true;
    if (out_of_budget()) return false;
    std::uint64_t need = best_n_;
    if (p_.target) need = std::max<std::uint64_t>(need, *p_.target - 1);
    if (bound(live, mult, need) <= need) return true;
    if (choice_.size() < sym_.size()) return branch_on_orbits(live, mult);
    return branch(live, mult);
  }

  // Live incidences on hyperplanes that one copy of the orbit would fill,
  // per element added.  Approximates how many live orbits it kills.
  double kills(std::uint32_t o) const {
    const Orbit& orb = orbits_[o];
    std::uint64_t sum = 0;
    for (std::size_t k = 0; k < orb.hyp.idx.size(); ++k)
      if (cap_[orb.hyp.idx[k]] == orb.hyp.cnt[k]) sum += live_on_[orb.hyp.idx[k]] - orb.hyp.cnt[k];
    return static_cast<double>(sum) / static_cast<double>(orb.members.size());
  }

  // Orbits in order of increasing kills, ties by orbit index; branch
  // i takes orbit i and drops orbits before it.
  bool branch(const std::vector<std::uint32_t>& in_live, const std::vector<std::uint32_t>& in_mult) {
    std::vector<std::size_t> ord(in_live.size());
    std::vector<double> score(in_live.size());
    for (auto o : in_live) {
      const Orbit& orb = orbits_[o];
      for (std::size_t k = 0; k < orb.hyp.idx.size(); ++k) live_on_[orb.hyp.idx[k]] += orb.hyp.cnt[k];
    }
    for (std::size_t i = 0; i < in_live.size(); ++i) {
      ord[i] = i;
      score[i] = kills(in_live[i]);
    }
    for (auto o : in_live)
      for (auto hp : orbits_[o].hyp.idx) live_on_[hp] = 0;
    std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
    std::vector<std::uint32_t> live(ord.size()), mult(ord.size());
    for (std::size_t i = 0; i < ord.size(); ++i) {
      live[i] = in_live[ord[i]];
      mult[i] = in_mult[ord[i]];
    }

    std::vector<std::uint32_t> child, cmult;
    child.reserve(live.size());
    cmult.reserve(live.size());
    for (std::size_t i = 0; i < live.size(); ++i) {
      const std::uint32_t o = live[i];
      for (std::int64_t m = mult[i]; m >= 1; --m) {
        apply(o, m);
        choice_.emplace_back(o, static_cast<std::uint32_t>(m));
        child.clear();
        cmult.clear();
        for (std::size_t j = i + 1; j < live.size(); ++j)
          if (auto mm = max_mult(live[j])) {
            child.push_back(live[j]);
            cmult.push_back(mm);
          }
        bool ok = dfs(child, cmult);
        choice_.pop_back();
        apply(o, -m);
        if (!ok) return false;
        if (finished()) return true;
      }
      // Remaining siblings cannot beat the incumbent.
      std::uint64_t rest = n_;
      for (std::size_t j = i + 1; j < live.size(); ++j) rest += std::uint64_t{mult[j]} * orbits_[live[j]].members.size();
      if (rest <= need_now()) return true;
    }
    return true;
  }

  std::uint64_t need_now() const {
    return p_.target ? std::max<std::uint64_t>(best_n_, *p_.target - 1) : best_n_;
  }

  // Isomorph rejection: the next element is an orbit representative under the
  // stabilizer of everything chosen so far, and once a representative is done
  // its whole orbit is excluded from later branches.  Index order is not
  // imposed here, so children see every compatible candidate.
  bool branch_on_orbits(const std::vector<std::uint32_t>& live, const std::vector<std::uint32_t>& mult) {
    const auto& stab = sym_[choice_.size()];
    for (std::size_t i = 0; i < live.size(); ++i) pos_of_[live[i]] = static_cast<std::int32_t>(i);
    std::vector<std::int32_t> orbit_of(live.size(), -1);
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < live.size(); ++i) {
      if (orbit_of[i] >= 0) continue;
      orbit_of[i] = static_cast<std::int32_t>(reps.size());
      for (const auto& g : stab) {
        const std::int32_t at = pos_of_[where_.at(g.apply(cands_[live[i]]))];
        if (at < 0) throw Error("symmetry does not preserve the search problem");
        orbit_of[static_cast<std::size_t>(at)] = static_cast<std::int32_t>(reps.size());
      }
      reps.push_back(i);
    }
    for (auto c : live) pos_of_[c] = -1;

    std::vector<char> excluded(live.size(), 0);
    std::vector<std::uint32_t> child, cmult;
    for (std::size_t r = 0; r < reps.size(); ++r) {
      const std::size_t i = reps[r];
      const std::uint32_t o = live[i];
      if (choice_.size() + 1 < sym_.size()) {
        sym_[choice_.size() + 1].clear();
        for (const auto& g : stab)
          if (g.apply(cands_[o]) == cands_[o]) sym_[choice_.size() + 1].push_back(g);
      }
      for (std::int64_t m = mult[i]; m >= 1; --m) {
        apply(o, m);
        choice_.emplace_back(o, static_cast<std::uint32_t>(m));
        child.clear();
        cmult.clear();
        for (std::size_t j = 0; j < live.size(); ++j)
          if (j != i && !excluded[j])
            if (auto mm = max_mult(live[j])) {
              child.push_back(live[j]);
              cmult.push_back(mm);
            }
        bool ok = dfs(child, cmult);
        choice_.pop_back();
        apply(o, -m);
        if (!ok) return false;
        if (finished()) return true;
      }
      std::uint64_t rest = n_;
      for (std::size_t j = 0; j < live.size(); ++j) {
        if (orbit_of[j] == static_cast<std::int32_t>(r)) excluded[j] = 1;
        if (!excluded[j]) rest += std::uint64_t{mult[j]} * orbits_[live[j]].members.size();
      }
      if (rest <= need_now()) return true;
    }
    return true;
  }

  const SearchProblem& p_;
  Clock::time_point t0_;
  std::shared_ptr<const ProjectiveSpace> ps_;
  std::unordered_map<Subspace, std::uint32_t, SubspaceHash> where_;
  std::vector<std::int32_t> pos_of_;
  std::vector<std::vector<SemilinearMap>> sym_;
  std::vector<Subspace> cands_;
  std::vector<std::vector<std::uint32_t>> cand_hyps_, hyp_cands_;
  std::vector<char> live_cand_;
  std::vector<std::uint32_t> uncovered_;
  std::vector<std::uint64_t> live_on_;
  std::vector<Orbit> orbits_;
  std::vector<std::vector<std::uint32_t>> seed_hyps_;
  std::vector<std::int64_t> cap_, mu_;
  std::vector<char> touched_;
  std::vector<std::uint32_t> marked_;
  std::uint64_t tmin_ = 1;
  bool local_ok_ = false;
  std::uint64_t n_ = 0, best_n_ = 0, upper_ = 0, nodes_ = 0;
  bool timed_out_ = false;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> choice_, best_choice_;
};

}  // namespace

SearchOutcome search_max(const SearchProblem& problem) { return BranchAndBound(problem).run(); }

std::vector<SemilinearMap> coordinate_block_stabilizer(const FieldPtr& field, std::size_t r,
                                                       const std::vector<std::size_t>& blocks, std::size_t cap) {
  std::size_t used = 0;
  for (auto b : blocks) used += b;
  if (used > r) throw Error("blocks exceed the ambient dimension");
  const std::size_t rest = r - used;
  const std::uint64_t q = field->q();

  // All invertible b x b matrices, for each size needed.
  std::map<std::size_t, std::vector<Matrix>> gl;
  auto all_invertible = [&](std::size_t b) {
    std::vector<Matrix> out;
    const std::uint64_t total = qpow(q, b * b);
    if (total > cap * 64) throw Error("stabilizer enumeration exceeds the cap");
    for (std::uint64_t code = 0; code < total; ++code) {
      Matrix m(field, b, b);
      std::uint64_t c = code;
      for (std::size_t k = 0; k < b * b; ++k, c /= q) m(k / b, k % b) = static_cast<Elem>(c % q);
      if (m.rank() == b) out.push_back(std::move(m));
    }
    return out;
  };
  for (auto b : blocks)
    if (!gl.count(b)) gl[b] = all_invertible(b);
  if (rest && !gl.count(rest)) gl[rest] = all_invertible(rest);

  std::uint64_t order = qpow(q, rest * used);
  for (auto b : blocks) order *= gl[b].size();
  if (rest) order *= gl[rest].size();
  if (order > cap) throw Error("stabilizer order " + std::to_string(order) + " exceeds the cap");

  std::vector<SemilinearMap> out;
  out.reserve(order);
  std::vector<std::size_t> pick(blocks.size() + (rest ? 1 : 0), 0);
  const std::uint64_t mixes = qpow(q, rest * used);
  for (;;) {
    for (std::uint64_t mix = 0; mix < mixes; ++mix) {
      Matrix m(field, r, r);
      std::size_t off = 0;
      for (std::size_t j = 0; j < blocks.size(); ++j) {
        const Matrix& a = gl[blocks[j]][pick[j]];
        for (std::size_t x = 0; x < blocks[j]; ++x)
          for (std::size_t y = 0; y < blocks[j]; ++y) m(off + x, off + y) = a(x, y);
        off += blocks[j];
      }
      if (rest) {
        const Matrix& a = gl[rest][pick.back()];
        std::uint64_t c = mix;
        for (std::size_t x = 0; x < rest; ++x) {
          for (std::size_t y = 0; y < used; ++y, c /= q) m(used + x, y) = static_cast<Elem>(c % q);
          for (std::size_t y = 0; y < rest; ++y) m(used + x, used + y) = a(x, y);
        }
      }
      out.emplace_back(std::move(m));
    }
    std::size_t j = 0;
    for (; j < pick.size(); ++j) {
      const std::size_t size = j < blocks.size() ? gl[blocks[j]].size() : gl[rest].size();
      if (++pick[j] < size) break;
      pick[j] = 0;
    }
    if (j == pick.size()) break;
  }
  return out;
}

bool extendability_check(const ProjSystem& sys, std::uint64_t s, std::size_t depth, std::uint64_t node_limit) {
  SearchProblem p;
  p.field = sys.field();
  p.r = sys.r();
  p.h = sys.h();
  p.s = s;
  p.seed = sys.elements();
  p.target = sys.n() + depth;
  p.node_limit = node_limit;
  return search_max(p).target_reached;
}

namespace {

// Rows are the points, which need weighted coverage mu, and the hyperplanes,
// which in a multispread all contain the same number of elements.  Columns
// are h-spaces; a column may be used several times.
class MultiCover {
 public:
  explicit MultiCover(const CoverProblem& p) : p_(p), t0_(Clock::now()) {
    const auto& sys = p.partial;
    const FieldPtr& f = sys.field();
    const std::size_t r = sys.r();
    if (p.h == 0 || p.h >= r) throw Error("cover needs 1 <= h < r");
    ps_ = ProjectiveSpace::get(f, r);
    const std::size_t np = ps_->size();
    deficit_.assign(2 * np, 0);
    for (std::size_t pt = 0; pt < np; ++pt) deficit_[pt] = static_cast<std::int64_t>(p.mu);
    for (const auto& e : sys.elements()) {
      if (e.dim() > p.h) throw Error("partial system has an element above dimension h");
      const auto w = static_cast<std::int64_t>(qpow(f->q(), p.h - e.dim()));
      for (auto pt : ps_->points_of(e)) deficit_[pt] -= w;
    }
    std::int64_t total = 0;
    for (std::size_t pt = 0; pt < np; ++pt) {
      if (deficit_[pt] < 0) throw Error("point " + std::to_string(pt) + " is already covered more than mu times");
      total += deficit_[pt];
    }
    const auto per = static_cast<std::int64_t>(qint(f->q(), p.h));
    if (total % per) throw Error("total deficit " + std::to_string(total) + " is not a multiple of " + std::to_string(per));
    need_ = static_cast<std::size_t>(total / per);

    const std::int64_t s_final = static_cast<std::int64_t>(sys.n() + need_) -
                                 static_cast<std::int64_t>(qpow(f->q(), r - p.h) * p.mu);
    for (std::size_t hp = 0; hp < np; ++hp) deficit_[np + hp] = s_final;
    for (const auto& e : sys.elements())
      for (auto hp : ps_->hyperplanes_containing(e)) --deficit_[np + hp];
    for (std::size_t hp = 0; hp < np; ++hp)
      if (deficit_[np + hp] < 0) infeasible_ = true;

    spaces_ = enumerate_subspaces(f, r, p.h);
    rows_of_.resize(spaces_.size());
    members_.resize(2 * np);
    for (std::uint32_t c = 0; c < spaces_.size(); ++c) {
      for (auto pt : ps_->points_of(spaces_[c])) rows_of_[c].push_back(pt);
      for (auto hp : ps_->hyperplanes_containing(spaces_[c])) rows_of_[c].push_back(static_cast<std::uint32_t>(np + hp));
      for (auto row : rows_of_[c]) members_[row].push_back(c);
    }
    blocked_.assign(spaces_.size(), 0);
    usable_.assign(2 * np, 0);
    for (std::uint32_t c = 0; c < spaces_.size(); ++c) {
      for (auto row : rows_of_[c]) blocked_[c] += deficit_[row] <= 0;
      if (!blocked_[c])
        for (auto row : rows_of_[c]) ++usable_[row];
    }
  }

  CoverOutcome run() {
    CoverOutcome out;
    bool complete = infeasible_ || dfs();
    out.found = found_;
    out.exhaustive = found_ || complete;
    out.result = ProjSystem(p_.partial.field(), p_.partial.r(), std::max(p_.partial.h(), p_.h));
    for (const auto& e : p_.partial.elements()) out.result.add(e);
    if (found_) {
      for (auto c : chosen_) out.result.add(spaces_[c]);
      out.added = chosen_.size();
    }
    out.nodes = nodes_;
    out.elapsed = seconds_since(t0_);
    return out;
  }

 private:
  void block(std::uint32_t c) {
    if (blocked_[c]++ == 0)
      for (auto row : rows_of_[c]) --usable_[row];
  }

  void unblock(std::uint32_t c) {
    if (--blocked_[c] == 0)
      for (auto row : rows_of_[c]) ++usable_[row];
  }

  void take(std::uint32_t c) {
    for (auto row : rows_of_[c])
      if (--deficit_[row] == 0)
        for (auto d : members_[row]) block(d);
  }

  void untake(std::uint32_t c) {
    for (auto row : rows_of_[c])
      if (deficit_[row]++ == 0)
        for (auto d : members_[row]) unblock(d);
  }

  std::int64_t room(std::uint32_t c) const {
    std::int64_t m = std::numeric_limits<std::int64_t>::max();
    for (auto row : rows_of_[c]) m = std::min(m, deficit_[row]);
    return m;
  }

  bool dfs() {
    ++nodes_;
    if (chosen_.size() == need_) {
      found_ = true;
      return true;
    }
    if (p_.node_limit && nodes_ >= p_.node_limit) return false;
    if (p_.time_limit > 0 && (nodes_ & 1023) == 0 && seconds_since(t0_) > p_.time_limit) return false;

    // The unsatisfied row with the fewest usable columns.
    std::size_t pick = 0;
    std::uint32_t fewest = std::numeric_limits<std::uint32_t>::max();
    for (std::size_t row = 0; row < deficit_.size(); ++row)
      if (deficit_[row] > 0 && usable_[row] < fewest) {
        pick = row;
        fewest = usable_[row];
      }
    if (fewest == 0) return true;

    std::vector<std::uint32_t> options;
    std::int64_t reach = 0;
    for (auto c : members_[pick])
      if (!blocked_[c]) {
        options.push_back(c);
        reach += room(c);
      }
    if (reach < deficit_[pick]) return true;

    bool ok = true;
    std::size_t i = 0;
    for (; i < options.size() && ok; ++i) {
      take(options[i]);
      chosen_.push_back(options[i]);
      ok = dfs();
      if (found_) return true;
      chosen_.pop_back();
      untake(options[i]);
      // Later branches at this row never use this column again.
      block(options[i]);
    }
    for (std::size_t k = 0; k < i; ++k) unblock(options[k]);
    return ok;
  }

  const CoverProblem& p_;
  Clock::time_point t0_;
  std::shared_ptr<const ProjectiveSpace> ps_;
  std::vector<std::int64_t> deficit_;
  std::vector<Subspace> spaces_;
  std::vector<std::vector<std::uint32_t>> rows_of_, members_;
  std::vector<std::uint32_t> blocked_, usable_;
  std::vector<std::uint32_t> chosen_;
  std::size_t need_ = 0;
  std::uint64_t nodes_ = 0;
  bool found_ = false;
  bool infeasible_ = false;
};

}  // namespace

CoverOutcome complete_multispread(const CoverProblem& problem) { return MultiCover(problem).run(); }

}  // namespace addgeo
