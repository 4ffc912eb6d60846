#include "addgeo/groups.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace addgeo {

SemilinearMap::SemilinearMap(Matrix mat, std::uint32_t frob) : mat_(std::move(mat)) {
  if (mat_.rows() != mat_.cols()) throw Error("semilinear map needs a square matrix");
  if (mat_.rank() != mat_.rows()) throw Error("semilinear map matrix is singular");
  frob_ = frob % mat_.field()->l();
}

SemilinearMap SemilinearMap::identity(const FieldPtr& field, std::size_t r) {
  return SemilinearMap(Matrix::identity(field, r), 0);
}

std::vector<Elem> SemilinearMap::apply(std::span<const Elem> v) const {
  if (frob_ == 0) return mat_.left_multiply(v);
  std::vector<Elem> w(v.begin(), v.end());
  for (auto& x : w) x = field()->frobenius(x, frob_);
  return mat_.left_multiply(w);
}

Subspace SemilinearMap::apply(const Subspace& s) const {
  if (s.ambient() != dim()) throw Error("map and subspace have different ambient dimensions");
  Matrix img(field(), s.dim(), dim());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    auto w = apply(s.basis().row(i));
    std::copy(w.begin(), w.end(), img.row(i).begin());
  }
  return Subspace(img);
}

SemilinearMap SemilinearMap::then(const SemilinearMap& second) const {
  return SemilinearMap(mat_.frobenius(second.frob_) * second.mat_, frob_ + second.frob_);
}

SemilinearMap SemilinearMap::inverse() const {
  const std::uint32_t l = field()->l();
  const std::uint32_t e = (l - frob_) % l;
  return SemilinearMap(mat_.frobenius(e).inverse(), e);
}

std::string to_string(ActionConvention c) {
  switch (c) {
    case ActionConvention::right:
      return "right";
    case ActionConvention::transpose:
      return "transpose";
    case ActionConvention::frobenius_last:
      return "frobenius-last";
    case ActionConvention::transpose_frobenius_last:
      return "transpose-frobenius-last";
  }
  return "unknown";
}

const std::vector<ActionConvention>& all_conventions() {
  static const std::vector<ActionConvention> all = {ActionConvention::right, ActionConvention::transpose,
                                                    ActionConvention::frobenius_last,
                                                    ActionConvention::transpose_frobenius_last};
  return all;
}

SemilinearMap adapt(const SemilinearMap& g, ActionConvention c) {
  switch (c) {
    case ActionConvention::right:
      return g;
    case ActionConvention::transpose:
      return SemilinearMap(g.matrix().transpose(), g.frob());
    case ActionConvention::frobenius_last:
      // sigma^e(v M) = sigma^e(v) sigma^e(M)
      return SemilinearMap(g.matrix().frobenius(g.frob()), g.frob());
    case ActionConvention::transpose_frobenius_last:
      return SemilinearMap(g.matrix().transpose().frobenius(g.frob()), g.frob());
  }
  return g;
}

Group::Group(FieldPtr field, std::size_t r) : field_(std::move(field)), r_(r) {
  elements_.push_back(SemilinearMap::identity(field_, r_));
}

Group::Group(FieldPtr field, std::size_t r, std::vector<SemilinearMap> generators, std::size_t cap)
    : field_(std::move(field)), r_(r), generators_(std::move(generators)) {
  for (const auto& g : generators_)
    if (g.dim() != r_ || g.field().get() != field_.get()) throw Error("generator does not act on GF(q)^r");
  std::set<SemilinearMap> seen;
  std::deque<SemilinearMap> todo;
  auto id = SemilinearMap::identity(field_, r_);
  seen.insert(id);
  todo.push_back(id);
  elements_.push_back(id);
  while (!todo.empty()) {
    SemilinearMap cur = todo.front();
    todo.pop_front();
    for (const auto& g : generators_) {
      SemilinearMap nxt = cur.then(g);
      if (seen.insert(nxt).second) {
        if (seen.size() > cap) throw Error("group order exceeds the cap of " + std::to_string(cap));
        elements_.push_back(nxt);
        todo.push_back(nxt);
      }
    }
  }
}

Group closure(const FieldPtr& field, std::size_t r, const std::vector<SemilinearMap>& generators, std::size_t cap) {
  return Group(field, r, generators, cap);
}

std::vector<Subspace> Group::orbit(const Subspace& s) const {
  std::set<Subspace> seen{s};
  std::deque<Subspace> todo{s};
  while (!todo.empty()) {
    Subspace cur = todo.front();
    todo.pop_front();
    for (const auto& g : generators_) {
      Subspace nxt = g.apply(cur);
      if (seen.insert(nxt).second) todo.push_back(nxt);
    }
  }
  return {seen.begin(), seen.end()};
}

std::size_t Group::stabilizer_order(const Subspace& s) const {
  std::size_t count = 0;
  for (const auto& g : elements_)
    if (g.apply(s) == s) ++count;
  return count;
}

namespace {
std::string describe(const Subspace& s) {
  std::string out;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (i) out += " / ";
    for (auto e : s.basis().row(i)) out += s.field()->token(e) + (s.field()->q() > 10 ? " " : "");
  }
  return out;
}
}  // namespace

ProjSystem expand_listing(const Group& group, const OrbitListing& listing, std::size_t h, bool allow_degenerate) {
  ProjSystem sys(group.field(), group.dim(), h, allow_degenerate);
  const auto& ent = listing.entries;
  std::size_t i = 0;
  while (i < ent.size()) {
    if (!ent[i].orbit_size) {
      sys.add(ent[i].element);
      ++i;
      continue;
    }
    const std::size_t declared = *ent[i].orbit_size;
    auto orb = group.orbit(ent[i].element);
    if (orb.size() != declared)
      throw Error("representative #" + std::to_string(i + 1) + " (" + describe(ent[i].element) +
                  ") has orbit size " + std::to_string(orb.size()) + ", declared " + std::to_string(declared));
    std::size_t j = i + 1;
    while (j < ent.size() && !ent[j].orbit_size) ++j;
    const std::size_t trailing = j - i - 1;
    if (trailing == 0) {
      for (const auto& s : orb) sys.add(s);
    } else if (trailing == declared - 1) {
      std::vector<Subspace> listed;
      for (std::size_t k = i; k < j; ++k) listed.push_back(ent[k].element);
      std::sort(listed.begin(), listed.end());
      if (listed != orb)
        throw Error("entries listed after representative #" + std::to_string(i + 1) + " (" +
                    describe(ent[i].element) + ") are not its orbit");
      for (const auto& s : listed) sys.add(s);
    } else {
      throw Error("representative #" + std::to_string(i + 1) + " declares orbit size " + std::to_string(declared) +
                  " but is followed by " + std::to_string(trailing) + " unmarked entries");
    }
    i = j;
  }
  return sys;
}

InvarianceReport stabilizer_invariance_check(const Group& group, const ProjSystem& sys) {
  InvarianceReport rep;
  std::map<Subspace, std::size_t> mult;
  for (const auto& e : sys.elements()) ++mult[e];
  for (std::size_t g = 0; g < group.generators().size(); ++g) {
    std::map<Subspace, std::size_t> img;
    for (const auto& [e, m] : mult) img[group.generators()[g].apply(e)] += m;
    if (img != mult) {
      rep.invariant = false;
      rep.generator = g;
      for (std::size_t k = 0; k < sys.n(); ++k) {
        const auto& e = sys.elements()[k];
        auto it = img.find(group.generators()[g].apply(e));
        auto jt = mult.find(group.generators()[g].apply(e));
        std::size_t want = jt == mult.end() ? 0 : jt->second;
        if (it == img.end() || it->second != want) {
          rep.element = k;
          break;
        }
      }
      return rep;
    }
  }
  return rep;
}

}  // namespace addgeo
