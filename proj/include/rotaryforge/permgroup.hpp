#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "rotaryforge/errors.hpp"
#include "rotaryforge/perm.hpp"
#include "rotaryforge/presentation.hpp"

namespace rotary {

constexpr uint64_t kDefaultElementCap = 1u << 16;

// Permutation group with a lazily built stabilizer chain (Schreier-Sims).
// The chain is deterministic: base points are the smallest moved points,
// orbits are breadth-first, Schreier generators are processed in index
// order.
//
// After the chain exists the object is immutable; build it before sharing
// across threads or serialize first use externally.
class PermGroup {
 public:
  PermGroup(uint32_t degree, std::vector<Perm> gens)
      : degree_(degree), gens_(std::move(gens)) {
    for (const Perm& g : gens_)
      if (g.degree() != degree_)
        throw degree_mismatch("generator degree mismatch");
  }

  uint32_t degree() const { return degree_; }
  const std::vector<Perm>& generators() const { return gens_; }

  // Verified external bound: callers may pass an order they can certify,
  // e.g. the group is a quotient of a presented group of that order.
  // Chain construction stops once the orbit product reaches the bound;
  // the product is a lower bound on the order, so equality certifies the
  // chain.
  void set_verified_order_bound(uint64_t bound) const { upper_ = bound; }

  uint64_t order() const {
    build();
    return orbit_product();
  }

  bool contains(const Perm& g) const {
    if (g.degree() != degree_) throw degree_mismatch("membership degree mismatch");
    build();
    Perm r = g;
    return sift(0, r) && r.is_identity();
  }

  std::vector<uint32_t> base() const {
    build();
    std::vector<uint32_t> b;
    for (const auto& lv : chain_) b.push_back(lv.base);
    return b;
  }

 private:
  struct Level {
    uint32_t base = 0;
    std::vector<Perm> gens;       // strong generators fixing all earlier bases
    std::vector<Perm> gen_invs;
    std::vector<uint32_t> orbit;  // BFS order from base
    std::vector<int32_t> sv_gen;  // per point: generator label, -1 root, -2 out
    std::vector<uint32_t> sv_from;
  };

  uint32_t degree_;
  std::vector<Perm> gens_;
  mutable std::vector<Level> chain_;
  mutable bool built_ = false;
  mutable std::optional<uint64_t> upper_;

  void recompute_orbit(Level& lv) const {
    lv.sv_gen.assign(degree_, -2);
    lv.sv_from.assign(degree_, 0);
    lv.orbit.clear();
    lv.orbit.push_back(lv.base);
    lv.sv_gen[lv.base] = -1;
    for (std::size_t h = 0; h < lv.orbit.size(); ++h) {
      uint32_t x = lv.orbit[h];
      for (std::size_t gi = 0; gi < lv.gens.size(); ++gi) {
        uint32_t y = lv.gens[gi][x];
        if (lv.sv_gen[y] == -2) {
          lv.sv_gen[y] = static_cast<int32_t>(gi);
          lv.sv_from[y] = x;
          lv.orbit.push_back(y);
        }
      }
    }
  }

  // base^u = x for the returned transversal element u.
  Perm transversal(const Level& lv, uint32_t x) const {
    std::vector<std::pair<uint32_t, int32_t>> path;
    for (uint32_t y = x; lv.sv_gen[y] != -1; y = lv.sv_from[y])
      path.push_back({y, lv.sv_gen[y]});
    Perm u(degree_);
    for (auto it = path.rbegin(); it != path.rend(); ++it)
      u = u * lv.gens[it->second];
    return u;
  }

  // Reduces r through levels from..end; false when r leaves an orbit.
  bool sift(std::size_t from, Perm& r) const {
    for (std::size_t li = from; li < chain_.size(); ++li) {
      const Level& lv = chain_[li];
      uint32_t x = r[lv.base];
      if (x == lv.base) continue;
      if (lv.sv_gen[x] == -2) return false;
      for (uint32_t y = x; lv.sv_gen[y] != -1; y = lv.sv_from[y])
        r = r * lv.gen_invs[lv.sv_gen[y]];
    }
    return true;
  }

  uint64_t orbit_product() const {
    uint64_t o = 1;
    for (const auto& lv : chain_) o *= lv.orbit.size();
    return o;
  }

  bool bound_reached() const { return upper_ && orbit_product() == *upper_; }

  uint32_t smallest_moved(const Perm& g) const {
    for (uint32_t x = 0; x < degree_; ++x)
      if (g[x] != x) return x;
    return degree_;
  }

  // Adds a nontrivial residue as a strong generator of every level whose
  // base prefix it fixes, extending the chain when it fixes all bases.
  void insert_strong_generator(const Perm& r) const {
    std::size_t lj = 0;
    while (lj < chain_.size() && r[chain_[lj].base] == chain_[lj].base) ++lj;
    if (lj == chain_.size()) {
      Level lv;
      lv.base = smallest_moved(r);
      chain_.push_back(std::move(lv));
    }
    for (std::size_t li = 0; li <= lj; ++li) {
      chain_[li].gens.push_back(r);
      chain_[li].gen_invs.push_back(r.inverse());
      recompute_orbit(chain_[li]);
    }
  }

  // Verifies that the Schreier generators of level li sift to identity
  // through the deeper levels; on failure installs the residue and
  // reports false.
  bool verify_level(std::size_t li) const {
    Level& lv = chain_[li];
    for (std::size_t oi = 0; oi < lv.orbit.size(); ++oi) {
      uint32_t x = lv.orbit[oi];
      Perm tx = transversal(lv, x);
      for (std::size_t gi = 0; gi < lv.gens.size(); ++gi) {
        Perm u = tx * lv.gens[gi];
        uint32_t y = u[lv.base];
        Perm residue = u * transversal(lv, y).inverse();
        if (!sift(li + 1, residue) || !residue.is_identity()) {
          insert_strong_generator(residue);
          return false;
        }
        if (bound_reached()) return true;
      }
    }
    return true;
  }

  void build() const {
    if (built_) return;
    chain_.clear();
    for (const Perm& g : gens_) {
      Perm r = g;
      if (sift(0, r) && r.is_identity()) continue;
      insert_strong_generator(r);
      if (bound_reached()) break;
    }
    while (!bound_reached()) {
      bool changed = false;
      for (std::size_t li = chain_.size(); li-- > 0;) {
        if (!verify_level(li)) {
          changed = true;
          break;
        }
        if (bound_reached()) break;
      }
      if (!changed) break;
    }
    built_ = true;
  }
};

// Full element set by breadth-first closure; throws once more than `cap`
// elements appear.
inline std::vector<Perm> subgroup_elements(const std::vector<Perm>& gens,
                                           uint64_t cap = kDefaultElementCap) {
  if (cap < 1) throw invalid_params("element cap must be >= 1");
  uint32_t deg = gens.empty() ? 1 : gens[0].degree();
  std::vector<Perm> elems{Perm(deg)};
  std::unordered_set<Perm, PermHash> seen{elems[0]};
  for (std::size_t h = 0; h < elems.size(); ++h) {
    for (const Perm& g : gens) {
      Perm n = elems[h] * g;
      if (seen.insert(n).second) {
        if (seen.size() > cap)
          throw cap_exceeded("subgroup closure exceeded cap " + std::to_string(cap));
        elems.push_back(std::move(n));
      }
    }
  }
  return elems;
}

// Smallest normal subgroup of G containing `seed`, as an element set.
// ncl(S) is generated by the G-conjugates of S, so close the seed under
// generator conjugation first, then take the subgroup closure.
inline std::vector<Perm> normal_closure(const PermGroup& G,
                                        const std::vector<Perm>& seed,
                                        uint64_t cap = kDefaultElementCap) {
  uint32_t deg = G.degree();
  std::vector<Perm> conj;
  std::unordered_set<Perm, PermHash> seen;
  for (const Perm& s : seed) {
    if (s.degree() != deg) throw degree_mismatch("seed degree mismatch");
    if (!s.is_identity() && seen.insert(s).second) conj.push_back(s);
  }
  for (std::size_t h = 0; h < conj.size(); ++h) {
    for (const Perm& g : G.generators()) {
      for (Perm c : {g.inverse() * conj[h] * g, g * conj[h] * g.inverse()}) {
        if (seen.insert(c).second) {
          if (seen.size() > cap)
            throw cap_exceeded("normal closure exceeded cap " + std::to_string(cap));
          conj.push_back(std::move(c));
        }
      }
    }
  }
  return subgroup_elements(conj, cap);
}

// Largest subgroup of <c> normal in G: scans the divisor subgroups of <c>
// from largest to smallest and returns the first normal one.
inline std::vector<Perm> cyclic_core(const PermGroup& G, const Perm& c) {
  uint64_t o = c.order();
  for (uint64_t k = 1; k <= o; ++k) {  // ascending k = descending |<c^k>|
    if (o % k != 0) continue;
    Perm ck = c.pow(static_cast<long long>(k));
    std::vector<Perm> powers;
    Perm acc(ck.degree());
    for (uint64_t i = 0; i < o / k; ++i) {
      powers.push_back(acc);
      acc = acc * ck;
    }
    bool normal = true;
    for (const Perm& g : G.generators()) {
      Perm lhs = g.inverse() * ck * g;
      if (std::find(powers.begin(), powers.end(), lhs) == powers.end()) {
        normal = false;
        break;
      }
    }
    if (normal) return powers;
  }
  return {Perm(c.degree())};  // unreachable: k = o always passes
}

// {a in A : a in B}.
inline std::vector<Perm> intersection(const std::vector<Perm>& A,
                                      const PermGroup& B) {
  std::vector<Perm> out;
  for (const Perm& a : A)
    if (B.contains(a)) out.push_back(a);
  return out;
}

// True iff assigning generator i -> images[i-1] kills every relator
// (parent and extra) of the presentation.
inline bool hom_extends(const Presentation& pres,
                        const std::vector<Perm>& images) {
  if (static_cast<int>(images.size()) != pres.generators())
    throw arity_mismatch("one image per generator required");
  uint32_t deg = images.empty() ? 1 : images[0].degree();
  for (const Word& r : pres.all_relators())
    if (!evaluate_word(r, images, deg).is_identity()) return false;
  return true;
}

// Group on the disjoint-union domain generated by the paired permutations.
inline PermGroup direct_product(const PermGroup& G, const PermGroup& H,
                                const std::vector<std::pair<Perm, Perm>>& pairing) {
  if (pairing.empty()) throw invalid_params("pairing must be nonempty");
  uint32_t dg = G.degree(), dh = H.degree();
  std::vector<Perm> gens;
  for (const auto& [a, b] : pairing) {
    if (a.degree() != dg || b.degree() != dh)
      throw degree_mismatch("pairing degree mismatch");
    std::vector<uint32_t> im(dg + dh);
    for (uint32_t x = 0; x < dg; ++x) im[x] = a[x];
    for (uint32_t x = 0; x < dh; ++x) im[dg + x] = dg + b[x];
    gens.push_back(Perm(std::move(im)));
  }
  return PermGroup(dg + dh, std::move(gens));
}

inline uint64_t group_order(const PermGroup& G) { return G.order(); }

inline bool membership(const Perm& g, const PermGroup& G) {
  return G.contains(g);
}

}  // namespace rotary
