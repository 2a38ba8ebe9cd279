#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_set>
#include <vector>

#include "rotaryforge/coset.hpp"
#include "rotaryforge/errors.hpp"
#include "rotaryforge/perm.hpp"
#include "rotaryforge/permgroup.hpp"
#include "rotaryforge/presentation.hpp"

namespace rotary {

// Rotation group of an orientable rotary polytope: a permutation group with
// distinguished ordered generators s1..s_{n-1}, the claimed Schlafli type
// (the measured generator orders) and the presentation it was built from.
//
// Groups built by coset enumeration over the trivial subgroup act freely and
// transitively on their domain; that carrier makes subgroup and coset
// machinery pure point arithmetic, which the operations below exploit.
// Values are immutable after construction.
struct RotationGroup {
  int rank = 0;  // n; sigmas holds n-1 generators
  std::vector<Perm> sigmas;
  std::vector<int> claimed_type;  // measured orders of the sigmas
  Presentation pres{2, {2}};
  bool presentation_faithful = false;
  bool regular_carrier = false;  // free and transitive right action
  uint64_t group_order = 0;

  uint32_t degree() const { return sigmas.empty() ? 1 : sigmas[0].degree(); }

  struct Cache {
    std::optional<PermGroup> whole;
    std::vector<Perm> left_gen;      // left action of each sigma
    std::vector<Perm> left_gen_inv;  // left action of each sigma^{-1}
    std::vector<uint32_t> bfs_from, bfs_letter, bfs_order;
    bool bfs_done = false;
  };
  std::shared_ptr<Cache> cache = std::make_shared<Cache>();

  PermGroup& whole_group() const {
    if (!cache->whole) {
      cache->whole.emplace(degree(), sigmas);
      if (group_order != 0) cache->whole->set_verified_order_bound(group_order);
    }
    return *cache->whole;
  }
};

namespace detail {

inline std::vector<int> measured_orders(const std::vector<Perm>& sigmas) {
  std::vector<int> t;
  for (const Perm& s : sigmas) t.push_back(static_cast<int>(s.order()));
  return t;
}

// Orbit of `start` under the given permutations and their inverses, as a
// membership mask plus the points in BFS order.
struct PointSet {
  std::vector<uint32_t> pts;
  std::vector<uint8_t> mask;
  bool contains(uint32_t x) const { return mask[x]; }
  std::size_t size() const { return pts.size(); }
};

inline PointSet point_orbit(uint32_t degree, const std::vector<const Perm*>& gens,
                            uint32_t start = 0) {
  PointSet o;
  o.mask.assign(degree, 0);
  o.pts.push_back(start);
  o.mask[start] = 1;
  std::vector<Perm> invs;
  for (const Perm* g : gens) invs.push_back(g->inverse());
  for (std::size_t h = 0; h < o.pts.size(); ++h) {
    uint32_t x = o.pts[h];
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      for (uint32_t y : {(*gens[gi])[x], invs[gi][x]}) {
        if (!o.mask[y]) {
          o.mask[y] = 1;
          o.pts.push_back(y);
        }
      }
    }
  }
  return o;
}

inline std::vector<const Perm*> sigma_range(const RotationGroup& R, int lo, int hi) {
  std::vector<const Perm*> v;  // generators s_lo..s_hi, 1-based, empty if lo>hi
  for (int i = lo; i <= hi; ++i) v.push_back(&R.sigmas[i - 1]);
  return v;
}

inline void ensure_bfs(const RotationGroup& R) {
  auto& c = *R.cache;
  if (c.bfs_done) return;
  uint32_t deg = R.degree();
  c.bfs_from.assign(deg, 0);
  c.bfs_letter.assign(deg, 0);
  std::vector<uint8_t> seen(deg, 0);
  c.bfs_order.clear();
  c.bfs_order.push_back(0);
  seen[0] = 1;
  std::vector<Perm> acts;
  for (const Perm& s : R.sigmas) {
    acts.push_back(s);
    acts.push_back(s.inverse());
  }
  for (std::size_t h = 0; h < c.bfs_order.size(); ++h) {
    uint32_t x = c.bfs_order[h];
    for (std::size_t l = 0; l < acts.size(); ++l) {
      uint32_t y = acts[l][x];
      if (!seen[y]) {
        seen[y] = 1;
        c.bfs_from[y] = x;
        c.bfs_letter[y] = static_cast<uint32_t>(l);
        c.bfs_order.push_back(y);
      }
    }
  }
  if (c.bfs_order.size() != deg)
    throw invalid_params("carrier is not transitive");
  c.bfs_done = true;
}

// The unique group element mapping point 0 to p (regular carriers).
inline Perm element_of_point(const RotationGroup& R, uint32_t p) {
  ensure_bfs(R);
  const auto& c = *R.cache;
  std::vector<uint32_t> path;
  for (uint32_t y = p; y != 0; y = c.bfs_from[y]) path.push_back(c.bfs_letter[y]);
  Perm e(R.degree());
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    const Perm& s = R.sigmas[*it / 2];
    e = (*it % 2) ? e * s.inverse() : e * s;
  }
  return e;
}

// Left multiplication x -> g*x transported to points. Propagates
// L(x * s) = L(x) * s over the right-action BFS tree.
inline Perm left_action(const RotationGroup& R, const Perm& g) {
  ensure_bfs(R);
  const auto& c = *R.cache;
  uint32_t deg = R.degree();
  std::vector<uint32_t> im(deg);
  im[0] = g[0];
  std::vector<Perm> acts;
  for (const Perm& s : R.sigmas) {
    acts.push_back(s);
    acts.push_back(s.inverse());
  }
  for (std::size_t h = 1; h < c.bfs_order.size(); ++h) {
    uint32_t y = c.bfs_order[h];
    im[y] = acts[c.bfs_letter[y]][im[c.bfs_from[y]]];
  }
  return Perm(std::move(im));
}

inline void ensure_left_gens(const RotationGroup& R) {
  auto& c = *R.cache;
  if (!c.left_gen.empty()) return;
  for (const Perm& s : R.sigmas) {
    c.left_gen.push_back(left_action(R, s));
    c.left_gen_inv.push_back(left_action(R, s.inverse()));
  }
}

// Element set of <gens> on a free carrier, reconstructed from its orbit.
inline std::vector<Perm> elements_from_orbit(const RotationGroup& R,
                                             const std::vector<const Perm*>& gens) {
  PointSet o = point_orbit(R.degree(), gens);
  std::vector<Perm> out;
  std::vector<std::optional<Perm>> at(R.degree());
  at[o.pts[0]] = Perm(R.degree());
  out.push_back(*at[o.pts[0]]);
  std::vector<Perm> invs;
  for (const Perm* g : gens) invs.push_back(g->inverse());
  for (std::size_t h = 0; h < o.pts.size(); ++h) {
    uint32_t x = o.pts[h];
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      for (int dir = 0; dir < 2; ++dir) {
        const Perm& a = dir == 0 ? *gens[gi] : invs[gi];
        uint32_t y = a[x];
        if (!at[y]) {
          at[y] = *at[x] * a;
          out.push_back(*at[y]);
        }
      }
    }
  }
  return out;
}

}  // namespace detail

// --- construction ---------------------------------------------------------

// Enumerates the presented group over the trivial subgroup and takes the
// right regular action on cosets as the carrier.
inline RotationGroup make_rotation_group(const Presentation& pres,
                                         uint32_t max_cosets = 0) {
  CosetTable t = coset_enumerate(pres, {}, max_cosets);
  RotationGroup R;
  R.rank = pres.rank();
  R.sigmas = perm_images(t);
  for (int i = 0; i < pres.generators(); ++i)
    if (R.sigmas[i].is_identity())
      throw generator_collapsed("sigma" + std::to_string(i + 1) +
                                " is trivial in the presented group");
  R.claimed_type = detail::measured_orders(R.sigmas);
  R.pres = pres;
  R.presentation_faithful = true;
  R.regular_carrier = true;
  R.group_order = t.coset_count;
  return R;
}

// Wraps explicit permutation generators. Faithfulness of `pres` is
// cross-checked against coset enumeration: the images must satisfy every
// relator and generate a group of the presented order.
inline RotationGroup rotation_group_from_perms(std::vector<Perm> sigmas,
                                               const Presentation& pres,
                                               uint32_t max_cosets = 0) {
  RotationGroup R;
  R.rank = pres.rank();
  R.sigmas = std::move(sigmas);
  if (static_cast<int>(R.sigmas.size()) != pres.generators())
    throw arity_mismatch("one permutation per generator required");
  for (int i = 0; i < pres.generators(); ++i)
    if (R.sigmas[i].is_identity())
      throw generator_collapsed("sigma" + std::to_string(i + 1) + " is trivial");
  R.claimed_type = detail::measured_orders(R.sigmas);
  R.pres = pres;
  R.regular_carrier = false;
  if (hom_extends(pres, R.sigmas)) {
    uint64_t presented = coset_enumerate(pres, {}, max_cosets).coset_count;
    R.whole_group().set_verified_order_bound(presented);
    uint64_t actual = R.whole_group().order();
    R.group_order = actual;
    R.presentation_faithful = actual == presented;
  } else {
    R.presentation_faithful = false;
    R.group_order = R.whole_group().order();
  }
  return R;
}

// --- reports ---------------------------------------------------------------

struct TightnessReport {
  uint64_t order = 0;
  uint64_t expected = 0;  // product of the presentation orders
  bool tight = false;     // order == expected
  bool intersection_ok = false;
  bool orders_ok = false;  // generator orders match and all (s_i..s_j)^2 = id
};

struct ChiralityVerdict {
  bool polytopal = false;
  bool regular = false;
  bool chiral = false;
  std::vector<Perm> chirality_group;
};

inline uint64_t group_order(const RotationGroup& R) {
  if (R.group_order != 0) return R.group_order;
  return R.whole_group().order();
}

// Generator orders match the presentation and every product s_i...s_j has
// order exactly 2 (eq-style parent relations, no collapse).
inline bool generator_orders_ok(const RotationGroup& R) {
  int g = R.rank - 1;
  for (int i = 0; i < g; ++i)
    if (R.claimed_type[i] != R.pres.orders()[i]) return false;
  for (int i = 1; i <= g; ++i) {
    Perm run = R.sigmas[i - 1];
    for (int j = i + 1; j <= g; ++j) {
      run = run * R.sigmas[j - 1];
      if (run.order() != 2) return false;
    }
  }
  return true;
}

// <s_1..s_i> meets <s_j..s_{i+1}> in exactly <s_j..s_i>, for all
// 2 <= j <= i+1 <= n-1 (trivial right side when j = i+1).
inline bool check_intersection_condition(const RotationGroup& R,
                                         uint64_t cap = kDefaultElementCap) {
  using namespace detail;
  int n = R.rank;
  for (int i = 1; i + 1 <= n - 1; ++i) {
    for (int j = 2; j <= i + 1; ++j) {
      if (R.regular_carrier) {
        PointSet left = point_orbit(R.degree(), sigma_range(R, 1, i));
        PointSet right = point_orbit(R.degree(), sigma_range(R, j, i + 1));
        std::optional<PointSet> want;
        if (j <= i) want = point_orbit(R.degree(), sigma_range(R, j, i));
        std::size_t common = 0;
        for (uint32_t x : left.pts)
          if (right.contains(x)) {
            ++common;
            bool expected = want ? want->contains(x) : x == 0;
            if (!expected) return false;
          }
        if (common != (want ? want->size() : 1)) return false;
      } else {
        std::vector<Perm> lgens, rgens, egens;
        for (int a = 1; a <= i; ++a) lgens.push_back(R.sigmas[a - 1]);
        for (int a = j; a <= i + 1; ++a) rgens.push_back(R.sigmas[a - 1]);
        for (int a = j; a <= i; ++a) egens.push_back(R.sigmas[a - 1]);
        PermGroup right(R.degree(), rgens);
        auto left_elems = subgroup_elements(lgens, cap);
        auto expected = subgroup_elements(egens, cap);
        std::unordered_set<Perm, PermHash> eset(expected.begin(), expected.end());
        std::size_t hits = 0;
        for (const Perm& e : left_elems)
          if (right.contains(e)) {
            ++hits;
            if (!eset.count(e)) return false;
          }
        if (hits != eset.size()) return false;
      }
    }
  }
  return true;
}

inline TightnessReport is_tight(const RotationGroup& R) {
  TightnessReport rep;
  rep.order = group_order(R);
  rep.expected = R.pres.order_target();
  rep.tight = rep.order == rep.expected;
  rep.orders_ok = generator_orders_ok(R);
  rep.intersection_ok = check_intersection_condition(R);
  return rep;
}

// --- normal form -----------------------------------------------------------

// Unique exponents with g = s1^{a1} ... s_{n-1}^{a_{n-1}}, 0 <= a_i < p_i.
inline std::vector<int> normal_form(const RotationGroup& R, const Perm& g) {
  TightnessReport t = is_tight(R);
  if (!t.tight || !t.intersection_ok)
    throw not_tight("normal_form needs a tight group with the intersection condition");
  int nGen = R.rank - 1;
  std::vector<int> exps(nGen, 0);
  if (R.regular_carrier) {
    using namespace detail;
    ensure_left_gens(R);
    if (g.degree() != R.degree()) throw not_member("degree mismatch");
    uint32_t p = g[0];
    if (!(element_of_point(R, p) == g)) throw not_member("not an element of the group");
    for (int i = 1; i <= nGen; ++i) {
      PointSet tail = i < nGen
                          ? point_orbit(R.degree(), sigma_range(R, i + 1, nGen))
                          : PointSet{{0}, std::vector<uint8_t>(R.degree(), 0)};
      if (i == nGen) tail.mask[0] = 1;
      const Perm& linv = R.cache->left_gen_inv[i - 1];
      int a = 0;
      uint32_t q = p;
      while (!tail.contains(q)) {
        q = linv[q];
        if (++a >= R.claimed_type[i - 1])
          throw not_member("no normal form found");
      }
      exps[i - 1] = a;
      p = q;
    }
    return exps;
  }
  // generic carrier: peel factors by membership in tail subgroups
  Perm cur = g;
  for (int i = 1; i <= nGen; ++i) {
    std::vector<Perm> tail;
    for (int a = i + 1; a <= nGen; ++a) tail.push_back(R.sigmas[a - 1]);
    PermGroup T(R.degree(), tail);
    Perm inv = R.sigmas[i - 1].inverse();
    int a = 0;
    while (!T.contains(cur)) {
      cur = inv * cur;
      if (++a >= R.claimed_type[i - 1]) throw not_member("no normal form found");
    }
    exps[i - 1] = a;
  }
  if (!cur.is_identity()) throw not_member("residue after factoring");
  return exps;
}

inline Perm from_normal_form(const RotationGroup& R, const std::vector<int>& exps) {
  Perm g(R.degree());
  for (std::size_t i = 0; i < exps.size(); ++i)
    g = g * R.sigmas[i].pow(exps[i]);
  return g;
}

// --- enantiomorph, dual, mix ------------------------------------------------

// New distinguished generators {s1^{-1}, s1^2 s2, s3, ..., s_{n-1}} on the
// same underlying permutation group; relators rewritten by the inducing
// free-group involution.
inline RotationGroup enantiomorph(const RotationGroup& R) {
  if (R.rank < 3) throw invalid_params("enantiomorph needs rank >= 3");
  RotationGroup E;
  E.rank = R.rank;
  E.sigmas = R.sigmas;
  E.sigmas[0] = R.sigmas[0].inverse();
  E.sigmas[1] = R.sigmas[0] * R.sigmas[0] * R.sigmas[1];
  auto sub = [](int g) {
    if (g == 1) return Word::power(1, -1);
    if (g == 2) return Word({1, 1, 2});
    return Word({g});
  };
  std::vector<Word> extras;
  for (const Word& w : R.pres.extra_relators()) extras.push_back(w.substituted(sub));
  E.claimed_type = detail::measured_orders(E.sigmas);
  E.pres = Presentation(R.pres.rank(), R.pres.orders(), extras);
  E.presentation_faithful = R.presentation_faithful;
  E.regular_carrier = R.regular_carrier;
  E.group_order = R.group_order;
  return E;
}

// Generator i of the dual is s_{n-i}^{-1}; the type reverses.
inline RotationGroup dual(const RotationGroup& R) {
  if (R.rank < 3) throw invalid_params("dual needs rank >= 3");
  int n = R.rank;
  RotationGroup D;
  D.rank = n;
  for (int i = 1; i <= n - 1; ++i) D.sigmas.push_back(R.sigmas[n - i - 1].inverse());
  auto sub = [n](int g) { return Word::power(n - g, -1); };
  std::vector<Word> extras;
  for (const Word& w : R.pres.extra_relators()) extras.push_back(w.substituted(sub));
  std::vector<int> orders(R.pres.orders().rbegin(), R.pres.orders().rend());
  D.claimed_type = detail::measured_orders(D.sigmas);
  D.pres = Presentation(n, orders, extras);
  D.presentation_faithful = R.presentation_faithful;
  D.regular_carrier = R.regular_carrier;
  D.group_order = R.group_order;
  return D;
}

// Subgroup of the direct product generated by paired generators, acting on
// the disjoint union of the two domains.
inline RotationGroup mix(const RotationGroup& R1, const RotationGroup& R2) {
  if (R1.rank != R2.rank) throw rank_mismatch("mix needs equal ranks");
  uint32_t d1 = R1.degree(), d2 = R2.degree();
  RotationGroup M;
  M.rank = R1.rank;
  for (int i = 0; i < R1.rank - 1; ++i) {
    std::vector<uint32_t> im(d1 + d2);
    for (uint32_t x = 0; x < d1; ++x) im[x] = R1.sigmas[i][x];
    for (uint32_t x = 0; x < d2; ++x) im[d1 + x] = d1 + R2.sigmas[i][x];
    M.sigmas.push_back(Perm(std::move(im)));
  }
  M.claimed_type = detail::measured_orders(M.sigmas);
  M.pres = Presentation(M.rank, M.claimed_type);
  M.presentation_faithful = false;
  M.regular_carrier = false;
  M.group_order = 0;  // computed on demand
  return M;
}

// --- chirality ---------------------------------------------------------------

inline std::vector<Perm> enantiomorph_tuple(const RotationGroup& R) {
  std::vector<Perm> e = R.sigmas;
  e[0] = R.sigmas[0].inverse();
  e[1] = R.sigmas[0] * R.sigmas[0] * R.sigmas[1];
  return e;
}

// Chirality group X as a subgroup of the carrier: the kernel of the
// projection of mix(R, enantiomorph(R)) onto R. With a faithful
// presentation this kernel is the normal closure, in the enantiomorph
// copy, of the original relators evaluated at the enantiomorph tuple.
inline std::vector<Perm> chirality_group_of(const RotationGroup& R,
                                            uint64_t cap = kDefaultElementCap) {
  if (!R.presentation_faithful)
    throw not_faithful("chirality group needs a faithful presentation");
  std::vector<Perm> e = enantiomorph_tuple(R);
  std::vector<Perm> seeds;
  uint32_t deg = R.degree();
  for (const Word& r : R.pres.all_relators()) {
    Perm v = evaluate_word(r, e, deg);
    if (!v.is_identity()) seeds.push_back(std::move(v));
  }
  if (seeds.empty()) return {Perm(deg)};
  return normal_closure(R.whole_group(), seeds, cap);
}

// Independent route for cross-validation: enumerate the mix and collect
// {g : (id, g) in mix}. Only usable when the mix fits under the cap.
inline std::vector<Perm> chirality_group_via_mix(const RotationGroup& R,
                                                 uint64_t cap = kDefaultElementCap) {
  RotationGroup M = mix(R, enantiomorph(R));
  auto elems = subgroup_elements(M.sigmas, cap);
  uint32_t d = R.degree();
  std::vector<Perm> out;
  for (const Perm& m : elems) {
    bool id_left = true;
    for (uint32_t x = 0; x < d && id_left; ++x) id_left = m[x] == x;
    if (!id_left) continue;
    std::vector<uint32_t> im(d);
    for (uint32_t x = 0; x < d; ++x) im[x] = m[d + x] - d;
    out.push_back(Perm(std::move(im)));
  }
  return out;
}

inline ChiralityVerdict chirality_verdict(const RotationGroup& R,
                                          uint64_t cap = kDefaultElementCap) {
  if (!R.presentation_faithful)
    throw not_faithful("chirality_verdict needs presentation_faithful");
  ChiralityVerdict v;
  v.polytopal = generator_orders_ok(R) && check_intersection_condition(R, cap);
  v.regular = hom_extends(R.pres, enantiomorph_tuple(R));
  v.chirality_group = chirality_group_of(R, cap);
  v.chiral = v.polytopal && !v.regular;
  return v;
}

// --- distinguished subgroups -------------------------------------------------

namespace detail {

inline RotationGroup distinguished_subgroup(const RotationGroup& R, int lo, int hi,
                                            uint32_t max_cosets) {
  RotationGroup S;
  S.rank = hi - lo + 2;
  for (int i = lo; i <= hi; ++i) S.sigmas.push_back(R.sigmas[i - 1]);
  std::vector<int> orders(R.pres.orders().begin() + (lo - 1),
                          R.pres.orders().begin() + hi);
  std::vector<Word> extras;
  for (const Word& w : R.pres.extra_relators()) {
    bool in_range = true;
    for (Letter l : w.letters()) {
      int g = std::abs(l);
      if (g < lo || g > hi) in_range = false;
    }
    if (in_range)
      extras.push_back(w.substituted([lo](int g) { return Word({g - lo + 1}); }));
  }
  S.pres = Presentation(S.rank, orders, extras);
  S.claimed_type = measured_orders(S.sigmas);
  S.regular_carrier = false;
  if (R.regular_carrier) {
    PointSet o = point_orbit(R.degree(), sigma_range(R, lo, hi));
    S.group_order = o.size();
  } else {
    S.group_order = S.whole_group().order();
  }
  // faithfulness recomputed by enumerating the sub-presentation
  uint64_t presented = coset_enumerate(S.pres, {}, max_cosets).coset_count;
  S.presentation_faithful = presented == S.group_order;
  return S;
}

}  // namespace detail

// Facet subgroup <s1,...,s_{n-2}> with the inherited relators.
inline RotationGroup facet_group(const RotationGroup& R, uint32_t max_cosets = 0) {
  if (R.rank < 3) throw invalid_params("facet_group needs rank >= 3");
  return detail::distinguished_subgroup(R, 1, R.rank - 2, max_cosets);
}

// Vertex-figure subgroup <s2,...,s_{n-1}>, reindexed to start at s1.
inline RotationGroup vertex_figure_group(const RotationGroup& R,
                                         uint32_t max_cosets = 0) {
  if (R.rank < 3) throw invalid_params("vertex_figure_group needs rank >= 3");
  return detail::distinguished_subgroup(R, 2, R.rank - 1, max_cosets);
}

// --- kernels and quotients ----------------------------------------------------

// Kernel of the action on the cosets of <s2,...,s_{n-1}> (the vertices).
inline std::vector<Perm> vertex_action_kernel(const RotationGroup& R) {
  using namespace detail;
  if (!R.regular_carrier)
    throw invalid_params("vertex_action_kernel needs an enumeration-built carrier");
  int nGen = R.rank - 1;
  ensure_left_gens(R);
  // vertex id per point: orbits under the left action of <s2..s_{n-1}>
  uint32_t deg = R.degree();
  std::vector<uint32_t> vid(deg, 0xFFFFFFFFu);
  uint32_t nv = 0;
  for (uint32_t x = 0; x < deg; ++x) {
    if (vid[x] != 0xFFFFFFFFu) continue;
    std::vector<uint32_t> stack{x};
    vid[x] = nv;
    while (!stack.empty()) {
      uint32_t y = stack.back();
      stack.pop_back();
      for (int i = 2; i <= nGen; ++i) {
        for (const Perm* L : {&R.cache->left_gen[i - 1], &R.cache->left_gen_inv[i - 1]}) {
          uint32_t z = (*L)[y];
          if (vid[z] == 0xFFFFFFFFu) {
            vid[z] = nv;
            stack.push_back(z);
          }
        }
      }
    }
    ++nv;
  }
  // walk H = <s2..s_{n-1}> through its exponent box, one multiplication
  // per step; the box covers H on tight carriers
  int m = nGen - 1;  // generators s2..s_{n-1}
  std::vector<Perm> kernel;
  std::vector<int> exps(m, 0);
  std::vector<Perm> partial(m + 1, Perm(deg));  // partial[k] = prod_{t<=k} h_t^{e_t}
  while (true) {
    const Perm& h = partial[m];
    bool fixes = true;
    for (uint32_t x = 0; x < deg && fixes; ++x) fixes = vid[h[x]] == vid[x];
    if (fixes) kernel.push_back(h);
    int k = m;
    while (k >= 1 && exps[k - 1] == R.claimed_type[k] - 1) --k;
    if (k == 0) break;
    ++exps[k - 1];
    partial[k] = partial[k] * R.sigmas[k];
    for (int j = k; j < m; ++j) {
      exps[j] = 0;
      partial[j + 1] = partial[k];
    }
  }
  return kernel;
}

struct QuotientResult {
  RotationGroup group;
  bool orders_survive = false;   // no collapse, every (s_i..s_j)^2 still order 2
  bool intersection_ok = false;
  bool polytopal() const { return orders_survive && intersection_ok; }
};

// Quotient by a normal subgroup given as an element set; the induced
// generators act on the N-cosets of the carrier.
inline QuotientResult quotient_by_normal(const RotationGroup& R,
                                         const std::vector<Perm>& N) {
  using namespace detail;
  if (!R.regular_carrier)
    throw invalid_params("quotient_by_normal needs an enumeration-built carrier");
  uint32_t deg = R.degree();
  std::unordered_set<Perm, PermHash> nset(N.begin(), N.end());
  nset.insert(Perm(deg));
  for (const Perm& n : N)
    for (const Perm& s : R.sigmas)
      if (!nset.count(s.inverse() * n * s))
        throw not_normal("subgroup is not normal");
  for (int i = 0; i < R.rank - 1; ++i)
    if (nset.count(R.sigmas[i]))
      throw generator_collapsed("sigma" + std::to_string(i + 1) + " lies in N");

  // blocks = right cosets of N = orbits under the left action of N
  std::vector<Perm> lefts;
  for (const Perm& n : N)
    if (!n.is_identity()) lefts.push_back(left_action(R, n));
  std::vector<uint32_t> bid(deg, 0xFFFFFFFFu);
  uint32_t nb = 0;
  std::vector<uint32_t> reps;
  for (uint32_t x = 0; x < deg; ++x) {
    if (bid[x] != 0xFFFFFFFFu) continue;
    std::vector<uint32_t> stack{x};
    bid[x] = nb;
    reps.push_back(x);
    while (!stack.empty()) {
      uint32_t y = stack.back();
      stack.pop_back();
      for (const Perm& L : lefts) {
        uint32_t z = L[y];
        if (bid[z] == 0xFFFFFFFFu) {
          bid[z] = nb;
          stack.push_back(z);
        }
      }
    }
    ++nb;
  }

  QuotientResult out;
  RotationGroup& Q = out.group;
  Q.rank = R.rank;
  for (const Perm& s : R.sigmas) {
    std::vector<uint32_t> im(nb);
    for (uint32_t b = 0; b < nb; ++b) im[b] = bid[s[reps[b]]];
    Q.sigmas.push_back(Perm(std::move(im)));
  }
  Q.claimed_type = measured_orders(Q.sigmas);
  Q.regular_carrier = true;
  Q.group_order = nb;

  // faithful presentation: original extras plus words for the N-elements
  TightnessReport t = is_tight(R);
  if (R.presentation_faithful && t.tight && t.intersection_ok) {
    std::vector<Word> extras = R.pres.extra_relators();
    for (const Perm& n : N) {
      if (n.is_identity()) continue;
      std::vector<int> e = normal_form(R, n);
      Word w;
      for (std::size_t i = 0; i < e.size(); ++i)
        w.append(Word::power(static_cast<int>(i + 1), e[i]));
      if (!w.empty()) extras.push_back(w);
    }
    Q.pres = Presentation(R.rank, Q.claimed_type, extras);
    Q.presentation_faithful = true;
  } else {
    Q.pres = Presentation(R.rank, Q.claimed_type, R.pres.extra_relators());
    Q.presentation_faithful = false;
  }

  out.orders_survive = true;
  for (const Perm& s : Q.sigmas)
    if (s.is_identity()) out.orders_survive = false;
  if (out.orders_survive) out.orders_survive = [&] {
    int g = Q.rank - 1;
    for (int i = 1; i <= g; ++i) {
      Perm run = Q.sigmas[i - 1];
      for (int j = i + 1; j <= g; ++j) {
        run = run * Q.sigmas[j - 1];
        if (run.order() != 2) return false;
      }
    }
    return true;
  }();
  out.intersection_ok = check_intersection_condition(Q);
  return out;
}

// Tests the Lemma-shaped candidates K = <s1^{a1}><s2^{a2}>... over divisor
// tuples; R is atomic iff no proper nontrivial candidate yields a tight
// chiral polytopal quotient.
inline bool is_atomic(const RotationGroup& R, uint64_t cap = kDefaultElementCap) {
  using namespace detail;
  if (!R.regular_carrier) {
    if (!R.presentation_faithful)
      throw not_faithful("is_atomic needs a faithful presentation");
    return is_atomic(make_rotation_group(R.pres), cap);
  }
  TightnessReport t = is_tight(R);
  ChiralityVerdict v = chirality_verdict(R, cap);
  if (!t.tight || !v.chiral)
    throw not_chiral("atomicity is defined for tight chiral polytopes only");

  int nGen = R.rank - 1;
  std::vector<std::vector<int>> divisors(nGen);
  for (int i = 0; i < nGen; ++i)
    for (int d = 2; d <= R.claimed_type[i]; ++d)  // d = 1 would collapse s_i
      if (R.claimed_type[i] % d == 0) divisors[i].push_back(d);

  std::vector<int> tuple(nGen, 0);
  while (true) {
    bool all_full = true;
    uint64_t box = 1;
    for (int i = 0; i < nGen; ++i) {
      if (divisors[i][tuple[i]] != R.claimed_type[i]) all_full = false;
      box *= static_cast<uint64_t>(R.claimed_type[i] / divisors[i][tuple[i]]);
    }
    if (!all_full) {  // skip the trivial candidate K = 1
      std::vector<const Perm*> kg;
      std::vector<Perm> kgens;
      for (int i = 0; i < nGen; ++i)
        if (divisors[i][tuple[i]] != R.claimed_type[i])
          kgens.push_back(R.sigmas[i].pow(divisors[i][tuple[i]]));
      for (const Perm& k : kgens) kg.push_back(&k);
      PointSet o = point_orbit(R.degree(), kg);
      bool product_shape = o.size() == box;
      bool normal = product_shape;
      if (normal)
        for (const Perm& k : kgens)
          for (const Perm& s : R.sigmas)
            if (!o.contains((s.inverse() * k * s)[0])) normal = false;
      bool keeps_gens = normal;
      if (keeps_gens)
        for (const Perm& s : R.sigmas)
          if (o.contains(s[0])) keeps_gens = false;
      if (keeps_gens && o.size() < group_order(R)) {
        auto elems = elements_from_orbit(R, kg);
        QuotientResult q = quotient_by_normal(R, elems);
        if (q.polytopal()) {
          ChiralityVerdict qv = chirality_verdict(q.group, cap);
          if (qv.chiral) return false;  // proper tight chiral quotient found
        }
      }
    }
    int i = nGen - 1;
    while (i >= 0 && tuple[i] + 1 == static_cast<int>(divisors[i].size()))
      tuple[i--] = 0;
    if (i < 0) break;
    ++tuple[i];
  }
  return true;
}

}  // namespace rotary
