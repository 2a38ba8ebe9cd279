#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rotaryforge/errors.hpp"
#include "rotaryforge/rotation.hpp"

namespace rotary {

constexpr uint64_t kDefaultPosetCap = 1u << 14;

// Ranked face poset. Faces of proper rank i are 0..counts[i]-1; the unique
// minimum F_{-1} and maximum F_n are implicit. Incidence is stored between
// consecutive ranks only; the full order is the transitive closure.
struct FacePoset {
  int rank = 0;                                          // n
  std::vector<uint32_t> counts;                          // per proper rank
  std::vector<std::vector<std::vector<uint32_t>>> up;    // up[i][a] -> rank i+1
  std::vector<std::vector<std::vector<uint32_t>>> down;  // down[i][b] -> rank i-1

  using BitRows = std::vector<std::vector<uint64_t>>;
  std::shared_ptr<std::map<std::pair<int, int>, BitRows>> reach_cache =
      std::make_shared<std::map<std::pair<int, int>, BitRows>>();

  static FacePoset from_incidences(
      int rank, std::vector<uint32_t> counts,
      const std::vector<std::vector<std::pair<uint32_t, uint32_t>>>& incidences) {
    FacePoset P;
    P.rank = rank;
    P.counts = std::move(counts);
    P.up.assign(rank, {});
    P.down.assign(rank, {});
    for (int i = 0; i < rank; ++i) {
      P.up[i].assign(P.counts[i], {});
      P.down[i].assign(P.counts[i], {});
    }
    for (int i = 0; i + 1 < rank; ++i)
      for (auto [a, b] : incidences[i]) {
        P.up[i][a].push_back(b);
        P.down[i + 1][b].push_back(a);
      }
    P.sort_adjacency();
    return P;
  }

  void sort_adjacency() {
    for (int i = 0; i < rank; ++i) {
      for (auto& v : up[i]) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
      }
      for (auto& v : down[i]) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
      }
    }
  }

  std::vector<uint64_t> counts_with_bounds() const {
    std::vector<uint64_t> c{1};
    for (uint32_t x : counts) c.push_back(x);
    c.push_back(1);
    return c;
  }

  // reach(i, j)[a] is a bitmask over rank-j faces b with a <= b (i < j).
  const BitRows& reach(int i, int j) const {
    auto key = std::make_pair(i, j);
    auto it = reach_cache->find(key);
    if (it != reach_cache->end()) return it->second;
    std::size_t words = (counts[j] + 63) / 64;
    BitRows rows(counts[i], std::vector<uint64_t>(words, 0));
    if (j == i + 1) {
      for (uint32_t a = 0; a < counts[i]; ++a)
        for (uint32_t b : up[i][a]) rows[a][b >> 6] |= 1ull << (b & 63);
    } else {
      const BitRows& prev = reach(i, j - 1);
      BitRows step(counts[j - 1], std::vector<uint64_t>(words, 0));
      for (uint32_t h = 0; h < counts[j - 1]; ++h)
        for (uint32_t b : up[j - 1][h]) step[h][b >> 6] |= 1ull << (b & 63);
      for (uint32_t a = 0; a < counts[i]; ++a)
        for (uint32_t h = 0; h < counts[j - 1]; ++h)
          if (prev[a][h >> 6] & (1ull << (h & 63)))
            for (std::size_t w = 0; w < words; ++w) rows[a][w] |= step[h][w];
    }
    return (*reach_cache)[key] = std::move(rows);
  }

  // a at rank i lies below b at rank j; sentinel ranks -1 and n are always
  // related.
  bool below(int i, uint32_t a, int j, uint32_t b) const {
    if (i < 0 || j >= rank) return true;
    if (i == j) return a == b;
    const auto& r = reach(i, j)[a];
    return r[b >> 6] & (1ull << (b & 63));
  }
};

// --- construction -----------------------------------------------------------

// Rank-i faces are the right cosets of the rank-i stabilizer subgroup;
// consecutive faces are incident iff the cosets intersect. Rank-0 and
// rank-(n-1) stabilizers are <s2..s_{n-1}> and <s1..s_{n-2}>; intermediate
// rank i uses <s1,..,s_{i-1}, s_i s_{i+1}, s_{i+2},..,s_{n-1}>.
inline FacePoset build_poset(const RotationGroup& R,
                             uint64_t poset_cap = kDefaultPosetCap) {
  using namespace detail;
  if (group_order(R) > poset_cap)
    throw cap_exceeded("group order " + std::to_string(group_order(R)) +
                       " above poset cap " + std::to_string(poset_cap));
  int n = R.rank;
  FacePoset P;
  P.rank = n;
  if (n == 2) {  // the k-gon face lattice
    uint32_t k = static_cast<uint32_t>(group_order(R));
    P.counts = {k, k};
    P.up.assign(2, {});
    P.down.assign(2, {});
    P.up[0].assign(k, {});
    P.up[1].assign(k, {});
    P.down[0].assign(k, {});
    P.down[1].assign(k, {});
    for (uint32_t v = 0; v < k; ++v)
      for (uint32_t e : {v, (v + k - 1) % k}) {
        P.up[0][v].push_back(e);
        P.down[1][e].push_back(v);
      }
    P.sort_adjacency();
    return P;
  }
  if (!R.regular_carrier)
    throw invalid_params("build_poset needs an enumeration-built carrier");
  if (!generator_orders_ok(R) || !check_intersection_condition(R))
    throw invalid_params("build_poset needs a polytopal rotation group");

  uint32_t deg = R.degree();
  std::vector<std::vector<uint32_t>> fid(n, std::vector<uint32_t>(deg, 0xFFFFFFFFu));
  P.counts.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    std::vector<Perm> stab;
    if (i == 0) {
      for (int a = 2; a <= n - 1; ++a) stab.push_back(R.sigmas[a - 1]);
    } else if (i == n - 1) {
      for (int a = 1; a <= n - 2; ++a) stab.push_back(R.sigmas[a - 1]);
    } else {
      for (int a = 1; a <= i - 1; ++a) stab.push_back(R.sigmas[a - 1]);
      stab.push_back(R.sigmas[i - 1] * R.sigmas[i]);
      for (int a = i + 2; a <= n - 1; ++a) stab.push_back(R.sigmas[a - 1]);
    }
    std::vector<Perm> lefts;
    for (const Perm& s : stab) {
      lefts.push_back(left_action(R, s));
      lefts.push_back(left_action(R, s.inverse()));
    }
    uint32_t nf = 0;
    for (uint32_t x = 0; x < deg; ++x) {
      if (fid[i][x] != 0xFFFFFFFFu) continue;
      std::vector<uint32_t> stack{x};
      fid[i][x] = nf;
      while (!stack.empty()) {
        uint32_t y = stack.back();
        stack.pop_back();
        for (const Perm& L : lefts) {
          uint32_t z = L[y];
          if (fid[i][z] == 0xFFFFFFFFu) {
            fid[i][z] = nf;
            stack.push_back(z);
          }
        }
      }
      ++nf;
    }
    P.counts[i] = nf;
  }

  P.up.assign(n, {});
  P.down.assign(n, {});
  for (int i = 0; i < n; ++i) {
    P.up[i].assign(P.counts[i], {});
    P.down[i].assign(P.counts[i], {});
  }
  for (int i = 0; i + 1 < n; ++i) {
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    pairs.reserve(deg);
    for (uint32_t x = 0; x < deg; ++x) pairs.push_back({fid[i][x], fid[i + 1][x]});
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    for (auto [a, b] : pairs) {
      P.up[i][a].push_back(b);
      P.down[i + 1][b].push_back(a);
    }
  }
  P.sort_adjacency();
  return P;
}

// --- validation ---------------------------------------------------------------

struct ValidationReport {
  bool diamond_ok = false;
  bool connected_ok = false;
  bool flag_adjacency_ok = false;
  uint64_t flag_count = 0;
  std::vector<std::string> failures;
  bool all_ok() const { return diamond_ok && connected_ok && flag_adjacency_ok; }
};

namespace detail {

inline void enumerate_flags(const FacePoset& P,
                            const std::function<void(const std::vector<uint32_t>&)>& fn) {
  std::vector<uint32_t> flag(P.rank);
  std::function<void(int)> rec = [&](int i) {
    if (i == P.rank) {
      fn(flag);
      return;
    }
    if (i == 0) {
      for (uint32_t v = 0; v < P.counts[0]; ++v) {
        flag[0] = v;
        rec(1);
      }
    } else {
      for (uint32_t b : P.up[i - 1][flag[i - 1]]) {
        flag[i] = b;
        rec(i + 1);
      }
    }
  };
  rec(0);
}

// faces of rank mid with f <= h <= g, where rf = mid-1 and rg = mid+1 up to
// sentinels
inline std::vector<uint32_t> middles(const FacePoset& P, int rf, uint32_t f, int rg,
                                     uint32_t g) {
  int mid = rf + 1;
  std::vector<uint32_t> out;
  if (rf < 0) {
    for (uint32_t h = 0; h < P.counts[mid]; ++h)
      if (P.below(mid, h, rg, g)) out.push_back(h);
  } else {
    for (uint32_t h : P.up[rf][f])
      if (P.below(mid, h, rg, g)) out.push_back(h);
  }
  return out;
}

}  // namespace detail

inline ValidationReport validate_polytope(const FacePoset& P) {
  ValidationReport rep;
  int n = P.rank;

  // diamond condition over every rank pair (i, i+2), bounds included
  rep.diamond_ok = true;
  for (int i = -1; i + 2 <= n; ++i) {
    int j = i + 2;
    uint64_t nf = i < 0 ? 1 : P.counts[i];
    for (uint32_t f = 0; f < nf && rep.diamond_ok; ++f) {
      if (j >= n) {
        std::size_t k = i < 0 ? P.counts[0] : P.up[i][f].size();
        if (k != 2) {
          rep.diamond_ok = false;
          rep.failures.push_back("diamond fails above rank " + std::to_string(i));
        }
        continue;
      }
      std::vector<uint32_t> cnt(P.counts[j], 0);
      if (i < 0) {
        for (uint32_t h = 0; h < P.counts[i + 1]; ++h)
          for (uint32_t g : P.up[i + 1][h]) ++cnt[g];
      } else {
        for (uint32_t h : P.up[i][f])
          for (uint32_t g : P.up[i + 1][h]) ++cnt[g];
      }
      for (uint32_t g = 0; g < P.counts[j]; ++g)
        if (cnt[g] != 0 && cnt[g] != 2) {
          rep.diamond_ok = false;
          rep.failures.push_back("diamond fails between ranks " + std::to_string(i) +
                                 " and " + std::to_string(j));
          break;
        }
    }
  }

  // strong connectivity of every open interval with rank gap >= 3,
  // including the whole poset
  rep.connected_ok = true;
  for (int i = -1; i <= n - 3 && rep.connected_ok; ++i) {
    for (int j = i + 3; j <= n && rep.connected_ok; ++j) {
      uint64_t nf = i < 0 ? 1 : P.counts[i];
      for (uint32_t f = 0; f < nf && rep.connected_ok; ++f) {
        std::vector<uint32_t> gs;
        if (j >= n) {
          gs.push_back(0);
        } else {
          for (uint32_t g = 0; g < P.counts[j]; ++g)
            if (P.below(i, f, j, g)) gs.push_back(g);
        }
        for (uint32_t g : gs) {
          // faces strictly between f and g
          std::vector<std::vector<uint8_t>> in(n);
          std::vector<std::pair<int, uint32_t>> verts;
          for (int r = std::max(i + 1, 0); r <= std::min(j - 1, n - 1); ++r) {
            in[r].assign(P.counts[r], 0);
            for (uint32_t a = 0; a < P.counts[r]; ++a)
              if (P.below(i, f, r, a) && P.below(r, a, j, g)) {
                in[r][a] = 1;
                verts.push_back({r, a});
              }
          }
          if (verts.size() <= 1) continue;
          std::vector<std::pair<int, uint32_t>> stack{verts[0]};
          std::vector<std::vector<uint8_t>> seen = in;
          for (auto& v : seen) std::fill(v.begin(), v.end(), 0);
          seen[verts[0].first][verts[0].second] = 1;
          std::size_t reached = 0;
          while (!stack.empty()) {
            auto [r, a] = stack.back();
            stack.pop_back();
            ++reached;
            if (r + 1 <= std::min(j - 1, n - 1) && !in[r + 1].empty())
              for (uint32_t b : P.up[r][a])
                if (in[r + 1][b] && !seen[r + 1][b]) {
                  seen[r + 1][b] = 1;
                  stack.push_back({r + 1, b});
                }
            if (r - 1 >= std::max(i + 1, 0) && !in[r - 1].empty())
              for (uint32_t b : P.down[r][a])
                if (in[r - 1][b] && !seen[r - 1][b]) {
                  seen[r - 1][b] = 1;
                  stack.push_back({r - 1, b});
                }
          }
          if (reached != verts.size()) {
            rep.connected_ok = false;
            rep.failures.push_back("interval (" + std::to_string(i) + "," +
                                   std::to_string(j) + ") disconnected");
          }
        }
      }
    }
  }

  // flag count; each flag must have exactly one i-adjacent flag per rank
  uint64_t flags = 0;
  bool adj_ok = true;
  detail::enumerate_flags(P, [&](const std::vector<uint32_t>& flag) {
    ++flags;
    for (int i = 0; i < n; ++i) {
      auto mids = detail::middles(P, i - 1, i > 0 ? flag[i - 1] : 0, i + 1,
                                  i + 1 < n ? flag[i + 1] : 0);
      if (mids.size() != 2) adj_ok = false;
    }
  });
  rep.flag_count = flags;
  rep.flag_adjacency_ok = adj_ok;
  if (!adj_ok) rep.failures.push_back("some flag lacks a unique i-adjacent flag");
  return rep;
}

// --- section types and flatness -----------------------------------------------

struct SectionTypeReport {
  std::vector<int> schlafli;            // measured type
  std::vector<std::vector<bool>> flat;  // flat[k][m] for 0 <= k < m <= n-1
  bool rank3_sections_flat = false;     // tightness criterion
};

inline SectionTypeReport section_type_report(const FacePoset& P) {
  SectionTypeReport rep;
  int n = P.rank;

  // measured Schlafli entry i: all sections between an (i-2)-face and an
  // incident (i+1)-face are p_i-gons
  for (int i = 1; i <= n - 1; ++i) {
    int rf = i - 2, rg = i + 1;
    int measured = -1;
    uint64_t nf = rf < 0 ? 1 : P.counts[rf];
    for (uint32_t f = 0; f < nf; ++f) {
      std::vector<uint32_t> gs;
      if (rg >= n) {
        gs.push_back(0);
      } else {
        for (uint32_t g = 0; g < P.counts[rg]; ++g)
          if (P.below(rf, f, rg, g)) gs.push_back(g);
      }
      for (uint32_t g : gs) {
        // rank i-1 and rank i faces strictly inside [f, g]
        std::size_t kv = 0, ke = 0;
        for (uint32_t h = 0; h < P.counts[i - 1]; ++h)
          if (P.below(rf, f, i - 1, h) && P.below(i - 1, h, rg, g)) ++kv;
        for (uint32_t h = 0; h < P.counts[i]; ++h)
          if (P.below(rf, f, i, h) && P.below(i, h, rg, g)) ++ke;
        if (kv != ke)
          throw not_equivelar("section between ranks " + std::to_string(rf) +
                              " and " + std::to_string(rg) + " is not a polygon");
        if (measured < 0) measured = static_cast<int>(kv);
        if (measured != static_cast<int>(kv))
          throw not_equivelar("section polygon sizes disagree at entry " +
                              std::to_string(i));
      }
    }
    rep.schlafli.push_back(measured);
  }

  // (k,m)-flatness table
  rep.flat.assign(n, std::vector<bool>(n, false));
  for (int k = 0; k < n; ++k)
    for (int m = k + 1; m < n; ++m) {
      bool flat = true;
      const auto& rows = P.reach(k, m);
      std::size_t words = (P.counts[m] + 63) / 64;
      for (uint32_t f = 0; f < P.counts[k] && flat; ++f) {
        std::size_t c = 0;
        for (std::size_t w = 0; w < words; ++w) c += __builtin_popcountll(rows[f][w]);
        flat = c == P.counts[m];
      }
      rep.flat[k][m] = flat;
    }

  // tightness criterion: every rank-3 section is flat
  rep.rank3_sections_flat = true;
  for (int rf = -1; rf + 4 <= n && rep.rank3_sections_flat; ++rf) {
    int rg = rf + 4;
    uint64_t nf = rf < 0 ? 1 : P.counts[rf];
    for (uint32_t f = 0; f < nf && rep.rank3_sections_flat; ++f) {
      std::vector<uint32_t> gs;
      if (rg >= n) {
        gs.push_back(0);
      } else {
        for (uint32_t g = 0; g < P.counts[rg]; ++g)
          if (P.below(rf, f, rg, g)) gs.push_back(g);
      }
      for (uint32_t g : gs) {
        std::vector<uint32_t> lows, highs;
        for (uint32_t a = 0; a < P.counts[rf + 1]; ++a)
          if (P.below(rf, f, rf + 1, a) && P.below(rf + 1, a, rg, g)) lows.push_back(a);
        for (uint32_t b = 0; b < P.counts[rg - 1]; ++b)
          if (P.below(rf, f, rg - 1, b) && P.below(rg - 1, b, rg, g)) highs.push_back(b);
        for (uint32_t a : lows)
          for (uint32_t b : highs)
            if (!P.below(rf + 1, a, rg - 1, b)) {
              rep.rank3_sections_flat = false;
              break;
            }
      }
    }
  }
  return rep;
}

}  // namespace rotary
