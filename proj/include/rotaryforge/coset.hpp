#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "rotaryforge/errors.hpp"
#include "rotaryforge/presentation.hpp"

namespace rotary {

// Action letters: generator i (1-based) acts as letter 2(i-1), its inverse
// as letter 2(i-1)+1.
inline int letter_of(Letter l) {
  return l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1;
}
inline int inv_letter(int x) { return x ^ 1; }

// Complete coset table; cosets are numbered in breadth-first discovery
// order over letters, s_i before s_i^{-1}, so identical inputs produce
// identical tables.
struct CosetTable {
  uint32_t coset_count = 0;
  int nletters = 0;
  std::vector<uint32_t> action;  // action[c * nletters + l]
  bool complete = false;

  uint32_t at(uint32_t coset, int letter) const {
    return action[static_cast<std::size_t>(coset) * nletters + letter];
  }

  uint32_t apply(uint32_t coset, const Word& w) const {
    for (Letter l : w.letters()) coset = at(coset, letter_of(l));
    return coset;
  }

  bool operator==(const CosetTable&) const = default;
};

namespace detail {

// HLT-style enumerator with immediate coincidence handling and row filling.
// Instances are reusable so sweeps do not reallocate tables per call.
class ToddCoxeter {
 public:
  static constexpr uint32_t kUndef = std::numeric_limits<uint32_t>::max();

  // Relators and subgroup generator words are given as letter strings.
  void reset(int nletters, uint32_t max_cosets) {
    nl_ = nletters;
    cap_ = max_cosets < 1 ? 1 : max_cosets;
    tab_.assign(static_cast<std::size_t>(cap_) * nl_, kUndef);
    rep_.resize(cap_);
    rep_[0] = 0;
    rows_ = 1;
    live_ = 1;
    defines_ = 0;
    dead_queue_.clear();
    relators_.clear();
  }

  void add_relator(const Word& w) {
    Word r = w.cyclically_reduced();
    std::vector<int> ls;
    for (Letter l : r.letters()) ls.push_back(letter_of(l));
    if (!ls.empty()) relators_.push_back(std::move(ls));
  }

  // Runs to completion; throws cap_exceeded if the live table would
  // outgrow max_cosets. Dead rows are compacted away when allocation hits
  // the cap, so the cap effectively bounds live cosets. Never truncates.
  void enumerate(const std::vector<std::vector<int>>& subgroup_words) {
    for (const auto& w : subgroup_words) {
      while (true) {
        try {
          scan_and_fill(0, w);
          break;
        } catch (need_compact&) {
          compact();
        }
      }
    }
    uint32_t a = 0;
    while (a < rows_) {
      if (rep_[a] != a) {
        ++a;
        continue;
      }
      try {
        process_row(a);
      } catch (need_compact&) {
        a = compact(a);
        continue;  // reprocess the same coset after renumbering
      }
      ++a;
    }
  }

  static std::vector<int> to_letters(const Word& w) {
    std::vector<int> ls;
    for (Letter l : w.letters()) ls.push_back(letter_of(l));
    return ls;
  }

  uint32_t live_count() const { return live_; }

  // Canonical renumbering: breadth-first over letters in index order.
  CosetTable standardized() const {
    CosetTable t;
    t.nletters = nl_;
    t.coset_count = live_;
    t.action.assign(static_cast<std::size_t>(live_) * nl_, 0);
    std::vector<uint32_t> num(rows_, kUndef);
    std::vector<uint32_t> bfs;
    bfs.reserve(live_);
    uint32_t r0 = find(0);
    num[r0] = 0;
    bfs.push_back(r0);
    for (uint32_t head = 0; head < bfs.size(); ++head) {
      uint32_t c = bfs[head];
      for (int x = 0; x < nl_; ++x) {
        uint32_t d = find(entry(c, x));
        if (num[d] == kUndef) {
          num[d] = static_cast<uint32_t>(bfs.size());
          bfs.push_back(d);
        }
      }
    }
    for (uint32_t c : bfs)
      for (int x = 0; x < nl_; ++x)
        t.action[static_cast<std::size_t>(num[c]) * nl_ + x] = num[find(entry(c, x))];
    t.complete = true;
    return t;
  }

 private:
  int nl_ = 0;
  uint32_t cap_ = 0;
  uint32_t rows_ = 0;
  uint32_t live_ = 0;
  uint64_t defines_ = 0;
  std::vector<uint32_t> tab_;
  mutable std::vector<uint32_t> rep_;
  std::vector<uint32_t> dead_queue_;
  std::vector<std::vector<int>> relators_;

  struct need_compact {};

  uint32_t& entry(uint32_t c, int x) {
    return tab_[static_cast<std::size_t>(c) * nl_ + x];
  }
  uint32_t entry(uint32_t c, int x) const {
    return tab_[static_cast<std::size_t>(c) * nl_ + x];
  }

  void process_row(uint32_t a) {
    for (const auto& r : relators_) {
      scan_and_fill(a, r);
      if (rep_[a] != a) return;
    }
    for (int x = 0; x < nl_; ++x)
      if (entry(a, x) == kUndef) define(a, x);
  }

  // Order-preserving renumbering of live cosets; the processed prefix
  // stays a prefix. Returns the new index of `cur`.
  uint32_t compact(uint32_t cur = 0) {
    std::vector<uint32_t> idx(rows_, kUndef);
    uint32_t n = 0;
    for (uint32_t c = 0; c < rows_; ++c)
      if (rep_[c] == c) idx[c] = n++;
    for (uint32_t c = 0; c < rows_; ++c) {
      if (rep_[c] != c) continue;
      uint32_t* src = &tab_[static_cast<std::size_t>(c) * nl_];
      uint32_t* dst = &tab_[static_cast<std::size_t>(idx[c]) * nl_];
      for (int x = 0; x < nl_; ++x)
        dst[x] = src[x] == kUndef ? kUndef : idx[find(src[x])];
    }
    uint32_t mapped = idx[find(cur)];
    rows_ = n;
    for (uint32_t c = 0; c < n; ++c) rep_[c] = c;
    return mapped;
  }

  uint32_t find(uint32_t c) const {
    while (rep_[c] != c) {
      rep_[c] = rep_[rep_[c]];  // path halving
      c = rep_[c];
    }
    return c;
  }

  uint32_t define(uint32_t c, int x) {
    if (rows_ >= cap_) {
      // reclaim dead rows when that frees a useful fraction of the table
      if ((rows_ - live_) * 8 >= cap_ && defines_ < 64ull * cap_)
        throw need_compact{};
      throw cap_exceeded("coset table cap " + std::to_string(cap_) + " exceeded");
    }
    ++defines_;
    uint32_t n = rows_++;
    ++live_;
    rep_[n] = n;
    uint32_t* row = &tab_[static_cast<std::size_t>(n) * nl_];
    for (int i = 0; i < nl_; ++i) row[i] = kUndef;
    entry(c, x) = n;
    entry(n, inv_letter(x)) = c;
    return n;
  }

  void merge(uint32_t a, uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    rep_[b] = a;
    --live_;
    dead_queue_.push_back(b);
  }

  void coincide(uint32_t a, uint32_t b) {
    merge(a, b);
    while (!dead_queue_.empty()) {
      uint32_t d = dead_queue_.back();
      dead_queue_.pop_back();
      for (int x = 0; x < nl_; ++x) {
        uint32_t e = entry(d, x);
        if (e == kUndef) continue;
        entry(e, inv_letter(x)) = kUndef;
        uint32_t u = find(d), v = find(e);
        if (entry(u, x) != kUndef) {
          merge(v, entry(u, x));
        } else if (entry(v, inv_letter(x)) != kUndef) {
          merge(u, entry(v, inv_letter(x)));
        } else {
          entry(u, x) = v;
          entry(v, inv_letter(x)) = u;
        }
      }
    }
  }

  void scan_and_fill(uint32_t a, const std::vector<int>& w) {
    a = find(a);
    uint32_t f = a, b = a;
    int i = 0, j = static_cast<int>(w.size()) - 1;
    while (true) {
      while (i <= j && entry(f, w[i]) != kUndef) f = find(entry(f, w[i])), ++i;
      if (i > j) {
        if (f != b) coincide(f, b);
        return;
      }
      while (j >= i && entry(b, inv_letter(w[j])) != kUndef)
        b = find(entry(b, inv_letter(w[j]))), --j;
      if (j < i) {
        coincide(f, b);
        return;
      }
      if (j == i) {
        entry(f, w[i]) = b;
        entry(b, inv_letter(w[i])) = f;
        return;
      }
      define(f, w[i]);
      // keep scanning forward from the fresh coset
    }
  }
};

}  // namespace detail

inline uint32_t default_max_cosets(const Presentation& pres) {
  uint64_t t = 8 * pres.order_target();
  return t > 0xFFFFFFFEull ? 0xFFFFFFFEu : static_cast<uint32_t>(t);
}

// Todd-Coxeter enumeration of the cosets of <subgroup_gens> in the
// presented group. Complete deterministic table or cap_exceeded.
inline CosetTable coset_enumerate(const Presentation& pres,
                                  const std::vector<Word>& subgroup_gens,
                                  uint32_t max_cosets = 0) {
  if (max_cosets == 0) max_cosets = default_max_cosets(pres);
  detail::ToddCoxeter tc;
  tc.reset(2 * pres.generators(), max_cosets);
  for (const Word& w : pres.extra_relators()) tc.add_relator(w);
  for (const Word& w : pres.parent_relators()) tc.add_relator(w);
  std::vector<std::vector<int>> sub;
  for (const Word& w : subgroup_gens) {
    if (w.max_generator() > pres.generators())
      throw invalid_params("subgroup word uses generator index out of range");
    sub.push_back(detail::ToddCoxeter::to_letters(w));
  }
  tc.enumerate(sub);
  return tc.standardized();
}

}  // namespace rotary
