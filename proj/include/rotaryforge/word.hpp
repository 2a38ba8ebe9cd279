#pragma once

#include <cstdlib>
#include <string>
#include <vector>

namespace rotary {

// A letter is a signed 1-based generator index: +i stands for s_i,
// -i for s_i^{-1}.
using Letter = int;

// Word over signed generators, kept freely reduced at all times.
class Word {
 public:
  Word() = default;

  explicit Word(std::vector<Letter> letters) { for (Letter l : letters) push(l); }

  static Word power(int gen, long long exp) {
    Word w;
    Letter l = exp >= 0 ? gen : -gen;
    for (long long i = 0, n = std::llabs(exp); i < n; ++i) w.push(l);
    return w;
  }

  void push(Letter l) {
    if (!ls_.empty() && ls_.back() == -l)
      ls_.pop_back();
    else
      ls_.push_back(l);
  }

  void append(const Word& w) { for (Letter l : w.ls_) push(l); }

  Word inverse() const {
    Word w;
    for (auto it = ls_.rbegin(); it != ls_.rend(); ++it) w.ls_.push_back(-*it);
    return w;
  }

  Word operator*(const Word& rhs) const {
    Word w = *this;
    w.append(rhs);
    return w;
  }

  bool empty() const { return ls_.empty(); }
  std::size_t size() const { return ls_.size(); }
  const std::vector<Letter>& letters() const { return ls_; }

  int max_generator() const {
    int m = 0;
    for (Letter l : ls_) m = std::max(m, std::abs(l));
    return m;
  }

  // Conjugacy-invariant normalization used for relators.
  Word cyclically_reduced() const {
    Word w = *this;
    while (w.ls_.size() >= 2 && w.ls_.front() == -w.ls_.back()) {
      w.ls_.erase(w.ls_.begin());
      w.ls_.pop_back();
    }
    return w;
  }

  // Rewrites each letter through `image(gen)`; inverse letters get the
  // inverted image. Result is freely reduced.
  template <typename Fn>
  Word substituted(Fn&& image) const {
    Word out;
    for (Letter l : ls_) {
      Word g = image(std::abs(l));
      if (l < 0) g = g.inverse();
      out.append(g);
    }
    return out;
  }

  std::string str() const {
    std::string s;
    int i = 0, n = static_cast<int>(ls_.size());
    while (i < n) {
      int j = i;
      while (j < n && ls_[j] == ls_[i]) ++j;
      int run = j - i;
      if (!s.empty()) s += ' ';
      s += 's' + std::to_string(std::abs(ls_[i]));
      int e = ls_[i] > 0 ? run : -run;
      if (e != 1) s += '^' + std::to_string(e);
      i = j;
    }
    return s;
  }

  bool operator==(const Word&) const = default;

 private:
  std::vector<Letter> ls_;
};

}  // namespace rotary
