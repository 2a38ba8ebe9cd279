#pragma once

#include <cctype>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "rotaryforge/coset.hpp"
#include "rotaryforge/errors.hpp"

namespace rotary {

// Permutation of {0..d-1}. Composition is left-to-right: (a*b)[x] = b[a[x]],
// matching right actions on cosets.
class Perm {
 public:
  Perm() = default;
  explicit Perm(uint32_t degree) : im_(degree) {
    std::iota(im_.begin(), im_.end(), 0u);
  }
  explicit Perm(std::vector<uint32_t> images) : im_(std::move(images)) {
    std::vector<bool> seen(im_.size(), false);
    for (uint32_t v : im_) {
      if (v >= im_.size() || seen[v])
        throw invalid_params("images are not a bijection");
      seen[v] = true;
    }
  }

  uint32_t degree() const { return static_cast<uint32_t>(im_.size()); }
  uint32_t operator[](uint32_t x) const { return im_[x]; }
  const std::vector<uint32_t>& images() const { return im_; }

  bool is_identity() const {
    for (uint32_t x = 0; x < im_.size(); ++x)
      if (im_[x] != x) return false;
    return true;
  }

  Perm operator*(const Perm& rhs) const {
    if (degree() != rhs.degree()) throw degree_mismatch("perm degree mismatch");
    Perm out;
    out.im_.resize(im_.size());
    for (uint32_t x = 0; x < im_.size(); ++x) out.im_[x] = rhs.im_[im_[x]];
    return out;
  }

  Perm inverse() const {
    Perm out;
    out.im_.resize(im_.size());
    for (uint32_t x = 0; x < im_.size(); ++x) out.im_[im_[x]] = x;
    return out;
  }

  Perm pow(long long e) const {
    Perm base = e >= 0 ? *this : inverse();
    unsigned long long n = e >= 0 ? e : -e;
    Perm acc(degree());
    while (n) {
      if (n & 1) acc = acc * base;
      base = base * base;
      n >>= 1;
    }
    return acc;
  }

  uint64_t order() const {
    std::vector<bool> seen(im_.size(), false);
    uint64_t ord = 1;
    for (uint32_t x = 0; x < im_.size(); ++x) {
      if (seen[x]) continue;
      uint64_t len = 0;
      for (uint32_t y = x; !seen[y]; y = im_[y]) seen[y] = true, ++len;
      ord = std::lcm(ord, len);
    }
    return ord;
  }

  std::string cycles() const {
    std::string s;
    std::vector<bool> seen(im_.size(), false);
    for (uint32_t x = 0; x < im_.size(); ++x) {
      if (seen[x] || im_[x] == x) { seen[x] = true; continue; }
      s += '(';
      bool first = true;
      for (uint32_t y = x; !seen[y]; y = im_[y]) {
        seen[y] = true;
        if (!first) s += ' ';
        s += std::to_string(y);
        first = false;
      }
      s += ')';
    }
    return s.empty() ? "()" : s;
  }

  static Perm parse_cycles(const std::string& text, uint32_t degree) {
    Perm p(degree);
    std::size_t i = 0;
    auto skip = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    skip();
    while (i < text.size()) {
      if (text[i] != '(') throw invalid_params("expected '(' in cycle notation");
      ++i;
      std::vector<uint32_t> cyc;
      skip();
      while (i < text.size() && text[i] != ')') {
        uint32_t v = 0;
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
          throw invalid_params("expected point in cycle notation");
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
          v = v * 10 + (text[i++] - '0');
        if (v >= degree) throw invalid_params("cycle point exceeds degree");
        cyc.push_back(v);
        skip();
        if (i < text.size() && text[i] == ',') { ++i; skip(); }
      }
      if (i >= text.size()) throw invalid_params("unterminated cycle");
      ++i;
      for (std::size_t k = 0; k + 1 < cyc.size(); ++k) p.im_[cyc[k]] = cyc[k + 1];
      if (cyc.size() >= 2) p.im_[cyc.back()] = cyc.front();
      skip();
    }
    std::vector<bool> seen(degree, false);
    for (uint32_t v : p.im_) {
      if (seen[v]) throw invalid_params("cycles overlap");
      seen[v] = true;
    }
    return p;
  }

  bool operator==(const Perm&) const = default;
  bool operator<(const Perm& o) const { return im_ < o.im_; }

 private:
  std::vector<uint32_t> im_;
};

struct PermHash {
  std::size_t operator()(const Perm& p) const {
    std::size_t h = 1469598103934665603ull;
    for (uint32_t v : p.images()) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// Evaluates a word at one permutation per generator.
inline Perm evaluate_word(const Word& w, const std::vector<Perm>& images,
                          uint32_t degree) {
  Perm acc(degree);
  for (Letter l : w.letters()) {
    const Perm& g = images[std::abs(l) - 1];
    acc = l > 0 ? acc * g : acc * g.inverse();
  }
  return acc;
}

// One permutation per generator, acting on cosets by right multiplication.
inline std::vector<Perm> perm_images(const CosetTable& t) {
  if (!t.complete) throw incomplete_table("perm_images needs a complete table");
  std::vector<Perm> out;
  int g = t.nletters / 2;
  for (int i = 0; i < g; ++i) {
    std::vector<uint32_t> im(t.coset_count);
    for (uint32_t c = 0; c < t.coset_count; ++c) im[c] = t.at(c, 2 * i);
    out.push_back(Perm(std::move(im)));
  }
  return out;
}

}  // namespace rotary
