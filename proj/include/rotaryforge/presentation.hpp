#pragma once

#include <cctype>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "rotaryforge/errors.hpp"
#include "rotaryforge/word.hpp"

namespace rotary {

// Quotient of [p1,...,pn-1]^+ by extra relators. The parent relators
// s_i^{p_i} and (s_i ... s_j)^2 are implied and generated on demand.
class Presentation {
 public:
  Presentation(int rank, std::vector<int> orders, std::vector<Word> extra = {})
      : rank_(rank), orders_(std::move(orders)), extra_(std::move(extra)) {
    if (rank_ < 2) throw invalid_params("presentation rank must be >= 2");
    if (static_cast<int>(orders_.size()) != rank_ - 1)
      throw invalid_params("presentation needs rank-1 orders");
    for (int p : orders_)
      if (p < 2) throw invalid_params("generator order < 2");
    std::vector<Word> kept;
    for (const Word& w : extra_) {
      if (w.max_generator() > rank_ - 1)
        throw invalid_params("relator uses generator index out of range");
      Word r = w.cyclically_reduced();
      if (!r.empty()) kept.push_back(std::move(r));
    }
    extra_ = std::move(kept);
  }

  int rank() const { return rank_; }
  int generators() const { return rank_ - 1; }
  const std::vector<int>& orders() const { return orders_; }
  const std::vector<Word>& extra_relators() const { return extra_; }

  uint64_t order_target() const {
    uint64_t t = 1;
    for (int p : orders_) t *= static_cast<uint64_t>(p);
    return t;
  }

  std::vector<Word> parent_relators() const {
    std::vector<Word> rels;
    int g = generators();
    for (int i = 1; i <= g; ++i) rels.push_back(Word::power(i, orders_[i - 1]));
    for (int i = 1; i <= g; ++i)
      for (int j = i + 1; j <= g; ++j) {
        Word run;
        for (int k = i; k <= j; ++k) run.push(k);
        rels.push_back(run * run);
      }
    return rels;
  }

  std::vector<Word> all_relators() const {
    std::vector<Word> rels = parent_relators();
    rels.insert(rels.end(), extra_.begin(), extra_.end());
    return rels;
  }

  Presentation with_extra(std::vector<Word> more) const {
    std::vector<Word> ex = extra_;
    ex.insert(ex.end(), more.begin(), more.end());
    return Presentation(rank_, orders_, std::move(ex));
  }

  std::string render() const {
    std::string s = "rank " + std::to_string(rank_) + "; orders";
    for (int p : orders_) s += ' ' + std::to_string(p);
    s += ";";
    for (const Word& w : extra_) s += ' ' + w.str() + ";";
    s += '\n';
    return s;
  }

  bool operator==(const Presentation&) const = default;

 private:
  int rank_;
  std::vector<int> orders_;
  std::vector<Word> extra_;
};

inline Presentation parent_presentation(const std::vector<int>& type) {
  return Presentation(static_cast<int>(type.size()) + 1, type);
}

// Equations L = R are stored as the relator L R^{-1}.
inline Word relator_of_equation(const Word& lhs, const Word& rhs) {
  return lhs * rhs.inverse();
}

namespace detail {

class PresentationParser {
 public:
  explicit PresentationParser(std::string_view text) : text_(text) {}

  Presentation run() {
    expect_keyword("rank");
    int rank = expect_int();
    expect_char(';');
    expect_keyword("orders");
    std::vector<int> orders;
    skip_ws();
    while (!eof() && (std::isdigit(peek()) || peek() == '-'))
      orders.push_back(expect_int()), skip_ws();
    expect_char(';');
    if (static_cast<int>(orders.size()) != rank - 1)
      fail("expected " + std::to_string(rank - 1) + " orders");
    for (int p : orders)
      if (p < 2) fail("generator order < 2");

    std::vector<Word> extras;
    skip_ws();
    while (!eof()) {
      Word lhs = parse_word(rank);
      Word rel = lhs;
      skip_ws();
      if (!eof() && peek() == '=') {
        get();
        Word rhs = parse_word(rank);
        rel = relator_of_equation(lhs, rhs);
      }
      expect_char(';');
      if (!rel.empty()) extras.push_back(rel);
      skip_ws();
    }
    return Presentation(rank, orders, extras);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error(msg, line_, col_);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  char get() {
    char c = text_[pos_++];
    if (c == '\n') { ++line_; col_ = 1; } else { ++col_; }
    return c;
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) get();
  }

  void expect_char(char c) {
    skip_ws();
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }

  void expect_keyword(const std::string& kw) {
    skip_ws();
    for (char c : kw) {
      if (eof() || peek() != c) fail("expected keyword '" + kw + "'");
      get();
    }
  }

  long long expect_int() {
    skip_ws();
    bool neg = false;
    if (!eof() && peek() == '-') { neg = true; get(); }
    if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
      fail("expected integer");
    long long v = 0;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (get() - '0');
      if (v > (1LL << 40)) fail("integer too large");
    }
    return neg ? -v : v;
  }

  Word parse_word(int rank) {
    Word w;
    bool any = false;
    while (true) {
      skip_ws();
      if (eof() || peek() != 's') break;
      get();
      if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
        fail("expected generator index after 's'");
      long long idx = expect_int();
      if (idx < 1 || idx > rank - 1) fail("generator index out of range");
      long long exp = 1;
      skip_ws();
      if (!eof() && peek() == '^') {
        get();
        exp = expect_int();
      }
      w.append(Word::power(static_cast<int>(idx), exp));
      any = true;
    }
    if (!any) fail("expected word");
    return w;
  }
};

}  // namespace detail

inline Presentation parse_presentation(std::string_view text) {
  return detail::PresentationParser(text).run();
}

}  // namespace rotary
