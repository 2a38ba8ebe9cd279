#pragma once

#include <stdexcept>
#include <string>

namespace rotary {

// Exceptions carry enough context to reproduce the failing call.

struct cap_exceeded : std::runtime_error {
  explicit cap_exceeded(const std::string& what) : std::runtime_error(what) {}
};

struct parse_error : std::runtime_error {
  int line;
  int column;
  parse_error(const std::string& what, int line_, int col_)
      : std::runtime_error(what + " at line " + std::to_string(line_) +
                           ", column " + std::to_string(col_)),
        line(line_), column(col_) {}
};

struct invalid_params : std::runtime_error {
  explicit invalid_params(const std::string& what) : std::runtime_error(what) {}
};

struct incomplete_table : std::runtime_error {
  explicit incomplete_table(const std::string& what) : std::runtime_error(what) {}
};

struct degree_mismatch : std::runtime_error {
  explicit degree_mismatch(const std::string& what) : std::runtime_error(what) {}
};

struct arity_mismatch : std::runtime_error {
  explicit arity_mismatch(const std::string& what) : std::runtime_error(what) {}
};

struct rank_mismatch : std::runtime_error {
  explicit rank_mismatch(const std::string& what) : std::runtime_error(what) {}
};

struct generator_collapsed : std::runtime_error {
  explicit generator_collapsed(const std::string& what) : std::runtime_error(what) {}
};

struct not_faithful : std::runtime_error {
  explicit not_faithful(const std::string& what) : std::runtime_error(what) {}
};

struct not_tight : std::runtime_error {
  explicit not_tight(const std::string& what) : std::runtime_error(what) {}
};

struct not_member : std::runtime_error {
  explicit not_member(const std::string& what) : std::runtime_error(what) {}
};

struct not_normal : std::runtime_error {
  explicit not_normal(const std::string& what) : std::runtime_error(what) {}
};

struct not_chiral : std::runtime_error {
  explicit not_chiral(const std::string& what) : std::runtime_error(what) {}
};

struct not_equivelar : std::runtime_error {
  explicit not_equivelar(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rotary
