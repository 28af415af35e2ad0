// Minimal s-expression reader used for shapes and transport specs.
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace actx {

struct SExpr {
  std::string atom;  // set for leaves
  std::vector<SExpr> items;
  bool is_list = false;

  const std::string& head() const;
  /// Numeric leaves after the head. Throws std::invalid_argument on a non-number.
  std::vector<double> numbers(std::size_t first = 1) const;
  std::string to_string() const;
};

/// Parses one expression; a bare atom is allowed. Throws std::invalid_argument.
SExpr parse_sexpr(std::string_view text);

}  // namespace actx
