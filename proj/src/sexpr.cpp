#include "actx/sexpr.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace actx {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view t) : text_(t) {}

  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) throw std::invalid_argument("s-expression: unexpected end of input");
    if (text_[pos_] == ')') throw std::invalid_argument("s-expression: unbalanced ')'");
    if (text_[pos_] == '(') {
      ++pos_;
      SExpr list;
      list.is_list = true;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) throw std::invalid_argument("s-expression: missing ')'");
        if (text_[pos_] == ')') {
          ++pos_;
          return list;
        }
        list.items.push_back(read());
      }
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      ++pos_;
    }
    SExpr leaf;
    leaf.atom = std::string(text_.substr(start, pos_ - start));
    return leaf;
  }

  void expect_end() {
    skip_space();
    if (pos_ != text_.size()) throw std::invalid_argument("s-expression: trailing input");
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

const std::string& SExpr::head() const {
  static const std::string kEmpty;
  if (!is_list) return atom;
  if (items.empty() || items.front().is_list) return kEmpty;
  return items.front().atom;
}

std::vector<double> SExpr::numbers(std::size_t first) const {
  std::vector<double> out;
  for (std::size_t i = first; i < items.size(); ++i) {
    const SExpr& e = items[i];
    if (e.is_list) throw std::invalid_argument("s-expression: expected a number in (" + head() + " ...)");
    double v = 0.0;
    const char* b = e.atom.data();
    const char* end = b + e.atom.size();
    auto [p, ec] = std::from_chars(b, end, v);
    if (ec != std::errc() || p != end) {
      throw std::invalid_argument("s-expression: '" + e.atom + "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

std::string SExpr::to_string() const {
  if (!is_list) return atom;
  std::string s = "(";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += ' ';
    s += items[i].to_string();
  }
  return s + ")";
}

SExpr parse_sexpr(std::string_view text) {
  Reader r(text);
  SExpr e = r.read();
  r.expect_end();
  return e;
}

}  // namespace actx
