#include "dgv/parser.hpp"

#include <cctype>

namespace dgv {

namespace {

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& vars)
      : text_(text), vars_(vars) {}

  RationalFunction run() {
    RationalFunction r = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("end of input");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) {
    throw Error(ErrorKind::Syntax,
                "at position " + std::to_string(pos_) + ": expected " + expected);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) { ++pos_; return true; }
    return false;
  }

  int nvars() const { return static_cast<int>(vars_.size()); }

  RationalFunction expr() {
    RationalFunction r = term();
    for (;;) {
      if (accept('+')) r += term();
      else if (accept('-')) r -= term();
      else return r;
    }
  }

  RationalFunction term() {
    RationalFunction r = factor();
    for (;;) {
      if (accept('*')) r *= factor();
      else if (accept('/')) {
        RationalFunction d = factor();
        if (d.is_zero())
          throw Error(ErrorKind::DivisionByZeroPolynomial,
                      "at position " + std::to_string(pos_) + ": denominator is the zero function");
        r /= d;
      } else {
        return r;
      }
    }
  }

  RationalFunction factor() {
    bool neg = accept('-');
    RationalFunction a = atom();
    skip_ws();
    if (accept('^')) {
      unsigned e = parse_uint();
      a = a.pow(e);
    }
    return neg ? -a : a;
  }

  RationalFunction atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("a number, identifier or '('");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RationalFunction r = expr();
      if (!accept(')')) fail("')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return rational_literal();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("a number, identifier or '('");
  }

  unsigned parse_uint() {
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail("a nonnegative integer");
    return static_cast<unsigned>(std::stoul(text_.substr(start, pos_ - start)));
  }

  std::string parse_digits() {
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  RationalFunction rational_literal() {
    std::string numer = parse_digits();
    // A '/' directly followed by digits belongs to the rational literal;
    // otherwise it is term-level division.
    size_t save = pos_;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '/') {
      size_t slash = pos_;
      ++pos_;
      skip_ws();
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        std::string denom = parse_digits();
        Rational d = Rational::from_string(denom);
        if (d.is_zero())
          throw Error(ErrorKind::DivisionByZeroPolynomial,
                      "at position " + std::to_string(slash) + ": literal zero denominator");
        Rational q = Rational::from_string(numer) / d;
        return RationalFunction::constant(nvars(), q);
      }
      pos_ = save;  // the '/' is a division operator
    } else {
      pos_ = save;
    }
    return RationalFunction::constant(nvars(), Rational::from_string(numer));
  }

  RationalFunction identifier() {
    size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ++pos_;
      else break;
    }
    std::string name = text_.substr(start, pos_ - start);
    for (size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return RationalFunction::variable(nvars(), static_cast<int>(i));
    throw Error(ErrorKind::UnknownVariable, "'" + name + "' is not declared in the chart");
  }

  const std::string& text_;
  const std::vector<std::string>& vars_;
  size_t pos_ = 0;
};

}  // namespace

RationalFunction parse_expression(const std::string& text,
                                  const std::vector<std::string>& variables) {
  return Parser(text, variables).run();
}

}  // namespace dgv
