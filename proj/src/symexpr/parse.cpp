#include "metaffine/symexpr.hpp"

#include <cctype>

namespace maf {

namespace {

class Parser {
public:
  Parser(std::string_view text, const VarTable &vars) : text_(text), vars_(vars) {}

  Expr run() {
    skip();
    if (pos_ == text_.size())
      fail("empty expression");
    Expr e = expr();
    skip();
    if (pos_ != text_.size())
      fail(std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string &what) const {
    throw ParseError(what + " at offset " + std::to_string(pos_), pos_);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr acc = term();
    for (;;) {
      if (accept('+'))
        acc = acc + term();
      else if (accept('-'))
        acc = acc - term();
      else
        return acc;
    }
  }

  Expr term() {
    Expr acc = factor();
    for (;;) {
      if (accept('*')) {
        acc = acc * factor();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        Expr d = factor();
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        acc = acc / d;
      } else {
        return acc;
      }
    }
  }

  Expr factor() {
    if (accept('-'))
      return -factor();
    Expr b = base();
    if (accept('^')) {
      const bool negative = accept('-');
      skip();
      const std::size_t at = pos_;
      const mpz_class n = integer();
      if (!n.fits_sint_p()) {
        pos_ = at;
        fail("exponent out of range");
      }
      const int k = static_cast<int>(n.get_si());
      if (b.is_zero() && negative && k != 0) {
        pos_ = at;
        fail("division by zero");
      }
      return pow(b, negative ? -k : k);
    }
    return b;
  }

  mpz_class integer() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (start == pos_)
      fail("expected integer");
    return mpz_class(std::string(text_.substr(start, pos_ - start)));
  }

  Expr base() {
    skip();
    if (pos_ == text_.size())
      fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)))
      return Expr(Rational(integer()));
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!accept(')'))
        fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name(text_.substr(start, pos_ - start));
      static const std::pair<const char *, FuncKind> funcs[] = {
          {"sin", FuncKind::Sin}, {"cos", FuncKind::Cos}, {"exp", FuncKind::Exp},
          {"ln", FuncKind::Ln},   {"sqrt", FuncKind::Sqrt}};
      for (const auto &[fname, kind] : funcs) {
        if (name == fname) {
          if (!accept('('))
            fail(std::string("expected '(' after ") + fname);
          Expr arg = expr();
          if (!accept(')'))
            fail("expected ')'");
          try {
            return apply_function(kind, arg);
          } catch (const DomainError &e) {
            throw ParseError(e.what(), start);
          }
        }
      }
      if (!vars_.contains(name))
        throw UnknownIdentifierError(name, start);
      return Expr::symbol(name);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  const VarTable &vars_;
  std::size_t pos_ = 0;
};

} // namespace

Expr parse(std::string_view text, const VarTable &vars) { return Parser(text, vars).run(); }

} // namespace maf
