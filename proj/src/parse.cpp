#include "fpsym/parse.hpp"

#include <cctype>
#include <string>

namespace fpsym {

namespace {

class Parser {
public:
  Parser(const std::string& text, const SymbolContext& ctx) : text_(text), ctx_(ctx) {}

  Expr run() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Error::Kind::parse,
                "parse error at position " + std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr parse_expr() {
    Expr e;
    bool neg = false;
    if (accept('-'))
      neg = true;
    else
      accept('+');
    e = parse_term();
    if (neg) e = -e;
    while (true) {
      if (accept('+'))
        e = e + parse_term();
      else if (accept('-'))
        e = e - parse_term();
      else
        return e;
    }
  }

  Expr parse_term() {
    Expr e = parse_factor();
    while (true) {
      if (accept('*')) {
        e = e * parse_factor();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Expr d = parse_factor();
        try {
          e = e / d;
        } catch (const Error& err) {
          pos_ = at;
          fail(err.what());
        }
      } else {
        return e;
      }
    }
  }

  Expr parse_factor() {
    Expr base = parse_base();
    if (!accept('^')) return base;
    bool neg = accept('-');
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("non-integer exponent");
    long long k = parse_integer();
    std::size_t at = pos_;
    try {
      return base.pow(static_cast<int>(neg ? -k : k));
    } catch (const Error& err) {
      pos_ = at;
      fail(err.what());
    }
  }

  long long parse_integer() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected integer");
    if (pos_ < text_.size() && text_[pos_] == '.') fail("non-integer number");
    return std::stoll(text_.substr(start, pos_ - start));
  }

  Expr parse_base() {
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) return Expr::from_int(parse_integer());
    if (c == '(') {
      expect('(');
      Expr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    fail("expected number, identifier or '('");
  }

  std::string read_name() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  DerivIndex deriv_from_suffix(const std::string& suffix,
                               const std::vector<std::string>& allowed) {
    std::vector<std::string> dirs;
    for (char ch : suffix) {
      std::string v(1, ch);
      if (std::find(allowed.begin(), allowed.end(), v) == allowed.end())
        fail("unknown differentiation direction '" + v + "' in derivative suffix");
      dirs.push_back(v);
    }
    return DerivIndex(dirs);
  }

  Expr parse_ident() {
    std::string name = read_name();
    std::string head = name, suffix;
    if (auto us = name.find('_'); us != std::string::npos) {
      head = name.substr(0, us);
      suffix = name.substr(us + 1);
      if (suffix.empty() || suffix.find('_') != std::string::npos)
        fail("malformed derivative suffix in '" + name + "'");
    }

    if (head == "exp") {
      if (!suffix.empty()) fail("'exp' takes no derivative suffix");
      expect('(');
      Expr arg = parse_expr();
      expect(')');
      return Expr::exp(arg);
    }

    if (ctx_.is_function(head)) {
      const auto& args = ctx_.function_args(head);
      DerivIndex d = suffix.empty() ? DerivIndex{} : deriv_from_suffix(suffix, args);
      expect('(');
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) expect(',');
        std::string got = read_name();
        if (got != args[i])
          fail("function '" + head + "' expects argument '" + args[i] + "', got '" + got + "'");
      }
      expect(')');
      return Expr::from_atom(Atom::func(head, args, d));
    }

    if (ctx_.is_dependent(head)) {
      DerivIndex d =
          suffix.empty() ? DerivIndex{} : deriv_from_suffix(suffix, ctx_.independents());
      return Expr::from_atom(Atom::jet(head, d));
    }

    if (!suffix.empty()) fail("'" + head + "' does not admit a derivative suffix");
    if (ctx_.is_independent(head)) return Expr::from_atom(Atom::coord(head));
    if (ctx_.is_parameter(head)) return Expr::from_atom(Atom::param(head));
    throw Error(Error::Kind::undeclared,
                "undeclared symbol '" + head + "' at position " + std::to_string(pos_));
  }

  const std::string& text_;
  const SymbolContext& ctx_;
  std::size_t pos_ = 0;
};

} // namespace

Expr parse(const std::string& text, const SymbolContext& ctx) { return Parser(text, ctx).run(); }

} // namespace fpsym
