#include "osa/parse.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

#include "osa/errors.hpp"

namespace osa {
namespace {

enum class Tok {
  Ident, Number, Plus, Minus, Star, Slash, Caret, Underscore,
  LParen, RParen, Pipe, Equals, Apostrophe, End
};

struct Token {
  Tok kind;
  std::string text;
  long number = 0;
  size_t pos = 0;
};

const std::set<std::string> kReservedNames = {
    "u", "psi", "i", "V", "A", "L", "sigma", "sin", "cos", "f", "g", "h", "x", "t"};

class Parser {
 public:
  Parser(const std::string& src, const std::vector<std::string>& params) : src_(src) {
    for (const auto& p : params) {
      if (kReservedNames.count(p))
        fail(0, "a parameter name that is not a reserved symbol", p);
      declared_.insert(p);
    }
    lex();
  }

  Expr parse() {
    Expr lhs = parseSum();
    expect(Tok::Equals, "'='");
    const Token& z = expect(Tok::Number, "'0'");
    if (z.number != 0) fail(z.pos, "'0' on the right-hand side", z.text);
    if (peek().kind != Tok::End) fail(peek().pos, "end of input", peek().text);
    lhs.field = field_.empty() ? "u" : field_;
    return canonicalize(lhs);
  }

 private:
  // ---- lexing ----
  void lex() {
    size_t i = 0;
    while (i < src_.size()) {
      char c = src_[i];
      if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
      Token t;
      t.pos = i;
      if (std::isalpha(static_cast<unsigned char>(c))) {
        size_t j = i;
        while (j < src_.size() && std::isalnum(static_cast<unsigned char>(src_[j]))) ++j;
        t.kind = Tok::Ident;
        t.text = src_.substr(i, j - i);
        i = j;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t j = i;
        while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
        t.kind = Tok::Number;
        t.text = src_.substr(i, j - i);
        if (t.text.size() > 12) fail(i, "a smaller integer literal", t.text);
        t.number = std::stol(t.text);
        i = j;
      } else {
        switch (c) {
          case '+': t.kind = Tok::Plus; break;
          case '-': t.kind = Tok::Minus; break;
          case '*': t.kind = Tok::Star; break;
          case '/': t.kind = Tok::Slash; break;
          case '^': t.kind = Tok::Caret; break;
          case '_': t.kind = Tok::Underscore; break;
          case '(': t.kind = Tok::LParen; break;
          case ')': t.kind = Tok::RParen; break;
          case '|': t.kind = Tok::Pipe; break;
          case '=': t.kind = Tok::Equals; break;
          case '\'': t.kind = Tok::Apostrophe; break;
          default:
            fail(i, "a valid token", std::string(1, c));
        }
        t.text = std::string(1, c);
        ++i;
      }
      tokens_.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::End;
    end.pos = src_.size();
    tokens_.push_back(end);
  }

  const Token& peek(size_t ahead = 0) const {
    size_t i = std::min(cursor_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  const Token& advance() { return tokens_[std::min(cursor_++, tokens_.size() - 1)]; }
  bool accept(Tok k) {
    if (peek().kind == k) { ++cursor_; return true; }
    return false;
  }
  const Token& expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail(peek().pos, what, peek().text);
    return advance();
  }

  [[noreturn]] void fail(size_t pos, const std::string& expected, const std::string& found) const {
    int line = 1, col = 1;
    for (size_t i = 0; i < pos && i < src_.size(); ++i) {
      if (src_[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    throw ParseError(pos, expected, found, line, col);
  }

  // ---- grammar ----
  // During term assembly a parsed factor is a coefficient, a field expression,
  // or a time-derivative marker.
  struct PFactor {
    enum class Kind { Coeff, Field, TimeD } kind = Kind::Coeff;
    Coefficient c = Coefficient::one();
    Expr e;
    int tOrder = 0, xOrder = 0;
    size_t pos = 0;
  };

  Expr parseSum() {
    Expr acc;
    bool neg = accept(Tok::Minus);
    acc = parseTerm();
    if (neg) acc = negate(acc);
    for (;;) {
      if (accept(Tok::Plus)) {
        acc = add(acc, parseTerm());
      } else if (accept(Tok::Minus)) {
        acc = add(acc, negate(parseTerm()));
      } else {
        break;
      }
    }
    return acc;
  }

  Expr parseTerm() {
    Coefficient coeff = Coefficient::one();
    std::optional<Expr> fieldPart;
    std::optional<PFactor> timePart;

    bool divide = false;
    for (;;) {
      PFactor f = parseFactor();
      switch (f.kind) {
        case PFactor::Kind::Coeff: {
          if (divide) f.c = invertCoefficient(f.c, f.pos);
          coeff = coeff * f.c;
          break;
        }
        case PFactor::Kind::Field: {
          if (divide) fail(f.pos, "a parameter or number after '/'", tokenTextAt(f.pos));
          fieldPart = fieldPart ? multiply(*fieldPart, f.e) : f.e;
          break;
        }
        case PFactor::Kind::TimeD: {
          if (divide) fail(f.pos, "a parameter or number after '/'", tokenTextAt(f.pos));
          if (timePart)
            fail(f.pos, "at most one time-derivative factor per term", tokenTextAt(f.pos));
          timePart = f;
          break;
        }
      }
      if (accept(Tok::Star)) { divide = false; continue; }
      if (accept(Tok::Slash)) { divide = true; continue; }
      break;
    }

    if (timePart) {
      if (fieldPart)
        fail(timePart->pos, "time-derivative factors not multiplied by field factors",
             tokenTextAt(timePart->pos));
      Expr r;
      TimeDeriv td;
      td.differentiand = Monomial(coeff);
      td.differentiand.factors.push_back(Factor::fieldDeriv(0));
      td.tOrder = timePart->tOrder;
      td.xOrder = timePart->xOrder;
      r.timeDerivs.push_back(std::move(td));
      return r;
    }
    Expr cexpr;
    cexpr.monomials.push_back(Monomial(coeff));
    if (fieldPart) return multiply(cexpr, *fieldPart);
    return cexpr;
  }

  std::string tokenTextAt(size_t pos) const {
    for (const auto& t : tokens_)
      if (t.pos == pos) return t.text;
    return "";
  }

  Coefficient invertCoefficient(const Coefficient& c, size_t pos) {
    if (c.rational.isZero()) fail(pos, "a nonzero divisor", "0");
    Coefficient r = Coefficient::one();
    r.rational = c.rational.pow(-1);
    for (const auto& [name, p] : c.params) {
      ExponentExpr np = p;
      np = np * -1;
      r.mulParam(name, np);
    }
    if (c.imaginaryPower == 1) {  // 1/i = -i
      r.imaginaryPower = 1;
      r.rational = -r.rational;
    }
    return r;
  }

  PFactor parseFactor() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        advance();
        PFactor f;
        f.pos = t.pos;
        f.c = Coefficient(Rational(t.number));
        return f;
      }
      case Tok::Ident:
        return parseIdentFactor();
      case Tok::Pipe:
        return parseModulusFactor();
      case Tok::LParen:
        return parseGroupFactor();
      default:
        fail(t.pos, "a factor", t.text);
    }
  }

  PFactor parseIdentFactor() {
    const Token& t = advance();
    PFactor f;
    f.pos = t.pos;
    const std::string& name = t.text;

    if (name == "i") {
      f.c = Coefficient::imaginaryUnit();
      return f;
    }
    if (name == "V") {
      f.c = Coefficient::param("V");
      return f;
    }
    if (name == "u" || name == "psi") {
      noteField(name, t.pos);
      return parseFieldTail(t.pos);
    }
    if (name == "f" || name == "g" || name == "h" || name == "sin" || name == "cos") {
      return parseFuncFactor(name, t.pos);
    }
    if (declared_.count(name)) {
      ExponentExpr p(1);
      if (accept(Tok::Caret)) p = parseExpAtom();
      f.c = Coefficient::one();
      f.c.mulParam(name, p);
      return f;
    }
    fail(t.pos, "a declared parameter or known symbol", name);
  }

  void noteField(const std::string& name, size_t pos) {
    if (field_.empty()) {
      field_ = name;
    } else if (field_ != name) {
      fail(pos, "a single field symbol (u or psi, not both)", name);
    }
  }

  // After the field identifier: [_ SUBS] [^ expatom]
  PFactor parseFieldTail(size_t basePos) {
    int xOrder = 0, tOrder = 0;
    if (accept(Tok::Underscore)) parseSubs(xOrder, tOrder);
    if (tOrder > 0) {
      if (peek().kind == Tok::Caret)
        fail(peek().pos, "no exponent on a time-derivative factor", "^");
      PFactor f;
      f.kind = PFactor::Kind::TimeD;
      f.tOrder = tOrder;
      f.xOrder = xOrder;
      f.pos = basePos;
      return f;
    }
    ExponentExpr p(1);
    if (accept(Tok::Caret)) p = parseExpAtom();
    PFactor f;
    f.kind = PFactor::Kind::Field;
    f.pos = basePos;
    Monomial m;
    m.factors.push_back(Factor::fieldDeriv(xOrder, p));
    m.canonicalizeFactors();
    f.e.monomials.push_back(std::move(m));
    return f;
  }

  void parseSubs(int& xOrder, int& tOrder) {
    const Token& s = expect(Tok::Ident, "a subscript of x and t letters");
    for (char c : s.text) {
      if (c == 'x') ++xOrder;
      else if (c == 't') ++tOrder;
      else fail(s.pos, "a subscript of x and t letters", s.text);
    }
  }

  PFactor parseFuncFactor(const std::string& name, size_t basePos) {
    int order = 0;
    while (accept(Tok::Apostrophe)) ++order;
    bool elementary = (name == "sin" || name == "cos");
    if (elementary && order > 0)
      fail(basePos, "no apostrophes on sin/cos", name);
    expect(Tok::LParen, "'('");
    const Token& fld = expect(Tok::Ident, "the field symbol");
    if (fld.text != "u" && fld.text != "psi")
      fail(fld.pos, "the field symbol", fld.text);
    noteField(fld.text, fld.pos);
    expect(Tok::RParen, "')'");

    Expr e;
    Monomial m;
    if (elementary) {
      m.factors.push_back(Factor::elementary(name == "cos"));
    } else {
      m.factors.push_back(Factor::funcSym(name[0], order));
    }
    e.monomials.push_back(std::move(m));

    if (accept(Tok::Underscore)) {
      int xOrder = 0, tOrder = 0;
      size_t subsPos = peek().pos;
      parseSubs(xOrder, tOrder);
      if (tOrder > 0)
        fail(subsPos, "x-only subscripts on function factors", "t");
      for (int k = 0; k < xOrder; ++k) e = differentiate_x(e);
    }
    if (peek().kind == Tok::Caret) {
      size_t cpos = peek().pos;
      advance();
      e = applyPower(e, parseExpAtom(), cpos, /*allowSymbolic=*/false);
    }
    PFactor f;
    f.kind = PFactor::Kind::Field;
    f.pos = basePos;
    f.e = std::move(e);
    return f;
  }

  PFactor parseModulusFactor() {
    const Token& open = advance();  // '|'
    const Token& fld = expect(Tok::Ident, "the field symbol");
    if (fld.text != "u" && fld.text != "psi")
      fail(fld.pos, "the field symbol", fld.text);
    noteField(fld.text, fld.pos);
    expect(Tok::Pipe, "'|'");
    if (peek().kind == Tok::Underscore)
      fail(peek().pos, "no derivative subscript on modulus factors", "_");
    ExponentExpr p(1);
    if (accept(Tok::Caret)) p = parseExpAtom();
    PFactor f;
    f.kind = PFactor::Kind::Field;
    f.pos = open.pos;
    Monomial m;
    m.factors.push_back(Factor::modulus(p));
    f.e.monomials.push_back(std::move(m));
    return f;
  }

  PFactor parseGroupFactor() {
    const Token& open = advance();  // '('
    Expr inner = parseGroupTerm();
    expect(Tok::RParen, "')'");
    if (accept(Tok::Underscore)) {
      int xOrder = 0, tOrder = 0;
      size_t subsPos = peek().pos;
      parseSubs(xOrder, tOrder);
      if (tOrder > 0)
        fail(subsPos, "x-only subscripts on parenthesized groups", "t");
      for (int k = 0; k < xOrder; ++k) inner = differentiate_x(inner);
    }
    if (peek().kind == Tok::Caret) {
      size_t cpos = peek().pos;
      advance();
      inner = applyPower(inner, parseExpAtom(), cpos, /*allowSymbolic=*/true);
    }
    PFactor f;
    f.kind = PFactor::Kind::Field;
    f.pos = open.pos;
    f.e = std::move(inner);
    return f;
  }

  // A group body is a product of non-time factors, e.g. (u^2), (u_xx^2), (u^m).
  Expr parseGroupTerm() {
    Expr acc;
    acc.monomials.push_back(Monomial(Coefficient::one()));
    bool divide = false;
    for (;;) {
      PFactor f = parseFactor();
      switch (f.kind) {
        case PFactor::Kind::Coeff: {
          if (divide) f.c = invertCoefficient(f.c, f.pos);
          Expr c;
          c.monomials.push_back(Monomial(f.c));
          acc = multiply(acc, c);
          break;
        }
        case PFactor::Kind::Field: {
          if (divide) fail(f.pos, "a parameter or number after '/'", tokenTextAt(f.pos));
          acc = multiply(acc, f.e);
          break;
        }
        case PFactor::Kind::TimeD:
          fail(f.pos, "no time derivatives inside parenthesized groups",
               tokenTextAt(f.pos));
      }
      if (accept(Tok::Star)) { divide = false; continue; }
      if (accept(Tok::Slash)) { divide = true; continue; }
      break;
    }
    return acc;
  }

  Expr applyPower(const Expr& e, const ExponentExpr& p, size_t pos, bool allowSymbolic) {
    if (p.isConstant()) {
      long c = p.constant;
      if (c < 0) fail(pos, "a nonnegative exponent", std::to_string(c));
      if (c > 32) fail(pos, "an exponent no larger than 32", std::to_string(c));
      Expr acc;
      acc.monomials.push_back(Monomial(Coefficient::one()));
      for (long k = 0; k < c; ++k) acc = multiply(acc, e);
      return acc;
    }
    // Symbolic exponent: only a single bare field/modulus factor with unit
    // power can carry it (e.g. (u)^m); function factors require integers.
    if (allowSymbolic && e.monomials.size() == 1 && e.timeDerivs.empty() &&
        e.monomials[0].factors.size() == 1 && e.monomials[0].coeff.isPureRational() &&
        e.monomials[0].coeff.rational.isOne() &&
        e.monomials[0].factors[0].power == ExponentExpr(1)) {
      Factor::Kind k = e.monomials[0].factors[0].kind;
      if (k == Factor::Kind::FieldDeriv || k == Factor::Kind::Modulus) {
        Expr r = e;
        r.monomials[0].factors[0].power = p;
        return r;
      }
    }
    fail(pos, "an integer exponent on this construct", p.str());
  }

  ExponentExpr parseExpAtom() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      advance();
      return ExponentExpr(t.number);
    }
    if (t.kind == Tok::Ident) {
      advance();
      if (!declared_.count(t.text))
        fail(t.pos, "a declared exponent parameter", t.text);
      return ExponentExpr::param(t.text);
    }
    if (t.kind == Tok::LParen) {
      advance();
      ExponentExpr acc = parseExpSum();
      expect(Tok::RParen, "')'");
      return acc;
    }
    fail(t.pos, "an integer, parameter, or parenthesized exponent", t.text);
  }

  ExponentExpr parseExpSum() {
    ExponentExpr acc(0);
    bool neg = accept(Tok::Minus);
    acc += parseExpTerm(neg);
    for (;;) {
      if (accept(Tok::Plus)) acc += parseExpTerm(false);
      else if (accept(Tok::Minus)) acc += parseExpTerm(true);
      else break;
    }
    return acc;
  }

  ExponentExpr parseExpTerm(bool neg) {
    const Token& t = peek();
    long sign = neg ? -1 : 1;
    if (t.kind == Tok::Number) {
      advance();
      long mag = t.number;
      // optional [*] PARAM after the integer, e.g. 2k or 2*k
      if (peek().kind == Tok::Star && peek(1).kind == Tok::Ident) {
        advance();
      }
      if (peek().kind == Tok::Ident) {
        const Token& id = advance();
        if (!declared_.count(id.text))
          fail(id.pos, "a declared exponent parameter", id.text);
        return ExponentExpr::param(id.text, sign * mag);
      }
      return ExponentExpr(sign * mag);
    }
    if (t.kind == Tok::Ident) {
      advance();
      if (!declared_.count(t.text))
        fail(t.pos, "a declared exponent parameter", t.text);
      return ExponentExpr::param(t.text, sign);
    }
    fail(t.pos, "an exponent term", t.text);
  }

  const std::string& src_;
  std::set<std::string> declared_;
  std::vector<Token> tokens_;
  size_t cursor_ = 0;
  std::string field_;
};

}  // namespace

Expr parse_equation(const std::string& src, const std::vector<std::string>& params) {
  Parser p(src, params);
  return p.parse();
}

}  // namespace osa
