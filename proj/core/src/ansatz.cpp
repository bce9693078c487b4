// Parser for the velocity-ansatz mini-grammar "V = COEFF*A^(EXPR)".
#include <cctype>
#include <string>

#include "osa/errors.hpp"
#include "osa/scale.hpp"

namespace osa {
namespace {

class AnsatzParser {
 public:
  explicit AnsatzParser(const std::string& src) : src_(src) {}

  Ansatz parse() {
    Ansatz a;
    a.text = trimmed();
    expectName("V");
    expectChar('=');
    bool sawAmplitude = false;
    bool sawDerivative = false;
    for (;;) {
      factor(a, sawAmplitude, sawDerivative);
      skipWs();
      if (!eat('*')) break;
    }
    skipWs();
    if (pos_ != src_.size()) fail("end of input", std::string(1, src_[pos_]));
    if (sawDerivative) {
      a.kind = Ansatz::Kind::FPrime;
      if (sawAmplitude)
        fail("a pure coefficient with f'(A)", "an A factor");
    } else {
      a.kind = Ansatz::Kind::PowerLaw;
    }
    return a;
  }

 private:
  const std::string& src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& expected, const std::string& found) {
    throw ParseError(pos_, expected, found, 1, static_cast<int>(pos_) + 1);
  }

  std::string trimmed() const {
    std::size_t b = src_.find_first_not_of(" \t");
    std::size_t e = src_.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : src_.substr(b, e - b + 1);
  }

  void skipWs() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
  }

  bool eat(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expectChar(char c) {
    skipWs();
    if (!eat(c)) fail(std::string("'") + c + "'", here());
  }

  std::string here() const {
    return pos_ < src_.size() ? std::string(1, src_[pos_]) : std::string();
  }

  std::string name() {
    skipWs();
    if (pos_ >= src_.size() || !(std::isalpha(static_cast<unsigned char>(src_[pos_])) ||
                                 src_[pos_] == '_'))
      fail("a name", here());
    std::size_t b = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                  src_[pos_] == '_'))
      ++pos_;
    return src_.substr(b, pos_ - b);
  }

  void expectName(const std::string& want) {
    std::size_t at = pos_;
    std::string got = name();
    if (got != want) {
      pos_ = at;
      fail("'" + want + "'", got);
    }
  }

  long integer() {
    skipWs();
    std::size_t b = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    if (pos_ == b) fail("an integer", here());
    return std::stol(src_.substr(b, pos_ - b));
  }

  bool atDigit() {
    skipWs();
    return pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]));
  }

  bool atNameStart() {
    skipWs();
    return pos_ < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[pos_])) ||
                                  src_[pos_] == '_');
  }

  void factor(Ansatz& a, bool& sawAmplitude, bool& sawDerivative) {
    skipWs();
    if (atDigit()) {
      long num = integer();
      long den = 1;
      if (eat('/')) den = integer();
      if (den == 0) fail("a nonzero denominator", "0");
      a.coeff = a.coeff * Coefficient(Rational(num, den));
      return;
    }
    if (!atNameStart()) fail("a coefficient factor or A", here());
    std::size_t at = pos_;
    std::string id = name();
    if (id == "V") {
      pos_ = at;
      fail("a factor other than V", id);
    }
    if (id == "A") {
      ExponentExpr e(1);
      skipWs();
      if (eat('^')) e = exponent();
      if (sawAmplitude) fail("a single A factor", "a second A factor");
      sawAmplitude = true;
      a.exponent = e;
      return;
    }
    // f'(A): first-derivative laws take one of the symbolic fluxes f, g, h.
    if (eat('\'')) {
      if (id.size() != 1 || (id != "f" && id != "g" && id != "h")) {
        pos_ = at;
        fail("one of f', g', h'", id + "'");
      }
      expectChar('(');
      expectName("A");
      expectChar(')');
      if (sawDerivative) fail("a single derivative factor", "a second one");
      sawDerivative = true;
      return;
    }
    a.coeff = a.coeff * Coefficient::param(id);
  }

  // '(' linear ')' | INT | NAME
  ExponentExpr exponent() {
    skipWs();
    if (eat('(')) {
      ExponentExpr e = linear();
      expectChar(')');
      return e;
    }
    if (atDigit()) return ExponentExpr(integer());
    if (atNameStart()) {
      std::string id = name();
      if (id == "A" || id == "V") fail("an exponent parameter", id);
      return ExponentExpr::param(id);
    }
    fail("an exponent", here());
  }

  ExponentExpr linear() {
    ExponentExpr e;
    long sign = 1;
    skipWs();
    if (eat('-')) sign = -1;
    e += linTerm(sign);
    for (;;) {
      skipWs();
      if (eat('+')) {
        e += linTerm(1);
      } else if (eat('-')) {
        e += linTerm(-1);
      } else {
        break;
      }
    }
    return e;
  }

  // INT NAME | INT | NAME, with an optional '*' between INT and NAME.
  ExponentExpr linTerm(long sign) {
    skipWs();
    if (atDigit()) {
      long c = integer();
      if (pos_ < src_.size() && src_[pos_] == '*') ++pos_;
      if (atNameStart()) {
        std::string id = name();
        if (id == "A" || id == "V") fail("an exponent parameter", id);
        return ExponentExpr::param(id, sign * c);
      }
      return ExponentExpr(sign * c);
    }
    if (atNameStart()) {
      std::string id = name();
      if (id == "A" || id == "V") fail("an exponent parameter", id);
      return ExponentExpr::param(id, sign);
    }
    fail("an exponent term", here());
  }
};

}  // namespace

Ansatz parse_ansatz(const std::string& src) { return AnsatzParser(src).parse(); }

}  // namespace osa
