#pragma once
#include <cstddef>
#include <stdexcept>
#include <string>

namespace osa {

// Lexical/grammar failure with byte-accurate location info.
struct ParseError : std::runtime_error {
  std::size_t position;  // byte offset into the source
  std::string expected;
  std::string found;
  int line;    // 1-based
  int column;  // 1-based
  ParseError(std::size_t pos, std::string exp, std::string fnd, int ln, int col)
      : std::runtime_error("parse error at line " + std::to_string(ln) + ", column " +
                           std::to_string(col) + " (offset " + std::to_string(pos) +
                           "): expected " + exp + ", found " + (fnd.empty() ? "end of input" : "'" + fnd + "'")),
        position(pos), expected(std::move(exp)), found(std::move(fnd)), line(ln), column(col) {}
};

struct UnboundSymbol : std::runtime_error {
  explicit UnboundSymbol(const std::string& name) : std::runtime_error("unbound symbol: " + name) {}
};

struct ModulusNotDifferentiable : std::runtime_error {
  ModulusNotDifferentiable() : std::runtime_error("modulus factors have no x-derivative") {}
};

struct EmptyRelation : std::runtime_error {
  EmptyRelation() : std::runtime_error("scale substitution cancelled every term") {}
};

struct DegenerateRelation : std::runtime_error {
  explicit DegenerateRelation(const std::string& what) : std::runtime_error(what) {}
};

struct NotPowerLawStructured : std::runtime_error {
  explicit NotPowerLawStructured(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedRHS : std::runtime_error {
  explicit UnsupportedRHS(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationFailure : std::runtime_error {
  explicit ValidationFailure(const std::string& what) : std::runtime_error(what) {}
};

struct GridTooCoarse : std::runtime_error {
  explicit GridTooCoarse(const std::string& what) : std::runtime_error(what) {}
};

struct FlatProfile : std::runtime_error {
  FlatProfile() : std::runtime_error("profile is flat (amplitude below 1e-12)") {}
};

struct RangeTooNarrow : std::runtime_error {
  explicit RangeTooNarrow(const std::string& what) : std::runtime_error(what) {}
};

struct OverflowError : std::runtime_error {
  explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace osa
