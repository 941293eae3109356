#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "motivic/field.hpp"

namespace motivic {

/// k[vars]/(relations); no vars means Spec k.
struct AlgebraSpec {
  std::vector<std::string> vars;
  std::vector<std::string> relations;
};

struct SieveNode {
  enum class Kind { Full, Empty, Closed, Open, Image, Ref, Union, Intersection };
  Kind kind = Kind::Full;
  std::vector<std::string> polys;  // Closed, Open
  std::string ref;                  // Image (morphism), Ref (sieve)
  std::shared_ptr<const SieveNode> left, right;
};

struct ClassNode {
  enum class Kind { Integer, Lefschetz, Ref, Add, Sub, Mul, Neg };
  Kind kind = Kind::Integer;
  long value = 0;  // Integer value or Lefschetz exponent
  std::string ref;
  std::shared_ptr<const ClassNode> left, right;
};

/// l(n) = slope * n + offset.
struct LinearRule {
  long slope = 0;
  long offset = 0;
};

/// "2*n+1", "n", "0".
std::string to_string(const LinearRule& r);

struct MeasureSpec {
  Scalar q = 0;
  std::optional<std::string> cylinder;
  std::optional<LinearRule> lax;
  std::optional<long> horizon;
  std::optional<long> window;
};

enum class StmtKind {
  Field,
  FatPoint,
  Chain,
  Scheme,
  Morphism,
  Sieve,
  Relative,
  Simplicial,
  Class,
  Count,
  Arc,
  Measure,
  Check
};

const char* to_string(StmtKind kind);

struct Statement {
  StmtKind kind = StmtKind::Field;
  std::size_t line = 0;
  std::string name;               // declared name, or the subject of a query
  std::vector<std::string> refs;  // further names, in source order
  std::string word;               // field spec, chain variable, functor, check name
  std::optional<long> number;     // level, skeletal level, tau level
  AlgebraSpec algebra;
  std::vector<AlgebraSpec> chain;  // explicit chains
  std::vector<std::string> polys;  // morphism images
  std::shared_ptr<const SieveNode> sieve;
  std::shared_ptr<const ClassNode> cls;
  MeasureSpec measure;
};

struct Script {
  std::vector<Statement> statements;
};

struct ParseError : std::runtime_error {
  ParseError(std::size_t line, std::size_t column, std::string token, const std::string& message);
  std::size_t line;
  std::size_t column;
  std::string token;
};

/// Parses a script; throws ParseError with the location of the offending
/// token. Polynomials are checked against the declared variable names.
Script parse_script(std::string_view text);

/// Canonical text; parse_script(print_script(s)) prints back identically.
std::string print_script(const Script& s);
std::string print_statement(const Statement& s);

}  // namespace motivic
