#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcmeter/error.hpp"
#include "pcmeter/metric.hpp"

namespace pcmeter::rule {

// Rule language:
//
//   rule    := clause+ default?
//   clause  := "if" expr "then" result
//   default := "else" result
//   expr    := expr ("and" | "or") expr | "not" expr | "(" expr ")" | ref cmp number
//   ref     := ("phi" | "val") "(" ident ")"
//   cmp     := "<" | "<=" | "=" | ">=" | ">" | "!="   (also "==", "<>", "≤", "≥", "≠")
//   result  := number | "null"
//
// "not" binds tighter than "and", which binds tighter than "or". Keywords
// are case-insensitive; identifiers are not.

enum class RefKind { kPhi, kVal };
enum class CmpOp { kLt, kLe, kEq, kGe, kGt, kNe };

std::string_view to_string(CmpOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { kCompare, kNot, kAnd, kOr };

  Kind kind = Kind::kCompare;
  // kCompare
  RefKind ref = RefKind::kPhi;
  std::string name;
  CmpOp op = CmpOp::kLt;
  double literal = 0.0;
  // kNot uses lhs; kAnd/kOr use both.
  ExprPtr lhs;
  ExprPtr rhs;

  static ExprPtr compare(RefKind ref, std::string name, CmpOp op, double literal);
  static ExprPtr negate(ExprPtr child);
  static ExprPtr conjunction(ExprPtr lhs, ExprPtr rhs);
  static ExprPtr disjunction(ExprPtr lhs, ExprPtr rhs);
};

// Deep structural equality.
bool operator==(const Expr& a, const Expr& b);

struct Clause {
  ExprPtr condition;
  Metric result;
};

struct RuleAst {
  std::vector<Clause> clauses;
  std::optional<Metric> fallback;  // the "else" result

  friend bool operator==(const RuleAst& a, const RuleAst& b);
};

using RuleTable = std::map<std::string, RuleAst, std::less<>>;

// What a rule may reference for one attribute (or dimension) name.
struct Binding {
  std::optional<double> raw;         // val(name)
  std::optional<Metric> projected;   // phi(name)
};

using Bindings = std::map<std::string, Binding, std::less<>>;

// Thrown for malformed rule text. Lines and columns are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected,
             std::string found);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

// Throws ParseError, or Error(kRangeError) when a result lies outside [0,1].
RuleAst parse(std::string_view text);

// Canonical source text; parse(print(ast)) == ast.
std::string print(const RuleAst& ast);
std::string print(const Expr& expr);

// First clause whose condition holds wins, then the default, then Null.
// Comparisons are tolerant to kEpsilon. A comparison against a Null phi is
// false. Missing names throw Error(kUnboundReference).
Metric evaluate(const RuleAst& ast, const Bindings& bindings);
bool evaluate(const Expr& expr, const Bindings& bindings);

// Names referenced anywhere in the rule, by kind.
std::vector<std::pair<RefKind, std::string>> references(const RuleAst& ast);

}  // namespace pcmeter::rule
