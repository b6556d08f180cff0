#include "pcmeter/rule.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>

namespace pcmeter::rule {

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::kLt: return "<";
    case CmpOp::kLe: return "<=";
    case CmpOp::kEq: return "=";
    case CmpOp::kGe: return ">=";
    case CmpOp::kGt: return ">";
    case CmpOp::kNe: return "!=";
  }
  return "?";
}

ExprPtr Expr::compare(RefKind ref, std::string name, CmpOp op, double literal) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kCompare;
  e->ref = ref;
  e->name = std::move(name);
  e->op = op;
  e->literal = literal;
  return e;
}

ExprPtr Expr::negate(ExprPtr child) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kNot;
  e->lhs = std::move(child);
  return e;
}

ExprPtr Expr::conjunction(ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kAnd;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

ExprPtr Expr::disjunction(ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kOr;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

namespace {

bool same_ptr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::kCompare:
      return a.ref == b.ref && a.name == b.name && a.op == b.op && a.literal == b.literal;
    case Expr::Kind::kNot:
      return same_ptr(a.lhs, b.lhs);
    case Expr::Kind::kAnd:
    case Expr::Kind::kOr:
      return same_ptr(a.lhs, b.lhs) && same_ptr(a.rhs, b.rhs);
  }
  return false;
}

bool operator==(const RuleAst& a, const RuleAst& b) {
  if (a.clauses.size() != b.clauses.size() || a.fallback != b.fallback) return false;
  for (std::size_t i = 0; i < a.clauses.size(); ++i) {
    if (a.clauses[i].result != b.clauses[i].result) return false;
    if (!same_ptr(a.clauses[i].condition, b.clauses[i].condition)) return false;
  }
  return true;
}

namespace {

std::string describe_expected(const std::vector<std::string>& expected) {
  std::string out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) out += i + 1 == expected.size() ? " or " : ", ";
    out += expected[i];
  }
  return out;
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected,
                       std::string found)
    : Error(ErrorCode::kParseError,
            "line " + std::to_string(line) + ", column " + std::to_string(column) +
                ": expected " + describe_expected(expected) + ", found " + found),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

namespace {

enum class TokKind { kWord, kNumber, kLParen, kRParen, kCmp, kEnd };

struct Token {
  TokKind kind = TokKind::kEnd;
  std::string text;
  double number = 0.0;
  CmpOp op = CmpOp::kLt;
  std::size_t line = 1;
  std::size_t column = 1;
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == ':' ||
         c == '-';
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token tok;
      tok.line = line_;
      tok.column = column_;
      if (pos_ >= src_.size()) {
        out.push_back(tok);
        return out;
      }
      char c = src_[pos_];
      if (c == '(') {
        tok.kind = TokKind::kLParen;
        tok.text = "(";
        advance(1);
      } else if (c == ')') {
        tok.kind = TokKind::kRParen;
        tok.text = ")";
        advance(1);
      } else if (lex_cmp(tok)) {
        tok.kind = TokKind::kCmp;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' ||
                 c == '+') {
        lex_number(tok);
      } else if (ident_start(c)) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && ident_char(src_[pos_])) advance(1);
        tok.kind = TokKind::kWord;
        tok.text = std::string(src_.substr(start, pos_ - start));
      } else {
        throw ParseError(tok.line, tok.column, {"a token"},
                         "unexpected character '" + std::string(1, c) + "'");
      }
      out.push_back(std::move(tok));
    }
  }

 private:
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
        ++column_;
      }
      ++pos_;
    }
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else {
        break;
      }
    }
  }

  bool starts(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  bool lex_cmp(Token& tok) {
    static constexpr std::pair<std::string_view, CmpOp> kOps[] = {
        {"<=", CmpOp::kLe}, {">=", CmpOp::kGe}, {"!=", CmpOp::kNe}, {"<>", CmpOp::kNe},
        {"==", CmpOp::kEq}, {"≤", CmpOp::kLe}, {"≥", CmpOp::kGe},
        {"≠", CmpOp::kNe}, {"<", CmpOp::kLt}, {">", CmpOp::kGt}, {"=", CmpOp::kEq},
    };
    for (const auto& [text, op] : kOps) {
      if (starts(text)) {
        tok.text = std::string(text);
        tok.op = op;
        advance(text.size());
        return true;
      }
    }
    return false;
  }

  void lex_number(Token& tok) {
    std::size_t start = pos_;
    std::size_t end = pos_;
    if (src_[end] == '+' || src_[end] == '-') ++end;
    auto digits = [&] {
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
    };
    digits();
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      digits();
    }
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t save = end++;
      if (end < src_.size() && (src_[end] == '+' || src_[end] == '-')) ++end;
      std::size_t before = end;
      digits();
      if (end == before) end = save;
    }
    std::string_view text = src_.substr(start, end - start);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
      throw ParseError(tok.line, tok.column, {"a number"},
                       "'" + std::string(src_.substr(start, std::max<std::size_t>(end - start, 1))) +
                           "'");
    }
    tok.kind = TokKind::kNumber;
    tok.text = std::string(src_.substr(start, end - start));
    tok.number = value;
    advance(end - start);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

std::string describe(const Token& tok) {
  if (tok.kind == TokKind::kEnd) return "end of input";
  return "'" + tok.text + "'";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  RuleAst rule() {
    RuleAst ast;
    if (!is_keyword("if")) fail({"if"});
    while (is_keyword("if")) {
      next();
      Clause clause;
      clause.condition = disjunction({"and", "or", "then"});
      expect_keyword("then", {"and", "or", "then"});
      clause.result = result();
      ast.clauses.push_back(std::move(clause));
    }
    if (is_keyword("else")) {
      next();
      ast.fallback = result();
    }
    if (peek().kind != TokKind::kEnd) {
      if (ast.fallback) fail({"end of input"});
      fail({"if", "else", "end of input"});
    }
    return ast;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  bool is_keyword(std::string_view kw) const {
    return peek().kind == TokKind::kWord && lower(peek().text) == kw;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw ParseError(peek().line, peek().column, std::move(expected), describe(peek()));
  }

  void expect_keyword(std::string_view kw, std::vector<std::string> expected) {
    if (!is_keyword(kw)) fail(std::move(expected));
    next();
  }

  Metric result() {
    if (is_keyword("null")) {
      next();
      return Metric::null();
    }
    if (peek().kind != TokKind::kNumber) fail({"a number", "null"});
    const Token& tok = next();
    if (!(tok.number >= 0.0 && tok.number <= 1.0)) {
      throw Error(ErrorCode::kRangeError, "line " + std::to_string(tok.line) + ", column " +
                                              std::to_string(tok.column) + ": result " +
                                              tok.text + " outside [0,1]");
    }
    return Metric(tok.number);
  }

  // `follow` lists what may legally come after the expression, for messages.
  ExprPtr disjunction(const std::vector<std::string>& follow) {
    ExprPtr lhs = conjunction(follow);
    while (is_keyword("or")) {
      next();
      lhs = Expr::disjunction(lhs, conjunction(follow));
    }
    return lhs;
  }

  ExprPtr conjunction(const std::vector<std::string>& follow) {
    ExprPtr lhs = negation(follow);
    while (is_keyword("and")) {
      next();
      lhs = Expr::conjunction(lhs, negation(follow));
    }
    return lhs;
  }

  ExprPtr negation(const std::vector<std::string>& follow) {
    if (is_keyword("not")) {
      next();
      return Expr::negate(negation(follow));
    }
    if (peek().kind == TokKind::kLParen) {
      next();
      ExprPtr inner = disjunction({"and", "or", ")"});
      if (peek().kind != TokKind::kRParen) fail({"and", "or", ")"});
      next();
      return inner;
    }
    return comparison();
  }

  ExprPtr comparison() {
    RefKind ref;
    if (is_keyword("phi")) {
      ref = RefKind::kPhi;
    } else if (is_keyword("val")) {
      ref = RefKind::kVal;
    } else {
      fail({"not", "(", "phi", "val"});
    }
    next();
    if (peek().kind != TokKind::kLParen) fail({"("});
    next();
    if (peek().kind != TokKind::kWord) fail({"an identifier"});
    std::string name = next().text;
    if (peek().kind != TokKind::kRParen) fail({")"});
    next();
    if (peek().kind != TokKind::kCmp) fail({"<", "<=", "=", ">=", ">", "!="});
    CmpOp op = next().op;
    if (peek().kind != TokKind::kNumber) fail({"a number"});
    double literal = next().number;
    return Expr::compare(ref, std::move(name), op, literal);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kOr: return 1;
    case Expr::Kind::kAnd: return 2;
    case Expr::Kind::kNot: return 3;
    case Expr::Kind::kCompare: return 4;
  }
  return 4;
}

void print_expr(const Expr& e, std::string& out) {
  auto child = [&out](const Expr& c, bool parens) {
    if (parens) out += '(';
    print_expr(c, out);
    if (parens) out += ')';
  };
  switch (e.kind) {
    case Expr::Kind::kCompare:
      out += e.ref == RefKind::kPhi ? "phi(" : "val(";
      out += e.name;
      out += ") ";
      out += to_string(e.op);
      out += ' ';
      out += format_number(e.literal);
      break;
    case Expr::Kind::kNot:
      out += "not ";
      child(*e.lhs, precedence(*e.lhs) < 3);
      break;
    case Expr::Kind::kAnd:
    case Expr::Kind::kOr: {
      int p = precedence(e);
      child(*e.lhs, precedence(*e.lhs) < p);
      out += e.kind == Expr::Kind::kAnd ? " and " : " or ";
      child(*e.rhs, precedence(*e.rhs) <= p);
      break;
    }
  }
}

std::string print_result(const Metric& m) {
  return m.is_null() ? std::string("null") : format_number(m.value());
}

}  // namespace

RuleAst parse(std::string_view text) {
  Lexer lexer(text);
  Parser parser(lexer.run());
  return parser.rule();
}

std::string print(const Expr& expr) {
  std::string out;
  print_expr(expr, out);
  return out;
}

std::string print(const RuleAst& ast) {
  std::string out;
  for (std::size_t i = 0; i < ast.clauses.size(); ++i) {
    if (i) out += '\n';
    out += "if ";
    out += print(*ast.clauses[i].condition);
    out += " then ";
    out += print_result(ast.clauses[i].result);
  }
  if (ast.fallback) {
    out += "\nelse ";
    out += print_result(*ast.fallback);
  }
  return out;
}

bool evaluate(const Expr& expr, const Bindings& bindings) {
  switch (expr.kind) {
    case Expr::Kind::kNot:
      return !evaluate(*expr.lhs, bindings);
    case Expr::Kind::kAnd:
      return evaluate(*expr.lhs, bindings) && evaluate(*expr.rhs, bindings);
    case Expr::Kind::kOr:
      return evaluate(*expr.lhs, bindings) || evaluate(*expr.rhs, bindings);
    case Expr::Kind::kCompare:
      break;
  }
  const char* fn = expr.ref == RefKind::kPhi ? "phi" : "val";
  auto it = bindings.find(expr.name);
  std::optional<double> x;
  if (it != bindings.end()) {
    if (expr.ref == RefKind::kPhi) {
      if (it->second.projected) {
        if (it->second.projected->is_null()) return false;
        x = it->second.projected->value();
      }
    } else {
      x = it->second.raw;
    }
  }
  if (!x) {
    throw Error(ErrorCode::kUnboundReference,
                std::string(fn) + "(" + expr.name + ") has no binding");
  }
  const double lit = expr.literal;
  switch (expr.op) {
    case CmpOp::kLt: return *x < lit - kEpsilon;
    case CmpOp::kLe: return *x <= lit + kEpsilon;
    case CmpOp::kEq: return std::abs(*x - lit) <= kEpsilon;
    case CmpOp::kGe: return *x >= lit - kEpsilon;
    case CmpOp::kGt: return *x > lit + kEpsilon;
    case CmpOp::kNe: return std::abs(*x - lit) > kEpsilon;
  }
  return false;
}

Metric evaluate(const RuleAst& ast, const Bindings& bindings) {
  for (const auto& clause : ast.clauses) {
    if (evaluate(*clause.condition, bindings)) return clause.result;
  }
  return ast.fallback.value_or(Metric::null());
}

std::vector<std::pair<RefKind, std::string>> references(const RuleAst& ast) {
  std::vector<std::pair<RefKind, std::string>> out;
  std::function<void(const Expr&)> walk = [&](const Expr& e) {
    if (e.kind == Expr::Kind::kCompare) {
      out.emplace_back(e.ref, e.name);
      return;
    }
    walk(*e.lhs);
    if (e.rhs) walk(*e.rhs);
  };
  for (const auto& clause : ast.clauses) walk(*clause.condition);
  return out;
}

}  // namespace pcmeter::rule
