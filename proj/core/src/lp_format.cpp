// Copyright 2026 The milpeq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "milpeq/lp_format.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "milpeq/sampling.hpp"

namespace milpeq {
namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

struct Token {
  enum class Kind {
    kIdent,
    kNumber,  // integer, decimal, scientific or p/q literal (unsigned)
    kParam,   // ${name}
    kColon,
    kPlus,
    kMinus,
    kRel,
    kEof,
  };
  Kind kind = Kind::kEof;
  std::string text;
  Sense rel = Sense::kEq;
  int line = 1;
  int column = 1;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_cont(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_keyword(std::string_view text) {
  static const std::set<std::string> kw = {
      "minimize", "maximize", "subject", "to",       "bounds",
      "general",  "integers", "binary",  "end",      "free",
      "parameters", "uniform", "discrete"};
  return kw.count(lower(text)) > 0;
}

class Lexer {
 public:
  Lexer(std::string_view text, std::vector<ParseDiagnostic>& diags)
      : text_(text), diags_(diags) {}

  std::vector<Token> lex() {
    std::vector<Token> out;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (static_cast<unsigned char>(c) >= 128) {
        error("non-ASCII byte in input");
        return out;
      }
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        advance(1);
        continue;
      }
      if (c == '\\') {  // comment to end of line
        while (pos_ < text_.size() && text_[pos_] != '\n') advance(1);
        continue;
      }
      Token tok;
      tok.line = line_;
      tok.column = col_;
      if (ident_start(c)) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && ident_cont(text_[pos_])) advance(1);
        tok.kind = Token::Kind::kIdent;
        tok.text = std::string(text_.substr(start, pos_ - start));
      } else if (digit(c) || (c == '.' && pos_ + 1 < text_.size() &&
                              digit(text_[pos_ + 1]))) {
        tok.kind = Token::Kind::kNumber;
        tok.text = lex_number();
      } else if (c == ':') {
        tok.kind = Token::Kind::kColon;
        advance(1);
      } else if (c == '+') {
        tok.kind = Token::Kind::kPlus;
        advance(1);
      } else if (c == '-') {
        tok.kind = Token::Kind::kMinus;
        advance(1);
      } else if (c == '<' || c == '>' || c == '=') {
        tok.kind = Token::Kind::kRel;
        if (c == '=') {
          tok.rel = Sense::kEq;
          advance(1);
        } else if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
          tok.rel = c == '<' ? Sense::kLe : Sense::kGe;
          advance(2);
        } else {
          tok.rel = c == '<' ? Sense::kLt : Sense::kGt;
          advance(1);
        }
      } else if (c == '$') {
        if (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '{') {
          error("malformed parameter placeholder, expected '${name}'");
          return out;
        }
        advance(2);
        std::size_t start = pos_;
        while (pos_ < text_.size() && ident_cont(text_[pos_])) advance(1);
        if (pos_ == start || pos_ >= text_.size() || text_[pos_] != '}') {
          error("malformed parameter placeholder, expected '${name}'");
          return out;
        }
        tok.kind = Token::Kind::kParam;
        tok.text = std::string(text_.substr(start, pos_ - start));
        advance(1);  // '}'
      } else {
        error(std::string("unexpected character '") + c + "'");
        return out;
      }
      out.push_back(std::move(tok));
    }
    Token eof;
    eof.kind = Token::Kind::kEof;
    eof.line = line_;
    eof.column = col_;
    out.push_back(eof);
    return out;
  }

 private:
  void advance(int k) {
    pos_ += k;
    col_ += k;
  }

  // digits[.digits][(e|E)[+-]digits], leading-dot decimals, or p/q with
  // integer p and q.
  std::string lex_number() {
    std::size_t start = pos_;
    bool pure_int = true;
    while (pos_ < text_.size() && digit(text_[pos_])) advance(1);
    if (pos_ < text_.size() && text_[pos_] == '.') {
      pure_int = false;
      advance(1);
      while (pos_ < text_.size() && digit(text_[pos_])) advance(1);
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      int mark_col = col_;
      advance(1);
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
        advance(1);
      if (pos_ < text_.size() && digit(text_[pos_])) {
        pure_int = false;
        while (pos_ < text_.size() && digit(text_[pos_])) advance(1);
      } else {  // not an exponent after all ("2e" followed by an ident?)
        pos_ = mark;
        col_ = mark_col;
      }
    }
    if (pure_int && pos_ + 1 < text_.size() && text_[pos_] == '/' &&
        digit(text_[pos_ + 1])) {
      advance(1);
      while (pos_ < text_.size() && digit(text_[pos_])) advance(1);
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  void error(std::string message) {
    diags_.push_back({line_, col_, Severity::kError, std::move(message)});
  }

  std::string_view text_;
  std::vector<ParseDiagnostic>& diags_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

// A linear combination of a literal and integer multiples of named
// parameters, as accumulated during normalization.
struct SlotSum {
  Rational literal = 0;
  std::map<std::string, long> params;

  void add_literal(const Rational& v, int sign) {
    if (sign > 0)
      literal += v;
    else
      literal -= v;
  }
  void add_param(const std::string& name, int sign) {
    long& mult = params[name];
    mult += sign;
    if (mult == 0) params.erase(name);
  }
  void subtract(const SlotSum& other) {
    literal -= other.literal;
    for (const auto& [name, mult] : other.params) {
      long& m = params[name];
      m -= mult;
      if (m == 0) params.erase(name);
    }
  }
  bool is_zero() const { return literal == 0 && params.empty(); }
  bool is_plain_literal() const { return params.empty(); }
};

// One side of a relation while parsing: ordered variable sums plus a
// constant sum.
struct ExprSide {
  std::vector<std::string> var_order;
  std::unordered_map<std::string, SlotSum> var_sums;
  SlotSum constant;

  SlotSum& var(const std::string& name) {
    auto it = var_sums.find(name);
    if (it == var_sums.end()) {
      var_order.push_back(name);
      return var_sums[name];
    }
    return it->second;
  }
};

struct RowDraft {
  std::string name;
  std::vector<std::pair<std::string, CoeffSlot>> coeffs;  // textual order
  Sense sense = Sense::kLe;
  CoeffSlot rhs;
};

struct VarDecl {
  std::vector<std::pair<Sense, CoeffSlot>> bound_rows;  // entry order
  bool declared_in_bounds = false;
  bool free_mark = false;
  bool integer_mark = false;
  bool binary_mark = false;
};

struct DocumentDraft {
  ObjectiveSense objective_sense = ObjectiveSense::kMinimize;
  std::vector<std::pair<std::string, CoeffSlot>> objective;  // textual order
  std::vector<RowDraft> rows;
  std::vector<std::string> declared_order;  // bounds/kinds first declarations
  std::unordered_map<std::string, VarDecl> decls;
  // template extras
  std::vector<std::string> param_order;  // reference order (pre-remap)
  ParameterSpec spec;                    // declaration order
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, bool template_mode,
         std::vector<ParseDiagnostic>& diags)
      : tokens_(std::move(tokens)), template_mode_(template_mode),
        diags_(diags) {}

  bool parse(DocumentDraft& out) {
    draft_ = &out;
    if (!parse_objective()) return false;
    if (!expect_kw("subject") || !expect_kw("to")) return false;
    while (!failed_ && !at_section() && !at(Token::Kind::kEof)) {
      if (!parse_row()) return false;
    }
    if (at_kw("bounds")) {
      next();
      if (!parse_bounds()) return false;
    }
    while (at_kw("general") || at_kw("integers") || at_kw("binary")) {
      if (!parse_kinds()) return false;
    }
    if (at_kw("parameters")) {
      if (!template_mode_) {
        return fail("parameters section is only allowed in template files");
      }
      next();
      if (!parse_parameters()) return false;
    }
    if (!expect_kw("end")) return false;
    if (!at(Token::Kind::kEof)) return fail("trailing content after End");
    return finalize_params();
  }

 private:
  const Token& peek(int ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  void next() { if (pos_ + 1 < tokens_.size()) ++pos_; }
  bool at(Token::Kind k) const { return peek().kind == k; }
  bool at_kw(std::string_view kw) const {
    return at(Token::Kind::kIdent) && lower(peek().text) == kw;
  }
  bool at_section() const {
    return at_kw("bounds") || at_kw("general") || at_kw("integers") ||
           at_kw("binary") || at_kw("parameters") || at_kw("end");
  }
  bool at_variable() const {
    return at(Token::Kind::kIdent) && !is_keyword(peek().text);
  }
  // An identifier directly followed by ':' is a row label, never a
  // variable use; this is what delimits rows in the otherwise
  // newline-insensitive grammar.
  bool at_variable_use() const {
    return at_variable() && peek(1).kind != Token::Kind::kColon;
  }

  bool fail(std::string message) {
    if (!failed_) {
      diags_.push_back(
          {peek().line, peek().column, Severity::kError, std::move(message)});
    }
    failed_ = true;
    return false;
  }
  void warn(const Token& where, std::string message) {
    diags_.push_back(
        {where.line, where.column, Severity::kWarning, std::move(message)});
  }

  bool expect_kw(std::string_view kw) {
    if (!at_kw(kw)) return fail("expected '" + std::string(kw) + "'");
    next();
    return true;
  }

  std::optional<Rational> token_value(const Token& tok) {
    auto v = try_parse_rational(tok.text);
    if (!v) {
      fail("malformed numeric literal '" + tok.text + "'");
      return std::nullopt;
    }
    return v;
  }

  int param_index(const std::string& name) {
    for (std::size_t i = 0; i < draft_->param_order.size(); ++i)
      if (draft_->param_order[i] == name) return static_cast<int>(i);
    draft_->param_order.push_back(name);
    return static_cast<int>(draft_->param_order.size()) - 1;
  }

  bool at_term_start() const {
    return at(Token::Kind::kNumber) || at(Token::Kind::kParam) ||
           at_variable_use();
  }

  // [sign] term (sign term)*; empty allowed for the objective.
  bool parse_linexpr(ExprSide& side, bool allow_empty) {
    bool first = true;
    for (;;) {
      int sign = 1;
      bool saw_sign = false;
      if (at(Token::Kind::kPlus) || at(Token::Kind::kMinus)) {
        sign = at(Token::Kind::kMinus) ? -1 : 1;
        saw_sign = true;
        next();
      } else if (!first) {
        break;  // terms are separated by signs
      }
      if (!at_term_start()) {
        if (saw_sign) return fail("expected a term after sign");
        if (allow_empty) return true;
        return fail("expected an expression");
      }
      if (!parse_term(side, sign)) return false;
      first = false;
    }
    return true;
  }

  // term := [coeff] var | constant, where coeff/constant may be a
  // parameter placeholder in template mode.
  bool parse_term(ExprSide& side, int sign) {
    if (at(Token::Kind::kNumber)) {
      Token num = peek();
      next();
      auto value = token_value(num);
      if (!value) return false;
      if (at_variable_use()) {
        std::string var = peek().text;
        next();
        side.var(var).add_literal(*value, sign);
      } else {
        side.constant.add_literal(*value, sign);
      }
      return true;
    }
    if (at(Token::Kind::kParam)) {
      if (!template_mode_)
        return fail("parameter placeholders are only allowed in templates");
      std::string pname = peek().text;
      next();
      (void)param_index(pname);
      if (at_variable_use()) {
        std::string var = peek().text;
        next();
        side.var(var).add_param(pname, sign);
      } else {
        side.constant.add_param(pname, sign);
      }
      return true;
    }
    if (at_variable_use()) {
      std::string var = peek().text;
      next();
      side.var(var).add_literal(1, sign);
      return true;
    }
    return false;
  }

  // Collapses a normalized sum to a slot: a plain literal, or exactly one
  // parameter with multiplier +-1 and no literal part.
  std::optional<CoeffSlot> to_slot(const SlotSum& sum, const Token& where) {
    if (sum.is_plain_literal()) return CoeffSlot::of_literal(sum.literal);
    if (sum.params.size() == 1 && sum.literal == 0) {
      const auto& [name, mult] = *sum.params.begin();
      if (mult == 1 || mult == -1) {
        return CoeffSlot::of_parameter(param_index(name),
                                       static_cast<int>(mult));
      }
    }
    fail("unsupported parameter arithmetic; a coefficient or right-hand "
         "side must stay a single literal or one (possibly negated) "
         "parameter after normalization");
    (void)where;
    return std::nullopt;
  }

  bool parse_objective() {
    if (at_kw("minimize")) {
      draft_->objective_sense = ObjectiveSense::kMinimize;
    } else if (at_kw("maximize")) {
      draft_->objective_sense = ObjectiveSense::kMaximize;
    } else {
      return fail("expected 'Minimize' or 'Maximize'");
    }
    next();
    if (at_variable() && peek(1).kind == Token::Kind::kColon) {
      next();  // objective name, display only
      next();
    }
    Token start = peek();
    ExprSide side;
    if (!parse_linexpr(side, /*allow_empty=*/true)) return false;
    if (!side.constant.is_zero())
      return fail("constant term in objective is not representable");
    for (const std::string& var : side.var_order) {
      const SlotSum& sum = side.var_sums[var];
      if (sum.is_zero()) {
        warn(start, "objective term for '" + var +
                        "' has zero coefficient and was dropped");
        continue;
      }
      auto slot = to_slot(sum, start);
      if (!slot) return false;
      draft_->objective.emplace_back(var, *slot);
    }
    return true;
  }

  bool parse_row() {
    RowDraft row;
    Token start = peek();
    if (at_variable() && peek(1).kind == Token::Kind::kColon) {
      row.name = peek().text;
      if (!row_names_.insert(row.name).second)
        warn(peek(), "duplicate constraint name '" + row.name + "'");
      next();
      next();
    }
    ExprSide lhs, rhs;
    if (!parse_linexpr(lhs, /*allow_empty=*/false)) return false;
    if (!at(Token::Kind::kRel)) return fail("expected a relation");
    row.sense = peek().rel;
    next();
    if (!parse_linexpr(rhs, /*allow_empty=*/false)) return false;
    if (at(Token::Kind::kRel))
      return fail("ranged constraints are not supported");

    // variables left, constants right
    for (const std::string& var : rhs.var_order) lhs.var(var);
    for (auto& [var, sum] : lhs.var_sums) {
      auto it = rhs.var_sums.find(var);
      if (it != rhs.var_sums.end()) sum.subtract(it->second);
    }
    SlotSum rhs_sum = rhs.constant;
    rhs_sum.subtract(lhs.constant);

    for (const std::string& var : lhs.var_order) {
      const SlotSum& sum = lhs.var_sums[var];
      if (sum.is_zero()) {
        warn(start, "zero coefficient for '" + var + "' dropped in row" +
                        (row.name.empty() ? "" : " '" + row.name + "'"));
        continue;
      }
      auto slot = to_slot(sum, start);
      if (!slot) return false;
      row.coeffs.emplace_back(var, *slot);
    }
    if (row.coeffs.empty())
      return fail("constraint has no variables after normalization");
    auto rhs_slot = to_slot(rhs_sum, start);
    if (!rhs_slot) return false;
    row.rhs = *rhs_slot;
    draft_->rows.push_back(std::move(row));
    return true;
  }

  VarDecl& declare(const std::string& name) {
    auto it = draft_->decls.find(name);
    if (it == draft_->decls.end()) {
      draft_->declared_order.push_back(name);
      return draft_->decls[name];
    }
    return it->second;
  }

  // [sign] number-or-parameter, as used in bounds and parameter sections.
  std::optional<CoeffSlot> parse_value() {
    int sign = 1;
    if (at(Token::Kind::kPlus) || at(Token::Kind::kMinus)) {
      sign = at(Token::Kind::kMinus) ? -1 : 1;
      next();
    }
    if (at(Token::Kind::kNumber)) {
      Token num = peek();
      next();
      auto value = token_value(num);
      if (!value) return std::nullopt;
      return CoeffSlot::of_literal(sign > 0 ? *value : Rational(-*value));
    }
    if (at(Token::Kind::kParam)) {
      if (!template_mode_) {
        fail("parameter placeholders are only allowed in templates");
        return std::nullopt;
      }
      std::string pname = peek().text;
      next();
      return CoeffSlot::of_parameter(param_index(pname), sign);
    }
    fail("expected a numeric value");
    return std::nullopt;
  }

  static Sense flipped(Sense s) {
    switch (s) {
      case Sense::kLe: return Sense::kGe;
      case Sense::kGe: return Sense::kLe;
      case Sense::kLt: return Sense::kGt;
      case Sense::kGt: return Sense::kLt;
      case Sense::kEq: return Sense::kEq;
    }
    return s;
  }

  bool at_value_start() const {
    return at(Token::Kind::kNumber) || at(Token::Kind::kParam) ||
           at(Token::Kind::kPlus) || at(Token::Kind::kMinus);
  }

  bool parse_bounds() {
    while (!at_section() && !at(Token::Kind::kEof)) {
      if (at_variable()) {
        std::string var = peek().text;
        next();
        VarDecl& decl = declare(var);
        decl.declared_in_bounds = true;
        if (at_kw("free")) {
          next();
          decl.free_mark = true;
          continue;
        }
        if (!at(Token::Kind::kRel)) return fail("expected relation or 'free'");
        Sense rel = peek().rel;
        next();
        auto value = parse_value();
        if (!value) return false;
        decl.bound_rows.emplace_back(rel, *value);
        continue;
      }
      if (at_value_start()) {
        auto lo = parse_value();
        if (!lo) return false;
        if (!at(Token::Kind::kRel)) return fail("expected a relation");
        Sense rel1 = peek().rel;
        next();
        if (!at_variable()) return fail("expected a variable name");
        std::string var = peek().text;
        next();
        VarDecl& decl = declare(var);
        decl.declared_in_bounds = true;
        decl.bound_rows.emplace_back(flipped(rel1), *lo);
        if (at(Token::Kind::kRel)) {  // val rel var rel val
          Sense rel2 = peek().rel;
          next();
          auto hi = parse_value();
          if (!hi) return false;
          decl.bound_rows.emplace_back(rel2, *hi);
        }
        continue;
      }
      return fail("malformed bounds entry");
    }
    return true;
  }

  bool parse_kinds() {
    bool binary = at_kw("binary");
    next();
    int count = 0;
    while (at_variable()) {
      VarDecl& decl = declare(peek().text);
      decl.integer_mark = true;
      if (binary) decl.binary_mark = true;
      next();
      ++count;
    }
    if (count == 0) return fail("expected at least one variable name");
    return true;
  }

  bool parse_parameters() {
    while (at_variable()) {
      std::string name = peek().text;
      Token where = peek();
      next();
      if (draft_->spec.index_of(name) >= 0)
        return fail("parameter '" + name + "' declared twice");
      ParamDistribution dist;
      if (at_kw("uniform")) {
        next();
        dist.kind = ParamDistribution::Kind::kContinuousUniform;
        auto lo = parse_value();
        if (!lo) return false;
        auto hi = parse_value();
        if (!hi) return false;
        if (lo->is_param() || hi->is_param())
          return fail("distribution endpoints must be literals");
        dist.lo = lo->literal;
        dist.hi = hi->literal;
        if (!(dist.lo < dist.hi))
          return fail("uniform distribution needs lo < hi");
      } else if (at_kw("discrete")) {
        next();
        dist.kind = ParamDistribution::Kind::kDiscreteUniform;
        while (at_value_start()) {
          auto v = parse_value();
          if (!v) return false;
          if (v->is_param())
            return fail("distribution values must be literals");
          dist.values.push_back(v->literal);
        }
        if (dist.values.empty())
          return fail("discrete distribution needs at least one value");
        auto sorted = dist.values;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
          return fail("discrete distribution values must be distinct");
      } else {
        return fail("expected 'uniform' or 'discrete'");
      }
      (void)where;
      draft_->spec.names.push_back(name);
      draft_->spec.distributions.push_back(std::move(dist));
    }
    return true;
  }

  // Remaps parameter references from first-use order to declaration order
  // and checks declared <-> referenced both ways.
  bool finalize_params() {
    if (!template_mode_) return true;
    std::vector<int> remap(draft_->param_order.size(), -1);
    for (std::size_t i = 0; i < draft_->param_order.size(); ++i) {
      int idx = draft_->spec.index_of(draft_->param_order[i]);
      if (idx < 0)
        return fail("parameter '" + draft_->param_order[i] +
                    "' is referenced but never declared");
      remap[i] = idx;
    }
    std::vector<bool> referenced(draft_->spec.names.size(), false);
    auto fix = [&](CoeffSlot& slot) {
      if (slot.is_param()) {
        slot.param = remap[slot.param];
        referenced[slot.param] = true;
      }
    };
    for (auto& [var, slot] : draft_->objective) fix(slot);
    for (auto& row : draft_->rows) {
      for (auto& [var, slot] : row.coeffs) fix(slot);
      fix(row.rhs);
    }
    for (auto& [var, decl] : draft_->decls)
      for (auto& [sense, slot] : decl.bound_rows) fix(slot);
    for (std::size_t i = 0; i < referenced.size(); ++i) {
      if (!referenced[i])
        return fail("parameter '" + draft_->spec.names[i] +
                    "' is declared but never referenced");
    }
    return true;
  }

  std::vector<Token> tokens_;
  bool template_mode_;
  std::vector<ParseDiagnostic>& diags_;
  DocumentDraft* draft_ = nullptr;
  std::size_t pos_ = 0;
  bool failed_ = false;
  std::unordered_set<std::string> row_names_;
};

// ---------------------------------------------------------------------------
// Draft -> template (index assignment and bound materialization)
// ---------------------------------------------------------------------------

// Variable indices: declarations first (Bounds entries, then the kinds
// sections, in textual order), then objective mentions, then row mentions.
// Declarations outrank structural mentions so that a writer listing every
// variable in Bounds pins the index order outright; that is what makes
// write/parse round-trips index-exact for arbitrary instances.
ModelTemplate build_template(DocumentDraft& draft) {
  ModelTemplate t;
  t.objective_sense = draft.objective_sense;
  t.parameter_names = draft.spec.names;

  std::unordered_map<std::string, int> index;
  std::vector<std::string> names;
  auto register_var = [&](const std::string& name) {
    auto [it, inserted] = index.emplace(name, static_cast<int>(names.size()));
    if (inserted) names.push_back(name);
    return it->second;
  };

  for (const std::string& name : draft.declared_order) register_var(name);
  for (const auto& [var, slot] : draft.objective) register_var(var);
  for (const auto& row : draft.rows)
    for (const auto& [var, slot] : row.coeffs) register_var(var);

  t.num_vars = static_cast<int>(names.size());
  t.var_names = names;
  t.objective.assign(t.num_vars, CoeffSlot::of_literal(0));
  for (const auto& [var, slot] : draft.objective) t.objective[index[var]] = slot;
  t.var_kinds.assign(t.num_vars, VarKind::kContinuous);
  for (const auto& [name, decl] : draft.decls) {
    if (decl.integer_mark) t.var_kinds[index[name]] = VarKind::kInteger;
  }

  for (const RowDraft& rd : draft.rows) {
    TemplateRow row;
    row.sense = rd.sense;
    row.rhs = rd.rhs;
    for (const auto& [var, slot] : rd.coeffs)
      row.coeffs.emplace_back(index[var], slot);
    std::sort(row.coeffs.begin(), row.coeffs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    t.rows.push_back(std::move(row));
    t.row_names.push_back(rd.name);
  }

  // Bound rows, grouped by variable in index order: explicit entries
  // first, then the binary 0/1 pair, then the implicit x >= 0 default.
  for (int j = 0; j < t.num_vars; ++j) {
    auto it = draft.decls.find(names[j]);
    const VarDecl* decl = it == draft.decls.end() ? nullptr : &it->second;
    auto push_bound = [&](Sense sense, CoeffSlot rhs) {
      TemplateRow row;
      row.coeffs.emplace_back(j, CoeffSlot::of_literal(1));
      row.sense = sense;
      row.rhs = std::move(rhs);
      t.rows.push_back(std::move(row));
      t.row_names.emplace_back();
    };
    if (decl) {
      for (const auto& [sense, value] : decl->bound_rows)
        push_bound(sense, value);
      if (decl->binary_mark) {
        push_bound(Sense::kGe, CoeffSlot::of_literal(0));
        push_bound(Sense::kLe, CoeffSlot::of_literal(1));
      } else if (!decl->declared_in_bounds) {
        push_bound(Sense::kGe, CoeffSlot::of_literal(0));
      }
    } else {
      push_bound(Sense::kGe, CoeffSlot::of_literal(0));
    }
  }
  return t;
}

Instance template_to_instance(const ModelTemplate& t,
                              std::vector<ParseDiagnostic>& diags) {
  Instance inst;
  inst.objective_sense = t.objective_sense;
  inst.num_vars = t.num_vars;
  inst.var_kinds = t.var_kinds;
  inst.var_names = t.var_names;
  inst.row_names = t.row_names;
  inst.objective.reserve(t.num_vars);
  for (const CoeffSlot& slot : t.objective) inst.objective.push_back(slot.literal);
  for (const TemplateRow& trow : t.rows) {
    ConstraintRow row;
    row.sense = trow.sense;
    row.rhs = trow.rhs.literal;
    for (const auto& [j, slot] : trow.coeffs)
      row.coeffs.emplace_back(j, slot.literal);
    inst.rows.push_back(std::move(row));
  }
  for (const Violation& v : validate_instance(inst)) {
    diags.push_back({0, 0, Severity::kError, "invalid instance: " + v.message});
  }
  return inst;
}

}  // namespace

LpDocument parse_lp(std::string_view text) {
  LpDocument doc;
  Lexer lexer(text, doc.diagnostics);
  std::vector<Token> tokens = lexer.lex();
  for (const auto& d : doc.diagnostics)
    if (d.severity == Severity::kError) return doc;

  DocumentDraft draft;
  Parser parser(std::move(tokens), /*template_mode=*/false, doc.diagnostics);
  if (!parser.parse(draft)) return doc;

  ModelTemplate t = build_template(draft);
  Instance inst = template_to_instance(t, doc.diagnostics);
  for (const auto& d : doc.diagnostics)
    if (d.severity == Severity::kError) return doc;
  doc.instance = std::move(inst);
  return doc;
}

TemplateDocument parse_template(std::string_view text) {
  TemplateDocument doc;
  Lexer lexer(text, doc.diagnostics);
  std::vector<Token> tokens = lexer.lex();
  for (const auto& d : doc.diagnostics)
    if (d.severity == Severity::kError) return doc;

  DocumentDraft draft;
  Parser parser(std::move(tokens), /*template_mode=*/true, doc.diagnostics);
  if (!parser.parse(draft)) return doc;

  doc.spec = draft.spec;
  doc.model = build_template(draft);
  return doc;
}

// ---------------------------------------------------------------------------
// Writer
// ---------------------------------------------------------------------------

namespace {

bool valid_identifier(const std::string& name) {
  if (name.empty() || is_keyword(name) || !ident_start(name[0])) return false;
  return std::all_of(name.begin(), name.end(), ident_cont);
}

std::vector<std::string> display_names(const std::vector<std::string>& names,
                                       std::size_t count, char prefix) {
  bool usable = names.size() == count;
  if (usable) {
    std::unordered_set<std::string> seen;
    for (const std::string& name : names) {
      if (!valid_identifier(name) || !seen.insert(name).second) {
        usable = false;
        break;
      }
    }
  }
  if (usable) return names;
  std::vector<std::string> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = prefix + std::to_string(i);
  return out;
}

void append_term(std::ostringstream& os, bool first, const Rational& coeff,
                 const std::string& name) {
  bool negative = coeff < 0;
  if (first) {
    if (negative) os << "- ";
  } else {
    os << (negative ? " - " : " + ");
  }
  Rational magnitude = negative ? Rational(-coeff) : coeff;
  if (magnitude != 1) os << format_rational(magnitude) << " ";
  os << name;
}

void append_value(std::ostringstream& os, const Rational& value) {
  if (value < 0)
    os << "- " << format_rational(Rational(-value));
  else
    os << format_rational(value);
}

}  // namespace

std::string write_lp(const Instance& inst) {
  auto violations = validate_instance(inst);
  if (!violations.empty())
    throw std::invalid_argument("cannot write invalid instance: " +
                                violations.front().message);

  std::vector<std::string> vars =
      display_names(inst.var_names, inst.num_vars, 'x');
  std::vector<std::string> rows =
      display_names(inst.row_names, inst.rows.size(), 'r');

  std::ostringstream os;
  os << (inst.objective_sense == ObjectiveSense::kMinimize ? "Minimize"
                                                           : "Maximize")
     << "\n obj:";
  bool first = true;
  for (int j = 0; j < inst.num_vars; ++j) {
    if (inst.objective[j] == 0) continue;
    if (first) os << " ";
    append_term(os, first, inst.objective[j], vars[j]);
    first = false;
  }
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < inst.rows.size(); ++i) {
    const ConstraintRow& row = inst.rows[i];
    os << " " << rows[i] << ": ";
    bool row_first = true;
    for (const auto& [j, coeff] : row.coeffs) {
      append_term(os, row_first, coeff, vars[j]);
      row_first = false;
    }
    os << " " << to_string(row.sense) << " ";
    append_value(os, row.rhs);
    os << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < inst.num_vars; ++j) os << " " << vars[j] << " free\n";
  bool any_integer = std::any_of(
      inst.var_kinds.begin(), inst.var_kinds.end(),
      [](VarKind kind) { return kind == VarKind::kInteger; });
  if (any_integer) {
    os << "General\n";
    for (int j = 0; j < inst.num_vars; ++j)
      if (inst.var_kinds[j] == VarKind::kInteger) os << " " << vars[j] << "\n";
  }
  os << "End\n";
  return os.str();
}

}  // namespace milpeq
