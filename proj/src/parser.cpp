#include "stocs/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace stocs {

std::string ParseError::to_string() const {
  std::string out = std::to_string(line) + ":" + std::to_string(col) + ": " + message;
  if (!expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out += ", ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}

std::string format_diagnostic(const std::string& file, const Diagnostic& d) {
  return file + ":" + std::to_string(d.line) + ":" + std::to_string(d.col) + ": " + d.severity +
         ": " + d.message;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
  ident, integer, real, string,
  kw_attributes, kw_rates, kw_proc, kw_component, kw_interface, kw_knowledge, kw_process,
  kw_nil, kw_put, kw_get, kw_qry, kw_self, kw_tt, kw_field, kw_count,
  semi, comma, eq, ne, lt, le, gt, ge, plus, minus, star, bar, bang, amp_amp, bar_bar,
  lparen, rparen, lbrace, rbrace, langle, rangle, at, dot, question, end
};

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::int64_t int_val = 0;
  double real_val = 0.0;
  int line = 1, col = 1;
};

const std::map<std::string, Tok> kKeywords = {
    {"attributes", Tok::kw_attributes}, {"rates", Tok::kw_rates},
    {"proc", Tok::kw_proc},             {"component", Tok::kw_component},
    {"interface", Tok::kw_interface},   {"knowledge", Tok::kw_knowledge},
    {"process", Tok::kw_process},       {"nil", Tok::kw_nil},
    {"put", Tok::kw_put},               {"get", Tok::kw_get},
    {"qry", Tok::kw_qry},               {"self", Tok::kw_self},
    {"tt", Tok::kw_tt},                 {"field", Tok::kw_field},
    {"count", Tok::kw_count}};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::end) break;
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseErrorException(ParseError{line_, col_, msg, {}});
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char peek2() const { return pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0'; }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    for (;;) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '#') {
        while (pos_ < text_.size() && peek() != '\n') advance();
        continue;
      }
      return;
    }
  }

  Token next() {
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= text_.size()) return t;
    char c = peek();

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
        ident += advance();
      auto kw = kKeywords.find(ident);
      t.kind = kw == kKeywords.end() ? Tok::ident : kw->second;
      t.text = std::move(ident);
      return t;
    }

    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(t, false);

    if (c == '"') {
      advance();
      std::string s;
      while (pos_ < text_.size() && peek() != '"') {
        char d = advance();
        if (d == '\\' && pos_ < text_.size()) d = advance();
        s += d;
      }
      if (pos_ >= text_.size()) fail("unterminated string literal");
      advance();
      t.kind = Tok::string;
      t.text = std::move(s);
      return t;
    }

    advance();
    switch (c) {
      case ';': t.kind = Tok::semi; return t;
      case ',': t.kind = Tok::comma; return t;
      case '+': t.kind = Tok::plus; return t;
      case '*': t.kind = Tok::star; return t;
      case '(': t.kind = Tok::lparen; return t;
      case ')': t.kind = Tok::rparen; return t;
      case '{': t.kind = Tok::lbrace; return t;
      case '}': t.kind = Tok::rbrace; return t;
      case '@': t.kind = Tok::at; return t;
      case '.': t.kind = Tok::dot; return t;
      case '?': t.kind = Tok::question; return t;
      case '-':
        if (std::isdigit(static_cast<unsigned char>(peek()))) return lex_number(t, true);
        t.kind = Tok::minus;
        return t;
      case '=':
        if (peek() == '=') advance();
        t.kind = Tok::eq;
        return t;
      case '!':
        if (peek() == '=') {
          advance();
          t.kind = Tok::ne;
        } else {
          t.kind = Tok::bang;
        }
        return t;
      case '<':
        if (peek() == '=') {
          advance();
          t.kind = Tok::le;
        } else {
          t.kind = Tok::langle;  // doubles as comparison in expression context
        }
        return t;
      case '>':
        if (peek() == '=') {
          advance();
          t.kind = Tok::ge;
        } else {
          t.kind = Tok::rangle;
        }
        return t;
      case '&':
        if (peek() == '&') {
          advance();
          t.kind = Tok::amp_amp;
          return t;
        }
        fail("stray '&'");
      case '|':
        if (peek() == '|') {
          advance();
          t.kind = Tok::bar_bar;
        } else {
          t.kind = Tok::bar;
        }
        return t;
      default:
        fail(std::string("unexpected character '") + c + "'");
    }
  }

  Token lex_number(Token t, bool negative) {
    std::string digits = negative ? "-" : "";
    bool is_real = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(peek())))
      digits += advance();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek2()))) {
      is_real = true;
      digits += advance();
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(peek())))
        digits += advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      is_real = true;
      digits += advance();
      if (peek() == '+' || peek() == '-') digits += advance();
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(peek())))
        digits += advance();
    }
    if (is_real) {
      t.kind = Tok::real;
      t.real_val = std::strtod(digits.c_str(), nullptr);
    } else {
      t.kind = Tok::integer;
      t.int_val = std::strtoll(digits.c_str(), nullptr, 10);
    }
    t.text = std::move(digits);
    return t;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(const std::string& text) : tokens_(Lexer(text).run()) {}

  ModelFile parse_model_file() {
    ModelFile m;
    std::set<std::string> proc_names;
    while (!at(Tok::end)) {
      if (at(Tok::kw_attributes)) {
        advance();
        m.attributes.push_back(expect_ident("attribute name"));
        while (accept(Tok::comma)) m.attributes.push_back(expect_ident("attribute name"));
        expect(Tok::semi, ";");
      } else if (at(Tok::kw_rates)) {
        advance();
        Token t = expect(Tok::string, "configuration path string");
        m.rates_path = t.text;
        expect(Tok::semi, ";");
      } else if (at(Tok::kw_proc)) {
        Token kw = advance_token();
        ProcDecl decl;
        decl.line = kw.line;
        decl.col = kw.col;
        decl.name = expect_ident("process name");
        if (!proc_names.insert(decl.name).second)
          fail_at(kw, "duplicate definition of process '" + decl.name + "'");
        if (accept(Tok::lparen)) {
          if (!at(Tok::rparen)) {
            decl.def.params.push_back(expect_ident("parameter name"));
            while (accept(Tok::comma)) decl.def.params.push_back(expect_ident("parameter name"));
          }
          expect(Tok::rparen, ")");
        }
        expect(Tok::eq, "=");
        decl.def.body = parse_process();
        expect(Tok::semi, ";");
        m.procs.push_back(std::move(decl));
      } else if (at(Tok::kw_component)) {
        m.components.push_back(parse_component());
      } else {
        fail_here("declaration expected", {"attributes", "rates", "proc", "component"});
      }
    }
    return m;
  }

  ProcessRef parse_process_entry() {
    ProcessRef p = parse_process();
    expect(Tok::end, "end of input");
    return p;
  }

  PredicateRef parse_predicate_entry() {
    PredicateRef p = parse_predicate();
    expect(Tok::end, "end of input");
    return p;
  }

 private:
  const Token& cur() const { return tokens_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }

  Token advance_token() { return tokens_[pos_++]; }
  void advance() { ++pos_; }

  bool accept(Tok k) {
    if (at(k)) {
      advance();
      return true;
    }
    return false;
  }

  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail_here("unexpected token '" + describe(cur()) + "'", {what});
    return advance_token();
  }

  std::string expect_ident(const std::string& what) { return expect(Tok::ident, what).text; }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::end: return "end of input";
      case Tok::string: return "\"" + t.text + "\"";
      default: return t.text.empty() ? "?" : t.text;
    }
  }

  [[noreturn]] void fail_here(const std::string& msg, std::vector<std::string> expected = {}) {
    throw ParseErrorException(ParseError{cur().line, cur().col, msg, std::move(expected)});
  }

  [[noreturn]] void fail_at(const Token& t, const std::string& msg) {
    throw ParseErrorException(ParseError{t.line, t.col, msg, {}});
  }

  // --- components ---

  ComponentDecl parse_component() {
    Token kw = expect(Tok::kw_component, "component");
    ComponentDecl c;
    c.line = kw.line;
    c.col = kw.col;
    c.name = expect_ident("component name");
    if (accept(Tok::star)) {
      Token n = expect(Tok::integer, "replication count");
      c.count = static_cast<int>(n.int_val);
      if (c.count < 1) fail_at(n, "replication count must be at least 1");
    }
    expect(Tok::lbrace, "{");
    bool have_process = false;
    while (!accept(Tok::rbrace)) {
      if (at(Tok::kw_interface)) {
        advance();
        expect(Tok::lbrace, "{");
        while (!accept(Tok::rbrace)) {
          InterfaceRuleDecl rule;
          rule.line = cur().line;
          rule.col = cur().col;
          rule.attr = expect_ident("attribute name");
          expect(Tok::eq, "=");
          rule.rule = parse_interface_rule();
          expect(Tok::semi, ";");
          c.interface.push_back(std::move(rule));
        }
      } else if (at(Tok::kw_knowledge)) {
        advance();
        expect(Tok::lbrace, "{");
        while (!accept(Tok::rbrace)) {
          c.knowledge.push_back(parse_ground_tuple());
          expect(Tok::semi, ";");
        }
      } else if (at(Tok::kw_process)) {
        advance();
        c.process = parse_process();
        expect(Tok::semi, ";");
        have_process = true;
      } else {
        fail_here("component member expected", {"interface", "knowledge", "process"});
      }
    }
    if (!have_process) c.process = make_nil();
    return c;
  }

  AttributeRule parse_interface_rule() {
    AttributeRule rule;
    if (at(Tok::kw_field)) {
      advance();
      expect(Tok::lparen, "(");
      rule.kind = AttributeRule::Kind::field;
      rule.tag = expect(Tok::string, "tuple tag string").text;
      expect(Tok::comma, ",");
      Token idx = expect(Tok::integer, "field index");
      if (idx.int_val < 0) fail_at(idx, "field index must be non-negative");
      rule.index = static_cast<std::size_t>(idx.int_val);
      expect(Tok::rparen, ")");
      return rule;
    }
    if (at(Tok::kw_count)) {
      advance();
      expect(Tok::lparen, "(");
      rule.kind = AttributeRule::Kind::count;
      rule.tag = expect(Tok::string, "tuple tag string").text;
      expect(Tok::rparen, ")");
      return rule;
    }
    rule.kind = AttributeRule::Kind::constant;
    rule.constant = parse_literal("interface constant");
    return rule;
  }

  // --- literals and tuples ---

  Value parse_literal(const std::string& what) {
    if (at(Tok::string)) return Value{advance_token().text};
    if (at(Tok::integer)) return Value{advance_token().int_val};
    if (at(Tok::real)) return Value{advance_token().real_val};
    fail_here("literal expected", {what});
  }

  Item parse_ground_tuple() {
    expect(Tok::langle, "<");
    Item item;
    if (!at(Tok::rangle)) {
      item.fields.push_back(parse_literal("tuple field"));
      while (accept(Tok::comma)) item.fields.push_back(parse_literal("tuple field"));
    }
    expect(Tok::rangle, ">");
    return item;
  }

  Tuple parse_tuple(bool allow_formals) {
    expect(Tok::langle, "<");
    Tuple t;
    auto field = [&]() -> TupleField {
      if (at(Tok::question)) {
        Token q = advance_token();
        if (!allow_formals) fail_at(q, "formal fields are only allowed in get/qry templates");
        return TupleField::formal(expect_ident("formal name"));
      }
      if (at(Tok::ident)) return TupleField::var(advance_token().text);
      return TupleField::value_field(parse_literal("tuple field"));
    };
    if (!at(Tok::rangle)) {
      t.fields.push_back(field());
      while (accept(Tok::comma)) t.fields.push_back(field());
    }
    expect(Tok::rangle, ">");
    return t;
  }

  // --- processes ---

  ProcessRef parse_process() {
    ProcessRef p = parse_parallel();
    while (accept(Tok::plus)) p = make_choice(p, parse_parallel());
    return p;
  }

  ProcessRef parse_parallel() {
    ProcessRef p = parse_primary();
    while (accept(Tok::bar)) p = make_parallel(p, parse_primary());
    return p;
  }

  ProcessRef parse_primary() {
    if (accept(Tok::kw_nil)) return make_nil();
    if (at(Tok::kw_put) || at(Tok::kw_get) || at(Tok::kw_qry)) {
      Action a = parse_action();
      expect(Tok::dot, ".");
      return make_prefix(std::move(a), parse_primary());
    }
    if (at(Tok::ident)) {
      std::string name = advance_token().text;
      std::vector<TupleField> args;
      if (accept(Tok::lparen)) {
        if (!at(Tok::rparen)) {
          args.push_back(parse_call_arg());
          while (accept(Tok::comma)) args.push_back(parse_call_arg());
        }
        expect(Tok::rparen, ")");
      }
      return make_call(std::move(name), std::move(args));
    }
    if (accept(Tok::lparen)) {
      ProcessRef p = parse_process();
      expect(Tok::rparen, ")");
      return p;
    }
    fail_here("process expected", {"nil", "put", "get", "qry", "name", "("});
  }

  TupleField parse_call_arg() {
    if (at(Tok::ident)) return TupleField::var(advance_token().text);
    return TupleField::value_field(parse_literal("argument"));
  }

  Action parse_action() {
    Action a;
    if (accept(Tok::kw_put))
      a.kind = ActionKind::put;
    else if (accept(Tok::kw_get))
      a.kind = ActionKind::get;
    else {
      expect(Tok::kw_qry, "qry");
      a.kind = ActionKind::qry;
    }
    expect(Tok::lparen, "(");
    a.payload = parse_tuple(a.kind != ActionKind::put);
    expect(Tok::rparen, ")");
    expect(Tok::at, "@");
    if (accept(Tok::kw_self)) {
      a.target = Target::self_target();
    } else {
      expect(Tok::lparen, "(");
      a.target = Target::predicate(parse_predicate());
      expect(Tok::rparen, ")");
    }
    return a;
  }

  // --- predicates and expressions ---

  PredicateRef parse_predicate() {
    PredicateRef p = parse_pred_and();
    while (accept(Tok::bar_bar)) p = pred_or(p, parse_pred_and());
    return p;
  }

  PredicateRef parse_pred_and() {
    PredicateRef p = parse_pred_not();
    while (accept(Tok::amp_amp)) p = pred_and(p, parse_pred_not());
    return p;
  }

  PredicateRef parse_pred_not() {
    if (accept(Tok::bang)) return pred_not(parse_pred_not());
    if (accept(Tok::kw_tt)) return pred_true();
    if (at(Tok::lparen)) {
      // could be a parenthesized predicate or a parenthesized expression
      // starting a comparison; try the predicate reading first
      std::size_t save = pos_;
      advance();
      try {
        PredicateRef p = parse_predicate();
        expect(Tok::rparen, ")");
        if (is_cmp_token(cur().kind) || at(Tok::plus) || at(Tok::minus) || at(Tok::star))
          throw ParseErrorException(ParseError{cur().line, cur().col, "expression context", {}});
        return p;
      } catch (const ParseErrorException&) {
        pos_ = save;
      }
    }
    return parse_comparison();
  }

  static bool is_cmp_token(Tok k) {
    return k == Tok::langle || k == Tok::le || k == Tok::rangle || k == Tok::ge || k == Tok::eq ||
           k == Tok::ne;
  }

  PredicateRef parse_comparison() {
    ExprRef lhs = parse_expr();
    CmpOp op;
    switch (cur().kind) {
      case Tok::langle: op = CmpOp::lt; break;
      case Tok::le: op = CmpOp::le; break;
      case Tok::rangle: op = CmpOp::gt; break;
      case Tok::ge: op = CmpOp::ge; break;
      case Tok::eq: op = CmpOp::eq; break;
      case Tok::ne: op = CmpOp::ne; break;
      default:
        fail_here("comparison operator expected", {"<", "<=", ">", ">=", "=", "!="});
    }
    advance();
    return pred_compare(std::move(lhs), op, parse_expr());
  }

  ExprRef parse_expr() {
    ExprRef e = parse_term();
    for (;;) {
      if (accept(Tok::plus))
        e = expr_binary('+', e, parse_term());
      else if (accept(Tok::minus))
        e = expr_binary('-', e, parse_term());
      else
        return e;
    }
  }

  ExprRef parse_term() {
    ExprRef e = parse_factor();
    while (accept(Tok::star)) e = expr_binary('*', e, parse_factor());
    return e;
  }

  ExprRef parse_factor() {
    if (at(Tok::ident)) return expr_name(advance_token().text);
    if (at(Tok::string) || at(Tok::integer) || at(Tok::real))
      return expr_literal(parse_literal("value"));
    if (accept(Tok::lparen)) {
      ExprRef e = parse_expr();
      expect(Tok::rparen, ")");
      return e;
    }
    fail_here("expression expected", {"value", "name", "("});
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

DefinitionsTable ModelFile::defs() const {
  DefinitionsTable table;
  for (const auto& p : procs) table.emplace(p.name, p.def);
  return table;
}

ModelFile parse_model(const std::string& text) { return Parser(text).parse_model_file(); }

std::optional<ModelFile> try_parse_model(const std::string& text, ParseError* error) {
  try {
    return parse_model(text);
  } catch (const ParseErrorException& e) {
    if (error) *error = e.error;
    return std::nullopt;
  }
}

ProcessRef parse_process_text(const std::string& text, const std::string&) {
  return Parser(text).parse_process_entry();
}

PredicateRef parse_predicate_text(const std::string& text) {
  return Parser(text).parse_predicate_entry();
}

// ---------------------------------------------------------------------------
// Static checks
// ---------------------------------------------------------------------------

namespace {

void unguarded_calls(const ProcessRef& p, std::set<std::string>& out) {
  switch (p->kind) {
    case Process::Kind::inert:
    case Process::Kind::prefix:  // calls below a prefix are guarded
    case Process::Kind::envelope:
      return;
    case Process::Kind::choice:
    case Process::Kind::parallel:
      unguarded_calls(p->left, out);
      unguarded_calls(p->right, out);
      return;
    case Process::Kind::call:
      out.insert(p->call_name);
      return;
  }
}

bool reaches_unguarded(const std::string& from, const std::string& target,
                       const std::map<std::string, std::set<std::string>>& graph,
                       std::set<std::string>& visited) {
  if (!visited.insert(from).second) return false;
  auto it = graph.find(from);
  if (it == graph.end()) return false;
  for (const auto& next : it->second) {
    if (next == target) return true;
    if (reaches_unguarded(next, target, graph, visited)) return true;
  }
  return false;
}

struct NameChecker {
  const ModelFile& m;
  const DefinitionsTable& table;
  std::set<std::string> declared;
  std::vector<Diagnostic>* diags;
  int line, col;

  void report(const std::string& msg) const {
    diags->push_back(Diagnostic{line, col, "error", msg});
  }

  void check_expr(const ExprRef& e, const std::set<std::string>& bound) const {
    switch (e->kind) {
      case Expr::Kind::literal:
        return;
      case Expr::Kind::name:
        if (!bound.count(e->name) && !declared.count(e->name))
          report("undeclared attribute '" + e->name + "'");
        return;
      case Expr::Kind::binary:
        check_expr(e->lhs, bound);
        check_expr(e->rhs, bound);
        return;
    }
  }

  void check_pred(const PredicateRef& p, const std::set<std::string>& bound) const {
    switch (p->kind) {
      case Predicate::Kind::truth:
        return;
      case Predicate::Kind::compare:
        check_expr(p->lhs, bound);
        check_expr(p->rhs, bound);
        return;
      case Predicate::Kind::negation:
        check_pred(p->a, bound);
        return;
      case Predicate::Kind::conjunction:
        check_pred(p->a, bound);
        check_pred(p->b, bound);
        return;
    }
  }

  void check_process(const ProcessRef& p, std::set<std::string> bound) const {
    switch (p->kind) {
      case Process::Kind::inert:
        return;
      case Process::Kind::envelope:
        report("envelope terms are not allowed in user processes");
        return;
      case Process::Kind::prefix: {
        const Action& a = p->act;
        for (const auto& f : a.payload.fields) {
          if (f.kind == TupleField::Kind::var && !bound.count(f.name))
            report("unbound variable '" + f.name + "'");
          if (f.kind == TupleField::Kind::formal && a.kind == ActionKind::put)
            report("formal field in put payload");
        }
        if (!a.target.self) check_pred(a.target.pred, bound);
        for (const auto& f : a.payload.fields)
          if (f.kind == TupleField::Kind::formal) bound.insert(f.name);
        check_process(p->cont, std::move(bound));
        return;
      }
      case Process::Kind::choice:
      case Process::Kind::parallel:
        check_process(p->left, bound);
        check_process(p->right, bound);
        return;
      case Process::Kind::call: {
        auto it = table.find(p->call_name);
        if (it == table.end()) {
          report("call to undefined process '" + p->call_name + "'");
        } else if (it->second.params.size() != p->call_args.size()) {
          report("process '" + p->call_name + "' expects " +
                 std::to_string(it->second.params.size()) + " argument(s), got " +
                 std::to_string(p->call_args.size()));
        }
        for (const auto& f : p->call_args)
          if (f.kind == TupleField::Kind::var && !bound.count(f.name))
            report("unbound variable '" + f.name + "' in call argument");
        return;
      }
    }
  }
};

}  // namespace

std::vector<Diagnostic> check_model(const ModelFile& m) {
  std::vector<Diagnostic> diags;
  DefinitionsTable table = m.defs();
  std::set<std::string> declared(m.attributes.begin(), m.attributes.end());

  // guardedness: a definition must not reach itself through unguarded calls
  std::map<std::string, std::set<std::string>> graph;
  for (const auto& p : m.procs) unguarded_calls(p.def.body, graph[p.name]);
  for (const auto& p : m.procs) {
    std::set<std::string> visited;
    if (reaches_unguarded(p.name, p.name, graph, visited))
      diags.push_back(Diagnostic{p.line, p.col, "error",
                                 "unguarded recursion in process '" + p.name + "'"});
  }

  for (const auto& p : m.procs) {
    NameChecker checker{m, table, declared, &diags, p.line, p.col};
    std::set<std::string> bound(p.def.params.begin(), p.def.params.end());
    checker.check_process(p.def.body, std::move(bound));
  }

  for (const auto& c : m.components) {
    NameChecker checker{m, table, declared, &diags, c.line, c.col};
    checker.check_process(c.process, {});
    for (const auto& rule : c.interface) {
      if (rule.attr == "id")
        diags.push_back(Diagnostic{rule.line, rule.col, "error",
                                   "attribute 'id' is implicit and cannot be redefined"});
      else if (!declared.count(rule.attr))
        diags.push_back(Diagnostic{rule.line, rule.col, "error",
                                   "undeclared attribute '" + rule.attr + "'"});
    }
  }
  return diags;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

std::string print_model(const ModelFile& m) {
  std::ostringstream out;
  if (!m.attributes.empty()) {
    out << "attributes ";
    for (std::size_t i = 0; i < m.attributes.size(); ++i) {
      if (i) out << ", ";
      out << m.attributes[i];
    }
    out << ";\n";
  }
  if (!m.rates_path.empty()) out << "rates " << value_to_string(Value{m.rates_path}) << ";\n";
  if (!m.attributes.empty() || !m.rates_path.empty()) out << "\n";

  for (const auto& p : m.procs) {
    out << "proc " << p.name;
    if (!p.def.params.empty()) {
      out << "(";
      for (std::size_t i = 0; i < p.def.params.size(); ++i) {
        if (i) out << ", ";
        out << p.def.params[i];
      }
      out << ")";
    }
    out << " = " << print_process(p.def.body) << ";\n";
  }
  if (!m.procs.empty()) out << "\n";

  for (const auto& c : m.components) {
    out << "component " << c.name;
    if (c.count != 1) out << " * " << c.count;
    out << " {\n";
    if (!c.interface.empty()) {
      out << "  interface {\n";
      for (const auto& rule : c.interface) {
        out << "    " << rule.attr << " = ";
        switch (rule.rule.kind) {
          case AttributeRule::Kind::field:
            out << "field(" << value_to_string(Value{rule.rule.tag}) << ", " << rule.rule.index
                << ")";
            break;
          case AttributeRule::Kind::count:
            out << "count(" << value_to_string(Value{rule.rule.tag}) << ")";
            break;
          case AttributeRule::Kind::constant:
            out << value_to_string(rule.rule.constant);
            break;
        }
        out << ";\n";
      }
      out << "  }\n";
    }
    if (!c.knowledge.empty()) {
      out << "  knowledge {\n";
      for (const auto& item : c.knowledge) out << "    " << item_to_string(item) << ";\n";
      out << "  }\n";
    }
    out << "  process " << print_process(c.process) << ";\n";
    out << "}\n";
  }
  return out.str();
}

std::pair<Model, SystemState> build_system(const ModelFile& m,
                                           std::shared_ptr<const RateConfig> rates) {
  std::vector<Component> components;
  for (const auto& decl : m.components) {
    Component c;
    c.name = decl.name;
    for (const auto& rule : decl.interface) c.interface.rules.emplace_back(rule.attr, rule.rule);
    c.knowledge = KnowledgeState(decl.knowledge);
    c.process = decl.process;
    c.repository = tuple_space();
    for (int i = 0; i < decl.count; ++i) components.push_back(c);
  }
  return instantiate(std::move(components), m.defs(), std::move(rates));
}

}  // namespace stocs
