#include "stocs/rate_config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace stocs {

ActionDescriptor ActionDescriptor::put_action(Item t, bool self, PredicateRef pred) {
  ActionDescriptor a;
  a.kind = Kind::put;
  a.item = std::move(t);
  a.target_self = self;
  a.target_pred = std::move(pred);
  return a;
}

ActionDescriptor ActionDescriptor::gq_action(ActionKind kind, Template tmpl, Item t, bool self,
                                             PredicateRef pred) {
  ActionDescriptor a;
  a.kind = kind == ActionKind::get ? Kind::get : Kind::qry;
  a.tmpl = std::move(tmpl);
  a.item = std::move(t);
  a.target_self = self;
  a.target_pred = std::move(pred);
  return a;
}

ActionDescriptor ActionDescriptor::envelope_action(Item t, PredicateRef pred) {
  ActionDescriptor a;
  a.kind = Kind::envelope;
  a.item = std::move(t);
  a.target_self = false;
  a.target_pred = std::move(pred);
  return a;
}

namespace {

const char* descriptor_kind_text(ActionDescriptor::Kind k) {
  switch (k) {
    case ActionDescriptor::Kind::put: return "put";
    case ActionDescriptor::Kind::get: return "get";
    case ActionDescriptor::Kind::qry: return "qry";
    case ActionDescriptor::Kind::envelope: return "envelope";
  }
  return "?";
}

}  // namespace

std::string ActionDescriptor::to_string() const {
  std::string out = descriptor_kind_text(kind);
  out += "(";
  if (tmpl) {
    out += template_to_string(*tmpl);
    out += ":";
  }
  out += item_to_string(item);
  out += ")@";
  out += target_self ? "self" : (target_pred ? "(" + print_predicate(target_pred) + ")" : "(p)");
  return out;
}

// ---------------------------------------------------------------------------
// Rate expression language
// ---------------------------------------------------------------------------

struct RateExpr {
  enum class Kind { number, string, src_attr, dst_attr, payload, binary, compare, logic, negate,
                    distance, minimum, maximum };

  Kind kind = Kind::number;
  double num = 0.0;
  std::string text;    // attr name / string literal
  std::size_t index = 0;  // payload field
  char op = '+';       // + - * / for binary; '&' '|' for logic
  CmpOp cmp = CmpOp::eq;
  RateExprRef a, b;
};

namespace {

struct RateEnv {
  const InterfaceEvaluation& src;
  const InterfaceEvaluation* dst;
  const Item& payload;
  const std::optional<GridShape>& grid;
};

std::optional<Value> eval_rate_expr(const RateExprRef& e, const RateEnv& env);

std::optional<double> eval_number(const RateExprRef& e, const RateEnv& env) {
  auto v = eval_rate_expr(e, env);
  if (!v) return std::nullopt;
  return numeric(*v);
}

std::optional<double> grid_distance(const Value& a, const Value& b, const RateEnv& env) {
  if (!env.grid) throw ConfigError("distance() used without a grid declaration in the config");
  auto an = numeric(a);
  auto bn = numeric(b);
  if (!an || !bn) return std::nullopt;
  int cols = env.grid->cols;
  int ai = static_cast<int>(*an), bi = static_cast<int>(*bn);
  int dr = std::abs(ai / cols - bi / cols);
  int dc = std::abs(ai % cols - bi % cols);
  return static_cast<double>(dr + dc);
}

std::optional<Value> eval_rate_expr(const RateExprRef& e, const RateEnv& env) {
  switch (e->kind) {
    case RateExpr::Kind::number:
      return Value{e->num};
    case RateExpr::Kind::string:
      return Value{e->text};
    case RateExpr::Kind::src_attr: {
      auto it = env.src.find(e->text);
      if (it == env.src.end()) return std::nullopt;
      return it->second;
    }
    case RateExpr::Kind::dst_attr: {
      if (!env.dst) return std::nullopt;
      auto it = env.dst->find(e->text);
      if (it == env.dst->end()) return std::nullopt;
      return it->second;
    }
    case RateExpr::Kind::payload:
      if (e->index >= env.payload.fields.size()) return std::nullopt;
      return env.payload.fields[e->index];
    case RateExpr::Kind::binary: {
      auto l = eval_number(e->a, env);
      auto r = eval_number(e->b, env);
      if (!l || !r) return std::nullopt;
      switch (e->op) {
        case '+': return Value{*l + *r};
        case '-': return Value{*l - *r};
        case '*': return Value{*l * *r};
        case '/':
          if (*r == 0.0) throw ConfigError("division by zero in rate expression");
          return Value{*l / *r};
      }
      return std::nullopt;
    }
    case RateExpr::Kind::compare: {
      auto l = eval_rate_expr(e->a, env);
      auto r = eval_rate_expr(e->b, env);
      if (!l || !r) return std::nullopt;
      return Value{static_cast<std::int64_t>(compare_values(*l, e->cmp, *r) ? 1 : 0)};
    }
    case RateExpr::Kind::logic: {
      auto l = eval_number(e->a, env);
      if (e->op == '&') {
        if (!l || *l == 0.0) return Value{std::int64_t{0}};
        auto r = eval_number(e->b, env);
        return Value{static_cast<std::int64_t>(r && *r != 0.0 ? 1 : 0)};
      }
      if (l && *l != 0.0) return Value{std::int64_t{1}};
      auto r = eval_number(e->b, env);
      return Value{static_cast<std::int64_t>(r && *r != 0.0 ? 1 : 0)};
    }
    case RateExpr::Kind::negate: {
      auto v = eval_number(e->a, env);
      if (!v) return std::nullopt;
      return Value{-*v};
    }
    case RateExpr::Kind::distance: {
      auto l = eval_rate_expr(e->a, env);
      auto r = eval_rate_expr(e->b, env);
      if (!l || !r) return std::nullopt;
      auto d = grid_distance(*l, *r, env);
      if (!d) return std::nullopt;
      return Value{*d};
    }
    case RateExpr::Kind::minimum:
    case RateExpr::Kind::maximum: {
      auto l = eval_number(e->a, env);
      auto r = eval_number(e->b, env);
      if (!l || !r) return std::nullopt;
      return Value{e->kind == RateExpr::Kind::minimum ? std::min(*l, *r) : std::max(*l, *r)};
    }
  }
  return std::nullopt;
}

// recursive-descent parser for the rule expression language
class RateExprParser {
 public:
  explicit RateExprParser(const std::string& text) : text_(text) {}

  RateExprRef parse() {
    RateExprRef e = parse_or();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ConfigError("rate expression error at offset " + std::to_string(pos_) + ": " + msg +
                      " in \"" + text_ + "\"");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(const std::string& tok) {
    skip_ws();
    if (text_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  static RateExprRef node(RateExpr e) { return std::make_shared<RateExpr>(std::move(e)); }

  RateExprRef parse_or() {
    RateExprRef e = parse_and();
    while (eat("||")) {
      RateExpr n;
      n.kind = RateExpr::Kind::logic;
      n.op = '|';
      n.a = e;
      n.b = parse_and();
      e = node(std::move(n));
    }
    return e;
  }

  RateExprRef parse_and() {
    RateExprRef e = parse_cmp();
    while (eat("&&")) {
      RateExpr n;
      n.kind = RateExpr::Kind::logic;
      n.op = '&';
      n.a = e;
      n.b = parse_cmp();
      e = node(std::move(n));
    }
    return e;
  }

  RateExprRef parse_cmp() {
    RateExprRef e = parse_add();
    static const std::pair<const char*, CmpOp> ops[] = {
        {"<=", CmpOp::le}, {">=", CmpOp::ge}, {"!=", CmpOp::ne},
        {"==", CmpOp::eq}, {"<", CmpOp::lt},  {">", CmpOp::gt},  {"=", CmpOp::eq}};
    for (const auto& [tok, op] : ops) {
      if (eat(tok)) {
        RateExpr n;
        n.kind = RateExpr::Kind::compare;
        n.cmp = op;
        n.a = e;
        n.b = parse_add();
        return node(std::move(n));
      }
    }
    return e;
  }

  RateExprRef parse_add() {
    RateExprRef e = parse_mul();
    for (;;) {
      skip_ws();
      char c = peek();
      if (c != '+' && c != '-') return e;
      ++pos_;
      RateExpr n;
      n.kind = RateExpr::Kind::binary;
      n.op = c;
      n.a = e;
      n.b = parse_mul();
      e = node(std::move(n));
    }
  }

  RateExprRef parse_mul() {
    RateExprRef e = parse_unary();
    for (;;) {
      char c = peek();
      if (c != '*' && c != '/') return e;
      ++pos_;
      RateExpr n;
      n.kind = RateExpr::Kind::binary;
      n.op = c;
      n.a = e;
      n.b = parse_unary();
      e = node(std::move(n));
    }
  }

  RateExprRef parse_unary() {
    if (peek() == '-') {
      ++pos_;
      RateExpr n;
      n.kind = RateExpr::Kind::negate;
      n.a = parse_unary();
      return node(std::move(n));
    }
    return parse_atom();
  }

  std::string parse_ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_) fail("identifier expected");
    return text_.substr(start, pos_ - start);
  }

  RateExprRef parse_pair_call(RateExpr::Kind kind) {
    if (!eat("(")) fail("'(' expected");
    RateExpr n;
    n.kind = kind;
    n.a = parse_or();
    if (!eat(",")) fail("',' expected");
    n.b = parse_or();
    if (!eat(")")) fail("')' expected");
    return node(std::move(n));
  }

  RateExprRef parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RateExprRef e = parse_or();
      if (!eat(")")) fail("')' expected");
      return e;
    }
    if (c == '"') {
      ++pos_;
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
        s += text_[pos_++];
      }
      if (pos_ >= text_.size()) fail("unterminated string");
      ++pos_;
      RateExpr n;
      n.kind = RateExpr::Kind::string;
      n.text = std::move(s);
      return node(std::move(n));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      double v = std::strtod(text_.c_str() + pos_, &end);
      pos_ = static_cast<std::size_t>(end - text_.c_str());
      RateExpr n;
      n.kind = RateExpr::Kind::number;
      n.num = v;
      return node(std::move(n));
    }
    std::string ident = parse_ident();
    if (ident == "src" || ident == "dst") {
      if (!eat(".")) fail("'.' expected after " + ident);
      RateExpr n;
      n.kind = ident == "src" ? RateExpr::Kind::src_attr : RateExpr::Kind::dst_attr;
      n.text = parse_ident();
      return node(std::move(n));
    }
    if (ident == "payload") {
      if (!eat("[")) fail("'[' expected after payload");
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("payload index expected");
      RateExpr n;
      n.kind = RateExpr::Kind::payload;
      n.index = static_cast<std::size_t>(std::stoul(text_.substr(start, pos_ - start)));
      if (!eat("]")) fail("']' expected");
      return node(std::move(n));
    }
    if (ident == "distance") return parse_pair_call(RateExpr::Kind::distance);
    if (ident == "min") return parse_pair_call(RateExpr::Kind::minimum);
    if (ident == "max") return parse_pair_call(RateExpr::Kind::maximum);
    fail("unknown name '" + ident + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

bool rule_matches(const RateRule& rule, const InterfaceEvaluation& src, const ActionDescriptor& act,
                  const InterfaceEvaluation* dst, const std::optional<GridShape>& grid) {
  if (rule.action && *rule.action != act.kind) return false;
  if (rule.target_self && *rule.target_self != act.target_self) return false;
  if (rule.payload) {
    if (rule.payload->size() != act.item.fields.size()) return false;
    for (std::size_t i = 0; i < rule.payload->size(); ++i) {
      const auto& want = (*rule.payload)[i];
      if (want && !(*want == act.item.fields[i])) return false;
    }
  }
  if (rule.when) {
    RateEnv env{src, dst, act.item, grid};
    auto v = eval_rate_expr(rule.when, env);
    auto n = v ? numeric(*v) : std::nullopt;
    if (!n || *n == 0.0) return false;
  }
  return true;
}

}  // namespace

RateExprRef parse_rate_expr(const std::string& text) { return RateExprParser(text).parse(); }

RateConfig::RateConfig() = default;

void RateConfig::set_default_rate(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("default_rate must be finite and >= 0");
  default_rate_ = r;
}

double RateConfig::dispatch(const std::vector<RateRule>& rules, const InterfaceEvaluation& src,
                            const ActionDescriptor& act, const InterfaceEvaluation* dst,
                            bool is_error) const {
  for (const auto& rule : rules) {
    if (!rule_matches(rule, src, act, dst, grid_)) continue;
    RateEnv env{src, dst, act.item, grid_};
    auto v = eval_rate_expr(rule.value, env);
    auto n = v ? numeric(*v) : std::nullopt;
    if (!n)
      throw ConfigError("rule \"" + rule.source_text + "\" did not produce a number for " +
                        act.to_string());
    if (!std::isfinite(*n) || *n < 0.0)
      throw ConfigError("rule \"" + rule.source_text + "\" produced an invalid value " +
                        std::to_string(*n));
    if (is_error && *n > 1.0)
      throw ConfigError("error rule \"" + rule.source_text + "\" produced probability > 1");
    return *n;
  }
  return is_error ? 0.0 : default_rate_;
}

double RateConfig::rate(const InterfaceEvaluation& src, const ActionDescriptor& act,
                        const InterfaceEvaluation* dst) const {
  return dispatch(rate_rules_, src, act, dst, false);
}

double RateConfig::loss_probability(const InterfaceEvaluation& src, const ActionDescriptor& act,
                                    const InterfaceEvaluation* dst) const {
  return dispatch(error_rules_, src, act, dst, true);
}

namespace {

RateRule rule_from_json(const nlohmann::json& j, bool is_error) {
  RateRule rule;
  if (j.contains("action")) {
    std::string a = j.at("action").get<std::string>();
    if (a == "put")
      rule.action = ActionDescriptor::Kind::put;
    else if (a == "get")
      rule.action = ActionDescriptor::Kind::get;
    else if (a == "qry")
      rule.action = ActionDescriptor::Kind::qry;
    else if (a == "envelope")
      rule.action = ActionDescriptor::Kind::envelope;
    else
      throw ConfigError("unknown action kind '" + a + "' in rule");
  }
  if (j.contains("target")) {
    std::string t = j.at("target").get<std::string>();
    if (t == "self")
      rule.target_self = true;
    else if (t == "pred")
      rule.target_self = false;
    else
      throw ConfigError("target must be \"self\" or \"pred\"");
  }
  if (j.contains("payload")) {
    std::vector<std::optional<Value>> pattern;
    for (const auto& f : j.at("payload")) {
      if (f.is_string()) {
        std::string s = f.get<std::string>();
        if (s == "?")
          pattern.emplace_back(std::nullopt);
        else
          pattern.emplace_back(Value{s});
      } else if (f.is_number_integer()) {
        pattern.emplace_back(Value{f.get<std::int64_t>()});
      } else if (f.is_number()) {
        pattern.emplace_back(Value{f.get<double>()});
      } else {
        throw ConfigError("payload pattern fields must be strings or numbers");
      }
    }
    rule.payload = std::move(pattern);
  }
  if (j.contains("when")) rule.when = parse_rate_expr(j.at("when").get<std::string>());
  const char* value_key = is_error ? "prob" : "rate";
  if (!j.contains(value_key))
    throw ConfigError(std::string("rule is missing its \"") + value_key + "\" expression");
  std::string text = j.at(value_key).get<std::string>();
  rule.value = parse_rate_expr(text);
  rule.source_text = text;
  return rule;
}

// constant rules can be range-checked immediately
void check_constant_rule(const RateRule& rule, bool is_error) {
  InterfaceEvaluation empty;
  Item no_payload;
  RateEnv env{empty, nullptr, no_payload, std::nullopt};
  try {
    auto v = eval_rate_expr(rule.value, env);
    auto n = v ? numeric(*v) : std::nullopt;
    if (!n) return;  // depends on attributes; checked at evaluation time
    if (!std::isfinite(*n) || *n < 0.0 || (is_error && *n > 1.0))
      throw ConfigError("rule \"" + rule.source_text + "\" is out of range");
  } catch (const ConfigError&) {
    throw;
  }
}

}  // namespace

RateConfig RateConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  RateConfig cfg;
  if (j.contains("default_rate")) cfg.set_default_rate(j.at("default_rate").get<double>());
  if (j.contains("grid")) {
    int rows = j.at("grid").at("rows").get<int>();
    int cols = j.at("grid").at("cols").get<int>();
    if (rows < 1 || cols < 1) throw ConfigError("grid dimensions must be positive");
    cfg.set_grid(rows, cols);
  }
  if (j.contains("rates"))
    for (const auto& r : j.at("rates")) {
      RateRule rule = rule_from_json(r, false);
      check_constant_rule(rule, false);
      cfg.add_rate_rule(std::move(rule));
    }
  if (j.contains("errors"))
    for (const auto& r : j.at("errors")) {
      RateRule rule = rule_from_json(r, true);
      check_constant_rule(rule, true);
      cfg.add_error_rule(std::move(rule));
    }
  return cfg;
}

RateConfig RateConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rate configuration file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

}  // namespace stocs
