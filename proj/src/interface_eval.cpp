#include "stocs/interface_eval.hpp"

namespace stocs {

std::string evaluation_to_string(const InterfaceEvaluation& e) {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, v] : e) {
    if (!first) out += ", ";
    first = false;
    out += name;
    out += "=";
    out += value_to_string(v);
  }
  out += "}";
  return out;
}

InterfaceEvaluation evaluate(const InterfaceDef& iface, const std::string& component_name,
                             const KnowledgeState& k) {
  InterfaceEvaluation e;
  e.emplace("id", Value{component_name});
  for (const auto& [name, rule] : iface.rules) {
    switch (rule.kind) {
      case AttributeRule::Kind::constant:
        e[name] = rule.constant;
        break;
      case AttributeRule::Kind::count: {
        std::int64_t n = 0;
        for (const auto& item : k.items())
          if (!item.fields.empty() && item.fields.front() == Value{rule.tag}) ++n;
        e[name] = Value{n};
        break;
      }
      case AttributeRule::Kind::field: {
        const Item* found = nullptr;
        bool unique = true;
        for (const auto& item : k.items()) {
          if (item.fields.empty() || !(item.fields.front() == Value{rule.tag})) continue;
          if (found) {
            unique = false;
            break;
          }
          found = &item;
        }
        if (found && unique && rule.index < found->fields.size()) e[name] = found->fields[rule.index];
        break;  // otherwise the attribute stays absent
      }
    }
  }
  return e;
}

std::optional<Value> eval_expr(const ExprRef& e, const InterfaceEvaluation& env) {
  switch (e->kind) {
    case Expr::Kind::literal:
      return e->lit;
    case Expr::Kind::name: {
      auto it = env.find(e->name);
      if (it == env.end()) return std::nullopt;
      return it->second;
    }
    case Expr::Kind::binary: {
      auto l = eval_expr(e->lhs, env);
      auto r = eval_expr(e->rhs, env);
      if (!l || !r) return std::nullopt;
      // integer arithmetic stays integral
      const auto* li = std::get_if<std::int64_t>(&*l);
      const auto* ri = std::get_if<std::int64_t>(&*r);
      if (li && ri) {
        switch (e->op) {
          case '+': return Value{*li + *ri};
          case '-': return Value{*li - *ri};
          case '*': return Value{*li * *ri};
        }
        return std::nullopt;
      }
      auto ln = numeric(*l);
      auto rn = numeric(*r);
      if (!ln || !rn) return std::nullopt;
      switch (e->op) {
        case '+': return Value{*ln + *rn};
        case '-': return Value{*ln - *rn};
        case '*': return Value{*ln * *rn};
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool satisfies(const InterfaceEvaluation& e, const PredicateRef& p) {
  switch (p->kind) {
    case Predicate::Kind::truth:
      return true;
    case Predicate::Kind::compare: {
      auto l = eval_expr(p->lhs, e);
      auto r = eval_expr(p->rhs, e);
      if (!l || !r) return false;
      return compare_values(*l, p->op, *r);
    }
    case Predicate::Kind::negation:
      return !satisfies(e, p->a);
    case Predicate::Kind::conjunction:
      return satisfies(e, p->a) && satisfies(e, p->b);
  }
  return false;
}

}  // namespace stocs
