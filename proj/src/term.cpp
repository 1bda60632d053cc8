#include "stocs/term.hpp"

#include <cstdio>
#include <stdexcept>

namespace stocs {

namespace {

void print_expr_text(const Expr& e, std::string& out, bool parenthesize);
void print_pred_text(const Predicate& p, std::string& out);

}  // namespace

ExprRef expr_literal(Value v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::literal;
  e->lit = std::move(v);
  e->key = value_to_string(e->lit);
  return e;
}

ExprRef expr_name(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::name;
  e->name = std::move(name);
  e->key = e->name;
  return e;
}

ExprRef expr_binary(char op, ExprRef lhs, ExprRef rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::binary;
  e->op = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  print_expr_text(*e, e->key, false);
  return e;
}

PredicateRef pred_true() {
  static const PredicateRef t = [] {
    auto p = std::make_shared<Predicate>();
    p->key = "tt";
    return p;
  }();
  return t;
}

PredicateRef pred_compare(ExprRef lhs, CmpOp op, ExprRef rhs) {
  auto p = std::make_shared<Predicate>();
  p->kind = Predicate::Kind::compare;
  p->lhs = std::move(lhs);
  p->op = op;
  p->rhs = std::move(rhs);
  print_pred_text(*p, p->key);
  return p;
}

PredicateRef pred_not(PredicateRef inner) {
  auto p = std::make_shared<Predicate>();
  p->kind = Predicate::Kind::negation;
  p->a = std::move(inner);
  print_pred_text(*p, p->key);
  return p;
}

PredicateRef pred_and(PredicateRef a, PredicateRef b) {
  auto p = std::make_shared<Predicate>();
  p->kind = Predicate::Kind::conjunction;
  p->a = std::move(a);
  p->b = std::move(b);
  print_pred_text(*p, p->key);
  return p;
}

PredicateRef pred_or(PredicateRef a, PredicateRef b) {
  return pred_not(pred_and(pred_not(std::move(a)), pred_not(std::move(b))));
}

bool Tuple::ground() const {
  for (const auto& f : fields)
    if (f.kind != TupleField::Kind::value) return false;
  return true;
}

bool Tuple::has_formal() const {
  for (const auto& f : fields)
    if (f.kind == TupleField::Kind::formal) return true;
  return false;
}

Item Tuple::to_item() const {
  Item item;
  item.fields.reserve(fields.size());
  for (const auto& f : fields) {
    if (f.kind != TupleField::Kind::value)
      throw std::logic_error("tuple with unresolved variable cannot become an item: " +
                             print_tuple(*this));
    item.fields.push_back(f.v);
  }
  return item;
}

Tuple tuple_of(const Item& item) {
  Tuple t;
  t.fields.reserve(item.fields.size());
  for (const auto& v : item.fields) t.fields.push_back(TupleField::value_field(v));
  return t;
}

const char* action_kind_text(ActionKind k) {
  switch (k) {
    case ActionKind::put: return "put";
    case ActionKind::get: return "get";
    case ActionKind::qry: return "qry";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

void print_expr_text(const Expr& e, std::string& out, bool parenthesize) {
  switch (e.kind) {
    case Expr::Kind::literal:
    case Expr::Kind::name:
      out += e.key;
      return;
    case Expr::Kind::binary: {
      if (parenthesize) out += '(';
      bool inner_parens = e.op == '*';
      print_expr_text(*e.lhs, out, inner_parens && e.lhs->kind == Expr::Kind::binary);
      out += ' ';
      out += e.op;
      out += ' ';
      print_expr_text(*e.rhs, out, e.rhs->kind == Expr::Kind::binary);
      if (parenthesize) out += ')';
      return;
    }
  }
}

void print_pred_text(const Predicate& p, std::string& out) {
  switch (p.kind) {
    case Predicate::Kind::truth:
      out += "tt";
      return;
    case Predicate::Kind::compare:
      print_expr_text(*p.lhs, out, p.lhs->kind == Expr::Kind::binary);
      out += ' ';
      out += cmp_op_text(p.op);
      out += ' ';
      print_expr_text(*p.rhs, out, p.rhs->kind == Expr::Kind::binary);
      return;
    case Predicate::Kind::negation:
      out += "!(";
      out += p.a->key;
      out += ')';
      return;
    case Predicate::Kind::conjunction:
      out += '(';
      out += p.a->key;
      out += ") && (";
      out += p.b->key;
      out += ')';
      return;
  }
}

}  // namespace

std::string print_expr(const ExprRef& e) { return e->key; }

std::string print_predicate(const PredicateRef& p) { return p->key; }

std::string print_tuple(const Tuple& t) {
  std::string out = "<";
  for (std::size_t i = 0; i < t.fields.size(); ++i) {
    if (i) out += ", ";
    const auto& f = t.fields[i];
    switch (f.kind) {
      case TupleField::Kind::value: out += value_to_string(f.v); break;
      case TupleField::Kind::formal: out += '?', out += f.name; break;
      case TupleField::Kind::var: out += f.name; break;
    }
  }
  out += ">";
  return out;
}

std::string print_target(const Target& t) {
  if (t.self) return "self";
  return "(" + print_predicate(t.pred) + ")";
}

std::string print_action(const Action& a) {
  return std::string(action_kind_text(a.kind)) + "(" + print_tuple(a.payload) + ")@" +
         print_target(a.target);
}

namespace {

std::string envelope_text(const Item& item, const PredicateRef& pred, double rate) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", rate);
  return "envelope(" + item_to_string(item) + ", " + print_predicate(pred) + ", " + buf + ")";
}

std::string process_text(const Process& p) {
  switch (p.kind) {
    case Process::Kind::inert:
      return "nil";
    case Process::Kind::prefix: {
      std::string cont = p.cont->key;
      bool parens = p.cont->kind == Process::Kind::choice || p.cont->kind == Process::Kind::parallel;
      return print_action(p.act) + "." + (parens ? "(" + cont + ")" : cont);
    }
    case Process::Kind::choice:
      return p.left->key + " + " + p.right->key;
    case Process::Kind::parallel: {
      auto wrap = [](const ProcessRef& q) {
        return q->kind == Process::Kind::choice ? "(" + q->key + ")" : q->key;
      };
      return wrap(p.left) + " | " + wrap(p.right);
    }
    case Process::Kind::call: {
      if (p.call_args.empty()) return p.call_name;
      Tuple t{p.call_args};
      std::string args = print_tuple(t);  // reuse field printing, swap delimiters
      args.front() = '(';
      args.back() = ')';
      return p.call_name + args;
    }
    case Process::Kind::envelope:
      return envelope_text(p.env_item, p.env_pred, p.env_rate);
  }
  return "?";
}

ProcessRef finish(std::shared_ptr<Process> p) {
  p->key = process_text(*p);
  return p;
}

}  // namespace

std::string print_process(const ProcessRef& p) { return p->key; }

ProcessRef make_nil() {
  static const ProcessRef nil = [] {
    auto p = std::make_shared<Process>();
    p->kind = Process::Kind::inert;
    return finish(std::move(p));
  }();
  return nil;
}

ProcessRef make_prefix(Action act, ProcessRef cont) {
  auto p = std::make_shared<Process>();
  p->kind = Process::Kind::prefix;
  p->act = std::move(act);
  p->cont = std::move(cont);
  return finish(std::move(p));
}

ProcessRef make_choice(ProcessRef left, ProcessRef right) {
  auto p = std::make_shared<Process>();
  p->kind = Process::Kind::choice;
  p->left = std::move(left);
  p->right = std::move(right);
  return finish(std::move(p));
}

ProcessRef make_parallel(ProcessRef left, ProcessRef right) {
  auto p = std::make_shared<Process>();
  p->kind = Process::Kind::parallel;
  p->left = std::move(left);
  p->right = std::move(right);
  return finish(std::move(p));
}

ProcessRef make_call(std::string name, std::vector<TupleField> args) {
  auto p = std::make_shared<Process>();
  p->kind = Process::Kind::call;
  p->call_name = std::move(name);
  p->call_args = std::move(args);
  return finish(std::move(p));
}

ProcessRef make_envelope(Item item, PredicateRef pred, double rate) {
  if (rate <= 0.0) throw std::invalid_argument("envelope rate must be positive");
  auto p = std::make_shared<Process>();
  p->kind = Process::Kind::envelope;
  p->env_item = std::move(item);
  p->env_pred = std::move(pred);
  p->env_rate = rate;
  return finish(std::move(p));
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

ExprRef substitute(const ExprRef& e, const Substitution& theta) {
  switch (e->kind) {
    case Expr::Kind::literal:
      return e;
    case Expr::Kind::name: {
      auto it = theta.find(e->name);
      return it == theta.end() ? e : expr_literal(it->second);
    }
    case Expr::Kind::binary: {
      ExprRef l = substitute(e->lhs, theta);
      ExprRef r = substitute(e->rhs, theta);
      if (l == e->lhs && r == e->rhs) return e;
      return expr_binary(e->op, std::move(l), std::move(r));
    }
  }
  return e;
}

PredicateRef substitute(const PredicateRef& p, const Substitution& theta) {
  switch (p->kind) {
    case Predicate::Kind::truth:
      return p;
    case Predicate::Kind::compare: {
      ExprRef l = substitute(p->lhs, theta);
      ExprRef r = substitute(p->rhs, theta);
      if (l == p->lhs && r == p->rhs) return p;
      return pred_compare(std::move(l), p->op, std::move(r));
    }
    case Predicate::Kind::negation: {
      PredicateRef a = substitute(p->a, theta);
      return a == p->a ? p : pred_not(std::move(a));
    }
    case Predicate::Kind::conjunction: {
      PredicateRef a = substitute(p->a, theta);
      PredicateRef b = substitute(p->b, theta);
      if (a == p->a && b == p->b) return p;
      return pred_and(std::move(a), std::move(b));
    }
  }
  return p;
}

namespace {

// returns true if any field was rewritten
bool substitute_fields(std::vector<TupleField>& fields, const Substitution& theta) {
  bool changed = false;
  for (auto& f : fields) {
    if (f.kind != TupleField::Kind::var) continue;
    auto it = theta.find(f.name);
    if (it != theta.end()) {
      f = TupleField::value_field(it->second);
      changed = true;
    }
  }
  return changed;
}

}  // namespace

Tuple substitute(const Tuple& t, const Substitution& theta) {
  Tuple out = t;
  substitute_fields(out.fields, theta);
  return out;
}

Target substitute(const Target& t, const Substitution& theta) {
  if (t.self) return t;
  return Target::predicate(substitute(t.pred, theta));
}

// unchanged subterms keep their identity so repeated substitution does not
// rebuild (and re-serialize) whole suffix chains
ProcessRef substitute(const ProcessRef& p, const Substitution& theta) {
  if (theta.empty()) return p;
  switch (p->kind) {
    case Process::Kind::inert:
    case Process::Kind::envelope:
      return p;
    case Process::Kind::prefix: {
      Action act;
      act.kind = p->act.kind;
      act.payload = p->act.payload;
      bool changed = substitute_fields(act.payload.fields, theta);
      act.target = p->act.target;
      if (!act.target.self) {
        PredicateRef sub = substitute(act.target.pred, theta);
        if (sub != act.target.pred) {
          act.target.pred = std::move(sub);
          changed = true;
        }
      }
      // formals bound by this prefix shadow the outer substitution
      Substitution inner = theta;
      for (const auto& f : p->act.payload.fields)
        if (f.kind == TupleField::Kind::formal) inner.erase(f.name);
      ProcessRef cont = inner.empty() ? p->cont : substitute(p->cont, inner);
      if (!changed && cont == p->cont) return p;
      return make_prefix(std::move(act), std::move(cont));
    }
    case Process::Kind::choice: {
      ProcessRef l = substitute(p->left, theta);
      ProcessRef r = substitute(p->right, theta);
      if (l == p->left && r == p->right) return p;
      return make_choice(std::move(l), std::move(r));
    }
    case Process::Kind::parallel: {
      ProcessRef l = substitute(p->left, theta);
      ProcessRef r = substitute(p->right, theta);
      if (l == p->left && r == p->right) return p;
      return make_parallel(std::move(l), std::move(r));
    }
    case Process::Kind::call: {
      std::vector<TupleField> args = p->call_args;
      if (!substitute_fields(args, theta)) return p;
      return make_call(p->call_name, std::move(args));
    }
  }
  return p;
}

}  // namespace stocs
