#ifndef STOCS_TERM_HPP
#define STOCS_TERM_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "stocs/value.hpp"

namespace stocs {

// ---------------------------------------------------------------------------
// Expressions and ensemble predicates
// ---------------------------------------------------------------------------

struct Expr;
using ExprRef = std::shared_ptr<const Expr>;

// Names are resolved dynamically: a name bound by an enclosing template
// formal or definition parameter is a process variable (removed by
// substitution), anything left at evaluation time is an attribute lookup.
struct Expr {
  enum class Kind { literal, name, binary };

  Kind kind = Kind::literal;
  Value lit;
  std::string name;
  char op = '+';  // one of + - *
  ExprRef lhs, rhs;

  std::string key;  // canonical text, computed at construction
};

ExprRef expr_literal(Value v);
ExprRef expr_name(std::string name);
ExprRef expr_binary(char op, ExprRef lhs, ExprRef rhs);

struct Predicate;
using PredicateRef = std::shared_ptr<const Predicate>;

struct Predicate {
  enum class Kind { truth, compare, negation, conjunction };

  Kind kind = Kind::truth;
  ExprRef lhs, rhs;  // compare
  CmpOp op = CmpOp::eq;
  PredicateRef a, b;  // negation (a), conjunction (a, b)

  std::string key;  // canonical text, computed at construction
};

PredicateRef pred_true();
PredicateRef pred_compare(ExprRef lhs, CmpOp op, ExprRef rhs);
PredicateRef pred_not(PredicateRef p);
PredicateRef pred_and(PredicateRef a, PredicateRef b);
// sugar: p or q  ==  !(!p && !q)
PredicateRef pred_or(PredicateRef a, PredicateRef b);

struct Target {
  bool self = true;
  PredicateRef pred;  // set iff !self

  static Target self_target() { return Target{}; }
  static Target predicate(PredicateRef p) { return Target{false, std::move(p)}; }
};

// ---------------------------------------------------------------------------
// Tuples as they appear in the syntax: a field is a ground value, a formal
// binder ?x (templates only), or a variable use x substituted at run time.
// ---------------------------------------------------------------------------

struct TupleField {
  enum class Kind { value, formal, var };

  Kind kind = Kind::value;
  Value v;
  std::string name;

  static TupleField value_field(Value val) { return {Kind::value, std::move(val), {}}; }
  static TupleField formal(std::string n) { return {Kind::formal, {}, std::move(n)}; }
  static TupleField var(std::string n) { return {Kind::var, {}, std::move(n)}; }
};

struct Tuple {
  std::vector<TupleField> fields;

  bool ground() const;
  bool has_formal() const;
  // requires ground()
  Item to_item() const;
};

Tuple tuple_of(const Item& item);

enum class ActionKind { put, get, qry };

const char* action_kind_text(ActionKind k);

struct Action {
  ActionKind kind = ActionKind::put;
  Tuple payload;  // get/qry: template with formals; put: no formals
  Target target;
};

// ---------------------------------------------------------------------------
// Processes
// ---------------------------------------------------------------------------

struct Process;
using ProcessRef = std::shared_ptr<const Process>;

struct Process {
  enum class Kind { inert, prefix, choice, parallel, call, envelope };

  Kind kind = Kind::inert;
  // prefix
  Action act;
  ProcessRef cont;
  // choice / parallel
  ProcessRef left, right;
  // call
  std::string call_name;
  std::vector<TupleField> call_args;  // value or var fields
  // envelope: an in-flight message, never present in parsed input
  Item env_item;
  PredicateRef env_pred;
  double env_rate = 0.0;

  // canonical textual form, computed once at construction; doubles as the
  // ordering key for continuation functions over processes
  std::string key;
};

ProcessRef make_nil();
ProcessRef make_prefix(Action act, ProcessRef cont);
ProcessRef make_choice(ProcessRef left, ProcessRef right);
ProcessRef make_parallel(ProcessRef left, ProcessRef right);
ProcessRef make_call(std::string name, std::vector<TupleField> args = {});
ProcessRef make_envelope(Item item, PredicateRef pred, double rate);

struct ProcessDef {
  std::vector<std::string> params;
  ProcessRef body;
};

using DefinitionsTable = std::map<std::string, ProcessDef>;

// ---------------------------------------------------------------------------
// Printing (canonical concrete syntax) and substitution
// ---------------------------------------------------------------------------

std::string print_expr(const ExprRef& e);
std::string print_predicate(const PredicateRef& p);
std::string print_tuple(const Tuple& t);
std::string print_target(const Target& t);
std::string print_action(const Action& a);
std::string print_process(const ProcessRef& p);

ExprRef substitute(const ExprRef& e, const Substitution& theta);
PredicateRef substitute(const PredicateRef& p, const Substitution& theta);
Tuple substitute(const Tuple& t, const Substitution& theta);
Target substitute(const Target& t, const Substitution& theta);

// Capture-aware substitution: template formals in inner prefixes shadow
// outer bindings; unmapped variables pass through unchanged.
ProcessRef substitute(const ProcessRef& p, const Substitution& theta);

struct ProcessLess {
  bool operator()(const ProcessRef& a, const ProcessRef& b) const {
    if (a == b) return false;
    return a->key < b->key;
  }
};

}  // namespace stocs

#endif
