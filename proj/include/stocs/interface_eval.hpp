#ifndef STOCS_INTERFACE_EVAL_HPP
#define STOCS_INTERFACE_EVAL_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stocs/knowledge.hpp"
#include "stocs/term.hpp"
#include "stocs/value.hpp"

namespace stocs {

// How one published attribute is computed from the knowledge state.
struct AttributeRule {
  enum class Kind { field, count, constant };

  Kind kind = Kind::constant;
  std::string tag;   // first field of the source tuples (field/count)
  std::size_t index = 0;  // field position within the tagged tuple
  Value constant;
};

// A component interface: a list of attribute rules plus the mandatory id
// attribute, which is bound to the component name.
struct InterfaceDef {
  std::vector<std::pair<std::string, AttributeRule>> rules;
};

// Attribute-to-value map exposed by a component; always contains id.
using InterfaceEvaluation = std::map<std::string, Value>;

std::string evaluation_to_string(const InterfaceEvaluation& e);

// Evaluates every rule; a field rule whose tag does not select exactly one
// tuple (or whose index is out of range) yields an absent attribute rather
// than an error.
InterfaceEvaluation evaluate(const InterfaceDef& iface, const std::string& component_name,
                             const KnowledgeState& k);

// Expression evaluation over an attribute environment. Absent names yield
// an absent result; arithmetic on non-numbers is absent as well.
std::optional<Value> eval_expr(const ExprRef& e, const InterfaceEvaluation& env);

// Predicate satisfaction. Comparisons involving an absent attribute are
// false, never an error, so heterogeneous components can share one
// predicate namespace.
bool satisfies(const InterfaceEvaluation& e, const PredicateRef& p);

}  // namespace stocs

#endif
