#ifndef STOCS_VALUE_HPP
#define STOCS_VALUE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace stocs {

// Ground values stored in knowledge items and attribute evaluations.
// Equality and ordering are strict (an integer 3 is distinct from the real
// 3.0); numeric promotion happens only inside predicate/expression
// evaluation.
using Value = std::variant<std::int64_t, double, std::string>;

std::string value_to_string(const Value& v);

inline bool is_string(const Value& v) { return std::holds_alternative<std::string>(v); }

// Numeric view: integers and reals promote to double, strings do not.
std::optional<double> numeric(const Value& v);

enum class CmpOp { lt, le, gt, ge, eq, ne };

const char* cmp_op_text(CmpOp op);

// Total-order comparisons require two numbers; equality also works for
// strings. A type mismatch compares unequal, never errors.
bool compare_values(const Value& lhs, CmpOp op, const Value& rhs);

// An item is an ordered tuple of ground values.
struct Item {
  std::vector<Value> fields;

  Item() = default;
  explicit Item(std::vector<Value> f) : fields(std::move(f)) {}

  bool operator==(const Item& o) const { return fields == o.fields; }
  bool operator<(const Item& o) const { return fields < o.fields; }
};

std::string item_to_string(const Item& t);

// Variable bindings produced by template matching.
using Substitution = std::map<std::string, Value>;

std::uint64_t fnv1a64(const std::string& s);

}  // namespace stocs

#endif
