#include "stocs/value.hpp"

#include <cmath>
#include <cstdio>

namespace stocs {

std::string value_to_string(const Value& v) {
  struct Visitor {
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      std::string s(buf);
      // keep reals lexically distinct from integers so text round-trips
      if (s.find_first_of(".eEnN") == std::string::npos) s += ".0";
      return s;
    }
    std::string operator()(const std::string& s) const {
      std::string out = "\"";
      for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      out += '"';
      return out;
    }
  };
  return std::visit(Visitor{}, v);
}

std::optional<double> numeric(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return std::nullopt;
}

const char* cmp_op_text(CmpOp op) {
  switch (op) {
    case CmpOp::lt: return "<";
    case CmpOp::le: return "<=";
    case CmpOp::gt: return ">";
    case CmpOp::ge: return ">=";
    case CmpOp::eq: return "=";
    case CmpOp::ne: return "!=";
  }
  return "?";
}

bool compare_values(const Value& lhs, CmpOp op, const Value& rhs) {
  auto ln = numeric(lhs);
  auto rn = numeric(rhs);
  if (ln && rn) {
    switch (op) {
      case CmpOp::lt: return *ln < *rn;
      case CmpOp::le: return *ln <= *rn;
      case CmpOp::gt: return *ln > *rn;
      case CmpOp::ge: return *ln >= *rn;
      case CmpOp::eq: return *ln == *rn;
      case CmpOp::ne: return *ln != *rn;
    }
  }
  if (is_string(lhs) && is_string(rhs)) {
    if (op == CmpOp::eq) return lhs == rhs;
    if (op == CmpOp::ne) return lhs != rhs;
    return false;
  }
  // mixed string/number: unequal, not ordered
  if (op == CmpOp::ne) return true;
  return false;
}

std::string item_to_string(const Item& t) {
  std::string out = "<";
  for (std::size_t i = 0; i < t.fields.size(); ++i) {
    if (i) out += ", ";
    out += value_to_string(t.fields[i]);
  }
  out += ">";
  return out;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace stocs
