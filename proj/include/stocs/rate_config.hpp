#ifndef STOCS_RATE_CONFIG_HPP
#define STOCS_RATE_CONFIG_HPP

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stocs/interface_eval.hpp"
#include "stocs/knowledge.hpp"
#include "stocs/term.hpp"
#include "stocs/value.hpp"

namespace stocs {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The action argument of the rate and loss-probability functions: the kind,
// the knowledge item involved (for get/qry, the retrieved item paired with
// its template), and the target.
struct ActionDescriptor {
  enum class Kind { put, get, qry, envelope };

  Kind kind = Kind::put;
  Item item;
  std::optional<Template> tmpl;  // get/qry only
  bool target_self = true;
  PredicateRef target_pred;      // set iff !target_self

  static ActionDescriptor put_action(Item t, bool self, PredicateRef pred = nullptr);
  static ActionDescriptor gq_action(ActionKind kind, Template tmpl, Item t, bool self,
                                    PredicateRef pred = nullptr);
  static ActionDescriptor envelope_action(Item t, PredicateRef pred);

  std::string to_string() const;
};

// Expressions in rate rules: numbers, src.attr / dst.attr lookups,
// payload[i], arithmetic, comparisons and the distance builtin over grid
// locations.
struct RateExpr;
using RateExprRef = std::shared_ptr<const RateExpr>;

struct RateRule {
  std::optional<ActionDescriptor::Kind> action;  // absent = any
  std::optional<bool> target_self;               // absent = any target
  std::optional<std::vector<std::optional<Value>>> payload;  // nullopt field = wildcard
  RateExprRef when;   // boolean guard, may be null
  RateExprRef value;  // rate or probability expression
  std::string source_text;
};

struct GridShape {
  int rows = 0;
  int cols = 0;
};

// Rate function and loss-probability function with ordered first-match rule
// dispatch. Loaded once from JSON, read-only afterwards.
class RateConfig {
 public:
  RateConfig();

  static RateConfig from_json_text(const std::string& text);
  static RateConfig from_file(const std::string& path);

  // A missing destination (put actions) is the wildcard "_".
  double rate(const InterfaceEvaluation& src, const ActionDescriptor& act,
              const InterfaceEvaluation* dst) const;
  double loss_probability(const InterfaceEvaluation& src, const ActionDescriptor& act,
                          const InterfaceEvaluation* dst) const;

  double default_rate() const { return default_rate_; }
  void set_default_rate(double r);
  void set_grid(int rows, int cols) { grid_ = GridShape{rows, cols}; }
  const std::optional<GridShape>& grid() const { return grid_; }

  void add_rate_rule(RateRule rule) { rate_rules_.push_back(std::move(rule)); }
  void add_error_rule(RateRule rule) { error_rules_.push_back(std::move(rule)); }

  std::size_t rate_rule_count() const { return rate_rules_.size(); }
  std::size_t error_rule_count() const { return error_rules_.size(); }

 private:
  double dispatch(const std::vector<RateRule>& rules, const InterfaceEvaluation& src,
                  const ActionDescriptor& act, const InterfaceEvaluation* dst, bool is_error) const;

  double default_rate_ = 1.0;
  std::optional<GridShape> grid_;
  std::vector<RateRule> rate_rules_;
  std::vector<RateRule> error_rules_;
};

// Parses a rate expression; throws ConfigError on syntax errors.
RateExprRef parse_rate_expr(const std::string& text);

}  // namespace stocs

#endif
