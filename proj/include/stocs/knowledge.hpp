#ifndef STOCS_KNOWLEDGE_HPP
#define STOCS_KNOWLEDGE_HPP

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stocs/value.hpp"

namespace stocs {

// A template field is either a ground value or a formal variable ?x.
struct TemplateField {
  std::optional<Value> value;  // set => ground field
  std::string formal;          // used when value is empty

  static TemplateField ground(Value v) { return {std::move(v), {}}; }
  static TemplateField var(std::string name) { return {std::nullopt, std::move(name)}; }
};

struct Template {
  std::vector<TemplateField> fields;
};

std::string template_to_string(const Template& t);

// Pattern matching of a template against an item. Defined iff arities agree,
// ground fields are equal and repeated formals bind consistently.
std::optional<Substitution> match(const Template& tmpl, const Item& item);

// A knowledge state is a multiset of ground items, kept sorted so that equal
// states have equal representations.
class KnowledgeState {
 public:
  KnowledgeState() = default;
  explicit KnowledgeState(std::vector<Item> items) : items_(std::move(items)) {
    std::sort(items_.begin(), items_.end());
  }

  const std::vector<Item>& items() const { return items_; }
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }

  KnowledgeState with(const Item& t) const;
  // removes one occurrence; the item must be present
  KnowledgeState without_at(std::size_t index) const;

  std::size_t count(const Item& t) const;

  bool operator==(const KnowledgeState& o) const { return items_ == o.items_; }
  bool operator<(const KnowledgeState& o) const { return items_ < o.items_; }

  std::string to_string() const;

 private:
  std::vector<Item> items_;
};

// Finite-support probability distribution; masses sum to one.
template <typename T>
struct Distribution {
  std::vector<std::pair<T, double>> entries;

  double total() const {
    double m = 0.0;
    for (const auto& [v, p] : entries) m += p;
    return m;
  }
};

using StateDist = Distribution<KnowledgeState>;
using WithdrawDist = Distribution<std::pair<KnowledgeState, Item>>;
using ItemDist = Distribution<Item>;

// The behavior of a knowledge repository: total probabilistic add, partial
// probabilistic withdraw and infer. The tuple space below is the default
// behavior; models may plug in their own probabilistic rules while keeping
// these signatures.
class Repository {
 public:
  virtual ~Repository() = default;

  virtual StateDist add(const KnowledgeState& k, const Item& t) const;
  virtual std::optional<WithdrawDist> withdraw(const KnowledgeState& k, const Template& tmpl) const;
  virtual std::optional<ItemDist> infer(const KnowledgeState& k, const Template& tmpl) const;
};

using RepositoryRef = std::shared_ptr<const Repository>;

// Plain tuple space: add is Dirac insertion, withdraw/infer pick uniformly
// among matching occurrences.
class TupleSpaceRepository : public Repository {};

RepositoryRef tuple_space();

}  // namespace stocs

#endif
