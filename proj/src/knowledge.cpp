#include "stocs/knowledge.hpp"

#include <map>
#include <stdexcept>

namespace stocs {

std::string template_to_string(const Template& t) {
  std::string out = "<";
  for (std::size_t i = 0; i < t.fields.size(); ++i) {
    if (i) out += ", ";
    const auto& f = t.fields[i];
    if (f.value)
      out += value_to_string(*f.value);
    else
      out += "?" + f.formal;
  }
  out += ">";
  return out;
}

std::optional<Substitution> match(const Template& tmpl, const Item& item) {
  if (tmpl.fields.size() != item.fields.size()) return std::nullopt;
  Substitution theta;
  for (std::size_t i = 0; i < tmpl.fields.size(); ++i) {
    const auto& f = tmpl.fields[i];
    const auto& v = item.fields[i];
    if (f.value) {
      if (!(*f.value == v)) return std::nullopt;
    } else {
      auto [it, fresh] = theta.try_emplace(f.formal, v);
      if (!fresh && !(it->second == v)) return std::nullopt;
    }
  }
  return theta;
}

KnowledgeState KnowledgeState::with(const Item& t) const {
  std::vector<Item> out;
  out.reserve(items_.size() + 1);
  auto pos = std::upper_bound(items_.begin(), items_.end(), t);
  out.insert(out.end(), items_.begin(), pos);
  out.push_back(t);
  out.insert(out.end(), pos, items_.end());
  KnowledgeState k;
  k.items_ = std::move(out);
  return k;
}

KnowledgeState KnowledgeState::without_at(std::size_t index) const {
  if (index >= items_.size()) throw std::out_of_range("knowledge item index");
  KnowledgeState k;
  k.items_.reserve(items_.size() - 1);
  for (std::size_t i = 0; i < items_.size(); ++i)
    if (i != index) k.items_.push_back(items_[i]);
  return k;
}

std::size_t KnowledgeState::count(const Item& t) const {
  auto [lo, hi] = std::equal_range(items_.begin(), items_.end(), t);
  return static_cast<std::size_t>(hi - lo);
}

std::string KnowledgeState::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) out += ", ";
    out += item_to_string(items_[i]);
  }
  out += "}";
  return out;
}

StateDist Repository::add(const KnowledgeState& k, const Item& t) const {
  return StateDist{{{k.with(t), 1.0}}};
}

std::optional<WithdrawDist> Repository::withdraw(const KnowledgeState& k,
                                                 const Template& tmpl) const {
  // uniform over matching occurrences; duplicate items collapse to one
  // outcome with mass proportional to their multiplicity
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < k.items().size(); ++i)
    if (match(tmpl, k.items()[i])) hits.push_back(i);
  if (hits.empty()) return std::nullopt;

  double w = 1.0 / static_cast<double>(hits.size());
  std::map<std::pair<KnowledgeState, Item>, double> grouped;
  for (std::size_t i : hits) grouped[{k.without_at(i), k.items()[i]}] += w;

  WithdrawDist dist;
  dist.entries.assign(grouped.begin(), grouped.end());
  return dist;
}

std::optional<ItemDist> Repository::infer(const KnowledgeState& k, const Template& tmpl) const {
  std::map<Item, double> grouped;
  std::size_t hits = 0;
  for (const auto& item : k.items())
    if (match(tmpl, item)) {
      grouped[item] += 1.0;
      ++hits;
    }
  if (hits == 0) return std::nullopt;
  ItemDist dist;
  dist.entries.reserve(grouped.size());
  for (auto& [item, n] : grouped) dist.entries.emplace_back(item, n / static_cast<double>(hits));
  return dist;
}

RepositoryRef tuple_space() {
  static const RepositoryRef repo = std::make_shared<TupleSpaceRepository>();
  return repo;
}

}  // namespace stocs
