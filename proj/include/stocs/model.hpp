#ifndef STOCS_MODEL_HPP
#define STOCS_MODEL_HPP

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "stocs/interface_eval.hpp"
#include "stocs/knowledge.hpp"
#include "stocs/rate_config.hpp"
#include "stocs/term.hpp"

namespace stocs {

// ---------------------------------------------------------------------------
// Term-level components and systems (the parsed / generated artifacts)
// ---------------------------------------------------------------------------

struct Component {
  std::string name;
  InterfaceDef interface;
  KnowledgeState knowledge;
  ProcessRef process;
  RepositoryRef repository;  // defaults to the plain tuple space
};

// A system is a single component or a parallel composition; flattening keeps
// the left-to-right order, and duplicates are preserved since component
// names need not be unique.
struct SystemTerm;
using SystemTermRef = std::shared_ptr<const SystemTerm>;

struct SystemTerm {
  std::shared_ptr<const Component> comp;  // leaf
  SystemTermRef left, right;              // composition
};

SystemTermRef system_leaf(Component c);
SystemTermRef system_par(SystemTermRef left, SystemTermRef right);
std::vector<Component> flatten(const SystemTermRef& s);

// ---------------------------------------------------------------------------
// Runtime model: static per-component data plus immutable dynamic states
// ---------------------------------------------------------------------------

struct ComponentStatic {
  std::string name;
  InterfaceDef interface;
  RepositoryRef repository;
};

using ComponentStaticRef = std::shared_ptr<const ComponentStatic>;

struct Model {
  std::vector<ComponentStaticRef> components;
  DefinitionsTable defs;
  std::shared_ptr<const RateConfig> rates;
};

// A pending message shipped to a component but not yet delivered.
struct Envelope {
  Item item;
  PredicateRef pred;
  double rate = 0.0;  // delivery rate, frozen at creation

  std::string to_string() const;
};

// One enabled action prefix of a process, collected for label enumeration.
struct ActionOffer {
  enum class Kind { put, gq, envelope };

  Kind kind = Kind::put;
  ActionKind gq_kind = ActionKind::get;
  Item item;      // put payload / envelope item
  Template tmpl;  // gq template
  Target target;
  PredicateRef env_pred;  // envelope offers
  std::string key;
};

// Enumerates the action prefixes reachable at the top of a process through
// choice, parallel composition and definition unfolding. Requires guarded
// recursion (enforced by the static checks).
std::vector<ActionOffer> collect_offers(const ProcessRef& p, const DefinitionsTable& defs);

// Dynamic state of one component. Immutable after construction; the key,
// interface evaluation and offers are computed eagerly so states can be
// shared freely between threads.
struct ComponentState {
  ComponentStaticRef def;
  KnowledgeState knowledge;
  ProcessRef process;
  std::vector<Envelope> envelopes;  // kept sorted

  std::string key;
  InterfaceEvaluation eval;
  std::string eval_key;  // serialized eval, used in label keys and matching
  std::vector<ActionOffer> offers;

  // predicate satisfaction memo; the same predicates are tested against the
  // same state many times during label enumeration and synchronization
  mutable std::mutex memo_lock;
  mutable std::map<PredicateRef, bool> pred_memo;
};

bool satisfies_cached(const ComponentState& c, const PredicateRef& p);

using CompPtr = std::shared_ptr<const ComponentState>;

// prev, when given and holding the same process term, donates its offer list
CompPtr make_component_state(ComponentStaticRef def, const DefinitionsTable& defs,
                             KnowledgeState k, ProcessRef p, std::vector<Envelope> envelopes = {},
                             const ComponentState* prev = nullptr);

struct CompLess {
  bool operator()(const CompPtr& a, const CompPtr& b) const {
    if (a == b) return false;
    return a->key < b->key;
  }
};

struct SystemState {
  std::vector<CompPtr> comps;

  SystemState with_replaced(std::size_t index, CompPtr c) const {
    SystemState out = *this;
    out.comps[index] = std::move(c);
    return out;
  }

  std::string key() const {
    std::string out;
    for (const auto& c : comps) {
      out += c->key;
      out += '\x1f';
    }
    return out;
  }

  std::string describe() const;  // short human-readable form
};

struct SystemLess {
  bool operator()(const SystemState& a, const SystemState& b) const {
    const std::size_t n = a.comps.size();
    if (n != b.comps.size()) return n < b.comps.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (a.comps[i] == b.comps[i]) continue;
      int c = a.comps[i]->key.compare(b.comps[i]->key);
      if (c != 0) return c < 0;
    }
    return false;
  }
};

// Builds the runtime model and initial state from term-level components.
std::pair<Model, SystemState> instantiate(std::vector<Component> components, DefinitionsTable defs,
                                          std::shared_ptr<const RateConfig> rates);

}  // namespace stocs

#endif
