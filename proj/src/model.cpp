#include "stocs/model.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace stocs {

SystemTermRef system_leaf(Component c) {
  auto s = std::make_shared<SystemTerm>();
  s->comp = std::make_shared<Component>(std::move(c));
  return s;
}

SystemTermRef system_par(SystemTermRef left, SystemTermRef right) {
  auto s = std::make_shared<SystemTerm>();
  s->left = std::move(left);
  s->right = std::move(right);
  return s;
}

namespace {

void flatten_into(const SystemTermRef& s, std::vector<Component>& out) {
  if (s->comp) {
    out.push_back(*s->comp);
    return;
  }
  flatten_into(s->left, out);
  flatten_into(s->right, out);
}

}  // namespace

std::vector<Component> flatten(const SystemTermRef& s) {
  std::vector<Component> out;
  flatten_into(s, out);
  return out;
}

std::string Envelope::to_string() const {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", rate);
  return "[" + item_to_string(item) + " if " + print_predicate(pred) + " @" + buf + "]";
}

// ---------------------------------------------------------------------------
// Offer collection
// ---------------------------------------------------------------------------

namespace {

Template template_of(const Tuple& t) {
  Template out;
  out.fields.reserve(t.fields.size());
  for (const auto& f : t.fields) {
    switch (f.kind) {
      case TupleField::Kind::value:
        out.fields.push_back(TemplateField::ground(f.v));
        break;
      case TupleField::Kind::formal:
        out.fields.push_back(TemplateField::var(f.name));
        break;
      case TupleField::Kind::var:
        throw std::logic_error("unresolved variable '" + f.name +
                               "' in template at execution time");
    }
  }
  return out;
}

constexpr int kMaxUnfoldDepth = 4096;

void collect_offers_rec(const ProcessRef& p, const DefinitionsTable& defs,
                        std::vector<ActionOffer>& out, std::set<std::string>& seen, int depth) {
  if (depth > kMaxUnfoldDepth)
    throw std::runtime_error("definition unfolding exceeded depth limit (unguarded recursion?)");
  switch (p->kind) {
    case Process::Kind::inert:
      return;
    case Process::Kind::prefix: {
      ActionOffer offer;
      const Action& a = p->act;
      if (a.kind == ActionKind::put) {
        offer.kind = ActionOffer::Kind::put;
        offer.item = a.payload.to_item();
      } else {
        offer.kind = ActionOffer::Kind::gq;
        offer.gq_kind = a.kind;
        offer.tmpl = template_of(a.payload);
      }
      offer.target = a.target;
      offer.key = print_action(a);
      if (seen.insert(offer.key).second) out.push_back(std::move(offer));
      return;
    }
    case Process::Kind::choice:
    case Process::Kind::parallel:
      collect_offers_rec(p->left, defs, out, seen, depth);
      collect_offers_rec(p->right, defs, out, seen, depth);
      return;
    case Process::Kind::call: {
      auto it = defs.find(p->call_name);
      if (it == defs.end())
        throw std::runtime_error("call to undefined process '" + p->call_name + "'");
      const ProcessDef& def = it->second;
      if (def.params.size() != p->call_args.size())
        throw std::runtime_error("arity mismatch calling '" + p->call_name + "'");
      Substitution theta;
      for (std::size_t i = 0; i < def.params.size(); ++i) {
        const auto& arg = p->call_args[i];
        if (arg.kind != TupleField::Kind::value)
          throw std::logic_error("non-ground argument in call to '" + p->call_name + "'");
        theta[def.params[i]] = arg.v;
      }
      collect_offers_rec(substitute(def.body, theta), defs, out, seen, depth + 1);
      return;
    }
    case Process::Kind::envelope: {
      ActionOffer offer;
      offer.kind = ActionOffer::Kind::envelope;
      offer.item = p->env_item;
      offer.env_pred = p->env_pred;
      offer.key = "env:" + p->key;
      if (seen.insert(offer.key).second) out.push_back(std::move(offer));
      return;
    }
  }
}

}  // namespace

std::vector<ActionOffer> collect_offers(const ProcessRef& p, const DefinitionsTable& defs) {
  std::vector<ActionOffer> out;
  std::set<std::string> seen;
  collect_offers_rec(p, defs, out, seen, 0);
  return out;
}

CompPtr make_component_state(ComponentStaticRef def, const DefinitionsTable& defs,
                             KnowledgeState k, ProcessRef p, std::vector<Envelope> envelopes,
                             const ComponentState* prev) {
  auto state = std::make_shared<ComponentState>();
  state->def = std::move(def);
  state->knowledge = std::move(k);
  state->process = std::move(p);
  std::sort(envelopes.begin(), envelopes.end(), [](const Envelope& a, const Envelope& b) {
    return a.to_string() < b.to_string();
  });
  state->envelopes = std::move(envelopes);

  state->key = state->knowledge.to_string();
  state->key += '\x1e';
  state->key += state->process->key;
  for (const auto& env : state->envelopes) {
    state->key += '\x1e';
    state->key += env.to_string();
  }

  state->eval = evaluate(state->def->interface, state->def->name, state->knowledge);
  state->eval_key = evaluation_to_string(state->eval);
  if (prev && prev->process == state->process)
    state->offers = prev->offers;
  else
    state->offers = collect_offers(state->process, defs);
  return state;
}

bool satisfies_cached(const ComponentState& c, const PredicateRef& p) {
  if (p->kind == Predicate::Kind::truth) return true;
  std::lock_guard<std::mutex> guard(c.memo_lock);
  auto it = c.pred_memo.find(p);
  if (it != c.pred_memo.end()) return it->second;
  bool result = satisfies(c.eval, p);
  c.pred_memo.emplace(p, result);
  return result;
}

std::string SystemState::describe() const {
  std::string out;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (i) out += " || ";
    out += comps[i]->def->name;
    out += comps[i]->knowledge.to_string();
    out += ":";
    out += comps[i]->process->key;
    for (const auto& env : comps[i]->envelopes) out += env.to_string();
  }
  return out;
}

std::pair<Model, SystemState> instantiate(std::vector<Component> components, DefinitionsTable defs,
                                          std::shared_ptr<const RateConfig> rates) {
  if (components.empty()) throw std::invalid_argument("a system needs at least one component");
  Model model;
  model.defs = std::move(defs);
  model.rates = std::move(rates);
  model.components.reserve(components.size());
  for (auto& c : components) {
    auto cs = std::make_shared<ComponentStatic>();
    cs->name = c.name;
    cs->interface = c.interface;
    cs->repository = c.repository ? c.repository : tuple_space();
    model.components.push_back(std::move(cs));
  }
  SystemState init;
  init.comps.reserve(components.size());
  for (std::size_t i = 0; i < components.size(); ++i)
    init.comps.push_back(make_component_state(model.components[i], model.defs,
                                              components[i].knowledge, components[i].process));
  return {std::move(model), std::move(init)};
}

}  // namespace stocs
