#include "stocs/semantics.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <stdexcept>

namespace stocs {

const char* semantics_name(Semantics s) { return s == Semantics::act_or ? "act-or" : "net-or"; }

const char* semantics_long_name(Semantics s) {
  return s == Semantics::act_or ? "act-or" : "net-or(put)+act-or(gq)";
}

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------

ProcessLabel ProcessLabel::output_put(Item t, Target c) {
  ProcessLabel l;
  l.kind = Kind::out_put;
  l.item = std::move(t);
  l.target = std::move(c);
  return l;
}

ProcessLabel ProcessLabel::output_gq(ActionKind kind, InterfaceEvaluation dst, Template tmpl,
                                     Item t, Target c) {
  ProcessLabel l;
  l.kind = Kind::out_gq;
  l.gq_kind = kind;
  l.dst_eval = std::move(dst);
  l.tmpl = std::move(tmpl);
  l.item = std::move(t);
  l.target = std::move(c);
  return l;
}

ProcessLabel ProcessLabel::output_env(Item t, PredicateRef pred) {
  ProcessLabel l;
  l.kind = Kind::out_env;
  l.item = std::move(t);
  l.env_pred = std::move(pred);
  return l;
}

namespace {

std::string label_key_of(SystemLabel::Kind kind, const std::string& src_key,
                         ActionKind gq_kind, const Item& item, const Template& tmpl,
                         bool target_self, const PredicateRef& pred) {
  std::string key;
  switch (kind) {
    case SystemLabel::Kind::sync_put_self: key = "ps!"; break;
    case SystemLabel::Kind::output_put: key = "po!"; break;
    case SystemLabel::Kind::input_put: key = "pi!"; break;
    case SystemLabel::Kind::sync_gq:
      key = gq_kind == ActionKind::get ? "get!" : "qry!";
      break;
    case SystemLabel::Kind::env_deliver: key = "env!"; break;
  }
  if (kind != SystemLabel::Kind::env_deliver) key += src_key;
  key += '!';
  if (kind == SystemLabel::Kind::sync_gq) {
    key += template_to_string(tmpl);
    key += '!';
  }
  key += item_to_string(item);
  key += '!';
  if (kind == SystemLabel::Kind::sync_put_self)
    key += "self";
  else if (kind == SystemLabel::Kind::sync_gq && target_self)
    key += "self";
  else if (pred)
    key += print_predicate(pred);
  return key;
}

}  // namespace

SystemLabel SystemLabel::put_self(InterfaceEvaluation src, Item t) {
  SystemLabel l;
  l.kind = Kind::sync_put_self;
  l.src = std::move(src);
  l.src_key = evaluation_to_string(l.src);
  l.item = std::move(t);
  l.key = label_key_of(l.kind, l.src_key, l.gq_kind, l.item, l.tmpl, true, nullptr);
  return l;
}

SystemLabel SystemLabel::put_output(InterfaceEvaluation src, Item t, PredicateRef pred) {
  SystemLabel l;
  l.kind = Kind::output_put;
  l.src = std::move(src);
  l.src_key = evaluation_to_string(l.src);
  l.item = std::move(t);
  l.target_self = false;
  l.pred = std::move(pred);
  l.key = label_key_of(l.kind, l.src_key, l.gq_kind, l.item, l.tmpl, false, l.pred);
  return l;
}

SystemLabel SystemLabel::put_input(InterfaceEvaluation src, Item t, PredicateRef pred) {
  SystemLabel l = put_output(std::move(src), std::move(t), std::move(pred));
  l.kind = Kind::input_put;
  l.key[1] = 'i';
  return l;
}

SystemLabel SystemLabel::gq_sync(InterfaceEvaluation src, ActionKind kind, Template tmpl, Item t,
                                 Target target) {
  SystemLabel l;
  l.kind = Kind::sync_gq;
  l.src = std::move(src);
  l.src_key = evaluation_to_string(l.src);
  l.gq_kind = kind;
  l.tmpl = std::move(tmpl);
  l.item = std::move(t);
  l.target_self = target.self;
  l.pred = target.pred;
  l.key = label_key_of(l.kind, l.src_key, l.gq_kind, l.item, l.tmpl, l.target_self, l.pred);
  return l;
}

SystemLabel SystemLabel::envelope(Item t, PredicateRef pred) {
  SystemLabel l;
  l.kind = Kind::env_deliver;
  l.item = std::move(t);
  l.target_self = false;
  l.pred = std::move(pred);
  l.key = label_key_of(l.kind, l.src_key, l.gq_kind, l.item, l.tmpl, false, l.pred);
  return l;
}

// ---------------------------------------------------------------------------
// Process relation
// ---------------------------------------------------------------------------

namespace {

bool same_predicate(const PredicateRef& a, const PredicateRef& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return print_predicate(a) == print_predicate(b);
}

bool same_target(const Target& a, const Target& b) {
  if (a.self != b.self) return false;
  return a.self || same_predicate(a.pred, b.pred);
}

Template template_of_tuple(const Tuple& t) {
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
        throw std::logic_error("unresolved variable '" + f.name + "' in template");
    }
  }
  return out;
}

bool same_template(const Template& a, const Template& b) {
  if (a.fields.size() != b.fields.size()) return false;
  for (std::size_t i = 0; i < a.fields.size(); ++i) {
    const auto& fa = a.fields[i];
    const auto& fb = b.fields[i];
    if (fa.value.has_value() != fb.value.has_value()) return false;
    if (fa.value) {
      if (!(*fa.value == *fb.value)) return false;
    } else if (fa.formal != fb.formal) {
      return false;
    }
  }
  return true;
}

constexpr int kMaxUnfoldDepth = 4096;

ProcCont process_step_rec(const Model& model, const ProcessRef& p, const ProcessLabel& label,
                          const InterfaceEvaluation& self_eval, int depth) {
  if (depth > kMaxUnfoldDepth)
    throw std::runtime_error("definition unfolding exceeded depth limit (unguarded recursion?)");
  switch (p->kind) {
    case Process::Kind::inert:
      return ProcCont::zero();

    case Process::Kind::prefix: {
      const Action& a = p->act;
      if (label.kind == ProcessLabel::Kind::out_put) {
        if (a.kind != ActionKind::put) return ProcCont::zero();
        if (!a.payload.ground())
          throw std::logic_error("put payload not ground at execution: " + print_action(a));
        if (!(a.payload.to_item() == label.item)) return ProcCont::zero();
        if (!same_target(a.target, label.target)) return ProcCont::zero();
        auto desc = ActionDescriptor::put_action(label.item, a.target.self, a.target.pred);
        double lambda = model.rates->rate(self_eval, desc, nullptr);
        return ProcCont::point(p->cont, lambda);
      }
      if (label.kind == ProcessLabel::Kind::out_gq) {
        if (a.kind != label.gq_kind) return ProcCont::zero();
        if (!same_target(a.target, label.target)) return ProcCont::zero();
        Template tmpl = template_of_tuple(a.payload);
        if (!same_template(tmpl, label.tmpl)) return ProcCont::zero();
        auto theta = match(tmpl, label.item);
        if (!theta) return ProcCont::zero();  // blocked: label item does not match
        auto desc = ActionDescriptor::gq_action(label.gq_kind, tmpl, label.item, a.target.self,
                                                a.target.pred);
        double lambda = model.rates->rate(self_eval, desc, &label.dst_eval);
        return ProcCont::point(substitute(p->cont, *theta), lambda);
      }
      return ProcCont::zero();  // prefixes ignore envelope labels
    }

    case Process::Kind::choice: {
      ProcCont l = process_step_rec(model, p->left, label, self_eval, depth);
      ProcCont r = process_step_rec(model, p->right, label, self_eval, depth);
      return l + r;
    }

    case Process::Kind::parallel: {
      ProcCont l = process_step_rec(model, p->left, label, self_eval, depth);
      ProcCont r = process_step_rec(model, p->right, label, self_eval, depth);
      ProcCont out;
      for (const auto& [q, mass] : l.entries()) out.add_mass(make_parallel(q, p->right), mass);
      for (const auto& [q, mass] : r.entries()) out.add_mass(make_parallel(p->left, q), mass);
      return out;
    }

    case Process::Kind::call: {
      auto it = model.defs.find(p->call_name);
      if (it == model.defs.end())
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
      return process_step_rec(model, substitute(def.body, theta), label, self_eval, depth + 1);
    }

    case Process::Kind::envelope: {
      if (label.kind != ProcessLabel::Kind::out_env) return ProcCont::zero();
      if (!(p->env_item == label.item)) return ProcCont::zero();
      if (!same_predicate(p->env_pred, label.env_pred)) return ProcCont::zero();
      return ProcCont::point(make_nil(), p->env_rate);
    }
  }
  return ProcCont::zero();
}

}  // namespace

ProcCont process_step(const Model& model, const ProcessRef& p, const ProcessLabel& label,
                      const InterfaceEvaluation& self_eval) {
  return process_step_rec(model, p, label, self_eval, 0);
}

// ---------------------------------------------------------------------------
// Component relation
// ---------------------------------------------------------------------------

namespace {

CompPtr rebuild(const Model& model, const CompPtr& c, KnowledgeState k, ProcessRef p,
                std::vector<Envelope> envelopes) {
  return make_component_state(c->def, model.defs, std::move(k), std::move(p),
                              std::move(envelopes), c.get());
}

// pairs a knowledge distribution with a process continuation
CompCont knowledge_process_product(const Model& model, const CompPtr& c, const StateDist& pi,
                                   const ProcCont& pc) {
  CompCont out;
  for (const auto& [k, pk] : pi.entries)
    for (const auto& [q, pq] : pc.entries())
      out.add_mass(rebuild(model, c, k, q, c->envelopes), pk * pq);
  return out;
}

}  // namespace

CompCont component_put_local(const Model& model, std::size_t, const CompPtr& c, const Item& t) {
  ProcCont pc =
      process_step(model, c->process, ProcessLabel::output_put(t, Target::self_target()), c->eval);
  if (pc.empty()) return CompCont::zero();
  StateDist pi = c->def->repository->add(c->knowledge, t);
  return knowledge_process_product(model, c, pi, pc);
}

CompCont component_put_output(const Model& model, std::size_t, const CompPtr& c, const Item& t,
                              const PredicateRef& pred) {
  ProcCont pc = process_step(model, c->process,
                             ProcessLabel::output_put(t, Target::predicate(pred)), c->eval);
  if (pc.empty()) return CompCont::zero();
  CompCont out;
  for (const auto& [q, pq] : pc.entries())
    out.add_mass(rebuild(model, c, c->knowledge, q, c->envelopes), pq);
  return out;
}

CompCont component_put_input(const Model& model, std::size_t, const CompPtr& c,
                             const InterfaceEvaluation& src, const Item& t,
                             const PredicateRef& pred, Semantics sem) {
  if (sem == Semantics::act_or) {
    if (!satisfies_cached(*c, pred)) return CompCont::unit(c);  // refusal, no effect
    auto desc = ActionDescriptor::put_action(t, false, pred);
    double p_err = model.rates->loss_probability(src, desc, &c->eval);
    CompCont out;
    out.add_mass(c, p_err);  // delivery failure leaves the component unchanged
    StateDist pi = c->def->repository->add(c->knowledge, t);
    for (const auto& [k, pk] : pi.entries)
      out.add_mass(rebuild(model, c, k, c->process, c->envelopes), pk * (1.0 - p_err));
    return out;
  }

  // network-oriented: attach an envelope; the predicate is evaluated at
  // delivery time, not now
  auto desc = ActionDescriptor::envelope_action(t, pred);
  double mu = model.rates->rate(src, desc, &c->eval);
  double p_err = model.rates->loss_probability(src, desc, &c->eval);
  CompCont out;
  out.add_mass(c, p_err);
  std::vector<Envelope> envs = c->envelopes;
  envs.push_back(Envelope{t, pred, mu});
  out.add_mass(rebuild(model, c, c->knowledge, c->process, std::move(envs)), 1.0 - p_err);
  return out;
}

CompCont component_gq_local(const Model& model, std::size_t, const CompPtr& c, ActionKind kind,
                            const Template& tmpl, const Item& t) {
  ProcCont pc = process_step(
      model, c->process,
      ProcessLabel::output_gq(kind, c->eval, tmpl, t, Target::self_target()), c->eval);
  if (pc.empty()) return CompCont::zero();
  CompCont out;
  if (kind == ActionKind::get) {
    auto dist = c->def->repository->withdraw(c->knowledge, tmpl);
    if (!dist) return CompCont::zero();
    for (const auto& [pair, pk] : dist->entries) {
      if (!(pair.second == t)) continue;
      for (const auto& [q, pq] : pc.entries())
        out.add_mass(rebuild(model, c, pair.first, q, c->envelopes), pk * pq);
    }
  } else {
    auto dist = c->def->repository->infer(c->knowledge, tmpl);
    if (!dist) return CompCont::zero();
    for (const auto& [item, pk] : dist->entries) {
      if (!(item == t)) continue;
      for (const auto& [q, pq] : pc.entries())
        out.add_mass(rebuild(model, c, c->knowledge, q, c->envelopes), pk * pq);
    }
  }
  return out;
}

CompCont component_gq_output(const Model& model, std::size_t, const CompPtr& c, ActionKind kind,
                             const Template& tmpl, const Item& t, const PredicateRef& pred,
                             const InterfaceEvaluation& dst_eval) {
  ProcCont pc = process_step(
      model, c->process,
      ProcessLabel::output_gq(kind, dst_eval, tmpl, t, Target::predicate(pred)), c->eval);
  if (pc.empty()) return CompCont::zero();
  CompCont out;
  for (const auto& [q, pq] : pc.entries())
    out.add_mass(rebuild(model, c, c->knowledge, q, c->envelopes), pq);
  return out;
}

CompCont component_gq_input(const Model& model, std::size_t, const CompPtr& c, ActionKind kind,
                            const Template& tmpl, const Item& t, const PredicateRef& pred) {
  // unlike put, a get/qry input is not always enabled: a component that does
  // not satisfy the predicate or cannot produce the item is simply not a
  // racing responder
  if (!satisfies_cached(*c, pred)) return CompCont::zero();
  CompCont out;
  if (kind == ActionKind::get) {
    auto dist = c->def->repository->withdraw(c->knowledge, tmpl);
    if (!dist) return CompCont::zero();
    for (const auto& [pair, pk] : dist->entries) {
      if (!(pair.second == t)) continue;
      out.add_mass(rebuild(model, c, pair.first, c->process, c->envelopes), pk);
    }
  } else {
    auto dist = c->def->repository->infer(c->knowledge, tmpl);
    if (!dist) return CompCont::zero();
    for (const auto& [item, pk] : dist->entries) {
      if (!(item == t)) continue;
      out.add_mass(c, pk);
    }
  }
  return out;
}

CompCont component_env_deliver(const Model& model, std::size_t, const CompPtr& c, const Item& t,
                               const PredicateRef& pred) {
  CompCont out;
  bool accept = satisfies_cached(*c, pred);

  // envelope terms living inside the process
  ProcCont pc = process_step(model, c->process, ProcessLabel::output_env(t, pred), c->eval);
  if (!pc.empty()) {
    if (accept) {
      StateDist pi = c->def->repository->add(c->knowledge, t);
      out += knowledge_process_product(model, c, pi, pc);
    } else {
      for (const auto& [q, pq] : pc.entries())
        out.add_mass(rebuild(model, c, c->knowledge, q, c->envelopes), pq);
    }
  }

  // envelopes held in the component's multiset
  for (std::size_t i = 0; i < c->envelopes.size(); ++i) {
    const Envelope& env = c->envelopes[i];
    if (!(env.item == t) || !same_predicate(env.pred, pred)) continue;
    std::vector<Envelope> rest;
    rest.reserve(c->envelopes.size() - 1);
    for (std::size_t j = 0; j < c->envelopes.size(); ++j)
      if (j != i) rest.push_back(c->envelopes[j]);
    if (accept) {
      StateDist pi = c->def->repository->add(c->knowledge, t);
      for (const auto& [k, pk] : pi.entries)
        out.add_mass(rebuild(model, c, k, c->process, rest), env.rate * pk);
    } else {
      out.add_mass(rebuild(model, c, c->knowledge, c->process, rest), env.rate);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// System relation
// ---------------------------------------------------------------------------

namespace {

// cartesian product of per-slot continuations; a null slot is the identity
void product_rec(const SystemState& base, const std::vector<const CompCont*>& slots,
                 std::size_t idx, std::vector<CompPtr>& current, double mass, SysCont& out) {
  if (idx == slots.size()) {
    SystemState s;
    s.comps = current;
    out.add_mass(std::move(s), mass);
    return;
  }
  if (!slots[idx]) {
    current.push_back(base.comps[idx]);
    product_rec(base, slots, idx + 1, current, mass, out);
    current.pop_back();
    return;
  }
  for (const auto& [comp, m] : slots[idx]->entries()) {
    current.push_back(comp);
    product_rec(base, slots, idx + 1, current, mass * m, out);
    current.pop_back();
  }
}

SysCont compose_slots(const SystemState& base, const std::vector<const CompCont*>& slots) {
  SysCont out;
  std::vector<CompPtr> current;
  current.reserve(base.comps.size());
  product_rec(base, slots, 0, current, 1.0, out);
  return out;
}

// lifts a single component continuation by interleaving
void add_interleaved(const SystemState& base, std::size_t index, const CompCont& cont,
                     SysCont& out) {
  for (const auto& [comp, m] : cont.entries()) out.add_mass(base.with_replaced(index, comp), m);
}

bool offers_put(const CompPtr& c, const Item& t, bool self, const PredicateRef& pred) {
  for (const auto& o : c->offers) {
    if (o.kind != ActionOffer::Kind::put) continue;
    if (o.target.self != self) continue;
    if (!(o.item == t)) continue;
    if (self || same_predicate(o.target.pred, pred)) return true;
  }
  return false;
}

bool offers_gq(const CompPtr& c, ActionKind kind, const Template& tmpl, bool self,
               const PredicateRef& pred) {
  for (const auto& o : c->offers) {
    if (o.kind != ActionOffer::Kind::gq || o.gq_kind != kind) continue;
    if (o.target.self != self) continue;
    if (!same_template(o.tmpl, tmpl)) continue;
    if (self || same_predicate(o.target.pred, pred)) return true;
  }
  return false;
}

}  // namespace

SysCont system_step(const Model& model, const SystemState& s, const SystemLabel& label,
                    Semantics sem) {
  const std::size_t n = s.comps.size();
  SysCont out;

  switch (label.kind) {
    case SystemLabel::Kind::sync_put_self: {
      for (std::size_t i = 0; i < n; ++i) {
        if (s.comps[i]->eval_key != label.src_key) continue;
        if (!offers_put(s.comps[i], label.item, true, nullptr)) continue;
        add_interleaved(s, i, component_put_local(model, i, s.comps[i], label.item), out);
      }
      return out;
    }

    case SystemLabel::Kind::output_put: {
      // one emitter, every other component takes the corresponding input
      std::vector<CompCont> inputs(n);
      std::vector<bool> input_ready(n, false);
      auto input_of = [&](std::size_t j) -> const CompCont& {
        if (!input_ready[j]) {
          inputs[j] =
              component_put_input(model, j, s.comps[j], label.src, label.item, label.pred, sem);
          input_ready[j] = true;
        }
        return inputs[j];
      };
      for (std::size_t i = 0; i < n; ++i) {
        if (s.comps[i]->eval_key != label.src_key) continue;
        if (!offers_put(s.comps[i], label.item, false, label.pred)) continue;
        CompCont emit = component_put_output(model, i, s.comps[i], label.item, label.pred);
        if (emit.empty()) continue;
        std::vector<const CompCont*> slots(n, nullptr);
        slots[i] = &emit;
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) slots[j] = &input_of(j);
        out += compose_slots(s, slots);
      }
      return out;
    }

    case SystemLabel::Kind::input_put: {
      std::vector<CompCont> inputs(n);
      std::vector<const CompCont*> slots(n);
      for (std::size_t j = 0; j < n; ++j) {
        inputs[j] =
            component_put_input(model, j, s.comps[j], label.src, label.item, label.pred, sem);
        slots[j] = &inputs[j];
      }
      return compose_slots(s, slots);
    }

    case SystemLabel::Kind::sync_gq: {
      if (label.target_self) {
        for (std::size_t i = 0; i < n; ++i) {
          if (s.comps[i]->eval_key != label.src_key) continue;
          if (!offers_gq(s.comps[i], label.gq_kind, label.tmpl, true, nullptr)) continue;
          add_interleaved(
              s, i,
              component_gq_local(model, i, s.comps[i], label.gq_kind, label.tmpl, label.item),
              out);
        }
        return out;
      }
      // unicast: one transition per (requester, responder) pair; the
      // responder's mass is the probability its repository yields the item
      std::vector<CompCont> inputs(n);
      std::vector<bool> input_ready(n, false);
      auto input_of = [&](std::size_t j) -> const CompCont& {
        if (!input_ready[j]) {
          inputs[j] = component_gq_input(model, j, s.comps[j], label.gq_kind, label.tmpl,
                                         label.item, label.pred);
          input_ready[j] = true;
        }
        return inputs[j];
      };
      for (std::size_t i = 0; i < n; ++i) {
        if (s.comps[i]->eval_key != label.src_key) continue;
        if (!offers_gq(s.comps[i], label.gq_kind, label.tmpl, false, label.pred)) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          const CompCont& in_j = input_of(j);
          if (in_j.empty()) continue;
          CompCont emit = component_gq_output(model, i, s.comps[i], label.gq_kind, label.tmpl,
                                              label.item, label.pred, s.comps[j]->eval);
          if (emit.empty()) continue;
          for (const auto& [pc, pm] : emit.entries())
            for (const auto& [qc, qm] : in_j.entries()) {
              SystemState succ = s;
              succ.comps[i] = pc;
              succ.comps[j] = qc;
              out.add_mass(std::move(succ), pm * qm);
            }
        }
      }
      return out;
    }

    case SystemLabel::Kind::env_deliver: {
      for (std::size_t i = 0; i < n; ++i) {
        CompCont cont = component_env_deliver(model, i, s.comps[i], label.item, label.pred);
        if (!cont.empty()) add_interleaved(s, i, cont, out);
      }
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Label enumeration
// ---------------------------------------------------------------------------

namespace {

void gq_candidate_items(const CompPtr& responder, ActionKind kind, const Template& tmpl,
                        std::vector<Item>& out) {
  if (kind == ActionKind::get) {
    auto dist = responder->def->repository->withdraw(responder->knowledge, tmpl);
    if (!dist) return;
    for (const auto& [pair, p] : dist->entries) out.push_back(pair.second);
  } else {
    auto dist = responder->def->repository->infer(responder->knowledge, tmpl);
    if (!dist) return;
    for (const auto& [item, p] : dist->entries) out.push_back(item);
  }
}

}  // namespace

std::vector<EnabledTransition> enabled_transitions(const Model& model, const SystemState& s,
                                                   Semantics sem) {
  const std::size_t n = s.comps.size();
  std::map<std::string, SystemLabel> labels;
  auto add_label = [&](SystemLabel l) { labels.try_emplace(l.key, std::move(l)); };

  // components with the same evaluation and offer produce the same labels;
  // scan each group once
  std::set<std::string> offer_groups;

  for (std::size_t i = 0; i < n; ++i) {
    const CompPtr& c = s.comps[i];
    for (const auto& offer : c->offers) {
      if (!offer_groups.insert(c->eval_key + '\x1f' + offer.key).second) continue;
      switch (offer.kind) {
        case ActionOffer::Kind::put:
          if (offer.target.self)
            add_label(SystemLabel::put_self(c->eval, offer.item));
          else
            add_label(SystemLabel::put_output(c->eval, offer.item, offer.target.pred));
          break;
        case ActionOffer::Kind::gq: {
          std::vector<Item> items;
          if (offer.target.self) {
            gq_candidate_items(c, offer.gq_kind, offer.tmpl, items);
            for (auto& t : items)
              add_label(SystemLabel::gq_sync(c->eval, offer.gq_kind, offer.tmpl, std::move(t),
                                             Target::self_target()));
          } else {
            // candidate responders include every component; the pairing in
            // system_step enforces that nobody answers its own request, and
            // labels whose only responder is the emitter come out empty
            for (std::size_t j = 0; j < n; ++j) {
              if (!satisfies_cached(*s.comps[j], offer.target.pred)) continue;
              items.clear();
              gq_candidate_items(s.comps[j], offer.gq_kind, offer.tmpl, items);
              for (auto& t : items)
                add_label(SystemLabel::gq_sync(c->eval, offer.gq_kind, offer.tmpl, std::move(t),
                                               offer.target));
            }
          }
          break;
        }
        case ActionOffer::Kind::envelope:
          add_label(SystemLabel::envelope(offer.item, offer.env_pred));
          break;
      }
    }
    for (const auto& env : c->envelopes) add_label(SystemLabel::envelope(env.item, env.pred));
  }

  std::vector<EnabledTransition> out;
  out.reserve(labels.size());
  for (auto& [key, label] : labels) {
    SysCont cont = system_step(model, s, label, sem);
    if (!cont.empty()) out.push_back(EnabledTransition{std::move(label), std::move(cont)});
  }
  return out;
}

}  // namespace stocs
