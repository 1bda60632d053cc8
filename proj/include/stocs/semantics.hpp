#ifndef STOCS_SEMANTICS_HPP
#define STOCS_SEMANTICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "stocs/futs.hpp"
#include "stocs/model.hpp"

namespace stocs {

// Two semantic granularities for put: action-oriented delivers a broadcast
// in one timed transition, network-oriented splits it into envelope
// shipping and per-receiver delivery. get/qry always use the single-step
// rules, so the network-oriented mode is "net-or(put)+act-or(gq)".
enum class Semantics { act_or, net_or };

const char* semantics_name(Semantics s);        // CLI flag value
const char* semantics_long_name(Semantics s);   // honest manifest name

// ---------------------------------------------------------------------------
// Labels
// ---------------------------------------------------------------------------

// Process-level labels: an emitted put, an emitted get/qry request carrying
// the destination evaluation and the matched item, or an envelope delivery.
struct ProcessLabel {
  enum class Kind { out_put, out_gq, out_env };

  Kind kind = Kind::out_put;
  Item item;
  Target target;
  // out_gq
  ActionKind gq_kind = ActionKind::get;
  Template tmpl;
  InterfaceEvaluation dst_eval;
  // out_env
  PredicateRef env_pred;

  static ProcessLabel output_put(Item t, Target c);
  static ProcessLabel output_gq(ActionKind kind, InterfaceEvaluation dst, Template tmpl, Item t,
                                Target c);
  static ProcessLabel output_env(Item t, PredicateRef pred);
};

// System-level labels. Input/output labels exist for composition; the
// labels that constitute CTMC transitions are sync_put_self, output_put
// (a completed broadcast), sync_gq and env_deliver.
struct SystemLabel {
  enum class Kind { sync_put_self, output_put, input_put, sync_gq, env_deliver };

  Kind kind = Kind::sync_put_self;
  InterfaceEvaluation src;  // source component evaluation (empty for env_deliver)
  ActionKind gq_kind = ActionKind::get;
  Item item;
  Template tmpl;         // sync_gq
  bool target_self = true;
  PredicateRef pred;     // target / envelope predicate

  std::string src_key;   // serialized source evaluation
  std::string key;       // canonical text; ordering and equality of labels

  static SystemLabel put_self(InterfaceEvaluation src, Item t);
  static SystemLabel put_output(InterfaceEvaluation src, Item t, PredicateRef pred);
  static SystemLabel put_input(InterfaceEvaluation src, Item t, PredicateRef pred);
  static SystemLabel gq_sync(InterfaceEvaluation src, ActionKind kind, Template tmpl, Item t,
                             Target target);
  static SystemLabel envelope(Item t, PredicateRef pred);
};

// ---------------------------------------------------------------------------
// Steppers
// ---------------------------------------------------------------------------

using ProcCont = ContinuationFn<ProcessRef, ProcessLess>;
using CompCont = ContinuationFn<CompPtr, CompLess>;
using SysCont = ContinuationFn<SystemState, SystemLess>;

// Process relation: total in (P, label); empty continuation where the
// blocking rules apply.
ProcCont process_step(const Model& model, const ProcessRef& p, const ProcessLabel& label,
                      const InterfaceEvaluation& self_eval);

// Component put rules. act-or input either refuses (predicate unsatisfied,
// Dirac on the unchanged component) or splits mass between a delivery
// failure and the knowledge update; net-or input attaches an envelope
// without evaluating the predicate. Input continuations always have total
// mass one.
CompCont component_put_local(const Model& model, std::size_t index, const CompPtr& c,
                             const Item& t);
CompCont component_put_output(const Model& model, std::size_t index, const CompPtr& c,
                              const Item& t, const PredicateRef& pred);
CompCont component_put_input(const Model& model, std::size_t index, const CompPtr& c,
                             const InterfaceEvaluation& src, const Item& t,
                             const PredicateRef& pred, Semantics sem);

// Component get/qry rules (unicast): the local synchronization, the lifted
// request, and the responder side whose mass is the probability that the
// repository yields exactly the label's item. A blocked side is the empty
// continuation.
CompCont component_gq_local(const Model& model, std::size_t index, const CompPtr& c,
                            ActionKind kind, const Template& tmpl, const Item& t);
CompCont component_gq_output(const Model& model, std::size_t index, const CompPtr& c,
                             ActionKind kind, const Template& tmpl, const Item& t,
                             const PredicateRef& pred, const InterfaceEvaluation& dst_eval);
CompCont component_gq_input(const Model& model, std::size_t index, const CompPtr& c,
                            ActionKind kind, const Template& tmpl, const Item& t,
                            const PredicateRef& pred);

// Envelope delivery at one component: accepted (knowledge updated) when the
// predicate holds now, refused (knowledge unchanged) otherwise; either way
// the envelope is consumed. Covers envelopes held in the state's multiset
// and envelope terms inside the process.
CompCont component_env_deliver(const Model& model, std::size_t index, const CompPtr& c,
                               const Item& t, const PredicateRef& pred);

// Full continuation of a system under one label.
SysCont system_step(const Model& model, const SystemState& s, const SystemLabel& label,
                    Semantics sem);

struct EnabledTransition {
  SystemLabel label;
  SysCont continuation;
};

// All CTMC-relevant labels with non-empty continuations, sorted by label
// key; complete and duplicate-free.
std::vector<EnabledTransition> enabled_transitions(const Model& model, const SystemState& s,
                                                   Semantics sem);

}  // namespace stocs

#endif
