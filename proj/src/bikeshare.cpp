#include "stocs/bikeshare.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace stocs {

bool BikeShareConfig::near(int a, int b) const {
  int dr = std::abs(a / cols - b / cols);
  int dc = std::abs(a % cols - b % cols);
  return dr + dc <= 1;
}

std::string BikeShareConfig::normalize() {
  if (rows < 1 || cols < 1) return "grid dimensions must be positive";
  if (users < 1) return "need at least one user";
  const int m = locations();
  if (user_locs.empty()) {
    user_locs.resize(users);
    for (int u = 0; u < users; ++u) user_locs[u] = u % m;
  }
  if (static_cast<int>(user_locs.size()) != users) return "user_locs must have one entry per user";
  for (int l : user_locs)
    if (l < 0 || l >= m) return "user location out of range";
  if (bikes.empty()) bikes.assign(m, 5);
  if (slots.empty()) slots.assign(m, 5);
  if (static_cast<int>(bikes.size()) != m || static_cast<int>(slots.size()) != m)
    return "bikes/slots must have one entry per station";
  for (int b : bikes)
    if (b < 0) return "negative bike count";
  for (int s : slots)
    if (s < 0) return "negative slot count";

  auto default_matrix = [&]() {
    std::vector<std::vector<double>> q(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i) {
      int deg = 0;
      for (int j = 0; j < m; ++j)
        if (near(i, j)) ++deg;
      for (int j = 0; j < m; ++j)
        if (near(i, j)) q[i][j] = 1.0 / deg;
    }
    return q;
  };
  if (qp.empty()) qp = default_matrix();
  if (qb.empty()) qb = default_matrix();
  for (const auto* q : {&qp, &qb}) {
    if (static_cast<int>(q->size()) != m) return "movement matrix must be m x m";
    for (const auto& row : *q) {
      if (static_cast<int>(row.size()) != m) return "movement matrix must be m x m";
      double sum = 0.0;
      for (double p : row) {
        if (p < 0.0) return "negative movement probability";
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9) return "movement matrix rows must sum to 1";
    }
  }
  for (int i = 0; i < m; ++i)
    if (!near(i, i)) return "neighborhood must be reflexive";
  return {};
}

double station_rate(BikeShareConfig::Mode mode, int availability, double coeff) {
  if (mode == BikeShareConfig::Mode::resource) return coeff * availability;
  return availability > 0 ? coeff : 0.0;
}

// ---------------------------------------------------------------------------
// Repositories
// ---------------------------------------------------------------------------

namespace {

const Value kStateTag{std::string("s")};
const Value kLocTag{std::string("loc")};
const Value kStationTag{std::string("station")};

bool tagged(const Item& item, const Value& tag) {
  return !item.fields.empty() && item.fields.front() == tag;
}

bool template_tag_is(const Template& t, const char* tag, std::size_t arity) {
  if (t.fields.size() != arity) return false;
  if (!t.fields[0].value) return false;
  return *t.fields[0].value == Value{std::string(tag)};
}

// user knowledge <s, loc>: movement through withdraw, state and position
// updates through add
class UserRepository : public Repository {
 public:
  UserRepository(std::shared_ptr<const std::vector<std::vector<double>>> qp,
                 std::shared_ptr<const std::vector<std::vector<double>>> qb)
      : qp_(std::move(qp)), qb_(std::move(qb)) {}

  StateDist add(const KnowledgeState& k, const Item& t) const override {
    if (t.fields.size() == 1 && is_string(t.fields[0])) {
      const std::string& flag = std::get<std::string>(t.fields[0]);
      if (flag == "b" || flag == "p") return StateDist{{{replace_tag(k, kStateTag, Item{{kStateTag, t.fields[0]}}), 1.0}}};
    }
    if (t.fields.size() == 2 && t.fields[0] == Value{std::string("go")})
      return StateDist{{{replace_tag(k, kLocTag, Item{{kLocTag, t.fields[1]}}), 1.0}}};
    // anything else (e.g. a broadcast aimed at stations) leaves the user
    // knowledge untouched
    return StateDist{{{k, 1.0}}};
  }

  std::optional<WithdrawDist> withdraw(const KnowledgeState& k,
                                       const Template& tmpl) const override {
    const bool p_next = template_tag_is(tmpl, "p_next", 2);
    const bool b_next = template_tag_is(tmpl, "b_next", 2);
    if (!p_next && !b_next) return Repository::withdraw(k, tmpl);
    if (tmpl.fields[1].value) return std::nullopt;  // movement binds a fresh location
    auto loc = current_loc(k);
    if (!loc) return std::nullopt;
    const auto& q = p_next ? *qp_ : *qb_;
    if (*loc >= static_cast<std::int64_t>(q.size())) return std::nullopt;
    WithdrawDist dist;
    const Value tag = tmpl.fields[0].value.value();
    for (std::size_t j = 0; j < q[*loc].size(); ++j) {
      double p = q[*loc][j];
      if (p <= 0.0) continue;
      Value dest{static_cast<std::int64_t>(j)};
      dist.entries.emplace_back(
          std::make_pair(replace_tag(k, kLocTag, Item{{kLocTag, dest}}), Item{{tag, dest}}), p);
    }
    if (dist.entries.empty()) return std::nullopt;
    return dist;
  }

 private:
  static KnowledgeState replace_tag(const KnowledgeState& k, const Value& tag, Item next) {
    std::vector<Item> items;
    items.reserve(k.items().size());
    bool replaced = false;
    for (const auto& item : k.items()) {
      if (!replaced && tagged(item, tag)) {
        items.push_back(next);
        replaced = true;
      } else {
        items.push_back(item);
      }
    }
    if (!replaced) items.push_back(std::move(next));
    return KnowledgeState(std::move(items));
  }

  static std::optional<std::int64_t> current_loc(const KnowledgeState& k) {
    for (const auto& item : k.items())
      if (tagged(item, kLocTag) && item.fields.size() == 2)
        if (const auto* i = std::get_if<std::int64_t>(&item.fields[1])) return *i;
    return std::nullopt;
  }

  std::shared_ptr<const std::vector<std::vector<double>>> qp_, qb_;
};

// station ledger <station, b_a, b_r, s_a, s_r, loc>: reservations move units
// between the available and reserved pools, transfers move them between the
// bike and slot sides; the total stays constant
class StationRepository : public Repository {
 public:
  StateDist add(const KnowledgeState& k, const Item& t) const override {
    if (t.fields.size() == 1 && t.fields[0] == Value{std::string("bike")}) {
      auto ledger = read_ledger(k);
      if (ledger) {
        auto [ba, br, sa, sr, loc] = *ledger;
        if (sr >= 1) return StateDist{{{write_ledger(k, ba + 1, br, sa, sr - 1, loc), 1.0}}};
        if (sa >= 1) return StateDist{{{write_ledger(k, ba + 1, br, sa - 1, sr, loc), 1.0}}};
        return StateDist{{{k, 1.0}}};  // full station drops the bike silently
      }
    }
    return StateDist{{{k, 1.0}}};  // stations ignore foreign items
  }

  std::optional<WithdrawDist> withdraw(const KnowledgeState& k,
                                       const Template& tmpl) const override {
    auto ledger = read_ledger(k);
    if (ledger) {
      auto [ba, br, sa, sr, loc] = *ledger;
      if (template_tag_is(tmpl, "bike_res", 2) && !tmpl.fields[1].value) {
        if (ba < 1) return std::nullopt;
        Item got{{Value{std::string("bike_res")}, loc}};
        return WithdrawDist{
            {{std::make_pair(write_ledger(k, ba - 1, br + 1, sa, sr, loc), got), 1.0}}};
      }
      if (template_tag_is(tmpl, "slot_res", 2) && !tmpl.fields[1].value) {
        if (sa < 1) return std::nullopt;
        Item got{{Value{std::string("slot_res")}, loc}};
        return WithdrawDist{
            {{std::make_pair(write_ledger(k, ba, br, sa - 1, sr + 1, loc), got), 1.0}}};
      }
      if (template_tag_is(tmpl, "bike", 1)) {
        if (br < 1) return std::nullopt;
        Item got{{Value{std::string("bike")}}};
        return WithdrawDist{
            {{std::make_pair(write_ledger(k, ba, br - 1, sa + 1, sr, loc), got), 1.0}}};
      }
    }
    return Repository::withdraw(k, tmpl);
  }

 private:
  using Ledger = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t, Value>;

  static std::optional<Ledger> read_ledger(const KnowledgeState& k) {
    for (const auto& item : k.items()) {
      if (!tagged(item, kStationTag) || item.fields.size() != 6) continue;
      const auto* ba = std::get_if<std::int64_t>(&item.fields[1]);
      const auto* br = std::get_if<std::int64_t>(&item.fields[2]);
      const auto* sa = std::get_if<std::int64_t>(&item.fields[3]);
      const auto* sr = std::get_if<std::int64_t>(&item.fields[4]);
      if (!ba || !br || !sa || !sr) continue;
      return Ledger{*ba, *br, *sa, *sr, item.fields[5]};
    }
    return std::nullopt;
  }

  static KnowledgeState write_ledger(const KnowledgeState& k, std::int64_t ba, std::int64_t br,
                                     std::int64_t sa, std::int64_t sr, const Value& loc) {
    std::vector<Item> items;
    items.reserve(k.items().size());
    for (const auto& item : k.items()) {
      if (tagged(item, kStationTag) && item.fields.size() == 6)
        items.push_back(Item{{kStationTag, Value{ba}, Value{br}, Value{sa}, Value{sr}, loc}});
      else
        items.push_back(item);
    }
    return KnowledgeState(std::move(items));
  }
};

// ---------------------------------------------------------------------------
// Model text generation
// ---------------------------------------------------------------------------

std::string near_predicate_text(const BikeShareConfig& cfg) {
  // near(L): the responder's location is in the neighborhood of L, expanded
  // over all concrete locations since L is bound at run time
  std::string out;
  const int m = cfg.locations();
  for (int l = 0; l < m; ++l) {
    std::string nbrs;
    for (int j = 0; j < m; ++j) {
      if (!cfg.near(j, l)) continue;
      if (!nbrs.empty()) nbrs += " || ";
      nbrs += "loc = " + std::to_string(j);
    }
    if (!out.empty()) out += " || ";
    out += "(L = " + std::to_string(l) + " && (" + nbrs + "))";
  }
  return out;
}

std::string number_text(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

std::string model_text_of(const BikeShareConfig& cfg) {
  std::ostringstream out;
  const int m = cfg.locations();
  const std::string near = near_predicate_text(cfg);

  out << "# bike sharing scenario: " << cfg.rows << "x" << cfg.cols << " grid, " << cfg.users
      << " users\n";
  out << "attributes kind, state, loc, bikes, rbikes, slots, rslots;\n\n";
  out << "proc Pedestrian = get(<\"p_next\", ?L>)@self.Borrow;\n";
  out << "proc Biker = get(<\"b_next\", ?L>)@self.Return;\n";
  out << "proc Borrow = qry(<\"loc\", ?L>)@self."
      << "get(<\"bike_res\", ?ID>)@(" << near << ")."
      << "put(<\"go\", ID>)@self."
      << "get(<\"bike\">)@(loc = ID)."
      << "put(<\"b\">)@self.Biker;\n";
  out << "proc Return = qry(<\"loc\", ?L>)@self."
      << "get(<\"slot_res\", ?ID>)@(" << near << ")."
      << "put(<\"go\", ID>)@self."
      << "put(<\"bike\">)@(loc = ID)."
      << "put(<\"p\">)@self.Pedestrian;\n\n";

  std::vector<int> users_at(m, 0);
  for (int l : cfg.user_locs) ++users_at[l];

  for (int i = 0; i < m; ++i) {
    if (users_at[i] > 0) {
      out << "component user";
      if (users_at[i] > 1) out << " * " << users_at[i];
      out << " {\n";
      out << "  interface {\n"
          << "    kind = \"user\";\n"
          << "    state = field(\"s\", 1);\n"
          << "    loc = field(\"loc\", 1);\n"
          << "  }\n";
      out << "  knowledge {\n    <\"s\", \"p\">;\n    <\"loc\", " << i << ">;\n  }\n";
      out << "  process Pedestrian;\n";
      out << "}\n";
    }
    out << "component station" << i << " {\n";
    out << "  interface {\n"
        << "    kind = \"station\";\n"
        << "    bikes = field(\"station\", 1);\n"
        << "    rbikes = field(\"station\", 2);\n"
        << "    slots = field(\"station\", 3);\n"
        << "    rslots = field(\"station\", 4);\n"
        << "    loc = field(\"station\", 5);\n"
        << "  }\n";
    out << "  knowledge {\n    <\"station\", " << cfg.bikes[i] << ", 0, " << cfg.slots[i]
        << ", 0, " << i << ">;\n  }\n";
    out << "  process nil;\n";
    out << "}\n";
  }
  return out.str();
}

std::string rate_config_text_of(const BikeShareConfig& cfg) {
  nlohmann::json j;
  j["default_rate"] = 1.0;
  j["grid"] = {{"rows", cfg.rows}, {"cols", cfg.cols}};
  nlohmann::json rates = nlohmann::json::array();
  auto rule = [&](const char* action, nlohmann::json payload, const std::string& rate) {
    rates.push_back({{"action", action}, {"payload", std::move(payload)}, {"rate", rate}});
  };
  rule("get", {"p_next", "?"}, number_text(cfg.walk_rate));
  rule("get", {"b_next", "?"}, number_text(cfg.ride_rate));
  rule("qry", {"loc", "?"}, number_text(cfg.lookup_rate));
  const bool resource = cfg.mode == BikeShareConfig::Mode::resource;
  rule("get", {"bike_res", "?"},
       resource ? number_text(cfg.reserve_coeff) + " * dst.bikes" : number_text(cfg.reserve_coeff));
  rule("get", {"slot_res", "?"},
       resource ? number_text(cfg.reserve_coeff) + " * dst.slots" : number_text(cfg.reserve_coeff));
  rule("put", {"go", "?"},
       number_text(cfg.travel_rate) + " / (1.0 + distance(src.loc, payload[1]))");
  rule("get", {"bike"}, number_text(cfg.pickup_rate));
  rule("put", {"bike"}, number_text(cfg.dropoff_rate));
  rule("put", {"b"}, number_text(cfg.flag_rate));
  rule("put", {"p"}, number_text(cfg.flag_rate));
  j["rates"] = std::move(rates);
  j["errors"] = nlohmann::json::array();
  return j.dump(2) + "\n";
}

}  // namespace

std::vector<Measure> imbalance_measures(const BikeShareConfig& cfg) {
  std::vector<Measure> out;
  PredicateRef stations = parse_predicate_text("kind = \"station\"");
  out.push_back(Measure::mean_of("avg_bikes", "bikes", stations));
  out.push_back(Measure::stddev_of("sd_bikes", "bikes", stations));
  out.push_back(Measure::count_of("bikers", parse_predicate_text("state = \"b\"")));
  (void)cfg;
  return out;
}

BikeShareModel generate_bikeshare(const BikeShareConfig& raw) {
  BikeShareConfig cfg = raw;
  std::string err = cfg.normalize();
  if (!err.empty()) throw std::invalid_argument("bike share configuration: " + err);

  BikeShareModel out;
  out.model_text = model_text_of(cfg);
  out.rate_config_text = rate_config_text_of(cfg);

  ModelFile file = parse_model(out.model_text);
  auto diags = check_model(file);
  if (!diags.empty())
    throw std::logic_error("generated model does not pass checks: " + diags.front().message);

  auto rates =
      std::make_shared<RateConfig>(RateConfig::from_json_text(out.rate_config_text));

  auto qp = std::make_shared<const std::vector<std::vector<double>>>(cfg.qp);
  auto qb = std::make_shared<const std::vector<std::vector<double>>>(cfg.qb);
  auto user_repo = std::make_shared<UserRepository>(qp, qb);
  auto station_repo = std::make_shared<StationRepository>();

  std::vector<Component> components;
  for (const auto& decl : file.components) {
    Component c;
    c.name = decl.name;
    for (const auto& rule : decl.interface) c.interface.rules.emplace_back(rule.attr, rule.rule);
    c.knowledge = KnowledgeState(decl.knowledge);
    c.process = decl.process;
    c.repository = decl.name == "user" ? RepositoryRef(user_repo) : RepositoryRef(station_repo);
    for (int i = 0; i < decl.count; ++i) components.push_back(c);
  }

  auto [model, initial] = instantiate(std::move(components), file.defs(), rates);
  out.model = std::move(model);
  out.initial = std::move(initial);
  for (std::size_t i = 0; i < out.model.components.size(); ++i) {
    if (out.model.components[i]->name == "user")
      out.user_indices.push_back(i);
    else
      out.station_indices.push_back(i);
  }

  out.measures = imbalance_measures(cfg);
  for (std::size_t idx : out.station_indices) {
    const auto& eval = out.initial.comps[idx]->eval;
    auto it = eval.find("loc");
    std::string suffix = it != eval.end() ? value_to_string(it->second) : std::to_string(idx);
    out.measures.push_back(Measure::attr_of("bikes_" + suffix, idx, "bikes"));
  }
  return out;
}

std::int64_t total_bikes(const BikeShareModel& m, const SystemState& s) {
  std::int64_t total = 0;
  for (std::size_t idx : m.station_indices) {
    const auto& eval = s.comps[idx]->eval;
    auto ba = eval.find("bikes");
    auto br = eval.find("rbikes");
    if (ba != eval.end()) total += std::get<std::int64_t>(ba->second);
    if (br != eval.end()) total += std::get<std::int64_t>(br->second);
  }
  auto head_flag = [](const ProcessRef& p) -> std::string {
    if (p->kind != Process::Kind::prefix) return {};
    const Action& a = p->act;
    if (a.kind != ActionKind::put || !a.target.self) return {};
    if (a.payload.fields.size() != 1 || a.payload.fields[0].kind != TupleField::Kind::value)
      return {};
    if (const auto* s2 = std::get_if<std::string>(&a.payload.fields[0].v)) return *s2;
    return {};
  };
  for (std::size_t idx : m.user_indices) {
    const auto& c = s.comps[idx];
    auto st = c->eval.find("state");
    bool biker = st != c->eval.end() && st->second == Value{std::string("b")};
    if (biker) ++total;
    // a pending state-flag update means the transfer already happened
    std::string flag = head_flag(c->process);
    if (flag == "b") ++total;
    if (flag == "p") --total;
  }
  return total;
}

}  // namespace stocs
