#include "pcause/json_io.hpp"

#include <algorithm>

#include "pcause/errors.hpp"

namespace pcause {

namespace {

Json names_json(const std::vector<StateId>& states, const NameOf& name) {
  Json out = Json::array();
  for (auto s : states) out.push_back(name(s));
  return out;
}

std::vector<StateId> ids_from_json(const Json& j, const IdOf& id) {
  if (!j.is_array()) throw CauseError("expected an array of state names");
  std::vector<StateId> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw CauseError("state names must be strings");
    out.push_back(id(e.get<std::string>()));
  }
  return out;
}

}  // namespace

Json rat_json(const Rat& r) { return to_string(r); }

Json ext_rat_json(const ExtRat& r) { return to_string(r); }

Rat rat_from_json(const Json& j) {
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long>());
  throw CauseError("rationals must be strings of the form num/den");
}

ExtRat ext_rat_from_json(const Json& j) {
  if (j.is_string()) return parse_ext_rat(j.get<std::string>());
  return ExtRat(rat_from_json(j));
}

Json cause_json(const CauseRepr& c, const NameOf& name, const std::vector<StateId>* canonical_states) {
  Json out;
  out["kind"] = cause_kind(c);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CanonicalCause>) {
          if (canonical_states) out["states"] = names_json(*canonical_states, name);
        } else if constexpr (std::is_same_v<T, StateBasedCause>) {
          out["states"] = names_json(v.q, name);
        } else if constexpr (std::is_same_v<T, ThresholdCause>) {
          Json t = Json::object();
          for (const auto& [s, bound] : v.t) t[name(s)] = ext_rat_json(bound);
          out["thresholds"] = std::move(t);
        } else {
          Json paths = Json::array();
          for (const auto& p : v.paths) paths.push_back(names_json(p, name));
          out["paths"] = std::move(paths);
        }
      },
      c);
  return out;
}

Json cause_json(const PreparedModel& pm, const CauseRepr& c) {
  return cause_json(c, [&](StateId s) { return pm.name(s); }, &pm.sp());
}

CauseRepr cause_from_json(const Json& j, const IdOf& id) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw CauseError("cause needs a string 'kind'");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "canonical") return CanonicalCause{};
  if (kind == "state_based") {
    if (!j.contains("states")) throw CauseError("state_based cause needs 'states'");
    auto q = ids_from_json(j["states"], id);
    std::sort(q.begin(), q.end());
    q.erase(std::unique(q.begin(), q.end()), q.end());
    return StateBasedCause{std::move(q)};
  }
  if (kind == "threshold") {
    if (!j.contains("thresholds") || !j["thresholds"].is_object()) throw CauseError("threshold cause needs 'thresholds'");
    ThresholdCause t;
    for (const auto& [name, bound] : j["thresholds"].items()) t.t[id(name)] = ext_rat_from_json(bound);
    return t;
  }
  if (kind == "explicit") {
    if (!j.contains("paths") || !j["paths"].is_array()) throw CauseError("explicit cause needs 'paths'");
    ExplicitCause e;
    for (const auto& p : j["paths"]) e.paths.push_back(ids_from_json(p, id));
    std::sort(e.paths.begin(), e.paths.end());
    return e;
  }
  throw CauseError("unknown cause kind '" + kind + "'");
}

CauseRepr cause_from_json(const PreparedModel& pm, const Json& j) {
  return cause_from_json(j, [&](const std::string& name) { return pm.resolve_or_throw(name); });
}

Json result_json(const CostResult& r, const NameOf& name, const std::vector<StateId>* canonical_states) {
  Json out;
  out["cost"] = to_string(r.kind);
  out["value"] = ext_rat_json(r.value);
  out["cause"] = cause_json(r.cause, name, canonical_states);
  Json stats;
  stats["iterations"] = r.stats.iterations;
  stats["levels"] = r.stats.levels;
  stats["notes"] = r.stats.notes;
  out["stats"] = std::move(stats);
  return out;
}

Json result_json(const PreparedModel& pm, const CostResult& r) {
  return result_json(r, [&](StateId s) { return pm.name(s); }, &pm.sp());
}

Json verify_json(const PreparedModel& pm, const VerifyReport& rep) {
  auto path = [&](const std::vector<StateId>& p) { return names_json(p, [&](StateId s) { return pm.name(s); }); };
  Json out;
  out["ok"] = rep.ok();
  out["prefix_free"] = rep.prefix_free;
  if (!rep.prefix_witness.empty()) {
    Json w = Json::array();
    for (const auto& p : rep.prefix_witness) w.push_back(path(p));
    out["prefix_witness"] = std::move(w);
  }
  out["critical"] = rep.critical;
  if (!rep.critical_witness.empty()) out["critical_witness"] = path(rep.critical_witness);
  out["covered"] = rep.covered;
  out["coverage_exact"] = rep.coverage_exact;
  out["uncovered_mass"] = rat_json(rep.uncovered_mass);
  out["residual"] = rat_json(rep.residual);
  if (!rep.coverage_witness.empty()) out["coverage_witness"] = path(rep.coverage_witness);
  out["depth"] = rep.depth;
  out["problems"] = rep.problems;
  return out;
}

Json projected_json(const Dtmc& m, const ProjectedCause& c, const ProjectedReport& rep) {
  const NameOf name = [&](StateId s) { return m.name(s); };
  Json out;
  if (c.state_based) {
    out["cause"] = cause_json(StateBasedCause{*c.state_based}, name);
  } else {
    ExplicitCause e{c.members};
    out["cause"] = cause_json(e, name);
  }
  Json members = Json::array();
  for (const auto& p : c.members) members.push_back(names_json(p, name));
  out["members"] = std::move(members);
  out["depth"] = c.depth;
  Json v;
  v["ok"] = rep.ok();
  v["prefix_free"] = rep.prefix_free;
  v["critical"] = rep.critical;
  if (!rep.critical_witness.empty()) v["critical_witness"] = names_json(rep.critical_witness, name);
  v["uncovered"] = rat_json(rep.uncovered);
  v["residual"] = rat_json(rep.residual);
  out["verification"] = std::move(v);
  return out;
}

}  // namespace pcause
