#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "pcause/cause.hpp"
#include "pcause/cost_expected.hpp"
#include "pcause/cost_instantaneous.hpp"
#include "pcause/cost_maximal.hpp"
#include "pcause/cost_partial.hpp"
#include "pcause/errors.hpp"
#include "pcause/json_io.hpp"
#include "pcause/monitor.hpp"
#include "pcause/omega.hpp"
#include "pcause/oracle.hpp"

using namespace pcause;

namespace {

constexpr int kUsage = 64;
constexpr int kModel = 65;
constexpr int kUnsupported = 66;
constexpr int kOracleMismatch = 70;

struct OracleMismatch : Error {
  using Error::Error;
};

std::string format = "json";

void emit(const Json& j) {
  if (format == "json") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  for (const auto& [key, value] : j.items()) {
    std::cout << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
  }
}

Rat parse_p(const std::string& text) {
  Rat p = parse_rat(text);
  if (sgn(p) <= 0 || p > 1) throw ModelError("p must lie in (0, 1]");
  return p;
}

Json load_json(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw ModelError(path + ": " + e.what());
  }
}

std::size_t oracle_limit() {
  if (const char* v = std::getenv("PCAUSE_ORACLE_LIMIT")) return std::stoul(v);
  return 8;
}

// The brute-force guard skips the enumeration; re-evaluation and verification still run.
std::string skipped(const LimitError& e) {
  std::cerr << "oracle: brute force skipped (" << e.what() << "); PCAUSE_ORACLE_LIMIT raises the subset bound\n";
  return std::string("skipped: ") + e.what();
}

// Brute-force and re-evaluation cross-check of a minimal result; throws OracleMismatch.
Json cross_check(const PreparedModel& pm, const CostResult& res, std::size_t depth) {
  Json out;
  ExtRat again;
  switch (res.kind) {
    case CostKind::expcost: again = ExtRat(expcost_of(pm, res.cause)); break;
    case CostKind::pexpcost: again = ExtRat(pexpcost_of(pm, res.cause)); break;
    default: again = maxcost_of(pm, res.cause); break;
  }
  if (again != res.value) throw OracleMismatch("re-evaluating the cause gives " + to_string(again));
  out["reevaluated"] = ext_rat_json(again);
  auto rep = verify_cause(pm, res.cause, depth);
  out["verify"] = verify_json(pm, rep);
  if (!rep.ok()) throw OracleMismatch("the optimal cause fails verification at depth " + std::to_string(depth));
  try {
    auto brute = brute_force_min(pm, res.kind, oracle_limit());
    out["brute_force"] = ext_rat_json(brute.value);
    if (brute.value != res.value) throw OracleMismatch("brute force minimum is " + to_string(brute.value));
  } catch (const LimitError& e) {
    out["brute_force"] = skipped(e);
  }
  return out;
}

Json cross_check_inst(const InstModel& im, const CostResult& res) {
  const auto& q = std::get<StateBasedCause>(res.cause).q;
  ExtRat again;
  switch (res.kind) {
    case CostKind::expcost_inst: again = ExtRat(expcost_inst_of(im, q)); break;
    case CostKind::pexpcost_inst: again = ExtRat(pexpcost_inst_of(im, q)); break;
    default: again = maxcost_inst_of(im, q); break;
  }
  if (again != res.value) throw OracleMismatch("re-evaluating the cause gives " + to_string(again));
  Json out;
  out["reevaluated"] = ext_rat_json(again);
  try {
    auto brute = brute_force_inst_min(im, res.kind, oracle_limit());
    out["brute_force"] = ext_rat_json(brute.value);
    if (brute.value != res.value) throw OracleMismatch("brute force minimum is " + to_string(brute.value));
  } catch (const LimitError& e) {
    out["brute_force"] = skipped(e);
  }
  return out;
}

struct MinOptions {
  std::string model;
  std::string p;
  std::string cost;
  std::string weights = "accumulated";
  bool oracle = false;
  std::size_t depth = 12;
  std::string dump_levels;
};

Json run_min(const MinOptions& o) {
  const Dtmc m = load_dtmc(o.model);
  const Rat p = parse_p(o.p);
  auto kind = parse_cost_kind(o.cost);
  if (!kind || static_cast<int>(*kind) > static_cast<int>(CostKind::maxcost)) {
    throw CLI::ValidationError("--cost", "expected expcost, pexpcost or maxcost");
  }
  Json out;
  out["model"] = o.model;
  out["p"] = rat_json(p);
  out["weights"] = o.weights;

  if (o.weights == "instantaneous") {
    auto im = make_inst_model(m, p);
    CostResult res;
    switch (*kind) {
      case CostKind::expcost: res = expcost_inst_minimal(im); break;
      case CostKind::pexpcost: res = pexpcost_inst_minimal(im); break;
      default: res = maxcost_inst_minimal(im); break;
    }
    const NameOf name = [&](StateId s) { return im.chain.name(s); };
    out.update(result_json(res, name));
    if (o.oracle) out["oracle"] = cross_check_inst(im, res);
    return out;
  }

  const PreparedModel pm = preprocess(m, p);
  CostResult res;
  switch (*kind) {
    case CostKind::expcost: res = expcost_minimal(pm); break;
    case CostKind::pexpcost: {
      for (StateId s = 0; s < pm.size(); ++s) {
        if (sgn(pm.weight(s)) < 0) {
          throw UnsupportedError("pexpcost with negative accumulated weights is not supported (state " + pm.name(s) +
                                 "): deciding the optimum is PP-hard; use --weights instantaneous or expcost");
        }
      }
      res = pexpcost_minimal(pm);
      if (!o.dump_levels.empty()) {
        auto table = level_values(pm, saturation(pm));
        std::ofstream csv(o.dump_levels);
        if (!csv) throw ModelError("cannot write " + o.dump_levels);
        table.write_csv(csv);
      }
      break;
    }
    default: res = maxcost_minimal(pm); break;
  }
  out.update(result_json(pm, res));
  if (o.oracle) out["oracle"] = cross_check(pm, res, o.depth);
  return out;
}

// Paths in a result file are tried as given and then relative to the file.
std::string locate(const std::string& path, const std::string& relative_to) {
  namespace fs = std::filesystem;
  if (fs::exists(path)) return path;
  auto alt = fs::path(relative_to).parent_path() / path;
  return fs::exists(alt) ? alt.string() : path;
}

std::vector<std::string> read_trace(const std::string& path) {
  std::vector<std::string> out;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    auto tok = tokenize_line(line);
    if (tok.empty()) continue;
    if (tok.size() != 1) throw ModelError("trace lines hold one state name", out.size() + 1);
    out.emplace_back(tok[0]);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-causes for reachability and omega-regular properties of Markov chains"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));

  std::string model, p, dra, cause_file, trace_file;
  std::size_t depth = 12;

  auto* validate = app.add_subcommand("validate", "parse a model and report its size");
  validate->add_option("model", model)->required();

  auto* reach = app.add_subcommand("reach", "probability of reaching the targets from every state");
  reach->add_option("model", model)->required();
  reach->add_option("--dra", dra, "omega-regular property as a Rabin automaton");

  auto* cause = app.add_subcommand("cause", "canonical causes and cause verification");
  cause->require_subcommand(1);
  auto* canonical = cause->add_subcommand("canonical", "canonical p-cause");
  canonical->add_option("model", model)->required();
  canonical->add_option("-p", p)->required();
  canonical->add_option("--depth", depth, "unfolding depth for listed members");
  auto* verify = cause->add_subcommand("verify", "check prefix-freeness, criticality and coverage");
  verify->add_option("model", model)->required();
  verify->add_option("cause", cause_file, "cause or result JSON")->required();
  verify->add_option("-p", p, "defaults to the p recorded in the file");
  verify->add_option("--depth", depth);

  MinOptions mo;
  auto* min = app.add_subcommand("min", "cost-minimal p-cause");
  min->add_option("model", mo.model)->required();
  min->add_option("-p", mo.p)->required();
  min->add_option("--cost", mo.cost)->required()->check(CLI::IsMember({"expcost", "pexpcost", "maxcost"}));
  min->add_option("--weights", mo.weights)->check(CLI::IsMember({"accumulated", "instantaneous"}));
  min->add_flag("--oracle", mo.oracle, "cross-check against brute force");
  min->add_option("--depth", mo.depth, "verification depth for --oracle");
  min->add_option("--dump-levels", mo.dump_levels, "write the pexpcost level table as CSV");

  auto* monitor = app.add_subcommand("monitor", "runtime monitors");
  monitor->require_subcommand(1);
  auto* run = monitor->add_subcommand("run", "replay a trace through the monitor of a cause");
  run->add_option("cause", cause_file)->required();
  run->add_option("trace", trace_file)->required();
  run->add_option("--model", model, "defaults to the model recorded in the cause file");
  run->add_option("-p", p, "defaults to the p recorded in the cause file");

  auto* product = app.add_subcommand("product", "cause for an omega-regular property via the Rabin product");
  product->add_option("model", model)->required();
  product->add_option("dra", dra)->required();
  product->add_option("-p", p)->required();
  product->add_option("--depth", depth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (validate->parsed()) {
      const Dtmc m = load_dtmc(model);
      std::size_t transitions = 0;
      Json targets = Json::array();
      for (StateId s = 0; s < m.size(); ++s) {
        transitions += m.row(s).size();
        if (m.is_target(s)) targets.push_back(m.name(s));
      }
      Json out;
      out["model"] = model;
      out["states"] = m.size();
      out["transitions"] = transitions;
      out["init"] = m.name(m.init());
      out["targets"] = std::move(targets);
      emit(out);
    } else if (reach->parsed()) {
      const Dtmc m = load_dtmc(model);
      Json out;
      Json probs = Json::object();
      if (dra.empty()) {
        std::vector<bool> targets(m.size());
        for (StateId s = 0; s < m.size(); ++s) targets[s] = m.is_target(s);
        auto q = reach_probabilities(m, targets);
        for (StateId s = 0; s < m.size(); ++s) probs[m.name(s)] = rat_json(q[s]);
        out["probability"] = rat_json(q[m.init()]);
      } else {
        auto prod = build_product(m, load_dra(dra));
        for (StateId v = 0; v < prod.chain.size(); ++v) probs[prod.chain.name(v)] = rat_json(prod.q[v]);
        out["probability"] = rat_json(prod.effect_probability());
      }
      out["states"] = std::move(probs);
      emit(out);
    } else if (canonical->parsed()) {
      const auto pm = preprocess(load_dtmc(model), parse_p(p));
      auto c = canonical_cause(pm);
      auto u = unfold(pm, c, depth);
      Json out;
      out["model"] = model;
      out["p"] = rat_json(pm.p());
      out["cause"] = cause_json(pm, c);
      Json members = Json::array();
      for (const auto& path : u.members) members.push_back(format_path(pm, path));
      out["members"] = std::move(members);
      out["residual"] = rat_json(u.residual);
      emit(out);
    } else if (verify->parsed()) {
      auto j = load_json(cause_file);
      if (p.empty()) {
        if (!j.contains("p")) throw CLI::ValidationError("-p", "the cause file records no p");
        p = j["p"].get<std::string>();
      }
      const auto pm = preprocess(load_dtmc(model), parse_p(p));
      auto c = cause_from_json(pm, j.contains("cause") ? j["cause"] : j);
      auto rep = verify_cause(pm, c, depth);
      emit(verify_json(pm, rep));
      return rep.ok() ? 0 : 1;
    } else if (min->parsed()) {
      emit(run_min(mo));
    } else if (run->parsed()) {
      auto j = load_json(cause_file);
      if (model.empty()) {
        if (!j.contains("model")) throw CLI::ValidationError("--model", "the cause file records no model");
        model = locate(j["model"].get<std::string>(), cause_file);
      }
      if (p.empty()) {
        if (!j.contains("p")) throw CLI::ValidationError("-p", "the cause file records no p");
        p = j["p"].get<std::string>();
      }
      const auto pm = preprocess(load_dtmc(model), parse_p(p));
      auto mon = compile(pm, cause_from_json(pm, j.contains("cause") ? j["cause"] : j));
      auto trace = read_trace(trace_file);
      auto verdicts = run_trace(mon, trace);
      Json steps = Json::array();
      for (std::size_t i = 0; i < verdicts.size(); ++i) {
        if (format == "text") {
          std::cout << i << ' ' << trace[i] << ' ' << to_string(verdicts[i].status) << '\n';
        } else {
          Json step;
          step["state"] = trace[i];
          step["status"] = to_string(verdicts[i].status);
          steps.push_back(std::move(step));
        }
      }
      if (format == "json") {
        Json out;
        out["steps"] = std::move(steps);
        out["final"] = to_string(mon.status());
        out["memory_bits"] = mon.memory_bits();
        emit(out);
      }
      switch (mon.status()) {
        case Status::alarm: return 2;
        case Status::cleared: return 0;
        default: return 1;
      }
    } else if (product->parsed()) {
      const Dtmc m = load_dtmc(model);
      const Dra a = load_dra(dra);
      const Rat pr = parse_p(p);
      auto prod = build_product(m, a);
      auto ppm = prod.prepare(pr);
      auto proj = transfer_cause(prod, ppm, canonical_cause(ppm), depth);
      auto rep = verify_projected(m, a, pr, proj);
      Json out;
      out["model"] = model;
      out["automaton"] = dra;
      out["p"] = rat_json(pr);
      out["product_states"] = prod.chain.size();
      out["probability"] = rat_json(prod.effect_probability());
      out.update(projected_json(m, proj, rep));
      emit(out);
      return rep.ok() ? 0 : 1;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const OracleMismatch& e) {
    std::cerr << "oracle mismatch: " << e.what() << '\n';
    return kOracleMismatch;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kUnsupported;
  } catch (const LimitError& e) {
    std::cerr << "limit: " << e.what() << '\n';
    return kUnsupported;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kModel;
  }
  return 0;
}
