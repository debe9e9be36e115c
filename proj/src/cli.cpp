#include "osqse/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "osqse/reference_states.hpp"

namespace osqse::cli {

namespace {

using io::Json;
using io::format_number;

Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

Json command_echo(const std::string& name, const Options& opt) {
  Json echo;
  echo["command"] = name;
  if (!opt.state.empty()) echo["state"] = opt.state;
  if (!opt.pair.empty()) echo["pair"] = opt.pair;
  if (opt.tol) echo["tol"] = *opt.tol;
  echo["seed"] = opt.seed;
  if (!opt.out.empty()) echo["out"] = opt.out;
  return echo;
}

Json new_report(const std::string& name, const Options& opt) {
  Json r;
  r["schema"] = kReportSchema;
  r["command"] = command_echo(name, opt);
  return r;
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) return false;
  f << content;
  f.flush();
  return static_cast<bool>(f);
}

/// Prints the report; also writes it to --out when the command does not use
/// --out for something else.
int emit(const Json& report, const Options& opt, bool out_is_report, std::ostream& out, std::ostream& err) {
  const std::string text = report.dump(2) + "\n";
  out << text;
  if (out_is_report && !opt.out.empty() && !write_file(opt.out, text)) {
    err << "error: cannot write '" << opt.out << "'\n";
    return kUnwritablePath;
  }
  return kOk;
}

/// Maps library exceptions to exit codes for the input-reading phase.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const io::ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const MissingRoleError& e) {
    err << "missing role: " << e.what() << "\n";
    return kMissingRoles;
  } catch (const ScriptError& e) {
    err << "script error: " << e.what() << "\n";
    return kScriptError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }
}

PureState load_state(const Options& opt) {
  if (opt.state.empty()) throw io::ParseError("--state is required");
  return io::read_state(opt.state);
}

ExchangePair pair_or(const Options& opt, ExchangePair fallback) {
  return opt.pair.empty() ? fallback : parse_exchange_pair(opt.pair);
}

}  // namespace

RenyiCurve sample_curve(const PureState& state, double lo, double hi, std::size_t points) {
  if (points < 2) throw std::invalid_argument("curve needs at least 2 points");
  if (!(lo >= 0) || !(hi > lo) || std::isinf(hi)) throw std::invalid_argument("alpha range must satisfy 0 <= min < max < inf");
  auto spectra = SplitSpectra::of(state);
  RenyiCurve curve;
  curve.state_fingerprint = fingerprint(state);
  for (std::size_t i = 0; i < points; ++i) {
    double a = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    curve.samples.push_back(spectra.evaluate(ExtendedOrder::of(a)));
  }
  curve.samples.push_back(spectra.evaluate(ExtendedOrder::infinity()));
  return curve;
}

int cmd_bound(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto state = load_state(opt);
    auto pair = pair_or(opt, ExchangePair::Split12);
    Json report = new_report("bound", opt);
    report["state_fingerprint"] = fingerprint(state);
    Json results;
    if (pair == ExchangePair::Split12) {
      auto cb = bound_1_2(state, GridConfig{});
      auto at = SplitSpectra::of(state).evaluate(cb.report.argmax_alpha);
      results["pair"] = "split12";
      results["bound"] = number(cb.report.bound_value);
      results["argmax_alpha"] = cb.report.argmax_alpha.to_string();
      results["term_split_A"] = number(at.term_split_A);
      results["term_split_B"] = number(at.term_split_B);
      results["tolerance"] = cb.report.tolerance;
      results["alpha_resolution"] = cb.report.alpha_resolution;
    } else {
      auto br = bound_pair(state, pair, GridConfig{});
      results["pair"] = std::string(to_string(pair));
      results["bound"] = number(br.bound_value);
      results["argmax_alpha"] = br.argmax_alpha.to_string();
      results["tolerance"] = br.tolerance;
      results["alpha_resolution"] = br.alpha_resolution;
    }
    report["results"] = std::move(results);
    return emit(report, opt, true, out, err);
  });
}

int cmd_curve(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto state = load_state(opt);
    auto curve = sample_curve(state, opt.alpha_min, opt.alpha_max, opt.points);
    std::ostringstream csv;
    io::write_curve_csv(csv, curve);
    if (!opt.out.empty()) {
      if (!write_file(opt.out, csv.str())) {
        err << "error: cannot write '" << opt.out << "'\n";
        return int(kUnwritablePath);
      }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < curve.samples.size(); ++i)
      if (curve.samples[i].f > curve.samples[best].f) best = i;
    Json report = new_report("curve", opt);
    report["command"]["alpha_min"] = opt.alpha_min;
    report["command"]["alpha_max"] = opt.alpha_max;
    report["command"]["points"] = opt.points;
    report["state_fingerprint"] = curve.state_fingerprint;
    report["results"] = {{"rows", curve.samples.size()},
                         {"max_alpha", curve.samples[best].alpha.to_string()},
                         {"max_f", number(curve.samples[best].f)}};
    if (opt.out.empty()) {
      out << csv.str();
      return int(kOk);
    }
    return emit(report, opt, false, out, err);
  });
}

int cmd_check_zero(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto state = load_state(opt);
    auto pair = pair_or(opt, ExchangePair::A1B1);
    if (pair == ExchangePair::Split12) throw std::invalid_argument("check-zero takes --pair a1b1 or ab");
    if (opt.method != "theorem2" && opt.method != "theorem3" && opt.method != "both")
      throw std::invalid_argument("--method must be theorem2, theorem3 or both");

    SolverConfig solver;
    solver.seed = opt.seed;
    solver.restarts = opt.restarts;
    if (opt.tol) solver.tolerance = *opt.tol;

    Json report = new_report("check-zero", opt);
    report["command"]["method"] = opt.method;
    report["state_fingerprint"] = fingerprint(state);
    Json results;
    results["pair"] = std::string(to_string(pair));

    const bool run_solver = opt.method != "theorem3";
    const bool run_necessary = opt.method != "theorem2";
    std::optional<IsometryPair> found;

    if (run_necessary) {
      auto [gx, gy] = exchanged_groups(pair);
      auto sx = reduced_spectrum(state, state.layout().group(gx));
      auto sy = reduced_spectrum(state, state.layout().group(gy));
      const bool holds = necessary_condition(state, pair);
      results["necessary"] = holds ? "necessary-holds" : "necessary-fails";
      if (!holds) {
        auto w = renyi_witness(sx, sy);
        if (w) results["witness_alpha"] = w->to_string();
      }
    }
    if (run_solver) {
      auto assessment = assess_zero_cost(state, pair, solver, GridConfig{});
      results["verdict"] = std::string(to_string(assessment.verdict));
      results["pair_bound"] = number(assessment.pair_bound);
      results["split_bound"] = number(assessment.split_bound);
      found = assessment.isometries;
      if (found) results["residual"] = found->residual;
    } else {
      results["verdict"] = results["necessary"];
      results["pair_bound"] = number(bound_pair(state, pair, GridConfig{}).bound_value);
      results["split_bound"] = number(bound_1_2(state, GridConfig{}).report.bound_value);
    }
    if (results.value("necessary", "") == "necessary-holds" && results["split_bound"].is_number() &&
        results["split_bound"].get<double>() > 1e-9)
      results["note"] = "necessary condition holds, yet the split bound is " + format_number(results["split_bound"].get<double>());

    if (found) {
      std::string path = opt.sidecar;
      if (path.empty()) path = opt.out.empty() ? std::string("isometries.json") : opt.out + ".isometries.json";
      if (!write_file(path, io::isometries_to_json(*found).dump(2) + "\n")) {
        err << "error: cannot write '" << path << "'\n";
        return int(kUnwritablePath);
      }
      results["sidecar"] = path;
    }
    report["results"] = std::move(results);
    return emit(report, opt, true, out, err);
  });
}

int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto state = load_state(opt);
    if (opt.protocol.empty()) throw io::ParseError("--protocol is required");
    ProtocolScript script;
    const std::string prefix = "builtin:";
    if (opt.protocol.rfind(prefix, 0) == 0) {
      try {
        script = builtin::by_name(opt.protocol.substr(prefix.size()));
      } catch (const std::invalid_argument& e) {
        throw ScriptError(e.what());
      }
    } else {
      script = io::read_protocol(opt.protocol);
    }
    auto pair = pair_or(opt, ExchangePair::Split12);
    const double tolerance = opt.tol.value_or(1e-9);

    SimulationResult result;
    try {
      result = run_protocol(state, script);
    } catch (const ScriptError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ScriptError(e.what());
    }
    const double deviation = max_branch_deviation(result, state, pair);
    const bool verified = verify_exchange(result, state, pair, tolerance);

    Json report = new_report("simulate", opt);
    report["command"]["protocol"] = opt.protocol;
    report["state_fingerprint"] = fingerprint(state);
    Json branches = Json::array();
    for (const auto& b : result.branches) {
      Json rec = Json::object();
      for (const auto& o : b.record) rec[o.label] = o.value;
      branches.push_back({{"outcomes", std::move(rec)}, {"probability", b.probability}});
    }
    report["results"] = {
        {"protocol", script.name},
        {"pair", std::string(to_string(pair))},
        {"branch_count", result.branches.size()},
        {"max_branch_deviation", number(deviation)},
        {"verified", verified},
        {"net_cost", result.net_cost},
        {"resource_in_rank", result.resource_in_rank},
        {"resource_out_rank", result.resource_out_rank},
        {"converse_majorization",
         {{std::string(to_string(RRouting::AllToAlice)),
           converse_majorization_check(state, RRouting::AllToAlice, result.resource_in_rank, result.resource_out_rank)},
          {std::string(to_string(RRouting::AllToBob)),
           converse_majorization_check(state, RRouting::AllToBob, result.resource_in_rank, result.resource_out_rank)}}},
        {"branches", std::move(branches)}};
    return emit(report, opt, true, out, err);
  });
}

std::vector<Check> example_checks(const std::string& name) {
  std::vector<Check> checks;
  auto add = [&](std::string claim, std::string expected, double actual, bool pass) {
    checks.push_back({std::move(claim), std::move(expected), format_number(actual), pass});
  };
  auto add_bool = [&](std::string claim, bool actual, bool want) {
    checks.push_back({std::move(claim), want ? "true" : "false", actual ? "true" : "false", actual == want});
  };

  if (name == "psi1") {
    auto state = reference::psi1();
    auto cb = bound_1_2(state);
    const double a0 = cb.report.argmax_alpha.value();
    const double f1 = f_value(state, ExtendedOrder::one()).f;
    add("argmax alpha of f", "3.362 +- 0.01", a0, std::abs(a0 - 3.362) <= 0.01);
    add("f(alpha0) - f(1)", "> 1e-3", cb.report.bound_value - f1, cb.report.bound_value > f1 + 1e-3);
  } else if (name == "psi2") {
    auto state = reference::psi2();
    auto cb = bound_1_2(state);
    add("split bound", "2 +- 1e-9", cb.report.bound_value, std::abs(cb.report.bound_value - 2) <= 1e-9);
    add_bool("necessary condition for A1<->B1", necessary_condition(state, ExchangePair::A1B1), true);
  } else if (name == "phi1") {
    auto state = reference::phi1();
    CMatrix U = CMatrix::Zero(4, 4);
    U(0, 0) = U(1, 3) = U(2, 2) = U(3, 1) = 1;
    IsometryPair given{U, U, 0};
    auto omegas = omega_matrices(state, ExchangePair::AB);
    const double residual = exchange_residual(omegas, U, U);
    add("residual of U = V = local CNOT", "< 1e-10", residual,
        residual < 1e-10 && verify_exchange_isometries(state, ExchangePair::AB, given));
    add_bool("solver finds an A<->B isometry pair", solve_exchange_isometries(state, ExchangePair::AB).has_value(), true);
    auto sim = run_protocol(state, builtin::phi1_local_cnots());
    add_bool("local CNOT protocol exchanges A and B", verify_exchange(sim, state, ExchangePair::AB), true);
    add("local CNOT protocol net cost", "0", sim.net_cost, sim.net_cost == 0);
    add_bool("A2/B2 symmetric", swap_check(state, RoleGroup::A2, RoleGroup::B2), true);
    add_bool("A1/B1 symmetric", swap_check(state, RoleGroup::A1, RoleGroup::B1), false);
    add_bool("necessary condition for A1<->B1", necessary_condition(state, ExchangePair::A1B1), false);
  } else if (name == "phi2") {
    auto state = reference::phi2();
    auto cb = bound_1_2(state);
    add("split bound", "-2 +- 1e-9", cb.report.bound_value, std::abs(cb.report.bound_value + 2) <= 1e-9);
    auto sim = run_protocol(state, builtin::phi2_entanglement_swap());
    add("entanglement-swap branches", "16", double(sim.branches.size()), sim.branches.size() == 16);
    const double dev = max_branch_deviation(sim, state, ExchangePair::Split12);
    add("entanglement-swap max deviation", "<= 1e-10", dev, dev <= 1e-10);
    add("entanglement-swap net cost", "-2", sim.net_cost, sim.net_cost == -2);
  } else {
    throw std::invalid_argument("unknown example '" + name + "'");
  }
  return checks;
}

int cmd_examples(const Options& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<std::string> cases;
    if (opt.example == "all")
      cases = {"psi1", "psi2", "phi1", "phi2"};
    else
      cases = {opt.example};
    Json report = new_report("examples", opt);
    report["command"]["case"] = opt.example;
    Json results = Json::object();
    bool all_pass = true;
    for (const auto& c : cases) {
      auto checks = example_checks(c);
      Json list = Json::array();
      for (const auto& k : checks) {
        list.push_back({{"claim", k.claim}, {"expected", k.expected}, {"actual", k.actual}, {"pass", k.pass}});
        if (!k.pass) {
          all_pass = false;
          err << c << ": " << k.claim << "\n  expected " << k.expected << "\n  actual   " << k.actual << "\n";
        }
      }
      results[c] = {{"state_fingerprint", fingerprint(reference::by_name(c))}, {"checks", std::move(list)}};
    }
    results["all_pass"] = all_pass;
    report["results"] = std::move(results);
    int code = emit(report, opt, true, out, err);
    if (code != kOk) return code;
    return all_pass ? int(kOk) : int(kExampleFailed);
  });
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"One-shot quantum state exchange: converse bounds, zero-cost conditions and LOCC protocol checks"};
  app.require_subcommand(1);
  Options opt;
  double tol = 0;

  auto add_common = [&](CLI::App* sub, bool needs_state) {
    auto* s = sub->add_option("--state", opt.state, "state document (JSON)");
    if (needs_state) s->required();
    sub->add_option("--pair", opt.pair, "exchange pair: split12, a1b1 or ab");
    sub->add_option("--tol", tol, "tolerance override");
    sub->add_option("--seed", opt.seed, "solver seed");
    sub->add_option("--out", opt.out, "output path");
  };

  auto* bound = app.add_subcommand("bound", "converse bound on the exchange cost");
  add_common(bound, true);
  auto* curve = app.add_subcommand("curve", "sample f(alpha) to CSV");
  add_common(curve, true);
  curve->add_option("--alpha-min", opt.alpha_min, "smallest finite order");
  curve->add_option("--alpha-max", opt.alpha_max, "largest finite order");
  curve->add_option("--points", opt.points, "number of finite orders");
  auto* check = app.add_subcommand("check-zero", "zero-cost exchange conditions");
  add_common(check, true);
  check->add_option("--method", opt.method, "theorem2 (isometry search), theorem3 (spectrum condition) or both");
  check->add_option("--sidecar", opt.sidecar, "where to write found isometries");
  check->add_option("--restarts", opt.restarts, "solver restarts");
  auto* simulate = app.add_subcommand("simulate", "run an LOCC protocol script");
  add_common(simulate, true);
  simulate->add_option("--protocol", opt.protocol, "builtin:<name> or a protocol document")->required();
  auto* examples = app.add_subcommand("examples", "reproduce the built-in example claims");
  add_common(examples, false);
  examples->add_option("case", opt.example, "psi1, psi2, phi1, phi2 or all")
      ->check(CLI::IsMember({"psi1", "psi2", "phi1", "phi2", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }
  for (auto* sub : app.get_subcommands())
    if (sub->count("--tol")) opt.tol = tol;

  if (bound->parsed()) return cmd_bound(opt, out, err);
  if (curve->parsed()) return cmd_curve(opt, out, err);
  if (check->parsed()) return cmd_check_zero(opt, out, err);
  if (simulate->parsed()) return cmd_simulate(opt, out, err);
  return cmd_examples(opt, out, err);
}

}  // namespace osqse::cli
