#include "superliouville/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "superliouville/errors.hpp"
#include "superliouville/field_io.hpp"

namespace superliouville {

using nlohmann::ordered_json;

namespace {

ordered_json grid_json(const Grid& g) {
  return {{"origin", {g.origin.x(), g.origin.y()}}, {"h", g.h}, {"nx", g.nx}, {"ny", g.ny}};
}

void write_json(const std::string& out_dir, const std::string& name, const ordered_json& j, CommandResult& result) {
  std::filesystem::create_directories(out_dir);
  const std::string path = (std::filesystem::path(out_dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  result.files.push_back(name);
}

void write_fields(const std::string& out_dir, const SolutionPair& pair, const std::vector<std::string>& fields,
                  const std::string& prefix, CommandResult& result) {
  std::filesystem::create_directories(out_dir);
  for (const auto& f : fields) {
    const std::string name = prefix + f + ".csv";
    write_csv_file((std::filesystem::path(out_dir) / name).string(), pair.grid(), export_field(pair, f));
    result.files.push_back(name);
  }
}

GateResult upper_gate(const std::string& name, double value, double limit) {
  return {name, value, limit, value <= limit};
}

GateResult relative_gate(const std::string& name, double value, const RelativeGate& g) {
  const double err = std::abs(value - g.target) / std::abs(g.target);
  return {name, value, g.target, err <= g.rel_tol};
}

ordered_json gates_json(const std::vector<GateResult>& gates) {
  ordered_json a = ordered_json::array();
  for (const auto& g : gates) a.push_back({{"name", g.name}, {"value", g.value}, {"limit", g.limit}, {"pass", g.pass}});
  return a;
}

void finish(CommandResult& result, const std::vector<GateResult>& gates) {
  bool pass = true;
  for (const auto& g : gates) pass = pass && g.pass;
  result.report["gates"] = gates_json(gates);
  result.report["pass"] = pass;
  result.exit_code = pass ? kExitPass : kExitGateFailure;
}

CommandResult verify_masked(const SolutionPair& pair, const RunConfig& config, const NodeMask* mask) {
  CommandResult result;
  DiagnosticsReport diag = compute_diagnostics(pair, {config.diagnostics.tail, config.diagnostics.annulus});
  if (mask) {
    const Residual r = residual(pair);
    diag.residual_u_inf = r.u_inf(mask);
    diag.residual_psi_inf = r.psi_inf(mask);
  }
  result.report["grid"] = grid_json(pair.grid());
  result.report["metric"] = to_string(pair.metric.preset);
  result.report["diagnostics"] = to_json(diag);

  const GateConfig& gc = config.gates;
  std::vector<GateResult> gates;
  if (gc.residual_max)
    gates.push_back(upper_gate("residual_max", std::max(diag.residual_u_inf, diag.residual_psi_inf), *gc.residual_max));
  if (gc.T_max) gates.push_back(upper_gate("T_max", diag.T_max, *gc.T_max));
  if (gc.holomorphy_max) gates.push_back(upper_gate("holomorphy_max", diag.T_holomorphy_residual, *gc.holomorphy_max));
  if (gc.alpha) gates.push_back(relative_gate("alpha", diag.alpha, *gc.alpha));
  if (gc.I) gates.push_back(relative_gate("I", diag.I, *gc.I));
  if (gc.u_slope) gates.push_back(relative_gate("u_slope", diag.u_fit.slope, *gc.u_slope));
  if (gc.xi0_norm) gates.push_back(relative_gate("xi0_norm", diag.xi0.norm(), *gc.xi0_norm));

  if (config.diagnostics.stress) result.report["stress"] = to_json(stress_tensor(pair));
  if (config.diagnostics.green || gc.green_match) {
    const GreenResult green = green_convolve(to_flat_chart(pair));
    result.report["green"] = to_json(green);
    if (gc.green_match) {
      const double rel = green.psi_inner > 0.0 ? green.match_inner / green.psi_inner : green.match_inner;
      gates.push_back(upper_gate("green_match", rel, *gc.green_match));
    }
  }
  finish(result, gates);
  return result;
}

}  // namespace

SolutionPair build_pair(const RunConfig& config) {
  const Grid grid = config.grid.grid();
  const SolutionConfig& s = config.solution;
  SolutionPair pair = s.family == "constant" ? constant_pair(grid, config.metric_preset(), s.u0, s.psi0)
                                             : make_solution(s.family, s.params, grid);
  if (s.wrong_sign) pair.psi.g = -pair.psi.g;
  if (s.noise > 0.0) pair = with_multiplicative_noise(pair, s.noise, s.seed);
  return pair;
}

CommandResult verify_pair(const SolutionPair& pair, const RunConfig& config) {
  return verify_masked(pair, config, nullptr);
}

CommandResult cmd_verify(const RunConfig& config, const std::string& out_dir) {
  const SolutionPair pair = build_pair(config);
  CommandResult result;
  result.report["command"] = "verify";
  result.report["family"] = config.solution.family;
  CommandResult v = verify_pair(pair, config);
  result.report.update(v.report);
  result.exit_code = v.exit_code;
  write_json(out_dir, "verify.json", result.report, result);
  write_fields(out_dir, pair, config.export_fields.fields, "", result);
  return result;
}

CommandResult cmd_solve(const RunConfig& config, const std::string& out_dir) {
  const SolutionPair initial = build_pair(config);
  CommandResult result;
  result.report["command"] = "solve";
  result.report["family"] = config.solution.family;
  SolveReport sr;
  try {
    sr = newton_solve(initial, config.solver);
  } catch (const NoConvergence& e) {
    result.report["solve"] = to_json(e.report());
    result.report["error"] = e.what();
    result.report["pass"] = false;
    result.exit_code = kExitGateFailure;
    write_json(out_dir, "solve.json", result.report, result);
    return result;
  } catch (const LinearSolveFailure& e) {
    result.report["error"] = e.what();
    result.report["pass"] = false;
    result.exit_code = kExitGateFailure;
    write_json(out_dir, "solve.json", result.report, result);
    return result;
  }
  result.report["solve"] = to_json(sr);
  CommandResult v = verify_pair(sr.final_pair, config);
  result.report.update(v.report);
  result.exit_code = v.exit_code;
  write_json(out_dir, "solve.json", result.report, result);
  write_fields(out_dir, sr.final_pair, config.export_fields.fields, "", result);
  return result;
}

CommandResult cmd_blowup(const RunConfig& config, const std::string& out_dir) {
  const GeneratedSequence seq = generate_sequence(config.sequence);
  BlowupReport br = detect_concentration(seq.pairs, config.detection);
  for (const auto& e : seq.energies) {
    br.exp2u.push_back(e.exp2u);
    br.psi4.push_back(e.psi4);
  }
  CommandResult result;
  result.report["command"] = "blowup";
  result.report["family"] = config.sequence.family;
  result.report["grid"] = grid_json(config.sequence.domain);
  result.report["blowup"] = to_json(br);
  result.report["energy_bounds"] = {{"exp2u", seq.exp2u_bound}, {"psi4", seq.psi4_bound}};

  std::vector<GateResult> gates;
  const bool blowup = br.classification == Classification::blowup_bounded_outside ||
                      br.classification == Classification::blowup_minus_infinity_outside;
  if (blowup) {
    const double lowest = *std::min_element(br.masses.begin(), br.masses.end());
    gates.push_back(upper_gate("mass_at_least_pi", std::numbers::pi - lowest, config.gates.mass_tol));
  }
  gates.push_back({"sigma2_in_sigma1", br.sigma2_in_sigma1 ? 1.0 : 0.0, 1.0, br.sigma2_in_sigma1});
  if (config.gates.blowup_points) {
    const double n = double(br.sigma1.size());
    gates.push_back({"blowup_points", n, double(*config.gates.blowup_points), n == *config.gates.blowup_points});
  }
  if (config.gates.blowup_classification) {
    const bool ok = br.classification == *config.gates.blowup_classification;
    gates.push_back({"blowup_classification", ok ? 1.0 : 0.0, 1.0, ok});
  }
  finish(result, gates);
  write_json(out_dir, "blowup.json", result.report, result);
  return result;
}

CommandResult cmd_export(const RunConfig& config, const std::string& out_dir) {
  const SolutionPair pair = build_pair(config);
  CommandResult result;
  write_fields(out_dir, pair, config.export_fields.fields, "", result);
  result.report["command"] = "export";
  result.report["files"] = result.files;
  return result;
}

CommandResult cmd_kelvin(const RunConfig& config, const std::string& out_dir) {
  const SolutionPair pair = build_pair(config);
  const KelvinResult kr = kelvin_transform(pair, config.kelvin);
  CommandResult result;
  result.report["command"] = "kelvin";
  result.report["family"] = config.solution.family;
  result.report["law"] = to_string(config.kelvin.law);
  result.report["valid_nodes"] = kr.valid.count();
  result.report["punctured_nodes"] = kr.valid.size() - kr.valid.count();

  const Grid& g = kr.pair.grid();
  double u_near = 0.0, psi_near = 0.0;
  for (Index j = 0; j < g.ny; ++j)
    for (Index i = 0; i < g.nx; ++i)
      if (kr.valid(i, j) && g.node(i, j).norm() <= 1.0) {
        u_near = std::max(u_near, std::abs(kr.pair.u(i, j)));
        psi_near = std::max(psi_near, kr.pair.psi.at(i, j).norm());
      }
  result.report["near_origin"] = {{"max_abs_u", u_near}, {"max_psi", psi_near}};

  CommandResult v = verify_masked(kr.pair, config, &kr.valid);
  result.report.update(v.report);
  result.exit_code = v.exit_code;
  write_json(out_dir, "kelvin.json", result.report, result);
  write_fields(out_dir, kr.pair, config.export_fields.fields, "kelvin_", result);
  return result;
}

int run_command(const std::string& command, const std::string& config_path, const std::string& out_dir,
                std::string* message) {
  auto note = [&](const std::string& m) {
    if (message) *message = m;
  };
  try {
    const RunConfig config = load_run_config(config_path);
    CommandResult r;
    if (command == "verify") r = cmd_verify(config, out_dir);
    else if (command == "solve") r = cmd_solve(config, out_dir);
    else if (command == "blowup") r = cmd_blowup(config, out_dir);
    else if (command == "export") r = cmd_export(config, out_dir);
    else if (command == "kelvin") r = cmd_kelvin(config, out_dir);
    else throw ConfigError("unknown command '" + command + "'");
    note(r.exit_code == kExitPass ? "pass" : "gate failure");
    return r.exit_code;
  } catch (const NoConvergence& e) {
    note(e.what());
    return kExitGateFailure;
  } catch (const LinearSolveFailure& e) {
    note(e.what());
    return kExitGateFailure;
  } catch (const NotASolution& e) {
    note(e.what());
    return kExitGateFailure;
  } catch (const std::exception& e) {
    note(e.what());
    return kExitConfigError;
  }
}

ordered_json to_json(const SolveReport& r) {
  ordered_json j;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["residual_history"] = r.residual_history;
  j["linear_iterations"] = r.linear_iterations;
  j["step_lengths"] = r.step_lengths;
  j["local_mass_history"] = r.local_mass_history;
  return j;
}

ordered_json to_json(const StressTensor& s) {
  ordered_json j;
  j["trace_residual"] = s.trace_residual;
  j["raw_trace_max"] = s.raw_trace_max;
  j["raw_asymmetry_max"] = s.raw_asymmetry_max;
  j["divergence_residual"] = s.divergence_residual;
  j["identity_residual"] = s.identity_residual;
  return j;
}

ordered_json to_json(const GreenResult& g) {
  ordered_json j;
  j["residual"] = g.residual;
  j["match"] = g.match;
  j["match_inner"] = g.match_inner;
  j["psi_inner"] = g.psi_inner;
  return j;
}

}  // namespace superliouville
