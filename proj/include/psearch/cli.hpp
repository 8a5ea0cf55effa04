#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "psearch/explorer.hpp"
#include "psearch/geometry.hpp"
#include "psearch/group.hpp"
#include "psearch/plan.hpp"
#include "psearch/planner.hpp"
#include "psearch/reduced.hpp"
#include "psearch/report.hpp"
#include "psearch/statevector.hpp"

// Command layer shared by the command-line tool and the tests.  Each command
// builds a deterministic report (JSON, or CSV where the output is tabular)
// and an exit code: 0 success, 1 verification failure, 2 usage error.

namespace psearch {

inline constexpr int kSchemaVersion = 1;

enum class Command { simulate, grk, params, verify, scan, conjecture };
enum class OutputFormat { json, csv };

struct RunConfig {
  Command command = Command::params;
  std::int64_t n_items = 0;   // 0 = not given
  std::int64_t n_blocks = 0;  // 0 = not given
  std::int64_t target_index = 0;
  Representation representation = Representation::full;
  double grid_step = 1e-2;
  std::uint64_t seed = 0;
  OutputFormat output_format = OutputFormat::json;
  std::string output_path;    // empty = standard output
  std::string suite = "all";  // verify
  std::string plan_text;      // simulate
  double gamma = 0.0;         // verify: single-angle override, 0 = sweep
  int starts = 200;           // conjecture
};

struct CommandResult {
  int exit_code = 0;
  std::string report;
};

namespace detail {

inline const char* rep_name(Representation rep) {
  switch (rep) {
    case Representation::full: return "full";
    case Representation::reduced_exact: return "reduced_exact";
    case Representation::reduced_asymptotic: return "reduced_asymptotic";
  }
  return "?";
}

struct Check {
  std::string name;
  double residual;
  double tolerance;
};

inline CommandResult usage_error(const std::string& message) {
  return {2, "error: " + message + "\n"};
}

inline void write_reduced_state(JsonWriter& w, const ReducedState& st) {
  w.begin_object();
  w.key("t").value(st.coeffs[0]);
  w.key("ntt").value(st.coeffs[1]);
  w.key("u").value(st.coeffs[2]);
  w.end_object();
}

inline Spinor2 random_spinor(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec3 axis{gauss(rng), gauss(rng), gauss(rng)};
  const double n = norm(axis);
  if (n < 1e-12) axis = {0.0, 0.0, 1.0};
  else axis = {axis[0] / n, axis[1] / n, axis[2] / n};
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  return axis_rotation(axis, ang(rng));
}

inline IterationPlan random_plan(std::mt19937_64& rng, std::int64_t max_total) {
  std::uniform_int_distribution<int> kind(0, 1);
  std::uniform_int_distribution<std::int64_t> pow_dist(1, 4);
  IterationPlan plan;
  std::int64_t total = 0;
  while (total < max_total) {
    const std::int64_t p = std::min(pow_dist(rng), max_total - total);
    plan.steps.push_back({kind(rng) == 0 ? OpKind::G1 : OpKind::G2, p});
    total += p;
  }
  return plan;
}

// ---- verification suites ----------------------------------------------------

inline void lie_checks(const RunConfig& cfg, std::vector<Check>& out) {
  if (cfg.gamma > 0.0) {
    out.push_back({"lie_relation gamma=" + format_double(cfg.gamma),
                   lie_relation_residual(cfg.gamma), 1e-15});
    return;
  }
  double worst = 0.0;
  for (int i = 1; i <= 20; ++i)
    worst = std::max(worst, lie_relation_residual(0.25 * M_PI * i / 20.0));
  out.push_back({"lie_relation 20 angles in (0, pi/4]", worst, 1e-15});
}

inline void group_checks(const RunConfig& cfg, std::vector<Check>& out) {
  std::mt19937_64 rng(cfg.seed);
  double cover = 0.0, hom = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Spinor2 u = random_spinor(rng);
    const Spinor2 v = random_spinor(rng);
    Spinor2 nu = u;
    for (auto& row : nu.entries.m)
      for (auto& e : row) e = -e;
    cover = std::max(cover, max_abs_diff(so3_of_su2(nu), so3_of_su2(u)));
    const Spinor2 uv{u.entries * v.entries};
    hom = std::max(hom, max_abs_diff(so3_of_su2(uv),
                                     so3_of_su2(u) * so3_of_su2(v)));
  }
  out.push_back({"covering_map 100 random spinors", cover, 1e-12});
  out.push_back({"homomorphism 100 random pairs", hom, 1e-12});

  const double gamma = cfg.gamma > 0.0 ? cfg.gamma : M_PI / 6.0;
  const double theta2 = 0.01;
  const double theta1 = std::sin(gamma) * theta2;
  double rel = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const double j1 = 0.25 * M_PI / theta1 * i / 50.0;
    rel = std::max(rel, group_relation_residual(j1, gamma, theta1, theta2));
  }
  out.push_back({"group_relation 50 principal-branch samples", rel, 1e-10});

  double axis = 0.0;
  const Vec3 z{0.0, 0.0, 1.0}, x{1.0, 0.0, 0.0};
  for (int i = 0; i < 100; ++i) {
    const Spinor2 u = random_spinor(rng);
    const TwoAxisAngles ang = two_axis_decompose(u, z, x);
    const Spinor2 back{axis_rotation(z, ang.lambda).entries *
                       axis_rotation(x, ang.theta).entries *
                       axis_rotation(z, ang.gamma).entries};
    axis = std::max(axis, max_abs_diff(back.entries, u.entries));
  }
  out.push_back({"two_axis_decomposition 100 random spinors", axis, 1e-10});
}

inline void oracle_checks(const RunConfig& cfg, std::vector<Check>& out) {
  const std::int64_t n = cfg.n_items > 0 ? cfg.n_items : 64;
  const std::int64_t k = cfg.n_blocks > 0 ? cfg.n_blocks : 4;
  const SearchSpace space = make_space(n, k, cfg.target_index);
  std::mt19937_64 rng(cfg.seed);

  double traj = 0.0, resid = 0.0;
  const Rotation3 mats[2] = {exact_matrix(OpKind::G1, space),
                             exact_matrix(OpKind::G2, space)};
  for (int rep = 0; rep < 50; ++rep) {
    const IterationPlan plan = random_plan(rng, 20);
    FullState psi = uniform_state(space);
    Vec3 v = reduced_state(ReducedName::s1, space).coeffs;
    for (auto it = plan.steps.rbegin(); it != plan.steps.rend(); ++it) {
      const bool g1 = it->kind == OpKind::G1;
      for (std::int64_t i = 0; i < it->power; ++i) {
        psi = apply_operator(g1 ? OperatorKind::G1 : OperatorKind::G2, space,
                             std::move(psi));
        v = mats[g1 ? 0 : 1] * v;
        const ReducedProjection proj = project_reduced(space, psi);
        traj = std::max(traj, max_abs_diff(proj.reduced.coeffs, v));
        resid = std::max(resid, proj.residual);
      }
    }
  }
  out.push_back({"oracle_trajectory 50 random plans", traj, 1e-12});
  out.push_back({"subspace_residual 50 random plans", resid, 1e-12});

  std::normal_distribution<double> gauss(0.0, 1.0);
  FullState chi;
  chi.amplitudes.resize(static_cast<std::size_t>(n));
  for (auto& a : chi.amplitudes) a = {gauss(rng), gauss(rng)};
  const double nn = norm(chi);
  for (auto& a : chi.amplitudes) a /= nn;
  double unit = 0.0, invol = 0.0;
  for (OperatorKind op : {OperatorKind::I_t, OperatorKind::I_s1,
                          OperatorKind::I_s2, OperatorKind::G1, OperatorKind::G2}) {
    const FullState once = apply_operator(op, space, chi);
    unit = std::max(unit, std::abs(norm(once) - 1.0));
    if (op == OperatorKind::I_t || op == OperatorKind::I_s1 ||
        op == OperatorKind::I_s2) {
      const FullState twice = apply_operator(op, space, once);
      double d = 0.0;
      for (std::size_t i = 0; i < twice.amplitudes.size(); ++i)
        d = std::max(d, std::abs(twice.amplitudes[i] - chi.amplitudes[i]));
      invol = std::max(invol, d);
    }
  }
  out.push_back({"unitarity random state", unit, 1e-12});
  out.push_back({"involutions random state", invol, 1e-12});
}

inline void spectra_checks(const RunConfig& cfg, std::vector<Check>& out) {
  const std::int64_t n = cfg.n_items > 0 ? cfg.n_items : 64;
  const std::int64_t k = cfg.n_blocks > 0 ? cfg.n_blocks : 4;
  const SearchSpace space = make_space(n, k, cfg.target_index);
  const Angles& a = space.ang;

  const auto worst = [](const Rotation3& m, const EigenSystem3& es) {
    double r = 0.0;
    for (const Eigenpair& p : es.pairs)
      r = std::max(r, eigenpair_residual(m, p));
    return r;
  };

  Rotation3 g1 = exact_matrix(OpKind::G1, space);
  out.push_back({"spectrum_g1_exact", worst(g1, spectrum(SpectrumKind::G1_full, space)), 1e-10});
  double pw = 0.0;
  for (std::int64_t j : {0, 1, 4, 7})
    pw = std::max(pw, worst(asymptotic_g1_power(j, a.gamma, a.theta1),
                            spectrum(SpectrumKind::G1_power, space, j)));
  out.push_back({"spectrum_g1_power even and odd", pw, 1e-10});
  double lw = 0.0;
  for (std::int64_t j : {1, 5})
    lw = std::max(lw, worst(g2_power(j, a.theta2),
                            spectrum(SpectrumKind::G2, space, j)));
  out.push_back({"spectrum_g2", lw, 1e-10});
  double aw = 0.0;
  for (std::int64_t j : {1, 3})
    aw = std::max(aw, worst(ga_power(j, a.gamma, a.theta2),
                            spectrum(SpectrumKind::Ga, space, j)));
  out.push_back({"spectrum_ga", aw, 1e-10});
}

// ---- command bodies ---------------------------------------------------------

inline CommandResult cmd_params(const RunConfig& cfg) {
  if (cfg.n_blocks < 2) return usage_error("params requires --K >= 2");
  const OptimalParams p = optimal_params(cfg.n_blocks);
  JsonWriter w;
  w.begin_object();
  w.key("schema_version").value(kSchemaVersion);
  w.key("command").value("params");
  w.key("K").value(p.K);
  w.key("eta").value(p.eta);
  w.key("alpha").value(p.alpha);
  if (cfg.n_items > 0) {
    const SearchSpace space = make_space(cfg.n_items, cfg.n_blocks, cfg.target_index);
    const auto [j1, j2] = iteration_counts(space);
    w.key("n_items").value(space.n_items);
    w.key("j1").value(j1);
    w.key("j2").value(j2);
    w.key("queries").value(j1 + j2 + 1);
  }
  w.end_object();
  return {0, w.str() + "\n"};
}

inline CommandResult cmd_grk(const RunConfig& cfg) {
  if (cfg.n_items < 1 || cfg.n_blocks < 1)
    return usage_error("grk requires --N and --K");
  const SearchSpace space = make_space(cfg.n_items, cfg.n_blocks, cfg.target_index);
  const GrkRun run = run_grk(space, cfg.representation);
  JsonWriter w;
  w.begin_object();
  w.key("schema_version").value(kSchemaVersion);
  w.key("command").value("grk");
  w.key("n_items").value(space.n_items);
  w.key("n_blocks").value(space.n_blocks);
  w.key("target_index").value(space.target_index);
  w.key("representation").value(rep_name(cfg.representation));
  w.key("j1").value(run.j1);
  w.key("j2").value(run.j2);
  w.key("queries").value(run.queries);
  w.key("u_amplitude").value(run.u_amplitude);
  w.key("u_amplitude_squared").value(run.u_amplitude * run.u_amplitude);
  w.key("target_block_probability").value(run.target_block_probability);
  w.key("non_target_probability").value(1.0 - run.target_block_probability);
  w.key("final_state");
  write_reduced_state(w, run.final_state);
  if (!run.block_probs.empty()) {
    w.key("block_probabilities").begin_array();
    for (double p : run.block_probs) w.value(p);
    w.end_array();
  }
  w.end_object();
  return {0, w.str() + "\n"};
}

inline CommandResult cmd_simulate(const RunConfig& cfg) {
  if (cfg.n_items < 1 || cfg.n_blocks < 1)
    return usage_error("simulate requires --N and --K");
  const SearchSpace space = make_space(cfg.n_items, cfg.n_blocks, cfg.target_index);
  const IterationPlan plan = parse_plan(cfg.plan_text);
  const Angles& a = space.ang;

  JsonWriter w;
  w.begin_object();
  w.key("schema_version").value(kSchemaVersion);
  w.key("command").value("simulate");
  w.key("n_items").value(space.n_items);
  w.key("n_blocks").value(space.n_blocks);
  w.key("target_index").value(space.target_index);
  w.key("representation").value(rep_name(cfg.representation));
  w.key("plan").value(to_string(plan));
  w.key("queries").value(query_count(plan));

  if (cfg.representation == Representation::full) {
    const FullState psi = run_sequence(space, plan);
    const ReducedProjection proj = project_reduced(space, psi);
    const std::vector<double> blocks = block_probabilities(space, psi);
    w.key("final_state");
    write_reduced_state(w, proj.reduced);
    w.key("u_amplitude").value(proj.reduced.coeffs[2]);
    w.key("subspace_residual").value(proj.residual);
    w.key("target_block_probability")
        .value(blocks[static_cast<std::size_t>(target_block(space))]);
    w.key("block_probabilities").begin_array();
    for (double p : blocks) w.value(p);
    w.end_array();
  } else {
    const bool exact = cfg.representation == Representation::reduced_exact;
    const IterationPlan steps = exact ? expand_auxiliary(plan) : plan;
    Vec3 v = reduced_state(ReducedName::s1, space).coeffs;
    for (auto it = steps.steps.rbegin(); it != steps.steps.rend(); ++it) {
      switch (it->kind) {
        case OpKind::G1:
          if (exact) {
            const Rotation3 g1 = exact_matrix(OpKind::G1, space);
            for (std::int64_t i = 0; i < it->power; ++i) v = g1 * v;
          } else {
            v = asymptotic_g1_power(it->power, a.gamma, a.theta1) * v;
          }
          break;
        case OpKind::G2:
          v = g2_power(it->power, a.theta2) * v;
          break;
        case OpKind::Ga:
          v = ga_power(it->power, a.gamma, a.theta2) * v;
          break;
      }
    }
    w.key("final_state");
    write_reduced_state(w, ReducedState{v});
    w.key("u_amplitude").value(v[2]);
    w.key("target_block_probability").value(v[0] * v[0] + v[1] * v[1]);
  }
  w.end_object();
  return {0, w.str() + "\n"};
}

inline CommandResult cmd_verify(const RunConfig& cfg) {
  std::vector<Check> checks;
  const std::string& s = cfg.suite;
  if (s != "lie" && s != "group" && s != "oracle" && s != "spectra" && s != "all")
    return usage_error("unknown suite '" + s +
                       "' (expected lie, group, oracle, spectra or all)");
  if (s == "lie" || s == "all") lie_checks(cfg, checks);
  if (s == "group" || s == "all") group_checks(cfg, checks);
  if (s == "oracle" || s == "all") oracle_checks(cfg, checks);
  if (s == "spectra" || s == "all") spectra_checks(cfg, checks);

  bool passed = true;
  for (const Check& c : checks) passed = passed && c.residual <= c.tolerance;

  if (cfg.output_format == OutputFormat::csv) {
    std::string out = csv_row({"check", "residual", "tolerance", "pass"});
    for (const Check& c : checks)
      out += csv_row({c.name, format_double(c.residual),
                      format_double(c.tolerance),
                      c.residual <= c.tolerance ? "true" : "false"});
    return {passed ? 0 : 1, out};
  }
  JsonWriter w;
  w.begin_object();
  w.key("schema_version").value(kSchemaVersion);
  w.key("command").value("verify");
  w.key("suite").value(s);
  w.key("checks").begin_array();
  for (const Check& c : checks) {
    w.begin_object();
    w.key("name").value(c.name);
    w.key("residual").value(c.residual);
    w.key("tolerance").value(c.tolerance);
    w.key("pass").value(c.residual <= c.tolerance);
    w.end_object();
  }
  w.end_array();
  w.key("passed").value(passed);
  w.end_object();
  return {passed ? 0 : 1, w.str() + "\n"};
}

inline void write_cases(JsonWriter& w, const char* key,
                        const std::vector<ScanCase>& cases) {
  w.key(key).begin_array();
  for (const ScanCase& c : cases) {
    w.begin_object();
    w.key("segments").begin_array();
    for (double v : c.segments) w.value(v);
    w.end_array();
    w.key("queries").value(c.queries);
    if (!c.note.empty()) w.key("note").value(c.note);
    w.end_object();
  }
  w.end_array();
}

inline CommandResult cmd_scan(const RunConfig& cfg) {
  if (cfg.n_items < 1 || cfg.n_blocks < 3)
    return usage_error("scan requires --N and --K >= 3");
  const ScanReport rep =
      scan_three_segment(cfg.n_blocks, cfg.n_items, cfg.grid_step);
  if (cfg.output_format == OutputFormat::csv) {
    std::string out = csv_row({"j1", "j2", "queries"});
    for (const ScanCase& c : rep.records)
      out += csv_row({format_double(c.segments[0]), format_double(c.segments[1]),
                      format_double(c.queries)});
    return {0, out};
  }
  JsonWriter w;
  w.begin_object();
  w.key("schema_version").value(kSchemaVersion);
  w.key("command").value("scan");
  w.key("K").value(rep.K);
  w.key("n_items").value(rep.n_items);
  w.key("grid_step").value(rep.grid_step);
  w.key("grid_spec").value(rep.grid_spec);
  w.key("best_plan").begin_array();
  for (double v : rep.best_plan) w.value(v);
  w.end_array();
  w.key("best_queries").value(rep.best_queries);
  w.key("grk_queries").value(rep.grk_queries);
  write_cases(w, "counterexamples", rep.counterexamples);
  write_cases(w, "solutions", rep.records);
  w.key("notes").begin_array();
  for (const std::string& n : rep.notes) w.value(n);
  w.end_array();
  w.end_object();
  return {0, w.str() + "\n"};
}

inline CommandResult cmd_conjecture(const RunConfig& cfg) {
  if (cfg.n_blocks < 2) return usage_error("conjecture requires --K >= 2");
  if (cfg.starts < 1) return usage_error("conjecture requires at least one start");
  const SegmentBounds bounds = default_bounds(cfg.n_blocks);
  const ScanReport rep = conjecture_probe(cfg.n_blocks, bounds, cfg.grid_step,
                                          cfg.starts, 20, cfg.seed);
  if (cfg.output_format == OutputFormat::csv) {
    std::string out = csv_row({"phi_t", "phi_ntt", "phi_u", "best_three", "note"});
    for (const ScanCase& c : rep.records)
      out += csv_row({format_double(c.segments[0]), format_double(c.segments[1]),
                      format_double(c.segments[2]), format_double(c.queries),
                      c.note});
    return {0, out};
  }
  JsonWriter w;
  w.begin_object();
  w.key("schema_version").value(kSchemaVersion);
  w.key("command").value("conjecture");
  w.key("K").value(rep.K);
  w.key("grid_step").value(rep.grid_step);
  w.key("grid_spec").value(rep.grid_spec);
  w.key("bounds").begin_object();
  w.key("g1_max").value(bounds.g1_max);
  w.key("g2_max").value(bounds.g2_max);
  w.end_object();
  w.key("n_starts").value(cfg.starts);
  w.key("seed").value(cfg.seed);
  w.key("grk_queries_scaled").value(rep.grk_queries);
  w.key("best_three_segment_scaled").value(rep.best_queries);
  write_cases(w, "counterexamples", rep.counterexamples);
  write_cases(w, "starts", rep.records);
  w.key("notes").begin_array();
  for (const std::string& n : rep.notes) w.value(n);
  w.end_array();
  w.end_object();
  return {0, w.str() + "\n"};
}

}  // namespace detail

inline CommandResult run_command(const RunConfig& cfg) {
  try {
    const bool csv_ok = cfg.command == Command::scan ||
                        cfg.command == Command::conjecture ||
                        cfg.command == Command::verify;
    if (cfg.output_format == OutputFormat::csv && !csv_ok)
      return detail::usage_error("csv output is only available for scan, conjecture and verify");
    switch (cfg.command) {
      case Command::params: return detail::cmd_params(cfg);
      case Command::grk: return detail::cmd_grk(cfg);
      case Command::simulate: return detail::cmd_simulate(cfg);
      case Command::verify: return detail::cmd_verify(cfg);
      case Command::scan: return detail::cmd_scan(cfg);
      case Command::conjecture: return detail::cmd_conjecture(cfg);
    }
    return detail::usage_error("unknown command");
  } catch (const SpaceError& e) {
    return detail::usage_error(e.what());
  } catch (const PlanParseError& e) {
    return detail::usage_error(e.what());
  } catch (const std::invalid_argument& e) {
    return detail::usage_error(e.what());
  }
}

}  // namespace psearch
