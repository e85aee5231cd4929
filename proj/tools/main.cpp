// marchetype: generate, compile, solve and cross-check constrained
// targeted-marketing LPs. Every command writes a manifest next to its
// outputs; `marchetype rerun --manifest <file>` replays it.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "marchetype/datagen.hpp"
#include "marchetype/io.hpp"
#include "marchetype/mps.hpp"
#include "marchetype/oracle.hpp"
#include "marchetype/pdhg.hpp"
#include "marchetype/targeting.hpp"
#include "marchetype/toy.hpp"
#include "marchetype/version.hpp"

namespace {

namespace fs = std::filesystem;
using namespace marchetype;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNonoptimal = 3;
constexpr int kExitGuard = 4;

std::string iso_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

int thread_budget() {
  const char* env = std::getenv("MARCHETYPE_THREADS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n > 0 ? n : 1;
}

struct ManifestWriter {
  RunManifest manifest;
  std::string dir;

  ManifestWriter(std::string command, std::vector<std::string> argv, std::string out_dir,
                 std::uint64_t seed)
      : dir(std::move(out_dir)) {
    manifest.command = std::move(command);
    manifest.argv = std::move(argv);
    manifest.seed = seed;
    manifest.tool_version = kVersion;
    manifest.started_at = iso_now();
  }

  void add_input(const std::string& path) { manifest.inputs.push_back(path); }
  void add_output(const std::string& path) { manifest.outputs.push_back(path); }

  void finish() {
    manifest.finished_at = iso_now();
    write_text_atomic((fs::path(dir) / "manifest.json").string(), manifest_to_json(manifest));
  }
};

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw CLI::ValidationError("--out", "cannot create output directory '" + dir + "'");
  }
}

std::vector<Index> parse_index_list(const std::string& text) {
  std::vector<Index> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(std::stoll(item));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

void print_row_counts(std::ostream& out, const StandardLP& lp, const TargetingInstance& instance,
                      const ConstraintMenu& menu, const std::string& mode) {
  std::int64_t volume1 = menu.volume1 ? 2 * static_cast<std::int64_t>(menu.volume1->size()) : 0;
  std::int64_t volume2 = 0;
  if (menu.volume2) {
    for (std::size_t k = 0; k < menu.volume2->lower.size(); ++k) {
      if (std::isfinite(menu.volume2->upper[k])) ++volume2;
      if (menu.volume2->lower[k] > -std::numeric_limits<double>::infinity()) ++volume2;
    }
  }
  std::int64_t sim1 = menu.similarity1 ? static_cast<std::int64_t>(menu.similarity1->size()) : 0;
  std::int64_t sim2 = menu.similarity2 ? static_cast<std::int64_t>(menu.similarity2->pairs.size()) : 0;
  std::int64_t targeting = 0;
  if (menu.targeting_enabled) {
    targeting = mode == "spwc" ? instance.n_action_segments() : instance.n_customers;
  }
  std::int64_t aux = lp.n_rows() - volume1 - volume2 - sim1 - sim2 - targeting;

  out << "rows by constraint family (" << mode << ")\n";
  out << "  volume1     " << volume1 << "\n";
  out << "  volume2     " << volume2 << "\n";
  out << "  similarity1 " << sim1 << "\n";
  out << "  similarity2 " << sim2 << "\n";
  out << "  targeting   " << targeting << "\n";
  if (aux > 0) out << "  auxiliary   " << aux << "\n";
  out << "  total       " << lp.n_rows() << "\n";
}

SolverConfig solver_config_from_flags(double tol, Index max_iters, bool no_restart,
                                      bool no_rescale, std::uint64_t seed) {
  SolverConfig cfg;
  cfg.tolerance = tol;
  cfg.max_total_iterations = max_iters;
  cfg.enable_restarts = !no_restart;
  cfg.rescale = !no_rescale;
  cfg.seed = seed;
  return cfg;
}

int run_cli(const std::vector<std::string>& args);

// ---------------------------------------------------------------- gen ----

int cmd_gen(const std::vector<std::string>& argv, const GenConfig& cfg, const std::string& out) {
  ensure_out_dir(out);
  ManifestWriter mw("gen", argv, out, cfg.seed);

  TargetingInstance instance = generate_instance(cfg);
  SegmentHierarchy hierarchy = make_hierarchy(cfg);
  ConstraintMenu menu = default_constraint_menu(instance, hierarchy);

  auto instance_path = (fs::path(out) / "instance.json").string();
  auto menu_path = (fs::path(out) / "menu.json").string();
  auto hierarchy_path = (fs::path(out) / "hierarchy.json").string();
  write_text_atomic(instance_path, instance_to_json(instance));
  write_text_atomic(menu_path, menu_to_json(menu));
  write_text_atomic(hierarchy_path, hierarchy_to_json(hierarchy));
  mw.add_output(instance_path);
  mw.add_output(menu_path);
  mw.add_output(hierarchy_path);
  mw.finish();

  std::cout << "generated " << instance.n_customers << " customers, " << instance.n_actions
            << " actions, " << instance.n_segments() << " segments -> " << out << "\n";
  return kExitOk;
}

// ------------------------------------------------------------- compile ----

int cmd_compile(const std::vector<std::string>& argv, const std::string& instance_path,
                const std::string& menu_path, const std::string& mode,
                const std::string& pair_profits_path, const std::string& out, bool export_mps) {
  ensure_out_dir(out);
  ManifestWriter mw("compile", argv, out, 0);
  mw.add_input(instance_path);
  mw.add_input(menu_path);

  TargetingInstance instance = instance_from_json(read_text(instance_path));
  ConstraintMenu menu = menu_from_json(read_text(menu_path));

  StandardLP lp;
  if (mode == "ipwc") {
    lp = compile_ipwc(instance, menu);
  } else if (mode == "spwc") {
    lp = compile_spwc(instance, menu);
  } else if (mode == "interdep") {
    if (pair_profits_path.empty()) {
      throw CLI::ValidationError("--pair-profits", "interdep mode requires a pair-profit tensor");
    }
    mw.add_input(pair_profits_path);
    json j = json::parse(read_text(pair_profits_path));
    std::vector<double> q;
    for (const json& a : j.at("pair_profits")) {
      for (const json& b : a) {
        for (const json& c : b) q.push_back(c.get<double>());
      }
    }
    lp = compile_interdependent(instance, menu, q);
  } else {
    throw CLI::ValidationError("--mode", "must be ipwc, spwc or interdep");
  }

  auto lp_path = (fs::path(out) / "lp.json").string();
  write_text_atomic(lp_path, lp_to_json(lp));
  mw.add_output(lp_path);
  if (export_mps) {
    auto mps_path = (fs::path(out) / "lp.mps").string();
    write_text_atomic(mps_path, write_mps(lp));
    mw.add_output(mps_path);
  }
  mw.finish();

  print_row_counts(std::cout, lp, instance, menu, mode);
  std::cout << "columns " << lp.n_vars() << ", nnz " << lp.constraints.nnz() << " -> " << lp_path
            << "\n";
  return kExitOk;
}

// --------------------------------------------------------------- solve ----

int cmd_solve(const std::vector<std::string>& argv, const std::string& lp_path,
              const std::string& out, double tol, Index max_iters, bool no_restart,
              bool no_rescale, bool log_csv, std::uint64_t seed) {
  ensure_out_dir(out);
  ManifestWriter mw("solve", argv, out, seed);
  mw.add_input(lp_path);

  StandardLP lp = lp_from_json(read_text(lp_path));
  SolverConfig cfg = solver_config_from_flags(tol, max_iters, no_restart, no_rescale, seed);
  SolveReport report = solve(lp, cfg);

  auto solution_path = (fs::path(out) / "solution.json").string();
  write_text_atomic(solution_path, report_to_json(report));
  mw.add_output(solution_path);
  if (log_csv) {
    auto log_path = (fs::path(out) / "convergence.csv").string();
    write_text_atomic(log_path, trace_to_csv(report.trace));
    mw.add_output(log_path);
  }
  mw.finish();

  std::cout << "status " << to_string(report.status) << ", objective " << report.objective
            << ", iterations " << report.iterations << ", restarts " << report.restarts << "\n";
  return report.status == SolveStatus::optimal ? kExitOk : kExitNonoptimal;
}

// -------------------------------------------------------------- oracle ----

int cmd_oracle(const std::vector<std::string>& argv, const std::string& lp_path,
               const std::string& out) {
  ensure_out_dir(out);
  ManifestWriter mw("oracle", argv, out, 0);
  mw.add_input(lp_path);

  StandardLP lp = lp_from_json(read_text(lp_path));
  DenseLP dense;
  try {
    dense = densify(lp);
  } catch (const std::invalid_argument& e) {
    std::cerr << "oracle guard: " << e.what() << "\n";
    return kExitGuard;
  }
  SimplexResult result = simplex_solve(dense);

  json j;
  j["status"] = result.status == OracleStatus::optimal ? "optimal" : "infeasible";
  j["objective"] = result.objective;
  j["primal"] = result.x;
  j["pivots"] = result.pivots;
  auto solution_path = (fs::path(out) / "oracle_solution.json").string();
  write_text_atomic(solution_path, j.dump());
  mw.add_output(solution_path);
  mw.finish();

  std::cout << "oracle status " << j["status"].get<std::string>() << ", objective "
            << result.objective << "\n";
  return kExitOk;
}

// ------------------------------------------------------------- compare ----

struct SweepRow {
  double fraction = 0.0;
  double mean_profit_spwc = 0.0;
  double mean_iterations = 0.0;
  bool all_optimal = true;
};

// Collapse a seeded prefix of the zip permutation to shared segment-level
// decisions; remaining customers keep individual decisions. Nested prefixes
// make the profit difference monotone in the fraction draw by draw.
TargetingInstance collapse_action_segments(const TargetingInstance& base,
                                           const std::vector<Index>& zip_permutation,
                                           double fraction) {
  TargetingInstance inst = base;
  Index n_collapsed = static_cast<Index>(
      std::ceil(fraction * static_cast<double>(zip_permutation.size()) - 1e-12));
  n_collapsed = std::clamp<Index>(n_collapsed, 0, static_cast<Index>(zip_permutation.size()));
  std::vector<bool> collapsed(zip_permutation.size(), false);
  for (Index r = 0; r < n_collapsed; ++r) {
    collapsed[static_cast<std::size_t>(zip_permutation[static_cast<std::size_t>(r)])] = true;
  }
  Index next = 0;
  std::vector<Index> zip_segment(zip_permutation.size(), -1);
  for (Index i = 0; i < inst.n_customers; ++i) {
    Index zip = base.constraint_segment_of[static_cast<std::size_t>(i)];
    if (collapsed[static_cast<std::size_t>(zip)]) {
      if (zip_segment[static_cast<std::size_t>(zip)] < 0) zip_segment[static_cast<std::size_t>(zip)] = next++;
      inst.action_segment_of[static_cast<std::size_t>(i)] = zip_segment[static_cast<std::size_t>(zip)];
    } else {
      inst.action_segment_of[static_cast<std::size_t>(i)] = next++;
    }
  }
  return inst;
}

int cmd_compare(const std::vector<std::string>& argv, const std::string& instance_path,
                const std::string& menu_path, const std::string& out, double tol, Index max_iters,
                bool sweep, const std::string& fractions_text, Index draws, std::uint64_t seed) {
  ensure_out_dir(out);
  ManifestWriter mw("compare", argv, out, seed);
  mw.add_input(instance_path);
  mw.add_input(menu_path);

  TargetingInstance instance = instance_from_json(read_text(instance_path));
  ConstraintMenu menu = menu_from_json(read_text(menu_path));
  SolverConfig cfg = solver_config_from_flags(tol, max_iters, false, false, seed);

  StandardLP ipwc = compile_ipwc(instance, menu);
  SolveReport ipwc_report = solve(ipwc, cfg);
  StandardLP spwc = compile_spwc(instance, menu);
  SolveReport spwc_report = solve(spwc, cfg);

  double profit_ipwc = -ipwc_report.objective;
  double profit_spwc = -spwc_report.objective;
  bool all_optimal = ipwc_report.status == SolveStatus::optimal &&
                     spwc_report.status == SolveStatus::optimal;

  json j;
  j["ipwc"] = {{"profit", profit_ipwc},
               {"iterations", ipwc_report.iterations},
               {"status", to_string(ipwc_report.status)}};
  j["spwc"] = {{"profit", profit_spwc},
               {"iterations", spwc_report.iterations},
               {"status", to_string(spwc_report.status)}};
  j["difference"] = profit_ipwc - profit_spwc;

  std::vector<std::string> lines;
  if (sweep) {
    std::vector<double> fractions = parse_double_list(fractions_text);
    const Index K = instance.n_segments();

    // One zip permutation per draw; prefixes of it collapse as the fraction
    // grows. Draws fan out across MARCHETYPE_THREADS threads.
    std::vector<std::vector<Index>> permutations(static_cast<std::size_t>(draws));
    for (Index d = 0; d < draws; ++d) {
      std::vector<Index> perm(static_cast<std::size_t>(K));
      std::iota(perm.begin(), perm.end(), 0);
      std::uint64_t s = seed * 2654435761u + static_cast<std::uint64_t>(d) + 1;
      for (Index i = K - 1; i > 0; --i) {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        Index r = static_cast<Index>((s >> 33) % static_cast<std::uint64_t>(i + 1));
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(r)]);
      }
      permutations[static_cast<std::size_t>(d)] = std::move(perm);
    }

    std::vector<SweepRow> rows(fractions.size());
    for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
      std::vector<double> profits(static_cast<std::size_t>(draws));
      std::vector<double> iters(static_cast<std::size_t>(draws));
      std::vector<char> optimal(static_cast<std::size_t>(draws), 0);

      auto run_draw = [&](Index d) {
        TargetingInstance collapsed =
            collapse_action_segments(instance, permutations[static_cast<std::size_t>(d)], fractions[fi]);
        SolveReport r = solve(compile_spwc(collapsed, menu), cfg);
        profits[static_cast<std::size_t>(d)] = -r.objective;
        iters[static_cast<std::size_t>(d)] = static_cast<double>(r.iterations);
        optimal[static_cast<std::size_t>(d)] = r.status == SolveStatus::optimal ? 1 : 0;
      };

      int threads = std::min<int>(thread_budget(), static_cast<int>(draws));
      if (threads <= 1) {
        for (Index d = 0; d < draws; ++d) run_draw(d);
      } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) {
          pool.emplace_back([&, w] {
            for (Index d = w; d < draws; d += threads) run_draw(d);
          });
        }
        for (auto& th : pool) th.join();
      }

      SweepRow row;
      row.fraction = fractions[fi];
      for (Index d = 0; d < draws; ++d) {
        row.mean_profit_spwc += profits[static_cast<std::size_t>(d)];
        row.mean_iterations += iters[static_cast<std::size_t>(d)];
        row.all_optimal = row.all_optimal && optimal[static_cast<std::size_t>(d)];
      }
      row.mean_profit_spwc /= static_cast<double>(draws);
      row.mean_iterations /= static_cast<double>(draws);
      rows[fi] = row;
      all_optimal = all_optimal && row.all_optimal;
    }

    std::ostringstream csv;
    csv << "fraction,draws,profit_ipwc,mean_profit_spwc,mean_difference,mean_iterations_spwc\n";
    char buf[256];
    for (const SweepRow& row : rows) {
      std::snprintf(buf, sizeof(buf), "%.17g,%lld,%.17g,%.17g,%.17g,%.17g\n", row.fraction,
                    static_cast<long long>(draws), profit_ipwc, row.mean_profit_spwc,
                    profit_ipwc - row.mean_profit_spwc, row.mean_iterations);
      csv << buf;
    }
    auto sweep_path = (fs::path(out) / "sweep.csv").string();
    write_text_atomic(sweep_path, csv.str());
    mw.add_output(sweep_path);
  }

  j["all_optimal"] = all_optimal;
  auto compare_path = (fs::path(out) / "compare.json").string();
  write_text_atomic(compare_path, j.dump());
  mw.add_output(compare_path);
  mw.finish();

  std::cout << "profit ipwc " << profit_ipwc << ", spwc " << profit_spwc << ", difference "
            << (profit_ipwc - profit_spwc) << "\n";
  return all_optimal ? kExitOk : kExitNonoptimal;
}

// ----------------------------------------------------------------- toy ----

int cmd_toy(const std::vector<std::string>& argv, const std::string& out, double start_x,
            double start_y, double step, double tol, Index max_iters) {
  ensure_out_dir(out);
  ManifestWriter mw("toy", argv, out, 0);

  ToyConfig cfg;
  cfg.start_x = start_x;
  cfg.start_y = start_y;
  cfg.step = step;
  cfg.tolerance = tol;
  cfg.max_iterations = max_iters;

  cfg.restarts = true;
  ToyResult two_loop = run_toy(cfg);
  cfg.restarts = false;
  ToyResult one_loop = run_toy(cfg);

  auto two_path = (fs::path(out) / "toy_two_loop.csv").string();
  auto one_path = (fs::path(out) / "toy_one_loop.csv").string();
  write_text_atomic(two_path, toy_trajectory_to_csv(two_loop.trajectory));
  write_text_atomic(one_path, toy_trajectory_to_csv(one_loop.trajectory));
  mw.add_output(two_path);
  mw.add_output(one_path);

  json j;
  j["two_loop"] = {{"converged", two_loop.converged},
                   {"iterations", two_loop.iterations},
                   {"restarts", two_loop.restarts},
                   {"final_x", two_loop.final_x},
                   {"final_y", two_loop.final_y}};
  j["one_loop"] = {{"converged", one_loop.converged},
                   {"iterations", one_loop.iterations},
                   {"final_x", one_loop.final_x},
                   {"final_y", one_loop.final_y}};
  auto summary_path = (fs::path(out) / "toy_summary.json").string();
  write_text_atomic(summary_path, j.dump());
  mw.add_output(summary_path);
  mw.finish();

  std::cout << "two-loop: " << two_loop.iterations << " iterations, " << two_loop.restarts
            << " restarts; one-loop: " << one_loop.iterations << " iterations\n";
  return kExitOk;
}

// --------------------------------------------------------------- rerun ----

int cmd_rerun(const std::string& manifest_path) {
  RunManifest manifest = manifest_from_json(read_text(manifest_path));
  return run_cli(manifest.argv);
}

// ----------------------------------------------------------- dispatcher ----

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"sparse matrix-free LP toolkit for constrained targeted marketing"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic instance, menu and hierarchy");
  GenConfig gen_cfg;
  std::string gen_out, gen_branching = "2,3,4";
  gen->add_option("--customers", gen_cfg.n_customers, "number of customers")->required();
  gen->add_option("--actions", gen_cfg.n_actions, "number of marketing actions");
  gen->add_option("--depth", gen_cfg.zip_depth, "zip granularity of leaf segments (3, 4 or 5)");
  gen->add_option("--branching", gen_branching, "children per hierarchy level, e.g. 2,3,4");
  gen->add_option("--seed", gen_cfg.seed, "random seed");
  gen->add_option("--response-rate", gen_cfg.response_rate, "responder probability");
  gen->add_option("--profit-hit", gen_cfg.profit_mean_hit, "mean responder profit");
  gen->add_option("--profit-miss", gen_cfg.profit_mean_miss, "mean non-responder profit");
  gen->add_option("--out", gen_out, "output directory")->required();

  // compile
  auto* compile = app.add_subcommand("compile", "compile an instance and menu to a standard LP");
  std::string c_instance, c_menu, c_mode = "ipwc", c_pairs, c_out;
  bool c_export_mps = false;
  compile->add_option("--instance", c_instance, "instance JSON")->required();
  compile->add_option("--menu", c_menu, "menu JSON")->required();
  compile->add_option("--mode", c_mode, "ipwc, spwc or interdep");
  compile->add_option("--pair-profits", c_pairs, "pair-profit tensor JSON (interdep mode)");
  compile->add_option("--out", c_out, "output directory")->required();
  compile->add_flag("--export-mps", c_export_mps, "also write free-format MPS");

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "solve an LP with restarted PDHG");
  std::string s_lp, s_out;
  double s_tol = 1e-6;
  Index s_max_iters = 1000000;
  bool s_no_restart = false, s_no_rescale = false, s_log = false;
  std::uint64_t s_seed = 0;
  solve_cmd->add_option("--lp", s_lp, "LP JSON")->required();
  solve_cmd->add_option("--out", s_out, "output directory")->required();
  solve_cmd->add_option("--tol", s_tol, "KKT tolerance");
  solve_cmd->add_option("--max-iters", s_max_iters, "total iteration budget");
  solve_cmd->add_flag("--no-restart", s_no_restart, "plain one-loop baseline");
  solve_cmd->add_flag("--no-rescale", s_no_rescale, "skip diagonal equilibration");
  solve_cmd->add_flag("--log", s_log, "write the convergence CSV");
  solve_cmd->add_option("--seed", s_seed, "seed for the norm estimator");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "solve a small LP exactly with the simplex oracle");
  std::string o_lp, o_out;
  oracle_cmd->add_option("--lp", o_lp, "LP JSON")->required();
  oracle_cmd->add_option("--out", o_out, "output directory")->required();

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "individual versus segment-level policies");
  std::string cp_instance, cp_menu, cp_out, cp_fractions = "0,0.25,0.5,0.75,1";
  double cp_tol = 1e-6;
  Index cp_max_iters = 1000000, cp_draws = 5;
  std::uint64_t cp_seed = 0;
  bool cp_sweep = false;
  compare_cmd->add_option("--instance", cp_instance, "instance JSON")->required();
  compare_cmd->add_option("--menu", cp_menu, "menu JSON")->required();
  compare_cmd->add_option("--out", cp_out, "output directory")->required();
  compare_cmd->add_option("--tol", cp_tol, "KKT tolerance");
  compare_cmd->add_option("--max-iters", cp_max_iters, "total iteration budget per solve");
  compare_cmd->add_flag("--sweep", cp_sweep, "sweep the collapsed-zip fraction");
  compare_cmd->add_option("--fractions", cp_fractions, "comma list of collapse fractions");
  compare_cmd->add_option("--draws", cp_draws, "random zip draws per fraction");
  compare_cmd->add_option("--seed", cp_seed, "seed for the zip draws");

  // toy
  auto* toy_cmd = app.add_subcommand("toy", "bilinear saddle demo, one-loop versus two-loop");
  std::string t_out;
  double t_x = 5.0, t_y = 5.0, t_step = 0.2, t_tol = 1e-6;
  Index t_max_iters = 5000000;
  toy_cmd->add_option("--out", t_out, "output directory")->required();
  toy_cmd->add_option("--start-x", t_x, "starting x");
  toy_cmd->add_option("--start-y", t_y, "starting y");
  toy_cmd->add_option("--step", t_step, "primal and dual step size");
  toy_cmd->add_option("--tol", t_tol, "convergence threshold on the averaged iterate");
  toy_cmd->add_option("--max-iters", t_max_iters, "iteration cap");

  // rerun
  auto* rerun_cmd = app.add_subcommand("rerun", "replay a command from its manifest");
  std::string r_manifest;
  rerun_cmd->add_option("--manifest", r_manifest, "manifest JSON")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      gen_cfg.branching = parse_index_list(gen_branching);
      gen_cfg.validate();
      return cmd_gen(args, gen_cfg, gen_out);
    }
    if (compile->parsed()) {
      return cmd_compile(args, c_instance, c_menu, c_mode, c_pairs, c_out, c_export_mps);
    }
    if (solve_cmd->parsed()) {
      return cmd_solve(args, s_lp, s_out, s_tol, s_max_iters, s_no_restart, s_no_rescale, s_log,
                       s_seed);
    }
    if (oracle_cmd->parsed()) {
      return cmd_oracle(args, o_lp, o_out);
    }
    if (compare_cmd->parsed()) {
      return cmd_compare(args, cp_instance, cp_menu, cp_out, cp_tol, cp_max_iters, cp_sweep,
                         cp_fractions, cp_draws, cp_seed);
    }
    if (toy_cmd->parsed()) {
      return cmd_toy(args, t_out, t_x, t_y, t_step, t_tol, t_max_iters);
    }
    if (rerun_cmd->parsed()) {
      return cmd_rerun(r_manifest);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args);
}
