#include "lac/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "lac/plot.hpp"

namespace lac::cli {

namespace fs = std::filesystem;

namespace {

std::string opt_str(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string("n/a");
}

std::string run_stem(const ExperimentConfig& c) {
  return std::string(to_string(c.scenario.kind)) + "-" + std::string(to_string(c.sim.policy)) +
         "-s" + std::to_string(c.sim.seed);
}

bool write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  return static_cast<bool>(f);
}

// Values given on the command line; unset ones leave the config untouched.
struct Overrides {
  std::optional<std::string> policy;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> agents;
  std::optional<double> radius, v_max, delta, tau, lambda, zeta, gamma, eta, beta, arrival_tol;
  std::optional<int> n_actions, window, max_steps, threads;
  std::optional<std::string> penalty_angle_mode;
  std::optional<bool> emit_trace, emit_plot;

  void add_to(CLI::App& app) {
    app.add_option("--policy", policy, "lac_nav | lac_learn | bvc");
    app.add_option("--seed", seed, "Seed for the scenario and the policy");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--agents", agents, "Agent count");
    app.add_option("--radius", radius, "Agent radius r");
    app.add_option("--v-max", v_max, "Maximum speed");
    app.add_option("--delta", delta, "Update interval");
    app.add_option("--tau", tau, "Look-ahead horizon");
    app.add_option("--lambda", lambda, "Relax factor in [0, 1]");
    app.add_option("--zeta", zeta, "Penalty base in (0, 1]");
    app.add_option("--gamma", gamma, "Mixing factor in [0, 1]");
    app.add_option("--eta", eta, "Win threshold in [0, 1]");
    app.add_option("--beta", beta, "Exploration increment in (0, 1]");
    app.add_option("--window", window, "wUCB window length T");
    app.add_option("--n-actions", n_actions, "Number of uniformly spaced actions");
    app.add_option("--penalty-angle-mode", penalty_angle_mode, "symmetric | literal");
    app.add_option("--arrival-tol", arrival_tol, "Arrival tolerance");
    app.add_option("--max-steps", max_steps, "Step cap");
    app.add_option("--threads", threads, "Decision-phase worker threads");
    app.add_option("--trace", emit_trace, "Write the trace file (true/false)");
    app.add_option("--plot", emit_plot, "Write an SVG plot (true/false)");
  }

  void apply(ExperimentConfig& c) const {
    if (policy) {
      const auto p = parse_policy(*policy);
      if (!p) throw ConfigError("--policy: unknown policy '" + *policy + "'");
      c.sim.policy = *p;
    }
    if (seed) {
      c.sim.seed = *seed;
      c.scenario.seed = *seed;
    }
    if (out_dir) c.output_dir = *out_dir;
    if (agents) c.scenario.agents = *agents;
    if (radius) c.sim.lac.r = *radius;
    if (v_max) c.sim.lac.v_max = *v_max;
    if (delta) c.sim.lac.delta = *delta;
    if (tau) c.sim.lac.tau = *tau;
    if (lambda) c.sim.lac.lambda = *lambda;
    if (zeta) c.sim.penalty.zeta = *zeta;
    if (gamma) c.sim.learn.gamma = *gamma;
    if (eta) c.sim.learn.eta = *eta;
    if (beta) c.sim.learn.beta = *beta;
    if (window) c.sim.learn.window = *window;
    if (n_actions) c.sim.lac.n_actions = *n_actions;
    if (penalty_angle_mode) {
      const auto m = parse_penalty_angle_mode(*penalty_angle_mode);
      if (!m) throw ConfigError("--penalty-angle-mode: expected symmetric or literal");
      c.sim.penalty.angle_mode = *m;
    }
    if (arrival_tol) c.sim.arrival_tol = *arrival_tol;
    if (max_steps) c.sim.max_steps = *max_steps;
    if (threads) c.sim.threads = *threads;
    if (emit_trace) c.emit.trace = *emit_trace;
    if (emit_plot) c.emit.plot = *emit_plot;
  }
};

struct CompareRow {
  std::string policy;
  int runs = 0;
  int completed = 0;
  int failed = 0;
  double ctime_sum = 0.0;
  double addr_sum = 0.0;
  double adtr_sum = 0.0;
  double p90_sum = 0.0;
  int p90_count = 0;
  std::vector<std::string> errors;
};

std::optional<double> mean(double sum, int n) {
  return n > 0 ? std::optional<double>(sum / n) : std::nullopt;
}

}  // namespace

std::string resolve_output_dir(const ExperimentConfig& config) {
  if (!config.output_dir.empty()) return config.output_dir;
  if (const char* env = std::getenv("LAC_OUTPUT_DIR"); env && *env) return env;
  return "lac_out";
}

int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kError;
  }

  SimTrace trace;
  try {
    trace = run(config.sim, config.scenario);
  } catch (const ScenarioError& e) {
    err << "scenario error: " << e.what() << "\n";
    return kError;
  }
  const RunResult result = evaluate(trace);

  const fs::path dir = resolve_output_dir(config);
  std::error_code ec;
  fs::create_directories(dir, ec);
  const std::string stem = run_stem(config);
  if (!write_text(dir / (stem + ".results.json"), results_to_json(trace, result))) {
    err << "cannot write results to " << dir << "\n";
    return kError;
  }
  if (config.emit.trace) {
    std::ostringstream ss;
    write_trace(ss, trace);
    if (!write_text(dir / (stem + ".trace.csv"), ss.str())) {
      err << "cannot write trace to " << dir << "\n";
      return kError;
    }
  }
  if (config.emit.plot && !write_text(dir / (stem + ".svg"), render_svg(trace))) {
    err << "cannot write plot to " << dir << "\n";
    return kError;
  }

  out << "policy=" << to_string(config.sim.policy) << " scenario=" << to_string(config.scenario.kind)
      << " agents=" << trace.agents.size() << " seed=" << config.sim.seed
      << " ctime=" << opt_str(result.completion_time_s) << " addr=" << format_real(result.addr)
      << " adtr=" << format_real(result.adtr) << " ctime_p90=" << opt_str(result.ctime_p90_s)
      << " termination=" << to_string(trace.termination) << "\n";
  return trace.termination == Termination::completed ? kOk : kStepCap;
}

int cmd_compare(const ExperimentConfig& config, const std::vector<std::string>& policies,
                const std::vector<std::uint64_t>& seeds, int jobs, std::ostream& out,
                std::ostream& err) {
  if (policies.empty()) {
    err << "compare: empty policy list\n";
    return kError;
  }
  if (seeds.empty()) {
    err << "compare: empty seed list\n";
    return kError;
  }
  std::vector<PolicyKind> kinds;
  for (const auto& name : policies) {
    const auto p = parse_policy(name);
    if (!p) {
      err << "compare: unknown policy '" << name << "'\n";
      return kError;
    }
    kinds.push_back(*p);
  }
  try {
    config.validate();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kError;
  }

  struct Job {
    std::size_t row;
    ExperimentConfig cfg;
    std::optional<SimTrace> trace;
    std::optional<RunResult> result;
    std::string error;
  };
  std::vector<Job> work;
  for (std::size_t p = 0; p < kinds.size(); ++p) {
    for (std::uint64_t seed : seeds) {
      ExperimentConfig c = config;
      c.sim.policy = kinds[p];
      c.sim.seed = seed;
      c.scenario.seed = seed;
      work.push_back({p, std::move(c), std::nullopt, std::nullopt, {}});
    }
  }

  std::mutex next_mutex;
  std::size_t next = 0;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(next_mutex);
        if (next >= work.size()) return;
        i = next++;
      }
      Job& job = work[i];
      try {
        job.trace = run(job.cfg.sim, job.cfg.scenario, RunOptions{false});
        job.result = evaluate(*job.trace);
      } catch (const std::exception& e) {
        job.error = e.what();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(work.size())));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  }

  std::vector<CompareRow> rows(kinds.size());
  nlohmann::json runs = nlohmann::json::array();
  for (std::size_t p = 0; p < kinds.size(); ++p) rows[p].policy = std::string(to_string(kinds[p]));
  for (const Job& job : work) {
    CompareRow& row = rows[job.row];
    ++row.runs;
    nlohmann::json entry = {{"policy", row.policy}, {"seed", job.cfg.sim.seed}};
    if (!job.result) {
      ++row.failed;
      row.errors.push_back(job.error);
      entry["error"] = job.error;
      runs.push_back(entry);
      continue;
    }
    const RunResult& r = *job.result;
    entry["termination"] = to_string(job.trace->termination);
    entry["ctime_s"] = r.completion_time_s ? nlohmann::json(*r.completion_time_s) : nlohmann::json();
    entry["addr"] = r.addr;
    entry["adtr"] = r.adtr;
    entry["ctime_p90_s"] = r.ctime_p90_s ? nlohmann::json(*r.ctime_p90_s) : nlohmann::json();
    runs.push_back(entry);
    if (r.completion_time_s) {
      ++row.completed;
      row.ctime_sum += *r.completion_time_s;
    }
    row.addr_sum += r.addr;
    row.adtr_sum += r.adtr;
    if (r.ctime_p90_s) {
      row.p90_sum += *r.ctime_p90_s;
      ++row.p90_count;
    }
  }

  nlohmann::json table = nlohmann::json::array();
  std::ostringstream csv;
  csv << "policy,runs,completed,failed,ctime_s,addr,adtr,ctime_p90_s\n";
  out << std::left << std::setw(11) << "policy" << std::setw(11) << "completed" << std::setw(12)
      << "ctime(s)" << std::setw(12) << "addr" << std::setw(12) << "adtr" << std::setw(12)
      << "ctime90(s)" << "\n";
  bool all_completed = true;
  for (const CompareRow& row : rows) {
    const int ok_runs = row.runs - row.failed;
    const auto ctime = mean(row.ctime_sum, row.completed);
    const auto addr = mean(row.addr_sum, ok_runs);
    const auto adtr = mean(row.adtr_sum, ok_runs);
    const auto p90 = mean(row.p90_sum, row.p90_count);
    const std::string done = std::to_string(row.completed) + "/" + std::to_string(row.runs) +
                             (row.failed ? " FAILED" : "");
    all_completed = all_completed && row.completed == row.runs;
    out << std::left << std::setw(11) << row.policy << std::setw(11) << done << std::setw(12)
        << opt_str(ctime) << std::setw(12) << opt_str(addr) << std::setw(12) << opt_str(adtr)
        << std::setw(12) << opt_str(p90) << "\n";
    for (const auto& e : row.errors) out << "  error: " << e << "\n";
    csv << row.policy << ',' << row.runs << ',' << row.completed << ',' << row.failed << ','
        << opt_str(ctime) << ',' << opt_str(addr) << ',' << opt_str(adtr) << ',' << opt_str(p90)
        << "\n";
    auto j = [](const std::optional<double>& v) {
      return v ? nlohmann::json(*v) : nlohmann::json();
    };
    table.push_back({{"policy", row.policy},
                     {"runs", row.runs},
                     {"completed", row.completed},
                     {"failed", row.failed},
                     {"ctime_s", j(ctime)},
                     {"addr", j(addr)},
                     {"adtr", j(adtr)},
                     {"ctime_p90_s", j(p90)}});
  }

  const fs::path dir = resolve_output_dir(config);
  std::error_code ec;
  fs::create_directories(dir, ec);
  const nlohmann::json doc = {{"schema_version", kResultsSchemaVersion},
                              {"scenario", to_string(config.scenario.kind)},
                              {"agents", config.scenario.agents},
                              {"rows", table},
                              {"runs", runs}};
  if (!write_text(dir / "compare.json", doc.dump(2) + "\n") ||
      !write_text(dir / "compare.csv", csv.str())) {
    err << "cannot write comparison to " << dir << "\n";
    return kError;
  }
  return all_completed ? kOk : kStepCap;
}

int cmd_verify(const std::string& trace_path, std::ostream& out, std::ostream& err) {
  SimTrace trace;
  try {
    trace = load_trace(trace_path);
  } catch (const TraceParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kError;
  }
  const VerifyReport report = verify_trace(trace);
  if (!report.ok) {
    err << "violation: " << report.message << "\n";
    return kViolation;
  }
  out << "ok: " << trace.agents.size() << " agents, " << trace.steps_taken
      << " steps, all invariants hold\n";
  return kOk;
}

int cmd_plot(const std::string& trace_path, const std::string& out_path, std::ostream& out,
             std::ostream& err) {
  SimTrace trace;
  try {
    trace = load_trace(trace_path);
  } catch (const TraceParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kError;
  }
  if (!write_text(out_path, render_svg(trace))) {
    err << "cannot write " << out_path << "\n";
    return kError;
  }
  out << "wrote " << out_path << "\n";
  return kOk;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-agent navigation with local action cells"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides run_over;
  auto* run_cmd = app.add_subcommand("run", "Run one experiment from a config file");
  run_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run_over.add_to(*run_cmd);

  std::string cmp_config;
  Overrides cmp_over;
  std::vector<std::string> policies;
  std::vector<std::uint64_t> seeds;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* cmp_cmd = app.add_subcommand("compare", "Run policies x seeds and tabulate metrics");
  cmp_cmd->add_option("--config", cmp_config, "Experiment config (JSON)")->required();
  cmp_cmd->add_option("--policies", policies, "Policies to compare")->delimiter(',');
  cmp_cmd->add_option("--seeds", seeds, "Seeds")->delimiter(',');
  cmp_cmd->add_option("--jobs", jobs, "Runs executed in parallel");
  cmp_over.add_to(*cmp_cmd);

  std::string verify_path;
  auto* verify_cmd = app.add_subcommand("verify", "Re-check the invariants of a trace file");
  verify_cmd->add_option("trace", verify_path, "Trace file")->required();

  std::string plot_in;
  std::string plot_out;
  auto* plot_cmd = app.add_subcommand("plot", "Render a trace as SVG");
  plot_cmd->add_option("trace", plot_in, "Trace file")->required();
  plot_cmd->add_option("--out,-o", plot_out, "Output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kError;
  }

  if (*run_cmd || *cmp_cmd) {
    const bool is_run = static_cast<bool>(*run_cmd);
    ExperimentConfig config;
    try {
      config = load_config(is_run ? config_path : cmp_config);
      (is_run ? run_over : cmp_over).apply(config);
    } catch (const ConfigError& e) {
      err << "config error: " << e.what() << "\n";
      return kError;
    }
    if (is_run) return cmd_run(config, out, err);
    if (seeds.empty()) seeds.push_back(config.sim.seed);
    if (cmp_cmd->count("--policies") == 0) {
      err << "compare: --policies is required and must be non-empty\n";
      return kError;
    }
    return cmd_compare(config, policies, seeds, jobs, out, err);
  }
  if (*verify_cmd) return cmd_verify(verify_path, out, err);
  if (*plot_cmd) return cmd_plot(plot_in, plot_out, out, err);
  return kError;
}

}  // namespace lac::cli
