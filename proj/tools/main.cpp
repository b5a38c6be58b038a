// qgcl: instance generation, baseline/hybrid solving and parameter sweeps.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "qgcl/cdcl.hpp"
#include "qgcl/dimacs.hpp"
#include "qgcl/hybrid.hpp"
#include "qgcl/runner.hpp"
#include "qgcl/scagen.hpp"

namespace {

using namespace qgcl;

struct GenOptions {
  std::uint32_t width = 4;
  std::uint32_t cycles = 1;
  std::string relation = "neq";
  std::uint32_t check_cycle = 0;
  bool subst = false;
  std::string plaintext;
  std::vector<std::string> fixed_bits;  // "index=value"
};

struct SolveOptions {
  std::string mode = "qgcl";
  std::size_t budget = 20;
  std::uint32_t max_calls = 15;
  std::uint64_t interval = 250;
  std::string strategy = "abfs";
  std::uint64_t shots = 2000;
  double noise = 0.0;
  std::uint32_t top_k = 5;
  std::uint32_t max_attempts = 12;
  double eta0 = 0.8;
  double q_threshold = 0.1;
  std::uint64_t seed = 1;
  std::uint64_t conflict_budget = 0;
};

void add_gen_flags(CLI::App* app, GenOptions& g) {
  app->add_option("--width", g.width, "key/state bit width")->check(CLI::Range(2U, 4096U));
  app->add_option("--cycles", g.cycles, "number of update/leakage cycles")->check(CLI::Range(1U, 100000U));
  app->add_option("--relation", g.relation, "leakage relation at the check cycle")
      ->check(CLI::IsMember({"eq", "neq"}));
  app->add_option("--check-cycle", g.check_cycle, "cycle whose leakage is compared (default: last)");
  app->add_flag("--subst", g.subst, "enable the nonlinear substitution layer");
  app->add_option("--plaintext", g.plaintext, "plaintext bit string, bit 0 first (default: all ones)");
  app->add_option("--fix-key", g.fixed_bits, "known key bit as index=value (repeatable)");
}

sca::ScaConfig make_sca_config(const GenOptions& g) {
  sca::ScaConfig c;
  c.width = g.width;
  c.cycles = g.cycles;
  c.relation = sca::parse_relation(g.relation);
  if (g.check_cycle != 0) c.check_cycle = g.check_cycle;
  c.substitution = g.subst;
  if (!g.plaintext.empty()) c.plaintext = sca::parse_bits(g.plaintext);
  for (const std::string& f : g.fixed_bits) {
    auto eq = f.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--fix-key expects index=value, got '" + f + "'");
    std::uint32_t bit = static_cast<std::uint32_t>(std::stoul(f.substr(0, eq)));
    std::string v = f.substr(eq + 1);
    if (v != "0" && v != "1") throw std::invalid_argument("--fix-key value must be 0 or 1");
    c.fixed_key_bits.emplace_back(bit, v == "1");
  }
  c.validate();
  return c;
}

void add_solve_flags(CLI::App* app, SolveOptions& s) {
  app->add_option("--mode", s.mode, "solver mode")->check(CLI::IsMember({"cdcl", "qgcl"}));
  app->add_option("--budget", s.budget, "Grover budget B = n_sub + m_sub")->check(CLI::Range(3UL, 64UL));
  app->add_option("--max-calls", s.max_calls, "maximum Grover calls per run");
  app->add_option("--interval", s.interval, "conflicts between Grover call points")->check(CLI::PositiveNumber);
  app->add_option("--strategy", s.strategy, "extraction strategy (abfs, ag, rand, vf)");
  app->add_option("--shots", s.shots, "shots per Grover attempt")->check(CLI::PositiveNumber);
  app->add_option("--noise", s.noise, "histogram noise epsilon in [0,1]")->check(CLI::Range(0.0, 1.0));
  app->add_option("--top-k", s.top_k, "candidates passed to the classical checker")->check(CLI::PositiveNumber);
  app->add_option("--max-attempts", s.max_attempts, "BBHT attempts per call")->check(CLI::PositiveNumber);
  app->add_option("--eta0", s.eta0, "base hint mixing strength")->check(CLI::Range(0.0, 1.0));
  app->add_option("--q-threshold", s.q_threshold, "max violation score for polarity hints")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--seed", s.seed, "solver seed");
  app->add_option("--conflict-budget", s.conflict_budget, "stop with UNKNOWN after this many conflicts (0 = off)");
}

HybridConfig make_hybrid_config(const SolveOptions& s) {
  HybridConfig c;
  c.solver.random_seed = s.seed;
  c.solver.conflict_budget = s.conflict_budget;
  c.grover_interval = s.interval;
  c.max_grover_calls = s.max_calls;
  c.eta0 = s.eta0;
  c.polarity_q_threshold = s.q_threshold;
  c.extraction.budget = s.budget;
  c.extraction.strategy = parse_strategy(s.strategy);
  c.grover.shots = s.shots;
  c.grover.noise_epsilon = s.noise;
  c.grover.top_k = s.top_k;
  c.grover.max_attempts = s.max_attempts;
  c.validate();
  return c;
}

bool file_is_empty(const std::string& path) {
  std::error_code ec;
  return !std::filesystem::exists(path, ec) || std::filesystem::file_size(path, ec) == 0;
}

void append_csv(const std::string& path, std::string_view header, const std::vector<std::string>& rows) {
  const bool need_header = file_is_empty(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (need_header) out << header << '\n';
  for (const auto& r : rows) out << r << '\n';
}

int cmd_generate(const GenOptions& g, const std::string& out_path, const std::string& meta_path) {
  sca::Instance inst = sca::generate_instance(make_sca_config(g));
  {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    write_dimacs(inst.cnf, out);
  }
  if (!meta_path.empty()) {
    std::ofstream meta(meta_path, std::ios::binary);
    if (!meta) throw std::runtime_error("cannot write " + meta_path);
    meta << sca::meta_to_json(inst.meta);
  }
  std::cout << "n " << inst.cnf.num_vars << " m " << inst.cnf.num_clauses() << '\n';
  return 0;
}

int cmd_solve(const std::string& input, const SolveOptions& s, const std::string& stats_out,
              const std::string& calls_out) {
  HybridConfig config = make_hybrid_config(s);
  Cnf cnf = read_dimacs_file(input);
  RunOutput run = run_instance(cnf, input, parse_mode(s.mode), config);

  std::cout << "c " << kRunCsvHeader << '\n' << "c " << to_csv(run.row) << '\n';
  if (parse_mode(s.mode) == SolveMode::Qgcl)
    std::cout << "c grover calls " << run.calls.size() << ", skipped call points " << run.skipped_calls << '\n';
  switch (run.row.result) {
    case SolveStatus::Sat: {
      std::cout << "s SATISFIABLE\nv";
      for (std::size_t i = 0; i < run.model.size(); ++i)
        std::cout << ' ' << (run.model[i] ? "" : "-") << (i + 1);
      std::cout << " 0\n";
      break;
    }
    case SolveStatus::Unsat: std::cout << "s UNSATISFIABLE\n"; break;
    case SolveStatus::Unknown: std::cout << "s UNKNOWN\n"; break;
  }
  if (!stats_out.empty()) append_csv(stats_out, kRunCsvHeader, {to_csv(run.row)});
  if (!calls_out.empty()) {
    std::vector<std::string> rows;
    for (const auto& c : run.calls) rows.push_back(to_csv(c));
    std::ofstream truncate(calls_out, std::ios::trunc);
    truncate.close();
    append_csv(calls_out, kCallCsvHeader, rows);
  }
  switch (run.row.result) {
    case SolveStatus::Sat: return 10;
    case SolveStatus::Unsat: return 20;
    default: return 0;
  }
}

std::vector<std::string> split_values(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_sweep(const std::string& input, const std::string& param, const std::string& values_arg, std::uint32_t runs,
              unsigned jobs_n, const SolveOptions& base, const GenOptions& gen, const std::string& out_path,
              const std::string& summary_path, bool gnuplot) {
  std::vector<std::string> values = split_values(values_arg);
  if (values.empty()) throw std::invalid_argument("--values must list at least one setting");
  if (param != "cycles" && input.empty()) throw std::invalid_argument("sweep over " + param + " needs an input CNF");

  std::shared_ptr<const Cnf> fixed_cnf;
  if (!input.empty() && param != "cycles") fixed_cnf = std::make_shared<const Cnf>(read_dimacs_file(input));

  std::vector<SweepJob> jobs;
  std::vector<std::string> job_values;
  auto push_runs = [&](const std::string& value, SolveMode mode, const std::string& name,
                       std::shared_ptr<const Cnf> cnf, SolveOptions opts) {
    for (std::uint32_t seed = 1; seed <= runs; ++seed) {
      opts.seed = seed;
      jobs.push_back(SweepJob{value, mode, name, cnf, make_hybrid_config(opts)});
    }
  };

  if (param == "cycles") {
    for (const std::string& v : values) {
      GenOptions g = gen;
      g.cycles = static_cast<std::uint32_t>(std::stoul(v));
      auto cnf = std::make_shared<const Cnf>(sca::generate_instance(make_sca_config(g)).cnf);
      std::string name = "sca_w" + std::to_string(g.width) + "_T" + v;
      push_runs(v, SolveMode::Cdcl, name, cnf, base);
      push_runs(v, SolveMode::Qgcl, name, cnf, base);
    }
  } else {
    push_runs("baseline", SolveMode::Cdcl, input, fixed_cnf, base);
    for (const std::string& v : values) {
      SolveOptions opts = base;
      if (param == "budget")
        opts.budget = std::stoul(v);
      else if (param == "max-calls")
        opts.max_calls = static_cast<std::uint32_t>(std::stoul(v));
      else if (param == "strategy")
        opts.strategy = v;
      else
        throw std::invalid_argument("unknown sweep parameter '" + param + "'");
      push_runs(v, SolveMode::Qgcl, input, fixed_cnf, opts);
    }
  }

  std::vector<RunOutput> outputs = run_jobs(jobs, jobs_n);
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < jobs.size(); ++i) rows.push_back(SweepRow{param, jobs[i].value, outputs[i]});
  std::vector<SummaryRow> summary = summarize(rows);

  auto emit_raw = [&](std::ostream& os) {
    os << sweep_raw_header() << '\n';
    for (const auto& r : rows) os << to_csv(r) << '\n';
  };
  auto emit_summary = [&](std::ostream& os) {
    os << summary_header() << '\n';
    for (const auto& s : summary) os << to_csv(s) << '\n';
  };
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    emit_raw(out);
  }
  if (!summary_path.empty()) {
    std::ofstream out(summary_path);
    if (!out) throw std::runtime_error("cannot write " + summary_path);
    emit_summary(out);
  } else {
    emit_summary(std::cout);
  }
  if (gnuplot) {
    std::cout << "\n# value mode conflicts_mean conflicts_sd decisions_mean propagations_mean restarts_mean\n";
    for (const auto& s : summary)
      std::cout << s.value << ' ' << to_string(s.mode) << ' ' << s.metrics[1].mean << ' ' << s.metrics[1].sd << ' '
                << s.metrics[2].mean << ' ' << s.metrics[3].mean << ' ' << s.metrics[0].mean << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qgcl: CDCL with Grover-guided branching hints"};
  app.require_subcommand(1);

  GenOptions gen;
  std::string gen_out;
  std::string gen_meta;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a side-channel proxy CNF instance");
  add_gen_flags(gen_cmd, gen);
  gen_cmd->add_option("--out", gen_out, "output DIMACS path")->required();
  gen_cmd->add_option("--meta", gen_meta, "metadata sidecar (JSON)");

  SolveOptions solve_opts;
  std::string solve_input;
  std::string stats_out;
  std::string calls_out;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve a DIMACS CNF with cdcl or qgcl");
  solve_cmd->add_option("input", solve_input, "DIMACS CNF file")->required();
  add_solve_flags(solve_cmd, solve_opts);
  solve_cmd->add_option("--stats-out", stats_out, "append the run row to this CSV");
  solve_cmd->add_option("--calls-out", calls_out, "write per-call records to this CSV");

  SolveOptions sweep_opts;
  GenOptions sweep_gen;
  std::string sweep_input;
  std::string param;
  std::string values;
  std::uint32_t runs = 10;
  unsigned jobs = std::max(1U, std::thread::hardware_concurrency());
  std::string sweep_out;
  std::string summary_out;
  bool gnuplot = false;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "repeat runs over a parameter grid and summarize");
  sweep_cmd->add_option("input", sweep_input, "DIMACS CNF file (not used for --param cycles)");
  sweep_cmd->add_option("--param", param, "swept parameter")
      ->required()
      ->check(CLI::IsMember({"budget", "max-calls", "strategy", "cycles"}));
  sweep_cmd->add_option("--values", values, "comma-separated settings")->required();
  sweep_cmd->add_option("--runs", runs, "seeds 1..R per setting")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--jobs", jobs, "parallel workers")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", sweep_out, "raw per-run CSV");
  sweep_cmd->add_option("--summary-out", summary_out, "summary CSV (default: stdout)");
  sweep_cmd->add_flag("--gnuplot", gnuplot, "also print a whitespace-separated data block");
  add_solve_flags(sweep_cmd, sweep_opts);
  add_gen_flags(sweep_cmd, sweep_gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*gen_cmd) return cmd_generate(gen, gen_out, gen_meta);
    if (*solve_cmd) return cmd_solve(solve_input, solve_opts, stats_out, calls_out);
    if (*sweep_cmd)
      return cmd_sweep(sweep_input, param, values, runs, jobs, sweep_opts, sweep_gen, sweep_out, summary_out, gnuplot);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
