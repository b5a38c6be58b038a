#include "qgcl/runner.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace qgcl {

std::string_view to_string(SolveMode m) { return m == SolveMode::Cdcl ? "cdcl" : "qgcl"; }

SolveMode parse_mode(std::string_view s) {
  if (s == "cdcl") return SolveMode::Cdcl;
  if (s == "qgcl") return SolveMode::Qgcl;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "' (expected cdcl or qgcl)");
}

bool RunRow::same_counters(const RunRow& o) const {
  return instance == o.instance && mode == o.mode && seed == o.seed && n == o.n && m == o.m &&
         restarts == o.restarts && conflicts == o.conflicts && decisions == o.decisions &&
         propagations == o.propagations && grover_calls == o.grover_calls && grover_iters == o.grover_iters &&
         result == o.result;
}

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& s) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("bad CSV number '" + s + "'");
  return v;
}

SolveStatus parse_status(const std::string& s) {
  if (s == "SAT") return SolveStatus::Sat;
  if (s == "UNSAT") return SolveStatus::Unsat;
  if (s == "UNKNOWN") return SolveStatus::Unknown;
  throw std::invalid_argument("bad result '" + s + "'");
}

}  // namespace

std::string to_csv(const RunRow& r) {
  std::ostringstream out;
  out << r.instance << ',' << to_string(r.mode) << ',' << r.seed << ',' << r.n << ',' << r.m << ',' << r.restarts
      << ',' << r.conflicts << ',' << r.decisions << ',' << r.propagations << ',' << r.grover_calls << ','
      << r.grover_iters << ',' << format_double(r.wall_time_s) << ',' << to_string(r.result);
  return out.str();
}

RunRow parse_run_row(std::string_view line) {
  auto f = split_csv(line);
  if (f.size() != 13) throw std::invalid_argument("run row needs 13 columns, got " + std::to_string(f.size()));
  RunRow r;
  r.instance = f[0];
  r.mode = parse_mode(f[1]);
  r.seed = parse_number<std::uint64_t>(f[2]);
  r.n = parse_number<std::uint32_t>(f[3]);
  r.m = parse_number<std::size_t>(f[4]);
  r.restarts = parse_number<std::uint64_t>(f[5]);
  r.conflicts = parse_number<std::uint64_t>(f[6]);
  r.decisions = parse_number<std::uint64_t>(f[7]);
  r.propagations = parse_number<std::uint64_t>(f[8]);
  r.grover_calls = parse_number<std::uint64_t>(f[9]);
  r.grover_iters = parse_number<std::uint64_t>(f[10]);
  r.wall_time_s = std::stod(f[11]);
  r.result = parse_status(f[12]);
  return r;
}

std::string to_csv(const CallRecord& c) {
  std::ostringstream out;
  out << c.call_idx << ',' << c.conflict_index << ',' << c.n_sub << ',' << c.m_sub << ',' << format_double(c.q.value())
      << ',' << c.attempts << ',' << c.iterations << ',' << (c.polarity_applied ? 1 : 0);
  return out.str();
}

RunOutput run_instance(const Cnf& cnf, const std::string& name, SolveMode mode, const HybridConfig& config) {
  RunOutput out;
  SolveResult result;
  if (mode == SolveMode::Cdcl) {
    result = solve(cnf, config.solver);
  } else {
    HybridResult h = solve_hybrid(cnf, config);
    result = std::move(h.result);
    out.calls = std::move(h.calls);
    out.skipped_calls = h.skipped_calls;
    out.feedback_hash_mismatches = h.feedback_hash_mismatches;
  }
  if (result.status == SolveStatus::Sat && !check_model(cnf, result.model))
    throw std::logic_error("model failed verification");
  RunRow& r = out.row;
  r.instance = name;
  r.mode = mode;
  r.seed = config.solver.random_seed;
  r.n = cnf.num_vars;
  r.m = cnf.num_clauses();
  r.restarts = result.stats.restarts;
  r.conflicts = result.stats.conflicts;
  r.decisions = result.stats.decisions;
  r.propagations = result.stats.propagations;
  r.grover_calls = result.stats.grover_calls;
  r.grover_iters = result.stats.grover_iterations;
  // Stored at CSV precision so summaries recompute exactly from emitted rows.
  r.wall_time_s = std::round(result.stats.wall_time * 1e6) / 1e6;
  r.result = result.status;
  out.model = std::move(result.model);
  return out;
}

double metric_value(const RunRow& row, std::size_t metric) {
  switch (metric) {
    case 0: return static_cast<double>(row.restarts);
    case 1: return static_cast<double>(row.conflicts);
    case 2: return static_cast<double>(row.decisions);
    case 3: return static_cast<double>(row.propagations);
    case 4: return static_cast<double>(row.grover_calls);
    case 5: return static_cast<double>(row.grover_iters);
    case 6: return row.wall_time_s;
  }
  throw std::out_of_range("metric index");
}

MeanSd mean_sd(const std::vector<double>& xs) {
  MeanSd out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return out;
}

std::vector<RunOutput> run_jobs(const std::vector<SweepJob>& jobs, unsigned workers) {
  std::vector<RunOutput> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        results[i] = run_instance(*jobs[i].cnf, jobs[i].instance, jobs[i].mode, jobs[i].config);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

std::vector<SummaryRow> summarize(const std::vector<SweepRow>& rows) {
  std::vector<SummaryRow> out;
  std::vector<std::vector<const RunRow*>> members;
  for (const SweepRow& r : rows) {
    std::size_t g = 0;
    while (g < out.size() && !(out[g].value == r.value && out[g].mode == r.output.row.mode)) ++g;
    if (g == out.size()) {
      out.push_back(SummaryRow{r.param, r.value, r.output.row.mode, 0, {}});
      members.emplace_back();
    }
    members[g].push_back(&r.output.row);
  }
  for (std::size_t g = 0; g < out.size(); ++g) {
    out[g].runs = members[g].size();
    for (std::size_t k = 0; k < kSummaryMetrics.size(); ++k) {
      std::vector<double> xs;
      for (const RunRow* r : members[g]) xs.push_back(metric_value(*r, k));
      out[g].metrics[k] = mean_sd(xs);
    }
  }
  return out;
}

std::string sweep_raw_header() { return "param,value," + std::string(kRunCsvHeader); }

std::string to_csv(const SweepRow& row) { return row.param + "," + row.value + "," + to_csv(row.output.row); }

std::string summary_header() {
  std::string h = "param,value,mode,runs";
  for (auto m : kSummaryMetrics) h += "," + std::string(m) + "_mean," + std::string(m) + "_sd";
  return h;
}

std::string to_csv(const SummaryRow& row) {
  std::ostringstream out;
  out << row.param << ',' << row.value << ',' << to_string(row.mode) << ',' << row.runs;
  for (const MeanSd& ms : row.metrics) out << ',' << format_double(ms.mean) << ',' << format_double(ms.sd);
  return out.str();
}

}  // namespace qgcl
