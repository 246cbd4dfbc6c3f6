#pragma once

#include <atomic>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kwidth/kernel.hpp"
#include "kwidth/reports/json_io.hpp"

namespace kwidth::reports {

enum class OutputFormat { Csv, Json };

/// Sweep description. JSON schema:
///   {
///     "q": [0.2, 0.3],                 required, each in (0, 1)
///     "beta": [0, 0.5],                required
///     "n": [1, 2, 5]                   or "n_range": {"from": 1, "to": 10, "step": 1}
///     "policy": {"abs_tol": 1e-14, "max_terms": 1000000},
///     "output": "sweep.csv",           omitted or "-" for stdout
///     "format": "csv" | "json",
///     "workers": 4,
///     "oracle": true,                  sup-norm cross-check per row
///     "cy2n": true,                    sign-pattern check per row
///     "cache_dir": ".kwidth-cache"     omitted disables caching
///   }
/// KWIDTH_WORKERS and KWIDTH_CACHE_DIR override workers and cache_dir.
struct SweepConfig {
  std::vector<double> q_list;
  std::vector<double> beta_list;
  std::vector<int> n_list;
  EvalPolicy policy;
  std::string output = "-";
  OutputFormat format = OutputFormat::Csv;
  int workers = 1;
  bool oracle = true;
  bool cy2n = true;
  std::string cache_dir;

  static SweepConfig from_json(const Json& j);
  /// Applies the environment overrides.
  void apply_environment();
  void validate() const;
};

struct SweepRow {
  double q = 0.0;
  double beta = 0.0;
  int n = 0;
  double theta_n = 0.0;
  double y0 = 0.0;
  double width = 0.0;
  double gamma_n = 0.0;
  double sandwich_lo = 0.0;
  double sandwich_hi = 0.0;
  bool nq_flag = false;  // n >= n_{q,beta}
  std::optional<bool> cy2n_holds;
  std::optional<double> oracle_delta;
  std::string error;  // nonempty when the width itself failed

  Json to_json() const;
  static SweepRow from_json(const Json& j);
};

/// CSV header line, without trailing newline.
std::string csv_header();
std::string csv_line(const SweepRow& row);

/// Evaluates one grid point. Never throws for numerical failures; they land
/// in row.error or leave the optional columns empty.
SweepRow evaluate_row(double q, double beta, int n, const SweepConfig& config, std::optional<int> nq_beta);

struct SweepOptions {
  bool timestamp = true;
  const std::atomic<bool>* stop = nullptr;  // polled between jobs
};

struct SweepSummary {
  std::size_t total = 0;
  std::size_t written = 0;
  std::size_t cache_hits = 0;
  std::size_t failed = 0;
  bool interrupted = false;
};

/// Fans the grid out to a worker pool; rows are written in grid order
/// (q outer, then beta, then n) by a single collector.
SweepSummary run_sweep(const SweepConfig& config, std::ostream& out, const SweepOptions& options = {});

}  // namespace kwidth::reports
