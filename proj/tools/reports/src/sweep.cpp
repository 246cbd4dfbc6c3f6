#include "kwidth/reports/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "kwidth/reports/result_cache.hpp"

namespace kwidth::reports {
namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
std::vector<T> read_list(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).empty()) {
    throw Error(ErrorKind::Validation, std::string("config needs a nonempty array '") + key + "'");
  }
  std::vector<T> out;
  for (const Json& e : j.at(key)) {
    if (!e.is_number()) throw Error(ErrorKind::Validation, std::string("non-numeric entry in '") + key + "'");
    if constexpr (std::is_integral_v<T>) {
      if (!e.is_number_integer()) throw Error(ErrorKind::Validation, std::string("'") + key + "' needs integers");
    }
    out.push_back(e.get<T>());
  }
  return out;
}

std::string cache_key(double q, double beta, int n, const SweepConfig& c) {
  return "kwidth-row-v1;q=" + fmt_double(q) + ";beta=" + fmt_double(beta) + ";n=" + std::to_string(n) +
         ";abs_tol=" + fmt_double(c.policy.abs_tol) + ";max_terms=" + std::to_string(c.policy.max_terms) +
         ";oracle=" + (c.oracle ? "1" : "0") + ";cy2n=" + (c.cy2n ? "1" : "0");
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Job {
  double q;
  double beta;
  int n;
};

}  // namespace

SweepConfig SweepConfig::from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Validation, "sweep config must be a JSON object");
  SweepConfig c;
  try {
    c.q_list = read_list<double>(j, "q");
    c.beta_list = read_list<double>(j, "beta");
    if (j.contains("n")) {
      c.n_list = read_list<int>(j, "n");
    } else if (j.contains("n_range")) {
      const Json& r = j.at("n_range");
      const int from = r.at("from").get<int>();
      const int to = r.at("to").get<int>();
      const int step = r.value("step", 1);
      if (step < 1 || from > to) throw Error(ErrorKind::Validation, "n_range needs from <= to and step >= 1");
      for (int n = from; n <= to; n += step) c.n_list.push_back(n);
    } else {
      throw Error(ErrorKind::Validation, "config needs 'n' or 'n_range'");
    }
    if (j.contains("policy")) {
      const Json& p = j.at("policy");
      c.policy.abs_tol = p.value("abs_tol", c.policy.abs_tol);
      c.policy.max_terms = p.value("max_terms", c.policy.max_terms);
    }
    c.output = j.value("output", c.output);
    const std::string format = j.value("format", std::string("csv"));
    if (format == "csv") {
      c.format = OutputFormat::Csv;
    } else if (format == "json") {
      c.format = OutputFormat::Json;
    } else {
      throw Error(ErrorKind::Validation, "format must be 'csv' or 'json'");
    }
    c.workers = j.value("workers", c.workers);
    c.oracle = j.value("oracle", c.oracle);
    c.cy2n = j.value("cy2n", c.cy2n);
    c.cache_dir = j.value("cache_dir", c.cache_dir);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Validation, std::string("malformed sweep config: ") + e.what());
  }
  c.validate();
  return c;
}

void SweepConfig::apply_environment() {
  if (const char* w = std::getenv("KWIDTH_WORKERS"); w && *w) {
    char* end = nullptr;
    const long v = std::strtol(w, &end, 10);
    if (*end != '\0' || v < 1) throw Error(ErrorKind::Validation, "KWIDTH_WORKERS must be a positive integer");
    workers = static_cast<int>(v);
  }
  if (const char* d = std::getenv("KWIDTH_CACHE_DIR"); d && *d) cache_dir = d;
}

void SweepConfig::validate() const {
  if (q_list.empty() || beta_list.empty() || n_list.empty()) {
    throw Error(ErrorKind::Validation, "q, beta and n lists must be nonempty");
  }
  for (double q : q_list) {
    if (!(q > 0.0 && q < 1.0)) throw Error(ErrorKind::Validation, "q out of (0,1)");
  }
  for (double b : beta_list) {
    if (!std::isfinite(b)) throw Error(ErrorKind::Validation, "beta must be finite");
  }
  for (int n : n_list) {
    if (n < 1) throw Error(ErrorKind::Validation, "n must be a positive integer");
  }
  if (workers < 1) throw Error(ErrorKind::Validation, "workers must be at least 1");
  policy.validate();
}

Json SweepRow::to_json() const {
  Json j{{"q", q},           {"beta", beta},         {"n", n},
         {"theta_n", theta_n}, {"y0", y0},           {"width", width},
         {"gamma_n", gamma_n}, {"sandwich_lo", sandwich_lo}, {"sandwich_hi", sandwich_hi},
         {"nq_flag", nq_flag}};
  j["cy2n_holds"] = cy2n_holds ? Json(*cy2n_holds) : Json(nullptr);
  j["oracle_delta"] = oracle_delta ? Json(*oracle_delta) : Json(nullptr);
  if (!error.empty()) j["error"] = error;
  return j;
}

SweepRow SweepRow::from_json(const Json& j) {
  SweepRow r;
  r.q = j.at("q").get<double>();
  r.beta = j.at("beta").get<double>();
  r.n = j.at("n").get<int>();
  r.theta_n = j.at("theta_n").get<double>();
  r.y0 = j.at("y0").get<double>();
  r.width = j.at("width").get<double>();
  r.gamma_n = j.at("gamma_n").get<double>();
  r.sandwich_lo = j.at("sandwich_lo").get<double>();
  r.sandwich_hi = j.at("sandwich_hi").get<double>();
  r.nq_flag = j.at("nq_flag").get<bool>();
  if (!j.at("cy2n_holds").is_null()) r.cy2n_holds = j.at("cy2n_holds").get<bool>();
  if (!j.at("oracle_delta").is_null()) r.oracle_delta = j.at("oracle_delta").get<double>();
  r.error = j.value("error", std::string());
  return r;
}

std::string csv_header() {
  return "q,beta,n,theta_n,y0,width,gamma_n,sandwich_lo,sandwich_hi,nq_flag,cy2n_holds,oracle_delta";
}

std::string csv_line(const SweepRow& r) {
  std::string line = fmt_double(r.q) + "," + fmt_double(r.beta) + "," + std::to_string(r.n) + ",";
  if (r.error.empty()) {
    line += fmt_double(r.theta_n) + "," + fmt_double(r.y0) + "," + fmt_double(r.width) + "," +
            fmt_double(r.gamma_n) + "," + fmt_double(r.sandwich_lo) + "," + fmt_double(r.sandwich_hi);
  } else {
    line += ",,,,,";
  }
  line += std::string(",") + (r.nq_flag ? "1" : "0") + ",";
  if (r.cy2n_holds) line += *r.cy2n_holds ? "1" : "0";
  line += ",";
  if (r.oracle_delta) line += fmt_double(*r.oracle_delta);
  return line;
}

SweepRow evaluate_row(double q, double beta, int n, const SweepConfig& config, std::optional<int> nq_beta) {
  SweepRow row;
  row.q = q;
  row.beta = beta;
  row.n = n;
  row.nq_flag = nq_beta && n >= *nq_beta;
  const NeumannParams params = NeumannParams::make(q, beta);
  try {
    const WidthReport w = exact_width(params, n);
    row.theta_n = w.root.theta;
    row.y0 = w.y0;
    row.width = w.width;
    row.gamma_n = w.gamma_n;
    row.sandwich_lo = w.sandwich_lo;
    row.sandwich_hi = w.sandwich_hi;
    if (config.oracle) row.oracle_delta = std::abs(w.width - oracle::supnorm_phi(params, n).max_abs);
  } catch (const Error& e) {
    row.error = std::string(to_string(e.kind())) + ": " + e.what();
    return row;
  }
  if (config.cy2n) {
    try {
      row.cy2n_holds = verify_Cy2n(params, n).holds;
    } catch (const Error&) {
      // left empty: the sign check is undefined at this grid point
    }
  }
  return row;
}

SweepSummary run_sweep(const SweepConfig& config, std::ostream& out, const SweepOptions& options) {
  config.validate();
  std::vector<Job> jobs;
  for (double q : config.q_list) {
    for (double b : config.beta_list) {
      for (int n : config.n_list) jobs.push_back({q, b, n});
    }
  }

  std::map<double, std::optional<int>> nq_by_q;
  auto nq_beta = [&](double q, double beta) -> std::optional<int> {
    const bool integer = is_integer_phase(beta);
    if ((integer && q <= kIntegerPhaseQ) || (!integer && q <= kNonIntegerPhaseQ)) return 1;
    auto it = nq_by_q.find(q);
    if (it == nq_by_q.end()) {
      std::optional<int> v;
      try {
        v = compute_nq(q).n;
      } catch (const Error&) {
      }
      it = nq_by_q.emplace(q, v).first;
    }
    return it->second;
  };
  std::vector<std::optional<int>> thresholds;
  thresholds.reserve(jobs.size());
  for (const Job& job : jobs) thresholds.push_back(nq_beta(job.q, job.beta));

  std::optional<ResultCache> cache;
  if (!config.cache_dir.empty()) cache.emplace(config.cache_dir);

  SweepSummary summary;
  summary.total = jobs.size();
  std::vector<std::optional<SweepRow>> slots(jobs.size());
  std::mutex mutex;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> hits{0};
  int live = std::max(1, std::min<int>(config.workers, static_cast<int>(jobs.size())));
  const int worker_count = live;

  auto stopped = [&] { return options.stop && options.stop->load(); };
  auto work = [&] {
    for (;;) {
      if (stopped()) break;
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) break;
      const Job& job = jobs[i];
      std::optional<SweepRow> row;
      const std::string key = cache ? cache_key(job.q, job.beta, job.n, config) : std::string();
      if (cache) {
        if (auto payload = cache->load(key)) {
          try {
            row = SweepRow::from_json(Json::parse(*payload));
            hits.fetch_add(1);
          } catch (const std::exception&) {
            row.reset();
          }
        }
      }
      if (!row) {
        row = evaluate_row(job.q, job.beta, job.n, config, thresholds[i]);
        if (cache) cache->store(key, row->to_json().dump());
      }
      {
        std::lock_guard lock(mutex);
        slots[i] = std::move(row);
      }
      ready.notify_one();
    }
    {
      std::lock_guard lock(mutex);
      --live;
    }
    ready.notify_one();
  };

  std::vector<std::jthread> pool;
  for (int w = 0; w < worker_count; ++w) pool.emplace_back(work);

  Json json_rows = Json::array();
  const bool csv = config.format == OutputFormat::Csv;
  if (csv) {
    if (options.timestamp) out << "# generated " << utc_now() << "\n";
    out << csv_header() << "\n";
  }
  auto emit = [&](const SweepRow& row) {
    if (csv) {
      out << csv_line(row) << "\n";
      out.flush();
    } else {
      json_rows.push_back(row.to_json());
    }
    ++summary.written;
    if (!row.error.empty()) ++summary.failed;
  };

  std::size_t cursor = 0;
  {
    std::unique_lock lock(mutex);
    while (cursor < jobs.size()) {
      ready.wait(lock, [&] { return slots[cursor].has_value() || live == 0; });
      if (!slots[cursor]) break;  // workers gone before this row finished
      SweepRow row = std::move(*slots[cursor]);
      ++cursor;
      lock.unlock();
      emit(row);
      lock.lock();
    }
  }
  pool.clear();
  // Interrupted: keep every row that did complete, still in grid order.
  for (std::size_t i = cursor; i < jobs.size(); ++i) {
    if (slots[i]) emit(*slots[i]);
  }
  summary.interrupted = summary.written < jobs.size();
  summary.cache_hits = hits.load();

  if (!csv) {
    Json doc;
    if (options.timestamp) doc["generated"] = utc_now();
    doc["columns"] = Json::array({"q", "beta", "n", "theta_n", "y0", "width", "gamma_n", "sandwich_lo",
                                  "sandwich_hi", "nq_flag", "cy2n_holds", "oracle_delta"});
    doc["rows"] = std::move(json_rows);
    out << doc.dump(2) << "\n";
  }
  return summary;
}

}  // namespace kwidth::reports
