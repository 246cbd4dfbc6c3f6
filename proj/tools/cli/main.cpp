#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kwidth/kwidth.hpp"
#include "kwidth/reports/json_io.hpp"
#include "kwidth/reports/sweep.hpp"

namespace {

using kwidth::reports::Json;

std::atomic<bool> g_interrupted{false};

extern "C" void on_sigint(int) { g_interrupted.store(true); }

void print(const Json& j) { std::cout << j.dump(2) << std::endl; }

std::vector<kwidth::PiRational> parse_nodes(const std::string& text) {
  std::vector<kwidth::PiRational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(kwidth::PiRational::parse(item));
  return out;
}

struct WidthArgs {
  double q = 0.0, beta = 0.0;
  int n = 1;
  bool verify = false;
};

int run_width(const WidthArgs& a) {
  const auto params = kwidth::NeumannParams::make(a.q, a.beta);
  const kwidth::WidthReport report = kwidth::exact_width(params, a.n);
  Json j = kwidth::reports::to_json(report);
  if (a.verify) {
    const auto sup = kwidth::oracle::supnorm_phi(params, a.n);
    j["verify"] = {{"supnorm", sup.max_abs},
                   {"argmax", sup.argmax},
                   {"delta", std::abs(sup.max_abs - report.width)},
                   {"argmax_delta", std::abs(sup.argmax - report.y0)}};
  }
  print(j);
  return 0;
}

struct ThresholdArgs {
  double q = 0.0;
  std::optional<double> beta;
  int cap = kwidth::kDefaultThresholdCap;
  bool trace = false;
};

int run_threshold(const ThresholdArgs& a) {
  Json j{{"q", a.q}};
  if (a.beta) {
    j["beta"] = *a.beta;
    j["integer_phase"] = kwidth::is_integer_phase(*a.beta);
    j["n_q_beta"] = kwidth::compute_nq_beta(a.q, *a.beta, a.cap);
  }
  if (!a.beta || a.trace) {
    const kwidth::NqResult r = kwidth::compute_nq(a.q, a.cap, a.trace);
    j["n_q"] = r.n;
    j["later_failure"] = r.later_failure ? Json(*r.later_failure) : Json(nullptr);
    if (a.trace) {
      Json trace = Json::array();
      for (const auto& v : r.trace) trace.push_back(kwidth::reports::to_json(v));
      j["trace"] = std::move(trace);
    }
  }
  print(j);
  return 0;
}

struct CyArgs {
  double q = 0.0, beta = 0.0;
  int n = 1;
  std::optional<double> y;
  std::string path = "auto";
};

int run_cy(const CyArgs& a) {
  const auto params = kwidth::NeumannParams::make(a.q, a.beta);
  kwidth::CyOptions opts;
  opts.y = a.y;
  opts.path = kwidth::reports::parse_path(a.path);
  Json j{{"q", a.q}, {"beta", a.beta}, {"n", a.n}};
  j.update(kwidth::reports::to_json(kwidth::verify_Cy2n(params, a.n, opts)));
  print(j);
  return 0;
}

struct CvdArgs {
  double q = 0.21, beta = 0.0;
  int l = 1;
  bool paper_vectors = false;
  std::string x, y;
  std::int64_t budget = 100'000;
  std::uint64_t seed = 1;
};

int run_cvd(const CvdArgs& a) {
  using kwidth::reports::to_json;
  const auto kernel = kwidth::CvdKernel::neumann(kwidth::NeumannParams::make(a.q, a.beta));
  Json j{{"q", a.q}, {"beta", a.beta}};
  if (!a.x.empty() || !a.y.empty()) {
    const kwidth::NodeVectors nodes{parse_nodes(a.x), parse_nodes(a.y)};
    j["nodes"] = to_json(nodes);
    j["det_plus"] = to_json(kwidth::det_D(kernel, nodes, 1));
    j["det_minus"] = to_json(kwidth::det_D(kernel, nodes, -1));
  } else if (a.paper_vectors) {
    const auto neg = kwidth::det_D(kernel, kwidth::reference_nodes_negative(), 1);
    const auto pos = kwidth::det_D(kernel, kwidth::reference_nodes_positive(), 1);
    j["first"] = {{"nodes", to_json(kwidth::reference_nodes_negative())}, {"det", to_json(neg)}};
    j["second"] = {{"nodes", to_json(kwidth::reference_nodes_positive())}, {"det", to_json(pos)}};
    j["sign_change"] = neg.certified_sign() * pos.certified_sign() < 0;
  } else {
    kwidth::WitnessSearch search;
    search.budget = a.budget;
    search.seed = a.seed;
    const auto w = kwidth::cvd_witness(kernel, a.l, search);
    j["l"] = a.l;
    j["witness"] = to_json(w);
  }
  print(j);
  return 0;
}

struct SweepArgs {
  std::string config;
  bool no_timestamp = false;
};

int run_sweep(const SweepArgs& a) {
  std::ifstream in(a.config);
  if (!in) throw kwidth::Error(kwidth::ErrorKind::Validation, "cannot open config '" + a.config + "'");
  Json raw;
  try {
    raw = Json::parse(in);
  } catch (const Json::exception& e) {
    throw kwidth::Error(kwidth::ErrorKind::Validation, std::string("config is not valid JSON: ") + e.what());
  }
  auto config = kwidth::reports::SweepConfig::from_json(raw);
  config.apply_environment();
  config.validate();

  std::signal(SIGINT, on_sigint);
  kwidth::reports::SweepOptions opts;
  opts.timestamp = !a.no_timestamp;
  opts.stop = &g_interrupted;

  kwidth::reports::SweepSummary summary;
  if (config.output.empty() || config.output == "-") {
    summary = kwidth::reports::run_sweep(config, std::cout, opts);
  } else {
    std::ofstream out(config.output, std::ios::trunc);
    if (!out) throw kwidth::Error(kwidth::ErrorKind::Validation, "cannot write '" + config.output + "'");
    summary = kwidth::reports::run_sweep(config, out, opts);
  }
  std::cerr << Json{{"rows", summary.total},
                    {"written", summary.written},
                    {"cache_hits", summary.cache_hits},
                    {"failed", summary.failed},
                    {"interrupted", summary.interrupted}}
                   .dump()
            << std::endl;
  return summary.interrupted ? 130 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kolmogorov widths of Neumann-kernel convolution classes"};
  app.require_subcommand(1);

  WidthArgs width;
  auto* w = app.add_subcommand("width", "exact width, theta root and asymptotic split");
  w->add_option("--q", width.q, "kernel ratio in (0,1)")->required();
  w->add_option("--beta", width.beta, "phase")->required();
  w->add_option("--n", width.n, "index n >= 1")->required();
  w->add_flag("--verify", width.verify, "cross-check against a brute-force sup-norm search");

  ThresholdArgs threshold;
  auto* t = app.add_subcommand("threshold", "smallest index from which both conditions hold");
  t->add_option("--q", threshold.q)->required();
  t->add_option("--beta", threshold.beta, "report the phase-dependent threshold");
  t->add_option("--cap", threshold.cap, "scan limit");
  t->add_flag("--trace", threshold.trace, "per-n condition values");

  CyArgs cy;
  auto* c = app.add_subcommand("verify-cy2n", "sign pattern of the fundamental spline derivative");
  c->add_option("--q", cy.q)->required();
  c->add_option("--beta", cy.beta)->required();
  c->add_option("--n", cy.n)->required();
  c->add_option("--y", cy.y, "shift in [0, pi/n); default is the extremal point");
  c->add_option("--path", cy.path, "auto | direct | lemma1 | lemma2");

  CvdArgs cvd;
  auto* d = app.add_subcommand("cvd", "determinant test for the CVD property");
  d->add_option("--q", cvd.q);
  d->add_option("--beta", cvd.beta);
  d->add_option("--l", cvd.l, "determinant order 2l+1 for the witness search");
  d->add_flag("--paper-vectors", cvd.paper_vectors, "evaluate the two reference configurations");
  d->add_option("--x", cvd.x, "comma-separated multiples of pi, e.g. 1/18,1/9,1/6");
  d->add_option("--y", cvd.y, "same format as --x");
  d->add_option("--search-budget", cvd.budget);
  d->add_option("--seed", cvd.seed);

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "parameter grid to CSV or JSON");
  s->add_option("--config", sweep.config, "JSON config file")->required();
  s->add_flag("--no-timestamp", sweep.no_timestamp, "omit the generated-at line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print(kwidth::reports::error_json(kwidth::ErrorKind::Validation, e.what()));
    return 2;
  }

  try {
    if (*w) return run_width(width);
    if (*t) return run_threshold(threshold);
    if (*c) return run_cy(cy);
    if (*d) return run_cvd(cvd);
    if (*s) return run_sweep(sweep);
  } catch (const kwidth::Error& e) {
    print(kwidth::reports::error_json(e.kind(), e.what()));
    return kwidth::reports::exit_code(e.kind());
  } catch (const std::exception& e) {
    print(kwidth::reports::error_json(kwidth::ErrorKind::Validation, e.what()));
    return 2;
  }
  return 0;
}
