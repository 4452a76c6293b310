// tailidx: command-line front end for the tail-index toolkit.
//
// Exit codes: 0 ok, 1 I/O failure, 2 invalid flags, 3 input parse error,
// 4 estimator error (degenerate sample).

#include "tailidx/tailidx.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

enum exit_code : int { ok = 0, io_failure = 1, bad_flags = 2, bad_input = 3, bad_sample = 4 };

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t seed_or_generate(const std::optional<std::uint64_t>& seed) {
  if (seed) {
    return *seed;
  }
  std::random_device rd;
  const std::uint64_t s = (std::uint64_t{rd()} << 32) | rd();
  std::cerr << "tailidx: using generated seed " << s << '\n';
  return s;
}

/// Opens `path` for reading; "-" or empty means stdin.
std::unique_ptr<std::istream> open_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return std::make_unique<std::istream>(std::cin.rdbuf());
  }
  auto f = std::make_unique<std::ifstream>(path);
  if (!*f) {
    throw io_error("cannot open '" + path + "' for reading");
  }
  return f;
}

std::unique_ptr<std::ostream> open_output(const std::string& path) {
  if (path.empty() || path == "-") {
    return std::make_unique<std::ostream>(std::cout.rdbuf());
  }
  auto f = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*f) {
    throw io_error("cannot open '" + path + "' for writing");
  }
  return f;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    T v{};
    if (!tailidx::detail::parse_number(item, v)) {
      throw std::invalid_argument(std::string("bad value in ") + what + ": '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw std::invalid_argument(std::string(what) + " is empty");
  }
  return out;
}

std::vector<tailidx::StudyEstimator> parse_estimators(const std::string& text) {
  std::vector<tailidx::StudyEstimator> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "mse") {
      out.push_back(tailidx::StudyEstimator::mse);
    } else if (item == "csn") {
      out.push_back(tailidx::StudyEstimator::csn);
    } else if (item == "hill") {
      out.push_back(tailidx::StudyEstimator::hill_k);
    } else {
      throw std::invalid_argument("unknown estimator '" + item + "' (expected mse, csn, hill)");
    }
  }
  if (out.empty()) {
    throw std::invalid_argument("estimator list is empty");
  }
  return out;
}

struct SampleArgs {
  std::size_t n = 0;
  double zeta = 0.0;
  double x_min = 1.0;
  double scale = 1.0;
  double shift = 0.0;
  std::optional<std::uint64_t> seed;
  std::uint64_t stream = 0;
  std::string out;
};

int run_sample(const SampleArgs& a) {
  const tailidx::ParetoSpec spec{a.zeta, a.x_min, a.scale, a.shift};
  try {
    spec.validate();
    if (a.n == 0) {
      throw std::invalid_argument("--n must be at least 1");
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "tailidx sample: " << e.what() << '\n';
    return bad_flags;
  }
  const auto xs = tailidx::sample(a.n, spec, {seed_or_generate(a.seed), a.stream});
  auto os = open_output(a.out);
  for (double x : xs) {
    *os << tailidx::format_double(x) << '\n';
  }
  return ok;
}

struct EstimateArgs {
  std::string method;
  std::optional<std::size_t> k;
  std::size_t min_tail = 10;
  double lo_fraction = 0.005;
  double hi_fraction = 0.5;
  std::size_t max_candidates = 2000;
  bool mad_rescale = false;
  std::optional<double> shift_lo;
  std::optional<double> shift_hi;
  std::size_t shift_count = 41;
  std::string format = "json-record";
  std::string in;
};

int run_estimate(const EstimateArgs& a) {
  tailidx::CsnConfig csn{a.lo_fraction, a.hi_fraction, a.max_candidates, a.min_tail};
  try {
    if (a.method == "hill" && !a.k) {
      throw std::invalid_argument("--k is required for --method hill");
    }
    if (a.shift_lo.has_value() != a.shift_hi.has_value()) {
      throw std::invalid_argument("--shift-lo and --shift-hi must be given together");
    }
    if (a.shift_count == 0) {
      throw std::invalid_argument("--shift-count must be positive");
    }
    csn.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "tailidx estimate: " << e.what() << '\n';
    return bad_flags;
  }

  std::vector<double> xs;
  try {
    auto in = open_input(a.in);
    const bool positive = a.method == "hill" || a.method == "csn";
    xs = tailidx::read_values(*in, positive);
  } catch (const tailidx::parse_error& e) {
    std::cerr << "tailidx estimate: " << e.what() << '\n';
    return bad_input;
  }

  tailidx::Estimate est;
  try {
    if (a.mad_rescale) {
      xs = tailidx::mad_rescale(xs);
    }
    if (a.method == "mse") {
      est = tailidx::mse(xs);
      if (est.degenerate) {
        std::cerr << "tailidx estimate: warning: single observation, MSE is degenerate\n";
      }
    } else if (a.method == "hill") {
      est = tailidx::hill_fixed_k(xs, *a.k);
    } else if (a.method == "csn") {
      est = tailidx::csn_fit(xs, csn);
    } else {
      const auto grid = a.shift_lo ? tailidx::ShiftGrid{*a.shift_lo, *a.shift_hi, a.shift_count}
                                   : tailidx::default_shift_grid(xs);
      est = tailidx::shifted_csn_fit(xs, csn, grid);
    }
  } catch (const tailidx::estimator_error& e) {
    std::cerr << "tailidx estimate: " << e.what() << '\n';
    return bad_sample;
  } catch (const std::invalid_argument& e) {
    // k out of range for this sample, etc.
    std::cerr << "tailidx estimate: " << e.what() << '\n';
    return bad_flags;
  }

  if (a.format == "csv") {
    std::cout << tailidx::estimate_csv_header() << '\n' << tailidx::to_csv_row(est) << '\n';
  } else {
    std::cout << tailidx::to_json_record(est) << '\n';
  }
  return ok;
}

struct StudyArgs {
  std::string zeta_grid = "1,1.25,1.5,1.75,2,2.25,2.5,2.75,3";
  std::string sizes = "10000,100000,1000000";
  std::size_t runs = 100;
  std::string estimators = "mse";
  double x_min = 1.0;
  double hill_fraction = 0.01;
  std::size_t min_tail = 10;
  std::optional<std::uint64_t> seed;
  bool mad_rescale = false;
  unsigned jobs = 0;
  std::string out;
};

int run_mc_study(const StudyArgs& a) {
  tailidx::McStudyConfig cfg;
  try {
    cfg.zeta_grid = parse_list<double>(a.zeta_grid, "--zeta-grid");
    cfg.sample_sizes = parse_list<std::size_t>(a.sizes, "--sizes");
    cfg.estimators = parse_estimators(a.estimators);
    cfg.runs = a.runs;
    cfg.spec_base.x_min = a.x_min;
    cfg.hill_fraction = a.hill_fraction;
    cfg.csn.min_tail_count = a.min_tail;
    cfg.mad_rescale = a.mad_rescale;
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "tailidx mc-study: " << e.what() << '\n';
    return bad_flags;
  }
  cfg.master_seed = seed_or_generate(a.seed);
  const unsigned jobs = a.jobs > 0 ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  const auto cells = tailidx::run_study(cfg, jobs);
  auto os = open_output(a.out);
  tailidx::write_study_csv(*os, cells, cfg.zeta_grid);
  return ok;
}

struct AggregateArgs {
  std::int64_t window = 900;
  std::int64_t origin = 0;
  std::string in;
  std::string out;
};

int run_aggregate(const AggregateArgs& a) {
  if (a.window <= 0) {
    std::cerr << "tailidx aggregate: --window must be positive\n";
    return bad_flags;
  }
  std::vector<tailidx::TradeRecord> trades;
  try {
    auto in = open_input(a.in);
    trades = tailidx::read_trades(*in);
  } catch (const tailidx::parse_error& e) {
    std::cerr << "tailidx aggregate: " << e.what() << '\n';
    return bad_input;
  }
  if (trades.empty()) {
    std::cerr << "tailidx aggregate: no trades in input\n";
    return bad_input;
  }
  const auto qs = tailidx::aggregate(std::move(trades), {a.window, a.origin});
  auto os = open_output(a.out);
  for (double q : qs) {
    *os << tailidx::format_double(q) << '\n';
  }
  return ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heavy-tail index estimation toolkit"};
  app.require_subcommand(1);

  SampleArgs sa;
  auto* sample_cmd = app.add_subcommand("sample", "Draw Pareto variates, one per line");
  sample_cmd->add_option("--n", sa.n, "Number of variates")->required();
  sample_cmd->add_option("--zeta", sa.zeta, "CCDF tail exponent")->required();
  sample_cmd->add_option("--x-min", sa.x_min, "Lower support bound")->capture_default_str();
  sample_cmd->add_option("--scale", sa.scale, "Multiplicative factor")->capture_default_str();
  sample_cmd->add_option("--shift", sa.shift, "Additive offset")->capture_default_str();
  sample_cmd->add_option("--seed", sa.seed, "Master seed (generated and printed if absent)");
  sample_cmd->add_option("--stream", sa.stream, "Substream index")->capture_default_str();
  sample_cmd->add_option("--out,-o", sa.out, "Output file (default stdout)");

  EstimateArgs ea;
  auto* est_cmd = app.add_subcommand("estimate", "Estimate the tail exponent of a sample");
  est_cmd->add_option("--method", ea.method, "Estimator")
      ->required()
      ->check(CLI::IsMember({"mse", "hill", "csn", "shifted-csn"}));
  est_cmd->add_option("--k", ea.k, "Tail count for hill");
  est_cmd->add_option("--min-tail", ea.min_tail, "Smallest admissible tail count (csn)")
      ->capture_default_str();
  est_cmd->add_option("--lo-fraction", ea.lo_fraction, "Highest candidate rank / N (csn)")
      ->capture_default_str();
  est_cmd->add_option("--hi-fraction", ea.hi_fraction, "Lowest candidate rank / N (csn)")
      ->capture_default_str();
  est_cmd->add_option("--max-candidates", ea.max_candidates, "Threshold candidate cap (csn)")
      ->capture_default_str();
  est_cmd->add_flag("--mad-rescale", ea.mad_rescale, "Divide by the mean absolute deviation first");
  est_cmd->add_option("--shift-lo", ea.shift_lo, "Smallest candidate shift (shifted-csn)");
  est_cmd->add_option("--shift-hi", ea.shift_hi, "Largest candidate shift (shifted-csn)");
  est_cmd->add_option("--shift-count", ea.shift_count, "Number of candidate shifts")
      ->capture_default_str();
  est_cmd->add_option("--format", ea.format, "Output format")
      ->check(CLI::IsMember({"json-record", "csv"}))
      ->capture_default_str();
  est_cmd->add_option("--in,input", ea.in, "Input file, one value per line (default stdin)");

  StudyArgs st;
  auto* mc_cmd = app.add_subcommand("mc-study", "Monte Carlo estimator bias table (CSV)");
  mc_cmd->add_option("--zeta-grid", st.zeta_grid, "Comma-separated true exponents")
      ->capture_default_str();
  mc_cmd->add_option("--sizes", st.sizes, "Comma-separated sample sizes")->capture_default_str();
  mc_cmd->add_option("--runs", st.runs, "Runs per cell")->capture_default_str();
  mc_cmd->add_option("--estimators", st.estimators, "Comma-separated subset of mse,csn,hill")
      ->capture_default_str();
  mc_cmd->add_option("--x-min", st.x_min, "Lower support bound of the generated law")
      ->capture_default_str();
  mc_cmd->add_option("--hill-fraction", st.hill_fraction, "Hill k as a fraction of N")
      ->capture_default_str();
  mc_cmd->add_option("--min-tail", st.min_tail, "Smallest admissible tail count (csn)")
      ->capture_default_str();
  mc_cmd->add_option("--seed", st.seed, "Master seed (generated and printed if absent)");
  mc_cmd->add_flag("--mad-rescale", st.mad_rescale, "MAD-rescale each sample first");
  mc_cmd->add_option("--jobs,-j", st.jobs, "Worker threads (default: all cores)");
  mc_cmd->add_option("--out,-o", st.out, "Output file (default stdout)");

  AggregateArgs ag;
  auto* agg_cmd = app.add_subcommand("aggregate", "Sum trade volumes per time window");
  agg_cmd->add_option("--window", ag.window, "Window length in seconds")->capture_default_str();
  agg_cmd->add_option("--origin", ag.origin, "Window alignment epoch")->capture_default_str();
  agg_cmd->add_option("--in,input", ag.in, "Trade CSV (default stdin)");
  agg_cmd->add_option("--out,-o", ag.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return bad_flags;
  }

  try {
    if (*sample_cmd) {
      return run_sample(sa);
    }
    if (*est_cmd) {
      return run_estimate(ea);
    }
    if (*mc_cmd) {
      return run_mc_study(st);
    }
    return run_aggregate(ag);
  } catch (const io_error& e) {
    std::cerr << "tailidx: " << e.what() << '\n';
    return io_failure;
  }
}
