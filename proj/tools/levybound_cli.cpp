// levybound: command-line front end.
//
// Subcommands: constants, sample, simulate, grid, analyze, regress-alpha.
// Every subcommand accepts --config FILE with flat key=value lines whose keys
// are the long option names; flags given on the command line win.
//
// Exit codes: 0 success, 1 configuration error, 2 I/O error,
// 3 analysis precondition failure.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levybound/analysis.hpp"
#include "levybound/bounds.hpp"
#include "levybound/data_io.hpp"
#include "levybound/error.hpp"
#include "levybound/grid.hpp"
#include "levybound/kernels.hpp"
#include "levybound/sde.hpp"
#include "levybound/special.hpp"
#include "levybound/stable.hpp"

namespace lb = levybound;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitPrecondition = 3;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw lb::IoError("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw lb::IoError("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string fmt(double x) { return lb::format_double(x); }

// --config is expanded by expand_config() before parsing; this declaration
// only documents it in --help.
void add_config(CLI::App* app) {
  app->add_option("--config", "flat key=value file; command-line flags win");
}

std::string trim_ws(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Rewrites argv so that every key=value line of the --config file becomes
// "--key value", inserted right after the subcommand name, unless the same
// flag also appears on the command line.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string path;
  std::size_t at = 0;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      at = i;
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      at = i;
      break;
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  auto given = [&](const std::string& flag) {
    for (const auto& a : args) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  std::vector<std::string> extra;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim_ws(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ConversionError(path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim_ws(line.substr(0, eq));
    std::string value = trim_ws(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    extra.push_back(flag);
    extra.push_back(value);
  }
  // The config belongs to the subcommand it was given after.
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(std::min(at, args.size())),
              extra.begin(), extra.end());
  return args;
}

struct DataOptions {
  lb::SyntheticSpec synthetic{.n_per_class = 125, .dim = 20, .classes = 5,
                              .separation = 2.0, .noise_std = 1.0, .seed = 0};
  std::string train_images, train_labels, test_images, test_labels;
  double subsample = 1.0;
  std::uint64_t subsample_seed = 0;

  void add(CLI::App* app) {
    app->add_option("--n_per_class", synthetic.n_per_class, "synthetic points per class")
        ->capture_default_str();
    app->add_option("--dim", synthetic.dim, "synthetic input dimension")->capture_default_str();
    app->add_option("--classes", synthetic.classes, "synthetic class count")->capture_default_str();
    app->add_option("--separation", synthetic.separation, "distance of class centres from 0")
        ->capture_default_str();
    app->add_option("--noise_std", synthetic.noise_std, "per-coordinate noise std")
        ->capture_default_str();
    app->add_option("--data_seed", synthetic.seed, "synthetic data seed")->capture_default_str();
    app->add_option("--train_images", train_images, "IDX training images (replaces synthetic data)");
    app->add_option("--train_labels", train_labels, "IDX training labels");
    app->add_option("--test_images", test_images, "IDX test images");
    app->add_option("--test_labels", test_labels, "IDX test labels");
    app->add_option("--subsample", subsample, "fraction of the IDX training set kept")
        ->capture_default_str();
    app->add_option("--subsample_seed", subsample_seed)->capture_default_str();
  }

  lb::DataSource source() const {
    lb::DataSource s;
    s.synthetic = synthetic;
    s.train_images = train_images;
    s.train_labels = train_labels;
    s.test_images = test_images;
    s.test_labels = test_labels;
    s.subsample_fraction = subsample;
    s.subsample_seed = subsample_seed;
    return s;
  }
};

void add_train_options(CLI::App* app, lb::TrainConfig& cfg, double& init_scale) {
  app->add_option("--gamma", cfg.gamma, "learning rate")->capture_default_str();
  app->add_option("--eta", cfg.eta, "weight decay")->capture_default_str();
  app->add_option("--sigma2", cfg.sigma2, "Brownian noise scale")->capture_default_str();
  app->add_option("--steps", cfg.steps, "iterations")->capture_default_str();
  app->add_option("--batch_size", cfg.batch_size, "mini-batch size, 0 for full batch")
      ->capture_default_str();
  app->add_option("--eval_interval", cfg.eval_interval, "steps between 0-1 error evaluations")
      ->capture_default_str();
  app->add_option("--init_scale", init_scale, "initialisation std times sqrt(fan-in)")
      ->capture_default_str();
}

// ---------------------------------------------------------------- constants

struct ConstantsCmd {
  double alpha = 1.5;
  std::size_t d = 1;
  double radius = 1.0;
  std::optional<double> sigma1;
  std::string out;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("constants", "bound constants for one (alpha, d, R)");
    add_config(app);
    app->add_option("--alpha", alpha, "tail index in (1, 2)")->required();
    app->add_option("--d", d, "parameter count")->required();
    app->add_option("--R", radius, "radius R")->capture_default_str();
    app->add_option("--sigma1", sigma1, "noise scale for the regime labels");
    app->add_option("--out", out, "output file (default stdout)");
    app->callback([this] { run(); });
  }

  void run() const {
    const lb::BoundConstants c = lb::bound_constants(alpha, d, radius);
    const lb::ComparisonRate rate = lb::comparison_rate(alpha, d);
    Output o(out);
    o.stream() << "alpha,d,R,K,K_bar,P,C,sphere,raj_constant,xi_ours,xi_raj,sigma1,scaled_noise,"
                  "regime,regime_refined\n";
    o.stream() << fmt(alpha) << ',' << d << ',' << fmt(radius) << ',' << fmt(c.k) << ','
               << fmt(c.k_bar) << ',' << fmt(c.p) << ',' << fmt(c.c) << ',' << fmt(c.sphere)
               << ',' << fmt(rate.raj_constant) << ',' << fmt(rate.xi_ours) << ','
               << fmt(rate.xi_raj) << ',';
    if (sigma1) {
      const lb::PhaseRegime r = lb::phase_regime(*sigma1, d, radius);
      o.stream() << fmt(*sigma1) << ',' << fmt(r.scaled_noise) << ',' << lb::to_string(r.coarse)
                 << ',' << lb::to_string(r.refined) << '\n';
    } else {
      o.stream() << ",,,\n";
    }
    o.finish();
  }
};

// ------------------------------------------------------------------- sample

struct SampleCmd {
  std::string kind = "isotropic";
  double alpha = 1.5;
  double beta = 0.0;
  double scale = 1.0;
  double location = 0.0;
  std::size_t dim = 1;
  std::size_t count = 10;
  std::uint64_t seed = 0;
  std::string out;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("sample", "draw stable samples, one per line");
    add_config(app);
    app->add_option("--kind", kind, "isotropic | skewed | subordinator")
        ->check(CLI::IsMember({"isotropic", "skewed", "subordinator"}))
        ->capture_default_str();
    app->add_option("--alpha", alpha)->capture_default_str();
    app->add_option("--beta", beta, "skewness (skewed only)")->capture_default_str();
    app->add_option("--scale", scale, "scale (skewed only)")->capture_default_str();
    app->add_option("--location", location, "location (skewed only)")->capture_default_str();
    app->add_option("--dim", dim, "vector dimension (isotropic only)")->capture_default_str();
    app->add_option("--count", count)->capture_default_str();
    app->add_option("--seed", seed)->capture_default_str();
    app->add_option("--out", out, "output file (default stdout)");
    app->callback([this] { run(); });
  }

  void run() const {
    Output o(out);
    auto& os = o.stream();
    if (kind == "isotropic") {
      const lb::SampleBatch batch = lb::kernels::sample_isotropic_batch(alpha, dim, count, seed);
      for (std::size_t i = 0; i < batch.count(); ++i) {
        const auto row = batch.row(i);
        for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << fmt(row[k]);
        os << '\n';
      }
    } else {
      lb::RngStream rng(seed);
      const lb::StableParams params{alpha, beta, scale, location};
      for (std::size_t i = 0; i < count; ++i) {
        os << fmt(kind == "skewed" ? lb::sample_skewed_stable(params, rng)
                                   : lb::sample_subordinator(alpha, rng))
           << '\n';
      }
    }
    o.finish();
  }
};

// ----------------------------------------------------------------- simulate

struct SimulateCmd {
  DataOptions data;
  lb::TrainConfig cfg;
  double init_scale = 1.0;
  std::size_t width = 0;
  double radius = 1.0;
  double s = 0.5;
  double zeta = 0.05;
  double lambda = 0.0;
  std::size_t window = 2000;
  double trim = 0.15;
  std::string trace_out;
  std::string out;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("simulate", "one training run with its bound estimates");
    add_config(app);
    data.add(app);
    add_train_options(app, cfg, init_scale);
    app->add_option("--alpha", cfg.alpha, "tail index in (1, 2]")->capture_default_str();
    app->add_option("--sigma1", cfg.sigma1, "stable noise scale")->capture_default_str();
    app->add_option("--seed", cfg.seed)->capture_default_str();
    app->add_option("--width", width, "hidden width, 0 for a linear model")->capture_default_str();
    app->add_option("--R", radius)->capture_default_str();
    app->add_option("--s", s, "subgaussian constant")->capture_default_str();
    app->add_option("--zeta", zeta, "failure probability")->capture_default_str();
    app->add_option("--Lambda", lambda, "initial KL divergence")->capture_default_str();
    app->add_option("--window", window, "trailing steps used by the robust gap")
        ->capture_default_str();
    app->add_option("--trim", trim, "upper fraction of gaps discarded")->capture_default_str();
    app->add_option("--trace_out", trace_out, "per-step trace CSV");
    app->add_option("--out", out, "output file (default stdout)");
    app->callback([this] { run(); });
  }

  template <class F>
  static double or_nan(F&& f) {
    try {
      return f();
    } catch (const lb::DomainError&) {
      return kNaN;
    }
  }

  void run() const {
    const lb::TrainTestSplit split = lb::load_data(data.source());
    const lb::ModelSpec spec = width == 0
                                   ? lb::ModelSpec::linear(split.train.dim, split.train.classes)
                                   : lb::ModelSpec::fcn(split.train.dim, width, split.train.classes);
    const lb::RunTrace trace = lb::run_training(spec, split.train, split.test, cfg, init_scale);

    if (!trace_out.empty()) {
      std::ofstream t(trace_out);
      if (!t) throw lb::IoError("cannot open " + trace_out);
      t << "step,grad_norm_sq,train_error,test_error\n";
      for (const auto& r : trace.records) {
        t << r.step << ',' << fmt(r.grad_norm_sq) << ','
          << (r.train_error ? fmt(*r.train_error) : "") << ','
          << (r.test_error ? fmt(*r.test_error) : "") << '\n';
      }
    }

    lb::BoundInputs in;
    in.alpha = cfg.alpha;
    in.d = spec.param_count();
    in.n = split.train.size();
    in.sigma1 = cfg.sigma1;
    in.sigma2 = cfg.sigma2;
    in.gamma = cfg.gamma;
    in.eta = cfg.eta;
    in.radius = radius;
    in.s = s;
    in.zeta = zeta;
    in.lambda = lambda;
    in.validate();

    double gap = kNaN, i_hat = kNaN, g_hat = kNaN, thm = kNaN, disc = kNaN, brown = kNaN;
    if (!trace.diverged) {
      gap = lb::robust_gap(trace, window, trim);
      i_hat = lb::integral_estimate(trace);
      g_hat = or_nan([&] { return lb::bound_estimate(i_hat, in); });
      thm = or_nan([&] { return lb::theorem_bound(i_hat, in); });
      disc = or_nan([&] { return lb::discrete_bound(trace, in); });
      brown = or_nan([&] { return lb::brownian_bound(i_hat, in); });
    }
    Output o(out);
    o.stream() << "alpha,sigma1,sigma2,d,width,n,seed,steps,diverged,gap,i_hat,g_hat,"
                  "theorem_bound,discrete_bound,brownian_bound\n";
    o.stream() << fmt(cfg.alpha) << ',' << fmt(cfg.sigma1) << ',' << fmt(cfg.sigma2) << ','
               << in.d << ',' << width << ',' << in.n << ',' << cfg.seed << ','
               << trace.records.size() << ',' << (trace.diverged ? "true" : "false") << ','
               << fmt(gap) << ',' << fmt(i_hat) << ',' << fmt(g_hat) << ',' << fmt(thm) << ','
               << fmt(disc) << ',' << fmt(brown) << '\n';
    o.finish();
  }
};

// --------------------------------------------------------------------- grid

struct GridCmd {
  DataOptions data;
  lb::GridSpec grid;
  std::vector<double> alphas;
  std::vector<std::size_t> widths{0};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::string out;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("grid", "run an (alpha, sigma, width, seed) grid");
    add_config(app);
    data.add(app);
    add_train_options(app, grid.base, grid.init_scale);
    app->add_option("--alphas", alphas, "tail indices (default: 10 values in [1.6, 2])")
        ->delimiter(',');
    app->add_option("--sigma1s", grid.sigma1s, "stable noise scales")->delimiter(',');
    app->add_option("--sigma_sqrt_d", grid.sigma_sqrt_d, "values of sigma1 * sqrt(d)")
        ->delimiter(',');
    app->add_option("--widths", widths, "hidden widths, 0 for a linear model")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--seeds", seeds)->delimiter(',')->capture_default_str();
    app->add_option("--window", grid.window)->capture_default_str();
    app->add_option("--trim", grid.trim)->capture_default_str();
    app->add_option("--R", grid.radius, "R used for G_hat")->capture_default_str();
    app->add_option("--out", out, "records CSV (appended while running)")->required();
    app->callback([this] { run(); });
  }

  static int workers() {
    if (const char* env = std::getenv("LEVYBOUND_WORKERS")) {
      try {
        const int w = std::stoi(env);
        if (w >= 1) return w;
      } catch (const std::exception&) {
      }
      throw lb::InvalidParameter("LEVYBOUND_WORKERS must be a positive integer");
    }
    return lb::kernels::thread_count();
  }

  void run() {
    grid.alphas = alphas;
    if (grid.alphas.empty()) {
      for (int i = 0; i < 10; ++i) grid.alphas.push_back(1.6 + 0.4 * i / 9.0);
    }
    grid.widths = widths;
    grid.seeds = seeds;
    grid.data = data.source();
    grid.output = out;
    grid.validate();
    const int w = workers();
    std::cerr << "grid: " << grid.cell_count() << " cells, " << w << " worker(s)\n";
    const lb::GridOutcome result = lb::execute_grid(grid, w);
    std::cerr << "grid: computed " << result.computed << ", reused " << result.reused
              << ", wrote " << result.records.size() << " rows to " << out << '\n';
  }
};

// ------------------------------------------------------------------ analyze

struct AnalyzeCmd {
  std::string in;
  std::string group = "sigma1";
  std::optional<double> radius;
  std::string out;
  std::string long_out;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("analyze", "per-group Kendall tau between alpha and gap");
    add_config(app);
    app->add_option("--in", in, "records CSV")->required();
    app->add_option("--group", group, "d | sigma1")
        ->check(CLI::IsMember({"d", "sigma1"}))
        ->capture_default_str();
    app->add_option("--R", radius, "R for regime labels (default: estimated, else 1)");
    app->add_option("--out", out, "report CSV (default stdout)");
    app->add_option("--long_out", long_out, "long-format CSV: group, alpha, mean gap, std gap");
    app->callback([this] { run(); });
  }

  void run() const {
    const auto records = lb::read_records(std::filesystem::path(in));
    const auto key = group == "d" ? lb::GroupKey::Dimension : lb::GroupKey::Sigma1;
    const auto scan = lb::correlation_scan(records, key);

    std::optional<lb::RadiusEstimate> estimate;
    try {
      estimate = lb::estimate_radius(scan, key);
    } catch (const lb::PreconditionError& e) {
      std::cerr << "analyze: no radius estimate (" << e.what() << ")\n";
    }
    const double r_used = radius ? *radius : (estimate ? estimate->radius : 1.0);

    Output o(out);
    o.stream() << "group,key,sigma1,d,seeds_used,tau_seed_mean,tau_seed_std,tau_of_mean,"
                  "pearson_of_mean,scaled_noise,regime,regime_refined,r_estimate\n";
    for (const auto& g : scan) {
      std::string coarse, refined;
      double scaled = kNaN;
      if (std::isfinite(g.sigma1) && std::isfinite(g.d) && g.sigma1 > 0.0) {
        const auto r = lb::phase_regime(g.sigma1, static_cast<std::size_t>(g.d), r_used);
        scaled = r.scaled_noise;
        coarse = lb::to_string(r.coarse);
        refined = lb::to_string(r.refined);
      }
      o.stream() << group << ',' << fmt(g.key) << ',' << fmt(g.sigma1) << ',' << fmt(g.d) << ','
                 << g.seeds_used << ',' << fmt(g.tau_seed_mean) << ',' << fmt(g.tau_seed_std)
                 << ',' << fmt(g.tau_of_mean) << ',' << fmt(g.pearson_of_mean) << ','
                 << fmt(scaled) << ',' << coarse << ',' << refined << ','
                 << (estimate ? fmt(estimate->radius) : "") << '\n';
    }
    o.finish();

    if (!long_out.empty()) {
      Output l(long_out);
      l.stream() << "group,key,alpha,mean_gap,std_gap\n";
      for (const auto& g : scan) {
        for (std::size_t i = 0; i < g.alphas.size(); ++i) {
          l.stream() << group << ',' << fmt(g.key) << ',' << fmt(g.alphas[i]) << ','
                     << fmt(g.mean_gaps[i]) << ',' << fmt(g.std_gaps[i]) << '\n';
        }
      }
      l.finish();
    }
  }
};

// ------------------------------------------------------------ regress-alpha

struct RegressCmd {
  std::string in;
  std::string out;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("regress-alpha",
                                    "tail-index estimate from log(gap) vs log(d), per alpha");
    add_config(app);
    app->add_option("--in", in, "records CSV")->required();
    app->add_option("--out", out, "output file (default stdout)");
    app->callback([this] { run(); });
  }

  void run() const {
    const auto records = lb::read_records(std::filesystem::path(in));
    std::map<double, std::vector<lb::RunRecord>> by_alpha;
    for (const auto& r : records) by_alpha[r.alpha].push_back(r);
    Output o(out);
    o.stream() << "alpha,r_hat,intercept,alpha_hat\n";
    for (const auto& [alpha, rows] : by_alpha) {
      const lb::AlphaRegression fit = lb::alpha_regression(rows);
      o.stream() << fmt(alpha) << ',' << fmt(fit.slope) << ',' << fmt(fit.intercept) << ','
                 << fmt(fit.alpha_hat) << '\n';
    }
    o.finish();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heavy-tailed SDE simulation and generalization-bound toolkit", "levybound"};
  app.require_subcommand(1);

  ConstantsCmd constants;
  SampleCmd sample;
  SimulateCmd simulate;
  GridCmd grid;
  AnalyzeCmd analyze;
  RegressCmd regress;
  constants.add(app);
  sample.add(app);
  simulate.add(app);
  grid.add(app);
  analyze.add(app);
  regress.add(app);

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    args.erase(args.begin());
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const lb::PreconditionError& e) {
    std::cerr << "levybound: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const lb::IoError& e) {
    std::cerr << "levybound: " << e.what() << '\n';
    return kExitIo;
  } catch (const lb::FormatError& e) {
    std::cerr << "levybound: " << e.what() << '\n';
    return kExitIo;
  } catch (const lb::ParseError& e) {
    std::cerr << "levybound: " << e.what() << '\n';
    return kExitIo;
  } catch (const lb::Error& e) {
    std::cerr << "levybound: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
