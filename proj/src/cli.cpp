#include "latgeo/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "latgeo/bounds.hpp"
#include "latgeo/io.hpp"
#include "latgeo/metrics.hpp"
#include "latgeo/optimize.hpp"
#include "latgeo/probes.hpp"
#include "latgeo/random.hpp"

namespace latgeo::cli {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::uint64_t seed = 42;
  std::optional<std::size_t> samples;
  std::size_t dim = 2;
  std::size_t m = 0;
  std::size_t ambient_dim = 2;
  std::string modes_path;
  std::string frame_path;
  double side = 1.0;
  std::optional<double> epsilon;
  std::string epsilon_policy;  // explicit | auto-min | auto-max
  std::optional<double> lipschitz;
  std::optional<double> lipschitz_mult;
  std::size_t k = 5;
  double tol = 0.0;
  std::string method = "margin";
  std::string format = "json";
  std::string out;
  // subcommand specific
  std::string real_path, fake_path;
  std::optional<double> eps_min, eps_max;
  std::size_t pairs = 10'000, interp = 4, iters = 200, restarts = 8;
  double step = 0.3, penalty = 10.0;
  std::vector<std::size_t> dims;
  double sweep_mult = 10.0;
};

fs::path output_dir() {
  const char* env = std::getenv("LATGEO_OUT_DIR");
  return env && *env ? fs::path(env) : fs::path(".");
}

fs::path output_path(const RunConfig& cfg, const std::string& default_name) {
  return cfg.out.empty() ? output_dir() / default_name : fs::path(cfg.out);
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

std::size_t samples_or(const RunConfig& cfg, std::size_t fallback) {
  const std::size_t n = cfg.samples.value_or(fallback);
  require(n >= 1, "--samples must be >= 1");
  return n;
}

// Checks the flags that describe modes, frame and budget without touching data.
void validate_generator_flags(const RunConfig& cfg) {
  if (cfg.modes_path.empty()) {
    require(cfg.m >= 2, "--m must be >= 2 (or give --modes)");
    require(cfg.ambient_dim >= 1, "--ambient-dim must be >= 1");
  }
  if (cfg.frame_path.empty()) {
    require(cfg.dim >= 1, "--dim must be >= 1");
    require(cfg.side > 0.0 && std::isfinite(cfg.side), "--side must be positive");
    if (cfg.modes_path.empty())
      require(cfg.m <= cfg.dim + 1, "--m " + std::to_string(cfg.m) + " exceeds --dim + 1; pass a --frame from 'optimize'");
  }
  require(!(cfg.lipschitz && cfg.lipschitz_mult), "--L and --L-mult are mutually exclusive");
  if (cfg.lipschitz) require(*cfg.lipschitz > 0.0 && std::isfinite(*cfg.lipschitz), "--L must be positive");
  if (cfg.lipschitz_mult) require(*cfg.lipschitz_mult > 0.0 && std::isfinite(*cfg.lipschitz_mult), "--L-mult must be positive");
  if (cfg.epsilon_policy == "explicit") require(cfg.epsilon.has_value(), "--epsilon-policy explicit needs --epsilon");
  if (cfg.epsilon) require(*cfg.epsilon > 0.0 && std::isfinite(*cfg.epsilon), "--epsilon must be positive");
}

ModeSet load_modes(const RunConfig& cfg) {
  if (!cfg.modes_path.empty()) return read_modes(cfg.modes_path);
  Matrix raw(cfg.m, cfg.ambient_dim);
  RandomStream rng(derive_seed(cfg.seed, 0x4d4f4445), 0);
  for (std::size_t i = 0; i < cfg.m; ++i) rng.fill_normal(raw.row_mut(i));
  return ModeSet(std::move(raw));
}

SimplexFrame load_frame(const RunConfig& cfg, std::size_t m) {
  if (!cfg.frame_path.empty()) {
    SimplexFrame f = read_frame(cfg.frame_path);
    if (f.count() != m)
      throw IngestError("--frame has " + std::to_string(f.count()) + " cells but there are " +
                        std::to_string(m) + " modes");
    return f;
  }
  require(m <= cfg.dim + 1, "--modes has " + std::to_string(m) + " modes, more than --dim + 1; pass a --frame from 'optimize'");
  return equidistant_points(m, cfg.dim, cfg.side);
}

double lipschitz_budget(const RunConfig& cfg, const ModeSet& modes) {
  double L = 4.0 * modes.diameter() * std::sqrt(double(modes.count()));
  if (cfg.lipschitz) L = *cfg.lipschitz;
  if (cfg.lipschitz_mult) L = *cfg.lipschitz_mult * modes.diameter();
  require(L > modes.diameter(), "--L (" + format_number(L) + ") must exceed the mode diameter (" +
                                    format_number(modes.diameter()) + ")");
  return L;
}

GeneratorStar build_generator(const RunConfig& cfg) {
  const ModeSet modes = load_modes(cfg);
  SimplexFrame frame = load_frame(cfg, modes.count());
  const double L = lipschitz_budget(cfg, modes);
  double eps = epsilon_max(modes, L);
  if (cfg.epsilon_policy == "auto-min") eps = epsilon_min(modes, L);
  if (cfg.epsilon_policy == "explicit") eps = *cfg.epsilon;
  return GeneratorStar(std::move(frame), modes, eps, L);
}

Json generator_params(const GeneratorStar& g) {
  Json p;
  p["m"] = g.modes().count();
  p["dim"] = g.latent_dim();
  p["ambient_dim"] = g.ambient_dim();
  p["diameter"] = g.modes().diameter();
  p["L"] = g.lipschitz_budget();
  p["epsilon"] = g.epsilon();
  return p;
}

// ---------------------------------------------------------------- commands

int cmd_simplex(const RunConfig& cfg, std::ostream& out) {
  require(cfg.m >= 2, "--m must be >= 2");
  require(cfg.dim >= 1, "--dim must be >= 1");
  require(cfg.m <= cfg.dim + 1, "--m must be <= --dim + 1 for a regular simplex");
  require(cfg.side > 0.0 && std::isfinite(cfg.side), "--side must be positive");
  const auto frame = equidistant_points(cfg.m, cfg.dim, cfg.side);
  const fs::path path = output_path(cfg, "frame.json");
  write_frame(path, frame);
  out << "simplex m=" << cfg.m << " dim=" << cfg.dim << " side=" << format_number(frame.side())
      << " -> " << path.string() << "\n";
  return kExitOk;
}

int cmd_boundary(const RunConfig& cfg, std::ostream& out) {
  require(cfg.epsilon.has_value(), "--epsilon is required");
  require(*cfg.epsilon > 0.0 && std::isfinite(*cfg.epsilon), "--epsilon must be positive");
  const std::size_t n = samples_or(cfg, 1'000'000);
  require(n >= 100, "--samples must be >= 100");
  const BoundaryMethod method = [&] {
    try {
      return parse_boundary_method(cfg.method);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--method: ") + e.what());
    }
  }();
  if (cfg.frame_path.empty()) {
    require(cfg.m >= 2, "--m must be >= 2 (or give --frame)");
    require(cfg.dim >= 1, "--dim must be >= 1");
    require(cfg.m <= cfg.dim + 1, "--m must be <= --dim + 1 (or give --frame)");
  }
  const SimplexFrame frame = cfg.frame_path.empty() ? equidistant_points(cfg.m, cfg.dim, cfg.side)
                                                    : read_frame(cfg.frame_path);
  const auto e = boundary_measure(frame, *cfg.epsilon, n, cfg.seed, method);
  MetricReport r;
  r.metric = "boundary_measure";
  r.value = e.value;
  r.ci = std::pair{e.lower, e.upper};
  r.seed = cfg.seed;
  r.params = {{"m", std::uint64_t{frame.count()}}, {"dim", std::uint64_t{frame.dim()}},
              {"epsilon", *cfg.epsilon}, {"samples", std::uint64_t{n}},
              {"method", to_string(method)}, {"hits", std::uint64_t{e.hits}}};
  const fs::path path = output_path(cfg, "boundary.json");
  write_json(path, report_to_json(r));
  out << "boundary m=" << frame.count() << " dim=" << frame.dim() << " epsilon=" << format_number(*cfg.epsilon)
      << " value=" << format_number(e.value) << " ci=[" << format_number(e.lower) << ", "
      << format_number(e.upper) << "] -> " << path.string() << "\n";
  return kExitOk;
}

int cmd_generate(const RunConfig& cfg, std::ostream& out) {
  validate_generator_flags(cfg);
  const std::size_t n = samples_or(cfg, 10'000);
  const auto g = build_generator(cfg);
  const auto batch = generate_batch(g, n, cfg.seed);
  const fs::path path = output_path(cfg, "samples.csv");
  fs::path sidecar = path;
  sidecar.replace_extension(".json");
  if (sidecar == path) sidecar += ".json";
  write_samples(path, batch.samples);
  write_json(sidecar, generation_sidecar(g, n, cfg.seed));
  std::size_t memorized = 0;
  for (auto s : batch.active_sizes) memorized += s == 1 ? 1 : 0;
  out << "generate n=" << n << " epsilon=" << format_number(g.epsilon()) << " L=" << format_number(g.lipschitz_budget())
      << " memorized=" << format_number(double(memorized) / double(n)) << " -> " << path.string() << "\n";
  return kExitOk;
}

int cmd_metrics(const RunConfig& cfg, std::ostream& out) {
  require(!cfg.real_path.empty(), "--real is required");
  require(!cfg.fake_path.empty(), "--fake is required");
  require(cfg.k >= 1, "--k must be >= 1");
  require(cfg.tol >= 0.0 && std::isfinite(cfg.tol), "--tol must be nonnegative");
  const SampleSet real = read_samples(cfg.real_path, Provenance::real);
  const SampleSet fake = read_samples(cfg.fake_path, Provenance::fake);
  if (real.ambient_dim() != fake.ambient_dim())
    throw IngestError("dimension mismatch: --real has " + std::to_string(real.ambient_dim()) +
                      " columns, --fake has " + std::to_string(fake.ambient_dim()));
  if (cfg.k >= real.size())
    throw ConfigError("--k (" + std::to_string(cfg.k) + ") must be smaller than the number of real points (" +
                      std::to_string(real.size()) + ")");
  std::vector<MetricReport> reports;
  auto add = [&](std::string name, double value, std::optional<std::pair<double, double>> ci = std::nullopt) {
    MetricReport r;
    r.metric = std::move(name);
    r.value = value;
    r.ci = ci;
    r.params = {{"k", std::uint64_t{cfg.k}}, {"n_real", std::uint64_t{real.size()}},
                {"n_fake", std::uint64_t{fake.size()}}};
    reports.push_back(std::move(r));
  };
  add("density", density(real, fake, cfg.k));
  add("coverage", coverage(real, fake, cfg.k));
  const auto eq = equilibrium(real, fake);
  add("equilibrium", eq.kl);
  reports.back().params["empty_cells"] = std::uint64_t{eq.empty_cells};
  if (!cfg.modes_path.empty()) {
    const ModeSet modes = read_modes(cfg.modes_path);
    if (modes.ambient_dim() != fake.ambient_dim())
      throw IngestError("dimension mismatch: --modes has " + std::to_string(modes.ambient_dim()) +
                        " columns, --fake has " + std::to_string(fake.ambient_dim()));
    const auto p = precision_support(fake, modes, cfg.tol);
    const auto rc = recall_support(fake, modes, cfg.tol);
    add("precision_support", p.value, std::pair{p.lower, p.upper});
    reports.back().params["tol"] = effective_support_tol(modes, cfg.tol);
    add("recall_support", rc.value, std::pair{rc.lower, rc.upper});
    reports.back().params["tol"] = effective_support_tol(modes, cfg.tol);
  }
  Json j;
  j["schema"] = "1";
  j["reports"] = Json::array();
  for (const auto& r : reports) j["reports"].push_back(report_to_json(r));
  const fs::path path = output_path(cfg, "metrics.json");
  write_json(path, j);
  out << "metrics";
  for (const auto& r : reports) out << ' ' << r.metric << '=' << format_number(r.value);
  out << " -> " << path.string() << "\n";
  return kExitOk;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  require(cfg.format == "json" || cfg.format == "csv", "--format must be json or csv");
  std::size_t m = cfg.m;
  double e_min = 0.0, e_max = 0.0;
  std::optional<double> L;
  if (cfg.eps_min || cfg.eps_max) {
    require(cfg.eps_min && cfg.eps_max, "--eps-min and --eps-max go together");
    require(*cfg.eps_min >= 0.0 && *cfg.eps_max > 0.0, "--eps-min must be >= 0 and --eps-max > 0");
    require(m >= 2, "--m must be >= 2");
    require(cfg.dim >= 2, "--dim must be >= 2");
    e_min = *cfg.eps_min;
    e_max = *cfg.eps_max;
    L = cfg.lipschitz;
  } else {
    if (cfg.modes_path.empty()) require(cfg.m >= 2, "--m must be >= 2 (or give --modes / --eps-min --eps-max)");
    require(cfg.dim >= 2, "--dim must be >= 2");
    require(!(cfg.lipschitz && cfg.lipschitz_mult), "--L and --L-mult are mutually exclusive");
    const ModeSet modes = load_modes(cfg);
    m = modes.count();
    L = lipschitz_budget(cfg, modes);
    e_min = epsilon_min(modes, *L);
    e_max = epsilon_max(modes, *L);
  }
  const std::vector<BoundReport> bounds{precision_upper_bound(e_min, m, cfg.dim, L),
                                        precision_upper_bound_asymptotic(e_min, m),
                                        precision_lower_bound(e_max, m, cfg.dim)};
  const std::size_t h = hyperplane_count(m, cfg.dim);
  Json j;
  j["schema"] = "1";
  j["bounds"] = Json::array();
  for (const auto& b : bounds) j["bounds"].push_back(bound_to_json(b));
  j["hyperplane_count"] = h;
  const fs::path path = output_path(cfg, cfg.format == "csv" ? "bounds.csv" : "bounds.json");
  if (cfg.format == "csv") {
    std::string text = bound_csv_header() + "\n";
    for (const auto& b : bounds) text += bound_csv_row(b) + "\n";
    write_text(path, text);
    fs::path report = path;
    report.replace_extension(".json");
    if (report != path) write_json(report, j);
  } else {
    write_json(path, j);
  }
  out << "bounds m=" << m << " d=" << cfg.dim << " upper=" << format_number(bounds[0].leading_value)
      << " asymptotic=" << format_number(bounds[1].leading_value) << " lower=" << format_number(bounds[2].leading_value)
      << " (" << bounds[2].regime << (bounds[2].valid ? "" : ", remainder dominates") << ") h=" << h
      << " -> " << path.string() << "\n";
  return kExitOk;
}

int cmd_sandwich(const RunConfig& cfg, std::ostream& out) {
  validate_generator_flags(cfg);
  require(cfg.epsilon_policy.empty() || cfg.epsilon_policy == "auto-max",
          "sandwich always uses --epsilon-policy auto-max");
  const std::size_t n = samples_or(cfg, 1'000'000);
  require(n >= 100, "--samples must be >= 100");
  const BoundaryMethod method = parse_boundary_method(cfg.method);
  const auto g = build_generator(cfg);
  const auto r = sandwich_check(g, n, cfg.seed, method);
  Json j;
  j["schema"] = "1";
  j["metric"] = "sandwich";
  j["seed"] = cfg.seed;
  j["params"] = generator_params(g);
  j["params"]["samples"] = n;
  j["params"]["method"] = to_string(method);
  j["result"] = sandwich_to_json(r);
  const fs::path path = output_path(cfg, "sandwich.json");
  write_json(path, j);
  out << "sandwich lower=" << format_number(r.lower) << " alpha=" << format_number(r.alpha_hat.value)
      << " upper=" << format_number(r.upper) << " holds=" << (r.holds ? "true" : "false") << " -> "
      << path.string() << "\n";
  return kExitOk;
}

int cmd_probes(const RunConfig& cfg, std::ostream& out) {
  validate_generator_flags(cfg);
  const std::size_t n = samples_or(cfg, 10'000);
  require(n >= 2, "--samples must be >= 2");
  require(cfg.pairs >= 1, "--pairs must be >= 1");
  require(cfg.interp >= 1, "--interp must be >= 1");
  const auto g = build_generator(cfg);
  const auto gen = as_latent_map(g);
  const auto lab = nearest_mode_labeler(g.modes());
  const auto batch = generate_batch(g, n, cfg.seed);
  const auto precision = precision_support(batch.samples, g.modes(), 0.0);
  const auto data = label_latents(gen, lab, g.latent_dim(), g.modes().count(), n, derive_seed(cfg.seed, 1));
  const auto lr = train_logreg(data, 0.8, 0.5, 500, derive_seed(cfg.seed, 2));
  const auto cv = convexity_probe(gen, lab, g.latent_dim(), cfg.pairs, cfg.interp, derive_seed(cfg.seed, 3));
  Json j;
  j["schema"] = "1";
  j["metric"] = "probes";
  j["seed"] = cfg.seed;
  j["params"] = generator_params(g);
  j["params"]["samples"] = n;
  j["params"]["pairs"] = cfg.pairs;
  j["params"]["interp"] = cfg.interp;
  j["precision"] = precision.value;
  j["logreg_accuracy"] = lr.test_accuracy;
  j["convex_accuracy"] = cv.accuracy;
  j["logreg_final_loss"] = lr.model.final_loss;
  const fs::path path = output_path(cfg, "probes.json");
  write_json(path, j);
  out << "probes precision=" << format_number(precision.value) << " logreg_accuracy=" << format_number(lr.test_accuracy)
      << " convex_accuracy=" << format_number(cv.accuracy) << " -> " << path.string() << "\n";
  return kExitOk;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out) {
  require(cfg.m >= 2, "--m must be >= 2");
  require(cfg.dim >= 2, "--dim must be >= 2");
  require(cfg.epsilon.has_value(), "--epsilon is required");
  require(*cfg.epsilon > 0.0 && std::isfinite(*cfg.epsilon), "--epsilon must be positive");
  require(cfg.step > 0.0, "--step must be positive");
  require(cfg.restarts >= 1, "--restarts must be >= 1");
  OptimizeOptions opt;
  opt.n_samples = samples_or(cfg, 20'000);
  require(opt.n_samples >= 100, "--samples must be >= 100");
  opt.iters = cfg.iters;
  opt.step = cfg.step;
  opt.restarts = cfg.restarts;
  opt.penalty = cfg.penalty;
  const auto r = optimize_directions(cfg.m, cfg.dim, *cfg.epsilon, cfg.seed, opt);
  const fs::path path = output_path(cfg, "optimized_frame.json");
  write_frame(path, r.frame);
  Json j;
  j["schema"] = "1";
  j["metric"] = "partition_objective";
  j["value"] = r.objective;
  j["seed"] = cfg.seed;
  j["params"] = {{"m", cfg.m}, {"dim", cfg.dim}, {"epsilon", *cfg.epsilon}, {"samples", opt.n_samples},
                 {"iters", opt.iters}, {"step", opt.step}, {"restarts", opt.restarts}, {"penalty", opt.penalty}};
  j["restart_objectives"] = r.restart_objectives;
  j["frame"] = frame_to_json(r.frame);
  fs::path report = path;
  report.replace_extension(".report.json");
  write_json(report, j);
  out << "optimize m=" << cfg.m << " dim=" << cfg.dim << " objective=" << format_number(r.objective) << " -> "
      << path.string() << "\n";
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  require(cfg.m >= 2, "--m must be >= 2");
  require(!cfg.dims.empty(), "--dims is required");
  for (std::size_t d : cfg.dims) require(d >= 2, "--dims entries must be >= 2");
  for (std::size_t t = 1; t < cfg.dims.size(); ++t)
    require(cfg.dims[t] > cfg.dims[t - 1], "--dims must be increasing");
  require(cfg.sweep_mult > 1.0 / std::sqrt(double(cfg.m)), "--L-rule multiplier too small for L > D");
  SweepOptions opt;
  opt.ambient_dim = cfg.ambient_dim;
  opt.lipschitz_multiplier = cfg.sweep_mult;
  opt.n_samples = samples_or(cfg, 100'000);
  opt.optimizer.iters = cfg.iters;
  opt.optimizer.restarts = cfg.restarts;
  opt.optimizer.step = cfg.step;
  opt.optimizer.penalty = cfg.penalty;
  const auto rows = dimension_sweep(cfg.m, cfg.dims, cfg.seed, opt);
  const fs::path path = output_path(cfg, "sweep.csv");
  write_text(path, sweep_to_csv(rows));
  Json j;
  j["schema"] = "1";
  j["metric"] = "dimension_sweep";
  j["seed"] = cfg.seed;
  j["params"] = {{"m", cfg.m}, {"L_rule_multiplier", cfg.sweep_mult}, {"samples", opt.n_samples},
                 {"iters", opt.optimizer.iters}, {"restarts", opt.optimizer.restarts}};
  j["rows"] = Json::array();
  for (const auto& r : rows)
    j["rows"].push_back({{"d", r.d}, {"epsilon_max", r.epsilon_max}, {"alpha_hat", estimate_to_json(r.alpha_hat)},
                         {"lower_bound", r.lower_bound}, {"lower_valid", r.lower_valid},
                         {"upper_bound", r.upper_bound}, {"optimized", r.optimized}});
  fs::path report = path;
  report.replace_extension(".json");
  write_json(report, j);
  out << "sweep m=" << cfg.m;
  for (const auto& r : rows) out << " d" << r.d << '=' << format_number(r.alpha_hat.value);
  out << " -> " << path.string() << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Voronoi latent partitions, blending generators, precision bounds and sample metrics", "latgeo"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto seed = [&](CLI::App* s) { s->add_option("--seed", cfg.seed, "Random seed")->capture_default_str(); };
  auto output = [&](CLI::App* s) { s->add_option("--out", cfg.out, "Output path (default: $LATGEO_OUT_DIR or .)"); };
  auto samples = [&](CLI::App* s) { s->add_option("--samples", cfg.samples, "Sample count"); };
  auto modes = [&](CLI::App* s) {
    s->add_option("--m", cfg.m, "Number of modes (inline seeded Gaussian modes)");
    s->add_option("--ambient-dim", cfg.ambient_dim, "Dimension of inline modes")->capture_default_str();
    s->add_option("--modes", cfg.modes_path, "Mode centres, CSV or JSON");
  };
  auto frame = [&](CLI::App* s) {
    s->add_option("--dim", cfg.dim, "Latent dimension")->capture_default_str();
    s->add_option("--side", cfg.side, "Regular simplex side")->capture_default_str();
    s->add_option("--frame", cfg.frame_path, "Frame JSON (e.g. from optimize)");
  };
  auto budget = [&](CLI::App* s) {
    s->add_option("--L", cfg.lipschitz, "Lipschitz budget (default 4 D sqrt(m))");
    s->add_option("--L-mult", cfg.lipschitz_mult, "Lipschitz budget as a multiple of the mode diameter");
  };
  auto eps_policy = [&](CLI::App* s) {
    s->add_option("--epsilon", cfg.epsilon, "Extension radius (with --epsilon-policy explicit)");
    s->add_option("--epsilon-policy", cfg.epsilon_policy, "explicit | auto-min | auto-max (default)")
        ->check(CLI::IsMember({"explicit", "auto-min", "auto-max"}));
  };
  auto method = [&](CLI::App* s) {
    s->add_option("--method", cfg.method, "margin | exact")->check(CLI::IsMember({"margin", "exact"}))->capture_default_str();
  };

  auto* simplex = app.add_subcommand("simplex", "Write a regular simplex frame");
  simplex->add_option("--m", cfg.m, "Number of cells")->required();
  simplex->add_option("--dim", cfg.dim, "Latent dimension")->required();
  simplex->add_option("--side", cfg.side, "Side length")->capture_default_str();
  output(simplex);

  auto* boundary = app.add_subcommand("boundary", "Gaussian measure of the epsilon-boundary");
  boundary->add_option("--m", cfg.m, "Number of cells");
  frame(boundary);
  boundary->add_option("--epsilon", cfg.epsilon, "Boundary radius")->required();
  samples(boundary), seed(boundary), method(boundary), output(boundary);

  auto* generate = app.add_subcommand("generate", "Sample the blending generator");
  modes(generate), frame(generate), budget(generate), eps_policy(generate), samples(generate), seed(generate), output(generate);

  auto* metrics = app.add_subcommand("metrics", "Density, coverage, equilibrium and support metrics");
  metrics->add_option("--real", cfg.real_path, "Real samples, CSV or JSON")->required();
  metrics->add_option("--fake", cfg.fake_path, "Fake samples, CSV or JSON")->required();
  metrics->add_option("--modes", cfg.modes_path, "Mode centres for support precision and recall");
  metrics->add_option("--k", cfg.k, "Neighbourhood size")->capture_default_str();
  metrics->add_option("--tol", cfg.tol, "Support tolerance (0: 1e-9 (1 + D))")->capture_default_str();
  output(metrics);

  auto* bounds = app.add_subcommand("bounds", "Closed-form precision bounds");
  modes(bounds), budget(bounds);
  bounds->add_option("--dim", cfg.dim, "Latent dimension")->capture_default_str();
  bounds->add_option("--eps-min", cfg.eps_min, "Use this eps_min instead of modes and L");
  bounds->add_option("--eps-max", cfg.eps_max, "Use this eps_max instead of modes and L");
  bounds->add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  seed(bounds), output(bounds);

  auto* sandwich = app.add_subcommand("sandwich", "Bracket the generator's precision by boundary measures");
  modes(sandwich), frame(sandwich), budget(sandwich), samples(sandwich), seed(sandwich), method(sandwich), output(sandwich);
  sandwich->add_option("--epsilon-policy", cfg.epsilon_policy, "Must be auto-max");

  auto* probes = app.add_subcommand("probes", "Linear separability and convexity probes");
  modes(probes), frame(probes), budget(probes), eps_policy(probes), samples(probes), seed(probes), output(probes);
  probes->add_option("--pairs", cfg.pairs, "Interpolation pairs")->capture_default_str();
  probes->add_option("--interp", cfg.interp, "Interior points per pair")->capture_default_str();

  auto* optimize = app.add_subcommand("optimize", "Search m unit directions for a small boundary");
  optimize->add_option("--m", cfg.m, "Number of cells")->required();
  optimize->add_option("--dim", cfg.dim, "Latent dimension")->required();
  optimize->add_option("--epsilon", cfg.epsilon, "Boundary radius")->required();
  optimize->add_option("--iters", cfg.iters, "Steps per restart")->capture_default_str();
  optimize->add_option("--step", cfg.step, "Initial step")->capture_default_str();
  optimize->add_option("--restarts", cfg.restarts, "Random restarts")->capture_default_str();
  optimize->add_option("--penalty", cfg.penalty, "Cell balance penalty")->capture_default_str();
  samples(optimize), seed(optimize), output(optimize);

  auto* sweep = app.add_subcommand("sweep", "Precision of the optimal generator across latent dimensions");
  sweep->add_option("--m", cfg.m, "Number of modes")->required();
  sweep->add_option("--dims", cfg.dims, "Latent dimensions, increasing")->delimiter(',')->required();
  sweep->add_option("--L-rule", cfg.sweep_mult, "L = value * D sqrt(m), so eps_max = 1 / value")->capture_default_str();
  sweep->add_option("--ambient-dim", cfg.ambient_dim, "Dimension of the seeded modes")->capture_default_str();
  sweep->add_option("--iters", cfg.iters, "Optimizer steps per restart")->capture_default_str();
  sweep->add_option("--restarts", cfg.restarts, "Optimizer restarts")->capture_default_str();
  sweep->add_option("--step", cfg.step, "Optimizer initial step")->capture_default_str();
  sweep->add_option("--penalty", cfg.penalty, "Cell balance penalty")->capture_default_str();
  samples(sweep), seed(sweep), output(sweep);

  if (!args.empty() && !args.front().starts_with('-') && app.get_subcommand_no_throw(args.front()) == nullptr) {
    err << "error: unknown subcommand '" << args.front()
        << "' (expected simplex, boundary, generate, metrics, bounds, sandwich, probes, optimize or sweep)\n";
    return kExitConfig;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (simplex->parsed()) return cmd_simplex(cfg, out);
    if (boundary->parsed()) return cmd_boundary(cfg, out);
    if (generate->parsed()) return cmd_generate(cfg, out);
    if (metrics->parsed()) return cmd_metrics(cfg, out);
    if (bounds->parsed()) return cmd_bounds(cfg, out);
    if (sandwich->parsed()) return cmd_sandwich(cfg, out);
    if (probes->parsed()) return cmd_probes(cfg, out);
    if (optimize->parsed()) return cmd_optimize(cfg, out);
    if (sweep->parsed()) return cmd_sweep(cfg, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  err << "error: no subcommand\n";
  return kExitConfig;
}

}  // namespace latgeo::cli
