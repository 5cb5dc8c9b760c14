#include "riopt/run_config.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "riopt/karcher.hpp"
#include "riopt/riod.hpp"
#include "riopt/saddles.hpp"
#include "riopt/streams.hpp"
#include "riopt/trace.hpp"

namespace riopt {

namespace {

[[noreturn]] void config_error(const std::filesystem::path& path, int line, const std::string& msg) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& tok, const std::filesystem::path& path, int line) {
  double v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    config_error(path, line, "expected a number, got '" + tok + "'");
  }
  return v;
}

long parse_long(const std::string& tok, const std::filesystem::path& path, int line) {
  long v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    config_error(path, line, "expected an integer, got '" + tok + "'");
  }
  return v;
}

bool parse_bool(const std::string& tok, const std::filesystem::path& path, int line) {
  if (tok == "true" || tok == "1") return true;
  if (tok == "false" || tok == "0") return false;
  config_error(path, line, "expected true/false, got '" + tok + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig parse_config_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config file not found: " + path.string());

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      config_error(path, line_no, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      config_error(path, line_no, "expected 'key = value'");
    }

    if (key == "subcommand") {
      base.subcommand = value;
    } else if (key == "manifold") {
      base.manifold = value;
    } else if (key == "n") {
      base.n = static_cast<int>(parse_long(value, path, line_no));
    } else if (key == "iters") {
      base.iters = static_cast<int>(parse_long(value, path, line_no));
    } else if (key == "epsilon") {
      base.epsilon = parse_double(value, path, line_no);
    } else if (key == "eta") {
      base.eta = parse_double(value, path, line_no);
    } else if (key == "lambda") {
      base.lambda = parse_double(value, path, line_no);
    } else if (key == "seed") {
      base.seed = static_cast<std::uint64_t>(parse_long(value, path, line_no));
    } else if (key == "out") {
      base.out = value;
    } else if (key == "gap_cadence") {
      base.gap_cadence = static_cast<int>(parse_long(value, path, line_no));
    } else if (key == "subsolver") {
      base.subsolver = value;
    } else if (key == "inner_steps") {
      base.inner_steps = static_cast<int>(parse_long(value, path, line_no));
    } else if (key == "paper_scale") {
      base.paper_scale = parse_bool(value, path, line_no);
    } else if (key == "mu") {
      base.mu = parse_double(value, path, line_no);
    } else if (key == "constrained") {
      base.constrained = parse_bool(value, path, line_no);
    } else if (key == "rbar") {
      base.rbar = parse_double(value, path, line_no);
    } else {
      config_error(path, line_no, "unknown key '" + key + "'");
    }
  }
  return base;
}

void emit_config(const RunConfig& cfg, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config to " + path.string());
  out << "subcommand = " << cfg.subcommand << '\n';
  out << "manifold = " << cfg.manifold << '\n';
  out << "n = " << cfg.n << '\n';
  out << "iters = " << cfg.iters << '\n';
  if (cfg.epsilon) out << "epsilon = " << format_number(*cfg.epsilon) << '\n';
  if (cfg.eta) out << "eta = " << format_number(*cfg.eta) << '\n';
  if (cfg.lambda) out << "lambda = " << format_number(*cfg.lambda) << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "out = " << cfg.out << '\n';
  out << "gap_cadence = " << cfg.gap_cadence << '\n';
  out << "subsolver = " << cfg.subsolver << '\n';
  out << "inner_steps = " << cfg.inner_steps << '\n';
  out << "paper_scale = " << (cfg.paper_scale ? "true" : "false") << '\n';
  out << "mu = " << format_number(cfg.mu) << '\n';
  out << "constrained = " << (cfg.constrained ? "true" : "false") << '\n';
  out << "rbar = " << format_number(cfg.rbar) << '\n';
}

namespace {

struct SuiteCheck {
  std::string name;
  int passed = 0;
  int failed = 0;
};

int run_geomtest(const RunConfig& cfg) {
  const std::vector<std::string> specs{"euclidean:5", "hyperbolic:10", "spd:4"};
  const int trials = std::max(50, std::min(cfg.iters, 2000));
  bool all_ok = true;

  for (const std::string& spec : specs) {
    const ManifoldPtr m = make_manifold(spec);
    Rng rng = Rng(cfg.seed).split("geomtest-" + spec);
    std::vector<SuiteCheck> checks{{"exp_log_roundtrip"}, {"transport_isometry"},
                                   {"cosine_law"},        {"log_transport_bound"},
                                   {"projection"},        {"zeta_monotone"}};
    const Scalar kmin = m->kappa_min();

    for (int i = 0; i < trials; ++i) {
      const Point x = m->random_point(rng);
      const Point y = m->exp(x, rng.uniform(0, 2.0) * m->random_unit_tangent(x, rng));
      const Point p = m->exp(x, rng.uniform(0, 2.0) * m->random_unit_tangent(x, rng));

      const Scalar rt = m->dist(m->exp(x, m->log(x, y)), y);
      (rt <= 1e-8 ? checks[0].passed : checks[0].failed)++;

      const TangentVector u = m->random_tangent(x, rng);
      const TangentVector v = m->random_tangent(x, rng);
      const Scalar before = m->inner(u, v);
      const Scalar after = m->inner(m->transport(y, u), m->transport(y, v));
      const Scalar iso_tol = 1e-8 * (1 + m->norm(u) * m->norm(v));
      (std::abs(before - after) <= iso_tol ? checks[1].passed : checks[1].failed)++;

      const Scalar diam = std::max({m->dist(x, y), m->dist(x, p), m->dist(y, p)});
      const Scalar zd = zeta(diam, kmin);
      const Scalar lhs = m->inner(m->log(x, y), m->log(x, p));
      const Scalar dxy = m->dist(x, y), dpx = m->dist(p, x), dpy = m->dist(p, y);
      const Scalar low = 0.5 * dxy * dxy + 0.5 * dpx * dpx - 0.5 * dpy * dpy;
      const Scalar high = 0.5 * zd * dxy * dxy + 0.5 * dpx * dpx - 0.5 * dpy * dpy;
      const Scalar slack = 1e-8 * (1 + dxy * dxy + dpx * dpx + dpy * dpy);
      (lhs >= low - slack && lhs <= high + slack ? checks[2].passed : checks[2].failed)++;

      const Scalar dbar = std::max(dpx, dpy);
      const Vec moved = m->transport(x, m->log(y, p)).coords;
      const Scalar lt = m->norm({x, (moved - m->log(x, p).coords).eval()});
      (lt <= zeta(dbar, kmin) * dxy + 1e-8 ? checks[3].passed : checks[3].failed)++;

      const GeodesicBall ball(m, x, 1.0);
      const Point pr = ball.project(p);
      const Point pr2 = ball.project(pr);
      const bool idem = m->dist(pr, pr2) <= 1e-10;
      const Point q2 = m->random_point(rng);
      const bool nonexp = m->dist(ball.project(p), ball.project(q2)) <= m->dist(p, q2) + 1e-9;
      (idem && nonexp ? checks[4].passed : checks[4].failed)++;

      const Scalar r1 = rng.uniform(0, 5), r2 = r1 + rng.uniform(0, 5);
      const bool mono = zeta(r2, kmin) >= zeta(r1, kmin) - 1e-12 &&
                        zeta(r1, kmin) >= 1.0 - 1e-12;
      (mono ? checks[5].passed : checks[5].failed)++;
    }

    for (const SuiteCheck& c : checks) {
      std::cout << "geomtest " << spec << " " << c.name << ": " << c.passed << "/" << trials
                << " passed\n";
      if (c.failed > 0) all_ok = false;
    }
  }
  std::cout << (all_ok ? "geomtest: all invariants hold" : "geomtest: FAILURES detected")
            << std::endl;
  return all_ok ? 0 : 1;
}

ManifoldPtr manifold_for(const RunConfig& cfg, int* n_out) {
  std::string spec = cfg.manifold;
  int n = cfg.n;
  if (cfg.paper_scale) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    if (kind == "hyperbolic") spec = "hyperbolic:5000";
    if (kind == "spd") spec = "spd:100";
    n = 50;
  }
  if (n_out) *n_out = n;
  return make_manifold(spec);
}

int run_online(const RunConfig& cfg) {
  const ManifoldPtr m = manifold_for(cfg, nullptr);
  Rng rng(cfg.seed);
  Rng domain_rng = rng.split("domain");
  const Point center = m->random_point(domain_rng);
  auto ball = std::make_shared<GeodesicBall>(m, center, 1.0);

  const SyntheticStream synth =
      drifting_quadratic_stream(m, ball, cfg.iters, 0.05, rng);

  RiodConfig rc;
  rc.eta = cfg.eta.value_or(0.1);
  rc.set = ball;
  rc.kappa_min = m->kappa_min();
  rc.smoothness = synth.smoothness;
  rc.horizon = cfg.iters;
  rc.method = parse_prox_method(cfg.subsolver);
  rc.x1 = center;

  const auto start = std::chrono::steady_clock::now();
  const RegretRecord record = riod_run(synth.stream, HintPolicy::previous_loss(), rc);

  // best fixed comparator in hindsight
  std::vector<ObjectiveOracle> losses;
  losses.reserve(cfg.iters);
  for (int t = 1; t <= cfg.iters; ++t) losses.push_back(synth.stream.at(t));
  const ObjectiveOracle total = sum_oracles(std::move(losses));
  const Point u = prgd(*m, total, *ball, center, StoppingRule::certificate(1e-10, 200000)).first;

  const Scalar reg = regret(record, synth.stream, u, *ball);
  const Scalar bound = regret_bound(record, rc);
  const double wall =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  const std::filesystem::path outdir(cfg.out);
  write_riod_trace(outdir / "online_trace.csv", record, synth.stream, u);
  std::vector<double> ts, cum;
  Scalar acc = 0;
  for (int t = 1; t <= record.rounds(); ++t) {
    acc += record.loss_values[t - 1] - synth.stream.at(t).value(u);
    ts.push_back(t);
    cum.push_back(acc);
  }
  write_svg_line_plot(outdir / "online_regret.svg", ts, cum,
                      "online regret on " + m->name(), "round", "cumulative regret", false);

  long calls = 0;
  for (const long c : record.gradient_calls) calls += c;
  std::cout << "online " << m->name() << " T=" << cfg.iters << " eta=" << rc.eta
            << " regret=" << format_number(reg) << " bound=" << format_number(bound)
            << " gradient_calls=" << calls << " wall_ms=" << format_number(wall) << std::endl;
  return reg <= bound + 1e-6 ? 0 : 1;
}

TestSaddle synthetic_saddle(const RunConfig& cfg, const ManifoldPtr& m, const Rng& rng) {
  const std::string kind = m->name().substr(0, m->name().find(':'));
  const int dim = static_cast<int>(m->intrinsic_dim());
  if (kind == "euclidean") {
    if (cfg.mu > 0) {
      return euclidean_quadratic_saddle(dim, cfg.mu, 2 * cfg.mu, 4.0, rng);
    }
    return euclidean_bilinear_saddle(dim, 2.0, rng);
  }
  if (kind == "hyperbolic" && cfg.mu <= 0 && cfg.constrained) {
    return hyperbolic_busemann_saddle(dim, 2.0, rng);
  }
  return separable_distance_saddle(m, 1.0, cfg.constrained, 2.0, rng);
}

int run_minmax(const RunConfig& cfg) {
  const ManifoldPtr m = manifold_for(cfg, nullptr);
  Rng rng(cfg.seed);
  const TestSaddle saddle = synthetic_saddle(cfg, m, rng);

  MinMaxConfig mm = config_for(saddle);
  mm.mu = cfg.mu > 0 ? std::min(cfg.mu, saddle.mu) : 0;
  mm.method = parse_prox_method(cfg.subsolver);
  if (!cfg.constrained && mm.method == ProxMethod::prgd) mm.method = ProxMethod::crgd;
  mm.gap_cadence = cfg.gap_cadence;
  if (cfg.epsilon) {
    mm.eps_target = cfg.epsilon;
  } else {
    mm.rounds = cfg.iters;
    mm.schedule_eps = 8 * mm.smoothness * saddle.initial_distance * saddle.initial_distance /
                      std::max(1, cfg.iters);
  }
  if (cfg.eta) mm.eta_override = cfg.eta;

  const auto start = std::chrono::steady_clock::now();
  const RiodaResult res = rioda_run(saddle.oracle, mm);
  const double wall =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  const std::filesystem::path outdir(cfg.out);
  write_rioda_trace(outdir / "minmax_trace.csv", res.trace);

  std::vector<double> ts, gaps;
  for (const RiodaRound& r : res.trace.rounds) {
    if (r.duality_gap && *r.duality_gap > 0) {
      ts.push_back(r.t);
      gaps.push_back(*r.duality_gap);
    }
  }
  write_svg_line_plot(outdir / "minmax_gap.svg", ts, gaps, "duality gap on " + m->name(), "round",
                      "duality gap", true);

  const Scalar final_gap = gaps.empty() ? std::numeric_limits<Scalar>::quiet_NaN() : gaps.back();
  const Scalar dist_saddle = m->dist(res.x_out, saddle.xstar) + m->dist(res.y_out, saddle.ystar);
  std::cout << "minmax " << m->name() << " rounds=" << res.trace.rounds.size()
            << " final_gap=" << format_number(final_gap)
            << " dist_to_saddle=" << format_number(dist_saddle)
            << " gradient_calls=" << res.trace.total_gradient_calls
            << " wall_ms=" << format_number(wall) << std::endl;
  return 0;
}

int run_karcher(const RunConfig& cfg) {
  int n = cfg.n;
  const ManifoldPtr m = manifold_for(cfg, &n);

  const KarcherInstance inst = generate_karcher_instance(m, n, cfg.rbar, cfg.seed);
  const std::filesystem::path outdir(cfg.out);
  save_karcher_instance(inst, outdir / "instance.txt");

  ExperimentConfig ec;
  ec.iterations = cfg.iters;
  ec.inner_steps = cfg.inner_steps;
  ec.gap_cadence = cfg.gap_cadence;
  if (cfg.lambda) ec.lambda = cfg.lambda;
  if (cfg.eta) ec.eta = cfg.eta;
  if (ec.lambda && !ec.eta) ec.eta = ec.eta_grid.front();
  if (ec.eta && !ec.lambda) ec.lambda = ec.lambda_grid.front();

  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult result = run_experiment(inst, ec, outdir);
  const double wall =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  const ExperimentRun& best = result.runs[result.best_index];
  std::cout << "karcher " << m->name() << " n=" << n << " iters=" << cfg.iters << " best lambda="
            << format_number(best.lambda) << " eta=" << format_number(best.eta)
            << " initial_gap=" << format_number(best.initial_gap)
            << " final_gap=" << format_number(best.final_gap)
            << " gradient_calls=" << best.gradient_calls << " wall_ms=" << format_number(wall)
            << std::endl;
  return 0;
}

}  // namespace

int run(const RunConfig& cfg) {
  try {
    if (cfg.subcommand == "geomtest") return run_geomtest(cfg);
    if (cfg.subcommand == "online") return run_online(cfg);
    if (cfg.subcommand == "minmax") return run_minmax(cfg);
    if (cfg.subcommand == "karcher") return run_karcher(cfg);
    std::cerr << "unknown subcommand '" << cfg.subcommand << "'" << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}

}  // namespace riopt
