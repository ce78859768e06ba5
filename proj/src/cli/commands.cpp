#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "mdw/chain_sampler.hpp"
#include "mdw/cli.hpp"
#include "mdw/errors.hpp"
#include "mdw/process_paths.hpp"
#include "mdw/renewal_measure.hpp"
#include "mdw/superposition.hpp"
#include "mdw/tail_oracles.hpp"

namespace mdw::cli {

namespace {

// Paths assigned to shard s out of reps.
std::int64_t shard_share(std::int64_t reps, int shards, int s) {
  return reps / shards + (s < reps % shards ? 1 : 0);
}

// Runs body(s) for every shard on its own thread and rethrows the first failure.
void for_each_shard(int shards, const std::function<void(int)>& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(shards));
  {
    std::vector<std::jthread> workers;
    for (int s = 0; s < shards; ++s) {
      workers.emplace_back([&, s] {
        try {
          body(s);
        } catch (...) {
          errors[static_cast<std::size_t>(s)] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<Params> components_of(const RunConfig& config) {
  if (config.alpha && config.beta) return {validate_params(*config.alpha, *config.beta)};
  std::vector<Params> out;
  for (const auto& w : config.windows) out.push_back(params_from_window(w.u, w.v));
  return out;
}

WindowSet windows_of(const RunConfig& config) {
  if (!config.windows.empty()) return WindowSet(config.windows);
  return WindowSet({window_from_params(single_params(config))});
}

Cell maybe(double v, bool present) { return present ? Cell{v} : Cell{}; }

}  // namespace

Table cmd_params(const RunConfig& config) {
  Table t;
  t.header = {"component", "alpha", "beta", "u", "v", "mu0", "mean_tau", "second_moment_jump",
              "sigma", "p1"};
  const auto comps = components_of(config);
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const Params& p = comps[i];
    const ScaleWindow w = window_from_params(p);
    const ProcessStats st = sigma(p, config.tol);
    sum_sq += st.sigma * st.sigma;
    t.rows.push_back({static_cast<std::int64_t>(i), p.alpha(), p.beta(), w.u, w.v,
                      std::exp(log_mu0), st.mean_tau, st.second_moment_jump, st.sigma,
                      std::exp(log_p(p, 1, config.tol))});
  }
  if (comps.size() > 1) {
    t.rows.push_back({std::string("combined"), Cell{}, Cell{}, Cell{}, Cell{}, Cell{}, Cell{},
                      Cell{}, std::sqrt(sum_sq), Cell{}});
  }
  return t;
}

Table cmd_simulate(const RunConfig& config) {
  const Params params = single_params(config);
  Table t;
  t.header = {"shard", "s_prime", "s_tilde", "s_dprime", "s_total",
              "a1",    "b1",      "an",      "bn",       "interior"};
  std::vector<std::vector<std::vector<Cell>>> per_shard(static_cast<std::size_t>(config.shards));
  for_each_shard(config.shards, [&](int s) {
    ChainSampler sampler(params);
    RngStream rng(config.seed, static_cast<std::uint64_t>(s));
    auto& rows = per_shard[static_cast<std::size_t>(s)];
    const std::int64_t m = shard_share(config.reps, config.shards, s);
    for (std::int64_t i = 0; i < m; ++i) {
      const SumDecomposition d = decompose(generate_path(sampler, config.n, rng));
      rows.push_back({static_cast<std::int64_t>(s), d.s_prime, d.s_tilde, d.s_double_prime,
                      d.s_total, d.first.age, d.first.residual, d.last.age, d.last.residual,
                      static_cast<std::int64_t>(d.interior_renewal ? 1 : 0)});
    }
  });
  for (auto& rows : per_shard) {
    for (auto& r : rows) t.rows.push_back(std::move(r));
  }
  return t;
}

Table cmd_rates(const RunConfig& config) {
  const auto comps = components_of(config);
  const WindowSet all = windows_of(config);
  std::vector<double> n_grid = config.n_grid;
  if (n_grid.empty()) n_grid.push_back(static_cast<double>(config.n));
  std::vector<double> gamma_grid = config.gamma_grid;
  if (gamma_grid.empty()) gamma_grid.push_back(config.gamma);
  const TailTarget target = parse_tail_target(config.target);

  Table t;
  t.header = {"n",       "gamma",   "component", "kind", "log_prob",       "p_hat",
              "ci_low",  "ci_high", "rate",      "predicted_rate", "note"};
  for (double nd : n_grid) {
    const auto n = static_cast<std::int64_t>(std::llround(nd));
    for (double gamma : gamma_grid) {
      const RateQuery q{n, gamma, config.c};
      for (std::size_t i = 0; i < comps.size(); ++i) {
        const Params& p = comps[i];
        const ScaleWindow w = window_from_params(p);
        const auto comp = static_cast<std::int64_t>(i);
        Cell pred;
        std::string pred_note;
        try {
          pred = predicted_rate(WindowSet({w}), gamma, config.c);
        } catch (const DomainError&) {
          pred_note = "window_endpoint";
        }
        if (gamma > 0.0 && gamma < w.u) {
          const RateCertificate cert = case1_upper(p, q);
          t.rows.push_back({n, gamma, comp, std::string("case1_upper"), cert.log_prob, Cell{},
                            Cell{}, Cell{}, cert.rate, pred, pred_note});
        }
        if (w.u < gamma && gamma < w.v) {
          try {
            const RateCertificate cert = case2_certificate(p, q);
            t.rows.push_back({n, gamma, comp, std::string("case2_lower"), cert.log_prob, Cell{},
                              Cell{}, Cell{}, cert.rate, pred, pred_note});
          } catch (const BracketEmpty& e) {
            t.rows.push_back({n, gamma, comp, std::string("case2_lower"), Cell{}, Cell{}, Cell{},
                              Cell{}, Cell{}, pred,
                              "bracket_empty min_n=" + std::to_string(e.minimal_n())});
          }
        }
        if (config.reps > 0 && n <= config.mc_n_max) {
          McPlan plan{config.reps, config.confidence, config.seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)),
                      config.shards};
          const TailEstimate est = mc_tail(p, q, target, plan);
          const bool hit = est.hits > 0;
          const double lp = hit ? std::log(est.p_hat) : neg_inf;
          t.rows.push_back({n, gamma, comp, std::string("mc"), maybe(lp, hit), est.p_hat,
                            est.ci_low, est.ci_high,
                            maybe(hit ? rate_transform(lp, n, gamma) : 0.0, hit), pred,
                            hit ? pred_note : std::string("no_hits")});
        }
      }
      Cell pred;
      std::string note;
      try {
        pred = predicted_rate(all, gamma, config.c);
      } catch (const DomainError&) {
        note = "window_endpoint";
      }
      t.rows.push_back({n, gamma, std::string("all"), std::string("gaussian_reference"), Cell{},
                        Cell{}, Cell{}, Cell{}, gaussian_reference(config.c), pred, note});
    }
  }
  return t;
}

Table cmd_autocov(const RunConfig& config) {
  const Params params = single_params(config);
  if (config.reps > 0 && config.n <= config.k_max) {
    throw ConfigError("n", "must exceed k_max for the empirical autocovariance");
  }
  const auto kk = static_cast<std::size_t>(config.k_max + 1);
  // per shard: sum and sum of squares of the per-path lag-k averages
  std::vector<Eigen::ArrayXd> sums(static_cast<std::size_t>(config.shards),
                                   Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(kk)));
  std::vector<Eigen::ArrayXd> sq = sums;
  if (config.reps > 0) {
    for_each_shard(config.shards, [&](int s) {
      ChainSampler sampler(params);
      RngStream rng(config.seed, static_cast<std::uint64_t>(s));
      const std::int64_t m = shard_share(config.reps, config.shards, s);
      for (std::int64_t i = 0; i < m; ++i) {
        const SignedPath path = generate_path(sampler, config.n, rng);
        for (std::int64_t k = 0; k <= config.k_max; ++k) {
          const Eigen::Index len = path.x.size() - k;
          const double avg = path.x.head(len).dot(path.x.tail(len)) / static_cast<double>(len);
          sums[static_cast<std::size_t>(s)](k) += avg;
          sq[static_cast<std::size_t>(s)](k) += avg * avg;
        }
      }
    });
  }
  Eigen::ArrayXd total = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(kk));
  Eigen::ArrayXd total_sq = total;
  for (int s = 0; s < config.shards; ++s) {
    total += sums[static_cast<std::size_t>(s)];
    total_sq += sq[static_cast<std::size_t>(s)];
  }

  Table t;
  t.header = {"k", "r_exact", "r_error_bound", "dominance_bound", "r_empirical", "r_se"};
  const auto reps = static_cast<double>(config.reps);
  for (std::int64_t k = 0; k <= config.k_max; ++k) {
    const SeriesValue r = autocovariance_exact(params, k, config.tol);
    const double bound = k == 0 ? 1.0 : autocovariance_dominance_bound(params, k);
    Cell emp, se;
    if (config.reps > 0) {
      const double mean = total(k) / reps;
      emp = mean;
      if (config.reps > 1) {
        const double var = std::max(0.0, (total_sq(k) - reps * mean * mean) / (reps - 1.0));
        se = std::sqrt(var / reps);
      }
    }
    t.rows.push_back({k, r.value, r.error_bound, bound, emp, se});
  }
  return t;
}

Table cmd_boundary(const RunConfig& config) {
  const Params params = single_params(config);
  if (config.x_grid.empty()) throw ConfigError("x_grid", "at least one threshold is required");
  std::vector<TailEstimate> mc;
  if (config.reps > 0) {
    McPlan plan{config.reps, config.confidence, config.seed, config.shards};
    mc = mc_tail_grid(params, config.n, config.x_grid, TailTarget::double_prime, plan);
  }
  Table t;
  t.header = {"x", "log_prob_exact", "p_exact", "hits", "reps", "p_hat", "ci_low", "ci_high"};
  for (std::size_t i = 0; i < config.x_grid.size(); ++i) {
    const double x = config.x_grid[i];
    const double lp = boundary_tail_exact(params, config.n, x);
    std::vector<Cell> row{x, lp, std::exp(lp)};
    if (mc.empty()) {
      row.insert(row.end(), {Cell{}, Cell{}, Cell{}, Cell{}, Cell{}});
    } else {
      const TailEstimate& e = mc[i];
      row.insert(row.end(), {e.hits, e.reps, e.p_hat, e.ci_low, e.ci_high});
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

struct Flags {
  std::string config_path;
  std::optional<double> alpha, beta;
  std::optional<std::string> windows;
  std::optional<std::uint64_t> seed;
  std::optional<int> shards;
  std::optional<std::int64_t> n, reps, k_max, mc_n_max;
  std::optional<double> gamma, c, confidence, tol;
  std::optional<std::string> output_format, target;
  std::vector<double> n_grid, gamma_grid, x_grid;
};

void add_flags(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config_path, "JSON config file; flags override its keys");
  app.add_option("--alpha", f.alpha, "Renewal tail exponent");
  app.add_option("--beta", f.beta, "Reward damping exponent");
  app.add_option("--windows", f.windows, "Scale windows as u:v[,u:v...]");
  app.add_option("--seed", f.seed, "Master seed (default from MDW_SEED, else 1)");
  app.add_option("--shards", f.shards, "Independent worker streams");
  app.add_option("--n", f.n, "Path length");
  app.add_option("--reps", f.reps, "Monte Carlo paths");
  app.add_option("--gamma", f.gamma, "Scale exponent");
  app.add_option("--c", f.c, "Threshold constant");
  app.add_option("--confidence", f.confidence, "Confidence level of the intervals");
  app.add_option("--tol", f.tol, "Absolute tolerance of the series oracles");
  app.add_option("--format", f.output_format, "csv or json");
  app.add_option("--n-grid", f.n_grid, "Horizons for rates")->delimiter(',');
  app.add_option("--gamma-grid", f.gamma_grid, "Scale exponents for rates")->delimiter(',');
  app.add_option("--x-grid", f.x_grid, "Thresholds for boundary")->delimiter(',');
  app.add_option("--k-max", f.k_max, "Largest autocovariance lag");
  app.add_option("--target", f.target, "MC target: total, tilde, boundary, dprime");
  app.add_option("--mc-n-max", f.mc_n_max, "Largest n simulated by rates");
}

RunConfig resolve(const Flags& f) {
  RunConfig config;
  if (const char* env = std::getenv(kSeedEnv)) {
    try {
      std::size_t used = 0;
      config.seed = std::stoull(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
    } catch (const std::logic_error&) {
      throw ConfigError("seed", std::string(kSeedEnv) + " is not an unsigned integer");
    }
  }
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw ConfigError("config", "cannot open " + f.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config", e.what());
    }
    apply_json(config, j);
  }
  if (f.alpha) config.alpha = f.alpha;
  if (f.beta) config.beta = f.beta;
  if (f.windows) config.windows = parse_windows(*f.windows);
  if (f.seed) config.seed = *f.seed;
  if (f.shards) config.shards = *f.shards;
  if (f.n) config.n = *f.n;
  if (f.reps) config.reps = *f.reps;
  if (f.gamma) config.gamma = *f.gamma;
  if (f.c) config.c = *f.c;
  if (f.confidence) config.confidence = *f.confidence;
  if (f.tol) config.tol = *f.tol;
  if (f.k_max) config.k_max = *f.k_max;
  if (f.mc_n_max) config.mc_n_max = *f.mc_n_max;
  if (f.target) config.target = *f.target;
  if (!f.n_grid.empty()) config.n_grid = f.n_grid;
  if (!f.gamma_grid.empty()) config.gamma_grid = f.gamma_grid;
  if (!f.x_grid.empty()) config.x_grid = f.x_grid;
  if (f.output_format) {
    if (*f.output_format == "csv") {
      config.output_format = OutputFormat::csv;
    } else if (*f.output_format == "json") {
      config.output_format = OutputFormat::json;
    } else {
      throw ConfigError("output_format", "must be csv or json");
    }
  }
  validate(config);
  return config;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Renewal-reward process with anomalous moderate deviations", "mdw_cli"};
  app.require_subcommand(1);
  Flags flags;
  using Command = Table (*)(const RunConfig&);
  const std::vector<std::pair<std::string, std::pair<std::string, Command>>> commands = {
      {"params", {"Parameter maps and process constants", cmd_params}},
      {"simulate", {"Per-path sum decomposition", cmd_simulate}},
      {"rates", {"Certificate and Monte Carlo rate curves", cmd_rates}},
      {"autocov", {"Exact and empirical autocovariance", cmd_autocov}},
      {"boundary", {"Exact and Monte Carlo boundary tail", cmd_boundary}},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, entry] : commands) {
    subs.push_back(app.add_subcommand(name, entry.first));
    add_flags(*subs.back(), flags);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitInvalidConfig;
  }

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      const RunConfig config = resolve(flags);
      const Table table = commands[i].second.second(config);
      std::ostringstream buf;
      if (config.output_format == OutputFormat::csv) {
        write_csv(table, buf);
      } else {
        write_json(table, config, buf);
      }
      out << buf.str();
    }
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const ParamError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const DomainError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const UnreachablePrecision& e) {
    err << "unreachable precision: " << e.what() << '\n';
    return kExitUnreachablePrecision;
  }
  return kExitOk;
}

}  // namespace mdw::cli
