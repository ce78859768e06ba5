#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "mdw/cli.hpp"
#include "mdw/errors.hpp"

namespace mdw::cli {

namespace {

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(key, e.what());
  }
}

nlohmann::json cell_to_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<V, double>) {
          if (!std::isfinite(v)) return format_number(v);
          // same 12 significant digits as the CSV output
          return std::stod(format_number(v));
        } else {
          return v;
        }
      },
      cell);
}

std::string cell_to_text(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<V, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<V, std::int64_t>) {
          return std::to_string(v);
        } else {
          return v;
        }
      },
      cell);
}

}  // namespace

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  if (alpha) j["alpha"] = *alpha;
  if (beta) j["beta"] = *beta;
  if (!windows.empty()) {
    j["windows"] = nlohmann::json::array();
    for (const auto& w : windows) j["windows"].push_back({w.u, w.v});
  }
  j["seed"] = seed;
  j["shards"] = shards;
  j["n"] = n;
  j["gamma"] = gamma;
  j["c"] = c;
  j["reps"] = reps;
  j["confidence"] = confidence;
  j["tol"] = tol;
  j["output_format"] = output_format == OutputFormat::csv ? "csv" : "json";
  j["n_grid"] = n_grid;
  j["gamma_grid"] = gamma_grid;
  j["x_grid"] = x_grid;
  j["k_max"] = k_max;
  j["target"] = target;
  j["mc_n_max"] = mc_n_max;
  return j;
}

void apply_json(RunConfig& config, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config", "top level must be a JSON object");
  if (j.contains("alpha")) config.alpha = j.at("alpha").get<double>();
  if (j.contains("beta")) config.beta = j.at("beta").get<double>();
  if (j.contains("windows")) {
    config.windows.clear();
    try {
      for (const auto& w : j.at("windows")) {
        config.windows.push_back({w.at(0).get<double>(), w.at(1).get<double>()});
      }
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("windows", std::string("expected [[u, v], ...]: ") + e.what());
    }
  }
  read_if(j, "seed", config.seed);
  read_if(j, "shards", config.shards);
  read_if(j, "n", config.n);
  read_if(j, "gamma", config.gamma);
  read_if(j, "c", config.c);
  read_if(j, "reps", config.reps);
  read_if(j, "confidence", config.confidence);
  read_if(j, "tol", config.tol);
  read_if(j, "n_grid", config.n_grid);
  read_if(j, "gamma_grid", config.gamma_grid);
  read_if(j, "x_grid", config.x_grid);
  read_if(j, "k_max", config.k_max);
  read_if(j, "target", config.target);
  read_if(j, "mc_n_max", config.mc_n_max);
  if (j.contains("output_format")) {
    const auto f = j.at("output_format").get<std::string>();
    if (f == "csv") {
      config.output_format = OutputFormat::csv;
    } else if (f == "json") {
      config.output_format = OutputFormat::json;
    } else {
      throw ConfigError("output_format", "must be csv or json");
    }
  }
}

std::vector<ScaleWindow> parse_windows(const std::string& text) {
  std::vector<ScaleWindow> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("windows", "expected u:v, got '" + item + "'");
    try {
      out.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    } catch (const std::logic_error&) {
      throw ConfigError("windows", "cannot parse '" + item + "'");
    }
  }
  return out;
}

void validate(const RunConfig& config) {
  const bool has_params = config.alpha.has_value() || config.beta.has_value();
  if (has_params == !config.windows.empty()) {
    throw ConfigError("alpha/beta/windows", "give exactly one of (alpha, beta) or windows");
  }
  if (has_params) {
    if (!config.alpha) throw ConfigError("alpha", "missing");
    if (!config.beta) throw ConfigError("beta", "missing");
    try {
      validate_params(*config.alpha, *config.beta);
    } catch (const ParamError& e) {
      throw ConfigError("alpha/beta", e.what());
    }
  } else {
    try {
      WindowSet ws(config.windows);
    } catch (const DomainError& e) {
      throw ConfigError("windows", e.what());
    }
  }
  if (config.shards < 1) throw ConfigError("shards", "must be >= 1");
  if (config.n < 1) throw ConfigError("n", "must be >= 1");
  if (config.reps < 0) throw ConfigError("reps", "must be >= 0");
  if (!(config.c > 0.0)) throw ConfigError("c", "must be positive");
  if (!(config.gamma > 0.0 && config.gamma < 0.5)) throw ConfigError("gamma", "must lie in (0, 0.5)");
  if (!(config.confidence > 0.0 && config.confidence < 1.0)) {
    throw ConfigError("confidence", "must lie in (0, 1)");
  }
  if (!(config.tol > 0.0)) throw ConfigError("tol", "must be positive");
  if (config.k_max < 0) throw ConfigError("k_max", "must be >= 0");
  for (double n : config.n_grid) {
    if (!(n >= 1.0 && n < 9.0e18)) throw ConfigError("n_grid", "entries must lie in [1, 9e18)");
  }
  for (double g : config.gamma_grid) {
    if (!(g > 0.0 && g < 0.5)) throw ConfigError("gamma_grid", "entries must lie in (0, 0.5)");
  }
  for (double x : config.x_grid) {
    if (!(x > 0.0)) throw ConfigError("x_grid", "entries must be positive");
  }
  if (config.target != "total" && config.target != "tilde" && config.target != "boundary" &&
      config.target != "dprime") {
    throw ConfigError("target", "must be one of total, tilde, boundary, dprime");
  }
}

Params single_params(const RunConfig& config) {
  if (config.alpha && config.beta) return validate_params(*config.alpha, *config.beta);
  if (config.windows.size() == 1) return params_from_window(config.windows[0].u, config.windows[0].v);
  throw ConfigError("windows", "this command needs a single process (one window or alpha/beta)");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_to_text(row[i]);
    out << '\n';
  }
}

void write_json(const Table& table, const RunConfig& config, std::ostream& out) {
  nlohmann::json results = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size() && i < table.header.size(); ++i) {
      obj[table.header[i]] = cell_to_json(row[i]);
    }
    results.push_back(std::move(obj));
  }
  nlohmann::json doc;
  doc["config"] = config.to_json();
  doc["results"] = std::move(results);
  out << doc.dump(2) << '\n';
}

}  // namespace mdw::cli
