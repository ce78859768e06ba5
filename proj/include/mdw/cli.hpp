#ifndef MDW_CLI_HPP
#define MDW_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mdw/params.hpp"

namespace mdw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitUnreachablePrecision = 3;

/// Environment variable consulted for the default seed; --seed wins over it.
inline constexpr const char* kSeedEnv = "MDW_SEED";

enum class OutputFormat { csv, json };

/// Invalid configuration; field() names the offending setting.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  std::optional<double> alpha;
  std::optional<double> beta;
  std::vector<ScaleWindow> windows;
  std::uint64_t seed = 1;
  int shards = 1;
  std::int64_t n = 1000;
  double gamma = 0.32;
  double c = 1.0;
  std::int64_t reps = 1000;
  double confidence = 0.95;
  double tol = 1e-10;
  OutputFormat output_format = OutputFormat::csv;
  std::vector<double> n_grid;
  std::vector<double> gamma_grid;
  std::vector<double> x_grid;
  std::int64_t k_max = 20;
  std::string target = "total";
  std::int64_t mc_n_max = 10000;

  nlohmann::json to_json() const;
};

/// Overlays the keys present in j (same names as the RunConfig fields).
void apply_json(RunConfig& config, const nlohmann::json& j);

/// Parses "u:v,u:v,...".
std::vector<ScaleWindow> parse_windows(const std::string& text);

/// Checks domains and that exactly one of (alpha, beta) or windows is given.
void validate(const RunConfig& config);

/// Single process parameters; throws ConfigError when the config names several windows.
Params single_params(const RunConfig& config);

/// A rendered result table: CSV with header or JSON {config, results}.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

std::string format_number(double v);
void write_csv(const Table& table, std::ostream& out);
void write_json(const Table& table, const RunConfig& config, std::ostream& out);

Table cmd_params(const RunConfig& config);
Table cmd_simulate(const RunConfig& config);
Table cmd_rates(const RunConfig& config);
Table cmd_autocov(const RunConfig& config);
Table cmd_boundary(const RunConfig& config);

/// Entry point; args excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mdw::cli

#endif  // MDW_CLI_HPP
