#ifndef PLAB_CLI_CONFIG_HPP
#define PLAB_CLI_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace cli {

/// Raised for any malformed, incomplete, or contradictory configuration;
/// messages name the offending key path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message)
      : std::runtime_error("config error: " + message) {}
};

struct GeneratorSpec {
  std::string kind;  // path | star | grid | random
  std::size_t vertices = 0;
  std::size_t leaves = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double edge_prob = 0.0;
  std::uint64_t seed = 0;
  bool has_seed = false;
};

struct GraphSpec {
  bool from_file = false;
  std::string file;
  GeneratorSpec generator;
};

struct DomainSpec {
  bool all_but_boundary = false;
  std::vector<std::string> interior;
};

struct SigmaSpec {
  bool is_constant = true;
  double constant = 0.0;
  std::string expression;  // over (x, t); x is the vertex index
};

enum class ReactionKind { none, power, power_sum, expression };

struct PowerTerm {
  double C = 0.0;
  double q = 0.0;
};

struct ReactionSpec {
  ReactionKind kind = ReactionKind::none;
  std::vector<PowerTerm> terms;  // power: one term; power_sum: several
  std::string expression;        // over s
};

enum class U0Kind { constant, map, expression };

struct U0Spec {
  U0Kind kind = U0Kind::constant;
  double constant = 0.0;
  std::vector<std::pair<std::string, double>> map;  // unlisted vertices get 0
  std::string expression;                           // over x (vertex index)
};

struct IntegratorSpec {
  double horizon = 0.0;  // 0 = scenario default; raw-integrate requires > 0
  bool has_horizon = false;
  double initial_step = 0.0;
  double min_step = 0.0;
  double max_step = 0.0;
  double blowup_threshold = 1e8;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
};

struct EigenSpec {
  std::size_t max_iterations = 200000;
  double residual_tolerance = 1e-8;
  double lambda_rel_change = 1e-10;
};

struct Config {
  nlohmann::json effective;  // canonical config actually run (out_dir removed)
  GraphSpec graph;
  DomainSpec domain;
  std::string scenario;  // theorem-1 | theorem-2 | raw-integrate | eigen-only
  double p = 0.0;
  double q = 0.0;
  double C = 0.0;
  double delta = 0.0;
  double eps = 0.0;
  SigmaSpec sigma;
  ReactionSpec f;
  U0Spec u0;
  IntegratorSpec integrator;
  EigenSpec eigen;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
};

/// Strict-schema parse: every object level rejects unknown keys, every
/// scenario kind checks that exactly its inputs are present.
Config parse_config(const nlohmann::json& j);

/// Replace the numeric leaf addressed by a dotted path ("eps",
/// "u0.constant", "integrator.horizon", ...). The leaf must already exist
/// and be a number; integer leaves stay integers when the value is integral.
void set_numeric_leaf(nlohmann::json& j, const std::string& dotted_path,
                      double value);

/// FNV-1a over the canonical (key-sorted) dump; names the run's artifacts.
std::uint64_t config_hash(const nlohmann::json& effective);

/// 16 lowercase hex digits.
std::string hash_hex(std::uint64_t h);

}  // namespace cli

#endif
