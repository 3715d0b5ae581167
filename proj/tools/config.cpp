#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "expr.hpp"

namespace cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path.empty() ? what : "'" + path + "': " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
  }
}

const json& expect(const json& obj, const std::string& path,
                   const char* key) {
  auto it = obj.find(key);
  if (it == obj.end())
    fail(path.empty() ? key : path + "." + key, "required key is missing");
  return *it;
}

std::string join(const std::string& path, const char* key) {
  return path.empty() ? key : path + "." + key;
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "number must be finite");
  return x;
}

std::size_t count_at(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    fail(path, "expected a nonnegative integer");
  return static_cast<std::size_t>(v.get<std::int64_t>());
}

std::string string_at(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

void validate_expression(const std::string& text, const std::string& path,
                         std::initializer_list<std::string_view> vars) {
  std::vector<std::string_view> vs(vars);
  try {
    (void)Expression::parse(text, vs);
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

GraphSpec parse_graph(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path, {"file", "generator"});
  GraphSpec g;
  const bool has_file = j.contains("file");
  const bool has_gen = j.contains("generator");
  if (has_file == has_gen)
    fail(path, "exactly one of 'file' or 'generator' is required");
  if (has_file) {
    g.from_file = true;
    g.file = string_at(j.at("file"), join(path, "file"));
    if (g.file.empty()) fail(join(path, "file"), "path must be nonempty");
    return g;
  }
  const json& gen = j.at("generator");
  const std::string gpath = join(path, "generator");
  if (!gen.is_object()) fail(gpath, "expected an object");
  g.generator.kind = string_at(expect(gen, gpath, "kind"), join(gpath, "kind"));
  const std::string& kind = g.generator.kind;
  if (kind == "path") {
    check_keys(gen, gpath, {"kind", "vertices"});
    g.generator.vertices =
        count_at(expect(gen, gpath, "vertices"), join(gpath, "vertices"));
  } else if (kind == "star") {
    check_keys(gen, gpath, {"kind", "leaves"});
    g.generator.leaves =
        count_at(expect(gen, gpath, "leaves"), join(gpath, "leaves"));
  } else if (kind == "grid") {
    check_keys(gen, gpath, {"kind", "rows", "cols"});
    g.generator.rows = count_at(expect(gen, gpath, "rows"), join(gpath, "rows"));
    g.generator.cols = count_at(expect(gen, gpath, "cols"), join(gpath, "cols"));
  } else if (kind == "random") {
    check_keys(gen, gpath, {"kind", "vertices", "edge_prob", "seed"});
    g.generator.vertices =
        count_at(expect(gen, gpath, "vertices"), join(gpath, "vertices"));
    g.generator.edge_prob =
        number_at(expect(gen, gpath, "edge_prob"), join(gpath, "edge_prob"));
    if (gen.contains("seed")) {
      g.generator.seed = static_cast<std::uint64_t>(
          count_at(gen.at("seed"), join(gpath, "seed")));
      g.generator.has_seed = true;
    }
  } else {
    fail(join(gpath, "kind"),
         "unknown generator '" + kind +
             "' (expected path, star, grid, or random)");
  }
  return g;
}

DomainSpec parse_domain(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path, {"interior", "rule"});
  DomainSpec d;
  const bool has_interior = j.contains("interior");
  const bool has_rule = j.contains("rule");
  if (has_interior == has_rule)
    fail(path, "exactly one of 'interior' or 'rule' is required");
  if (has_rule) {
    const std::string rule = string_at(j.at("rule"), join(path, "rule"));
    if (rule != "all-but-boundary")
      fail(join(path, "rule"),
           "unknown rule '" + rule + "' (expected all-but-boundary)");
    d.all_but_boundary = true;
    return d;
  }
  const json& arr = j.at("interior");
  const std::string apath = join(path, "interior");
  if (!arr.is_array() || arr.empty())
    fail(apath, "expected a nonempty array of vertex ids");
  for (std::size_t i = 0; i < arr.size(); ++i)
    d.interior.push_back(
        string_at(arr[i], apath + "[" + std::to_string(i) + "]"));
  return d;
}

SigmaSpec parse_sigma(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path, {"constant", "expression"});
  const bool has_const = j.contains("constant");
  const bool has_expr = j.contains("expression");
  if (has_const == has_expr)
    fail(path, "exactly one of 'constant' or 'expression' is required");
  SigmaSpec s;
  if (has_const) {
    s.is_constant = true;
    s.constant = number_at(j.at("constant"), join(path, "constant"));
  } else {
    s.is_constant = false;
    s.expression = string_at(j.at("expression"), join(path, "expression"));
    validate_expression(s.expression, join(path, "expression"), {"x", "t"});
  }
  return s;
}

PowerTerm parse_power_term(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path, {"C", "q"});
  PowerTerm t;
  t.C = number_at(expect(j, path, "C"), join(path, "C"));
  t.q = number_at(expect(j, path, "q"), join(path, "q"));
  if (!(t.C > 0.0)) fail(join(path, "C"), "coefficient must be positive");
  if (!(t.q > 0.0)) fail(join(path, "q"), "exponent must be positive");
  return t;
}

ReactionSpec parse_reaction(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path, {"power", "power_sum", "expression"});
  const int present = int(j.contains("power")) + int(j.contains("power_sum")) +
                      int(j.contains("expression"));
  if (present != 1)
    fail(path,
         "exactly one of 'power', 'power_sum', or 'expression' is required");
  ReactionSpec f;
  if (j.contains("power")) {
    f.kind = ReactionKind::power;
    f.terms.push_back(parse_power_term(j.at("power"), join(path, "power")));
  } else if (j.contains("power_sum")) {
    f.kind = ReactionKind::power_sum;
    const json& arr = j.at("power_sum");
    const std::string apath = join(path, "power_sum");
    if (!arr.is_array() || arr.empty())
      fail(apath, "expected a nonempty array of {C, q} terms");
    for (std::size_t i = 0; i < arr.size(); ++i)
      f.terms.push_back(
          parse_power_term(arr[i], apath + "[" + std::to_string(i) + "]"));
  } else {
    f.kind = ReactionKind::expression;
    f.expression = string_at(j.at("expression"), join(path, "expression"));
    validate_expression(f.expression, join(path, "expression"), {"s"});
  }
  return f;
}

U0Spec parse_u0(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path, {"constant", "map", "expression"});
  const int present = int(j.contains("constant")) + int(j.contains("map")) +
                      int(j.contains("expression"));
  if (present != 1)
    fail(path,
         "exactly one of 'constant', 'map', or 'expression' is required");
  U0Spec u;
  if (j.contains("constant")) {
    u.kind = U0Kind::constant;
    u.constant = number_at(j.at("constant"), join(path, "constant"));
  } else if (j.contains("map")) {
    u.kind = U0Kind::map;
    const json& m = j.at("map");
    const std::string mpath = join(path, "map");
    if (!m.is_object()) fail(mpath, "expected an object of id -> value");
    for (auto it = m.begin(); it != m.end(); ++it)
      u.map.emplace_back(it.key(),
                         number_at(it.value(), mpath + "." + it.key()));
  } else {
    u.kind = U0Kind::expression;
    u.expression = string_at(j.at("expression"), join(path, "expression"));
    validate_expression(u.expression, join(path, "expression"), {"x"});
  }
  return u;
}

IntegratorSpec parse_integrator(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path,
             {"horizon", "initial_step", "min_step", "max_step",
              "blowup_threshold", "rel_tol", "abs_tol"});
  IntegratorSpec s;
  if (j.contains("horizon")) {
    s.horizon = number_at(j.at("horizon"), join(path, "horizon"));
    s.has_horizon = true;
    if (!(s.horizon > 0.0)) fail(join(path, "horizon"), "must be positive");
  }
  if (j.contains("initial_step"))
    s.initial_step = number_at(j.at("initial_step"), join(path, "initial_step"));
  if (j.contains("min_step"))
    s.min_step = number_at(j.at("min_step"), join(path, "min_step"));
  if (j.contains("max_step"))
    s.max_step = number_at(j.at("max_step"), join(path, "max_step"));
  if (j.contains("blowup_threshold")) {
    s.blowup_threshold =
        number_at(j.at("blowup_threshold"), join(path, "blowup_threshold"));
    if (!(s.blowup_threshold > 0.0))
      fail(join(path, "blowup_threshold"), "must be positive");
  }
  if (j.contains("rel_tol")) {
    s.rel_tol = number_at(j.at("rel_tol"), join(path, "rel_tol"));
    if (!(s.rel_tol > 0.0)) fail(join(path, "rel_tol"), "must be positive");
  }
  if (j.contains("abs_tol")) {
    s.abs_tol = number_at(j.at("abs_tol"), join(path, "abs_tol"));
    if (!(s.abs_tol > 0.0)) fail(join(path, "abs_tol"), "must be positive");
  }
  return s;
}

EigenSpec parse_eigen(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path,
             {"max_iterations", "residual_tolerance", "lambda_rel_change"});
  EigenSpec s;
  if (j.contains("max_iterations"))
    s.max_iterations =
        count_at(j.at("max_iterations"), join(path, "max_iterations"));
  if (j.contains("residual_tolerance")) {
    s.residual_tolerance = number_at(j.at("residual_tolerance"),
                                     join(path, "residual_tolerance"));
    if (!(s.residual_tolerance > 0.0))
      fail(join(path, "residual_tolerance"), "must be positive");
  }
  if (j.contains("lambda_rel_change")) {
    s.lambda_rel_change =
        number_at(j.at("lambda_rel_change"), join(path, "lambda_rel_change"));
    if (!(s.lambda_rel_change > 0.0))
      fail(join(path, "lambda_rel_change"), "must be positive");
  }
  return s;
}

void forbid(const json& j, const char* key, const std::string& scenario) {
  if (j.contains(key))
    fail(key, std::string("not used by scenario '") + scenario + "'");
}

}  // namespace

Config parse_config(const json& j) {
  if (!j.is_object()) fail("", "top level must be an object");
  check_keys(j, "",
             {"graph", "domain", "scenario", "p", "q", "C", "delta", "eps",
              "sigma", "f", "u0", "integrator", "eigen", "out_dir", "seed"});

  Config cfg;
  cfg.scenario = string_at(expect(j, "", "scenario"), "scenario");
  if (cfg.scenario != "theorem-1" && cfg.scenario != "theorem-2" &&
      cfg.scenario != "raw-integrate" && cfg.scenario != "eigen-only")
    fail("scenario", "unknown scenario '" + cfg.scenario +
                         "' (expected theorem-1, theorem-2, raw-integrate, "
                         "or eigen-only)");

  cfg.graph = parse_graph(expect(j, "", "graph"), "graph");
  cfg.domain = parse_domain(expect(j, "", "domain"), "domain");

  cfg.p = number_at(expect(j, "", "p"), "p");
  if (!(cfg.p > 2.0)) fail("p", "must exceed 2");

  const std::string& sc = cfg.scenario;
  auto need_number = [&](const char* key) {
    return number_at(expect(j, "", key), key);
  };

  if (sc == "theorem-1") {
    forbid(j, "q", sc);
    forbid(j, "C", sc);
    forbid(j, "f", sc);
    cfg.delta = need_number("delta");
    cfg.eps = need_number("eps");
    cfg.sigma = parse_sigma(expect(j, "", "sigma"), "sigma");
    cfg.u0 = parse_u0(expect(j, "", "u0"), "u0");
  } else if (sc == "theorem-2") {
    forbid(j, "eps", sc);
    forbid(j, "f", sc);
    cfg.q = need_number("q");
    cfg.C = need_number("C");
    cfg.delta = need_number("delta");
    cfg.sigma = parse_sigma(expect(j, "", "sigma"), "sigma");
    cfg.u0 = parse_u0(expect(j, "", "u0"), "u0");
  } else if (sc == "raw-integrate") {
    forbid(j, "q", sc);
    forbid(j, "C", sc);
    forbid(j, "eps", sc);
    cfg.delta = need_number("delta");
    cfg.sigma = parse_sigma(expect(j, "", "sigma"), "sigma");
    cfg.f = parse_reaction(expect(j, "", "f"), "f");
    cfg.u0 = parse_u0(expect(j, "", "u0"), "u0");
  } else {  // eigen-only
    for (const char* key : {"q", "C", "delta", "eps", "sigma", "f", "u0",
                            "integrator"})
      forbid(j, key, sc);
  }

  if (j.contains("integrator"))
    cfg.integrator = parse_integrator(j.at("integrator"), "integrator");
  if (sc == "raw-integrate" && !cfg.integrator.has_horizon)
    fail("integrator.horizon",
         "raw-integrate runs need an explicit positive horizon");
  if (j.contains("eigen")) cfg.eigen = parse_eigen(j.at("eigen"), "eigen");
  if (j.contains("out_dir"))
    cfg.out_dir = string_at(j.at("out_dir"), "out_dir");
  if (j.contains("seed"))
    cfg.seed = static_cast<std::uint64_t>(count_at(j.at("seed"), "seed"));

  cfg.effective = j;
  cfg.effective.erase("out_dir");
  return cfg;
}

void set_numeric_leaf(json& j, const std::string& dotted_path, double value) {
  if (dotted_path.empty()) throw ConfigError("empty sweep parameter path");
  json* node = &j;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t dot = dotted_path.find('.', begin);
    const std::string key = dotted_path.substr(
        begin, dot == std::string::npos ? std::string::npos : dot - begin);
    if (key.empty())
      throw ConfigError("sweep parameter '" + dotted_path +
                        "' has an empty path segment");
    if (!node->is_object() || !node->contains(key))
      throw ConfigError("sweep parameter '" + dotted_path +
                        "' does not name an existing config entry");
    node = &node->at(key);
    if (dot == std::string::npos) break;
    begin = dot + 1;
  }
  if (!node->is_number())
    throw ConfigError("sweep parameter '" + dotted_path +
                      "' does not name a numeric config entry");
  if (node->is_number_integer() && value == std::floor(value) &&
      std::abs(value) < 9.0e18)
    *node = static_cast<std::int64_t>(value);
  else
    *node = value;
}

std::uint64_t config_hash(const json& effective) {
  const std::string bytes = effective.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace cli
