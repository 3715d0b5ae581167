#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "expr.hpp"
#include "plab.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

/// A run that cannot produce a result; carries the process exit code.
class RunFailure : public std::runtime_error {
 public:
  RunFailure(int exit_code, const std::string& message)
      : std::runtime_error(message), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

int exit_code_for(plab_status status) {
  return (status == PLAB_HYPOTHESIS_VIOLATED || status == PLAB_BELOW_EQUILIBRIUM)
             ? 2
             : 1;
}

void check(plab_status status) {
  if (status == PLAB_OK) return;
  std::string message = plab_last_error();
  if (message.empty()) message = plab_status_name(status);
  throw RunFailure(exit_code_for(status), message);
}

template <typename T, void (*Free)(T*)>
class Handle {
 public:
  Handle() = default;
  ~Handle() { reset(); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& o) noexcept : ptr_(std::exchange(o.ptr_, nullptr)) {}
  Handle& operator=(Handle&& o) noexcept {
    if (this != &o) {
      reset();
      ptr_ = std::exchange(o.ptr_, nullptr);
    }
    return *this;
  }
  T* get() const { return ptr_; }
  T** out() {
    reset();
    return &ptr_;
  }

 private:
  void reset() {
    if (ptr_) Free(ptr_);
    ptr_ = nullptr;
  }
  T* ptr_ = nullptr;
};

using GraphHandle = Handle<plab_graph, plab_graph_free>;
using DomainHandle = Handle<plab_domain, plab_domain_free>;
using EigenHandle = Handle<plab_eigenpair, plab_eigenpair_free>;
using ScenarioHandle = Handle<plab_scenario, plab_scenario_free>;

/* ------------------------------------------------------------- callbacks */

struct SigmaCtx {
  bool is_constant = true;
  double constant = 0.0;
  const cli::Expression* expr = nullptr;
};

double sigma_callback(void* ctx, size_t vertex, double t) {
  const auto* c = static_cast<const SigmaCtx*>(ctx);
  if (c->is_constant) return c->constant;
  const double vars[2] = {static_cast<double>(vertex), t};
  return c->expr->eval(std::span<const double>(vars, 2));
}

struct ReactionCtx {
  cli::ReactionKind kind = cli::ReactionKind::none;
  const std::vector<cli::PowerTerm>* terms = nullptr;
  const cli::Expression* expr = nullptr;
};

double reaction_callback(void* ctx, double s) {
  const auto* c = static_cast<const ReactionCtx*>(ctx);
  if (c->kind == cli::ReactionKind::expression) {
    const double vars[1] = {s};
    return c->expr->eval(std::span<const double>(vars, 1));
  }
  // Power terms extend oddly: C |s|^{q-1} s, so f(0) = 0 and signs behave.
  double total = 0.0;
  const double mag = std::abs(s);
  if (mag == 0.0) return 0.0;
  for (const cli::PowerTerm& term : *c->terms)
    total += term.C * std::pow(mag, term.q);
  return s < 0.0 ? -total : total;
}

/* ---------------------------------------------------------------- output */

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomic(const fs::path& final_path, const std::string& content) {
  static std::atomic<unsigned> counter{0};
  fs::path tmp = final_path;
  tmp += ".tmp" + std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary);
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw RunFailure(1, "cannot write " + final_path.string());
    }
  }
  fs::rename(tmp, final_path);
}

struct RunOutput {
  int exit_code = 0;
  json result;
  std::vector<std::string> traj_columns;  // empty: no trajectory artifacts
  std::vector<double> traj_times;
  std::vector<std::vector<double>> traj_rows;
  // summary fields
  int detected = 0;
  double extrapolated_time = kNan;
  double theoretical_bound = kNan;
  double lambda1 = kNan;
  std::string headline;
};

std::string trajectory_csv(const RunOutput& out) {
  std::string csv = "t";
  for (const std::string& id : out.traj_columns) {
    csv += ',';
    csv += id;
  }
  csv += '\n';
  for (std::size_t r = 0; r < out.traj_times.size(); ++r) {
    csv += format_g17(out.traj_times[r]);
    for (double v : out.traj_rows[r]) {
      csv += ',';
      csv += format_g17(v);
    }
    csv += '\n';
  }
  return csv;
}

std::string sup_csv(const RunOutput& out) {
  std::string csv = "t,sup,vertex\n";
  for (std::size_t r = 0; r < out.traj_times.size(); ++r) {
    const std::vector<double>& row = out.traj_rows[r];
    std::size_t best = 0;
    for (std::size_t c = 1; c < row.size(); ++c)
      if (row[c] > row[best]) best = c;
    csv += format_g17(out.traj_times[r]);
    csv += ',';
    csv += format_g17(row.empty() ? 0.0 : row[best]);
    csv += ',';
    csv += row.empty() ? "" : out.traj_columns[best];
    csv += '\n';
  }
  return csv;
}

/* ----------------------------------------------------------- run pipeline */

GraphHandle build_graph(const cli::Config& cfg) {
  GraphHandle g;
  const cli::GraphSpec& spec = cfg.graph;
  if (spec.from_file) {
    check(plab_graph_load(spec.file.c_str(), g.out()));
    return g;
  }
  const cli::GeneratorSpec& gen = spec.generator;
  if (gen.kind == "path")
    check(plab_graph_path(gen.vertices, g.out()));
  else if (gen.kind == "star")
    check(plab_graph_star(gen.leaves, g.out()));
  else if (gen.kind == "grid")
    check(plab_graph_grid(gen.rows, gen.cols, g.out()));
  else
    check(plab_graph_random(gen.vertices, gen.edge_prob,
                            gen.has_seed ? gen.seed : cfg.seed, g.out()));
  return g;
}

DomainHandle build_domain(const cli::Config& cfg, const plab_graph* g) {
  DomainHandle d;
  if (cfg.domain.all_but_boundary) {
    check(plab_domain_max_degree(g, d.out()));
    return d;
  }
  std::vector<size_t> interior;
  for (const std::string& id : cfg.domain.interior) {
    size_t index = 0;
    const plab_status st = plab_graph_vertex_index(g, id.c_str(), &index);
    if (st != PLAB_OK)
      throw RunFailure(1, "domain.interior: unknown vertex '" + id + "'");
    interior.push_back(index);
  }
  check(plab_domain_create(g, interior.data(), interior.size(), d.out()));
  return d;
}

std::vector<double> u0_values(const cli::Config& cfg, const plab_graph* g,
                              std::span<const size_t> vertices) {
  std::vector<double> values(vertices.size(), 0.0);
  const cli::U0Spec& u0 = cfg.u0;
  if (u0.kind == cli::U0Kind::constant) {
    for (double& v : values) v = u0.constant;
    return values;
  }
  if (u0.kind == cli::U0Kind::map) {
    std::vector<double> per_vertex(plab_graph_vertex_count(g), 0.0);
    for (const auto& [id, value] : u0.map) {
      size_t index = 0;
      if (plab_graph_vertex_index(g, id.c_str(), &index) != PLAB_OK)
        throw RunFailure(1, "u0.map: unknown vertex '" + id + "'");
      per_vertex[index] = value;
    }
    for (std::size_t i = 0; i < vertices.size(); ++i)
      values[i] = per_vertex[vertices[i]];
    return values;
  }
  std::vector<std::string_view> vars{"x"};
  const cli::Expression expr = cli::Expression::parse(u0.expression, vars);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const double x[1] = {static_cast<double>(vertices[i])};
    values[i] = expr.eval(std::span<const double>(x, 1));
  }
  return values;
}

void fill_eigen_options(const cli::Config& cfg, plab_eigen_options* eo) {
  plab_eigen_options_default(eo);
  eo->max_iterations = cfg.eigen.max_iterations;
  eo->residual_tolerance = cfg.eigen.residual_tolerance;
  eo->lambda_rel_change = cfg.eigen.lambda_rel_change;
  eo->seed = cfg.seed;
}

void fill_integrate_options(const cli::Config& cfg,
                            plab_integrate_options* io) {
  plab_integrate_options_default(io);
  io->horizon = cfg.integrator.has_horizon ? cfg.integrator.horizon : 0.0;
  io->initial_step = cfg.integrator.initial_step;
  io->min_step = cfg.integrator.min_step;
  io->max_step = cfg.integrator.max_step;
  io->blowup_threshold = cfg.integrator.blowup_threshold;
  io->rel_tol = cfg.integrator.rel_tol;
  io->abs_tol = cfg.integrator.abs_tol;
}

RunOutput run_eigen_only(const cli::Config& cfg, const plab_domain* d) {
  plab_eigen_options eo;
  fill_eigen_options(cfg, &eo);
  EigenHandle ep;
  check(plab_first_eigenpair(d, cfg.p, &eo, ep.out()));

  const size_t n = plab_domain_interior_count(d);
  std::vector<double> phi(n, 0.0);
  check(plab_eigenpair_phi(ep.get(), phi.data(), n));
  json phi_map = json::object();
  for (size_t slot = 0; slot < n; ++slot)
    phi_map[plab_domain_interior_id(d, slot)] = phi[slot];

  RunOutput out;
  out.lambda1 = plab_eigenpair_lambda(ep.get());
  out.result = json{{"lambda", out.lambda1},
                    {"phi", phi_map},
                    {"p", cfg.p},
                    {"residual", plab_eigenpair_residual(ep.get())}};
  out.headline = "lambda=" + format_g17(out.lambda1);
  return out;
}

json scenario_json(const plab_scenario* sc, int exit_code) {
  json failures = json::array();
  for (size_t i = 0; i < plab_scenario_failure_count(sc); ++i)
    failures.push_back(plab_scenario_failure(sc, i));

  json certificate;  // null unless present
  if (plab_scenario_has_certificate(sc))
    certificate = json{
        {"a", plab_scenario_cert_a(sc)},
        {"b", plab_scenario_cert_b(sc)},
        {"eps", plab_scenario_cert_eps(sc)},
        {"h0", plab_scenario_cert_h0(sc)},
        {"equilibrium", plab_scenario_cert_equilibrium(sc)},
        {"threshold", plab_scenario_cert_threshold(sc)},
        {"blowup_time", plab_scenario_cert_blowup_time(sc)},
        {"residual_max", plab_scenario_cert_residual_max(sc)},
        {"residual_scale", plab_scenario_cert_residual_scale(sc)}};

  json comparison;
  if (plab_scenario_has_comparison(sc))
    comparison = json{{"holds", plab_scenario_comparison_holds(sc) != 0},
                      {"min_gap", plab_scenario_comparison_min_gap(sc)}};

  const char* vertex = plab_scenario_blowup_vertex(sc);
  return json{
      {"tag", plab_scenario_tag(sc)},
      {"as_predicted", plab_scenario_as_predicted(sc) != 0},
      {"failures", failures},
      {"lambda1", plab_scenario_lambda1(sc)},
      {"detected", plab_scenario_detected(sc) != 0},
      {"blowup_vertex", vertex ? json(vertex) : json()},
      {"threshold_time", plab_scenario_threshold_time(sc)},
      {"extrapolated_time", plab_scenario_extrapolated_time(sc)},
      {"fit_residual", plab_scenario_fit_residual(sc)},
      {"time_uncertainty", plab_scenario_time_uncertainty(sc)},
      {"theoretical_bound",
       plab_scenario_has_bound(sc) ? json(plab_scenario_bound(sc)) : json()},
      {"steps_accepted", plab_scenario_steps_accepted(sc)},
      {"steps_rejected", plab_scenario_steps_rejected(sc)},
      {"certificate", certificate},
      {"certificate_error", plab_scenario_certificate_error(sc)},
      {"comparison", comparison},
      {"exit", exit_code}};
}

RunOutput collect_scenario(const plab_scenario* sc) {
  RunOutput out;
  out.exit_code = plab_scenario_as_predicted(sc) ? 0 : 2;
  out.result = scenario_json(sc, out.exit_code);

  const size_t cols = plab_scenario_columns(sc);
  const size_t rows = plab_scenario_rows(sc);
  for (size_t c = 0; c < cols; ++c)
    out.traj_columns.push_back(plab_scenario_column_id(sc, c));
  out.traj_times.resize(rows);
  out.traj_rows.assign(rows, std::vector<double>(cols, 0.0));
  for (size_t r = 0; r < rows; ++r) {
    out.traj_times[r] = plab_scenario_time(sc, r);
    check(plab_scenario_state(sc, r, out.traj_rows[r].data(), cols));
  }

  out.detected = plab_scenario_detected(sc);
  if (out.detected) out.extrapolated_time = plab_scenario_extrapolated_time(sc);
  if (plab_scenario_has_bound(sc))
    out.theoretical_bound = plab_scenario_bound(sc);
  out.lambda1 = plab_scenario_lambda1(sc);

  std::string line = std::string(plab_scenario_tag(sc)) + " " +
                     (out.exit_code == 0 ? "as-predicted" : "contradicted");
  if (out.detected)
    line += " blow-up at t=" + format_g17(out.extrapolated_time);
  out.headline = line;
  return out;
}

RunOutput execute(const cli::Config& cfg) {
  GraphHandle g = build_graph(cfg);
  DomainHandle d = build_domain(cfg, g.get());

  if (cfg.scenario == "eigen-only") return run_eigen_only(cfg, d.get());

  SigmaCtx sigma_ctx;
  std::optional<cli::Expression> sigma_expr;
  sigma_ctx.is_constant = cfg.sigma.is_constant;
  sigma_ctx.constant = cfg.sigma.constant;
  if (!cfg.sigma.is_constant) {
    std::vector<std::string_view> vars{"x", "t"};
    sigma_expr = cli::Expression::parse(cfg.sigma.expression, vars);
    sigma_ctx.expr = &*sigma_expr;
  }

  ScenarioHandle sc;
  if (cfg.scenario == "raw-integrate") {
    ReactionCtx f_ctx;
    std::optional<cli::Expression> f_expr;
    f_ctx.kind = cfg.f.kind;
    f_ctx.terms = &cfg.f.terms;
    if (cfg.f.kind == cli::ReactionKind::expression) {
      std::vector<std::string_view> vars{"s"};
      f_expr = cli::Expression::parse(cfg.f.expression, vars);
      f_ctx.expr = &*f_expr;
    }
    // Declare f ~ C s^q when a power form makes that exact: the dominant
    // (largest-q) term drives the blow-up asymptotics.
    int has_hint = 0;
    double q_hint = 0.0, c_hint = 0.0;
    for (const cli::PowerTerm& term : cfg.f.terms)
      if (term.q > q_hint) {
        q_hint = term.q;
        c_hint = term.C;
      }
    has_hint = (cfg.f.kind != cli::ReactionKind::expression && q_hint > 1.0)
                   ? 1
                   : 0;

    std::vector<size_t> interior(plab_domain_interior_count(d.get()));
    for (size_t slot = 0; slot < interior.size(); ++slot)
      interior[slot] = plab_domain_interior_vertex(d.get(), slot);
    const std::vector<double> u0 = u0_values(cfg, g.get(), interior);

    plab_integrate_options io;
    fill_integrate_options(cfg, &io);
    check(plab_integrate(d.get(), cfg.p, sigma_callback, &sigma_ctx, cfg.delta,
                         reaction_callback, &f_ctx, u0.data(), u0.size(),
                         has_hint, q_hint, c_hint, &io, sc.out()));
    return collect_scenario(sc.get());
  }

  std::vector<size_t> all(plab_graph_vertex_count(g.get()));
  for (size_t v = 0; v < all.size(); ++v) all[v] = v;
  const std::vector<double> u0 = u0_values(cfg, g.get(), all);

  plab_scenario_options so;
  plab_scenario_options_default(&so);
  fill_integrate_options(cfg, &so.integrator);
  fill_eigen_options(cfg, &so.eigen);

  if (cfg.scenario == "theorem-1")
    check(plab_scenario_strong_reaction(d.get(), cfg.p, cfg.eps, cfg.delta,
                                        sigma_callback, &sigma_ctx, u0.data(),
                                        u0.size(), &so, sc.out()));
  else
    check(plab_scenario_power_reaction(d.get(), cfg.p, cfg.q, cfg.C, cfg.delta,
                                       sigma_callback, &sigma_ctx, u0.data(),
                                       u0.size(), &so, sc.out()));
  return collect_scenario(sc.get());
}

/* ------------------------------------------------------------ one config */

struct RowOutcome {
  int exit_code = 1;
  int detected = 0;
  double extrapolated_time = kNan;
  double theoretical_bound = kNan;
  double lambda1 = kNan;
  std::string hash;
  std::string message;
};

std::string resolve_out_dir(const json& j, const std::string& out_override) {
  if (!out_override.empty()) return out_override;
  if (j.is_object() && j.contains("out_dir") && j.at("out_dir").is_string())
    return j.at("out_dir").get<std::string>();
  return "out";
}

/// Shared by `run` and each sweep row: parse, execute, write artifacts.
RowOutcome run_one(json j, const std::string& out_override) {
  RowOutcome row;
  json stripped = j;
  if (stripped.is_object()) stripped.erase("out_dir");
  row.hash = cli::hash_hex(cli::config_hash(stripped));
  const std::string out_dir = resolve_out_dir(j, out_override);
  const fs::path base = fs::path(out_dir) / row.hash;

  auto record_failure = [&](int code, const std::string& message) {
    row.exit_code = code;
    row.message = message;
    try {
      fs::create_directories(out_dir);
      write_atomic(base.string() + ".result.json",
                   json{{"error", message}, {"exit", code}}.dump(2) + "\n");
    } catch (...) {
      // Reporting the original failure matters more than the artifact.
    }
  };

  try {
    const cli::Config cfg = cli::parse_config(j);
    fs::create_directories(out_dir);
    write_atomic(base.string() + ".config.json",
                 cfg.effective.dump(2) + "\n");

    RunOutput out = execute(cfg);
    write_atomic(base.string() + ".result.json", out.result.dump(2) + "\n");
    if (!out.traj_columns.empty()) {
      write_atomic(base.string() + ".traj.csv", trajectory_csv(out));
      write_atomic(base.string() + ".sup.csv", sup_csv(out));
    }

    row.exit_code = out.exit_code;
    row.detected = out.detected;
    row.extrapolated_time = out.extrapolated_time;
    row.theoretical_bound = out.theoretical_bound;
    row.lambda1 = out.lambda1;
    row.message = out.headline;
  } catch (const cli::ConfigError& e) {
    record_failure(1, e.what());
  } catch (const RunFailure& e) {
    record_failure(e.exit_code(), e.what());
  } catch (const std::exception& e) {
    record_failure(1, e.what());
  }
  return row;
}

json read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RunFailure(1, "cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw RunFailure(1, "config file '" + path + "' is not valid JSON: " +
                            e.what());
  }
  return j;
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> values;
  std::size_t begin = 0;
  while (begin <= csv.size()) {
    std::size_t end = csv.find(',', begin);
    if (end == std::string::npos) end = csv.size();
    std::string token = csv.substr(begin, end - begin);
    const std::size_t a = token.find_first_not_of(" \t");
    if (a != std::string::npos) {
      const std::size_t b = token.find_last_not_of(" \t");
      token = token.substr(a, b - a + 1);
      try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        values.push_back(v);
      } catch (const std::exception&) {
        throw RunFailure(1, "--values: '" + token + "' is not a number");
      }
    }
    if (end == csv.size()) break;
    begin = end + 1;
  }
  return values;
}

int command_run(const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed) {
  json j = read_config_file(config_path);
  if (seed) j["seed"] = *seed;
  const RowOutcome row = run_one(std::move(j), out_dir);
  if (row.exit_code == 0)
    std::cout << row.hash << " " << row.message << "\n";
  else
    std::cerr << row.hash << " failed (exit " << row.exit_code
              << "): " << row.message << "\n";
  return row.exit_code;
}

int command_sweep(const std::string& config_path, const std::string& out_dir,
                  std::optional<std::uint64_t> seed, const std::string& param,
                  const std::string& values_csv, unsigned workers) {
  json base = read_config_file(config_path);
  if (seed) base["seed"] = *seed;
  const std::vector<double> values = parse_values(values_csv);

  if (!values.empty()) {
    json probe = base;  // reject a bad --param path before spawning runs
    cli::set_numeric_leaf(probe, param, values.front());
  }

  const std::string summary_dir = resolve_out_dir(base, out_dir);
  fs::create_directories(summary_dir);

  std::vector<RowOutcome> rows(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= values.size()) return;
      json j = base;
      try {
        cli::set_numeric_leaf(j, param, values[i]);
        rows[i] = run_one(std::move(j), out_dir);
      } catch (const std::exception& e) {
        rows[i].exit_code = 1;
        rows[i].message = e.what();
      }
    }
  };

  const unsigned thread_count = std::max(
      1u, std::min<unsigned>(workers,
                             values.empty()
                                 ? 1u
                                 : static_cast<unsigned>(values.size())));
  if (thread_count <= 1 || values.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < thread_count; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::string summary =
      "param,value,detected,extrapolated_time,theoretical_bound,lambda1,"
      "exit\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const RowOutcome& row = rows[i];
    summary += param;
    summary += ',';
    summary += format_g17(values[i]);
    summary += ',';
    summary += std::to_string(row.detected);
    summary += ',';
    summary += format_g17(row.extrapolated_time);
    summary += ',';
    summary += format_g17(row.theoretical_bound);
    summary += ',';
    summary += format_g17(row.lambda1);
    summary += ',';
    summary += std::to_string(row.exit_code);
    summary += '\n';
  }
  write_atomic(fs::path(summary_dir) / "summary.csv", summary);

  for (std::size_t i = 0; i < values.size(); ++i)
    std::cout << param << "=" << format_g17(values[i]) << " exit="
              << rows[i].exit_code << " " << rows[i].message << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for reaction-diffusion blow-up on "
               "weighted graphs"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed_value = 0;
  std::string param;
  std::string values_csv;
  unsigned workers = 1;

  CLI::App* run = app.add_subcommand("run", "execute one experiment config");
  run->add_option("config", config_path, "experiment config (JSON)")
      ->required();
  run->add_option("--out", out_dir, "output directory (overrides out_dir)");
  CLI::Option* run_seed = run->add_option("--seed", seed_value, "seed override");

  CLI::App* sweep =
      app.add_subcommand("sweep", "run one config across parameter values");
  sweep->add_option("config", config_path, "experiment config (JSON)")
      ->required();
  sweep->add_option("--param", param, "dotted numeric config path")
      ->required();
  sweep
      ->add_option("--values", values_csv,
                   "comma-separated values substituted for --param")
      ->required();
  sweep->add_option("--out", out_dir, "output directory (overrides out_dir)");
  sweep->add_option("--workers", workers, "parallel runs")
      ->check(CLI::PositiveNumber);
  CLI::Option* sweep_seed =
      sweep->add_option("--seed", seed_value, "seed override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(run)) {
      std::optional<std::uint64_t> seed;
      if (run_seed->count() > 0) seed = seed_value;
      return command_run(config_path, out_dir, seed);
    }
    std::optional<std::uint64_t> seed;
    if (sweep_seed->count() > 0) seed = seed_value;
    return command_sweep(config_path, out_dir, seed, param, values_csv,
                         workers);
  } catch (const RunFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
