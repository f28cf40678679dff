// monodual: command-line driver.
//
//   simulate  forward trajectory snapshots (JSON lines)
//   dual      backward dual trajectory snapshots (JSON lines)
//   verify    exact invariant battery; exit 1 with a reproducer on failure
//   sweep     (α, δ) table of estimates (CSV) plus boundary summary
//   exact     generators and transient laws of 2- and 3-site systems
//
// Exit codes: 0 ok, 1 verification failure, 2 usage or configuration error,
// 3 resource budget exceeded.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "monodual/antichain.hpp"
#include "monodual/dual.hpp"
#include "monodual/estimators.hpp"
#include "monodual/exact.hpp"
#include "monodual/graphical.hpp"
#include "monodual/io.hpp"
#include "monodual/lattice.hpp"
#include "monodual/verify.hpp"

using namespace monodual;
using nlohmann::json;

namespace {

struct RunConfig {
  std::string command;
  int dim = 1;
  int size = 16;
  std::string cayley;
  std::vector<Site> generators;
  std::string model = "cooperative";
  std::string extra_maps;
  double alpha = 0.0;
  double delta = 0.0;
  double horizon = 10.0;
  std::uint64_t reps = 1000;
  std::uint64_t seed = 1;
  std::string output;
  unsigned threads = 1;
  // simulate / dual
  std::string start;
  double density = 0.5;
  int samples = 10;
  std::string log_in;
  std::string log_out;
  // verify
  std::uint64_t triples = 2000;
  std::uint64_t coupling_reps = 500;
  bool exact_only = false;
  bool inject_fault = false;
  // sweep
  std::vector<double> alphas{0.0, 0.5, 1.0};
  std::vector<double> deltas{0.1, 0.3, 0.5};
  std::vector<std::string> estimators{"theta", "rho", "theta_dual", "rho_dual"};
  double threshold = 0.01;
  // exact
  int sites = 2;
  std::string x_json;
  std::string y_json;
  std::string export_forward;
  std::string export_dual;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

template <class T>
std::string join_list(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) os << ',';
    if constexpr (std::is_floating_point_v<T>)
      os << fmt(v[k]);
    else
      os << v[k];
  }
  return os.str();
}

// Every option that can change the output, in a fixed order. The thread
// count and output path are left out on purpose: they cannot change results.
std::vector<std::string> header_lines(const RunConfig& c) {
  std::vector<std::string> h;
  h.push_back(std::string("monodual ") + MONODUAL_VERSION + " " + c.command);
  std::ostringstream os;
  if (c.command == "verify") {
    os << "seed=" << c.seed;
  } else if (c.command == "exact") {
    os << "alpha=" << fmt(c.alpha) << " delta=" << fmt(c.delta) << " horizon=" << fmt(c.horizon);
  } else {
    if (c.cayley.empty())
      os << "grid=torus dim=" << c.dim << " size=" << c.size;
    else
      os << "grid=cayley table=" << c.cayley << " generators=" << join_list(c.generators);
    if (c.command != "sweep") os << " model=" << c.model << " alpha=" << fmt(c.alpha) << " delta=" << fmt(c.delta);
    os << " horizon=" << fmt(c.horizon) << " seed=" << c.seed;
    if (!c.extra_maps.empty()) os << " extra_maps=" << c.extra_maps;
  }
  h.push_back(os.str());
  std::ostringstream more;
  if (c.command == "simulate" || c.command == "dual") {
    more << "start=" << (c.start.empty() ? (c.command == "dual" ? "top" : "full") : c.start);
    if (c.command == "simulate") more << " density=" << fmt(c.density);
    more << " samples=" << c.samples;
    if (!c.log_in.empty()) more << " log=" << c.log_in;
  } else if (c.command == "verify") {
    more << "triples=" << c.triples << " coupling_reps=" << c.coupling_reps << " exact_only=" << c.exact_only
         << " inject_fault=" << c.inject_fault;
  } else if (c.command == "sweep") {
    more << "reps=" << c.reps << " alphas=" << join_list(c.alphas) << " deltas=" << join_list(c.deltas)
         << " estimators=" << join_list(c.estimators) << " threshold=" << fmt(c.threshold);
  } else if (c.command == "exact") {
    more << "sites=" << c.sites << " x=" << (c.x_json.empty() ? "e_0" : c.x_json)
         << " y=" << (c.y_json.empty() ? "{e_0}" : c.y_json);
  }
  if (!more.str().empty()) h.push_back(more.str());
  return h;
}

std::shared_ptr<const Grid> make_grid(const RunConfig& c) {
  if (c.cayley.empty()) return std::make_shared<const Grid>(Grid::torus(c.dim, c.size));
  std::ifstream in(c.cayley);
  if (!in) throw ConfigError("cannot open Cayley table '" + c.cayley + "'");
  return std::make_shared<const Grid>(Grid::cayley(read_cayley_table(in), c.generators));
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path + "': " + e.what());
  }
}

// A literal JSON value or, failing that, a file holding one.
json json_arg(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return read_json_file(text);
  }
}

FamilyPtr make_family(const RunConfig& c, const std::shared_ptr<const Grid>& grid) {
  FamilyPtr base;
  if (c.model == "cooperative")
    base = cooperative_family(grid, c.alpha, c.delta);
  else if (c.model == "death")
    base = death_family(grid, c.delta);
  else
    throw ConfigError("unknown model '" + c.model + "' (expected cooperative or death)");
  if (c.extra_maps.empty()) return base;
  std::vector<RatedMap> maps(base->maps().begin(), base->maps().end());
  for (auto& rm : rated_maps_from_json(read_json_file(c.extra_maps), 1)) maps.push_back(std::move(rm));
  return std::make_shared<const RatedFamily>(grid->size(), Level{1}, std::move(maps), base->params(), grid);
}

SeedProvenance log_stream(const RunConfig& c) { return {c.seed, 0, purpose_tag("cli-log")}; }

EventLog obtain_log(const RunConfig& c, const FamilyPtr& family) {
  if (!c.log_in.empty()) {
    std::ifstream in(c.log_in);
    if (!in) throw ConfigError("cannot open event log '" + c.log_in + "'");
    return read_event_log(in, family, 0.0, c.horizon);
  }
  Rng rng(log_stream(c));
  return sample_event_log(family, 0.0, c.horizon, rng);
}

void maybe_write_log(const RunConfig& c, const EventLog& log) {
  if (c.log_out.empty()) return;
  std::ofstream out(c.log_out);
  if (!out) throw ConfigError("cannot write event log '" + c.log_out + "'");
  write_event_log(out, log, header_lines(c));
}

std::vector<double> sample_times(const RunConfig& c) {
  if (c.samples < 1) throw ConfigError("need at least one sample interval");
  std::vector<double> t;
  for (int k = 0; k <= c.samples; ++k) t.push_back(c.horizon * k / c.samples);
  return t;
}

void write_header(std::ostream& os, const RunConfig& c) {
  for (const auto& h : header_lines(c)) os << "# " << h << '\n';
}

int cmd_simulate(const RunConfig& c, std::ostream& os) {
  const auto grid = make_grid(c);
  const auto family = make_family(c, grid);
  const auto log = obtain_log(c, family);
  maybe_write_log(c, log);
  const std::size_t n = grid->size();
  Configuration x(n, 1);
  const std::string start = c.start.empty() ? "full" : c.start;
  if (start == "full") {
    x = Configuration::full(n, 1);
  } else if (start == "origin") {
    x = Configuration::basis(n, 1, 0);
  } else if (start == "random") {
    Rng rng(SeedProvenance{c.seed, 0, purpose_tag("cli-start")});
    for (Site i = 0; i < n; ++i)
      if (rng.bernoulli(c.density)) x.set(i, 1);
  } else {
    x = config_from_json(json_arg(start), n, 1);
  }
  write_header(os, c);
  const auto times = sample_times(c);
  double prev = 0.0;
  for (double t : times) {
    x = forward_flow(log, x, prev, t);
    prev = t;
    json line = config_to_json(x);
    line["t"] = t;
    line["size"] = x.support_size();
    os << line.dump() << '\n';
  }
  return 0;
}

int cmd_dual(const RunConfig& c, std::ostream& os) {
  const auto grid = make_grid(c);
  const auto family = make_family(c, grid);
  const auto log = obtain_log(c, family);
  maybe_write_log(c, log);
  const std::size_t n = grid->size();
  const std::string start = c.start.empty() ? "top" : c.start;
  Antichain Y(n, 1);
  if (start == "top")
    Y = make_y_top(n, 1);
  else if (start == "origin")
    Y = Antichain::from_elements(n, 1, {Configuration::basis(n, 1, 0)});
  else if (start != "empty")
    Y = antichain_from_json(json_arg(start), n, 1);
  write_header(os, c);
  auto times = sample_times(c);
  double prev = c.horizon;
  for (auto it = times.rbegin(); it != times.rend(); ++it) {
    Y = backward_flow(log, Y, prev, *it);
    prev = *it;
    json line = antichain_to_json(Y);
    line["s"] = *it;
    line["size"] = Y.size();
    os << line.dump() << '\n';
  }
  return 0;
}

int cmd_verify(const RunConfig& c, std::ostream& os) {
  VerifyOptions opt;
  opt.seed = c.seed;
  opt.triples = c.triples;
  opt.coupling_reps = c.coupling_reps;
  opt.exact_only = c.exact_only;
  opt.inject_fault = c.inject_fault;
  opt.threads = c.threads;
  const auto report = run_verification(opt);
  write_header(os, c);
  for (const auto& chk : report.checks) {
    os << (chk.passed ? "PASS " : "FAIL ") << chk.name << ": " << chk.detail << '\n';
    if (!chk.passed) os << "  reproducer: " << chk.reproducer << '\n';
  }
  os << (report.passed() ? "verify: all checks passed" : "verify: FAILED") << '\n';
  return report.passed() ? 0 : 1;
}

int cmd_sweep(const RunConfig& c, std::ostream& os) {
  RunSpec spec;
  spec.grid = make_grid(c);
  spec.horizon = c.horizon;
  spec.reps = c.reps;
  spec.seed = c.seed;
  spec.threads = c.threads;
  SweepOptions opt;
  opt.alphas = c.alphas;
  opt.deltas = c.deltas;
  opt.threshold = c.threshold;
  opt.estimators.clear();
  for (const auto& e : c.estimators) opt.estimators.push_back(parse_estimator(e));
  const auto res = sweep(opt, spec);

  write_header(os, c);
  const int dim = spec.grid->is_torus() ? spec.grid->torus_dim() : 0;
  const auto size = spec.grid->is_torus() ? static_cast<std::size_t>(spec.grid->torus_side()) : spec.grid->size();
  os << "alpha,delta,dim,size,horizon,reps,estimator,estimate,stderr,seed\n";
  for (const auto& r : res.table)
    os << fmt(r.alpha) << ',' << fmt(r.delta) << ',' << dim << ',' << size << ',' << fmt(r.horizon) << ',' << r.reps
       << ',' << estimator_name(r.estimator) << ',' << fmt(r.estimate) << ',' << fmt(r.std_error) << ',' << r.seed
       << '\n';
  auto summary = [&](const char* name, const std::vector<Boundary>& b) {
    for (const auto& x : b)
      os << "# boundary " << name << " alpha=" << fmt(x.alpha) << " estimate=" << fmt(x.estimate)
         << " band=[" << fmt(x.low) << "," << fmt(x.high) << "] threshold=" << fmt(res.threshold) << '\n';
  };
  summary("delta_c", res.delta_c);
  summary("delta_c_prime", res.delta_c_prime);
  return 0;
}

int cmd_exact(const RunConfig& c, std::ostream& os) {
  FamilyPtr family;
  if (c.sites == 2)
    family = two_site_family(c.alpha, c.delta);
  else if (c.sites == 3)
    family = cooperative_family(std::make_shared<const Grid>(Grid::torus(1, 3)), c.alpha, c.delta);
  else
    throw ConfigError("exact handles 2 or 3 sites");
  const std::size_t n = family->num_sites();
  const auto fwd = build_forward_generator(*family);
  const auto dual = build_dual_generator(*family);
  if (!c.export_forward.empty()) {
    std::ofstream out(c.export_forward);
    if (!out) throw ConfigError("cannot write '" + c.export_forward + "'");
    fwd.generator.write_matrix_market(out);
  }
  if (!c.export_dual.empty()) {
    std::ofstream out(c.export_dual);
    if (!out) throw ConfigError("cannot write '" + c.export_dual + "'");
    dual.generator.write_matrix_market(out);
  }
  const auto x = c.x_json.empty() ? Configuration::basis(n, 1, 0) : config_from_json(json_arg(c.x_json), n, 1);
  const auto Y = c.y_json.empty() ? Antichain::from_elements(n, 1, {Configuration::basis(n, 1, 0)})
                                  : antichain_from_json(json_arg(c.y_json), n, 1);
  write_header(os, c);
  const auto px = transient_distribution(fwd.generator, point_mass(fwd.states.size(), fwd.index_of(x)), c.horizon);
  const auto pY =
      transient_distribution(dual.generator, point_mass(dual.states.size(), dual.index_of(Y)), c.horizon);
  for (std::size_t s = 0; s < px.size(); ++s) {
    json line = config_to_json(fwd.states[s]);
    line["chain"] = "forward";
    line["p"] = fmt(px[s]);
    os << line.dump() << '\n';
  }
  for (std::size_t s = 0; s < pY.size(); ++s) {
    json line = antichain_to_json(dual.states[s]);
    line["chain"] = "dual";
    line["p"] = fmt(pY[s]);
    os << line.dump() << '\n';
  }
  os << "# duality discrepancy " << fmt(semigroup_duality_check(fwd, dual, x, Y, c.horizon)) << '\n';
  return 0;
}

void add_grid_options(CLI::App* app, RunConfig& c) {
  app->add_option("--dim", c.dim, "torus dimension d")->capture_default_str();
  app->add_option("--size", c.size, "torus side length L (>= 3)")->capture_default_str();
  app->add_option("--cayley", c.cayley, "CSV multiplication table (row a, column b = a*b)");
  app->add_option("--generators", c.generators, "Cayley generators, comma separated")->delimiter(',');
}

void add_model_options(CLI::App* app, RunConfig& c) {
  app->add_option("--alpha", c.alpha, "cooperation parameter in [0,1]")->capture_default_str();
  app->add_option("--delta", c.delta, "death rate >= 0")->capture_default_str();
  app->add_option("--horizon", c.horizon, "time horizon T")->capture_default_str();
  app->add_option("--seed", c.seed, "master seed")->capture_default_str();
  app->add_option("--model", c.model, "cooperative | death")->capture_default_str();
  app->add_option("--extra-maps", c.extra_maps, "JSON array of custom maps with rates to add to the family");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Monotone particle systems and their antichain duals"};
  app.set_version_flag("--version", std::string("monodual ") + MONODUAL_VERSION);
  app.set_config("--config", "", "read options from a TOML/INI file; flags take precedence");
  app.add_option("-o,--output", c.output, "output file (default: stdout)");
  app.add_option("--threads", c.threads, "replica threads, 0 = all cores; results do not depend on it")
      ->capture_default_str();
  app.require_subcommand(1);
  app.fallthrough();

  auto* sim = app.add_subcommand("simulate", "forward trajectory snapshots as JSON lines");
  add_grid_options(sim, c);
  add_model_options(sim, c);
  sim->add_option("--start", c.start, "full | origin | random | JSON configuration or file (default full)");
  sim->add_option("--density", c.density, "occupation probability for --start random")->capture_default_str();
  sim->add_option("--samples", c.samples, "number of snapshot intervals over [0, T]")->capture_default_str();
  sim->add_option("--log", c.log_in, "replay an event log (JSON lines) instead of sampling");
  sim->add_option("--log-out", c.log_out, "write the event log used");

  auto* dual = app.add_subcommand("dual", "backward dual trajectory snapshots as JSON lines");
  add_grid_options(dual, c);
  add_model_options(dual, c);
  dual->add_option("--start", c.start, "top | origin | empty | JSON antichain or file (default top)");
  dual->add_option("--samples", c.samples, "number of snapshot intervals over [0, T]")->capture_default_str();
  dual->add_option("--log", c.log_in, "replay an event log (JSON lines) instead of sampling");
  dual->add_option("--log-out", c.log_out, "write the event log used");

  auto* ver = app.add_subcommand("verify", "run the exact invariant battery");
  ver->add_option("--seed", c.seed, "master seed")->capture_default_str();
  ver->add_option("--triples", c.triples, "random pathwise-duality triples")->capture_default_str();
  ver->add_option("--coupling-reps", c.coupling_reps, "coupled replicas per parameter pair")->capture_default_str();
  ver->add_flag("--exact-only", c.exact_only, "only the 2- and 3-site semigroup checks");
  ver->add_flag("--inject-fault", c.inject_fault, "mutate the branching dual; the battery must fail");

  auto* sw = app.add_subcommand("sweep", "estimate survival and density over an (alpha, delta) grid");
  add_grid_options(sw, c);
  sw->add_option("--horizon", c.horizon, "time horizon T")->capture_default_str();
  sw->add_option("--seed", c.seed, "master seed")->capture_default_str();
  sw->add_option("--reps", c.reps, "replicas per estimate")->capture_default_str();
  sw->add_option("--alphas", c.alphas, "alpha values")->delimiter(',')->capture_default_str();
  sw->add_option("--deltas", c.deltas, "delta values, increasing")->delimiter(',')->capture_default_str();
  sw->add_option("--estimators", c.estimators, "theta, rho, theta_dual, rho_dual")
      ->delimiter(',')
      ->capture_default_str();
  sw->add_option("--threshold", c.threshold, "level for the boundary crossing")->capture_default_str();

  auto* ex = app.add_subcommand("exact", "exact transient laws of a 2- or 3-site system");
  ex->add_option("--sites", c.sites, "2 (two-site system) or 3 (ring of 3)")->capture_default_str();
  ex->add_option("--alpha", c.alpha, "cooperation parameter in [0,1]")->capture_default_str();
  ex->add_option("--delta", c.delta, "death rate >= 0")->capture_default_str();
  ex->add_option("--horizon,--time", c.horizon, "time t")->capture_default_str();
  ex->add_option("--x", c.x_json, "forward start, JSON configuration (default e_0)");
  ex->add_option("--y", c.y_json, "dual start, JSON antichain (default {e_0})");
  ex->add_option("--export-forward", c.export_forward, "write the forward generator (Matrix Market)");
  ex->add_option("--export-dual", c.export_dual, "write the dual generator (Matrix Market)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::ofstream file;
  std::ostream* os = &std::cout;
  std::ostringstream buffer;
  try {
    c.command = app.get_subcommands().front()->get_name();
    int rc = 0;
    // Build the whole output first so a failing run leaves no partial file.
    if (c.command == "simulate") rc = cmd_simulate(c, buffer);
    else if (c.command == "dual") rc = cmd_dual(c, buffer);
    else if (c.command == "verify") rc = cmd_verify(c, buffer);
    else if (c.command == "sweep") rc = cmd_sweep(c, buffer);
    else if (c.command == "exact") rc = cmd_exact(c, buffer);
    if (!c.output.empty()) {
      file.open(c.output);
      if (!file) throw ConfigError("cannot write '" + c.output + "'");
      os = &file;
    }
    *os << buffer.str();
    os->flush();
    return rc;
  } catch (const ConfigError& e) {
    std::cerr << "monodual: " << e.what() << '\n';
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "monodual: " << e.what() << '\n';
    return 3;
  } catch (const VerificationError& e) {
    std::cerr << "monodual: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "monodual: " << e.what() << '\n';
    return 2;
  }
}
