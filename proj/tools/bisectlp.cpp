#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "bisectlp/certificates.hpp"
#include "bisectlp/distances.hpp"
#include "bisectlp/error.hpp"
#include "bisectlp/exact.hpp"
#include "bisectlp/experiments.hpp"
#include "bisectlp/generators.hpp"
#include "bisectlp/graph_io.hpp"
#include "bisectlp/metric_lp.hpp"
#include "bisectlp/regularity.hpp"
#include "bisectlp/thresholds.hpp"

using namespace bisectlp;
using nlohmann::json;

namespace {

struct Common {
  std::uint64_t seed = 1;
  std::string out;
  std::string format;
  int threads = 1;
  bool full = false;
};

void add_common(CLI::App* sub, Common& c, const std::string& default_format) {
  c.format = default_format;
  sub->add_option("--seed", c.seed, "Base random seed")->capture_default_str();
  sub->add_option("--out", c.out, "Output path (stdout when omitted)");
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json", "text"}))->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads")->capture_default_str();
  sub->add_flag("--full", c.full, "Large-scale settings where supported");
}

// Writes to --out, or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void emit_json(const Common& c, const json& j) {
  Sink s(c.out);
  s.os() << j.dump(2) << '\n';
}

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// One-row CSV of a flat JSON object, keys in insertion order.
void emit_flat(const Common& c, const nlohmann::ordered_json& j) {
  Sink s(c.out);
  if (c.format == "json") {
    s.os() << j.dump(2) << '\n';
    return;
  }
  bool first = true;
  for (auto it = j.begin(); it != j.end(); ++it) s.os() << (first ? "" : ",") << it.key(), first = false;
  s.os() << '\n';
  first = true;
  for (auto it = j.begin(); it != j.end(); ++it) s.os() << (first ? "" : ",") << csv_cell(*it), first = false;
  s.os() << '\n';
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void check_threads(int t) {
  if (t < 1) throw ConfigError("--threads must be at least 1");
}

PlantedInstance load_instance(const std::string& graph, const std::string& partition) {
  if (partition.empty()) throw ConfigError("--partition is required for this command");
  return PlantedInstance(load_edge_list(graph), load_partition(partition));
}

DistanceRegime parse_regime(const std::string& s) {
  if (s == "very-dense") return DistanceRegime::VeryDense;
  if (s == "dense") return DistanceRegime::Dense;
  if (s == "log") return DistanceRegime::Log;
  throw ConfigError("unknown regime '" + s + "'");
}

// gen -------------------------------------------------------------------------

struct GenArgs {
  std::string model = "sbm";
  int n = 40;
  double p = 0.8, q = 0.2;
  int d_in = 3, d_out = 1;
  bool fixed_labels = false;
  std::string partition_out;
};

json edges_json(const Graph& g) {
  json a = json::array();
  for (const auto& e : g.edges()) a.push_back({e.u, e.v});
  return a;
}

void run_gen(const Common& c, const GenArgs& a) {
  std::optional<Graph> graph;
  std::optional<Bisection> side, alt;
  std::optional<CoupledTriple> triple;
  if (a.model == "er") {
    graph = sample_er(a.n, a.p, c.seed);
  } else if (a.model == "sbm") {
    auto inst = sample_sbm(a.n, a.p, a.q, c.seed, a.fixed_labels);
    graph = inst.graph;
    side = inst.planted;
  } else if (a.model == "coupled") {
    triple = sample_coupled_triple(a.n, a.p, a.q, c.seed, a.fixed_labels);
    graph = triple->g2.graph;
    side = triple->g2.planted;
  } else if (a.model == "regular") {
    auto inst = regular_planted_instance(a.n, a.d_in, a.d_out);
    graph = inst.graph;
    side = inst.planted;
  } else if (a.model == "tight") {
    auto t = construct_tight_instance(a.n, a.d_in, a.d_out);
    graph = t.instance.graph;
    side = t.instance.planted;
    alt = t.alternative;
  } else {
    throw ConfigError("unknown model '" + a.model + "'");
  }

  if (!a.partition_out.empty()) {
    if (!side) throw ConfigError("model '" + a.model + "' has no planted partition");
    save_partition(a.partition_out, *side);
  }
  Sink s(c.out);
  if (c.format == "json") {
    json j = {{"model", a.model}, {"n", graph->num_nodes()}, {"seed", c.seed}, {"edges", edges_json(*graph)}};
    if (side) j["side"] = side->labels();
    if (alt) j["alternative"] = alt->labels();
    if (triple) {
      j["g1"] = edges_json(triple->g1);
      j["g3"] = edges_json(triple->g3);
    }
    s.os() << j.dump() << '\n';
  } else if (c.format == "csv") {
    s.os() << "u,v\n";
    for (const auto& e : graph->edges()) s.os() << e.u << ',' << e.v << '\n';
  } else {
    write_edge_list(s.os(), *graph);
  }
}

// exact / solve / certify -----------------------------------------------------

struct InstanceArgs {
  std::string graph, partition;
};

void run_exact(const Common& c, const InstanceArgs& in, int cap) {
  check_threads(c.threads);
  const Graph g = load_edge_list(in.graph);
  ExactOptions opts{cap, c.threads};
  nlohmann::ordered_json j;
  if (in.partition.empty()) {
    const auto r = exact_min_bisection(g, opts);
    j = {{"optimal_cost", r.optimal_cost}, {"num_optimizers", r.optimizers.size()}, {"recovered", nullptr}};
  } else {
    const auto r = exact_min_bisection(PlantedInstance(g, load_partition(in.partition)), opts);
    j = {{"optimal_cost", r.optimal_cost},
         {"num_optimizers", r.optimizers.size()},
         {"recovered", r.planted_is_unique_optimum.value_or(false)}};
  }
  emit_flat(c, j);
}

void run_solve(const Common& c, const InstanceArgs& in, const MetricLpOptions& lp) {
  const auto t0 = std::chrono::steady_clock::now();
  const Graph g = load_edge_list(in.graph);
  nlohmann::ordered_json j;
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  };
  if (in.partition.empty()) {
    const auto rep = solve_metric_lp(g, lp);
    if (rep.status != LpStatus::Optimal) throw SolverError("metric LP did not reach optimality");
    j = {{"objective", rep.objective}, {"verdict", nullptr}, {"rounds", rep.rounds},
         {"constraints_added", rep.constraints_added}, {"runtime_ms", elapsed()}};
  } else {
    const PlantedInstance inst(g, load_partition(in.partition));
    const auto v = lp_recovery_verdict(inst, lp);
    j = {{"objective", v.lp_value},
         {"verdict", to_string(v.kind)},
         {"rounds", v.rounds},
         {"constraints_added", v.constraints_added},
         {"runtime_ms", elapsed()},
         {"planted_cost", v.planted_value},
         {"objective_match", v.objective_match},
         {"delta", v.delta}};
  }
  emit_flat(c, j);
}

struct CertifyArgs {
  InstanceArgs in;
  int n = 0, d_in = -1, d_out = -1;
};

void run_certify(const Common& c, const CertifyArgs& a) {
  PlantedInstance inst;
  if (!a.in.graph.empty()) {
    inst = load_instance(a.in.graph, a.in.partition);
  } else {
    if (a.n <= 0 || a.d_in < 0 || a.d_out < 0)
      throw ConfigError("certify needs --graph/--partition or --n/--d-in/--d-out");
    inst = regular_planted_instance(a.n, a.d_in, a.d_out);
  }
  const auto par = certificate_parameters(inst);
  nlohmann::ordered_json j = {{"n", par.n},
                              {"regular", par.regular},
                              {"d_in", par.d_in},
                              {"d_out", par.d_out},
                              {"omega_bar", nullable(par.omega_bar)},
                              {"condition_holds", par.condition_holds},
                              {"uniqueness_condition", par.uniqueness_condition},
                              {"dual_residual", nullptr},
                              {"dual_pass", nullptr},
                              {"unique", nullptr}};
  if (!par.regular) j["reason"] = par.reason;
  if (par.regular && (par.condition_holds || par.d_out == 0)) {
    const auto cert = build_dual_certificate(inst);
    const auto chk = verify_dual(cert, inst);
    j["dual_residual"] = chk.max_residual;
    j["dual_pass"] = chk.pass;
    if (chk.pass && par.n >= 8) j["unique"] = mangasarian_unique_check(inst, cert);
  }
  emit_flat(c, j);
}

// regularize ------------------------------------------------------------------

struct RegularizeArgs {
  InstanceArgs in;
  std::string mode;
  std::optional<int> d;
};

void run_regularize(const Common& c, const RegularizeArgs& a) {
  const Graph g = load_edge_list(a.in.graph);
  const int n = g.num_nodes();
  std::optional<Graph> out;
  int d = 0;
  if (a.mode == "add-bipartite") {
    if (a.in.partition.empty()) throw ConfigError("add-bipartite needs --partition");
    const auto side = load_partition(a.in.partition);
    const double m = n / 2.0;
    // Default target from the empirical cross density.
    d = a.d ? *a.d
            : static_cast<int>(std::ceil(static_cast<double>(g.num_edges()) / m + 2.0 * std::sqrt(m * std::log(m))));
    out = regularize_bipartite_add(g, side, d);
  } else if (a.mode == "sub-general") {
    const double p = n > 1 ? 2.0 * g.num_edges() / (static_cast<double>(n) * (n - 1)) : 0.0;
    d = a.d ? *a.d : static_cast<int>(std::floor(p * n - 2.0 * std::sqrt(n * std::log(static_cast<double>(n)))));
    out = regularize_subgraph(g, d);
  } else {
    throw ConfigError("unknown mode '" + a.mode + "'");
  }
  if (!out) throw SolverError("no " + std::to_string(d) + "-regular " +
                              (a.mode == "add-bipartite" ? "supergraph" : "subgraph") + " exists");
  Sink s(c.out);
  if (c.format == "json") {
    json j = {{"mode", a.mode}, {"d", d}, {"n", n}, {"edges_in", g.num_edges()},
              {"edges_out", out->num_edges()}, {"edges", edges_json(*out)}};
    s.os() << j.dump() << '\n';
  } else {
    write_edge_list(s.os(), *out);
  }
}

// distances -------------------------------------------------------------------

struct DistanceArgs {
  InstanceArgs in;
  std::string regime;
  int n = 800;
  double p = 0.9, q = 0.7, omega = 0.5, alpha = 1.0, beta = 1.0, eps = 0.1;
  int seeds = 10;
};

void run_distances(const Common& c, const DistanceArgs& a) {
  check_threads(c.threads);
  if (!a.regime.empty()) {
    DistanceExperimentConfig cfg;
    cfg.n = a.n;
    cfg.regime = {parse_regime(a.regime), a.p, a.q, a.omega, a.alpha, a.beta};
    cfg.seeds = a.seeds;
    cfg.base_seed = c.seed;
    cfg.eps = a.eps;
    cfg.threads = c.threads;
    const auto ex = run_distance_experiment(cfg);
    Sink s(c.out);
    if (c.format == "json") {
      json rows = json::array();
      for (const auto& r : ex.rows)
        rows.push_back({{"seed", r.seed}, {"connected", r.stats.connected}, {"rho_max", r.stats.rho_max},
                        {"rho_avg", r.stats.rho_avg}, {"rho_max_ok", r.rho_max_ok},
                        {"rho_avg_ok", r.rho_avg_ok}, {"pass", r.pass}});
      const auto& pr = ex.prediction;
      json j = {{"regime", a.regime},
                {"n", a.n},
                {"prediction",
                 {{"rho_max", pr.rho_max}, {"rho_max_low", pr.rho_max_low}, {"rho_max_high", pr.rho_max_high},
                  {"rho_avg", pr.rho_avg}, {"rho_avg_low", pr.rho_avg_low}, {"rho_avg_high", pr.rho_avg_high},
                  {"rho_max_exact", pr.rho_max_exact}}},
                {"passes", ex.passes},
                {"rows", rows}};
      s.os() << j.dump(2) << '\n';
    } else {
      s.os() << "seed,connected,rho_max,rho_avg,rho_max_ok,rho_avg_ok,pass\n";
      for (const auto& r : ex.rows) {
        char avg[32];
        std::snprintf(avg, sizeof avg, "%.10g", r.stats.rho_avg);
        s.os() << r.seed << ',' << r.stats.connected << ',' << r.stats.rho_max << ',' << avg << ','
               << r.rho_max_ok << ',' << r.rho_avg_ok << ',' << r.pass << '\n';
      }
    }
    return;
  }
  if (a.in.graph.empty()) throw ConfigError("distances needs --graph or --regime");
  const Graph g = load_edge_list(a.in.graph);
  const auto st = distance_stats(g, c.threads);
  nlohmann::ordered_json j = {{"n", st.n},
                              {"connected", st.connected},
                              {"rho_max", st.connected ? json(st.rho_max) : json(nullptr)},
                              {"rho_avg", nullable(st.rho_avg)},
                              {"c", nullable(st.c)},
                              {"b", nullable(st.b)}};
  if (!a.in.partition.empty()) {
    const PlantedInstance inst(g, load_partition(a.in.partition));
    if (st.connected && st.n >= 5) {
      const auto nr = nonrecovery_certificate(inst);
      j["applies"] = nr.applies;
      j["lhs"] = nr.lhs;
      j["rhs"] = nr.rhs;
      j["x_tilde_objective"] = nr.objective;
      j["audit_passed"] = nr.audit_passed;
    } else {
      j["applies"] = false;
    }
  }
  emit_flat(c, j);
}

// thresholds ------------------------------------------------------------------

struct ThresholdArgs {
  std::string regime = "very-dense";
  CurveGrid grid;
};

void run_thresholds(const Common& c, const ThresholdArgs& a) {
  CurveRegime r;
  if (a.regime == "very-dense") r = CurveRegime::VeryDense;
  else if (a.regime == "dense") r = CurveRegime::Dense;
  else if (a.regime == "log") r = CurveRegime::Log;
  else throw ConfigError("unknown regime '" + a.regime + "'");
  const auto curves = emit_curves(r, a.grid);
  Sink s(c.out);
  if (c.format == "json") {
    json arr = json::array();
    for (const auto& cv : curves) {
      json pts = json::array();
      for (const auto& [x, y] : cv.samples) pts.push_back({x, y});
      arr.push_back({{"curve", cv.name}, {"points", pts}});
    }
    s.os() << arr.dump(2) << '\n';
    return;
  }
  s.os() << "curve,abscissa,ordinate\n";
  char buf[80];
  for (const auto& cv : curves)
    for (const auto& [x, y] : cv.samples) {
      std::snprintf(buf, sizeof buf, "%.6g,%.12g", x, y);
      s.os() << cv.name << ',' << buf << '\n';
    }
}

// phase -----------------------------------------------------------------------

struct PhaseArgs {
  std::optional<int> n, trials;
  double p_lo = 0.5, p_hi = 0.95, q_lo = 0.5, q_hi = 0.95;
  std::optional<double> step;
  bool timing = false;
  std::string replay, envelope_out;
};

void run_phase(const Common& c, const PhaseArgs& a) {
  PhaseConfig cfg;
  if (!a.replay.empty()) {
    std::ifstream f(a.replay);
    if (!f) throw ConfigError("cannot open '" + a.replay + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    cfg = phase_from_json(buf.str()).config;
  } else {
    const double step = a.step.value_or(0.05);
    cfg.n = a.n.value_or(c.full ? 100 : 40);
    cfg.trials = a.trials.value_or(c.full ? 20 : 10);
    cfg.ps = axis(a.p_lo, a.p_hi, step);
    cfg.qs = axis(a.q_lo, a.q_hi, step);
    cfg.base_seed = c.seed;
    cfg.timing = a.timing;
  }
  cfg.threads = c.threads;
  const auto cells = run_phase_diagram(cfg);
  if (!a.envelope_out.empty()) {
    std::ofstream f(a.envelope_out);
    if (!f) throw ConfigError("cannot open '" + a.envelope_out + "' for writing");
    f << phase_to_json(cfg, cells) << '\n';
  }
  Sink s(c.out);
  if (c.format == "json") s.os() << phase_to_json(cfg, cells) << '\n';
  else write_phase_csv(s.os(), cells);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LP recovery of planted bisections: generation, solving, certificates and experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kLibraryVersion);

  Common gc, ec, sc, cc, rc, dc, tc, pc;

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Sample or construct a graph");
  add_common(g, gc, "text");
  g->add_option("--model", gen.model, "er | sbm | coupled | regular | tight")->capture_default_str();
  g->add_option("--n", gen.n, "Node count")->capture_default_str();
  g->add_option("--p", gen.p, "Within-side (or ER) edge probability")->capture_default_str();
  g->add_option("--q", gen.q, "Cross edge probability")->capture_default_str();
  g->add_option("--d-in", gen.d_in, "Inside degree (regular, tight)")->capture_default_str();
  g->add_option("--d-out", gen.d_out, "Cross degree (regular, tight)")->capture_default_str();
  g->add_flag("--fixed-labels", gen.fixed_labels, "Plant V1 = {0..n/2-1}");
  g->add_option("--partition-out", gen.partition_out, "Write the planted partition here");

  InstanceArgs ex_in;
  int cap = 20;
  auto* e = app.add_subcommand("exact", "Brute-force minimum bisection");
  add_common(e, ec, "json");
  e->add_option("--graph", ex_in.graph, "Edge-list file")->required();
  e->add_option("--partition", ex_in.partition, "Planted partition file");
  e->add_option("--cap", cap, "Largest n to enumerate")->capture_default_str();

  InstanceArgs so_in;
  MetricLpOptions lp;
  auto* s = app.add_subcommand("solve", "Solve the metric relaxation and classify the planted cut");
  add_common(s, sc, "json");
  s->add_option("--graph", so_in.graph, "Edge-list file")->required();
  s->add_option("--partition", so_in.partition, "Planted partition file");
  s->add_option("--tol", lp.separation_tol, "Triangle separation tolerance")->capture_default_str();
  s->add_option("--batch", lp.batch, "Rows added per separation round")->capture_default_str();
  s->add_flag("--probe,!--no-probe", lp.probe, "Run the uniqueness probe");

  CertifyArgs cert;
  auto* c = app.add_subcommand("certify", "Dual certificate for a regular planted instance");
  add_common(c, cc, "json");
  c->add_option("--graph", cert.in.graph, "Edge-list file");
  c->add_option("--partition", cert.in.partition, "Planted partition file");
  c->add_option("--n", cert.n, "Build the circulant instance with this n");
  c->add_option("--d-in", cert.d_in, "Inside degree of the built instance");
  c->add_option("--d-out", cert.d_out, "Cross degree of the built instance");

  RegularizeArgs reg;
  auto* r = app.add_subcommand("regularize", "Regular super- or subgraph via factors");
  add_common(r, rc, "text");
  r->add_option("--graph", reg.in.graph, "Edge-list file")->required();
  r->add_option("--partition", reg.in.partition, "Partition file (add-bipartite)");
  r->add_option("--mode", reg.mode, "add-bipartite | sub-general")->required()
      ->check(CLI::IsMember({"add-bipartite", "sub-general"}));
  r->add_option("--d", reg.d, "Target degree (default from the edge density)");

  DistanceArgs dist;
  auto* d = app.add_subcommand("distances", "Distance statistics and the non-recovery point");
  add_common(d, dc, "json");
  d->add_option("--graph", dist.in.graph, "Edge-list file");
  d->add_option("--partition", dist.in.partition, "Planted partition file");
  d->add_option("--regime", dist.regime, "Run the sampled experiment: very-dense | dense | log");
  d->add_option("--n", dist.n, "Experiment node count")->capture_default_str();
  d->add_option("--p", dist.p, "Very dense: within probability")->capture_default_str();
  d->add_option("--q", dist.q, "Very dense: cross probability")->capture_default_str();
  d->add_option("--omega", dist.omega, "Dense: exponent")->capture_default_str();
  d->add_option("--alpha", dist.alpha, "Dense/log: within scale")->capture_default_str();
  d->add_option("--beta", dist.beta, "Dense/log: cross scale")->capture_default_str();
  d->add_option("--seeds", dist.seeds, "Experiment repetitions")->capture_default_str();
  d->add_option("--eps", dist.eps, "Relative band half-width")->capture_default_str();

  ThresholdArgs th;
  auto* t = app.add_subcommand("thresholds", "Emit threshold curves");
  add_common(t, tc, "csv");
  t->add_option("--regime", th.regime, "very-dense | dense | log")->capture_default_str();
  t->add_option("--lo", th.grid.lo, "Smallest abscissa")->capture_default_str();
  t->add_option("--hi", th.grid.hi, "Largest abscissa")->capture_default_str();
  t->add_option("--step", th.grid.step, "Abscissa step")->capture_default_str();
  t->add_option("--alpha", th.grid.alpha, "Dense: ratio curve parameter")->capture_default_str();
  t->add_option("--omega", th.grid.omegas, "Dense: exponents for the per-omega curves");

  PhaseArgs ph;
  auto* p = app.add_subcommand("phase", "Monte Carlo phase diagram of LP recovery");
  add_common(p, pc, "csv");
  p->add_option("--n", ph.n, "Node count (40, or 100 with --full)");
  p->add_option("--trials", ph.trials, "Trials per cell (10, or 20 with --full)");
  p->add_option("--p-lo", ph.p_lo)->capture_default_str();
  p->add_option("--p-hi", ph.p_hi)->capture_default_str();
  p->add_option("--q-lo", ph.q_lo)->capture_default_str();
  p->add_option("--q-hi", ph.q_hi)->capture_default_str();
  p->add_option("--step", ph.step, "Grid step (0.05)");
  p->add_flag("--timing", ph.timing, "Record wall-clock time per trial");
  p->add_option("--replay", ph.replay, "Rerun the configuration stored in a JSON envelope");
  p->add_option("--envelope-out", ph.envelope_out, "Also write the JSON envelope here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*g) run_gen(gc, gen);
    else if (*e) run_exact(ec, ex_in, cap);
    else if (*s) run_solve(sc, so_in, lp);
    else if (*c) run_certify(cc, cert);
    else if (*r) run_regularize(rc, reg);
    else if (*d) run_distances(dc, dist);
    else if (*t) run_thresholds(tc, th);
    else if (*p) run_phase(pc, ph);
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return 2;
  } catch (const SolverError& err) {
    std::cerr << "solver error: " << err.what() << '\n';
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 3;
  }
  return 0;
}
