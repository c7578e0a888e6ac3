#include "bisectlp/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "bisectlp/error.hpp"
#include "bisectlp/generators.hpp"
#include "bisectlp/random.hpp"

namespace bisectlp {

using nlohmann::json;

namespace {

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

VerdictKind verdict_from_string(const std::string& s) {
  for (auto k : {VerdictKind::Recovered, VerdictKind::AlternateOptimum, VerdictKind::FractionalOptimum})
    if (s == to_string(k)) return k;
  throw ConfigError("unknown verdict kind '" + s + "'");
}

void validate(const PhaseConfig& c) {
  if (c.n < 4 || c.n % 2 != 0) throw ConfigError("phase: n must be even and at least 4");
  if (c.trials < 1) throw ConfigError("phase: trials must be at least 1");
  if (c.threads < 1) throw ConfigError("phase: threads must be at least 1");
  if (c.ps.empty() || c.qs.empty()) throw ConfigError("phase: empty grid axis");
  for (const auto* ax : {&c.ps, &c.qs})
    for (double v : *ax)
      if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("phase: probabilities must lie in [0, 1]");
}

TrialRecord run_trial(const PhaseConfig& c, double p, double q, std::uint64_t seed) {
  TrialRecord r;
  r.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto inst = sample_sbm(c.n, p, q, seed);
    const auto v = lp_recovery_verdict(inst, c.lp);
    r.kind = v.kind;
    r.objective_match = v.objective_match;
    r.delta = v.delta;
    r.gap = v.planted_value - v.lp_value;
  } catch (const SolverError& e) {
    r.kind = VerdictKind::FractionalOptimum;
    r.error = e.what();
  }
  if (c.timing)
    r.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

json lp_options_json(const MetricLpOptions& o) {
  return {{"separation_tol", o.separation_tol}, {"batch", o.batch},
          {"drop_after", o.drop_after},         {"drop_slack", o.drop_slack},
          {"max_rounds", o.max_rounds},         {"probe", o.probe},
          {"objective_tol", o.objective_tol},   {"probe_tol", o.probe_tol},
          {"face_fix_tol", o.face_fix_tol},
          {"lp",
           {{"primal", o.lp.primal},
            {"dual", o.lp.dual},
            {"pivot", o.lp.pivot},
            {"stall_limit", o.lp.stall_limit},
            {"max_iterations", o.lp.max_iterations},
            {"refactor_every", o.lp.refactor_every}}}};
}

MetricLpOptions lp_options_from(const json& j) {
  MetricLpOptions o;
  o.separation_tol = j.at("separation_tol");
  o.batch = j.at("batch");
  o.drop_after = j.at("drop_after");
  o.drop_slack = j.at("drop_slack");
  o.max_rounds = j.at("max_rounds");
  o.probe = j.at("probe");
  o.objective_tol = j.at("objective_tol");
  o.probe_tol = j.at("probe_tol");
  o.face_fix_tol = j.at("face_fix_tol");
  const auto& l = j.at("lp");
  o.lp.primal = l.at("primal");
  o.lp.dual = l.at("dual");
  o.lp.pivot = l.at("pivot");
  o.lp.stall_limit = l.at("stall_limit");
  o.lp.max_iterations = l.at("max_iterations");
  o.lp.refactor_every = l.at("refactor_every");
  return o;
}

}  // namespace

std::vector<double> axis(double lo, double hi, double step) {
  if (!(step > 0.0)) throw ConfigError("axis: step must be positive");
  if (!(hi >= lo)) throw ConfigError("axis: hi below lo");
  std::vector<double> out;
  const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  // Round through a short decimal so that values print and parse back
  // identically.
  for (long i = 0; i <= count; ++i) out.push_back(std::stod(fmt(lo + static_cast<double>(i) * step)));
  return out;
}

std::uint64_t trial_seed(std::uint64_t base, std::size_t cell, int trial) {
  return derive_seed({base, static_cast<std::uint64_t>(cell), static_cast<std::uint64_t>(trial)});
}

std::vector<CellResult> run_phase_diagram(const PhaseConfig& config) {
  validate(config);
  std::vector<CellResult> cells;
  for (std::size_t i = 0; i < config.ps.size(); ++i)
    for (std::size_t j = 0; j < config.qs.size(); ++j) {
      const double p = config.ps[i], q = config.qs[j];
      if (config.require_q_below_p && !(q < p)) continue;
      CellResult c;
      c.cell_index = i * config.qs.size() + j;
      c.p = p;
      c.q = q;
      c.n = config.n;
      c.trials = config.trials;
      c.records.resize(config.trials);
      cells.push_back(std::move(c));
    }

  const std::size_t total = cells.size() * static_cast<std::size_t>(config.trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto worker = [&] {
    while (true) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total) return;
      auto& cell = cells[task / config.trials];
      const int t = static_cast<int>(task % config.trials);
      try {
        cell.records[t] = run_trial(config, cell.p, cell.q, trial_seed(config.base_seed, cell.cell_index, t));
      } catch (...) {
        std::lock_guard<std::mutex> g(failure_lock);
        if (!failure) failure = std::current_exception();
        next.store(total);
      }
    }
  };
  const int threads = static_cast<int>(std::min<std::size_t>(config.threads, std::max<std::size_t>(total, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (auto& c : cells) {
    double gap = 0.0, ms = 0.0;
    int ok = 0;
    for (const auto& r : c.records) {
      if (!r.error.empty()) {
        ++c.errors;
        continue;
      }
      ++ok;
      gap += r.gap;
      ms += r.ms;
      if (r.kind == VerdictKind::Recovered) ++c.successes;
    }
    c.mean_gap = ok ? gap / ok : 0.0;
    c.mean_ms = ok ? ms / ok : 0.0;
  }
  return cells;
}

void write_phase_csv(std::ostream& out, const std::vector<CellResult>& cells) {
  out << "p,q,n,trials,successes,mean_gap,mean_ms\n";
  for (const auto& c : cells)
    out << fmt(c.p) << ',' << fmt(c.q) << ',' << c.n << ',' << c.trials << ',' << c.successes << ','
        << fmt(c.mean_gap) << ',' << fmt(c.mean_ms, "%.3f") << '\n';
}

std::vector<CellResult> read_phase_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "p,q,n,trials,successes,mean_gap,mean_ms")
    throw ConfigError("phase csv: missing or unexpected header");
  std::vector<CellResult> cells;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    if (f.size() != 7) throw ConfigError("phase csv: line " + std::to_string(lineno) + " has wrong field count");
    try {
      CellResult c;
      c.p = std::stod(f[0]);
      c.q = std::stod(f[1]);
      c.n = std::stoi(f[2]);
      c.trials = std::stoi(f[3]);
      c.successes = std::stoi(f[4]);
      c.mean_gap = std::stod(f[5]);
      c.mean_ms = std::stod(f[6]);
      if (c.successes < 0 || c.successes > c.trials) throw ConfigError("successes out of range");
      cells.push_back(c);
    } catch (const std::exception& e) {
      throw ConfigError("phase csv: line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cells;
}

std::string phase_to_json(const PhaseConfig& config, const std::vector<CellResult>& cells) {
  json cfg = {{"n", config.n},
              {"trials", config.trials},
              {"ps", config.ps},
              {"qs", config.qs},
              {"require_q_below_p", config.require_q_below_p},
              {"base_seed", config.base_seed},
              {"threads", config.threads},
              {"timing", config.timing},
              {"lp", lp_options_json(config.lp)}};
  json jc = json::array();
  for (const auto& c : cells) {
    json recs = json::array();
    for (const auto& r : c.records)
      recs.push_back({{"seed", r.seed},
                      {"kind", to_string(r.kind)},
                      {"objective_match", r.objective_match},
                      {"delta", r.delta},
                      {"gap", r.gap},
                      {"ms", r.ms},
                      {"error", r.error}});
    jc.push_back({{"cell_index", c.cell_index},
                  {"p", c.p},
                  {"q", c.q},
                  {"n", c.n},
                  {"trials", c.trials},
                  {"successes", c.successes},
                  {"errors", c.errors},
                  {"mean_gap", c.mean_gap},
                  {"mean_ms", c.mean_ms},
                  {"records", recs}});
  }
  json env = {{"version", kLibraryVersion}, {"config", cfg}, {"cells", jc}};
  return env.dump(1);
}

PhaseEnvelope phase_from_json(const std::string& text) {
  PhaseEnvelope env;
  try {
    const json j = json::parse(text);
    env.version = j.at("version");
    const auto& c = j.at("config");
    env.config.n = c.at("n");
    env.config.trials = c.at("trials");
    env.config.ps = c.at("ps").get<std::vector<double>>();
    env.config.qs = c.at("qs").get<std::vector<double>>();
    env.config.require_q_below_p = c.at("require_q_below_p");
    env.config.base_seed = c.at("base_seed");
    env.config.threads = c.at("threads");
    env.config.timing = c.at("timing");
    env.config.lp = lp_options_from(c.at("lp"));
    for (const auto& jc : j.at("cells")) {
      CellResult cell;
      cell.cell_index = jc.at("cell_index");
      cell.p = jc.at("p");
      cell.q = jc.at("q");
      cell.n = jc.at("n");
      cell.trials = jc.at("trials");
      cell.successes = jc.at("successes");
      cell.errors = jc.at("errors");
      cell.mean_gap = jc.at("mean_gap");
      cell.mean_ms = jc.at("mean_ms");
      for (const auto& jr : jc.at("records")) {
        TrialRecord r;
        r.seed = jr.at("seed");
        r.kind = verdict_from_string(jr.at("kind"));
        r.objective_match = jr.at("objective_match");
        r.delta = jr.at("delta");
        r.gap = jr.at("gap");
        r.ms = jr.at("ms");
        r.error = jr.at("error");
        cell.records.push_back(r);
      }
      env.cells.push_back(std::move(cell));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("phase json: ") + e.what());
  }
  return env;
}

std::vector<ContourPoint> half_success_contour(const std::vector<CellResult>& cells) {
  std::map<double, std::vector<const CellResult*>> rows;
  for (const auto& c : cells) rows[c.p].push_back(&c);
  std::vector<ContourPoint> out;
  for (auto& [p, row] : rows) {
    std::sort(row.begin(), row.end(), [](auto* a, auto* b) { return a->q < b->q; });
    ContourPoint pt{p, std::numeric_limits<double>::quiet_NaN(), false};
    double prev_q = 0.0, prev_f = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const double f = static_cast<double>(row[i]->successes) / row[i]->trials;
      if (f < 0.5) {
        pt.crosses = true;
        pt.q50 = i == 0 ? row[i]->q : prev_q + (prev_f - 0.5) / (prev_f - f) * (row[i]->q - prev_q);
        break;
      }
      prev_q = row[i]->q;
      prev_f = f;
    }
    out.push_back(pt);
  }
  return out;
}

DistanceExperiment run_distance_experiment(const DistanceExperimentConfig& config) {
  if (config.seeds < 1) throw ConfigError("distance experiment: seeds must be at least 1");
  DistanceExperiment out;
  out.prediction = predicted_regime(config.n, config.regime, config.eps);
  const auto [p, q] = regime_probabilities(config.n, config.regime);
  const auto& pr = out.prediction;
  for (int s = 0; s < config.seeds; ++s) {
    DistanceRow row;
    row.seed = derive_seed({config.base_seed, static_cast<std::uint64_t>(s)});
    const auto inst = sample_sbm(config.n, p, q, row.seed);
    row.stats = distance_stats(inst.graph, config.threads);
    if (row.stats.connected) {
      const double rm = row.stats.rho_max;
      row.rho_max_ok = pr.rho_max_exact ? rm == pr.rho_max : (rm >= pr.rho_max_low && rm <= pr.rho_max_high);
      row.rho_avg_ok = row.stats.rho_avg >= pr.rho_avg_low && row.stats.rho_avg <= pr.rho_avg_high;
    }
    row.pass = row.rho_max_ok && row.rho_avg_ok;
    if (row.pass) ++out.passes;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace bisectlp
