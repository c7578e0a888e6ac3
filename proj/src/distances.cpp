#include "bisectlp/distances.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>

#include "bisectlp/error.hpp"

namespace bisectlp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Hop distances from s; -1 where unreachable.
void bfs(const Graph& g, int s, std::vector<int>& dist, std::vector<int>& queue) {
  std::fill(dist.begin(), dist.end(), -1);
  queue.clear();
  dist[s] = 0;
  queue.push_back(s);
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const int v = queue[h];
    for (int w : g.neighbors(v))
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
}

struct Partial {
  std::int64_t sum = 0;
  int max = 0;
  bool disconnected = false;
};

}  // namespace

double c_value(double rho_max, double rho_avg, int n) {
  if (n < 5) throw ConfigError("c(G) needs n >= 5");
  return std::max(0.0, (3.0 * rho_max - 4.0 * rho_avg) / (1.0 - 4.0 / n));
}

double b_value(double c, double rho_avg, int n) {
  return (1.0 + c) / (2.0 * rho_avg + 2.0 * c * (1.0 - 1.0 / n));
}

DistanceStats distance_stats(const Graph& g, int threads) {
  const int n = g.num_nodes();
  DistanceStats st;
  st.n = n;
  threads = std::clamp(threads, 1, std::max(1, n));
  std::vector<Partial> parts(threads);
  auto work = [&](int t) {
    std::vector<int> dist(n), queue;
    queue.reserve(n);
    Partial& p = parts[t];
    for (int s = t; s < n; s += threads) {
      bfs(g, s, dist, queue);
      for (int v = s + 1; v < n; ++v) {
        if (dist[v] < 0) {
          p.disconnected = true;
          return;
        }
        p.sum += dist[v];
        p.max = std::max(p.max, dist[v]);
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  std::int64_t sum = 0;
  st.connected = true;
  st.rho_max = 0;
  for (const auto& p : parts) {
    if (p.disconnected) st.connected = false;
    sum += p.sum;
    st.rho_max = std::max(st.rho_max, p.max);
  }
  if (!st.connected) {
    st.rho_max = -1;
    st.rho_avg = st.c = st.b = kNaN;
    return st;
  }
  st.rho_avg = n == 0 ? 0.0 : 2.0 * static_cast<double>(sum) / (static_cast<double>(n) * n);
  if (n >= 5) {
    st.c = c_value(st.rho_max, st.rho_avg, n);
    st.b = b_value(st.c, st.rho_avg, n);
  } else {
    st.c = st.b = kNaN;
  }
  return st;
}

std::vector<int> all_pairs_distances(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<int> out(static_cast<std::size_t>(n) * n), dist(n), queue;
  for (int s = 0; s < n; ++s) {
    bfs(g, s, dist, queue);
    std::copy(dist.begin(), dist.end(), out.begin() + static_cast<std::size_t>(s) * n);
  }
  return out;
}

NonRecoveryCertificate nonrecovery_certificate(const PlantedInstance& inst) {
  const Graph& g = inst.graph;
  const int n = g.num_nodes();
  if (n < 5) throw ConfigError("non-recovery certificate: needs n >= 5");
  NonRecoveryCertificate out;
  out.stats = distance_stats(g);
  if (!out.stats.connected) throw ConfigError("non-recovery certificate: graph is disconnected");
  const auto rho = all_pairs_distances(g);
  const double c = out.stats.c;

  double total = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) total += rho[static_cast<std::size_t>(i) * n + j] + c;
  const double scale = 4.0 / (static_cast<double>(n) * n) * total;
  out.x_tilde.n = n;
  out.x_tilde.values.resize(num_pairs(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      out.x_tilde.values[pair_index(i, j, n)] = (rho[static_cast<std::size_t>(i) * n + j] + c) / scale;

  out.lhs = out.stats.b * static_cast<double>(g.num_edges());
  out.rhs = static_cast<double>(inst.num_cross_edges());
  out.applies = out.lhs < out.rhs;
  for (const auto& e : g.edges()) out.objective += out.x_tilde.at(e.u, e.v);

  out.balance_error = std::abs(out.x_tilde.sum() - n * static_cast<double>(n) / 4.0);
  double worst = -kInf;
  const auto& x = out.x_tilde;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const double a = x.at(i, j), b = x.at(i, k), d = x.at(j, k);
        worst = std::max({worst, a - b - d, b - a - d, d - a - b, a + b + d - 2.0});
      }
  out.max_violation = worst;
  out.audit_passed = out.balance_error <= 1e-9 * n * n && out.max_violation <= 1e-9;
  return out;
}

const char* to_string(DistanceRegime r) {
  switch (r) {
    case DistanceRegime::VeryDense: return "very-dense";
    case DistanceRegime::Dense: return "dense";
    case DistanceRegime::Log: return "log";
  }
  return "?";
}

std::pair<double, double> regime_probabilities(int n, const RegimeSpec& s) {
  switch (s.regime) {
    case DistanceRegime::VeryDense: return {s.p, s.q};
    case DistanceRegime::Dense: {
      const double f = std::pow(static_cast<double>(n), -s.omega);
      return {s.alpha * f, s.beta * f};
    }
    case DistanceRegime::Log: {
      const double f = std::log(static_cast<double>(n)) / n;
      return {s.alpha * f, s.beta * f};
    }
  }
  return {0.0, 0.0};
}

RegimePrediction predicted_regime(int n, const RegimeSpec& s, double eps) {
  if (n < 3) throw ConfigError("regime prediction: need n >= 3");
  if (!(eps >= 0.0 && eps < 1.0)) throw ConfigError("regime prediction: need 0 <= eps < 1");
  RegimePrediction out;
  switch (s.regime) {
    case DistanceRegime::VeryDense: {
      if (!(0.0 < s.q && s.q < s.p && s.p < 1.0))
        throw ConfigError("very dense regime: need 0 < q < p < 1");
      out.rho_max = 2.0;
      out.rho_max_exact = true;
      out.rho_avg = 2.0 - (s.p + s.q) / 2.0;
      break;
    }
    case DistanceRegime::Dense: {
      if (!(s.omega > 0.0 && s.omega < 1.0)) throw ConfigError("dense regime: need 0 < omega < 1");
      if (!(s.alpha > 0.0 && s.beta > 0.0)) throw ConfigError("dense regime: need alpha, beta > 0");
      const double k = 1.0 / (1.0 - s.omega);
      out.rho_max_exact = true;
      if (inverse_gap_is_integer(s.omega)) {
        const double kk = std::round(k);
        out.rho_max = kk + 1.0;
        out.rho_avg = kk + std::exp(-std::pow(s.alpha, kk));
      } else {
        out.rho_max = std::ceil(k);
        out.rho_avg = std::ceil(k);
      }
      break;
    }
    case DistanceRegime::Log: {
      if (!(s.alpha > 0.0 && s.beta > 0.0)) throw ConfigError("log regime: need alpha, beta > 0");
      if (!((s.alpha + s.beta) / 2.0 > 1.0))
        throw ConfigError("log regime: predictions need (alpha + beta)/2 > 1");
      // log n / log(average degree); asymptotically log n / log log n.
      const double ln = std::log(static_cast<double>(n));
      out.rho_max = ln / std::log((s.alpha + s.beta) / 2.0 * ln);
      out.rho_avg = out.rho_max;
      break;
    }
  }
  if (out.rho_max_exact) {
    out.rho_max_low = out.rho_max_high = out.rho_max;
  } else {
    out.rho_max_low = (1.0 - eps) * out.rho_max;
    out.rho_max_high = (1.0 + eps) * out.rho_max;
  }
  out.rho_avg_low = (1.0 - eps) * out.rho_avg;
  out.rho_avg_high = std::min((1.0 + eps) * out.rho_avg, out.rho_max_high);
  return out;
}

}  // namespace bisectlp
