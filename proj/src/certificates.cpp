#include "bisectlp/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bisectlp/error.hpp"
#include "bisectlp/linalg.hpp"
#include "bisectlp/metric_lp.hpp"
#include "bisectlp/regularity.hpp"

namespace bisectlp {

namespace {

double adj(const Graph& g, int i, int j) { return g.has_edge(i, j) ? 1.0 : 0.0; }

// omega_bar / d_out, with the d_out = 0 certificate having no such term.
double slope(const DualCertificate& c) {
  return c.d_out == 0 ? 0.0 : c.omega_bar / c.d_out;
}

void note(DualCheck& out, const std::string& msg) {
  if (out.failures.size() < 8) out.failures.push_back(msg);
}

}  // namespace

CertificateParameters certificate_parameters(const PlantedInstance& inst) {
  CertificateParameters p;
  const int n = inst.num_nodes();
  p.n = n;
  if (n < 4) {
    p.reason = "need n >= 4";
    return p;
  }
  int din = -1, dout = -1;
  for (int v = 0; v < n; ++v) {
    const int a = inst.deg_in(v), b = inst.deg_out(v);
    if (din < 0) {
      din = a;
      dout = b;
    }
    if (a != din && p.reason.empty())
      p.reason = "inside graphs are not regular (node " + std::to_string(v) + " has inside degree " +
                 std::to_string(a) + ", expected " + std::to_string(din) + ")";
    if (b != dout && p.reason.empty())
      p.reason = "cross graph is not regular (node " + std::to_string(v) + " has cross degree " +
                 std::to_string(b) + ", expected " + std::to_string(dout) + ")";
  }
  p.regular = p.reason.empty();
  p.d_in = din;
  p.d_out = dout;
  const int denom = n - 4 * din - 4;
  p.omega_bar = denom == 0 ? std::numeric_limits<double>::quiet_NaN() : 2.0 * dout / denom;
  p.condition_holds = p.regular && 4 * (din - dout) >= n - 4;
  p.uniqueness_condition = p.regular && 4 * (din - dout) >= n;
  return p;
}

double DualCertificate::gamma_at(int i, int j) const { return gamma[pair_index(i, j, n)]; }

double DualCertificate::lambda(int p, int q, int r) const {
  const auto& b = instance.planted;
  if (p == q || p == r || q == r) throw ConfigError("certificate: lambda needs distinct nodes");
  if (b.same_side(p, q)) return 0.0;
  // The endpoint on r's side forms the inside pair (s, r); t is across.
  const int s = b.same_side(p, r) ? p : q;
  const int t = s == p ? q : p;
  const Graph& g = instance.graph;
  if (!g.has_edge(s, r)) return 0.0;
  const double shift = (adj(g, s, t) - adj(g, r, t)) / 2.0 * slope(*this);
  return std::max(0.0, shift) + gamma_at(s, r);
}

double DualCertificate::mu(int i, int j, int k) const {
  const auto& b = instance.planted;
  if (i == j || i == k || j == k) throw ConfigError("certificate: mu needs distinct nodes");
  int u, v, w;
  if (b.same_side(i, j) && b.same_side(i, k)) return 0.0;
  if (b.same_side(i, j)) u = i, v = j, w = k;
  else if (b.same_side(i, k)) u = i, v = k, w = j;
  else u = j, v = k, w = i;
  const Graph& g = instance.graph;
  if (g.has_edge(u, v)) return 0.0;
  return -(adj(g, u, w) + adj(g, v, w)) / 2.0 * slope(*this);
}

double DualCertificate::dual_objective() const {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) s += mu(i, j, k);
  return -2.0 * s - n * static_cast<double>(n) / 4.0 * omega_bar;
}

DualCertificate build_dual_certificate(const PlantedInstance& inst) {
  const auto p = certificate_parameters(inst);
  if (!p.regular) throw ConfigError("certificate: " + p.reason);
  if (p.d_out > 0 && !p.condition_holds) {
    std::ostringstream msg;
    msg << "certificate: d_in - d_out = " << p.d_in - p.d_out << " is below n/4 - 1 = "
        << p.n / 4.0 - 1.0 << "; the planted cut need not be optimal";
    throw ConfigError(msg.str());
  }
  DualCertificate c;
  c.instance = inst;
  c.n = p.n;
  c.d_in = p.d_in;
  c.d_out = p.d_out;
  c.omega_bar = p.d_out == 0 ? 0.0 : p.omega_bar;
  const int n = c.n;
  c.gamma.assign(num_pairs(n), 0.0);
  const Graph& g = inst.graph;
  for (const auto& e : g.edges()) {
    if (!inst.planted.same_side(e.u, e.v)) continue;
    double s = 0.0;
    for (int k = 0; k < n; ++k)
      if (!inst.planted.same_side(e.u, k)) s += std::abs(adj(g, e.u, k) - adj(g, e.v, k));
    const double gam = (1.0 + c.omega_bar + slope(c) / 2.0 * s) / n;
    if (gam < -1e-12) throw SolverError("certificate: negative gamma on an inside edge");
    c.gamma[pair_index(e.u, e.v, n)] = std::max(0.0, gam);
  }
  return c;
}

DualCheck verify_dual(const DualCertificate& cert, const PlantedInstance& inst, double tol) {
  DualCheck out;
  const int n = inst.num_nodes();
  if (cert.n != n) {
    note(out, "certificate built for a different node count");
    return out;
  }
  const Graph& g = inst.graph;
  const auto& side = inst.planted;
  auto x = [&](int i, int j) { return side.same_side(i, j) ? 0.0 : 1.0; };

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double r = adj(g, i, j) + cert.omega_bar;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        r += cert.lambda(i, j, k) - cert.lambda(i, k, j) - cert.lambda(j, k, i) + cert.mu(i, j, k);
      }
      if (std::abs(r) > out.max_residual) out.max_residual = std::abs(r);
      if (std::abs(r) > tol)
        note(out, "dual equality for pair (" + std::to_string(i) + "," + std::to_string(j) +
                      ") off by " + std::to_string(r));
    }

  out.min_multiplier = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const int tri[3][3] = {{i, j, k}, {i, k, j}, {j, k, i}};
        for (const auto& t : tri) {
          const double l = cert.lambda(t[0], t[1], t[2]);
          out.min_multiplier = std::min(out.min_multiplier, l);
          const double slack = x(t[0], t[2]) + x(t[1], t[2]) - x(t[0], t[1]);
          if (l > tol && slack != 0.0) {
            ++out.slackness_violations;
            note(out, "rooted row with slack carries a positive multiplier");
          }
        }
        const double m = cert.mu(i, j, k);
        out.min_multiplier = std::min(out.min_multiplier, m);
        if (m > tol && x(i, j) + x(i, k) + x(j, k) != 2.0) {
          ++out.slackness_violations;
          note(out, "perimeter row with slack carries a positive multiplier");
        }
      }
  if (out.min_multiplier < -tol) note(out, "negative multiplier");

  out.dual_objective = cert.dual_objective();
  out.planted_objective = static_cast<double>(inst.num_cross_edges());
  const bool gap_ok = std::abs(out.dual_objective - out.planted_objective) <=
                      std::max(tol, 1e-8) * (1.0 + out.planted_objective);
  if (!gap_ok) note(out, "dual objective differs from the planted cut value");
  out.pass = out.max_residual <= tol && out.min_multiplier >= -tol &&
             out.slackness_violations == 0 && gap_ok;
  return out;
}

bool mangasarian_unique_check(const PlantedInstance& inst, const DualCertificate& cert) {
  const int n = inst.num_nodes();
  if (n < 8) throw ConfigError("uniqueness check: needs n >= 8");
  const auto check = verify_dual(cert, inst);
  if (!check.pass)
    throw ConfigError("uniqueness check: certificate does not verify: " +
                      (check.failures.empty() ? std::string("?") : check.failures.front()));
  const auto planted = cut_vector(inst.planted);
  std::vector<SparseVec> a(1), ck, cl;
  for (std::size_t p = 0; p < num_pairs(n); ++p) a[0].push_back({static_cast<int>(p), 1.0});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        for (int kind = 0; kind < 4; ++kind) {
          TriangleRow row{i, j, k, kind, 0.0};
          if (row.lhs_minus_rhs(planted) != 0.0) continue;
          double mult;
          switch (kind) {
            case 0: mult = cert.lambda(i, j, k); break;
            case 1: mult = cert.lambda(i, k, j); break;
            case 2: mult = cert.lambda(j, k, i); break;
            default: mult = cert.mu(i, j, k);
          }
          // Rows in >= form.
          auto coeffs = row.coefficients(n);
          for (auto& e : coeffs) e.value = -e.value;
          (mult > kPositiveMultiplier ? ck : cl).push_back(std::move(coeffs));
        }
  return !cone_has_nonzero(a, ck, cl, static_cast<int>(num_pairs(n))).nonzero;
}

FactorRecoveryCheck check_factor_recovery(const PlantedInstance& inst) {
  FactorRecoveryCheck out;
  const int n = inst.num_nodes();
  const auto params = degree_params(inst);
  out.d_in = params.d_in;
  out.d_out = params.d_out;
  std::vector<Edge> inside = inst.inside_edges(0);
  const auto in2 = inst.inside_edges(1);
  inside.insert(inside.end(), in2.begin(), in2.end());
  const Graph g_in(n, inside);
  const Graph g_out(n, inst.cross_edges());

  out.d_in_reg = regularize_subgraph(g_in, out.d_in);
  if (!out.d_in_reg)
    out.reasons.push_back("inside graphs have no spanning " + std::to_string(out.d_in) +
                          "-regular subgraph");
  if (out.d_out <= n / 2) {
    out.d_out_reg = regularize_bipartite_add(g_out, inst.planted, out.d_out);
  }
  if (!out.d_out_reg)
    out.reasons.push_back("cross graph is not contained in a " + std::to_string(out.d_out) +
                          "-regular bipartite graph");
  const bool gap = 4 * (out.d_in - out.d_out) >= n;
  if (!gap)
    out.reasons.push_back("d_in - d_out = " + std::to_string(out.d_in - out.d_out) +
                          " is below n/4");
  out.applies = out.d_in_reg && out.d_out_reg && gap;
  return out;
}

}  // namespace bisectlp
