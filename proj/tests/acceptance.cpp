// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gis/moments.hpp"
#include "gis/repkit.hpp"
#include "gis/states.hpp"
#include "gis/sweep.hpp"
#include "gis/verify.hpp"

using namespace gis;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s) {
    o.pass = false;
    o.detail += " (over time budget " + format_double(budget_s) + " s)";
  }
  failures += !o.pass;
  char t[32];
  std::snprintf(t, sizeof t, "%.2f s", secs);
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " [" << name << "]: " << o.detail << " [" << t
            << "]" << std::endl;
}

std::string sci(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", x);
  return b;
}

const std::vector<double> kSpins{0.5, 1.0, 1.5, 2.0, 5.0, 10.0};

std::vector<cplx> random_lambdas(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<cplx> out;
  while (static_cast<int>(out.size()) < count) {
    const cplx l(u(rng), u(rng));
    if (std::abs(l) > 3.0 || std::abs(l - 1.0) < 1e-3 || std::abs(l + 1.0) < 1e-3) continue;
    out.push_back(l);
  }
  return out;
}

struct Su11Case {
  double k;
  cplx lambda, z;
};

std::vector<Su11Case> su11_grid() {
  const std::vector<cplx> lambdas{{0.3, 0.4}, {1.0, 0.0}, {1.5, -0.5}, {0.8, 1.2}, {2.5, 0.3}};
  const std::vector<cplx> zs{{0.0, 0.0}, {0.5, 0.0}, {1.0, 1.0}, {-0.7, 0.3}, {0.0, 2.0}};
  std::vector<Su11Case> out;
  for (double k : {0.25, 0.5, 1.5})
    for (const cplx l : lambdas)
      for (const cplx z : zs) out.push_back({k, l, z});
  return out;
}

}  // namespace

int main() {
  std::cout.setf(std::ios::unitbuf);

  run(1, "su2 spectrum", 10.0, [] {
    std::mt19937_64 rng(20240611);
    double worst = 0.0;
    int checked = 0;
    for (double j : kSpins) {
      const Representation rep = build_su2_rep(j);
      for (const cplx lambda : random_lambdas(rng, 20)) {
        const Su2Spectrum s = solve_su2_gis(rep, lambda);
        const cplx root = std::sqrt(lambda * lambda - 1.0);
        std::vector<cplx> got;
        for (const auto& p : s.pairs) got.push_back(p.z);
        if (got.size() != rep.dim()) return Outcome{false, "wrong eigenvalue count"};
        for (int n = 0; n < static_cast<int>(rep.dim()); ++n) {
          const cplx want = (j - n) * root;
          auto it = std::min_element(got.begin(), got.end(),
                                     [&](cplx a, cplx b) { return std::abs(a - want) < std::abs(b - want); });
          worst = std::max(worst, std::abs(*it - want));
          got.erase(it);
        }
        ++checked;
      }
    }
    return Outcome{worst < 1e-10, std::to_string(checked) + " spectra, max |dz| = " + sci(worst)};
  });

  run(2, "GIS saturate Robertson-Schroedinger", 60.0, [] {
    std::mt19937_64 rng(20240611);
    double worst = 0.0;
    int states = 0;
    for (double j : kSpins) {
      const Representation rep = build_su2_rep(j);
      for (const cplx lambda : random_lambdas(rng, 20))
        for (const auto& p : solve_su2_gis(rep, lambda).pairs) {
          worst = std::max(worst, std::abs(compute_moments(rep, p.state).residual));
          ++states;
        }
    }
    const double su2_worst = worst;
    for (const auto& c : su11_grid()) {
      const GisSolution g = solve_su11_gis(build_su11_rep(c.k, kInitialTruncation), c.lambda, c.z);
      worst = std::max(worst, std::abs(compute_moments(*g.spec.rep, g.state).residual));
      ++states;
    }
    return Outcome{worst < 1e-9, std::to_string(states) + " states, max |lhs - rhs| = " + sci(worst) + " (su2 " +
                                     sci(su2_worst) + ")"};
  });

  run(3, "su11 GIS moment closed forms", 0, [] {
    double worst = 0.0;
    for (const auto& c : su11_grid()) {
      const GisSolution g = solve_su11_gis(build_su11_rep(c.k, kInitialTruncation), c.lambda, c.z);
      const MomentReport m = compute_moments(*g.spec.rep, g.state);
      const PredictedMoments p = predicted_gis_moments(c.lambda, m.mean_c);
      worst = std::max({worst, std::abs(m.var_a - p.var_a) / std::abs(p.var_a),
                        std::abs(m.var_b - p.var_b) / std::abs(p.var_b),
                        std::abs(m.cov_ab - p.cov_ab) / std::max(std::abs(p.cov_ab), m.mean_c)});
    }
    return Outcome{worst < 1e-8, "75 states, max relative deviation " + sci(worst)};
  });

  run(4, "recurrence vs 1F1 route", 0, [] {
    double worst = 0.0, worst_bg = 0.0;
    int at_one = 0;
    for (const auto& c : su11_grid()) {
      const GisSolution g = solve_su11_gis(build_su11_rep(c.k, kInitialTruncation), c.lambda, c.z);
      const StateVector a = su11_gis_analytic(c.k, c.lambda, c.z, g.state.dim());
      worst = std::max(worst, 1.0 - fidelity(a, g.state));
      if (c.lambda == cplx(1.0)) {
        const StateVector bg(detail::bg_amplitudes(c.k, c.z, g.state.dim()));
        worst_bg = std::max({worst_bg, 1.0 - fidelity(bg, g.state), 1.0 - fidelity(bg, a)});
        ++at_one;
      }
    }
    return Outcome{worst < 1e-8 && worst_bg < 1e-10,
                   "max 1-F = " + sci(worst) + "; lambda=1 vs BG amplitudes (" + std::to_string(at_one) +
                       " states) max 1-F = " + sci(worst_bg)};
  });

  run(5, "Perelomov embedding", 0, [] {
    const std::vector<cplx> lambdas{{0.2, 0.0}, {0.5, 0.5}, {1.0, 0.0}, {1.0, 1.0}, {2.0, 0.0},
                                    {0.3, -0.8}, {1.5, -0.5}, {3.0, 2.0}, {0.7, 0.1}, {0.05, 0.4}};
    double worst = 0.0, worst_minus = 0.0;
    for (double k : {0.25, 0.5, 1.0, 2.0})
      for (const cplx l : lambdas) {
        const PerelomovEmbeddingCheck c = perelomov_embedding_check(k, l);
        worst = std::max(worst, 1.0 - c.fidelity_plus);
        worst_minus = std::max(worst_minus, 1.0 - c.fidelity_minus);
      }
    return Outcome{worst < 1e-8, "40 pairs, max 1-F = " + sci(worst) + " (z' sign flipped: " + sci(worst_minus) + ")"};
  });

  run(6, "coherent state moments", 0, [] {
    double worst_p = 0.0, worst_b = 0.0, floor_gap = 1e300;
    for (double k : {0.25, 0.5, 1.0, 2.0})
      for (double r : {0.0, 0.2, 0.4, 0.6, 0.8})
        for (int t = 0; t < 8; ++t) {
          const cplx zeta = std::polar(r, 2.0 * M_PI * t / 8.0);
          const StateVector s = perelomov_cs(k, zeta, 256);
          const MomentReport m = compute_moments(build_su11_rep(k, s.dim()), s);
          const PerelomovMoments a = perelomov_moments_analytic(k, zeta);
          worst_p = std::max({worst_p, std::abs(m.var_a - a.var_k1) / std::max(1.0, a.var_k1),
                              std::abs(m.var_b - a.var_k2) / std::max(1.0, a.var_k2),
                              std::abs(m.cov_ab + a.cov_k1k2) / std::max(1.0, std::abs(a.cov_k1k2))});
          floor_gap = std::min(floor_gap, std::min(m.var_a, m.var_b) - k / 2);
        }
    for (double j : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      const Representation rep = build_su2_rep(j);
      for (const cplx tau : {cplx(0.0), cplx(0.3, 0.4), cplx(-1.2, 0.5), cplx(2.0, -3.0), cplx(0.0, 1.0)}) {
        const MomentReport m = compute_moments(rep, bloch_cs(j, tau));
        const BlochMoments a = bloch_moments_analytic(j, tau);
        worst_b = std::max({worst_b, std::abs(m.var_a - a.var_j1), std::abs(m.cov_ab + a.cov_j1j2)});
      }
    }
    return Outcome{worst_p < 1e-8 && worst_b < 1e-12 && floor_gap >= -1e-10,
                   "Perelomov max dev " + sci(worst_p) + ", Bloch max dev " + sci(worst_b) +
                       ", min(var) - k/2 >= " + sci(floor_gap)};
  });

  run(7, "no eigenstates of r A + B (su11)", 0, [] {
    const std::vector<std::size_t> ladder{256, 512, 1024, 2048};
    std::string detail;
    bool ok = true;
    for (double k : {0.25, 0.5, 1.0})
      for (double r : {0.3, 1.0, 3.0}) {
        const DivergenceEvidence ev = axis_divergence_probe(k, r, ladder);
        ok = ok && ev.verdict == Verdict::Diverges;
        if (ev.verdict != Verdict::Diverges) detail += " k=" + sci(k) + ",r=" + sci(r) + ":" + to_string(ev.verdict);
      }
    for (double k : {0.25, 0.5, 1.0})
      for (const cplx l : {cplx(1.0), cplx(2.0), cplx(1.0, 1.0)}) {
        const DivergenceEvidence ev = divergence_probe(k, l, 1.0, ladder);
        ok = ok && ev.verdict == Verdict::Converges;
        if (ev.verdict != Verdict::Converges) detail += " control k=" + sci(k) + ":" + to_string(ev.verdict);
      }
    return Outcome{ok, "9 probes Diverges, 9 controls Converges" + detail};
  });

  run(8, "k=1/4 quadrature squeezing", 120.0, [] {
    std::vector<cplx> grid;
    for (int a = 0; a <= 20; ++a)
      for (int b = 0; b <= 20; ++b) grid.emplace_back(-1.5 + 0.15 * a, -1.5 + 0.15 * b);
    const SqueezeRow best = max_squeeze(qp_squeezing_scan(QpFamily::BG_k14, grid, 512));
    std::vector<cplx> ring;
    for (int t = 0; t < 16; ++t) ring.push_back(std::polar(0.95, 2.0 * M_PI * t / 16.0));
    const SqueezeRow per = max_squeeze(qp_squeezing_scan(QpFamily::Perelomov_k14, ring, 512));
    const bool ok = std::abs(best.percent_squeeze - 56.0) <= 3.0 && per.percent_squeeze > 90.0;
    return Outcome{ok, "BG max " + sci(best.percent_squeeze) + "% at z=" + format_complex(best.param) + " over " +
                           std::to_string(grid.size()) + " points; Perelomov |zeta|=0.95 max " +
                           sci(per.percent_squeeze) + "%"};
  });

  run(9, "su11 geometric multiplicity", 0, [] {
    bool ok = true;
    std::string detail;
    int n = 0;
    for (double k : {0.5, 1.0})
      for (const cplx l : {cplx(0.5, 0.3), cplx(1.5, -0.5), cplx(0.8, 0.9)}) {
        const cplx zp = k * std::sqrt(1.0 - l * l);
        const MultiplicityReport r = multiplicity_probe(build_su11_rep(k, 64), l, zp);
        ok = ok && r.geometric_count == 1;
        detail += " " + std::to_string(r.geometric_count);
        ++n;
      }
    return Outcome{ok, std::to_string(n) + " pairs, geometric counts:" + detail + " (stable at M, 2M, 4M)"};
  });

  run(10, "su2 Hermitian limit", 0, [] {
    double worst_c = 0.0, worst_eq = 0.0;
    for (double j : kSpins) {
      const Representation rep = build_su2_rep(j);
      for (double r : {-2.0, -0.5, 0.3, 1.0, 3.0})
        for (const auto& [e, s] : hermitian_limit_states(rep, r)) {
          const MomentReport m = compute_moments(rep, s);
          worst_c = std::max(worst_c, std::abs(m.mean_c));
          worst_eq = std::max(worst_eq, std::abs(m.var_a * m.var_b - m.cov_ab * m.cov_ab));
        }
    }
    return Outcome{worst_c < 1e-10 && worst_eq < 1e-10,
                   "max |<J3>| = " + sci(worst_c) + ", max |var_a var_b - cov^2| = " + sci(worst_eq)};
  });

  run(11, "uncertainty relation fuzz", 0, [] {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g;
    auto random_state = [&](std::size_t dim, std::size_t support) {
      CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
      for (std::size_t i = 0; i < support; ++i) v[static_cast<Eigen::Index>(i)] = cplx(g(rng), g(rng));
      return StateVector(v);
    };
    double worst = 1e300;
    std::vector<Representation> su2;
    for (double j : kSpins) su2.push_back(build_su2_rep(j));
    const Representation su11 = build_su11_rep(0.75, 64);
    const Representation qp = build_qp_realization(64).canonical;
    for (int i = 0; i < 1000; ++i) {
      const Representation& s = su2[static_cast<std::size_t>(i) % su2.size()];
      worst = std::min(worst, compute_moments(s, random_state(s.dim(), s.dim())).residual);
      worst = std::min(worst, compute_moments(su11, random_state(64, 48)).residual);
      worst = std::min(worst, compute_moments(qp, random_state(64, 48)).residual);
    }
    return Outcome{worst >= -1e-9, "3000 states, min residual " + sci(worst)};
  });

  run(12, "sweep determinism", 0, [] {
    SweepConfig cfg = load_sweep_config(GIS_SOURCE_DIR "/configs/su11_grid_100.json");
    if (cfg.lambda_grid.size() < 100) return Outcome{false, "config has fewer than 100 points"};
    cfg.threads = 1;
    const std::string a = to_csv(run_sweep(cfg));
    const std::string b = to_csv(run_sweep(cfg));
    cfg.threads = 4;
    const std::string c = to_csv(run_sweep(cfg));
    bool ok = a == b && a == c;
    std::string detail = "in-process serial x2 and 4 threads identical: " + std::string(ok ? "yes" : "no");
#ifdef GIS_CLI_PATH
    const std::string dir = "acceptance_cli";
    std::filesystem::create_directories(dir);
    int rc = 0;
    for (const char* t : {"1", "1", "4"}) {
      static int idx = 0;
      rc |= std::system((std::string(GIS_CLI_PATH) + " sweep --config " GIS_SOURCE_DIR
                         "/configs/su11_grid_100.json --threads " + t + " --out " + dir + "/run" +
                         std::to_string(idx++) + ".csv")
                            .c_str());
    }
    auto slurp = [](const std::string& p) {
      std::ifstream in(p, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    const std::string r0 = slurp(dir + "/run0.csv"), r1 = slurp(dir + "/run1.csv"), r2 = slurp(dir + "/run2.csv");
    const bool cli_ok = rc == 0 && !r0.empty() && r0 == r1 && r0 == r2 && r0 == a;
    ok = ok && cli_ok;
    detail += "; CLI runs identical: " + std::string(cli_ok ? "yes" : "no");
#endif
    return Outcome{ok, detail + " (" + std::to_string(cfg.lambda_grid.size()) + " points)"};
  });

  std::cout << (failures ? "SOME CRITERIA FAILED" : "ALL CRITERIA PASSED") << std::endl;
  return failures ? 1 : 0;
}
