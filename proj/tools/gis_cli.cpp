// Command-line front end: single states, moments, sweeps, checks, reports.
//
// Exit codes: 0 success, 1 configuration/usage error, 2 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gis/moments.hpp"
#include "gis/repkit.hpp"
#include "gis/states.hpp"
#include "gis/sweep.hpp"
#include "gis/verify.hpp"

namespace {

using gis::cplx;

struct StateArgs {
  std::string algebra = "su11";
  double j = 0.5;
  double k = 0.5;
  std::size_t truncation = gis::kInitialTruncation;
  std::string lambda = "1";
  std::optional<std::string> z;
  bool analytic = false;
};

cplx parse_arg(const std::string& s, const char* name) {
  const auto c = gis::parse_complex(s);
  if (!c) throw gis::Error(gis::ErrorKind::ConfigError, std::string(name) + ": cannot parse \"" + s + "\"");
  return *c;
}

void add_state_options(CLI::App* cmd, StateArgs& a) {
  cmd->add_option("--algebra", a.algebra, "su2 | su11 | qp")->check(CLI::IsMember({"su2", "su11", "qp"}));
  cmd->add_option("--j", a.j, "spin (su2)");
  cmd->add_option("--k", a.k, "Bargmann index (su11)");
  cmd->add_option("--truncation", a.truncation, "initial truncation (su11, qp)");
  cmd->add_option("--lambda", a.lambda, "complex lambda, e.g. 1+0.5i");
  cmd->add_option("--z", a.z, "eigenvalue z");
}

void print_moments(const gis::MomentReport& m) {
  auto opt = [](const std::optional<double>& v) { return v ? gis::format_double(*v) : std::string("undefined"); };
  std::cout << "mean_a   " << gis::format_double(m.mean_a) << "\n"
            << "mean_b   " << gis::format_double(m.mean_b) << "\n"
            << "mean_c   " << gis::format_double(m.mean_c) << "\n"
            << "var_a    " << gis::format_double(m.var_a) << "\n"
            << "var_b    " << gis::format_double(m.var_b) << "\n"
            << "cov_ab   " << gis::format_double(m.cov_ab) << "\n"
            << "ur_lhs   " << gis::format_double(m.ur_lhs) << "\n"
            << "ur_rhs   " << gis::format_double(m.ur_rhs) << "\n"
            << "residual " << gis::format_double(m.residual) << "\n"
            << "q_a      " << opt(m.q_a) << "\n"
            << "q_b      " << opt(m.q_b) << "\n";
}

struct Built {
  gis::RepPtr rep;
  gis::StateVector state;
  cplx z;
  double residual;
};

std::vector<Built> build_states(const StateArgs& a) {
  const cplx lambda = parse_arg(a.lambda, "--lambda");
  std::vector<Built> out;
  if (a.algebra == "su2") {
    auto rep = std::make_shared<const gis::Representation>(gis::build_su2_rep(a.j));
    const auto spec = gis::solve_su2_gis(*rep, lambda);
    for (const auto& p : spec.pairs) {
      if (a.z && std::abs(p.z - parse_arg(*a.z, "--z")) > gis::kMultiplicityTol) continue;
      out.push_back({rep, p.state, p.z, gis::eigen_residual(*rep, lambda, p.z, p.state)});
    }
    if (out.empty()) throw gis::Error(gis::ErrorKind::NoConvergence, "z is not in the spectrum of L(lambda)");
    return out;
  }
  if (!a.z) throw gis::Error(gis::ErrorKind::ConfigError, "--z: required for su11 and qp");
  const cplx z = parse_arg(*a.z, "--z");
  if (a.algebra == "su11") {
    const auto sol = gis::solve_su11_gis(gis::build_su11_rep(a.k, a.truncation), lambda, z);
    out.push_back({sol.spec.rep, sol.state, z, sol.residual});
  } else {
    const auto sol = gis::solve_qp_gis(gis::build_qp_realization(a.truncation + a.truncation % 2).canonical, lambda, z);
    out.push_back({sol.spec.rep, sol.state, z, sol.residual});
  }
  return out;
}

int run_rep_info(const StateArgs& a) {
  gis::Representation rep;
  if (a.algebra == "su2") rep = gis::build_su2_rep(a.j);
  else if (a.algebra == "su11") rep = gis::build_su11_rep(a.k, a.truncation);
  else rep = gis::build_qp_realization(a.truncation + a.truncation % 2).canonical;
  std::cout << "algebra        " << gis::to_string(rep.kind) << "\n"
            << "dim            " << rep.dim() << "\n"
            << "boundary_rows  " << rep.boundary_rows << "\n"
            << "hermiticity    " << gis::format_double(std::max({rep.a.hermiticity_defect(), rep.b.hermiticity_defect(),
                                                                  rep.c.hermiticity_defect()}))
            << "\n"
            << "commutator     " << gis::format_double(gis::interior_commutator_defect(rep)) << "\n";
  return 0;
}

int run_gis(const StateArgs& a) {
  for (const auto& b : build_states(a)) {
    std::cout << "z          " << gis::format_complex(b.z) << "\n"
              << "dim        " << b.state.dim() << "\n"
              << "residual   " << gis::format_double(b.residual) << "\n"
              << "tail_mass  " << gis::format_double(b.state.tail_mass()) << "\n";
    const std::size_t show = std::min<std::size_t>(b.state.dim(), 8);
    for (std::size_t m = 0; m < show; ++m)
      std::cout << "psi[" << m << "]     " << gis::format_complex(b.state.amps()[static_cast<Eigen::Index>(m)]) << "\n";
    std::cout << "\n";
  }
  return 0;
}

int run_moments(const StateArgs& a) {
  const cplx lambda = parse_arg(a.lambda, "--lambda");
  for (const auto& b : build_states(a)) {
    std::cout << "z        " << gis::format_complex(b.z) << "\n";
    const auto m = gis::compute_moments(*b.rep, b.state);
    print_moments(m);
    if (lambda.real() != 0.0) {
      const auto p = gis::predicted_gis_moments(lambda, m.mean_c);
      const auto [qa, qb] = gis::gis_q_closed_form(lambda);
      const auto [pa, pb] = gis::gis_q_printed_form(lambda);
      std::cout << "predicted var_a " << gis::format_double(p.var_a) << "  var_b " << gis::format_double(p.var_b)
                << "  cov_ab " << gis::format_double(p.cov_ab) << "\n"
                << "q closed form   " << gis::format_double(qa) << " " << gis::format_double(qb) << "\n"
                << "q alt form      " << gis::format_double(pa) << " " << gis::format_double(pb) << "\n";
    }
    std::cout << "\n";
  }
  return 0;
}

int run_sweep_cmd(const std::string& config, const std::string& format, const std::string& out,
                  std::optional<unsigned> threads) {
  gis::SweepConfig cfg = gis::load_sweep_config(config);
  if (threads) cfg.threads = *threads;
  const gis::SweepResult res = gis::run_sweep(cfg);
  const auto fmt = format == "json" ? gis::ReportFormat::Json : gis::ReportFormat::Csv;
  if (out.empty() || out == "-") {
    if (fmt == gis::ReportFormat::Csv) std::cout << gis::to_csv(res);
    else std::cout << gis::to_json(res).dump(2) << "\n";
  } else {
    gis::emit_report(res, fmt, out);
  }
  return 0;
}

int run_emit(const std::string& in, const std::string& format, const std::string& out) {
  std::ifstream f(in);
  if (!f) throw gis::Error(gis::ErrorKind::ConfigError, "--in: cannot open " + in);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw gis::Error(gis::ErrorKind::ConfigError, std::string("--in: ") + e.what());
  }
  gis::emit_report(gis::from_json(j), format == "json" ? gis::ReportFormat::Json : gis::ReportFormat::Csv, out);
  return 0;
}

std::vector<std::size_t> ladder(std::size_t t) { return {t, 2 * t, 4 * t, 8 * t}; }

int run_verify(const std::string& what, const StateArgs& a, const std::vector<double>& rs, const std::string& family,
               std::size_t points) {
  if (what == "saturation") {
    // Every GIS built from the given arguments must saturate the relation.
    int bad = 0;
    for (const auto& b : build_states(a)) {
      const auto m = gis::compute_moments(*b.rep, b.state);
      const bool ok = std::abs(m.residual) < 1e-9;
      bad += !ok;
      std::cout << gis::format_complex(b.z) << " residual " << gis::format_double(m.residual) << (ok ? " ok" : " FAIL")
                << "\n";
    }
    return bad ? 2 : 0;
  }
  if (what == "axis-divergence") {
    for (const double r : rs) {
      const auto ev = gis::axis_divergence_probe(a.k, r, ladder(a.truncation));
      std::cout << "k " << gis::format_double(a.k) << " r " << gis::format_double(r) << " tails";
      for (double t : ev.tail_masses) std::cout << " " << gis::format_double(t);
      std::cout << " -> " << gis::to_string(ev.verdict) << "\n";
    }
    return 0;
  }
  if (what == "perelomov-embedding") {
    const auto c = gis::perelomov_embedding_check(a.k, parse_arg(a.lambda, "--lambda"));
    std::cout << "z'=+k sqrt(1-l^2): fidelity " << gis::format_double(c.fidelity_plus) << " zeta sign "
              << c.zeta_sign_plus << "\n"
              << "z'=-k sqrt(1-l^2): fidelity " << gis::format_double(c.fidelity_minus) << " zeta sign "
              << c.zeta_sign_minus << "\n";
    return 0;
  }
  if (what == "multiplicity") {
    const cplx lambda = parse_arg(a.lambda, "--lambda");
    cplx z;
    if (a.z) z = parse_arg(*a.z, "--z");
    else if (a.algebra == "su11") z = a.k * gis::principal_sqrt(1.0 - lambda * lambda);
    else throw gis::Error(gis::ErrorKind::ConfigError, "--z: required for su2");
    const gis::Representation rep = a.algebra == "su2" ? gis::build_su2_rep(a.j) : gis::build_su11_rep(a.k, a.truncation);
    const auto r = gis::multiplicity_probe(rep, lambda, z);
    std::cout << "z " << gis::format_complex(z) << " algebraic " << r.algebraic_count << " geometric "
              << r.geometric_count << "\n";
    return 0;
  }
  if (what == "qp-scan") {
    const bool bg = family == "bg";
    std::vector<cplx> grid;
    for (std::size_t i = 0; i < points; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(points > 1 ? points - 1 : 1);
      grid.emplace_back(bg ? -2.0 + 4.0 * t : -0.95 + 1.9 * t, 0.0);
    }
    const auto rows = gis::qp_squeezing_scan(bg ? gis::QpFamily::BG_k14 : gis::QpFamily::Perelomov_k14, grid,
                                             std::max<std::size_t>(a.truncation, 512));
    const auto& best = gis::max_squeeze(rows);
    std::cout << "family " << family << " max squeeze " << gis::format_double(best.percent_squeeze) << "% at "
              << gis::format_complex(best.param) << " (var_q " << gis::format_double(best.var_q) << ", var_p "
              << gis::format_double(best.var_p) << ")\n";
    return 0;
  }
  throw gis::Error(gis::ErrorKind::ConfigError, "verify: unknown check " + what);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized intelligent states toolkit"};
  app.require_subcommand(1);

  StateArgs state;
  auto* rep_info = app.add_subcommand("rep-info", "representation summary");
  add_state_options(rep_info, state);
  auto* gis_cmd = app.add_subcommand("gis", "construct eigenstates of lambda A + i B");
  add_state_options(gis_cmd, state);
  auto* mom = app.add_subcommand("moments", "moments and uncertainty relation of a GIS");
  add_state_options(mom, state);

  std::string config, format = "csv", out, in;
  std::optional<unsigned> threads;
  auto* sweep = app.add_subcommand("sweep", "run a grid sweep");
  sweep->add_option("--config", config, "sweep config (JSON)")->required();
  sweep->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", out, "output path (default stdout)");
  sweep->add_option("--threads", threads, "override config threads");

  auto* emit = app.add_subcommand("emit", "re-emit a saved JSON report");
  emit->add_option("--in", in, "JSON report")->required();
  emit->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  emit->add_option("--out", out)->required();

  std::string check;
  std::vector<double> rs{0.3, 1.0, 3.0};
  std::string family = "bg";
  std::size_t points = 400;
  auto* verify = app.add_subcommand("verify", "run a check");
  verify->add_option("check", check, "saturation | axis-divergence | perelomov-embedding | multiplicity | qp-scan")
      ->required()
      ->check(CLI::IsMember({"saturation", "axis-divergence", "perelomov-embedding", "multiplicity", "qp-scan"}));
  add_state_options(verify, state);
  verify->add_option("--r", rs, "axis-divergence: values of r");
  verify->add_option("--family", family, "qp-scan: bg | perelomov")->check(CLI::IsMember({"bg", "perelomov"}));
  verify->add_option("--points", points, "qp-scan: grid size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*rep_info) return run_rep_info(state);
    if (*gis_cmd) return run_gis(state);
    if (*mom) return run_moments(state);
    if (*sweep) return run_sweep_cmd(config, format, out, threads);
    if (*emit) return run_emit(in, format, out);
    if (*verify) return run_verify(check, state, rs, family, points);
  } catch (const gis::Error& e) {
    std::cerr << "error [" << gis::to_string(e.kind()) << "]: " << e.what() << "\n";
    return e.kind() == gis::ErrorKind::ConfigError ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
