#pragma once

// Grid sweeps over lambda (and z), and their CSV/JSON reports.
//
// Config (JSON):
//   {
//     "algebra": "su2" | "su11" | "qp",
//     "j": 1, "k": 0.5, "truncation": 128,
//     "lambda_grid": ["1+0.5i", ...]
//        or {"re": {"start": 0.5, "stop": 2, "num": 4}, "im": {...}},
//     "z_selector": {"mode": "all_spectrum" | "explicit" | "perelomov_embedding", "z": [...]},
//     "outputs": ["moments", "q", "residual", "diagnostics"],
//     "seed": 0, "threads": 1
//   }
// Complex values are strings "a+bi" / "a-bi" (plain numbers are accepted
// as real values).

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include <json.hpp>  // nlohmann/json, vendored

#include "gis/core.hpp"
#include "gis/moments.hpp"
#include "gis/repkit.hpp"
#include "gis/states.hpp"
#include "gis/verify.hpp"

namespace gis {

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Complex literals

inline std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

inline std::string format_complex(cplx x) {
  std::string s = format_double(x.real());
  s += (std::signbit(x.imag()) ? "-" : "+");
  s += format_double(std::abs(x.imag()));
  s += "i";
  return s;
}

namespace detail {

inline bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace detail

/// Parses "a", "bi", "a+bi", "a-bi" (also "i", "-i").
inline std::optional<cplx> parse_complex(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) return std::nullopt;
  double re = 0.0, im = 0.0;
  if (s.back() != 'i') {
    if (!detail::parse_real(s, re)) return std::nullopt;
    return cplx(re, 0.0);
  }
  s.pop_back();
  // Split at the last sign that is not the leading one and not an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t p = s.size(); p-- > 1;) {
    if ((s[p] == '+' || s[p] == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
      split = p;
      break;
    }
  }
  std::string re_s = split == std::string::npos ? "" : s.substr(0, split);
  std::string im_s = split == std::string::npos ? s : s.substr(split);
  if (im_s.empty() || im_s == "+") im_s = "1";
  if (im_s == "-") im_s = "-1";
  if (!re_s.empty() && !detail::parse_real(re_s, re)) return std::nullopt;
  if (!detail::parse_real(im_s, im)) return std::nullopt;
  return cplx(re, im);
}

// ---------------------------------------------------------------------------
// Config

enum class ZMode { AllSpectrum, Explicit, PerelomovEmbedding };

enum class Output { Moments, Q, Residual, Diagnostics };

struct SweepConfig {
  Algebra kind = Algebra::SU2;
  double j = 0.5;
  double k = 0.5;
  std::size_t truncation = kInitialTruncation;
  std::vector<cplx> lambda_grid;
  ZMode z_mode = ZMode::AllSpectrum;
  std::vector<cplx> z_values;
  std::set<Output> outputs{Output::Moments, Output::Q, Output::Residual, Output::Diagnostics};
  std::uint64_t seed = 0;
  unsigned threads = 1;
  nlohmann::json echo;  // the config as given
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ConfigError, field + ": " + what);
}

inline cplx complex_field(const nlohmann::json& v, const std::string& field) {
  if (v.is_number()) return cplx(v.get<double>(), 0.0);
  if (!v.is_string()) config_error(field, "expected a complex string like \"1+2i\"");
  const auto c = parse_complex(v.get<std::string>());
  if (!c || !is_finite(*c)) config_error(field, "cannot parse complex value \"" + v.get<std::string>() + "\"");
  return *c;
}

inline std::vector<double> linspace_field(const nlohmann::json& v, const std::string& field) {
  if (!v.is_object()) config_error(field, "expected {start, stop, num}");
  for (const char* key : {"start", "stop", "num"})
    if (!v.contains(key)) config_error(field + "." + key, "missing");
  if (!v["start"].is_number() || !v["stop"].is_number()) config_error(field, "start/stop must be numbers");
  if (!v["num"].is_number_integer() || v["num"].get<long>() < 1) config_error(field + ".num", "must be a positive integer");
  const double a = v["start"].get<double>(), b = v["stop"].get<double>();
  const long n = v["num"].get<long>();
  std::vector<double> out;
  for (long i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

inline double number_field(const nlohmann::json& cfg, const char* key, double fallback) {
  if (!cfg.contains(key)) return fallback;
  if (!cfg[key].is_number()) config_error(key, "expected a number");
  return cfg[key].get<double>();
}

}  // namespace detail

inline SweepConfig parse_sweep_config(const nlohmann::json& cfg) {
  using detail::config_error;
  if (!cfg.is_object()) config_error("config", "expected a JSON object");
  SweepConfig c;
  c.echo = cfg;

  if (!cfg.contains("algebra") || !cfg["algebra"].is_string()) config_error("algebra", "missing or not a string");
  const std::string alg = cfg["algebra"].get<std::string>();
  if (alg == "su2") c.kind = Algebra::SU2;
  else if (alg == "su11") c.kind = Algebra::SU11;
  else if (alg == "qp") c.kind = Algebra::CanonicalQP;
  else config_error("algebra", "unknown algebra \"" + alg + "\"");

  c.j = detail::number_field(cfg, "j", c.j);
  c.k = detail::number_field(cfg, "k", c.k);
  if (c.kind == Algebra::SU2) {
    const double twice = 2.0 * c.j;
    if (!(c.j > 0.0) || twice != std::round(twice)) config_error("j", "must be a positive multiple of 1/2");
  }
  if (c.kind == Algebra::SU11 && !(c.k > 0.0)) config_error("k", "must be positive");
  if (cfg.contains("truncation")) {
    if (!cfg["truncation"].is_number_integer() || cfg["truncation"].get<long>() < 8)
      config_error("truncation", "must be an integer >= 8");
    c.truncation = cfg["truncation"].get<std::size_t>();
  }

  if (!cfg.contains("lambda_grid")) config_error("lambda_grid", "missing");
  const auto& grid = cfg["lambda_grid"];
  if (grid.is_array()) {
    for (std::size_t i = 0; i < grid.size(); ++i)
      c.lambda_grid.push_back(detail::complex_field(grid[i], "lambda_grid[" + std::to_string(i) + "]"));
  } else if (grid.is_object()) {
    const std::vector<double> re = grid.contains("re") ? detail::linspace_field(grid["re"], "lambda_grid.re")
                                                       : std::vector<double>{0.0};
    const std::vector<double> im = grid.contains("im") ? detail::linspace_field(grid["im"], "lambda_grid.im")
                                                       : std::vector<double>{0.0};
    for (double a : re)
      for (double b : im) c.lambda_grid.emplace_back(a, b);
  } else {
    config_error("lambda_grid", "expected a list or a {re, im} linspace object");
  }
  if (c.lambda_grid.empty()) config_error("lambda_grid", "grid is empty");

  const nlohmann::json zs = cfg.value("z_selector", nlohmann::json{{"mode", "all_spectrum"}});
  if (!zs.is_object() || !zs.contains("mode") || !zs["mode"].is_string())
    config_error("z_selector.mode", "missing or not a string");
  const std::string mode = zs["mode"].get<std::string>();
  if (mode == "all_spectrum") c.z_mode = ZMode::AllSpectrum;
  else if (mode == "explicit") c.z_mode = ZMode::Explicit;
  else if (mode == "perelomov_embedding") c.z_mode = ZMode::PerelomovEmbedding;
  else config_error("z_selector.mode", "unknown mode \"" + mode + "\"");
  if (c.z_mode == ZMode::Explicit) {
    if (!zs.contains("z") || !zs["z"].is_array()) config_error("z_selector.z", "missing list");
    for (std::size_t i = 0; i < zs["z"].size(); ++i)
      c.z_values.push_back(detail::complex_field(zs["z"][i], "z_selector.z[" + std::to_string(i) + "]"));
    if (c.z_values.empty()) config_error("z_selector.z", "explicit z list is empty");
  }
  if (c.z_mode == ZMode::AllSpectrum && c.kind != Algebra::SU2)
    config_error("z_selector.mode", "all_spectrum needs a finite spectrum (su2)");
  if (c.z_mode == ZMode::PerelomovEmbedding && c.kind != Algebra::SU11) config_error("z_selector.mode", "perelomov_embedding applies to su11 only");

  if (cfg.contains("outputs")) {
    if (!cfg["outputs"].is_array()) config_error("outputs", "expected a list");
    c.outputs.clear();
    for (const auto& o : cfg["outputs"]) {
      const std::string s = o.is_string() ? o.get<std::string>() : "";
      if (s == "moments") c.outputs.insert(Output::Moments);
      else if (s == "q") c.outputs.insert(Output::Q);
      else if (s == "residual") c.outputs.insert(Output::Residual);
      else if (s == "diagnostics") c.outputs.insert(Output::Diagnostics);
      else config_error("outputs", "unknown output \"" + o.dump() + "\"");
    }
  }
  if (cfg.contains("seed")) {
    if (!cfg["seed"].is_number_integer()) config_error("seed", "expected an integer");
    c.seed = cfg["seed"].get<std::uint64_t>();
  }
  if (cfg.contains("threads")) {
    if (!cfg["threads"].is_number_integer() || cfg["threads"].get<long>() < 1)
      config_error("threads", "expected a positive integer");
    c.threads = cfg["threads"].get<unsigned>();
  }
  return c;
}

inline SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("config: ") + e.what());
  }
  return parse_sweep_config(j);
}

// ---------------------------------------------------------------------------
// Rows

struct SweepRow {
  cplx lambda, z;
  std::optional<MomentReport> moments;
  std::vector<std::string> flags;  // sorted, unique
  // diagnostics
  std::optional<double> eigen_residual, tail_mass;
  std::optional<double> q_printed_a, q_printed_b;  // 1 - 1/(2 Re l) form, for comparison
  std::optional<std::string> probe_verdict;
};

struct SweepResult {
  nlohmann::json config;
  std::set<Output> outputs;
  std::vector<SweepRow> rows;
  std::string version = kVersion;
  std::string timestamp;
};

namespace detail {

inline void add_flag(SweepRow& row, const std::string& f) {
  if (std::find(row.flags.begin(), row.flags.end(), f) == row.flags.end()) row.flags.push_back(f);
}

inline void finish_row(SweepRow& row, const Representation& rep, const StateVector& psi) {
  try {
    row.moments = compute_moments(rep, psi);
    if (!row.moments->q_a || !row.moments->q_b) add_flag(row, "UndefinedQ");
  } catch (const Error& e) {
    add_flag(row, to_string(e.kind()));
  }
  if (row.lambda.real() != 0.0) std::tie(row.q_printed_a, row.q_printed_b) = gis_q_printed_form(row.lambda);
}

inline std::vector<SweepRow> su2_rows(const SweepConfig& c, const Representation& rep, cplx lambda) {
  std::vector<SweepRow> rows;
  const Su2Spectrum spec = solve_su2_gis(rep, lambda);
  auto emit = [&](const Su2Eigenpair& p) {
    SweepRow row{lambda, p.z, {}, {}, {}, {}, {}, {}, {}};
    if (spec.defective) add_flag(row, "DefectiveSpectrum");
    row.eigen_residual = eigen_residual(rep, lambda, p.z, p.state);
    finish_row(row, rep, p.state);
    rows.push_back(std::move(row));
  };
  if (c.z_mode == ZMode::AllSpectrum) {
    for (const auto& p : spec.pairs) emit(p);
    return rows;
  }
  for (const cplx z : c.z_values) {
    const Su2Eigenpair* best = nullptr;
    for (const auto& p : spec.pairs)
      if (std::abs(p.z - z) < kMultiplicityTol && (!best || std::abs(p.z - z) < std::abs(best->z - z))) best = &p;
    if (best) {
      emit(Su2Eigenpair{best->n, z, best->state});
    } else {
      SweepRow row{lambda, z, {}, {"NotInSpectrum"}, {}, {}, {}, {}, {}};
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline std::vector<cplx> su11_targets(const SweepConfig& c, cplx lambda) {
  if (c.z_mode != ZMode::PerelomovEmbedding) return c.z_values;
  const cplx zp = c.k * principal_sqrt(1.0 - lambda * lambda);
  return {zp, -zp};
}

inline std::vector<SweepRow> ladder_rows(const SweepConfig& c, cplx lambda) {
  std::vector<SweepRow> rows;
  const bool su11 = c.kind == Algebra::SU11;
  const Representation rep = su11 ? build_su11_rep(c.k, c.truncation)
                                  : build_qp_realization(c.truncation + c.truncation % 2).canonical;
  for (const cplx z : su11_targets(c, lambda)) {
    SweepRow row{lambda, z, {}, {}, {}, {}, {}, {}, {}};
    if (!(lambda.real() > 0.0)) {
      // No normalizable eigenstate; record the probe evidence instead.
      add_flag(row, to_string(ErrorKind::NonNormalizable));
      if (su11) {
        const std::size_t t = c.truncation;
        const DivergenceEvidence ev = divergence_probe(c.k, lambda, z, {t, 2 * t, 4 * t});
        row.probe_verdict = to_string(ev.verdict);
        row.tail_mass = ev.tail_masses.back();
      }
      rows.push_back(std::move(row));
      continue;
    }
    try {
      const GisSolution sol = su11 ? solve_su11_gis(rep, lambda, z) : solve_qp_gis(rep, lambda, z);
      row.eigen_residual = sol.residual;
      row.tail_mass = sol.tail_mass;
      finish_row(row, *sol.spec.rep, sol.state);
    } catch (const Error& e) {
      add_flag(row, to_string(e.kind()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<SweepRow> rows_for(const SweepConfig& c, const Representation* su2, cplx lambda) {
  std::vector<SweepRow> rows;
  try {
    rows = c.kind == Algebra::SU2 ? su2_rows(c, *su2, lambda) : ladder_rows(c, lambda);
  } catch (const Error& e) {
    SweepRow row{lambda, cplx(std::nan(""), std::nan("")), {}, {to_string(e.kind())}, {}, {}, {}, {}, {}};
    rows.push_back(std::move(row));
  }
  for (auto& r : rows) std::sort(r.flags.begin(), r.flags.end());
  return rows;
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

/// Evaluates every grid point (in parallel when threads > 1) and returns the
/// rows in grid order: lambda outer, z inner.
inline SweepResult run_sweep(const SweepConfig& c) {
  if (c.lambda_grid.empty()) throw Error(ErrorKind::ConfigError, "lambda_grid: grid is empty");
  std::optional<Representation> su2;
  if (c.kind == Algebra::SU2) su2 = build_su2_rep(c.j);

  std::vector<std::vector<SweepRow>> slots(c.lambda_grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < slots.size(); i = next++)
      slots[i] = detail::rows_for(c, su2 ? &*su2 : nullptr, c.lambda_grid[i]);
  };
  const unsigned nthreads = std::max(1u, std::min<unsigned>(c.threads, static_cast<unsigned>(slots.size())));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SweepResult out;
  out.config = c.echo;
  out.outputs = c.outputs;
  out.timestamp = detail::utc_timestamp();
  for (auto& s : slots)
    for (auto& r : s) out.rows.push_back(std::move(r));
  return out;
}

// ---------------------------------------------------------------------------
// Reports

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"re_lambda", "im_lambda", "re_z",   "im_z",   "mean_a", "mean_b",
                                             "mean_c",    "var_a",     "var_b",  "cov_ab", "ur_lhs", "ur_rhs",
                                             "residual",  "q_a",       "q_b",    "flags"};
  return cols;
}

namespace detail {

/// Numeric cells in column order (all but flags); nullopt = undefined.
inline std::vector<std::optional<double>> numeric_cells(const SweepRow& r, const std::set<Output>& out) {
  std::vector<std::optional<double>> cells{r.lambda.real(), r.lambda.imag(), r.z.real(), r.z.imag()};
  const bool m = r.moments.has_value();
  auto pick = [&](Output o, double v) -> std::optional<double> {
    if (!m || !out.count(o)) return std::nullopt;
    return v;
  };
  const MomentReport rep = m ? *r.moments : MomentReport{};
  for (double v : {rep.mean_a, rep.mean_b, rep.mean_c, rep.var_a, rep.var_b, rep.cov_ab, rep.ur_lhs, rep.ur_rhs})
    cells.push_back(pick(Output::Moments, v));
  cells.push_back(pick(Output::Residual, rep.residual));
  cells.push_back(m && out.count(Output::Q) ? rep.q_a : std::nullopt);
  cells.push_back(m && out.count(Output::Q) ? rep.q_b : std::nullopt);
  for (auto& c : cells)
    if (c && !std::isfinite(*c)) c.reset();
  return cells;
}

inline std::string join_flags(const std::vector<std::string>& flags) {
  std::string s;
  for (std::size_t i = 0; i < flags.size(); ++i) s += (i ? ";" : "") + flags[i];
  return s;
}

inline nlohmann::json opt_json(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace detail

inline std::string to_csv(const SweepResult& r) {
  std::ostringstream os;
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto& row : r.rows) {
    for (const auto& cell : detail::numeric_cells(row, r.outputs)) {
      if (cell) os << format_double(*cell);
      os << ",";
    }
    os << detail::join_flags(row.flags) << "\n";
  }
  return os.str();
}

inline nlohmann::json to_json(const SweepResult& r) {
  using nlohmann::json;
  json rows = json::array();
  const auto& cols = csv_columns();
  for (const auto& row : r.rows) {
    json jr = json::object();
    const auto cells = detail::numeric_cells(row, r.outputs);
    for (std::size_t i = 0; i < cells.size(); ++i) jr[cols[i]] = detail::opt_json(cells[i]);
    jr["flags"] = row.flags;
    if (r.outputs.count(Output::Diagnostics)) {
      jr["diagnostics"] = {{"eigen_residual", detail::opt_json(row.eigen_residual)},
                           {"tail_mass", detail::opt_json(row.tail_mass)},
                           {"q_a_alt_form", detail::opt_json(row.q_printed_a)},
                           {"q_b_alt_form", detail::opt_json(row.q_printed_b)},
                           {"probe_verdict", row.probe_verdict ? json(*row.probe_verdict) : json(nullptr)}};
    }
    rows.push_back(std::move(jr));
  }
  std::vector<std::string> outs;
  for (Output o : r.outputs)
    outs.push_back(o == Output::Moments ? "moments" : o == Output::Q ? "q" : o == Output::Residual ? "residual" : "diagnostics");
  return json{{"config", r.config},
              {"provenance", {{"tool", "gis"}, {"version", r.version}, {"timestamp", r.timestamp}}},
              {"outputs", outs},
              {"columns", cols},
              {"rows", rows}};
}

/// Rebuilds a result from its JSON report (the inverse of to_json for all
/// CSV-visible fields).
inline SweepResult from_json(const nlohmann::json& j) {
  try {
    SweepResult r;
    r.config = j.at("config");
    r.version = j.at("provenance").at("version").get<std::string>();
    r.timestamp = j.at("provenance").at("timestamp").get<std::string>();
    r.outputs.clear();
    for (const auto& o : j.at("outputs")) {
      const std::string s = o.get<std::string>();
      r.outputs.insert(s == "moments" ? Output::Moments : s == "q" ? Output::Q : s == "residual" ? Output::Residual : Output::Diagnostics);
    }
    auto num = [](const nlohmann::json& v) { return v.is_null() ? std::nan("") : v.get<double>(); };
    auto opt = [](const nlohmann::json& v) { return v.is_null() ? std::optional<double>() : v.get<double>(); };
    for (const auto& jr : j.at("rows")) {
      SweepRow row{{num(jr.at("re_lambda")), num(jr.at("im_lambda"))}, {num(jr.at("re_z")), num(jr.at("im_z"))},
                   {}, jr.at("flags").get<std::vector<std::string>>(), {}, {}, {}, {}, {}};
      if (!jr.at("mean_c").is_null() || !jr.at("residual").is_null() || !jr.at("q_a").is_null()) {
        MomentReport m;
        m.mean_a = num(jr.at("mean_a")), m.mean_b = num(jr.at("mean_b")), m.mean_c = num(jr.at("mean_c"));
        m.var_a = num(jr.at("var_a")), m.var_b = num(jr.at("var_b")), m.cov_ab = num(jr.at("cov_ab"));
        m.ur_lhs = num(jr.at("ur_lhs")), m.ur_rhs = num(jr.at("ur_rhs")), m.residual = num(jr.at("residual"));
        m.q_a = opt(jr.at("q_a")), m.q_b = opt(jr.at("q_b"));
        row.moments = m;
      }
      if (jr.contains("diagnostics")) {
        const auto& d = jr["diagnostics"];
        row.eigen_residual = opt(d.at("eigen_residual"));
        row.tail_mass = opt(d.at("tail_mass"));
        row.q_printed_a = opt(d.at("q_a_alt_form"));
        row.q_printed_b = opt(d.at("q_b_alt_form"));
        if (!d.at("probe_verdict").is_null()) row.probe_verdict = d["probe_verdict"].get<std::string>();
      }
      r.rows.push_back(std::move(row));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("report: ") + e.what());
  }
}

enum class ReportFormat { Csv, Json };

inline void emit_report(const SweepResult& r, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
  if (format == ReportFormat::Csv) out << to_csv(r);
  else out << to_json(r).dump(2) << "\n";
  out.flush();
  if (!out) throw Error(ErrorKind::IoError, "write to " + path + " failed");
}

}  // namespace gis
