#pragma once

/**
 * @file scenario_run.hpp
 * @brief Runs validated scenarios and writes their tables.
 *
 * Every scenario produces one data table (`<name>.csv` or `<name>.json`) and
 * a summary (`<name>.summary.json`). Neither contains timing or host data,
 * so two runs with the same scenario and seed give identical bytes. Wall
 * time is only returned in the RunReport.
 */

#include <array>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qspin/em_field.hpp"
#include "qspin/em_solutions.hpp"
#include "qspin/lorentz.hpp"
#include "qspin/parallel.hpp"
#include "qspin/scenario.hpp"
#include "qspin/spin_dynamics.hpp"

namespace qspin::scenario {

// ---------------------------------------------------------------------------
// Tables and text encoding

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest decimal string that reads back to the same double.
inline std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw Error(ErrorKind::InvalidArgument, "cannot format double");
  return {buf.data(), ptr};
}

namespace detail {

inline std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

inline std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char esc[8];
          std::snprintf(esc, sizeof esc, "\\u%04x", static_cast<unsigned>(static_cast<unsigned char>(ch)));
          out += esc;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

inline std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

inline std::string json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return json_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return json_string(std::get<std::string>(c));
}

}  // namespace detail

/// Header row plus one line per row, LF endings.
inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += detail::cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

/// {"columns": [...], "rows": [[...], ...]}; non-finite numbers become null.
inline std::string to_json(const Table& t) {
  std::string out = "{\"columns\":[";
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += detail::json_string(t.columns[i]);
  }
  out += "],\"rows\":[";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out += r ? ",\n[" : "\n[";
    for (std::size_t i = 0; i < t.rows[r].size(); ++i) {
      if (i) out += ',';
      out += detail::json_cell(t.rows[r][i]);
    }
    out += ']';
  }
  out += "\n]}\n";
  return out;
}

// ---------------------------------------------------------------------------
// Deterministic random streams

/// SplitMix64. Each sample index gets its own stream, so results do not
/// depend on how work is split across threads.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(seed ^ (stream * 0xD1B54A32D192ED03ull + 0x8CB92BA72F3D8DD7ull)) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Vec3d unit_vector() {
    while (true) {
      const Vec3d v{uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
      const double n = norm(v);
      if (n > 0.1 && n <= 1.0) return v / n;
    }
  }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Scenario computations

using Summary = std::vector<std::pair<std::string, double>>;

struct ScenarioResult {
  Table table;
  Summary summary;
};

namespace detail {

inline std::vector<Cell> trajectory_row(std::int64_t step, double t, const Quaternion& s, const Vec3d& p,
                                        const Vec3d& mid) {
  return {step, t, s.s0, s.sx, s.sy, s.sz, p.x, p.y, p.z, mid.x, mid.y, mid.z};
}

inline const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> cols{"step", "t",  "s0", "sx",     "sy",     "sz",
                                             "px",   "py", "pz", "px_mid", "py_mid", "pz_mid"};
  return cols;
}

/// Two rows per block boundary n = 0..N: the state Q_n, then the state just
/// after bar n. Both rows carry the post-bar arrow tip as *_mid.
inline ScenarioResult run_pms(const PmsParams& p) {
  const SpinTrajectory traj = pms_propagate(p.config, p.p0);
  ScenarioResult out;
  out.table.columns = trajectory_columns();
  for (std::size_t n = 0; n < traj.size(); ++n) {
    const auto& q = traj.states[n];
    const auto& arrow = traj.polar[n];
    const auto block = qspin::detail::pms_block_unchecked(p.config, static_cast<int>(n));
    const Quaternion after_bar = UnitQuaternion::normalized(block.bar.value() * q.value()).value();
    const auto step = static_cast<std::int64_t>(2 * n);
    out.table.rows.push_back(trajectory_row(step, static_cast<double>(n), q.value(), arrow.tail, arrow.tip));
    out.table.rows.push_back(trajectory_row(step + 1, static_cast<double>(n) + 0.5, after_bar, arrow.tip, arrow.tip));
  }
  const Vec3d last = traj.polar.back().tail;
  out.summary = {{"closure_distance", closure_distance(traj)},
                 {"final_px", last.x},
                 {"final_py", last.y},
                 {"final_pz", last.z},
                 {"resonant", p.config.is_resonant() ? 1.0 : 0.0},
                 {"max_step_drift", traj.max_step_drift},
                 {"rows", static_cast<double>(out.table.rows.size())}};
  return out;
}

/// Integrated trajectory. p* uses the configured sign branch, *_mid the other.
inline ScenarioResult run_helical(const HelicalRun& h) {
  h.params.validate();
  IntegrateOptions opt;
  opt.record_stride = h.record_stride;
  const SpinTrajectory traj = integrate_spin(HelicalField{h.params}, UnitQuaternion{}, 0.0, h.t_max, h.dt, opt);

  ScenarioResult out;
  out.table.columns = trajectory_columns();
  double max_err = 0.0, peak_turn = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Quaternion& s = traj.states[k].value();
    const double t = traj.times[k];
    const Vec3d p = polarization_from_state(s, h.sign, h.p0);
    const Vec3d mid = polarization_from_state(s, -h.sign, h.p0);
    out.table.rows.push_back(trajectory_row(static_cast<std::int64_t>(k), t, s, p, mid));
    max_err = std::max(max_err, max_abs_diff(s, analytic_helical(h.params, t).value()));
    peak_turn = std::max(peak_turn, 0.5 * (1.0 - dot(p, h.p0)));
  }
  out.summary = {{"max_analytic_error", max_err},
                 {"max_step_drift", traj.max_step_drift},
                 {"final_norm_error", std::abs(traj.states.back().value().norm() - 1.0)},
                 {"peak_turn_down", peak_turn},
                 {"rows", static_cast<double>(out.table.rows.size())}};
  return out;
}

inline ScenarioResult run_resonance(const ResonanceParams& r, unsigned threads) {
  const auto curve = resonance_curve(r.gamma, r.delta_min, r.delta_max, r.points, r.t_pass, threads);
  ScenarioResult out;
  out.table.columns = {"delta", "p_down", "p_up"};
  double peak = -1.0, peak_delta = 0.0, sum_err = 0.0;
  for (const auto& pt : curve) {
    out.table.rows.push_back({pt.delta, pt.p_down, pt.p_up});
    if (pt.p_down > peak) {
      peak = pt.p_down;
      peak_delta = pt.delta;
    }
    sum_err = std::max(sum_err, std::abs(pt.p_down + pt.p_up - 1.0));
  }
  out.summary = {{"peak_p_down", peak},
                 {"peak_delta", peak_delta},
                 {"max_sum_error", sum_err},
                 {"rows", static_cast<double>(out.table.rows.size())}};
  return out;
}

inline em::EmFieldFn make_field(const EmCheckParams& p) {
  namespace sol = em::solutions;
  switch (p.field) {
    case EmFieldKind::plane_wave: {
      // Any unit vector orthogonal to the propagation direction.
      const Vec3d& n = p.direction;
      const Vec3d helper = std::abs(n.x) < 0.9 ? Vec3d{1.0, 0.0, 0.0} : Vec3d{0.0, 1.0, 0.0};
      const Vec3d e = cross(n, helper) / norm(cross(n, helper));
      return sol::PlaneWave{n, e, 1.0, p.wavenumber, p.c};
    }
    case EmFieldKind::standing_wave: return sol::StandingWave{1.0, p.wavenumber, p.c};
    case EmFieldKind::point_charge: return sol::PointCharge{p.charge, p.charge_position};
    case EmFieldKind::uniform: return sol::UniformField{{0.3, -0.7, 0.2}, {0.5, 0.1, -0.4}};
  }
  return {};
}

/// Max |residual| of each Maxwell law over random sample points, for every
/// step size in h.
inline ScenarioResult run_em_check(const EmCheckParams& p, std::uint64_t seed, unsigned threads) {
  const em::EmFieldFn field = make_field(p);
  constexpr std::array<const char*, 4> names{"gauss_b", "faraday", "ampere", "gauss_e"};

  // Sample points in [0,1] x [-1,1]^3, kept clear of the point charge.
  std::vector<em::SpacetimePoint> points(p.samples);
  for (std::size_t i = 0; i < p.samples; ++i) {
    SplitMix64 rng(seed, i);
    while (true) {
      const em::SpacetimePoint q{rng.uniform(), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                                 rng.uniform(-1.0, 1.0)};
      if (p.field != EmFieldKind::point_charge || norm(em::solutions::spatial(q) - p.charge_position) > 0.5) {
        points[i] = q;
        break;
      }
    }
  }

  // worst[h][law]
  std::vector<std::array<double, 4>> worst(p.h.size(), std::array<double, 4>{});
  std::vector<std::vector<std::array<double, 4>>> per_point(p.samples, worst);
  parallel_for(p.samples, threads, [&](std::size_t i) {
    for (std::size_t k = 0; k < p.h.size(); ++k) {
      const em::MaxwellResidual r = em::maxwell_residual(field, nullptr, points[i], p.h[k], p.c);
      per_point[i][k] = {std::abs(r.gauss_b), max_abs(r.faraday), max_abs(r.ampere), std::abs(r.gauss_e)};
    }
  });
  for (const auto& pp : per_point) {
    for (std::size_t k = 0; k < p.h.size(); ++k) {
      for (std::size_t law = 0; law < 4; ++law) worst[k][law] = std::max(worst[k][law], pp[k][law]);
    }
  }

  ScenarioResult out;
  out.table.columns = {"h", "residual_name", "value"};
  for (std::size_t k = 0; k < p.h.size(); ++k) {
    for (std::size_t law = 0; law < 4; ++law) {
      out.table.rows.push_back({p.h[k], std::string(names[law]), worst[k][law]});
    }
  }

  double min_ratio = std::numeric_limits<double>::infinity();
  double min_order = std::numeric_limits<double>::infinity();
  double exact = 0.0, finest = 0.0;
  for (std::size_t law = 0; law < 4; ++law) {
    std::vector<double> r;
    for (std::size_t k = 0; k < p.h.size(); ++k) r.push_back(worst[k][law]);
    const em::Convergence cv = em::convergence(p.h, r);
    finest = std::max(finest, r.back());
    if (cv.exact) {
      exact += 1.0;
    } else {
      min_ratio = std::min(min_ratio, cv.min_ratio);
      min_order = std::min(min_order, cv.min_order);
    }
  }
  out.summary = {{"max_residual_finest", finest},
                 {"min_reduction_ratio", min_ratio},
                 {"min_observed_order", min_order},
                 {"exact_residuals", exact}};
  return out;
}

struct LorentzCase {
  std::int64_t length = 0;
  em::FieldInvariants before, after;
  double rel_err = 0.0;
  double w0_before = 0.0, w0_after = 0.0;
  double closed_form_err = 0.0;
};

/// One random field pushed through a random chain of rotations and boosts.
inline LorentzCase lorentz_case(const LorentzCheckParams& p, std::uint64_t seed, std::size_t index) {
  SplitMix64 rng(seed, index);
  const em::EmFieldSample field{{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
                                {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}};
  LorentzCase out;
  out.length = 1 + static_cast<std::int64_t>(rng.next() % p.max_chain);

  em::EmTensor t = em::em_tensor(field);
  for (std::int64_t k = 0; k < out.length; ++k) {
    const bool boost = (rng.next() & 1u) != 0;
    const Vec3d m = rng.unit_vector();
    const double angle = boost ? rng.uniform(-p.max_rapidity, p.max_rapidity) : rng.uniform(-std::numbers::pi,
                                                                                             std::numbers::pi);
    const lorentz::LorentzQuat l = boost ? lorentz::boost_generator(m, angle) : lorentz::rotation_generator(m, angle);
    const em::EmTensor next = lorentz::transform_tensor(l, t);

    const lorentz::FieldTriple f = lorentz::to_field_triple(t);
    const lorentz::FieldTriple closed =
        boost ? lorentz::boost_field_closed(f, m, angle) : lorentz::rotate_field_closed(f, m, angle);
    const lorentz::FieldTriple conj = lorentz::to_field_triple(next);
    const double scale = std::max(1.0, std::sqrt(norm2(real(conj)) + norm2(imag(conj))));
    double err = max_abs(real(closed - conj)) + max_abs(imag(closed - conj));
    if (boost) {
      const em::EmFieldSample s = t.sample();
      const em::EmFieldSample eb = lorentz::eb_boost(s.e, s.b, m * std::tanh(angle));
      const em::EmFieldSample ns = next.sample();
      err = std::max(err, std::max(max_abs(eb.e - ns.e), max_abs(eb.b - ns.b)));
    }
    out.closed_form_err = std::max(out.closed_form_err, err / scale);
    t = next;
  }

  const em::EmFieldSample final = t.sample();
  out.before = em::lorentz_invariants(field);
  out.after = em::lorentz_invariants(final);
  const complex i0(out.before.i1, -out.before.i2), i1(out.after.i1, -out.after.i2);
  out.rel_err = std::abs(i1 - i0) / std::abs(i0);
  out.w0_before = em::energy_quadratic(field).w0;
  out.w0_after = em::energy_quadratic(final).w0;
  return out;
}

inline ScenarioResult run_lorentz_check(const LorentzCheckParams& p, std::uint64_t seed, unsigned threads) {
  std::vector<LorentzCase> cases(p.cases);
  parallel_for(p.cases, threads, [&](std::size_t i) { cases[i] = lorentz_case(p, seed, i); });

  ScenarioResult out;
  out.table.columns = {"case",     "chain_length",      "i1", "i2",       "i1_after",       "i2_after",
                       "rel_error", "w0", "w0_after", "closed_form_error"};
  double worst_rel = 0.0, worst_closed = 0.0, max_w0_change = 0.0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    out.table.rows.push_back({static_cast<std::int64_t>(i), c.length, c.before.i1, c.before.i2, c.after.i1,
                              c.after.i2, c.rel_err, c.w0_before, c.w0_after, c.closed_form_err});
    worst_rel = std::max(worst_rel, c.rel_err);
    worst_closed = std::max(worst_closed, c.closed_form_err);
    max_w0_change = std::max(max_w0_change, std::abs(c.w0_after - c.w0_before));
  }
  out.summary = {{"max_invariant_rel_error", worst_rel},
                 {"max_closed_form_error", worst_closed},
                 {"max_w0_change", max_w0_change},
                 {"rows", static_cast<double>(out.table.rows.size())}};
  return out;
}

}  // namespace detail

/// Pure computation: no files, no clocks.
inline ScenarioResult compute_scenario(const Scenario& s, unsigned threads = 1) {
  switch (s.kind) {
    case ScenarioKind::pms: return detail::run_pms(std::get<PmsParams>(s.params));
    case ScenarioKind::helical: return detail::run_helical(std::get<HelicalRun>(s.params));
    case ScenarioKind::resonance_curve: return detail::run_resonance(std::get<ResonanceParams>(s.params), threads);
    case ScenarioKind::em_check: return detail::run_em_check(std::get<EmCheckParams>(s.params), s.seed, threads);
    case ScenarioKind::lorentz_check:
      return detail::run_lorentz_check(std::get<LorentzCheckParams>(s.params), s.seed, threads);
  }
  throw Error(ErrorKind::InvalidArgument, "unhandled scenario kind");
}

// ---------------------------------------------------------------------------
// Running with output

struct RunOptions {
  std::filesystem::path out_dir = ".";
  unsigned threads = 1;
  std::optional<OutputFormat> format;  // overrides the scenario's format
};

struct RunReport {
  std::string echo;  // canonical key = value listing of the scenario
  Summary summary;
  std::vector<std::filesystem::path> files;
  double duration_s = 0.0;
};

inline std::string echo_scenario(const Scenario& s) {
  std::string out;
  for (const auto& [key, entry] : s.raw) out += key + " = " + entry.value + "\n";
  return out;
}

inline std::string summary_json(const Scenario& s, const Summary& summary, OutputFormat fmt) {
  std::string out = "{\n  \"kind\": " + detail::json_string(kind_name(s.kind)) +
                    ",\n  \"name\": " + detail::json_string(s.name) + ",\n  \"seed\": " + std::to_string(s.seed) +
                    ",\n  \"format\": " + detail::json_string(format_extension(fmt)) + ",\n  \"scenario\": {";
  bool first = true;
  for (const auto& [key, entry] : s.raw) {
    out += first ? "\n    " : ",\n    ";
    out += detail::json_string(key) + ": " + detail::json_string(entry.value);
    first = false;
  }
  out += "\n  },\n  \"summary\": {";
  first = true;
  for (const auto& [key, value] : summary) {
    out += first ? "\n    " : ",\n    ";
    out += detail::json_string(key) + ": " + detail::json_number(value);
    first = false;
  }
  out += "\n  }\n}\n";
  return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.close();
  if (!f) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

inline RunReport run_scenario(const Scenario& s, const RunOptions& opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  const OutputFormat fmt = opt.format.value_or(s.format);

  std::error_code ec;
  std::filesystem::create_directories(opt.out_dir, ec);
  if (ec || !std::filesystem::is_directory(opt.out_dir)) {
    throw Error(ErrorKind::Io, "cannot create output directory " + opt.out_dir.string());
  }

  const ScenarioResult result = compute_scenario(s, std::max(1u, opt.threads));

  RunReport report;
  report.echo = echo_scenario(s);
  report.summary = result.summary;

  const auto data_path = opt.out_dir / (s.name + "." + std::string(format_extension(fmt)));
  write_file(data_path, fmt == OutputFormat::csv ? to_csv(result.table) : to_json(result.table));
  const auto summary_path = opt.out_dir / (s.name + ".summary.json");
  write_file(summary_path, summary_json(s, result.summary, fmt));
  report.files = {data_path, summary_path};

  report.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace qspin::scenario
