#pragma once

/**
 * @file scenario.hpp
 * @brief Scenario documents: parsing, typed validation with aggregated errors.
 *
 * A scenario file is a flat list of `key = value` lines. `#` starts a
 * comment, blank lines are ignored. Numeric values accept simple
 * arithmetic with `pi`, e.g. `theta = pi/21`. Vector values are three
 * comma-separated numbers.
 */

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qspin/em_field.hpp"
#include "qspin/error.hpp"
#include "qspin/spin_dynamics.hpp"

namespace qspin::scenario {

/// Config failure carrying every problem found, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> issues)
      : Error(ErrorKind::Config, join(issues)), issues_(std::move(issues)) {}

  [[nodiscard]] const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out;
    for (const auto& s : issues) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }

  std::vector<std::string> issues_;
};

// ---------------------------------------------------------------------------
// Raw documents

struct RawEntry {
  std::string value;
  int line = 0;
};

using RawDocument = std::map<std::string, RawEntry>;

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  for (char ch : k) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_' ||
                    ch == '-' || ch == '.';
    if (!ok) return false;
  }
  return true;
}

}  // namespace detail

/// Splits text into entries. Syntax problems on any line are collected and
/// thrown together.
inline RawDocument parse_document(std::string_view text) {
  RawDocument doc;
  std::vector<std::string> issues;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      issues.push_back(where + ": expected 'key = value'");
      continue;
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (!detail::valid_key(key)) {
      issues.push_back(where + ": invalid key '" + key + "'");
      continue;
    }
    if (value.empty()) {
      issues.push_back(where + ": '" + key + "' has an empty value");
      continue;
    }
    if (const auto it = doc.find(key); it != doc.end()) {
      issues.push_back(where + ": duplicate key '" + key + "' (first set on line " + std::to_string(it->second.line) +
                       ")");
      continue;
    }
    doc.emplace(key, RawEntry{value, line_no});
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return doc;
}

inline RawDocument load_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::Io, "failed reading " + path.string());
  return parse_document(ss.str());
}

// ---------------------------------------------------------------------------
// Numeric expressions

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  std::optional<double> parse() {
    const auto v = expr();
    skip_ws();
    if (!v || i_ != s_.size()) return std::nullopt;
    return v;
  }

 private:
  void skip_ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }

  bool eat(char ch) {
    skip_ws();
    if (i_ < s_.size() && s_[i_] == ch) {
      ++i_;
      return true;
    }
    return false;
  }

  std::optional<double> expr() {
    auto v = term();
    while (v) {
      if (eat('+')) {
        const auto r = term();
        if (!r) return std::nullopt;
        *v += *r;
      } else if (eat('-')) {
        const auto r = term();
        if (!r) return std::nullopt;
        *v -= *r;
      } else {
        break;
      }
    }
    return v;
  }

  std::optional<double> term() {
    auto v = unary();
    while (v) {
      if (eat('*')) {
        const auto r = unary();
        if (!r) return std::nullopt;
        *v *= *r;
      } else if (eat('/')) {
        const auto r = unary();
        if (!r) return std::nullopt;
        *v /= *r;
      } else {
        break;
      }
    }
    return v;
  }

  std::optional<double> unary() {
    if (++depth_ > 64) return std::nullopt;
    std::optional<double> v;
    if (eat('-')) {
      v = unary();
      if (v) *v = -*v;
    } else if (eat('+')) {
      v = unary();
    } else {
      v = primary();
    }
    --depth_;
    return v;
  }

  std::optional<double> primary() {
    skip_ws();
    if (eat('(')) {
      const auto v = expr();
      if (!v || !eat(')')) return std::nullopt;
      return v;
    }
    if (s_.substr(i_, 2) == "pi") {
      i_ += 2;
      return std::numbers::pi;
    }
    double out = 0.0;
    const char* first = s_.data() + i_;
    const auto [ptr, ec] = std::from_chars(first, s_.data() + s_.size(), out);
    if (ec != std::errc() || ptr == first) return std::nullopt;
    i_ += static_cast<std::size_t>(ptr - first);
    return out;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  int depth_ = 0;
};

}  // namespace detail

/// Evaluates `+ - * /`, parentheses, `pi` and decimal literals.
inline std::optional<double> eval_number(std::string_view text) {
  auto v = detail::ExprParser(detail::trim(text)).parse();
  if (v && !std::isfinite(*v)) return std::nullopt;
  return v;
}

// ---------------------------------------------------------------------------
// Typed scenarios

enum class ScenarioKind { pms, helical, resonance_curve, em_check, lorentz_check };
enum class OutputFormat { csv, json };

inline constexpr std::string_view kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::pms: return "pms";
    case ScenarioKind::helical: return "helical";
    case ScenarioKind::resonance_curve: return "resonance-curve";
    case ScenarioKind::em_check: return "em-check";
    case ScenarioKind::lorentz_check: return "lorentz-check";
  }
  return "";
}

inline constexpr std::array<ScenarioKind, 5> kAllKinds{ScenarioKind::pms, ScenarioKind::helical,
                                                        ScenarioKind::resonance_curve, ScenarioKind::em_check,
                                                        ScenarioKind::lorentz_check};

inline std::optional<ScenarioKind> parse_kind(std::string_view s) {
  for (auto k : kAllKinds) {
    if (kind_name(k) == s) return k;
  }
  return std::nullopt;
}

inline std::string allowed_kinds() {
  std::string out;
  for (auto k : kAllKinds) {
    if (!out.empty()) out += ", ";
    out += kind_name(k);
  }
  return out;
}

inline std::optional<OutputFormat> parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  return std::nullopt;
}

inline constexpr std::string_view format_extension(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

struct PmsParams {
  PmsConfig config;
  Vec3d p0{0.0, 0.0, 1.0};
};

struct HelicalRun {
  HelicalParams params;
  double t_max = 0.0;
  double dt = 0.0;
  Vec3d p0{0.0, 0.0, 1.0};
  int sign = -1;
  std::size_t record_stride = 1;
};

struct ResonanceParams {
  double gamma = 0.0;
  double delta_min = 0.0;
  double delta_max = 0.0;
  std::size_t points = 0;
  double t_pass = 0.0;
};

enum class EmFieldKind { plane_wave, standing_wave, point_charge, uniform };

inline constexpr std::string_view em_field_name(EmFieldKind k) {
  switch (k) {
    case EmFieldKind::plane_wave: return "plane-wave";
    case EmFieldKind::standing_wave: return "standing-wave";
    case EmFieldKind::point_charge: return "point-charge";
    case EmFieldKind::uniform: return "uniform";
  }
  return "";
}

struct EmCheckParams {
  EmFieldKind field = EmFieldKind::plane_wave;
  std::vector<double> h{0.02, 0.01, 0.005};
  double c = 1.0;
  std::size_t samples = 8;
  Vec3d direction{1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0};  // plane-wave propagation
  double wavenumber = 1.0;
  double charge = 1.0;
  Vec3d charge_position{0.25, -0.4, 0.15};
};

struct LorentzCheckParams {
  std::size_t cases = 1000;
  std::size_t max_chain = 5;
  double max_rapidity = 2.0;
};

using ScenarioParams = std::variant<PmsParams, HelicalRun, ResonanceParams, EmCheckParams, LorentzCheckParams>;

struct Scenario {
  ScenarioKind kind = ScenarioKind::pms;
  std::string name;            // output file stem
  OutputFormat format = OutputFormat::csv;
  std::uint64_t seed = 0;
  ScenarioParams params;
  RawDocument raw;             // echoed back in the run report
};

// ---------------------------------------------------------------------------
// Validation

namespace detail {

/// Typed reads from a raw document; every failure is appended to `issues`
/// and reading continues so all problems surface together.
class Reader {
 public:
  Reader(const RawDocument& doc, std::vector<std::string>& issues) : doc_(doc), issues_(issues) {}

  void allow(std::initializer_list<std::string_view> keys) {
    for (auto k : keys) allowed_.insert(std::string(k));
  }

  void report_unknown() const {
    for (const auto& [key, entry] : doc_) {
      if (!allowed_.count(key)) {
        issues_.push_back("'" + key + "' (line " + std::to_string(entry.line) + "): unknown key");
      }
    }
  }

  void fail(std::string_view key, const std::string& what) const {
    issues_.push_back("'" + std::string(key) + "': " + what);
  }

  const RawEntry* find(std::string_view key) const {
    const auto it = doc_.find(std::string(key));
    return it == doc_.end() ? nullptr : &it->second;
  }

  std::optional<double> number(std::string_view key, std::optional<double> fallback = std::nullopt) {
    allow({key});
    const RawEntry* e = find(key);
    if (!e) {
      if (!fallback) fail(key, "required number is missing");
      return fallback;
    }
    const auto v = eval_number(e->value);
    if (!v) fail(key, "not a finite number: '" + e->value + "'");
    return v;
  }

  std::optional<std::int64_t> integer(std::string_view key, std::optional<std::int64_t> fallback = std::nullopt) {
    allow({key});
    const RawEntry* e = find(key);
    if (!e) {
      if (!fallback) fail(key, "required integer is missing");
      return fallback;
    }
    std::int64_t out = 0;
    const std::string& s = e->value;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      fail(key, "not an integer: '" + s + "'");
      return std::nullopt;
    }
    return out;
  }

  std::optional<std::string> text(std::string_view key, std::optional<std::string> fallback = std::nullopt) {
    allow({key});
    const RawEntry* e = find(key);
    if (!e) {
      if (!fallback) fail(key, "required value is missing");
      return fallback;
    }
    return e->value;
  }

  std::optional<std::vector<double>> list(std::string_view key, std::optional<std::vector<double>> fallback) {
    allow({key});
    const RawEntry* e = find(key);
    if (!e) {
      if (!fallback) fail(key, "required list is missing");
      return fallback;
    }
    std::vector<double> out;
    std::string_view rest = e->value;
    while (true) {
      const auto comma = rest.find(',');
      const auto v = eval_number(rest.substr(0, comma));
      if (!v) {
        fail(key, "bad list element in '" + e->value + "'");
        return std::nullopt;
      }
      out.push_back(*v);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return out;
  }

  std::optional<Vec3d> vec3(std::string_view key, std::optional<Vec3d> fallback) {
    std::optional<std::vector<double>> fb;
    if (fallback) fb = std::vector<double>{fallback->x, fallback->y, fallback->z};
    const auto v = list(key, fb);
    if (!v) return std::nullopt;
    if (v->size() != 3) {
      fail(key, "expected 3 components, got " + std::to_string(v->size()));
      return std::nullopt;
    }
    return Vec3d{(*v)[0], (*v)[1], (*v)[2]};
  }

  std::optional<Vec3d> unit_vec3(std::string_view key, std::optional<Vec3d> fallback) {
    const auto v = vec3(key, fallback);
    if (v && std::abs(norm(*v) - 1.0) > kUnitInputTol) {
      fail(key, "must be a unit vector (|v| = " + std::to_string(norm(*v)) + ")");
      return std::nullopt;
    }
    return v;
  }

  /// Positive integer no larger than `max`.
  std::optional<std::size_t> count(std::string_view key, std::optional<std::int64_t> fallback, std::int64_t min,
                                   std::int64_t max) {
    const auto v = integer(key, fallback);
    if (!v) return std::nullopt;
    if (*v < min || *v > max) {
      fail(key, "must be in [" + std::to_string(min) + ", " + std::to_string(max) + "], got " + std::to_string(*v));
      return std::nullopt;
    }
    return static_cast<std::size_t>(*v);
  }

  template <class Pred>
  void check(const std::optional<double>& v, std::string_view key, Pred&& ok, const std::string& what) {
    if (v && !ok(*v)) fail(key, what);
  }

 private:
  const RawDocument& doc_;
  std::vector<std::string>& issues_;
  std::set<std::string> allowed_;
};

inline std::optional<PmsParams> read_pms(Reader& r) {
  const auto xi1 = r.number("xi1");
  const auto xi2 = r.number("xi2");
  const auto theta = r.number("theta");
  const auto n_blocks = r.count("n_blocks", std::nullopt, 1, 1'000'000);
  const auto schedule = r.text("schedule", "fixed");
  const auto p0 = r.unit_vec3("p0", Vec3d{0.0, 0.0, 1.0});
  std::optional<BarSchedule> sched;
  if (schedule) {
    if (*schedule == "fixed") sched = BarSchedule::fixed;
    else if (*schedule == "cumulative") sched = BarSchedule::cumulative;
    else r.fail("schedule", "must be 'fixed' or 'cumulative', got '" + *schedule + "'");
  }
  if (!xi1 || !xi2 || !theta || !n_blocks || !sched || !p0) return std::nullopt;
  PmsParams out;
  out.config.n_blocks = static_cast<int>(*n_blocks);
  out.config.xi1 = *xi1;
  out.config.xi2 = *xi2;
  out.config.theta = *theta;
  out.config.schedule = *sched;
  out.p0 = *p0;
  return out;
}

inline std::optional<HelicalRun> read_helical(Reader& r) {
  const auto gamma = r.number("gamma");
  const auto omega = r.number("omega");
  const auto delta = r.number("delta", 0.0);
  const auto t_max = r.number("t_max");
  const auto dt = r.number("dt");
  const auto p0 = r.unit_vec3("p0", Vec3d{0.0, 0.0, 1.0});
  const auto sign = r.integer("sign", -1);
  const auto stride = r.count("record_stride", 1, 1, 1'000'000'000);

  r.check(gamma, "gamma", [](double v) { return v >= 0.0; }, "must be >= 0");
  r.check(t_max, "t_max", [](double v) { return v > 0.0; }, "must be > 0");
  r.check(dt, "dt", [](double v) { return v > 0.0; }, "must be > 0");
  if (sign && *sign != 1 && *sign != -1) r.fail("sign", "must be +1 or -1");
  if (gamma && delta && *gamma == 0.0 && *delta == 0.0) r.fail("gamma", "gamma and delta cannot both be zero");
  if (t_max && dt && *t_max > 0.0 && *dt > 0.0 && *t_max / *dt > 5e7) {
    r.fail("dt", "too many steps (t_max/dt > 5e7)");
  }
  if (gamma && omega && delta && dt && *dt > 0.0) {
    // |gamma B| is constant along the helix.
    const double rate = std::hypot(*gamma, *omega - *delta);
    if (*dt * rate > 0.5) r.fail("dt", "step rotates the spin by more than 0.5 rad; reduce dt");
  }
  if (!gamma || !omega || !delta || !t_max || !dt || !p0 || !sign || !stride) return std::nullopt;
  if (*gamma < 0.0 || !(*t_max > 0.0) || !(*dt > 0.0) || (*sign != 1 && *sign != -1)) return std::nullopt;
  HelicalRun out;
  out.params = {*gamma, *delta, *omega};
  out.t_max = *t_max;
  out.dt = *dt;
  out.p0 = *p0;
  out.sign = static_cast<int>(*sign);
  out.record_stride = *stride;
  return out;
}

inline std::optional<ResonanceParams> read_resonance(Reader& r) {
  const auto gamma = r.number("gamma");
  const auto dmin = r.number("delta_min");
  const auto dmax = r.number("delta_max");
  const auto points = r.count("points", 161, 2, 10'000'000);
  std::optional<double> fallback_t;
  if (gamma && *gamma > 0.0) fallback_t = std::numbers::pi / *gamma;
  const auto t_pass = r.number("t_pass", fallback_t);

  r.check(gamma, "gamma", [](double v) { return v > 0.0; }, "must be > 0");
  r.check(t_pass, "t_pass", [](double v) { return v >= 0.0; }, "must be >= 0");
  if (dmin && dmax && !(*dmax > *dmin)) r.fail("delta_max", "must be greater than delta_min");
  if (!gamma || !dmin || !dmax || !points || !t_pass) return std::nullopt;
  if (!(*gamma > 0.0) || !(*t_pass >= 0.0) || !(*dmax > *dmin)) return std::nullopt;
  return ResonanceParams{*gamma, *dmin, *dmax, *points, *t_pass};
}

inline std::optional<EmCheckParams> read_em_check(Reader& r) {
  EmCheckParams def;
  const auto field = r.text("field", std::string(em_field_name(def.field)));
  const auto h = r.list("h", def.h);
  const auto c = r.number("c", def.c);
  const auto samples = r.count("samples", static_cast<std::int64_t>(def.samples), 1, 100'000);
  const auto direction = r.unit_vec3("direction", def.direction);
  const auto k = r.number("wavenumber", def.wavenumber);
  const auto q = r.number("charge", def.charge);
  const auto pos = r.vec3("charge_position", def.charge_position);

  std::optional<EmFieldKind> kind;
  if (field) {
    for (auto fk : {EmFieldKind::plane_wave, EmFieldKind::standing_wave, EmFieldKind::point_charge,
                    EmFieldKind::uniform}) {
      if (*field == em_field_name(fk)) kind = fk;
    }
    if (!kind) r.fail("field", "unknown field '" + *field + "' (allowed: plane-wave, standing-wave, point-charge, uniform)");
  }
  bool h_ok = h.has_value();
  if (h) {
    if (h->size() < 2) {
      r.fail("h", "need at least two step sizes");
      h_ok = false;
    }
    for (std::size_t i = 0; h_ok && i < h->size(); ++i) {
      if (!((*h)[i] > 0.0) || (i > 0 && !((*h)[i] < (*h)[i - 1]))) {
        r.fail("h", "step sizes must be positive and strictly decreasing");
        h_ok = false;
      }
    }
  }
  r.check(c, "c", [](double v) { return v > 0.0; }, "must be > 0");
  r.check(k, "wavenumber", [](double v) { return v > 0.0; }, "must be > 0");
  if (!kind || !h_ok || !c || !samples || !direction || !k || !q || !pos) return std::nullopt;
  if (!(*c > 0.0) || !(*k > 0.0)) return std::nullopt;
  EmCheckParams out;
  out.field = *kind;
  out.h = *h;
  out.c = *c;
  out.samples = *samples;
  out.direction = *direction;
  out.wavenumber = *k;
  out.charge = *q;
  out.charge_position = *pos;
  return out;
}

inline std::optional<LorentzCheckParams> read_lorentz(Reader& r) {
  LorentzCheckParams def;
  const auto cases = r.count("cases", static_cast<std::int64_t>(def.cases), 1, 10'000'000);
  const auto chain = r.count("max_chain", static_cast<std::int64_t>(def.max_chain), 1, 64);
  const auto rap = r.number("max_rapidity", def.max_rapidity);
  r.check(rap, "max_rapidity", [](double v) { return v >= 0.0 && v <= 20.0; }, "must be in [0, 20]");
  if (!cases || !chain || !rap || !(*rap >= 0.0 && *rap <= 20.0)) return std::nullopt;
  return LorentzCheckParams{*cases, *chain, *rap};
}

}  // namespace detail

/// Builds a typed scenario or throws ConfigError listing every problem.
/// `default_name` is used as output stem when the document has no `name`.
inline Scenario validate_scenario(const RawDocument& doc, const std::string& default_name = "") {
  std::vector<std::string> issues;
  detail::Reader r(doc, issues);
  r.allow({"kind", "name", "format", "seed"});

  Scenario s;
  s.raw = doc;

  std::optional<ScenarioKind> kind;
  if (const RawEntry* e = r.find("kind"); !e) {
    r.fail("kind", "required value is missing (allowed kinds: " + allowed_kinds() + ")");
  } else if (kind = parse_kind(e->value); !kind) {
    r.fail("kind", "unknown kind '" + e->value + "' (allowed kinds: " + allowed_kinds() + ")");
  }

  if (const RawEntry* e = r.find("format")) {
    if (const auto f = parse_format(e->value)) s.format = *f;
    else r.fail("format", "must be 'csv' or 'json', got '" + e->value + "'");
  }

  if (const RawEntry* e = r.find("seed")) {
    const std::string& v = e->value;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s.seed);
    if (ec != std::errc() || ptr != v.data() + v.size()) r.fail("seed", "must be a non-negative integer, got '" + v + "'");
  }

  s.name = default_name;
  if (const RawEntry* e = r.find("name")) {
    s.name = e->value;
    const bool safe = detail::valid_key(s.name) && s.name != "." && s.name != "..";
    if (!safe) r.fail("name", "must use only letters, digits, '_', '-', '.'");
  }

  if (kind) {
    s.kind = *kind;
    if (s.name.empty()) s.name = std::string(kind_name(*kind));
    switch (*kind) {
      case ScenarioKind::pms:
        if (auto p = detail::read_pms(r)) s.params = *p;
        break;
      case ScenarioKind::helical:
        if (auto p = detail::read_helical(r)) s.params = *p;
        break;
      case ScenarioKind::resonance_curve:
        if (auto p = detail::read_resonance(r)) s.params = *p;
        break;
      case ScenarioKind::em_check:
        if (auto p = detail::read_em_check(r)) s.params = *p;
        break;
      case ScenarioKind::lorentz_check:
        if (auto p = detail::read_lorentz(r)) s.params = *p;
        break;
    }
    r.report_unknown();
  }

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return s;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  return validate_scenario(load_document(path), path.stem().string());
}

}  // namespace qspin::scenario
