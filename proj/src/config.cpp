#include "hartree/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace hartree {

ConfigError::ConfigError(std::string field, int line, const std::string& message)
    : Error(line > 0 ? fmt::format("config line {}: {}: {}", line, field, message)
                     : fmt::format("config: {}: {}", field, message)),
      field_(std::move(field)),
      line_(line),
      message_(message) {}

std::string to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::plane_wave:
      return "plane_wave";
    case InitialKind::random_smooth:
      return "random_smooth";
    case InitialKind::gaussian_bump:
      return "gaussian_bump";
  }
  return "unknown";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "grid.K",           "theta.N",          "theta.s",          "resonance.rule",
      "resonance.c_beta", "resonance.alpha",  "potential.preset", "potential.sigma",
      "potential.c",      "initial.kind",     "initial.alpha",    "initial.n0",
      "initial.amplitude", "initial.decay",   "initial.seed",     "initial.width",
      "stepper.dt",       "stepper.t_end",    "stepper.stride",   "measure.delta",
      "sweep.N",          "output.dir",       "budget.max_active", "run.threads",
      "audit.c_scale",    "audit.denominator_sign"};
  return keys;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  for (const char ch : value) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item.push_back(ch);
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  int line(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }

  double real(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return parse_real(key, entries_.at(key).value);
  }

  long integer(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const auto& text = entries_.at(key).value;
    long value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
      throw ConfigError(key, line(key), fmt::format("expected an integer, got '{}'", text));
    return value;
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const auto& text = entries_.at(key).value;
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
      throw ConfigError(key, line(key), fmt::format("expected an unsigned integer, got '{}'", text));
    return value;
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? entries_.at(key).value : fallback;
  }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(entries_.at(key).value)) out.push_back(parse_real(key, item));
    return out;
  }

 private:
  double parse_real(const std::string& key, const std::string& text) const {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
      throw ConfigError(key, line(key), fmt::format("expected a number, got '{}'", text));
    return value;
  }

  std::map<std::string, Entry> entries_;
};

std::map<std::string, Entry> tokenize(std::string_view text) {
  std::map<std::string, Entry> entries;
  const auto& known = config_keys();
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("<syntax>", line_no, fmt::format("expected 'key = value', got '{}'", line));
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError(key, line_no, "unknown key");
    if (value.empty()) throw ConfigError(key, line_no, "missing value");
    if (entries.count(key) > 0)
      throw ConfigError(key, line_no,
                        fmt::format("duplicate key (first set on line {})", entries[key].line));
    entries[key] = {value, line_no};
  }
  return entries;
}

Complex parse_complex(const Reader& r, const std::string& key, Complex fallback) {
  if (!r.has(key)) return fallback;
  const auto parts = r.reals(key);
  if (parts.size() == 1) return {parts[0], 0.0};
  if (parts.size() == 2) return {parts[0], parts[1]};
  throw ConfigError(key, r.line(key), "expected 're' or 're, im'");
}

Mode parse_mode(const Reader& r, const std::string& key, Mode fallback) {
  if (!r.has(key)) return fallback;
  const auto parts = r.reals(key);
  if (parts.size() != 2 || parts[0] != static_cast<int>(parts[0]) ||
      parts[1] != static_cast<int>(parts[1]))
    throw ConfigError(key, r.line(key), "expected two integers 'x, y'");
  return {static_cast<int>(parts[0]), static_cast<int>(parts[1])};
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  const Reader r(tokenize(text));
  ExperimentConfig cfg;

  if (!r.has("grid.K")) throw ConfigError("grid.K", 0, "required key is missing");
  cfg.K = static_cast<int>(r.integer("grid.K", 0));

  cfg.theta.N = r.real("theta.N", cfg.theta.N);
  cfg.theta.s = r.real("theta.s", cfg.theta.s);

  try {
    cfg.rule = parse_beta0_rule(r.text("resonance.rule", "torus"));
  } catch (const Error& e) {
    throw ConfigError("resonance.rule", r.line("resonance.rule"), e.what());
  }
  cfg.c_beta = r.real("resonance.c_beta", cfg.c_beta);
  cfg.alpha = r.real("resonance.alpha", cfg.alpha);

  try {
    cfg.preset = parse_potential_preset(r.text("potential.preset", "delta"));
  } catch (const Error& e) {
    throw ConfigError("potential.preset", r.line("potential.preset"), e.what());
  }
  cfg.sigma = r.real("potential.sigma", cfg.sigma);
  cfg.c_const = r.real("potential.c", cfg.c_const);

  const std::string kind = r.text("initial.kind", "random_smooth");
  if (kind == "plane_wave")
    cfg.initial.kind = InitialKind::plane_wave;
  else if (kind == "random_smooth")
    cfg.initial.kind = InitialKind::random_smooth;
  else if (kind == "gaussian_bump")
    cfg.initial.kind = InitialKind::gaussian_bump;
  else
    throw ConfigError("initial.kind", r.line("initial.kind"),
                      fmt::format("unknown initial data kind '{}'", kind));
  cfg.initial.alpha = parse_complex(r, "initial.alpha", cfg.initial.alpha);
  cfg.initial.n0 = parse_mode(r, "initial.n0", cfg.initial.n0);
  cfg.initial.amplitude = r.real("initial.amplitude", cfg.initial.amplitude);
  cfg.initial.decay = r.real("initial.decay", cfg.theta.s + 2.0);
  cfg.initial.seed = r.unsigned_integer("initial.seed", cfg.initial.seed);
  cfg.initial.width = r.real("initial.width", cfg.initial.width);

  cfg.stepper.dt = r.real("stepper.dt", cfg.stepper.dt);
  cfg.stepper.t_end = r.real("stepper.t_end", cfg.stepper.t_end);
  cfg.stepper.observer_stride = static_cast<int>(r.integer("stepper.stride", cfg.stepper.observer_stride));
  cfg.delta_meas = r.real("measure.delta", cfg.delta_meas);
  if (r.has("sweep.N")) cfg.n_sweep = r.reals("sweep.N");
  cfg.output_dir = r.text("output.dir", cfg.output_dir);
  cfg.max_active = static_cast<std::size_t>(r.integer("budget.max_active", static_cast<long>(cfg.max_active)));
  cfg.threads = static_cast<int>(r.integer("run.threads", cfg.threads));
  cfg.audit_c_scale = r.real("audit.c_scale", cfg.audit_c_scale);
  cfg.audit_denominator_sign = r.real("audit.denominator_sign", cfg.audit_denominator_sign);

  // Attach line numbers to invariant violations where possible.
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    if (e.line() == 0 && r.has(e.field()))
      throw ConfigError(e.field(), r.line(e.field()), e.message());
    throw;
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", 0, fmt::format("cannot read '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

Potential ExperimentConfig::potential() const {
  switch (preset) {
    case PotentialPreset::delta:
      return Potential::delta();
    case PotentialPreset::gaussian:
      return Potential::gaussian(sigma);
    case PotentialPreset::constant:
      return Potential::constant(c_const);
  }
  return Potential::delta();
}

ResonanceParams ExperimentConfig::resonance_at(double N) const {
  return ResonanceParams::from_rule(rule, N, c_beta, alpha);
}

Diagnostics ExperimentConfig::diagnostics_at(double N) const {
  Diagnostics d;
  d.theta = {N, theta.s};
  d.resonance = resonance_at(N);
  d.max_active = max_active;
  return d;
}

void ExperimentConfig::validate() const {
  const auto fail = [](const std::string& field, const std::string& msg) {
    throw ConfigError(field, 0, msg);
  };
  if (K < 4 || (K & (K - 1)) != 0) fail("grid.K", fmt::format("must be a power of two >= 4, got {}", K));
  if (!(theta.N > 1.0)) fail("theta.N", fmt::format("must exceed 1, got {}", theta.N));
  if (!(theta.s > 1.0)) fail("theta.s", fmt::format("must exceed 1, got {}", theta.s));
  if (!(c_beta > 0.0)) fail("resonance.c_beta", fmt::format("must be positive, got {}", c_beta));
  if (rule == Beta0Rule::plane && !(alpha >= 0.5 && alpha <= 0.75))
    fail("resonance.alpha", fmt::format("must lie in [1/2, 3/4] under the plane rule, got {}", alpha));
  if (preset == PotentialPreset::gaussian && !(sigma > 0.0))
    fail("potential.sigma", fmt::format("must be positive, got {}", sigma));
  if (preset == PotentialPreset::constant && !(c_const >= 0.0))
    fail("potential.c", fmt::format("must be nonnegative, got {}", c_const));

  const TorusGrid g(K);
  switch (initial.kind) {
    case InitialKind::plane_wave:
      if (!g.retained(initial.n0))
        fail("initial.n0", fmt::format("mode ({}, {}) is not retained on the K={} grid",
                                       initial.n0.x, initial.n0.y, K));
      break;
    case InitialKind::random_smooth:
      if (!(initial.decay > theta.s + 1.0))
        fail("initial.decay", fmt::format("must exceed s + 1 = {}, got {}", theta.s + 1.0, initial.decay));
      break;
    case InitialKind::gaussian_bump:
      if (!(initial.width > 0.0)) fail("initial.width", "must be positive");
      break;
  }
  if (!std::isfinite(initial.amplitude)) fail("initial.amplitude", "must be finite");

  if (!(stepper.dt > 0.0)) fail("stepper.dt", fmt::format("must be positive, got {}", stepper.dt));
  if (!(stepper.t_end >= 0.0)) fail("stepper.t_end", fmt::format("must be nonnegative, got {}", stepper.t_end));
  if (stepper.observer_stride < 1) fail("stepper.stride", "must be >= 1");
  if (!(delta_meas > 0.0)) fail("measure.delta", "must be positive");
  if (delta_meas > stepper.t_end && stepper.t_end > 0.0)
    fail("measure.delta", fmt::format("must not exceed stepper.t_end = {}", stepper.t_end));
  if (n_sweep.empty()) fail("sweep.N", "must list at least one threshold");
  for (const double N : n_sweep)
    if (!(N > 1.0)) fail("sweep.N", fmt::format("every threshold must exceed 1, got {}", N));
  if (max_active < 1) fail("budget.max_active", "must be >= 1");
  if (threads < 1) fail("run.threads", "must be >= 1");
  if (!(audit_c_scale != 0.0)) fail("audit.c_scale", "must be nonzero");
  if (audit_denominator_sign != 1.0 && audit_denominator_sign != -1.0)
    fail("audit.denominator_sign", "must be 1 or -1");
}

}  // namespace hartree
