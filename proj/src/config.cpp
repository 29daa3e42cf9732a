#include "dirac/config.hpp"

#include "dirac/error.hpp"
#include "dirac/fft.hpp"

#include <openssl/evp.h>

#include <Eigen/Core>

#include <array>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#ifndef DIRAC_VERSION
#define DIRAC_VERSION "unknown"
#endif

namespace dirac {

namespace {

constexpr std::array<std::pair<Command, const char*>, 7> kCommands{{
    {Command::CheckPotential, "check-potential"},
    {Command::Kernel, "kernel"},
    {Command::Threshold, "threshold"},
    {Command::Asymptotic, "asymptotic"},
    {Command::Sweep, "sweep"},
    {Command::Probe, "probe"},
    {Command::DimBound, "dimbound"},
}};

[[noreturn]] void invalid(const std::string& parameter, const std::string& why) {
  fail(ErrorKind::Validation, "parameter '" + parameter + "': " + why);
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += format_number(v[i]);
  }
  return out;
}

std::vector<double> split_numbers(const std::string& text) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string word;
  while (is >> word) out.push_back(parse_number(word));
  return out;
}

long long parse_integer(const std::string& text) {
  long long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    fail(ErrorKind::Configuration, "not an integer: '" + text + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& text) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    fail(ErrorKind::Configuration, "not an unsigned integer: '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  fail(ErrorKind::Configuration, "not a boolean: '" + text + "'");
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [cmd, name] : kCommands)
    if (cmd == c) return name;
  return "unknown";
}

Command parse_command(const std::string& text) {
  for (const auto& [cmd, name] : kCommands)
    if (text == name) return cmd;
  fail(ErrorKind::Configuration, "unknown command '" + text + "'");
}

void validate(const RunConfig& c) {
  if (c.output_dir.empty()) invalid("output_dir", "must not be empty");
  if (c.threads < 1) invalid("threads", "must be at least 1");
  if (c.potential.empty()) invalid("potential", "must name a potential");
  if (c.n % 2 == 0) invalid("n", "must be odd, got " + std::to_string(c.n));
  if (c.n < 15) invalid("n", "must be at least 15, got " + std::to_string(c.n));
  if (!(c.L > 0.0) || !std::isfinite(c.L)) invalid("L", "must be positive, got " + format_number(c.L));
  if (c.k < 1) invalid("k", "must be at least 1");
  if (!(c.tol > 0.0)) invalid("tol", "must be positive, got " + format_number(c.tol));
  if (!(c.eigen_tol > 0.0)) invalid("eigen_tol", "must be positive, got " + format_number(c.eigen_tol));
  if (c.max_iter < 1) invalid("max_iter", "must be at least 1");
  if (!(c.mass >= 0.0) || !std::isfinite(c.mass)) invalid("mass", "must be non-negative, got " + format_number(c.mass));
  if (c.target_sign != 1 && c.target_sign != -1) invalid("target", "must be +m or -m");
  if (c.sphere_n < 1) invalid("sphere_n", "must be at least 1");
  if (c.radii.empty()) invalid("radii", "must list at least one radius");
  for (std::size_t i = 0; i < c.radii.size(); ++i) {
    if (!(c.radii[i] > 0.0)) invalid("radii", "must be positive");
    if (i > 0 && !(c.radii[i] > c.radii[i - 1])) invalid("radii", "must be strictly increasing");
  }
  if (!(c.direct_sum_tol > 0.0 && c.direct_sum_tol < 1.0)) invalid("direct_sum_tol", "must lie in (0, 1)");
  if (!(c.t_step > 0.0)) invalid("t_step", "must be positive");
  if (!(c.t_max >= c.t_min)) invalid("t_max", "must not be below t_min");
  if (!(c.epsilon >= 0.0)) invalid("epsilon", "must be non-negative");
  if (c.trials < 1) invalid("trials", "must be at least 1");
  if (c.scales.empty()) invalid("scales", "must list at least one scale");
  if ((c.command == Command::Threshold || c.command == Command::DimBound) && !(c.mass > 0.0)) {
    invalid("mass", "must be positive for the " + to_string(c.command) + " command");
  }
}

TextDocument to_document(const RunConfig& c) {
  TextDocument d;
  d.set("run", "command", to_string(c.command));
  d.set("run", "output_dir", c.output_dir);
  d.set("run", "threads", c.threads);
  d.set("run", "plots", c.plots);
  d.set("run", "dump_fields", c.dump_fields);
  d.set("potential", "name", c.potential);
  d.set("potential", "params", join(c.potential_params));
  d.set("lattice", "n", c.n);
  d.set("lattice", "L", c.L);
  d.set("eigensolver", "k", c.k);
  d.set("eigensolver", "tol", c.tol);
  d.set("eigensolver", "max_iter", c.max_iter);
  d.set("eigensolver", "seed", std::to_string(c.seed));
  d.set("eigensolver", "mass", c.mass);
  d.set("eigensolver", "target", c.target_sign > 0 ? "+m" : "-m");
  d.set("eigensolver", "eigen_tol", c.eigen_tol);
  d.set("threshold", "sphere_n", c.sphere_n);
  d.set("threshold", "radii", join(c.radii));
  d.set("threshold", "direct_sum_tol", c.direct_sum_tol);
  d.set("landscape", "t_min", c.t_min);
  d.set("landscape", "t_max", c.t_max);
  d.set("landscape", "t_step", c.t_step);
  d.set("landscape", "epsilon", c.epsilon);
  d.set("landscape", "trials", c.trials);
  d.set("landscape", "scales", join(c.scales));
  return d;
}

RunConfig from_document(const TextDocument& doc) {
  static const std::set<std::pair<std::string, std::string>> known = [] {
    std::set<std::pair<std::string, std::string>> s;
    const TextDocument defaults = to_document(RunConfig{});
    for (const auto& [sec, entries] : defaults.sections())
      for (const auto& e : entries) s.insert({sec, e.first});
    return s;
  }();
  for (const auto& [sec, entries] : doc.sections()) {
    for (const auto& e : entries) {
      if (!known.count({sec, e.first})) fail(ErrorKind::Configuration, "unknown key '" + e.first + "' in [" + sec + "]");
    }
  }

  RunConfig c;
  auto with = [&](const char* sec, const char* key, auto&& apply) {
    if (!doc.has(sec, key)) return;
    try {
      apply(doc.get(sec, key));
    } catch (const Error& e) {
      fail(ErrorKind::Configuration, std::string("[") + sec + "] " + key + ": " + e.what());
    }
  };
  auto to_int = [](const std::string& s) { return static_cast<int>(parse_integer(s)); };
  with("run", "command", [&](const std::string& v) { c.command = parse_command(v); });
  with("run", "output_dir", [&](const std::string& v) { c.output_dir = v; });
  with("run", "threads", [&](const std::string& v) { c.threads = to_int(v); });
  with("run", "plots", [&](const std::string& v) { c.plots = parse_bool(v); });
  with("run", "dump_fields", [&](const std::string& v) { c.dump_fields = parse_bool(v); });
  with("potential", "name", [&](const std::string& v) { c.potential = v; });
  with("potential", "params", [&](const std::string& v) { c.potential_params = split_numbers(v); });
  with("lattice", "n", [&](const std::string& v) { c.n = to_int(v); });
  with("lattice", "L", [&](const std::string& v) { c.L = parse_number(v); });
  with("eigensolver", "k", [&](const std::string& v) { c.k = to_int(v); });
  with("eigensolver", "tol", [&](const std::string& v) { c.tol = parse_number(v); });
  with("eigensolver", "max_iter", [&](const std::string& v) { c.max_iter = to_int(v); });
  with("eigensolver", "seed", [&](const std::string& v) { c.seed = parse_unsigned(v); });
  with("eigensolver", "mass", [&](const std::string& v) { c.mass = parse_number(v); });
  with("eigensolver", "target", [&](const std::string& v) {
    if (v == "+m" || v == "m") {
      c.target_sign = 1;
    } else if (v == "-m") {
      c.target_sign = -1;
    } else {
      fail(ErrorKind::Configuration, "target must be +m or -m, got '" + v + "'");
    }
  });
  with("eigensolver", "eigen_tol", [&](const std::string& v) { c.eigen_tol = parse_number(v); });
  with("threshold", "sphere_n", [&](const std::string& v) { c.sphere_n = to_int(v); });
  with("threshold", "radii", [&](const std::string& v) { c.radii = split_numbers(v); });
  with("threshold", "direct_sum_tol", [&](const std::string& v) { c.direct_sum_tol = parse_number(v); });
  with("landscape", "t_min", [&](const std::string& v) { c.t_min = parse_number(v); });
  with("landscape", "t_max", [&](const std::string& v) { c.t_max = parse_number(v); });
  with("landscape", "t_step", [&](const std::string& v) { c.t_step = parse_number(v); });
  with("landscape", "epsilon", [&](const std::string& v) { c.epsilon = parse_number(v); });
  with("landscape", "trials", [&](const std::string& v) { c.trials = to_int(v); });
  with("landscape", "scales", [&](const std::string& v) { c.scales = split_numbers(v); });
  return c;
}

std::string serialize(const RunConfig& c) { return to_document(c).serialize(); }

RunConfig parse_config(const std::string& text) { return from_document(TextDocument::parse(text)); }

std::vector<double> coupling_grid(const RunConfig& c) {
  std::vector<double> t;
  const double span = c.t_max - c.t_min;
  const auto steps = static_cast<long long>(std::floor(span / c.t_step + 1e-9));
  for (long long i = 0; i <= steps; ++i) t.push_back(c.t_min + static_cast<double>(i) * c.t_step);
  return t;
}

std::string config_hash(const RunConfig& c) {
  // where reports go does not change what they contain
  RunConfig keyed = c;
  keyed.output_dir = "-";
  const std::string text = serialize(keyed);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::Evaluation, "SHA-256 of the configuration failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

TextDocument manifest(const RunConfig& c) {
  TextDocument m;
  m.set("manifest", "config_sha256", config_hash(c));
  m.set("manifest", "command", to_string(c.command));
  m.set("manifest", "seed", std::to_string(c.seed));
  m.set("manifest", "threads", c.threads);
  m.set("versions", "dirac_threshold", DIRAC_VERSION);
  m.set("versions", "eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION));
  m.set("versions", "fft", fft_library_version());
  m.set("versions", "compiler", __VERSION__);
  const TextDocument config = to_document(c);
  for (const auto& [sec, entries] : config.sections())
    for (const auto& [k, v] : entries) m.set("config." + sec, k, v);
  return m;
}

}  // namespace dirac
