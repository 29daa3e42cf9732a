#pragma once

// Run configuration for the command-line tool, its file form, and the
// reproducibility manifest written next to every run's reports.

#include "dirac/report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dirac {

enum class Command { CheckPotential, Kernel, Threshold, Asymptotic, Sweep, Probe, DimBound };

std::string to_string(Command c);
Command parse_command(const std::string& text);  // Configuration error on unknown names

struct RunConfig {
  Command command = Command::Kernel;
  std::string output_dir = "dirac-out";
  int threads = 1;
  bool plots = true;
  bool dump_fields = false;

  // [potential]
  std::string potential = "loss-yau";
  std::vector<double> potential_params;

  // [lattice]
  int n = 63;
  double L = 40.0;

  // [eigensolver]
  int k = 3;
  double tol = 1e-6;
  int max_iter = 800;
  std::uint64_t seed = 20080101;
  double mass = 1.0;
  int target_sign = +1;  // target = target_sign · mass
  double eigen_tol = 1e-4;

  // [threshold]
  int sphere_n = 100;
  std::vector<double> radii{10.0, 20.0, 30.0, 40.0, 50.0};
  double direct_sum_tol = 0.05;

  // [landscape]
  double t_min = 0.25;
  double t_max = 1.5;
  double t_step = 0.125;
  double epsilon = 0.1;
  int trials = 20;
  std::vector<double> scales{0.3, 1.0};  // dimbound: multiples of the potential

  bool operator==(const RunConfig&) const = default;
};

/// Throws ErrorKind::Validation naming the offending parameter.
void validate(const RunConfig& c);

TextDocument to_document(const RunConfig& c);
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig from_document(const TextDocument& doc);

std::string serialize(const RunConfig& c);
RunConfig parse_config(const std::string& text);

/// Couplings t_min, t_min + t_step, … ≤ t_max (+ a rounding allowance).
std::vector<double> coupling_grid(const RunConfig& c);

/// Lower-case hex SHA-256 of serialize(c) with output_dir masked.
std::string config_hash(const RunConfig& c);

TextDocument manifest(const RunConfig& c);

}  // namespace dirac
