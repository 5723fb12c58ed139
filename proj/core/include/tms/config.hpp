#pragma once

// Flat key = value run configuration.
//
// Keys (defaults in brackets):
//   n, q [1], L, N, cfl [0.2], t_final
//   data = gaussian | plane_plus_bump | null_wave | linear_plane | snapshot
//   epsilon (not needed for snapshot data), sigma [1], center [origin],
//   polarization [e_1], null_axis [1, i.e. x^1], plane_gradient [none],
//   data_file (snapshot data only)
//   diag_cadence [10], snapshot_cadence [0 = none], output_dir [tms_output],
//   seed [0], h_form = euler_lagrange | with_cross_terms [euler_lagrange],
//   system = minimal_surface | linear_wave [minimal_surface]
//   allow_wrap [false]           skip the no-wrap rule L >= r_support + t_final + 5 dx
//   allow_any_dimension [false]  accept n = 1 (n is still capped at 3)
// Lists are comma separated. Keys starting with "run." are ignored, so a run
// manifest is itself a valid configuration.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "tms/evolution.hpp"
#include "tms/geometry.hpp"
#include "tms/grid.hpp"
#include "tms/initial_data.hpp"

namespace tms {

struct SimConfig {
  int n = 2;
  int q = 1;
  double L = 0.0;
  int N = 0;
  double cfl = 0.2;
  double t_final = 0.0;
  DataFamily data;
  std::string data_file;
  int diag_cadence = 10;
  int snapshot_cadence = 0;
  std::string output_dir = "tms_output";
  std::uint64_t seed = 0;
  HForm h_form = HForm::kEulerLagrange;
  System system = System::kMinimalSurface;
  bool allow_wrap = false;
  bool allow_any_dimension = false;

  GridSpec grid() const { return {n, q, L, N}; }
  EngineOptions engine() const { return {system, h_form}; }
};

/// Throws ParseError(line) on malformed lines, unknown or repeated keys and
/// bad values, and ValidationError(field, reason) from validate().
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::filesystem::path& path);

/// Throws ValidationError. Checks dimensions, cfl in (0, 0.25], cadences,
/// the data family and the no-wrap rule.
void validate(const SimConfig& config);

/// Every key in canonical order; parse_config(to_text(c)) reproduces c.
std::string to_text(const SimConfig& config);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

}  // namespace tms
