#pragma once

#include <string>
#include <string_view>

#include "calmks/dynamics.hpp"

namespace calmks {

enum class InitialPreset { GradSines, HighOsc, Custom };

std::string_view to_string(InitialPreset preset);
InitialPreset parse_initial_preset(std::string_view name);
std::string_view to_string(Shape shape);
Shape parse_shape(std::string_view name);

inline constexpr double kDefaultDt = 4.2943e-4;
/// Step used for the larger, more oscillatory initial data.
inline constexpr double kRescaledDt = 1.0736e-4;

/// Everything needed to reproduce one run.
struct RunConfig {
  EquationForm form;
  int n = 128;
  double dt = kDefaultDt;
  double T = 1.0;
  double snapshot_every = 0.1;
  InitialPreset initial = InitialPreset::GradSines;
  std::string initial_file;  // used when initial == Custom
  std::string output_dir = "output";
  /// Courant number for the advective CFL monitor.
  double cfl = 1.0;

  /// Throws std::invalid_argument describing the first violated constraint.
  /// T = 0 is accepted and yields a trajectory holding only the initial state.
  void validate() const;
};

}  // namespace calmks
