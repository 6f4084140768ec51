#include "calmks/config.hpp"

#include <cmath>
#include <stdexcept>

namespace calmks {

std::string_view to_string(InitialPreset preset) {
  switch (preset) {
    case InitialPreset::GradSines: return "grad-sines";
    case InitialPreset::HighOsc: return "high-osc";
    case InitialPreset::Custom: return "custom";
  }
  return "grad-sines";
}

InitialPreset parse_initial_preset(std::string_view name) {
  if (name == "grad-sines") return InitialPreset::GradSines;
  if (name == "high-osc") return InitialPreset::HighOsc;
  if (name == "custom") return InitialPreset::Custom;
  throw std::invalid_argument("unknown initial-data preset '" + std::string(name) + "'");
}

std::string_view to_string(Shape shape) { return shape == Shape::Scalar ? "scalar" : "vector"; }

Shape parse_shape(std::string_view name) {
  if (name == "scalar") return Shape::Scalar;
  if (name == "vector") return Shape::Vector;
  throw std::invalid_argument("unknown equation form '" + std::string(name) +
                              "' (expected vector or scalar)");
}

void RunConfig::validate() const {
  form.validate();
  if (n < Grid::kMinModes || n > Grid::kMaxModes || n % 2 != 0) {
    throw std::invalid_argument("n must be an even integer in [8, 4096]");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw std::invalid_argument("T must be non-negative");
  if (T > 0.0 && dt > T) throw std::invalid_argument("dt must not exceed T");
  if (!(snapshot_every > 0.0)) throw std::invalid_argument("snapshot_every must be positive");
  if (!(cfl > 0.0)) throw std::invalid_argument("cfl must be positive");
  if (initial == InitialPreset::Custom && initial_file.empty()) {
    throw std::invalid_argument("custom initial data needs an initial file");
  }
  if (initial == InitialPreset::HighOsc && form.shape == Shape::Scalar) {
    throw std::invalid_argument("the high-osc preset is vector-valued");
  }
}

}  // namespace calmks
