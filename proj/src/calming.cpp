#include "calmks/calming.hpp"

#include <limits>
#include <numbers>
#include <stdexcept>

namespace calmks {

CalmingKind CalmingKind::make(CalmingType type, double epsilon) {
  if (type == CalmingType::Identity) return identity();
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("calming parameter epsilon must be positive and finite");
  }
  return {type, epsilon};
}

double calming_sup_norm(const CalmingKind& kind) {
  switch (kind.type) {
    case CalmingType::Identity:
      return std::numeric_limits<double>::infinity();
    case CalmingType::Type1:
      return 1.0 / kind.epsilon;
    case CalmingType::Type2:
      return 1.0 / (2.0 * kind.epsilon);
    case CalmingType::Type3:
      return std::numbers::pi / (2.0 * kind.epsilon);
  }
  return std::numeric_limits<double>::infinity();
}

double calming_euclidean_sup(const CalmingKind& kind) {
  const double s = calming_sup_norm(kind);
  return kind.type == CalmingType::Type3 ? std::numbers::sqrt2 * s : s;
}

DefectBound defect_bound(const CalmingKind& kind) {
  switch (kind.type) {
    case CalmingType::Type1:
      return {1.0, 2.0, 1.0};
    case CalmingType::Type2:
    case CalmingType::Type3:
      return {2.0, 3.0, 1.0};
    case CalmingType::Identity:
      break;
  }
  throw std::invalid_argument("the identity calming has no defect bound");
}

std::string_view to_string(CalmingType type) {
  switch (type) {
    case CalmingType::Identity: return "identity";
    case CalmingType::Type1: return "type1";
    case CalmingType::Type2: return "type2";
    case CalmingType::Type3: return "type3";
  }
  return "identity";
}

CalmingType parse_calming_type(std::string_view name) {
  if (name == "identity") return CalmingType::Identity;
  if (name == "type1") return CalmingType::Type1;
  if (name == "type2") return CalmingType::Type2;
  if (name == "type3") return CalmingType::Type3;
  throw std::invalid_argument("unknown calming kind '" + std::string(name) +
                              "' (expected identity, type1, type2 or type3)");
}

}  // namespace calmks
