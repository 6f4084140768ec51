#pragma once

#include <array>
#include <cmath>
#include <string>
#include <string_view>

namespace calmks {

using Vec2 = std::array<double, 2>;

enum class CalmingType { Identity, Type1, Type2, Type3 };

/// Which calming function replaces the advecting velocity, and its parameter.
/// Identity means the uncalmed equation; epsilon is ignored for it.
struct CalmingKind {
  CalmingType type = CalmingType::Identity;
  double epsilon = 0.0;

  static CalmingKind identity() { return {}; }
  /// Throws std::invalid_argument when a calmed type is given epsilon <= 0.
  static CalmingKind make(CalmingType type, double epsilon);

  friend bool operator==(const CalmingKind&, const CalmingKind&) = default;
};

/// Constants of |eta(x) - x| <= c * eps^alpha * |x|^beta.
struct DefectBound {
  double alpha;
  double beta;
  double c;
};

/// Type1: v / (1 + eps|v|); Type2: v / (1 + eps^2 |v|^2); Type3: arctan(eps v)/eps
/// componentwise. |v| is the Euclidean magnitude.
inline Vec2 apply_calming(const CalmingKind& kind, const Vec2& v) {
  const double eps = kind.epsilon;
  switch (kind.type) {
    case CalmingType::Identity:
      return v;
    case CalmingType::Type1: {
      const double d = 1.0 + eps * std::sqrt(v[0] * v[0] + v[1] * v[1]);
      return {v[0] / d, v[1] / d};
    }
    case CalmingType::Type2: {
      const double d = 1.0 + eps * eps * (v[0] * v[0] + v[1] * v[1]);
      return {v[0] / d, v[1] / d};
    }
    case CalmingType::Type3:
      return {std::atan(eps * v[0]) / eps, std::atan(eps * v[1]) / eps};
  }
  return v;
}

/// sup over R^2 of |eta|: 1/eps, 1/(2 eps), pi/(2 eps); +infinity for Identity.
/// Type3 acts per component, so its bound is on max(|eta_1|, |eta_2|).
double calming_sup_norm(const CalmingKind& kind);

/// sup over R^2 of the Euclidean magnitude of eta. Same as calming_sup_norm
/// except Type3, where both components saturate at once: sqrt(2) pi/(2 eps).
double calming_euclidean_sup(const CalmingKind& kind);

/// Throws std::invalid_argument for Identity, which has no defect.
DefectBound defect_bound(const CalmingKind& kind);

/// "identity" | "type1" | "type2" | "type3"
std::string_view to_string(CalmingType type);
CalmingType parse_calming_type(std::string_view name);

}  // namespace calmks
