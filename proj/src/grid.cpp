#include "calmks/grid.hpp"

#include <stdexcept>
#include <string>

namespace calmks {

Grid::Grid(int n) : n_(n) {
  if (n < kMinModes || n > kMaxModes || n % 2 != 0) {
    throw std::invalid_argument("grid size must be an even integer in [8, 4096], got " +
                                std::to_string(n));
  }
  dx_ = kDomainLength / n;
  cutoff_ = n / 3;
  wavenumbers_.resize(n);
  for (int i = 0; i < n; ++i) wavenumbers_[i] = i <= n / 2 ? i : i - n;
}

}  // namespace calmks
