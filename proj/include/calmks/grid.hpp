#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace calmks {

/// Uniform collocation grid on the periodic square [-pi, pi)^2.
///
/// Spectral data uses the real-to-complex half layout: `n` rows indexed by
/// the x wavenumber (transform order 0, 1, ..., n/2, -n/2+1, ..., -1) and
/// `n/2 + 1` columns indexed by the non-negative y wavenumber. Modes with
/// negative ky are implied by conjugate symmetry.
class Grid {
 public:
  static constexpr int kMinModes = 8;
  static constexpr int kMaxModes = 4096;
  static constexpr double kDomainLength = 2.0 * std::numbers::pi;

  /// Throws std::invalid_argument unless n is even and within [8, 4096].
  explicit Grid(int n);

  int n() const { return n_; }
  double dx() const { return dx_; }
  double domain_length() const { return kDomainLength; }
  /// Largest retained |k_j| under the 2/3 rule: floor(n/3).
  int dealias_cutoff() const { return cutoff_; }

  /// Coordinate of collocation index i along either axis.
  double coordinate(int i) const { return -std::numbers::pi + i * dx_; }

  /// Per-axis wavenumbers in transform order (length n).
  std::span<const int> wavenumbers() const { return wavenumbers_; }

  std::size_t physical_size() const { return static_cast<std::size_t>(n_) * n_; }
  int spectral_cols() const { return n_ / 2 + 1; }
  std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * spectral_cols(); }

  /// x wavenumber of spectral row r.
  int kx(int row) const { return wavenumbers_[row]; }
  /// y wavenumber of spectral column c.
  int ky(int col) const { return col; }

  /// Row holding the x wavenumber k (taken modulo n).
  int row_of(int k) const { return ((k % n_) + n_) % n_; }

  bool retained(int kx, int ky) const {
    return (kx < 0 ? -kx : kx) <= cutoff_ && (ky < 0 ? -ky : ky) <= cutoff_;
  }

  /// Parseval multiplicity of a half-layout column: interior columns stand
  /// for themselves and their conjugate partner.
  double column_weight(int col) const {
    return (col == 0 || col == n_ / 2) ? 1.0 : 2.0;
  }

  friend bool operator==(const Grid& a, const Grid& b) { return a.n_ == b.n_; }

 private:
  int n_;
  double dx_;
  int cutoff_;
  std::vector<int> wavenumbers_;
};

}  // namespace calmks
