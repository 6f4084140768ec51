#pragma once

#include <memory>
#include <vector>

#include "calmks/field.hpp"
#include "calmks/grid.hpp"

namespace calmks {

enum class Axis { X, Y };

/// Forward/inverse transform pair between PhysicalField and SpectralField on a
/// fixed grid, backed by FFTW real-to-complex plans.
///
/// Forward output is divided by n^2 and phase-corrected for the grid origin at
/// -pi, so cos(x) maps to 1/2 at k = (+-1, 0). Plans are built with
/// FFTW_ESTIMATE, so results are bit-reproducible for a given build. A
/// transform object may be shared between threads once constructed.
class SpectralTransform {
 public:
  explicit SpectralTransform(const Grid& grid);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;

  const Grid& grid() const { return grid_; }

  SpectralField forward(const PhysicalField& f) const;
  PhysicalField inverse(const SpectralField& f) const;

  /// Allocation-free variants; `out` must already have matching size/shape.
  void forward(const PhysicalField& f, SpectralField& out) const;
  void inverse(const SpectralField& f, PhysicalField& out) const;
  /// Single-component kernels on raw spans (sizes n^2 and n(n/2+1)).
  void forward_component(std::span<const double> in, std::span<Complex> out) const;
  /// `scratch` receives a copy of `in`; FFTW's c2r destroys its input.
  void inverse_component(std::span<const Complex> in, std::span<double> out,
                         std::span<Complex> scratch) const;

 private:
  struct Plans;
  Grid grid_;
  std::vector<double> phase_;  // (-1)^(kx+ky) per half-layout mode
  std::unique_ptr<Plans> plans_;
};

/// Multiplies every coefficient by (i k_axis)^order. For odd orders the
/// Nyquist line k_axis = n/2 is zeroed.
SpectralField spectral_derivative(const SpectralField& f, Axis axis, int order,
                                  const Grid& grid);
void spectral_derivative_inplace(SpectralField& f, Axis axis, int order, const Grid& grid);

/// Zeros every mode with |kx| > kc or |ky| > kc, kc = floor(n/3).
SpectralField dealias(const SpectralField& f, const Grid& grid);
void dealias_inplace(SpectralField& f, const Grid& grid);

/// L2 norm over [-pi,pi)^2 by Parseval: ((2 pi)^2 sum_k |u_k|^2)^(1/2).
double l2_norm(const SpectralField& f, const Grid& grid);
/// L2 norm by midpoint quadrature: (dx^2 sum f^2)^(1/2).
double l2_norm(const PhysicalField& f, const Grid& grid);

/// ((2 pi)^2 sum_k (1+|k|)^(2s) |u_k|^2)^(1/2); equals l2_norm at s = 0.
double hs_norm(const SpectralField& f, double s, const Grid& grid);

/// Max pointwise magnitude: |phi| for scalars, sqrt(u^2+v^2) for vectors.
double linf_norm(const PhysicalField& f);

/// Largest |u_k| over all stored modes and components.
double max_coefficient(const SpectralField& f);
/// Largest |u_k| among modes removed by the dealias mask.
double max_tail_coefficient(const SpectralField& f, const Grid& grid);

}  // namespace calmks
