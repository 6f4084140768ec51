#pragma once

#include <span>
#include <vector>

#include "calmks/calming.hpp"
#include "calmks/field.hpp"
#include "calmks/grid.hpp"
#include "calmks/spectral.hpp"

namespace calmks {

/// Which equation is integrated:
///   vector: du/dt   = -(eta(u).grad)u        - lambda lap u   - lap^2 u
///   scalar: dphi/dt = -1/2 (eta(grad phi).grad)phi - lambda lap phi - lap^2 phi
struct EquationForm {
  Shape shape = Shape::Vector;
  CalmingKind calming;
  double lambda = 4.1;

  /// Throws std::invalid_argument unless lambda > 0.
  void validate() const;

  friend bool operator==(const EquationForm&, const EquationForm&) = default;
};

/// Fourier multiplier of the linear terms, L(k) = lambda |k|^2 - |k|^4, stored
/// per half-layout mode.
class LinearSymbol {
 public:
  /// lambda >= 0; lambda = 0 leaves only the hyperdiffusion.
  LinearSymbol(const Grid& grid, double lambda);

  double lambda() const { return lambda_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t mode) const { return values_[mode]; }
  /// Value at wavenumber (kx, ky).
  double at(int kx, int ky) const;

 private:
  int n_;
  double lambda_;
  std::vector<double> values_;
};

inline LinearSymbol linear_symbol(const Grid& grid, double lambda) { return {grid, lambda}; }

/// Pseudo-spectral evaluation of the (calmed) advective term. Derivatives are
/// spectral, products are pointwise on the collocation grid, and the product
/// is dealiased once. Holds scratch buffers, so one instance per thread.
class NonlinearTerm {
 public:
  NonlinearTerm(const SpectralTransform& transform, const EquationForm& form);

  const EquationForm& form() const { return form_; }

  void evaluate(const SpectralField& state, SpectralField& out);
  SpectralField operator()(const SpectralField& state);

 private:
  void evaluate_vector(const SpectralField& u, SpectralField& out);
  void evaluate_scalar(const SpectralField& phi, SpectralField& out);
  void derivative(std::span<const Complex> in, Axis axis, std::span<double> out);

  const SpectralTransform& transform_;
  EquationForm form_;
  std::vector<Complex> ikx_;  // per row, Nyquist zeroed
  std::vector<Complex> iky_;  // per column, Nyquist zeroed
  AlignedVector<Complex> spec_scratch_;
  AlignedVector<Complex> c2r_scratch_;
  std::vector<AlignedVector<double>> phys_;
};

SpectralField nonlinear_rhs_vector(const SpectralField& u, const EquationForm& form,
                                   const Grid& grid);
SpectralField nonlinear_rhs_scalar(const SpectralField& phi, const EquationForm& form,
                                   const Grid& grid);

/// L u_k + N(u)_k.
SpectralField full_rhs(const SpectralField& state, const EquationForm& form,
                       const LinearSymbol& symbol, const Grid& grid);

}  // namespace calmks
