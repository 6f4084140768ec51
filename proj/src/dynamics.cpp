#include "calmks/dynamics.hpp"

#include <stdexcept>

namespace calmks {

void EquationForm::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be positive and finite");
  }
  if (calming.type != CalmingType::Identity && !(calming.epsilon > 0.0)) {
    throw std::invalid_argument("calmed equations need epsilon > 0");
  }
}

LinearSymbol::LinearSymbol(const Grid& grid, double lambda)
    : n_(grid.n()), lambda_(lambda), values_(grid.spectral_size()) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("lambda must be non-negative and finite");
  }
  const int cols = grid.spectral_cols();
  for (int r = 0; r < grid.n(); ++r) {
    for (int c = 0; c < cols; ++c) {
      values_[static_cast<std::size_t>(r) * cols + c] = at(grid.kx(r), grid.ky(c));
    }
  }
}

double LinearSymbol::at(int kx, int ky) const {
  const double k2 = static_cast<double>(kx) * kx + static_cast<double>(ky) * ky;
  return lambda_ * k2 - k2 * k2;
}

NonlinearTerm::NonlinearTerm(const SpectralTransform& transform, const EquationForm& form)
    : transform_(transform), form_(form) {
  const Grid& g = transform.grid();
  const int n = g.n();
  ikx_.resize(n);
  iky_.resize(g.spectral_cols());
  for (int r = 0; r < n; ++r) ikx_[r] = (r == n / 2) ? Complex{} : Complex{0.0, double(g.kx(r))};
  for (int c = 0; c < g.spectral_cols(); ++c) {
    iky_[c] = (c == n / 2) ? Complex{} : Complex{0.0, double(g.ky(c))};
  }
  spec_scratch_.resize(g.spectral_size());
  c2r_scratch_.resize(g.spectral_size());
  const int buffers = form.shape == Shape::Vector ? 6 : 2;
  phys_.assign(buffers, AlignedVector<double>(g.physical_size()));
}

void NonlinearTerm::derivative(std::span<const Complex> in, Axis axis, std::span<double> out) {
  const Grid& g = transform_.grid();
  const int cols = g.spectral_cols();
  for (int r = 0; r < g.n(); ++r) {
    for (int c = 0; c < cols; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * cols + c;
      spec_scratch_[i] = in[i] * (axis == Axis::X ? ikx_[r] : iky_[c]);
    }
  }
  transform_.inverse_component(spec_scratch_, out, c2r_scratch_);
}

void NonlinearTerm::evaluate_vector(const SpectralField& u, SpectralField& out) {
  // phys_: u1, u2, d_x u1, d_x u2, d_y u1, d_y u2
  for (int c = 0; c < 2; ++c) {
    transform_.inverse_component(u.component(c), phys_[c], c2r_scratch_);
    derivative(u.component(c), Axis::X, phys_[2 + c]);
    derivative(u.component(c), Axis::Y, phys_[4 + c]);
  }
  auto& u1 = phys_[0];
  auto& u2 = phys_[1];
  const std::size_t points = u1.size();
  for (std::size_t p = 0; p < points; ++p) {
    const Vec2 w = apply_calming(form_.calming, {u1[p], u2[p]});
    // The velocity buffers are no longer needed once w is formed.
    u1[p] = -(w[0] * phys_[2][p] + w[1] * phys_[4][p]);
    u2[p] = -(w[0] * phys_[3][p] + w[1] * phys_[5][p]);
  }
  transform_.forward_component(u1, out.component(0));
  transform_.forward_component(u2, out.component(1));
}

void NonlinearTerm::evaluate_scalar(const SpectralField& phi, SpectralField& out) {
  auto& gx = phys_[0];
  auto& gy = phys_[1];
  derivative(phi.component(0), Axis::X, gx);
  derivative(phi.component(0), Axis::Y, gy);
  for (std::size_t p = 0; p < gx.size(); ++p) {
    const Vec2 w = apply_calming(form_.calming, {gx[p], gy[p]});
    gx[p] = -0.5 * (w[0] * gx[p] + w[1] * gy[p]);
  }
  transform_.forward_component(gx, out.component(0));
}

void NonlinearTerm::evaluate(const SpectralField& state, SpectralField& out) {
  const Grid& g = transform_.grid();
  if (state.n() != g.n() || out.n() != g.n()) {
    throw std::invalid_argument("nonlinear term: field size does not match grid");
  }
  if (state.shape() != form_.shape || out.shape() != form_.shape) {
    throw std::invalid_argument("nonlinear term: field shape does not match equation form");
  }
  if (form_.shape == Shape::Vector) {
    evaluate_vector(state, out);
  } else {
    evaluate_scalar(state, out);
  }
  dealias_inplace(out, g);
}

SpectralField NonlinearTerm::operator()(const SpectralField& state) {
  SpectralField out(transform_.grid(), form_.shape);
  evaluate(state, out);
  return out;
}

SpectralField nonlinear_rhs_vector(const SpectralField& u, const EquationForm& form,
                                   const Grid& grid) {
  if (form.shape != Shape::Vector) throw std::invalid_argument("expected a vector form");
  SpectralTransform transform(grid);
  NonlinearTerm term(transform, form);
  return term(u);
}

SpectralField nonlinear_rhs_scalar(const SpectralField& phi, const EquationForm& form,
                                   const Grid& grid) {
  if (form.shape != Shape::Scalar) throw std::invalid_argument("expected a scalar form");
  SpectralTransform transform(grid);
  NonlinearTerm term(transform, form);
  return term(phi);
}

SpectralField full_rhs(const SpectralField& state, const EquationForm& form,
                       const LinearSymbol& symbol, const Grid& grid) {
  SpectralTransform transform(grid);
  NonlinearTerm term(transform, form);
  SpectralField out = term(state);
  for (int c = 0; c < state.components(); ++c) {
    auto dst = out.component(c);
    auto src = state.component(c);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += symbol[i] * src[i];
  }
  return out;
}

}  // namespace calmks
