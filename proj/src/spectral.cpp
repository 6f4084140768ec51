#include "calmks/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace calmks {

namespace {

// FFTW's planner is not re-entrant; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void require_grid(int n, const Grid& grid) {
  if (n != grid.n()) throw std::invalid_argument("field size does not match grid");
}

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

// Plans are made on AlignedVector storage; other buffers go through a copy so
// the same plan (and the same rounding) is used for every call.
bool aligned(const void* p) {
  return reinterpret_cast<std::uintptr_t>(p) % alignof(std::max_align_t) == 0 &&
         fftw_alignment_of(const_cast<double*>(static_cast<const double*>(p))) == 0;
}

}  // namespace

struct SpectralTransform::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

SpectralTransform::SpectralTransform(const Grid& grid)
    : grid_(grid), phase_(grid.spectral_size()), plans_(std::make_unique<Plans>()) {
  const int n = grid.n();
  const int cols = grid.spectral_cols();
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < cols; ++c) {
      phase_[static_cast<std::size_t>(r) * cols + c] = ((grid.kx(r) + c) % 2 == 0) ? 1.0 : -1.0;
    }
  }
  AlignedVector<double> real(grid.physical_size());
  AlignedVector<Complex> spec(grid.spectral_size());
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE;
  plans_->r2c = fftw_plan_dft_r2c_2d(n, n, real.data(), as_fftw(spec.data()), flags);
  plans_->c2r = fftw_plan_dft_c2r_2d(n, n, as_fftw(spec.data()), real.data(), flags);
  if (!plans_->r2c || !plans_->c2r) throw std::runtime_error("FFTW plan creation failed");
}

SpectralTransform::~SpectralTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plans_->r2c);
  fftw_destroy_plan(plans_->c2r);
}

void SpectralTransform::forward_component(std::span<const double> in,
                                          std::span<Complex> out) const {
  if (in.size() != grid_.physical_size() || out.size() != grid_.spectral_size()) {
    throw std::invalid_argument("transform buffer size does not match grid");
  }
  if (!aligned(in.data()) || !aligned(out.data())) {
    AlignedVector<double> a(in.begin(), in.end());
    AlignedVector<Complex> b(out.size());
    forward_component(a, b);
    std::copy(b.begin(), b.end(), out.begin());
    return;
  }
  // r2c leaves its input untouched.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()), as_fftw(out.data()));
  const double scale = 1.0 / static_cast<double>(grid_.physical_size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= phase_[i] * scale;
}

void SpectralTransform::inverse_component(std::span<const Complex> in, std::span<double> out,
                                          std::span<Complex> scratch) const {
  if (in.size() != grid_.spectral_size() || out.size() != grid_.physical_size() ||
      scratch.size() != grid_.spectral_size()) {
    throw std::invalid_argument("transform buffer size does not match grid");
  }
  if (!aligned(out.data()) || !aligned(scratch.data())) {
    AlignedVector<double> a(out.size());
    AlignedVector<Complex> b(scratch.size());
    inverse_component(in, a, b);
    std::copy(a.begin(), a.end(), out.begin());
    return;
  }
  for (std::size_t i = 0; i < in.size(); ++i) scratch[i] = in[i] * phase_[i];
  fftw_execute_dft_c2r(plans_->c2r, as_fftw(scratch.data()), out.data());
}

void SpectralTransform::forward(const PhysicalField& f, SpectralField& out) const {
  require_grid(f.n(), grid_);
  require_grid(out.n(), grid_);
  if (out.shape() != f.shape()) throw std::invalid_argument("output shape mismatch");
  for (int c = 0; c < f.components(); ++c) forward_component(f.component(c), out.component(c));
}

void SpectralTransform::inverse(const SpectralField& f, PhysicalField& out) const {
  require_grid(f.n(), grid_);
  require_grid(out.n(), grid_);
  if (out.shape() != f.shape()) throw std::invalid_argument("output shape mismatch");
  AlignedVector<Complex> scratch(grid_.spectral_size());
  for (int c = 0; c < f.components(); ++c) inverse_component(f.component(c), out.component(c), scratch);
}

SpectralField SpectralTransform::forward(const PhysicalField& f) const {
  SpectralField out(grid_, f.shape());
  forward(f, out);
  return out;
}

PhysicalField SpectralTransform::inverse(const SpectralField& f) const {
  PhysicalField out(grid_, f.shape());
  inverse(f, out);
  return out;
}

void spectral_derivative_inplace(SpectralField& f, Axis axis, int order, const Grid& grid) {
  require_grid(f.n(), grid);
  if (order < 1) throw std::invalid_argument("derivative order must be positive");
  const int n = grid.n();
  const int cols = grid.spectral_cols();
  // (i k)^order = i^order k^order
  static constexpr Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex ipow = kIPowers[order % 4];
  const bool odd = order % 2 == 1;
  for (int c = 0; c < f.components(); ++c) {
    for (int r = 0; r < n; ++r) {
      for (int col = 0; col < cols; ++col) {
        const int k = axis == Axis::X ? grid.kx(r) : grid.ky(col);
        Complex& v = f.at(c, r, col);
        if (odd && (k == n / 2 || k == -n / 2)) {
          v = {};
          continue;
        }
        v *= ipow * std::pow(static_cast<double>(k), order);
      }
    }
  }
}

SpectralField spectral_derivative(const SpectralField& f, Axis axis, int order, const Grid& grid) {
  SpectralField out = f;
  spectral_derivative_inplace(out, axis, order, grid);
  return out;
}

void dealias_inplace(SpectralField& f, const Grid& grid) {
  require_grid(f.n(), grid);
  const int cols = grid.spectral_cols();
  for (int c = 0; c < f.components(); ++c) {
    for (int r = 0; r < grid.n(); ++r) {
      for (int col = 0; col < cols; ++col) {
        if (!grid.retained(grid.kx(r), grid.ky(col))) f.at(c, r, col) = {};
      }
    }
  }
}

SpectralField dealias(const SpectralField& f, const Grid& grid) {
  SpectralField out = f;
  dealias_inplace(out, grid);
  return out;
}

namespace {

template <class Weight>
double weighted_sum(const SpectralField& f, const Grid& grid, Weight weight) {
  require_grid(f.n(), grid);
  const int cols = grid.spectral_cols();
  double total = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    for (int r = 0; r < grid.n(); ++r) {
      for (int col = 0; col < cols; ++col) {
        total += grid.column_weight(col) * weight(grid.kx(r), grid.ky(col)) *
                 std::norm(f.at(c, r, col));
      }
    }
  }
  return total;
}

}  // namespace

double l2_norm(const SpectralField& f, const Grid& grid) {
  const double L = grid.domain_length();
  return std::sqrt(L * L * weighted_sum(f, grid, [](int, int) { return 1.0; }));
}

double l2_norm(const PhysicalField& f, const Grid& grid) {
  require_grid(f.n(), grid);
  double total = 0.0;
  for (double v : f.data()) total += v * v;
  return std::sqrt(total * grid.dx() * grid.dx());
}

double hs_norm(const SpectralField& f, double s, const Grid& grid) {
  const double L = grid.domain_length();
  const double p = 2.0 * s;
  const bool small_integer = p >= 0.0 && p <= 16.0 && p == std::floor(p);
  const int ip = static_cast<int>(p);
  const double sum = weighted_sum(f, grid, [=](int kx, int ky) {
    const double base = 1.0 + std::sqrt(static_cast<double>(kx) * kx + static_cast<double>(ky) * ky);
    if (!small_integer) return std::pow(base, p);
    double w = 1.0;
    for (int i = 0; i < ip; ++i) w *= base;
    return w;
  });
  return std::sqrt(L * L * sum);
}

double linf_norm(const PhysicalField& f) {
  double m = 0.0;
  if (f.components() == 1) {
    for (double v : f.component(0)) m = std::max(m, std::abs(v));
    return m;
  }
  const auto u = f.component(0);
  const auto v = f.component(1);
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::hypot(u[i], v[i]));
  return m;
}

double max_coefficient(const SpectralField& f) {
  double m = 0.0;
  for (const auto& v : f.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_tail_coefficient(const SpectralField& f, const Grid& grid) {
  require_grid(f.n(), grid);
  double m = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    for (int r = 0; r < grid.n(); ++r) {
      for (int col = 0; col < grid.spectral_cols(); ++col) {
        if (!grid.retained(grid.kx(r), grid.ky(col))) m = std::max(m, std::abs(f.at(c, r, col)));
      }
    }
  }
  return m;
}

}  // namespace calmks
