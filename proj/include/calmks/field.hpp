#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <span>
#include <vector>

#include "calmks/grid.hpp"

namespace calmks {

using Complex = std::complex<double>;

/// Allocator handing out 64-byte aligned blocks, so every field buffer meets
/// the SIMD alignment the transform plans are built for.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlignment{64};

  AlignedAllocator() = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t count) {
    return static_cast<T*>(::operator new(count * sizeof(T), kAlignment));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, kAlignment); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

template <class T>
using AlignedVector = std::vector<T, AlignedAllocator<T>>;

enum class Shape { Scalar, Vector };

constexpr int component_count(Shape s) { return s == Shape::Scalar ? 1 : 2; }

/// Real samples at the n x n collocation points. Row-major with x as the slow
/// index; components are stored one after another.
class PhysicalField {
 public:
  PhysicalField() = default;
  PhysicalField(const Grid& grid, Shape shape);

  int n() const { return n_; }
  Shape shape() const { return shape_; }
  int components() const { return component_count(shape_); }
  std::size_t points() const { return static_cast<std::size_t>(n_) * n_; }

  std::span<double> component(int c) { return {data_.data() + c * points(), points()}; }
  std::span<const double> component(int c) const {
    return {data_.data() + c * points(), points()};
  }

  double& at(int c, int i, int j) { return data_[c * points() + static_cast<std::size_t>(i) * n_ + j]; }
  double at(int c, int i, int j) const {
    return data_[c * points() + static_cast<std::size_t>(i) * n_ + j];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  friend bool operator==(const PhysicalField&, const PhysicalField&) = default;

 private:
  int n_ = 0;
  Shape shape_ = Shape::Scalar;
  AlignedVector<double> data_;
};

/// Fourier-series coefficients u_k of a real field, in the grid's half layout.
/// Coefficients are normalized so that u(x) = sum_k u_k exp(i k.x).
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(const Grid& grid, Shape shape);

  int n() const { return n_; }
  Shape shape() const { return shape_; }
  int components() const { return component_count(shape_); }
  int cols() const { return n_ / 2 + 1; }
  std::size_t modes() const { return static_cast<std::size_t>(n_) * cols(); }

  std::span<Complex> component(int c) { return {data_.data() + c * modes(), modes()}; }
  std::span<const Complex> component(int c) const {
    return {data_.data() + c * modes(), modes()};
  }

  Complex& at(int c, int row, int col) {
    return data_[c * modes() + static_cast<std::size_t>(row) * cols() + col];
  }
  Complex at(int c, int row, int col) const {
    return data_[c * modes() + static_cast<std::size_t>(row) * cols() + col];
  }

  /// Coefficient of wavenumber (kx, ky) for any sign of ky, reconstructing
  /// negative ky from conjugate symmetry.
  Complex coefficient(int c, int kx, int ky) const;

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  void set_zero();

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

  friend bool operator==(const SpectralField&, const SpectralField&) = default;

 private:
  int n_ = 0;
  Shape shape_ = Shape::Scalar;
  AlignedVector<Complex> data_;
};

SpectralField operator-(SpectralField a, const SpectralField& b);

/// True when every stored value is finite.
bool all_finite(const SpectralField& f);
bool all_finite(const PhysicalField& f);

}  // namespace calmks
