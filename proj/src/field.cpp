#include "calmks/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace calmks {

PhysicalField::PhysicalField(const Grid& grid, Shape shape)
    : n_(grid.n()), shape_(shape), data_(grid.physical_size() * component_count(shape), 0.0) {}

SpectralField::SpectralField(const Grid& grid, Shape shape)
    : n_(grid.n()), shape_(shape), data_(grid.spectral_size() * component_count(shape)) {}

Complex SpectralField::coefficient(int c, int kx, int ky) const {
  const bool conjugate = ky < 0;
  if (conjugate) {
    kx = -kx;
    ky = -ky;
  }
  if (ky > n_ / 2) return {};
  const int row = ((kx % n_) + n_) % n_;
  const Complex v = at(c, row, ky);
  return conjugate ? std::conj(v) : v;
}

void SpectralField::set_zero() { std::fill(data_.begin(), data_.end(), Complex{}); }

namespace {
void check_compatible(const SpectralField& a, const SpectralField& b) {
  if (a.n() != b.n() || a.shape() != b.shape()) {
    throw std::invalid_argument("spectral fields differ in size or shape");
  }
}
}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  check_compatible(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  check_compatible(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& v : data_) v *= s;
  return *this;
}

SpectralField operator-(SpectralField a, const SpectralField& b) {
  a -= b;
  return a;
}

bool all_finite(const SpectralField& f) {
  return std::all_of(f.data().begin(), f.data().end(), [](const Complex& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

bool all_finite(const PhysicalField& f) {
  return std::all_of(f.data().begin(), f.data().end(), [](double v) { return std::isfinite(v); });
}

}  // namespace calmks
