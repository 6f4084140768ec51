#pragma once
// Test-only reference computations. Nothing here calls the library's
// transform, derivative or norm code.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "calmks/field.hpp"
#include "calmks/grid.hpp"

namespace calmks::oracle {

using Fn = std::function<double(double, double)>;

inline PhysicalField sample(const Grid& g, std::initializer_list<Fn> comps) {
  PhysicalField f(g, comps.size() == 1 ? Shape::Scalar : Shape::Vector);
  int c = 0;
  for (const auto& fn : comps) {
    for (int i = 0; i < g.n(); ++i)
      for (int j = 0; j < g.n(); ++j) f.at(c, i, j) = fn(g.coordinate(i), g.coordinate(j));
    ++c;
  }
  return f;
}

/// (1/n^2) sum_ij f(x_i, y_j) exp(-i (kx x_i + ky y_j)), evaluated directly.
inline std::complex<double> dft_coefficient(const PhysicalField& f, const Grid& g, int c, int kx,
                                            int ky) {
  std::complex<double> acc{};
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      const double phase = -(kx * g.coordinate(i) + ky * g.coordinate(j));
      acc += f.at(c, i, j) * std::complex<double>(std::cos(phase), std::sin(phase));
    }
  }
  return acc / static_cast<double>(g.n() * g.n());
}

/// Fourier coefficients of samples on an m x m grid for |kx|,|ky| <= kmax,
/// via two separable direct sums. Result index [(kx+kmax)*(2kmax+1) + ky+kmax].
inline std::vector<std::complex<double>> dft_block(const std::vector<double>& samples, int m,
                                                   int kmax) {
  const double dx = 2.0 * std::numbers::pi / m;
  const int w = 2 * kmax + 1;
  std::vector<std::complex<double>> rows(static_cast<std::size_t>(m) * w);
  for (int i = 0; i < m; ++i) {
    for (int ky = -kmax; ky <= kmax; ++ky) {
      std::complex<double> acc{};
      for (int j = 0; j < m; ++j) {
        const double ph = -ky * (-std::numbers::pi + j * dx);
        acc += samples[static_cast<std::size_t>(i) * m + j] * std::complex<double>(std::cos(ph), std::sin(ph));
      }
      rows[static_cast<std::size_t>(i) * w + (ky + kmax)] = acc;
    }
  }
  std::vector<std::complex<double>> out(static_cast<std::size_t>(w) * w);
  for (int kx = -kmax; kx <= kmax; ++kx) {
    for (int ky = 0; ky < w; ++ky) {
      std::complex<double> acc{};
      for (int i = 0; i < m; ++i) {
        const double ph = -kx * (-std::numbers::pi + i * dx);
        acc += rows[static_cast<std::size_t>(i) * w + ky] * std::complex<double>(std::cos(ph), std::sin(ph));
      }
      out[static_cast<std::size_t>(kx + kmax) * w + ky] = acc / static_cast<double>(m) / static_cast<double>(m);
    }
  }
  return out;
}

/// Random real trigonometric polynomial with all modes |kx|,|ky| <= kmax.
struct RandomTrig {
  struct Term {
    int kx, ky;
    double a, b;
  };
  std::vector<Term> terms;

  RandomTrig(std::mt19937_64& rng, int kmax, double amplitude = 1.0) {
    std::uniform_real_distribution<double> U(-amplitude, amplitude);
    for (int kx = -kmax; kx <= kmax; ++kx)
      for (int ky = 0; ky <= kmax; ++ky) terms.push_back({kx, ky, U(rng), U(rng)});
  }
  double operator()(double x, double y) const {
    double s = 0.0;
    for (const auto& t : terms) {
      const double ph = t.kx * x + t.ky * y;
      s += t.a * std::cos(ph) + t.b * std::sin(ph);
    }
    return s;
  }
};

inline double max_abs(std::span<const double> v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace calmks::oracle
