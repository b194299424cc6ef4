#pragma once

// Independent reference formulas. Nothing here calls into the library.

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

// Direct series L_n^(k)(x) = sum_j (-1)^j C(n+k, n-j) x^j / j! in quad
// precision; the terms cancel heavily for large x.
inline double laguerre_series(int n, int k, double x) {
  __float128 sum = 0;
  for (int j = 0; j <= n; ++j) {
    __float128 term = 1;  // C(n+k, n-j) = prod_{i=1}^{n-j} (k+j+i)/i
    for (int i = 1; i <= n - j; ++i) term = term * (k + j + i) / i;
    for (int i = 1; i <= j; ++i) term = term * static_cast<__float128>(x) / i;
    sum += (j % 2 ? -term : term);
  }
  return static_cast<double>(sum);
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// (-1)^n L_n(2 r^2) e^{-r^2} / pi.
inline double fock_wigner(int n, double q, double p) {
  const double r2 = q * q + p * p;
  return (n % 2 ? -1.0 : 1.0) * laguerre_series(n, 0, 2.0 * r2) * std::exp(-r2) / kPi;
}

inline double gaussian_pdf(const Eigen::Vector2d& d, const Eigen::Matrix2d& V, double q, double p) {
  const Eigen::Vector2d x(q - d(0), p - d(1));
  return std::exp(-0.5 * x.dot(V.inverse() * x)) / (2.0 * kPi * std::sqrt(V.determinant()));
}

// Even (+) or odd (-) cat with real alpha: two vacuum-width lobes at
// q = +-sqrt(2) alpha plus the fringe term 2 e^{-r^2} cos(2 sqrt(2) alpha p) / pi.
inline double cat_wigner(double alpha, bool even, double q, double p) {
  const double s = even ? 1.0 : -1.0;
  const double norm = 1.0 / (2.0 * (1.0 + s * std::exp(-2.0 * alpha * alpha)));
  const double d = std::sqrt(2.0) * alpha;
  const double lobes = (std::exp(-(q - d) * (q - d) - p * p) + std::exp(-(q + d) * (q + d) - p * p)) / kPi;
  const double fringe = 2.0 * std::exp(-q * q - p * p) * std::cos(2.0 * d * p) / kPi;
  return norm * (lobes + s * fringe);
}

// Number distribution of a coherent state.
inline double poisson(double mean, int n) {
  return std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
}

// Negative volume of |1>: int_0^{1/2} (1 - 2u) e^{-u} du = 2 e^{-1/2} - 1.
inline double fock1_negative_volume() { return 2.0 * std::exp(-0.5) - 1.0; }

// Entropy of a 2D Gaussian density.
inline double gaussian_entropy(const Eigen::Matrix2d& V) {
  return std::log(2.0 * kPi * std::exp(1.0) * std::sqrt(V.determinant()));
}

}  // namespace oracle
