#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <vector>

namespace ngm {

// Sampled 2D real field. Index (i, j) is the sample at (q_i, p_j).
using Field = Eigen::ArrayXXd;

struct GridPolicy {
  std::size_t min_points = 65;
};

// Uniform rectangular (q, p) lattice, endpoints included. Point counts are
// rounded up to the next odd integer so Simpson quadrature always applies.
class PhaseSpaceGrid {
 public:
  PhaseSpaceGrid(double q_min, double q_max, double p_min, double p_max, std::size_t n_q,
                 std::size_t n_p, GridPolicy policy = {});

  // Square-point-count grid centred on (q_c, p_c). The centre is snapped to a
  // multiple of the step so the lattice stays aligned with the origin, which
  // lets kernels centred at zero be convolved without resampling.
  static PhaseSpaceGrid centered(double q_c, double p_c, double half_q, double half_p,
                                 std::size_t points, GridPolicy policy = {});

  // Origin-symmetric grid with the given step; used for convolution kernels.
  static PhaseSpaceGrid kernel(double step_q, double step_p, double half_width,
                               GridPolicy policy = {.min_points = 3});

  double q_min() const { return q_min_; }
  double q_max() const { return q_max_; }
  double p_min() const { return p_min_; }
  double p_max() const { return p_max_; }
  std::size_t n_q() const { return n_q_; }
  std::size_t n_p() const { return n_p_; }
  double dq() const { return dq_; }
  double dp() const { return dp_; }
  double q(std::size_t i) const { return q_min_ + static_cast<double>(i) * dq_; }
  double p(std::size_t j) const { return p_min_ + static_cast<double>(j) * dp_; }
  double cell_area() const { return dq_ * dp_; }

  bool same_as(const PhaseSpaceGrid& other, double tol = 1e-12) const;
  Field zeros() const { return Field::Zero(static_cast<Eigen::Index>(n_q_), static_cast<Eigen::Index>(n_p_)); }

 private:
  double q_min_, q_max_, p_min_, p_max_;
  std::size_t n_q_, n_p_;
  double dq_, dp_;
};

inline constexpr int kDefaultFockCutoff = 64;

// L_n^(k)(x) by the three-term recurrence in n.
double laguerre_assoc(int n, int k, double x, int cutoff = kDefaultFockCutoff);

// d/dx L_n^(k)(x) = -L_{n-1}^(k+1)(x); zero for n = 0.
double laguerre_assoc_derivative(int n, int k, double x, int cutoff = kDefaultFockCutoff);

// ln(n!) from a table for n <= 256, lgamma beyond.
double log_factorial(int n);

// 1D composite Simpson weights for odd n, trapezoid otherwise.
std::vector<double> quadrature_weights(std::size_t n, double step);

double integrate(const Field& values, const PhaseSpaceGrid& grid);

// Largest absolute value on the outermost rows and columns.
double boundary_magnitude(const Field& values);

inline constexpr double kConvolutionEdgeTolerance = 1e-12;

// Linear (zero-padded) convolution of two fields sampled on the same grid,
// cropped back to that grid. The grid must be aligned with the origin
// (q_min/dq and p_min/dp integral).
Field convolve(const Field& a, const Field& b, const PhaseSpaceGrid& grid);

// Convolution of a field with a kernel sampled on its own origin-aligned grid
// that shares the field grid's steps. Result lives on field_grid.
Field convolve(const Field& field, const PhaseSpaceGrid& field_grid, const Field& kernel,
               const PhaseSpaceGrid& kernel_grid);

// Convolution with a continuous Gaussian of covariance cov, applied as its
// exact transfer function exp(-k^T cov k / 2) on the zero-padded FFT of the
// field. Unlike a sampled kernel this stays accurate when the Gaussian is
// narrower than the grid step, and a singular covariance acts as a delta
// along its null direction. Same edge-decay precondition as convolve().
Field gaussian_blur(const Field& field, const PhaseSpaceGrid& grid, const Eigen::Matrix2d& cov);

// Worker threads used by grid synthesis and sweeps. Defaults to the
// NGM_WORKERS environment variable, else 1.
unsigned worker_count();
void set_worker_count(unsigned n);

// Splits [0, n) into contiguous chunks, one per worker. body(begin, end).
// Calls made from inside a worker run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace ngm
