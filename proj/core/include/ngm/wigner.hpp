#pragma once

#include "ngm/fock.hpp"
#include "ngm/numerics.hpp"

#include <Eigen/Core>

#include <optional>

namespace ngm {

// Conventions: hbar = 1, r = (q, p), vacuum covariance I/2 and a coherent
// state |alpha> centred at sqrt(2) (Re alpha, Im alpha).

struct WignerField {
  PhaseSpaceGrid grid;
  Field values;
  std::optional<Field> grad_q;
  std::optional<Field> grad_p;
};

struct GaussianMoments {
  Eigen::Vector2d d = Eigen::Vector2d::Zero();
  Eigen::Matrix2d V = 0.5 * Eigen::Matrix2d::Identity();

  static GaussianMoments vacuum() { return {}; }
};

inline constexpr double kImaginaryResidueTolerance = 1e-9;

// Wigner function of a Hermitian number-basis operator (not necessarily a
// state). An anti-Hermitian part whose Wigner transform exceeds
// kImaginaryResidueTolerance anywhere on the grid is a consistency error.
Field synthesize_wigner(const CMatrix& op, const PhaseSpaceGrid& grid);

WignerField wigner_from_fock(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid);

// Values plus analytic gradients. A subsample of points is cross-checked
// against central differences; disagreement throws a consistency error.
WignerField wigner_gradient(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid);

struct WignerPoint {
  double w = 0.0;
  double dq = 0.0;
  double dp = 0.0;
};

// Single-point evaluation with analytic gradient.
WignerPoint wigner_point(const CMatrix& op, double q, double p);

struct WignerHessian {
  Field qq, qp, pp;
};

// Second derivatives through the exact operator identities
// d_q W[rho] = W[i[p, rho]] and d_p W[rho] = W[-i[q, rho]].
WignerHessian wigner_hessian(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid);

// Quadrature-operator matrices in a basis of size dim (truncated ladder ops).
CMatrix position_matrix(std::size_t dim);
CMatrix momentum_matrix(std::size_t dim);

GaussianMoments moments(const WignerField& field);

// First and second moments from number-basis traces, no grid needed.
GaussianMoments moments(const FockDensityMatrix& rho);

WignerField gaussian_wigner(const GaussianMoments& m, const PhaseSpaceGrid& grid);

double negative_volume(const WignerField& field);

// Throws a normalization error when |int W - 1| > 1e-4.
void require_normalized(const WignerField& field);

struct GridOptions {
  std::size_t points = 513;
  double extent_sigmas = 5.0;
  double min_half_width = 6.0;
  // auto_grid(rho) widens the extent until |W| on the boundary is below this.
  double edge_tolerance = 1e-12;
};

// Square grid centred on d with half-width max(min_half_width,
// extent_sigmas * largest standard deviation).
PhaseSpaceGrid auto_grid(const GaussianMoments& m, const GridOptions& options = {});

// Moment-based grid, widened in 15% steps while the state's Wigner function
// on the grid boundary exceeds options.edge_tolerance. Fock truncation tails
// can reach well past 5 sigma for strongly non-Gaussian states.
PhaseSpaceGrid auto_grid(const FockDensityMatrix& rho, const GridOptions& options = {});

// Positive-definiteness and the hbar = 1 uncertainty bound det V >= 1/4.
void validate_moments(const GaussianMoments& m, bool physical);

}  // namespace ngm
