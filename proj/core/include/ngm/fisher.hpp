#pragma once

#include "ngm/fock.hpp"
#include "ngm/wigner.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace ngm {

struct FisherMatrix {
  Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
  double excluded_fraction = 0.0;  // integral of |W| over the excluded band
};

inline constexpr double kDefaultFisherBand = 1e-4;

struct FisherReport {
  double band = kDefaultFisherBand;  // in units of 1/pi
  FisherMatrix at_band;
  FisherMatrix at_half_band;
  FisherMatrix at_quarter_band;
  Eigen::Matrix2d J = Eigen::Matrix2d::Zero();  // band -> 0 extrapolation
  double relative_change = 0.0;  // |J(b) - J(b/2)| / |J| in Frobenius norm
  std::vector<std::string> warnings;
};

// Location Fisher matrix, principal value across Wigner zeros. The
// restricted integral over |W| > b is evaluated in the equivalent form
//   J_ij(b) = -int max(0, ln(|W|/b)) d_i d_j W
// (the boundary term vanishes because ln(|W|/b) = 0 on |W| = b), with exact
// second derivatives. J is extrapolated to b -> 0 from b, b/2, b/4 under the
// error model A b ln(1/b) + B b.
FisherReport fisher_matrix(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid,
                           double band = kDefaultFisherBand);

// The literal integral of d_iW d_jW / W over |W| > b using analytic gradients.
// Only accurate when the grid resolves the band; kept for cross-checks.
FisherMatrix fisher_direct(const WignerField& gradient_field, double band);

// Tr[G (V^-1 - J)]; <= 0 means Re mu decreases along G.
double monotonicity_condition(const Eigen::Matrix2d& V, const Eigen::Matrix2d& J,
                              const Eigen::Matrix2d& G);

struct CramerRaoReport {
  Eigen::Vector2d eigenvalues = Eigen::Vector2d::Zero();  // of V - J^-1, ascending
  bool passes = false;
};

// Eigenvalues may dip below zero by this fraction of |V|: Gaussian states sit
// on the bound and J carries quadrature error.
inline constexpr double kCramerRaoTolerance = 1e-4;

CramerRaoReport cramer_rao_check(const Eigen::Matrix2d& V, const Eigen::Matrix2d& J);

inline const std::vector<double> kDefaultEpsilons{1e-3, 5e-4, 2.5e-4};

struct SlopeReport {
  std::vector<double> epsilons;
  std::vector<double> values;  // entropy (de Bruijn) or Re mu at each epsilon
  double value_at_zero = 0.0;
  std::vector<double> slopes;  // (value(eps) - value(0)) / eps
  double extrapolated_slope = 0.0;
  double predicted = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  FisherReport fisher;
};

// d/de Re h[W * N(0, e G)] at e -> 0 against (1/2) Tr[G J].
SlopeReport debruijn_check(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid,
                           const Eigen::Matrix2d& G,
                           const std::vector<double>& epsilons = kDefaultEpsilons);

// d/de Re mu[W * N(0, e G)] at e -> 0 against (1/2) Tr[G (V^-1 - J)].
SlopeReport measure_derivative_check(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid,
                                     const Eigen::Matrix2d& G,
                                     const std::vector<double>& epsilons = kDefaultEpsilons);

// Richardson table for slopes with an error series in powers of epsilon.
double richardson(const std::vector<double>& epsilons, const std::vector<double>& slopes);

}  // namespace ngm
