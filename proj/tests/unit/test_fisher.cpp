#include "fisher_fock_values.hpp"
#include "helpers.hpp"

#include "ngm/fisher.hpp"
#include "ngm/fock.hpp"
#include "ngm/measure.hpp"
#include "ngm/wigner.hpp"

#include <Eigen/LU>

#include <cmath>

using namespace ngm;
using testing_helpers::fock_state;
using testing_helpers::pure;

namespace {

const Eigen::Matrix2d kI = Eigen::Matrix2d::Identity();

FisherReport fisher_of(const FockDensityMatrix& rho, std::size_t points = 513) {
  return fisher_matrix(rho, auto_grid(rho, {.points = points}));
}

FockDensityMatrix mixture(const std::vector<double>& weights) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(weights.size()), static_cast<Eigen::Index>(weights.size()));
  for (std::size_t n = 0; n < weights.size(); ++n) m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = weights[n];
  return FockDensityMatrix::renormalized(m);
}

}  // namespace

TEST(Fisher, VacuumIsInverseCovariance) {
  const auto rep = fisher_of(fock_state(0));
  EXPECT_LT((rep.J - 2 * kI).cwiseAbs().maxCoeff(), 1e-4);
  EXPECT_TRUE(rep.warnings.empty());
}

TEST(Fisher, GaussiansAreInverseCovariance) {
  const FockDensityMatrix states[] = {pure(coherent(Complex(0.7, -1.1), 40)), pure(displaced_squeezed(0, 0.4, 60)),
                                      pure(displaced_squeezed(Complex(-0.3, 0.5), 0.25, 60))};
  for (const auto& rho : states) {
    const auto V = moments(rho).V;
    EXPECT_LT((fisher_of(rho).J - V.inverse()).cwiseAbs().maxCoeff(), 1e-3);
  }
}

TEST(Fisher, FockStatesMatchOracle) {
  for (int n = 1; n <= 5; ++n) {
    const auto rep = fisher_of(fock_state(n), 1025);
    const double trace = rep.J.trace();
    EXPECT_NEAR(trace, oracle::kFockTraceJ[n], 5e-3 * oracle::kFockTraceJ[n]) << "n=" << n;
    EXPECT_GE(trace, 2.0 / (n + 0.5)) << "n=" << n;
    EXPECT_LT(rep.relative_change, 5e-2) << "n=" << n;
    EXPECT_NEAR(rep.J(0, 1), 0.0, 1e-6);
  }
}

TEST(Fisher, BandConvergence) {
  const auto rep = fisher_of(pure(cat(1.5, Parity::Odd, 40)));
  EXPECT_LT(rep.relative_change, 5e-2);
  const double b = (rep.at_band.J - rep.J).norm(), q = (rep.at_quarter_band.J - rep.J).norm();
  EXPECT_LT(q, b);
  EXPECT_LT(rep.at_quarter_band.excluded_fraction, rep.at_band.excluded_fraction);
}

TEST(Fisher, RotationCovariance) {
  const auto rho = pure(cat(1.0, Parity::Even, 40));
  const double phi = std::acos(-1.0) / 2;
  const auto J = fisher_of(rho).J;
  const auto Jr = fisher_of(rotate(rho, phi)).J;
  // exp(-i phi n) turns phase space by phi: J' = R J R^T.
  Eigen::Matrix2d R;
  R << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  EXPECT_LT((Jr - R * J * R.transpose()).norm(), 1e-6 * J.norm());
}

TEST(Fisher, DirectFormAgreesWhereWIsPositive) {
  const auto rho = pure(coherent(0.5, 30));
  const auto grid = auto_grid(rho);
  const auto direct = fisher_direct(wigner_gradient(rho, grid), 1e-10);
  EXPECT_LT((direct.J - 2 * kI).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(Monotonicity, Examples) {
  const Eigen::Matrix2d V = moments(pure(displaced_squeezed(0.3, 0.3, 60))).V;
  const auto J = fisher_of(pure(displaced_squeezed(0.3, 0.3, 60))).J;
  Eigen::Matrix2d G;
  G << 2.0, 0.3, 0.3, 0.5;
  EXPECT_NEAR(monotonicity_condition(V, J, G), 0.0, 1e-3);
  EXPECT_NEAR(monotonicity_condition(0.5 * kI, fisher_of(fock_state(0)).J, kI), 0.0, 1e-3);

  const auto one = fisher_of(fock_state(1)).J;
  const double c = monotonicity_condition(1.5 * kI, one, kI);
  EXPECT_NEAR(c, (1.5 * kI).inverse().trace() - one.trace(), 1e-12);
  EXPECT_LT(c, 0.0);
}

TEST(CramerRao, VacuumAndPassiveMixtures) {
  const auto vac = cramer_rao_check(0.5 * kI, fisher_of(fock_state(0)).J);
  EXPECT_LT(vac.eigenvalues.cwiseAbs().maxCoeff(), 1e-6);

  // Thermal weights are Gaussian, so the bound is saturated.
  std::vector<double> thermal;
  for (int n = 0; n <= 20; ++n) thermal.push_back(std::pow(0.5, n));
  const auto rho = mixture(thermal);
  const auto rep = cramer_rao_check(moments(rho).V, fisher_of(rho).J);
  EXPECT_TRUE(rep.passes);
  EXPECT_LT(rep.eigenvalues.cwiseAbs().maxCoeff(), 1e-4);

  // A non-Gaussian Wigner-positive mixture sits strictly inside the bound.
  const auto mix = mixture({0.5, 0.5});
  const auto strict = cramer_rao_check(moments(mix).V, fisher_of(mix).J);
  EXPECT_TRUE(strict.passes);
  EXPECT_GT(strict.eigenvalues.minCoeff(), 1e-2);
}

TEST(CramerRao, FockOneIsReportedOnly) {
  const auto rep = cramer_rao_check(1.5 * kI, fisher_of(fock_state(1)).J);
  EXPECT_TRUE(std::isfinite(rep.eigenvalues(0)) && std::isfinite(rep.eigenvalues(1)));
}

TEST(Richardson, RemovesLinearError) {
  const std::vector<double> eps{1e-3, 5e-4, 2.5e-4};
  std::vector<double> s;
  for (double e : eps) s.push_back(2.0 + 3.0 * e - 40.0 * e * e);
  EXPECT_NEAR(richardson(eps, s), 2.0, 1e-12);
}

TEST(DeBruijn, Vacuum) {
  const auto rho = fock_state(0);
  const auto rep = debruijn_check(rho, auto_grid(rho), kI);
  EXPECT_NEAR(rep.predicted, 2.0, 1e-4);
  EXPECT_NEAR(rep.extrapolated_slope, 2.0, 2e-2);
}

TEST(DeBruijn, FockOne) {
  const auto rho = fock_state(1);
  const auto rep = debruijn_check(rho, auto_grid(rho), kI);
  EXPECT_LT(rep.rel_error, 2e-2) << rep.extrapolated_slope << " vs " << rep.predicted;
}

TEST(DeBruijn, ZeroDirection) {
  const auto rho = fock_state(1);
  const auto rep = debruijn_check(rho, auto_grid(rho), Eigen::Matrix2d::Zero());
  EXPECT_NEAR(rep.extrapolated_slope, 0.0, 1e-6);
  EXPECT_NEAR(rep.predicted, 0.0, 1e-12);
}

TEST(MeasureDerivative, GaussianIsFlat) {
  const auto rho = pure(displaced_squeezed(Complex(0.2, 0.1), 0.3, 60));
  const auto rep = measure_derivative_check(rho, auto_grid(rho), kI);
  EXPECT_NEAR(rep.extrapolated_slope, 0.0, 1e-3);
  EXPECT_NEAR(rep.predicted, 0.0, 1e-3);
}

TEST(MeasureDerivative, FockOneAndCat) {
  const FockDensityMatrix states[] = {fock_state(1), pure(cat(1.5, Parity::Even, 40))};
  for (const auto& rho : states) {
    const auto rep = measure_derivative_check(rho, auto_grid(rho), kI);
    EXPECT_LT(rep.rel_error, 3e-2) << rep.extrapolated_slope << " vs " << rep.predicted;
    EXPECT_LT(rep.extrapolated_slope, 0.0);
    EXPECT_EQ(rep.extrapolated_slope < 0, monotonicity_condition(moments(rho).V, rep.fisher.J, kI) < 0);
  }
}
