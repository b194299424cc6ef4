#include "ngm/fisher.hpp"

#include "ngm/channels.hpp"
#include "ngm/errors.hpp"
#include "ngm/measure.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>

namespace ngm {

namespace {

using Index = Eigen::Index;

FisherMatrix fisher_from_hessian(const Field& w, const WignerHessian& hess,
                                 const PhaseSpaceGrid& grid, double b) {
  const Field clipped = (w.abs() / b).log().max(0.0);
  const Field inside = (w.abs() < b).select(w.abs(), Field::Zero(w.rows(), w.cols()));
  FisherMatrix f;
  const double jqq = -integrate(clipped * hess.qq, grid);
  const double jpp = -integrate(clipped * hess.pp, grid);
  const double jqp = -integrate(clipped * hess.qp, grid);
  f.J << jqq, jqp, jqp, jpp;
  f.excluded_fraction = integrate(inside, grid);
  return f;
}

}  // namespace

FisherReport fisher_matrix(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid, double band) {
  require(band > 0 && band < 1, ErrorKind::Domain, "Fisher band must lie in (0, 1)");
  const Field w = wigner_from_fock(rho, grid).values;
  const WignerHessian hess = wigner_hessian(rho, grid);

  FisherReport rep;
  rep.band = band;
  const double b = band / std::numbers::pi;
  rep.at_band = fisher_from_hessian(w, hess, grid, b);
  rep.at_half_band = fisher_from_hessian(w, hess, grid, b / 2);
  rep.at_quarter_band = fisher_from_hessian(w, hess, grid, b / 4);

  // Solve J(b_k) = J + A b_k ln(1/b_k) + B b_k for each component.
  Eigen::Matrix3d m;
  const double bs[3] = {band, band / 2, band / 4};
  for (int k = 0; k < 3; ++k) m.row(k) << 1.0, bs[k] * std::log(1.0 / bs[k]), bs[k];
  const Eigen::PartialPivLU<Eigen::Matrix3d> lu(m);
  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j) {
      const Eigen::Vector3d rhs(rep.at_band.J(i, j), rep.at_half_band.J(i, j),
                                rep.at_quarter_band.J(i, j));
      rep.J(i, j) = rep.J(j, i) = lu.solve(rhs)(0);
    }

  const double scale = rep.J.norm();
  rep.relative_change = scale > 0 ? (rep.at_band.J - rep.at_half_band.J).norm() / scale : 0.0;
  if (rep.relative_change > 0.10) {
    std::ostringstream os;
    os << "Fisher band extrapolation unstable: |J(b) - J(b/2)| / |J| = " << rep.relative_change;
    rep.warnings.push_back(os.str());
  }
  return rep;
}

FisherMatrix fisher_direct(const WignerField& f, double band) {
  require(f.grad_q && f.grad_p, ErrorKind::Precondition, "field carries no gradients");
  const double b = band / std::numbers::pi;
  const Field& w = f.values;
  const Field keep = (w.abs() > b).select(Field::Ones(w.rows(), w.cols()), 0.0);
  const Field inv = keep / w.abs().max(b) * w.sign();
  FisherMatrix out;
  const double jqq = integrate(*f.grad_q * *f.grad_q * inv, f.grid);
  const double jpp = integrate(*f.grad_p * *f.grad_p * inv, f.grid);
  const double jqp = integrate(*f.grad_q * *f.grad_p * inv, f.grid);
  out.J << jqq, jqp, jqp, jpp;
  out.excluded_fraction = integrate((1.0 - keep) * w.abs(), f.grid);
  return out;
}

double monotonicity_condition(const Eigen::Matrix2d& V, const Eigen::Matrix2d& J,
                              const Eigen::Matrix2d& G) {
  require(std::abs(V.determinant()) > 1e-300, ErrorKind::LinearAlgebra, "covariance is singular");
  return (G * (V.inverse() - J)).trace();
}

CramerRaoReport cramer_rao_check(const Eigen::Matrix2d& V, const Eigen::Matrix2d& J) {
  require(std::abs(J.determinant()) > 1e-300, ErrorKind::LinearAlgebra, "Fisher matrix is singular");
  Eigen::Matrix2d diff = V - J.inverse();
  diff = 0.5 * (diff + diff.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(diff, Eigen::EigenvaluesOnly);
  CramerRaoReport rep;
  rep.eigenvalues = es.eigenvalues();
  const double scale = V.cwiseAbs().maxCoeff();
  rep.passes = rep.eigenvalues.minCoeff() >= -kCramerRaoTolerance * scale;
  return rep;
}

double richardson(const std::vector<double>& eps, const std::vector<double>& s) {
  require(!eps.empty() && eps.size() == s.size(), ErrorKind::Shape,
          "need one slope per epsilon");
  // Neville's scheme: polynomial through (eps_i, s_i) evaluated at 0.
  std::vector<double> p(s);
  const std::size_t n = eps.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i) {
      const double denom = eps[i] - eps[i + m];
      require(denom != 0.0, ErrorKind::Domain, "epsilons must be distinct");
      p[i] = (-eps[i + m] * p[i] + eps[i] * p[i + 1]) / denom;
    }
  return p[0];
}

namespace {

template <typename Value>
SlopeReport slope_check(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid,
                        const Eigen::Matrix2d& G, const std::vector<double>& epsilons,
                        Value value) {
  require(!epsilons.empty(), ErrorKind::Domain, "need at least one epsilon");
  for (double e : epsilons) require(e > 0, ErrorKind::Domain, "epsilons must be positive");
  const WignerField w = wigner_from_fock(rho, grid);
  SlopeReport rep;
  rep.epsilons = epsilons;
  rep.value_at_zero = value(w);
  for (double e : epsilons) {
    const WignerField blurred = gaussian_convolve(w, e * G);
    rep.values.push_back(value(blurred));
    rep.slopes.push_back((rep.values.back() - rep.value_at_zero) / e);
  }
  rep.extrapolated_slope = richardson(rep.epsilons, rep.slopes);
  return rep;
}

void finish(SlopeReport& rep) {
  rep.abs_error = std::abs(rep.extrapolated_slope - rep.predicted);
  rep.rel_error = rep.predicted != 0.0 ? rep.abs_error / std::abs(rep.predicted) : rep.abs_error;
}

}  // namespace

SlopeReport debruijn_check(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid,
                           const Eigen::Matrix2d& G, const std::vector<double>& epsilons) {
  SlopeReport rep = slope_check(rho, grid, G, epsilons,
                                [](const WignerField& f) { return wigner_entropy_real(f); });
  rep.fisher = fisher_matrix(rho, grid);
  rep.predicted = 0.5 * (G * rep.fisher.J).trace();
  finish(rep);
  return rep;
}

SlopeReport measure_derivative_check(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid,
                                     const Eigen::Matrix2d& G, const std::vector<double>& epsilons) {
  SlopeReport rep = slope_check(rho, grid, G, epsilons,
                                [](const WignerField& f) { return ngm(f).re_mu; });
  rep.fisher = fisher_matrix(rho, grid);
  const GaussianMoments m = moments(wigner_from_fock(rho, grid));
  rep.predicted = 0.5 * monotonicity_condition(m.V, rep.fisher.J, G);
  finish(rep);
  return rep;
}

}  // namespace ngm
