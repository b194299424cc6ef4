#pragma once

#include "ngm/fock.hpp"
#include "ngm/wigner.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace ngm {

struct ThermalLossSpec {
  double tau = 1.0;
  double n_bar = 0.0;

  ThermalLossSpec() = default;
  // Validates tau in (0, 1] and n_bar >= 0.
  ThermalLossSpec(double tau, double n_bar);

  double gain() const { return 1.0 + (1.0 - tau) * n_bar; }
  double eta() const { return tau / gain(); }
};

// A_l = sqrt((1 - eta)^l / l!) eta^{n/2} a^l, l = 0..l_max.
std::vector<CMatrix> pure_loss_kraus(double eta, std::size_t l_max, std::size_t dim);

// B_k = sqrt((1/k!) (1/G) ((G - 1)/G)^k) (a^dag)^k G^{-n/2}, k = 0..k_max.
std::vector<CMatrix> amplifier_kraus(double gain, std::size_t k_max, std::size_t dim);

CMatrix apply_kraus(const std::vector<CMatrix>& ops, const CMatrix& rho);

struct KrausReport {
  std::size_t l_max = 0;
  std::size_t k_max = 0;
  double retained_trace = 1.0;
  bool escalated = false;
  std::vector<std::string> warnings;
};

inline constexpr std::size_t kDefaultKrausLimit = 30;

// Amplifier after pure loss, in the input's number basis. Limits of 0 pick
// min(dim - 1, 30); a retained trace below 1 - 1e-6 doubles them once, then
// raises a truncation error.
FockDensityMatrix thermal_loss_fock(const FockDensityMatrix& rho, const ThermalLossSpec& spec,
                                    std::size_t l_max = 0, std::size_t k_max = 0,
                                    KrausReport* report = nullptr);

// L_s[W](r) = W(r/s) / s^2 resampled bilinearly on the input grid.
WignerField rescale(const WignerField& field, double s);
// Diagonal S = diag(s_q, s_p): W(S^-1 r) / |det S|. Off-diagonal entries are rejected.
WignerField rescale(const WignerField& field, const Eigen::Matrix2d& s);

// Tail level the rescaled field may leave at the grid boundary.
inline constexpr double kRescaleTailTolerance = 1e-10;

// W * N(0, cov) through the exact Gaussian transfer function.
WignerField gaussian_convolve(const WignerField& field, const Eigen::Matrix2d& cov);

// L_sqrt(tau)[W] convolved with the thermal noise of covariance (1 - tau)(n_bar + 1/2) I.
WignerField thermal_loss_phase_space(const WignerField& field, const ThermalLossSpec& spec);

}  // namespace ngm
