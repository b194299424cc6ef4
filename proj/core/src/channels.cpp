#include "ngm/channels.hpp"

#include "ngm/errors.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <sstream>

namespace ngm {

namespace {

using Index = Eigen::Index;

CMatrix number_power(double base, std::size_t dim) {
  CMatrix m = CMatrix::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
  for (Index n = 0; n < m.rows(); ++n) m(n, n) = std::pow(base, 0.5 * static_cast<double>(n));
  return m;
}

CMatrix loss_then_amplify(const CMatrix& rho, double eta, double gain, std::size_t l_max,
                          std::size_t k_max) {
  const std::size_t dim = static_cast<std::size_t>(rho.rows());
  CMatrix out = rho;
  if (eta < 1.0) out = apply_kraus(pure_loss_kraus(eta, l_max, dim), out);
  if (gain > 1.0) out = apply_kraus(amplifier_kraus(gain, k_max, dim), out);
  return out;
}

// Bilinear sample of f at fractional indices (u, v); outside the grid is 0.
double bilinear(const Field& f, double u, double v) {
  const double nu = static_cast<double>(f.rows() - 1);
  const double nv = static_cast<double>(f.cols() - 1);
  if (u < 0.0 || v < 0.0 || u > nu || v > nv) return 0.0;
  const auto i0 = static_cast<Index>(std::min(std::floor(u), nu - 1.0));
  const auto j0 = static_cast<Index>(std::min(std::floor(v), nv - 1.0));
  const double tu = u - static_cast<double>(i0);
  const double tv = v - static_cast<double>(j0);
  return (1 - tu) * (1 - tv) * f(i0, j0) + tu * (1 - tv) * f(i0 + 1, j0) +
         (1 - tu) * tv * f(i0, j0 + 1) + tu * tv * f(i0 + 1, j0 + 1);
}

}  // namespace

ThermalLossSpec::ThermalLossSpec(double tau_, double n_bar_) : tau(tau_), n_bar(n_bar_) {
  require(std::isfinite(tau) && tau > 0.0 && tau <= 1.0, ErrorKind::Domain,
          "transmissivity tau must lie in (0, 1]");
  require(std::isfinite(n_bar) && n_bar >= 0.0, ErrorKind::Domain,
          "thermal occupation n_bar must be non-negative");
}

std::vector<CMatrix> pure_loss_kraus(double eta, std::size_t l_max, std::size_t dim) {
  require(eta > 0.0 && eta <= 1.0, ErrorKind::Domain, "loss parameter eta must lie in (0, 1]");
  require(l_max <= dim, ErrorKind::Domain, "l_max must not exceed the Fock dimension");
  const CMatrix a = annihilation_matrix(std::max<std::size_t>(dim, 2))
                        .topLeftCorner(static_cast<Index>(dim), static_cast<Index>(dim));
  const CMatrix damp = number_power(eta, dim);
  std::vector<CMatrix> ops;
  CMatrix al = CMatrix::Identity(static_cast<Index>(dim), static_cast<Index>(dim));
  for (std::size_t l = 0; l <= l_max; ++l) {
    if (l > 0) al = (al * a).eval();
    if (eta == 1.0 && l > 0) break;
    const double c =
        l == 0 ? 1.0 : std::exp(0.5 * (static_cast<double>(l) * std::log1p(-eta) - log_factorial(static_cast<int>(l))));
    ops.push_back(c * damp * al);
  }
  return ops;
}

std::vector<CMatrix> amplifier_kraus(double gain, std::size_t k_max, std::size_t dim) {
  require(std::isfinite(gain) && gain >= 1.0, ErrorKind::Domain, "amplifier gain must be >= 1");
  require(k_max <= dim, ErrorKind::Domain, "k_max must not exceed the Fock dimension");
  const CMatrix ad = creation_matrix(std::max<std::size_t>(dim, 2))
                         .topLeftCorner(static_cast<Index>(dim), static_cast<Index>(dim));
  const CMatrix atten = number_power(1.0 / gain, dim);
  std::vector<CMatrix> ops;
  CMatrix adk = CMatrix::Identity(static_cast<Index>(dim), static_cast<Index>(dim));
  for (std::size_t k = 0; k <= k_max; ++k) {
    if (k > 0) {
      if (gain == 1.0) break;
      adk = (ad * adk).eval();
    }
    const double dk = static_cast<double>(k);
    const double logc = -log_factorial(static_cast<int>(k)) - std::log(gain) +
                        (k > 0 ? dk * std::log((gain - 1.0) / gain) : 0.0);
    ops.push_back(std::exp(0.5 * logc) * adk * atten);
  }
  return ops;
}

CMatrix apply_kraus(const std::vector<CMatrix>& ops, const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const CMatrix& k : ops) out.noalias() += k * rho * k.adjoint();
  return out;
}

FockDensityMatrix thermal_loss_fock(const FockDensityMatrix& rho, const ThermalLossSpec& spec,
                                    std::size_t l_max, std::size_t k_max, KrausReport* report) {
  const ThermalLossSpec checked(spec.tau, spec.n_bar);
  const std::size_t dim = rho.dim();
  const std::size_t cap = dim - 1;
  const std::size_t dflt = std::min(cap, kDefaultKrausLimit);
  KrausReport rep;
  rep.l_max = l_max == 0 ? dflt : std::min(l_max, dim);
  rep.k_max = k_max == 0 ? dflt : std::min(k_max, dim);

  CMatrix out = loss_then_amplify(rho.entries(), checked.eta(), checked.gain(), rep.l_max, rep.k_max);
  rep.retained_trace = out.trace().real();
  if (rep.retained_trace < 1.0 - 1e-6) {
    rep.escalated = true;
    rep.l_max = std::min(dim, 2 * std::max<std::size_t>(rep.l_max, 1));
    rep.k_max = std::min(dim, 2 * std::max<std::size_t>(rep.k_max, 1));
    std::ostringstream os;
    os << "Kraus limits escalated to l_max=" << rep.l_max << ", k_max=" << rep.k_max
       << " after retained trace " << rep.retained_trace;
    rep.warnings.push_back(os.str());
    out = loss_then_amplify(rho.entries(), checked.eta(), checked.gain(), rep.l_max, rep.k_max);
    rep.retained_trace = out.trace().real();
  }
  if (rep.retained_trace < 1.0 - 1e-6) {
    std::ostringstream os;
    os << "thermal loss lost " << 1.0 - rep.retained_trace << " of the trace at Fock dimension "
       << dim << "; pad the input state";
    fail(ErrorKind::Truncation, os.str());
  }
  if (report) *report = rep;
  return FockDensityMatrix::renormalized(out);
}

WignerField rescale(const WignerField& field, double s) {
  require(std::isfinite(s) && s > 0.0, ErrorKind::Domain, "rescaling factor must be positive");
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity() * s;
  return rescale(field, m);
}

WignerField rescale(const WignerField& field, const Eigen::Matrix2d& s) {
  require(s(0, 1) == 0.0 && s(1, 0) == 0.0, ErrorKind::Domain,
          "only diagonal rescaling matrices are supported");
  const double sq = s(0, 0), sp = s(1, 1);
  require(std::isfinite(sq) && std::isfinite(sp) && sq > 0 && sp > 0, ErrorKind::Domain,
          "rescaling factors must be positive");
  const PhaseSpaceGrid& g = field.grid;
  const double edge_in = boundary_magnitude(field.values);
  if (edge_in > kRescaleTailTolerance) {
    std::ostringstream os;
    os << "input field has not decayed at the grid edge (" << edge_in << ")";
    fail(ErrorKind::Grid, os.str());
  }
  if (sq == 1.0 && sp == 1.0) return WignerField{g, field.values, std::nullopt, std::nullopt};

  Field out = g.zeros();
  const double inv_det = 1.0 / (sq * sp);
  for (std::size_t i = 0; i < g.n_q(); ++i)
    for (std::size_t j = 0; j < g.n_p(); ++j) {
      const double u = (g.q(i) / sq - g.q_min()) / g.dq();
      const double v = (g.p(j) / sp - g.p_min()) / g.dp();
      out(static_cast<Index>(i), static_cast<Index>(j)) = inv_det * bilinear(field.values, u, v);
    }
  const double edge_out = boundary_magnitude(out);
  if (edge_out > kRescaleTailTolerance) {
    std::ostringstream os;
    os << "rescaled support overflows the grid (edge magnitude " << edge_out << ")";
    fail(ErrorKind::Grid, os.str());
  }
  return WignerField{g, std::move(out), std::nullopt, std::nullopt};
}

WignerField gaussian_convolve(const WignerField& field, const Eigen::Matrix2d& cov) {
  if (cov.isZero(0.0)) return WignerField{field.grid, field.values, std::nullopt, std::nullopt};
  return WignerField{field.grid, gaussian_blur(field.values, field.grid, cov), std::nullopt,
                     std::nullopt};
}

WignerField thermal_loss_phase_space(const WignerField& field, const ThermalLossSpec& spec) {
  const ThermalLossSpec checked(spec.tau, spec.n_bar);
  require_normalized(field);
  if (checked.tau == 1.0) return WignerField{field.grid, field.values, std::nullopt, std::nullopt};
  WignerField scaled = rescale(field, std::sqrt(checked.tau));
  const double noise = (1.0 - checked.tau) * (checked.n_bar + 0.5);
  WignerField out = gaussian_convolve(scaled, noise * Eigen::Matrix2d::Identity());
  const double edge = boundary_magnitude(out.values);
  if (edge > kRescaleTailTolerance) {
    std::ostringstream os;
    os << "thermal-loss output overflows the grid (edge magnitude " << edge << ")";
    fail(ErrorKind::Grid, os.str());
  }
  const double mass = integrate(out.values, out.grid);
  out.values /= mass;
  return out;
}

}  // namespace ngm
