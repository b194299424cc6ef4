#include "ngm/measure.hpp"

#include "ngm/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace ngm {

namespace {

using Index = Eigen::Index;

double entropy_integrand(double w) {
  const double a = std::abs(w);
  return a < kEntropyFloor ? 0.0 : -w * std::log(a);
}

}  // namespace

double wigner_entropy_real(const WignerField& field) {
  require_normalized(field);
  return integrate(field.values.unaryExpr(&entropy_integrand), field.grid);
}

double gaussian_associate_entropy(const GaussianMoments& m) {
  validate_moments(m, false);
  return std::log(2.0 * std::numbers::pi * std::numbers::e * std::sqrt(m.V.determinant()));
}

MeasureValue ngm(const WignerField& field) {
  MeasureValue out;
  out.grid = field.grid;
  out.moments = moments(field);
  out.re_entropy = wigner_entropy_real(field);
  out.gaussian_entropy = gaussian_associate_entropy(out.moments);
  out.neg_volume = negative_volume(field);
  out.re_mu = out.gaussian_entropy - out.re_entropy;
  out.im_mu = im_mu_on_branch(out.neg_volume, -1);
  if (out.re_mu < -1e-6) {
    std::ostringstream os;
    os << "negative Re mu = " << out.re_mu;
    out.warnings.push_back(os.str());
  }
  const double edge = boundary_magnitude(field.values);
  if (edge > 1e-10) {
    std::ostringstream os;
    os << "Wigner field has not decayed at the grid edge (" << edge << ")";
    out.warnings.push_back(os.str());
  }
  return out;
}

MeasureValue ngm(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid) {
  return ngm(wigner_from_fock(rho, grid));
}

MeasureValue ngm(const FockDensityMatrix& rho, const GridOptions& options) {
  return ngm(rho, auto_grid(rho, options));
}

double im_mu_on_branch(double neg_volume, int k) {
  return -(2.0 * k + 1.0) * std::numbers::pi * neg_volume;
}

WreValue wre_vs_gaussian(double re_entropy, double neg_volume, const GaussianMoments& m,
                         const GaussianMoments& tilde) {
  validate_moments(tilde, false);
  const Eigen::Matrix2d inv = tilde.V.inverse();
  const Eigen::Vector2d delta = m.d - tilde.d;
  WreValue out;
  out.re = -re_entropy + std::log(2.0 * std::numbers::pi) + 0.5 * std::log(tilde.V.determinant()) +
           0.5 * (m.V * inv).trace() + 0.5 * delta.dot(inv * delta);
  out.im = im_mu_on_branch(neg_volume, -1);
  return out;
}

WreValue wre_vs_gaussian(const WignerField& field, const GaussianMoments& tilde) {
  return wre_vs_gaussian(wigner_entropy_real(field), negative_volume(field), moments(field), tilde);
}

MinimizerReport minimizer_scan(const WignerField& field, std::size_t count, std::uint64_t seed) {
  const GaussianMoments m = moments(field);
  const double h = wigner_entropy_real(field);
  const double nv = negative_volume(field);
  MinimizerReport rep;
  rep.associate_value = wre_vs_gaussian(h, nv, m, m).re;

  const Eigen::Matrix2d upper = m.V.llt().matrixU();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  rep.min_perturbed = std::numeric_limits<double>::infinity();
  rep.min_excess = std::numeric_limits<double>::infinity();
  while (rep.samples < count) {
    Eigen::Matrix2d noise;
    noise(0, 0) = uni(rng);
    noise(1, 1) = uni(rng);
    noise(0, 1) = noise(1, 0) = uni(rng);
    const Eigen::Matrix2d l = upper * (Eigen::Matrix2d::Identity() + 0.3 * noise);
    GaussianMoments t;
    t.V = l.transpose() * l;
    t.V(1, 0) = t.V(0, 1);
    t.d = m.d + 0.5 * Eigen::Vector2d(uni(rng), uni(rng));
    if (!(t.V.determinant() > 1e-12 * m.V.determinant()) || t.V.llt().info() != Eigen::Success) {
      ++rep.rejected;
      continue;
    }
    const double v = wre_vs_gaussian(h, nv, m, t).re;
    rep.min_perturbed = std::min(rep.min_perturbed, v);
    rep.min_excess = std::min(rep.min_excess, v - rep.associate_value);
    ++rep.samples;
  }
  rep.associate_is_minimum = rep.samples == 0 || rep.min_excess >= -1e-10;
  return rep;
}

ProductReport product_measure_check(const FockDensityMatrix& a, const FockDensityMatrix& b,
                                    std::size_t points, std::size_t memory_cap) {
  const double dense_bytes = std::pow(static_cast<double>(points), 4) * sizeof(double);
  if (dense_bytes > static_cast<double>(memory_cap)) {
    std::ostringstream os;
    os << "a " << points << "^4 product grid needs " << dense_bytes
       << " bytes, above the memory cap of " << memory_cap;
    fail(ErrorKind::Capacity, os.str());
  }
  const GridOptions opts{.points = points};
  const WignerField wa = wigner_from_fock(a, auto_grid(a, opts));
  const WignerField wb = wigner_from_fock(b, auto_grid(b, opts));
  const MeasureValue ma = ngm(wa);
  const MeasureValue mb = ngm(wb);

  // Flatten each factor to (weight, q, p, W) samples.
  struct Sample {
    double weight, q, p, w;
  };
  const auto flatten = [](const WignerField& f) {
    const auto wq = quadrature_weights(f.grid.n_q(), f.grid.dq());
    const auto wp = quadrature_weights(f.grid.n_p(), f.grid.dp());
    std::vector<Sample> s;
    s.reserve(f.grid.n_q() * f.grid.n_p());
    for (std::size_t i = 0; i < f.grid.n_q(); ++i)
      for (std::size_t j = 0; j < f.grid.n_p(); ++j)
        s.push_back({wq[i] * wp[j], f.grid.q(i), f.grid.p(j),
                     f.values(static_cast<Index>(i), static_cast<Index>(j))});
    return s;
  };
  const std::vector<Sample> sa = flatten(wa);
  const std::vector<Sample> sb = flatten(wb);

  // Streaming 4D quadrature: mass, entropy, |W|, first and second moments.
  double mass = 0, ent = 0, absmass = 0;
  Eigen::Vector4d first = Eigen::Vector4d::Zero();
  Eigen::Matrix4d second = Eigen::Matrix4d::Zero();
  for (const Sample& x : sa) {
    double mass_b = 0, ent_b = 0, abs_b = 0;
    Eigen::Vector4d f_b = Eigen::Vector4d::Zero();
    Eigen::Matrix4d s_b = Eigen::Matrix4d::Zero();
    for (const Sample& y : sb) {
      const double w = x.w * y.w;
      const double cw = x.weight * y.weight * w;
      const Eigen::Vector4d r(x.q, x.p, y.q, y.p);
      mass_b += cw;
      ent_b += x.weight * y.weight * entropy_integrand(w);
      abs_b += x.weight * y.weight * std::abs(w);
      f_b += cw * r;
      s_b.noalias() += cw * r * r.transpose();
    }
    mass += mass_b;
    ent += ent_b;
    absmass += abs_b;
    first += f_b;
    second += s_b;
  }
  require(std::abs(mass - 1.0) < 1e-4, ErrorKind::Normalization,
          "two-mode product field is not normalized on the coarse grid");
  const Eigen::Vector4d d = first / mass;
  const Eigen::Matrix4d v = second / mass - d * d.transpose();
  const double det = v.determinant();
  require(det > 0, ErrorKind::LinearAlgebra, "two-mode covariance is not positive definite");
  const double h_g = 2.0 * std::log(2.0 * std::numbers::pi * std::numbers::e) + 0.5 * std::log(det);

  ProductReport rep;
  rep.points_per_axis = points;
  rep.re_mu_product = h_g - ent;
  rep.re_mu_sum = ma.re_mu + mb.re_mu;
  rep.im_mu_product = std::numbers::pi * 0.5 * (absmass - mass);
  rep.im_mu_a = ma.im_mu;
  rep.im_mu_b = mb.im_mu;
  rep.a_positive = wa.values.minCoeff() >= -1e-9;
  rep.b_positive = wb.values.minCoeff() >= -1e-9;
  return rep;
}

EntropyBoundReport entropy_upper_bound_check(const WignerField& field) {
  const double min_w = field.values.minCoeff();
  if (min_w < -1e-9) {
    std::ostringstream os;
    os << "entropy bound needs a non-negative Wigner function (min W = " << min_w << ")";
    fail(ErrorKind::Precondition, os.str());
  }
  EntropyBoundReport rep = real_entropy_upper_bound_check(field);
  rep.real_form = false;
  return rep;
}

EntropyBoundReport real_entropy_upper_bound_check(const WignerField& field) {
  EntropyBoundReport rep;
  rep.real_form = true;
  rep.entropy = wigner_entropy_real(field);
  rep.bound = gaussian_associate_entropy(moments(field));
  rep.slack = rep.bound - rep.entropy;
  rep.holds = rep.entropy <= rep.bound + 1e-6;
  return rep;
}

}  // namespace ngm
