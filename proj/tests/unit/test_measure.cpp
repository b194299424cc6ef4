#include "helpers.hpp"
#include "oracles.hpp"

#include "ngm/fock.hpp"
#include "ngm/measure.hpp"
#include "ngm/wigner.hpp"

#include <cmath>
#include <numbers>

using namespace ngm;
using testing_helpers::expect_error_kind;
using testing_helpers::fock_state;
using testing_helpers::pure;
using testing_helpers::square;

namespace {

constexpr double kPi = std::numbers::pi;

FockDensityMatrix thermal_mixture() {
  CMatrix m = CMatrix::Zero(21, 21);
  for (int n = 0; n <= 20; ++n) m(n, n) = std::pow(0.5, n);
  return FockDensityMatrix::renormalized(m);
}

WignerField field_of(const FockDensityMatrix& rho) { return wigner_from_fock(rho, auto_grid(rho)); }

}  // namespace

TEST(Entropy, VacuumClosedForm) {
  EXPECT_NEAR(wigner_entropy_real(field_of(fock_state(0))), 1 + std::log(kPi), 1e-6);
}

TEST(Entropy, GaussianClosedForm) {
  GaussianMoments m;
  m.d << 0.3, -0.2;
  m.V << 0.9, 0.2, 0.2, 0.6;
  const auto f = gaussian_wigner(m, auto_grid(m));
  EXPECT_NEAR(wigner_entropy_real(f), oracle::gaussian_entropy(m.V), 1e-6);
}

TEST(Entropy, AssociateExamples) {
  EXPECT_NEAR(gaussian_associate_entropy(GaussianMoments::vacuum()), 1 + std::log(kPi), 1e-14);
  GaussianMoments unit;
  unit.V = Eigen::Matrix2d::Identity();
  EXPECT_NEAR(gaussian_associate_entropy(unit), 1 + std::log(2 * kPi), 1e-14);
  for (double s : {0.3, 1.0, 2.0}) {
    GaussianMoments sq;
    sq.V = Eigen::Vector2d(std::exp(2 * s), std::exp(-2 * s)).asDiagonal();
    sq.V /= 2;
    EXPECT_NEAR(gaussian_associate_entropy(sq), 1 + std::log(kPi), 1e-12) << "s=" << s;
  }
}

TEST(Entropy, FockOneStableUnderRefinement) {
  const auto rho = fock_state(1);
  const double coarse = wigner_entropy_real(wigner_from_fock(rho, auto_grid(rho, {.points = 513})));
  const double fine = wigner_entropy_real(wigner_from_fock(rho, auto_grid(rho, {.points = 1025})));
  EXPECT_LT(std::abs(coarse - fine), 1e-4);
}

TEST(Measure, PureGaussiansVanish) {
  const FockDensityMatrix states[] = {fock_state(0), pure(coherent(Complex(1.2, -0.4), 40)),
                                      pure(displaced_squeezed(0, 0.5, 60)),
                                      pure(displaced_squeezed(Complex(0.5, 0.5), 0.3, 60))};
  for (const auto& rho : states) {
    const auto v = ngm::ngm(rho);
    EXPECT_NEAR(v.re_mu, 0.0, 1e-4);
    EXPECT_NEAR(v.im_mu, 0.0, 1e-4);
  }
}

TEST(Measure, FockOne) {
  const auto v = ngm::ngm(fock_state(1));
  EXPECT_NEAR(v.im_mu, kPi * oracle::fock1_negative_volume(), 1e-4);
  EXPECT_NEAR(v.im_mu, 0.66935, 1e-4);
  EXPECT_GT(v.re_mu, 0.0);
  EXPECT_LT((v.moments.V - 1.5 * Eigen::Matrix2d::Identity()).norm(), 1e-8);
  EXPECT_NEAR(v.gaussian_entropy, std::log(2 * kPi * std::exp(1.0) * 1.5), 1e-8);
}

TEST(Measure, CatEndpoints) {
  const auto even = ngm::ngm(pure(cat(0.0, Parity::Even, 40)));
  EXPECT_NEAR(even.re_mu, 0.0, 1e-4);
  EXPECT_NEAR(even.im_mu, 0.0, 1e-4);

  const auto odd = ngm::ngm(pure(cat(0.0, Parity::Odd, 40)));
  const auto one = ngm::ngm(fock_state(1));
  EXPECT_NEAR(odd.re_mu, one.re_mu, 1e-6);
  EXPECT_NEAR(odd.im_mu, one.im_mu, 1e-6);
}

TEST(Measure, RotationInvariant) {
  const auto rho = pure(cat(1.2, Parity::Odd, 40));
  const auto a = ngm::ngm(rho);
  // A quarter turn maps the lattice onto itself; other angles resample it.
  const auto b = ngm::ngm(rotate(rho, kPi / 2));
  EXPECT_NEAR(a.re_mu, b.re_mu, 1e-9);
  EXPECT_NEAR(a.im_mu, b.im_mu, 1e-9);
  const auto c = ngm::ngm(rotate(rho, 0.7));
  EXPECT_NEAR(a.re_mu, c.re_mu, 1e-3);
  EXPECT_NEAR(a.im_mu, c.im_mu, 1e-3);
}

TEST(Measure, ImaginaryPartFollowsBranch) {
  EXPECT_NEAR(im_mu_on_branch(0.2, -1), kPi * 0.2, 1e-15);
  EXPECT_NEAR(im_mu_on_branch(0.2, 0), -kPi * 0.2, 1e-15);
  EXPECT_NEAR(im_mu_on_branch(0.0, -1), 0.0, 1e-15);
}

TEST(Wre, AssociateMatchesMeasure) {
  const auto f = field_of(pure(cat(1.0, Parity::Even, 40)));
  const auto v = ngm::ngm(f);
  const auto w = wre_vs_gaussian(f, v.moments);
  EXPECT_NEAR(w.re, v.re_mu, 1e-10);
  EXPECT_NEAR(w.im, v.im_mu, 1e-10);
}

TEST(Wre, InflatedCovarianceIsWorse) {
  const auto f = field_of(fock_state(1));
  const auto v = ngm::ngm(f);
  GaussianMoments t = v.moments;
  t.V *= 2;
  EXPECT_GT(wre_vs_gaussian(f, t).re, v.re_mu);
}

TEST(Wre, DisplacementOffsetIsExact) {
  const auto f = field_of(fock_state(2));
  const auto v = ngm::ngm(f);
  GaussianMoments t = v.moments;
  t.d += Eigen::Vector2d(0.4, -0.3);
  const Eigen::Vector2d delta = v.moments.d - t.d;
  const double offset = 0.5 * delta.dot(t.V.inverse() * delta);
  EXPECT_NEAR(wre_vs_gaussian(f, t).re - v.re_mu, offset, 1e-10);
}

TEST(Minimizer, AssociateIsSampleMinimum) {
  for (int n : {0, 1}) {
    const auto rep = minimizer_scan(field_of(fock_state(n)), 100, 42);
    EXPECT_EQ(rep.samples, 100u);
    EXPECT_TRUE(rep.associate_is_minimum) << "n=" << n << " excess " << rep.min_excess;
  }
}

TEST(Product, VacuumAndFockFactor) {
  const auto vv = product_measure_check(fock_state(0), fock_state(0), 65);
  EXPECT_NEAR(vv.re_mu_product, 0.0, 5e-3);
  EXPECT_TRUE(vv.a_positive && vv.b_positive);

  const auto one = ngm::ngm(fock_state(1));
  const auto fv = product_measure_check(fock_state(1), fock_state(0), 65);
  EXPECT_NEAR(fv.im_mu_product, one.im_mu, 5e-3);
  EXPECT_FALSE(fv.a_positive);
}

TEST(Product, CatWithVacuumIsAdditive) {
  const auto c = pure(cat(1.5, Parity::Even, 40));
  // Compared with the factors on the same 97-point lattices. The fringes are
  // under-resolved there, so the fine-grid value differs by a few 1e-2.
  const auto rep = product_measure_check(c, fock_state(0), 97);
  EXPECT_NEAR(rep.re_mu_product, rep.re_mu_sum, 1e-2);
  EXPECT_NEAR(rep.im_mu_product, rep.im_mu_a, 5e-3);
}

TEST(Product, MemoryCap) {
  expect_error_kind([] { product_measure_check(fock_state(0), fock_state(0), 97, 1 << 20); },
                    ErrorKind::Capacity);
}

TEST(EntropyBound, VacuumIsTight) {
  const auto rep = entropy_upper_bound_check(field_of(fock_state(0)));
  EXPECT_TRUE(rep.holds);
  EXPECT_NEAR(rep.slack, 0.0, 1e-6);
}

TEST(EntropyBound, ThermalMixture) {
  // Geometric weights make a thermal state, which is Gaussian: the bound is
  // tight up to the n <= 20 truncation.
  const auto rep = entropy_upper_bound_check(field_of(thermal_mixture()));
  EXPECT_TRUE(rep.holds);
  EXPECT_GE(rep.slack, 0.0);
  EXPECT_LT(rep.slack, 1e-5);
}

TEST(EntropyBound, PositiveNonGaussianHasSlack) {
  CMatrix mix = CMatrix::Zero(2, 2);
  mix(0, 0) = mix(1, 1) = 0.5;
  const auto rep = entropy_upper_bound_check(field_of(FockDensityMatrix(mix)));
  EXPECT_TRUE(rep.holds);
  EXPECT_GT(rep.slack, 1e-2);
}

TEST(EntropyBound, NegativeFieldNeedsRealForm) {
  const auto f = field_of(fock_state(1));
  expect_error_kind([&] { entropy_upper_bound_check(f); }, ErrorKind::Precondition);
  const auto rep = real_entropy_upper_bound_check(f);
  EXPECT_TRUE(rep.real_form);
  EXPECT_TRUE(rep.holds);
  EXPECT_LE(rep.entropy, std::log(2 * kPi * std::exp(1.0) * 1.5) + 1e-6);
}
