#pragma once

#include "ngm/fock.hpp"
#include "ngm/wigner.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ngm {

// |W| below this contributes nothing to -W ln|W|.
inline constexpr double kEntropyFloor = 1e-30;

struct MeasureValue {
  double re_mu = 0.0;
  double im_mu = 0.0;
  double re_entropy = 0.0;
  double gaussian_entropy = 0.0;
  double neg_volume = 0.0;
  GaussianMoments moments;
  PhaseSpaceGrid grid{-1, 1, -1, 1, 3, 3, GridPolicy{.min_points = 3}};
  std::vector<std::string> warnings;
};

// Re h[W] = -int W ln|W|.
double wigner_entropy_real(const WignerField& field);

// ln((2 pi e) sqrt(det V)).
double gaussian_associate_entropy(const GaussianMoments& m);

MeasureValue ngm(const WignerField& field);
MeasureValue ngm(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid);
// Grid sized from the state's number-basis moments.
MeasureValue ngm(const FockDensityMatrix& rho, const GridOptions& options = {});

// Imaginary part on branch k of the complex logarithm; the shipped measure is k = -1.
double im_mu_on_branch(double neg_volume, int k);

struct WreValue {
  double re = 0.0;
  double im = 0.0;
};

// Wigner relative entropy D[W || W~] against an arbitrary Gaussian.
WreValue wre_vs_gaussian(const WignerField& field, const GaussianMoments& tilde);
// Same, reusing already-computed entropy and moments of W.
WreValue wre_vs_gaussian(double re_entropy, double neg_volume, const GaussianMoments& m,
                         const GaussianMoments& tilde);

struct MinimizerReport {
  double associate_value = 0.0;
  double min_perturbed = 0.0;
  double min_excess = 0.0;  // min over samples of value - associate_value
  std::size_t samples = 0;
  std::size_t rejected = 0;
  bool associate_is_minimum = false;
};

MinimizerReport minimizer_scan(const WignerField& field, std::size_t count, std::uint64_t seed);

struct ProductReport {
  double re_mu_product = 0.0;
  double re_mu_sum = 0.0;
  double im_mu_product = 0.0;
  double im_mu_a = 0.0;
  double im_mu_b = 0.0;
  bool a_positive = false;
  bool b_positive = false;
  std::size_t points_per_axis = 0;
};

inline constexpr std::size_t kDefaultProductMemoryCap = std::size_t{1} << 30;

// Two-mode product W_A(r1) W_B(r2) integrated over a points^4 lattice. The
// 4D field is streamed; memory_cap bounds the equivalent dense field size.
ProductReport product_measure_check(const FockDensityMatrix& a, const FockDensityMatrix& b,
                                    std::size_t points = 97,
                                    std::size_t memory_cap = kDefaultProductMemoryCap);

struct EntropyBoundReport {
  double entropy = 0.0;
  double bound = 0.0;
  double slack = 0.0;  // bound - entropy
  bool holds = false;
  bool real_form = false;
};

// S_W <= ln(2 pi e sqrt(det V)) for Wigner-positive fields; a negative field
// is a precondition error.
EntropyBoundReport entropy_upper_bound_check(const WignerField& field);
// Same inequality for Re S_W, valid for any field.
EntropyBoundReport real_entropy_upper_bound_check(const WignerField& field);

}  // namespace ngm
