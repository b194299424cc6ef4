#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace ngm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kPsdTolerance = -1e-9;

// Pure state in the truncated number basis, |psi> = sum_n amplitudes[n] |n>.
struct FockVector {
  CVector amplitudes;

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }
  double norm() const { return amplitudes.norm(); }
};

// Validated density operator in the truncated number basis. Construction
// checks hermiticity, unit trace and positivity; use renormalized() first if
// the matrix came out of a truncating operation.
class FockDensityMatrix {
 public:
  explicit FockDensityMatrix(CMatrix entries);

  static FockDensityMatrix pure(const FockVector& v);
  // Hermitian part rescaled to unit trace, then validated.
  static FockDensityMatrix renormalized(const CMatrix& m);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const CMatrix& entries() const { return entries_; }
  Complex operator()(std::size_t n, std::size_t m) const {
    return entries_(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  }

  // Zero-padded copy living in a larger number basis.
  FockDensityMatrix embedded(std::size_t new_dim) const;
  double mean_photon_number() const;
  double purity() const;
  // Highest Fock level carrying diagonal weight above tol.
  std::size_t support(double tol = 1e-14) const;

 private:
  CMatrix entries_;
};

CMatrix annihilation_matrix(std::size_t dim);
CMatrix creation_matrix(std::size_t dim);

// exp(alpha a^dag - alpha* a) and exp((xi* a^2 - xi a^dag^2)/2) as dense
// matrices in the given truncated basis. Positive real xi squeezes q.
CMatrix displacement_matrix(Complex alpha, std::size_t dim);
CMatrix squeeze_matrix(Complex xi, std::size_t dim);

FockVector coherent(Complex alpha, int n_c);

enum class Parity { Even, Odd };

// (|a> +- |-a>) normalized; the odd alpha -> 0 limit is |1>.
FockVector cat(double alpha, Parity parity, int n_c);

FockVector displaced_squeezed(Complex alpha, double xi, int n_c);

// Exact number-basis amplitudes <n|D(alpha)S(r)|0> for real r, n < count.
CVector displaced_squeezed_amplitudes(Complex alpha, double r, std::size_t count);

struct GkpInfo {
  double fock_leakage = 0.0;     // weight of the ideal sum beyond n_c
  double dropped_envelope = 0.0; // first omitted peak, projected below n_c

  // Empty unless the renormalized state lost more than kLeakageWarning.
  std::string leakage_warning() const;
};

inline constexpr double kLeakageWarning = 1e-6;

FockVector gkp_logical(int logical, double delta, int t_max, int n_c, GkpInfo* info = nullptr);

// Delta = 10^(-dB/20); larger dB means narrower peaks.
double gkp_delta_from_db(double db);

Eigen::Matrix2cd qubit_rotation(double theta, double phi);

CMatrix haar_unitary(std::size_t d, std::uint64_t seed);

// Haar-conjugated random diagonal state, embedded at the given Fock levels.
// dim = 0 picks max(levels) + 1.
FockDensityMatrix random_qudit(std::size_t d, const std::vector<int>& levels, std::uint64_t seed,
                               std::size_t dim = 0);

// U(theta, phi) diag(r, 1 - r) U^dag on the two logical levels.
FockDensityMatrix apply_qubit_state(double r, double theta, double phi,
                                    const std::vector<int>& levels, std::size_t dim = 0);

// D(alpha) S(xi) rho S^dag D^dag, computed in an enlarged basis and truncated
// back to out_dim (0 = keep the input dimension). Fails if more than
// 1e-6 of the trace leaves the output basis.
FockDensityMatrix apply_gaussian_unitary(const FockDensityMatrix& rho, Complex alpha, double xi,
                                         std::size_t out_dim = 0);

// Phase-space rotation exp(-i phi n).
FockDensityMatrix rotate(const FockDensityMatrix& rho, double phi);

struct FockMoments {
  Complex a;        // <a>
  Complex a2;       // <a^2>
  double n = 0.0;   // <a^dag a>
};

FockMoments fock_moments(const FockDensityMatrix& rho);

}  // namespace ngm
