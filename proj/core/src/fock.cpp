#include "ngm/fock.hpp"

#include "ngm/errors.hpp"
#include "ngm/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace ngm {

namespace {

using Index = Eigen::Index;

void check_cutoff(int n_c) {
  require(n_c >= 1, ErrorKind::Domain, "Fock cutoff must be at least 1");
}

FockVector normalized(CVector v) {
  const double nrm = v.norm();
  require(nrm > 0 && std::isfinite(nrm), ErrorKind::Normalization, "state vector has zero norm");
  v /= nrm;
  return FockVector{std::move(v)};
}

CMatrix embed_matrix(const CMatrix& m, std::size_t dim) {
  CMatrix out = CMatrix::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
  const Index n = std::min<Index>(m.rows(), static_cast<Index>(dim));
  out.topLeftCorner(n, n) = m.topLeftCorner(n, n);
  return out;
}

std::size_t max_level(const std::vector<int>& levels) {
  require(!levels.empty(), ErrorKind::Domain, "at least one logical level is required");
  std::set<int> seen;
  for (int l : levels) {
    require(l >= 0, ErrorKind::Domain, "logical Fock levels must be non-negative");
    if (!seen.insert(l).second) {
      fail(ErrorKind::Domain, "logical Fock level " + std::to_string(l) + " appears twice");
    }
  }
  return static_cast<std::size_t>(*std::max_element(levels.begin(), levels.end()));
}

FockDensityMatrix embed_levels(const CMatrix& small, const std::vector<int>& levels,
                               std::size_t dim) {
  const std::size_t top = max_level(levels);
  if (dim == 0) dim = top + 1;
  require(top < dim, ErrorKind::Capacity, "logical level exceeds the Fock cutoff");
  CMatrix rho = CMatrix::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (std::size_t j = 0; j < levels.size(); ++j)
      rho(levels[i], levels[j]) = small(static_cast<Index>(i), static_cast<Index>(j));
  return FockDensityMatrix::renormalized(rho);
}

}  // namespace

FockDensityMatrix::FockDensityMatrix(CMatrix entries) : entries_(std::move(entries)) {
  require(entries_.rows() >= 1 && entries_.rows() == entries_.cols(), ErrorKind::Shape,
          "density matrix must be square and non-empty");
  require(entries_.allFinite(), ErrorKind::Domain, "density matrix has non-finite entries");
  const double herm = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTolerance) {
    std::ostringstream os;
    os << "density matrix is not Hermitian (max |rho - rho^dag| = " << herm << ")";
    fail(ErrorKind::Domain, os.str());
  }
  const Complex tr = entries_.trace();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    std::ostringstream os;
    os << "density matrix trace is " << tr.real() << " (expected 1)";
    fail(ErrorKind::Normalization, os.str());
  }
  const CMatrix h = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < kPsdTolerance) {
    std::ostringstream os;
    os << "density matrix is not positive semidefinite (min eigenvalue " << min_eig << ")";
    fail(ErrorKind::Domain, os.str());
  }
}

FockDensityMatrix FockDensityMatrix::pure(const FockVector& v) {
  require(v.dim() >= 1, ErrorKind::Shape, "empty state vector");
  const double nrm = v.norm();
  require(std::abs(nrm - 1.0) < kTraceTolerance, ErrorKind::Normalization,
          "state vector is not normalized");
  CMatrix rho = v.amplitudes * v.amplitudes.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return FockDensityMatrix(std::move(rho));
}

FockDensityMatrix FockDensityMatrix::renormalized(const CMatrix& m) {
  require(m.rows() >= 1 && m.rows() == m.cols(), ErrorKind::Shape,
          "density matrix must be square and non-empty");
  CMatrix h = 0.5 * (m + m.adjoint());
  const double tr = h.trace().real();
  require(tr > 0 && std::isfinite(tr), ErrorKind::Normalization, "density matrix has no weight");
  h /= tr;
  return FockDensityMatrix(std::move(h));
}

FockDensityMatrix FockDensityMatrix::embedded(std::size_t new_dim) const {
  require(new_dim >= dim(), ErrorKind::Shape, "embedding must not shrink the Fock basis");
  return FockDensityMatrix(embed_matrix(entries_, new_dim));
}

double FockDensityMatrix::mean_photon_number() const {
  double n = 0.0;
  for (Index i = 0; i < entries_.rows(); ++i) n += static_cast<double>(i) * entries_(i, i).real();
  return n;
}

double FockDensityMatrix::purity() const { return (entries_ * entries_).trace().real(); }

std::size_t FockDensityMatrix::support(double tol) const {
  std::size_t top = 0;
  for (Index i = 0; i < entries_.rows(); ++i)
    if (entries_(i, i).real() > tol) top = static_cast<std::size_t>(i);
  return top;
}

CMatrix annihilation_matrix(std::size_t dim) {
  require(dim >= 2, ErrorKind::Domain, "ladder operators need dim >= 2");
  CMatrix a = CMatrix::Zero(static_cast<Index>(dim), static_cast<Index>(dim));
  for (Index n = 1; n < a.rows(); ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

CMatrix creation_matrix(std::size_t dim) { return annihilation_matrix(dim).adjoint(); }

CMatrix displacement_matrix(Complex alpha, std::size_t dim) {
  const CMatrix a = annihilation_matrix(dim);
  const CMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
  return gen.exp();
}

CMatrix squeeze_matrix(Complex xi, std::size_t dim) {
  const CMatrix a = annihilation_matrix(dim);
  const CMatrix a2 = a * a;
  const CMatrix gen = 0.5 * (std::conj(xi) * a2 - xi * a2.adjoint());
  return gen.exp();
}

FockVector coherent(Complex alpha, int n_c) {
  check_cutoff(n_c);
  const double r2 = std::norm(alpha);
  // Poisson tail beyond n_c, summed in log space until it stops mattering.
  double tail = 0.0;
  if (r2 > 0) {
    const double lr2 = std::log(r2);
    for (int n = n_c + 1;; ++n) {
      const double term = std::exp(-r2 + n * lr2 - log_factorial(n));
      tail += term;
      if (n > r2 && term < 1e-20 * std::max(tail, 1e-300)) break;
      if (n > n_c + 100000) break;
    }
  }
  if (tail >= 1e-8) {
    std::ostringstream os;
    os << "cutoff " << n_c << " too small for coherent amplitude |alpha| = " << std::sqrt(r2)
       << " (leakage " << tail << ")";
    fail(ErrorKind::Truncation, os.str());
  }
  CVector v(n_c + 1);
  v(0) = std::exp(-0.5 * r2);
  for (int n = 1; n <= n_c; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  return normalized(std::move(v));
}

FockVector cat(double alpha, Parity parity, int n_c) {
  check_cutoff(n_c);
  require(std::isfinite(alpha), ErrorKind::Domain, "cat amplitude must be finite");
  if (alpha == 0.0) {
    CVector v = CVector::Zero(n_c + 1);
    v(parity == Parity::Even ? 0 : 1) = 1.0;
    return FockVector{std::move(v)};
  }
  // Reuse the coherent leakage check, then keep only the matching parity.
  const FockVector c = coherent(alpha, n_c);
  CVector v = c.amplitudes;
  const int keep = parity == Parity::Even ? 0 : 1;
  for (int n = 0; n <= n_c; ++n)
    if (n % 2 != keep) v(n) = 0.0;
  return normalized(std::move(v));
}

FockVector displaced_squeezed(Complex alpha, double xi, int n_c) {
  check_cutoff(n_c);
  require(std::isfinite(xi) && std::isfinite(alpha.real()) && std::isfinite(alpha.imag()),
          ErrorKind::Domain, "displacement and squeezing must be finite");
  const auto work = static_cast<std::size_t>(n_c + 1 + std::max(40, n_c));
  CVector vac = CVector::Zero(static_cast<Index>(work));
  vac(0) = 1.0;
  const CVector full = displacement_matrix(alpha, work) * (squeeze_matrix(xi, work) * vac);
  CVector v = full.head(n_c + 1);
  const double kept = v.squaredNorm();
  if (kept < 1.0 - 1e-6) {
    std::ostringstream os;
    os << "cutoff " << n_c << " keeps only " << kept << " of the displaced squeezed state";
    fail(ErrorKind::Truncation, os.str());
  }
  return normalized(std::move(v));
}

CVector displaced_squeezed_amplitudes(Complex alpha, double r, std::size_t count) {
  require(count >= 1, ErrorKind::Domain, "need at least one amplitude");
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  const double th = std::tanh(r);
  const Complex ac = std::conj(alpha);
  CVector c(static_cast<Index>(count));
  c(0) = std::exp(-0.5 * std::norm(alpha) - 0.5 * ac * ac * th) / std::sqrt(ch);
  const Complex gamma = alpha * ch + ac * sh;
  if (count > 1) c(1) = gamma * c(0) / ch;
  for (Index n = 1; n + 1 < c.size(); ++n) {
    const double dn = static_cast<double>(n);
    c(n + 1) = (gamma * c(n) - sh * std::sqrt(dn) * c(n - 1)) / (ch * std::sqrt(dn + 1.0));
  }
  return c;
}

double gkp_delta_from_db(double db) { return std::pow(10.0, -db / 20.0); }

std::string GkpInfo::leakage_warning() const {
  if (fock_leakage <= kLeakageWarning) return {};
  std::ostringstream os;
  os << "GKP state renormalized after losing weight " << fock_leakage << " beyond the Fock cutoff";
  return os.str();
}

FockVector gkp_logical(int logical, double delta, int t_max, int n_c, GkpInfo* info) {
  check_cutoff(n_c);
  require(logical == 0 || logical == 1, ErrorKind::Domain, "GKP logical must be 0 or 1");
  require(delta > 0 && std::isfinite(delta), ErrorKind::Domain, "GKP Delta must be positive");
  require(t_max >= 0, ErrorKind::Domain, "GKP lattice cutoff must be non-negative");

  const double xi = -std::log(delta);
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  const auto weight = [&](double x) { return std::exp(-0.5 * std::numbers::pi * delta * delta * x * x); };

  // Generate far past n_c so the norm of the untruncated sum is known.
  const double x_far = 2.0 * (t_max + 1) + 1.0;
  const double n_far = x_far * x_far * std::numbers::pi + std::sinh(std::abs(xi)) * std::sinh(std::abs(xi));
  const auto big = static_cast<std::size_t>(
      std::max<double>(n_c + 1, std::ceil(2.0 * n_far + 10.0 * std::sqrt(n_far + 1.0) + 200.0)));

  CVector sum = CVector::Zero(static_cast<Index>(big));
  for (int t = -t_max; t <= t_max; ++t) {
    const double x = 2.0 * t + logical;
    sum += weight(x) * displaced_squeezed_amplitudes(x * sqrt_pi, xi, big);
  }
  const double total = sum.norm();
  require(total > 0 && std::isfinite(total), ErrorKind::Normalization, "GKP sum vanished");

  double dropped = 0.0;
  for (int t : {-(t_max + 1), t_max + 1}) {
    const double x = 2.0 * t + logical;
    const CVector peak = displaced_squeezed_amplitudes(x * sqrt_pi, xi, static_cast<std::size_t>(n_c + 1));
    dropped = std::max(dropped, weight(x) * peak.norm() / total);
  }
  if (dropped >= 1e-10) {
    std::ostringstream os;
    os << "GKP lattice cutoff t_max = " << t_max << " drops envelope weight " << dropped
       << " inside the Fock cutoff";
    fail(ErrorKind::Truncation, os.str());
  }

  CVector v = sum.head(n_c + 1);
  const double kept = v.squaredNorm() / (total * total);
  if (info) {
    info->fock_leakage = std::max(0.0, 1.0 - kept);
    info->dropped_envelope = dropped;
  }
  return normalized(std::move(v));
}

Eigen::Matrix2cd qubit_rotation(double theta, double phi) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const Complex e = std::polar(1.0, phi);
  Eigen::Matrix2cd u;
  u << c, e * s, std::conj(e) * s, -c;
  return u;
}

CMatrix haar_unitary(std::size_t d, std::uint64_t seed) {
  require(d >= 1, ErrorKind::Domain, "unitary dimension must be at least 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix z(static_cast<Index>(d), static_cast<Index>(d));
  for (Index j = 0; j < z.cols(); ++j)
    for (Index i = 0; i < z.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < q.cols(); ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= mag > 0 ? rjj / mag : Complex(1.0);
  }
  return q;
}

FockDensityMatrix random_qudit(std::size_t d, const std::vector<int>& levels, std::uint64_t seed,
                               std::size_t dim) {
  require(d >= 1, ErrorKind::Domain, "qudit dimension must be at least 1");
  require(levels.size() == d, ErrorKind::Domain, "need exactly d logical levels");
  max_level(levels);

  // Uniform point on the simplex from sorted uniform spacings.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> cuts(d - 1);
  for (double& c : cuts) c = uni(rng);
  std::sort(cuts.begin(), cuts.end());
  Eigen::VectorXd probs(static_cast<Index>(d));
  double prev = 0.0;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    probs(static_cast<Index>(i)) = cuts[i] - prev;
    prev = cuts[i];
  }
  probs(static_cast<Index>(d - 1)) = 1.0 - prev;

  const CMatrix u = haar_unitary(d, seed);
  const CMatrix small = u * probs.cast<Complex>().asDiagonal() * u.adjoint();
  return embed_levels(small, levels, dim);
}

FockDensityMatrix apply_qubit_state(double r, double theta, double phi,
                                    const std::vector<int>& levels, std::size_t dim) {
  require(r >= 0.0 && r <= 1.0, ErrorKind::Domain, "qubit mixing parameter must lie in [0, 1]");
  require(levels.size() == 2, ErrorKind::Domain, "a qubit needs two logical levels");
  const Eigen::Matrix2cd u = qubit_rotation(theta, phi);
  Eigen::Matrix2cd diag = Eigen::Matrix2cd::Zero();
  diag(0, 0) = r;
  diag(1, 1) = 1.0 - r;
  const CMatrix small = u * diag * u.adjoint();
  return embed_levels(small, levels, dim);
}

FockDensityMatrix apply_gaussian_unitary(const FockDensityMatrix& rho, Complex alpha, double xi,
                                         std::size_t out_dim) {
  if (out_dim == 0) out_dim = rho.dim();
  const double sh = std::sinh(std::abs(xi));
  const double spread = std::norm(alpha) + sh * sh;
  const auto work = std::max(out_dim, rho.dim()) + 40 +
                    static_cast<std::size_t>(std::ceil(6.0 * spread + 6.0 * std::sqrt(spread)));
  const CMatrix u = displacement_matrix(alpha, work) * squeeze_matrix(xi, work);
  const CMatrix big = embed_matrix(rho.entries(), work);
  const CMatrix moved = u * big * u.adjoint();
  const CMatrix kept = moved.topLeftCorner(static_cast<Index>(out_dim), static_cast<Index>(out_dim));
  const double tr = kept.trace().real();
  if (tr < 1.0 - 1e-6) {
    std::ostringstream os;
    os << "output cutoff " << out_dim - 1 << " keeps only " << tr
       << " of the trace after the Gaussian unitary";
    fail(ErrorKind::Truncation, os.str());
  }
  return FockDensityMatrix::renormalized(kept);
}

FockDensityMatrix rotate(const FockDensityMatrix& rho, double phi) {
  CMatrix m = rho.entries();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) *= std::polar(1.0, -phi * static_cast<double>(i - j));
  return FockDensityMatrix::renormalized(m);
}

FockMoments fock_moments(const FockDensityMatrix& rho) {
  const CMatrix& m = rho.entries();
  FockMoments out{};
  for (Index n = 0; n < m.rows(); ++n) {
    const double dn = static_cast<double>(n);
    out.n += dn * m(n, n).real();
    if (n + 1 < m.rows()) out.a += std::sqrt(dn + 1.0) * m(n + 1, n);
    if (n + 2 < m.rows()) out.a2 += std::sqrt((dn + 1.0) * (dn + 2.0)) * m(n + 2, n);
  }
  return out;
}

}  // namespace ngm
