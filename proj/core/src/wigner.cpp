#include "ngm/wigner.hpp"

#include "ngm/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ngm {

namespace {

using Index = Eigen::Index;

// Upper-diagonal coefficients of a Hermitian operator, pre-scaled so that
// W(r) = sum_k Re(e^{ik theta} sum_n coef[k][n] g_n^(k)(x)), x = 2|r|^2, with
// g_n^(k) = sqrt(n!/(n+k)!) x^{k/2} e^{-x/2} L_n^(k)(x).
struct Coefficients {
  std::size_t dim = 0;
  std::vector<std::vector<Complex>> by_k;
};

// Three-term recurrence g_{n+1} = (a_n - b_n x) g_n - c_n g_{n-1} for fixed k,
// tabulated for k = 0..dim so gradient evaluation can reach order k + 1.
struct Recurrence {
  std::vector<std::vector<double>> a, b, c;

  explicit Recurrence(std::size_t dim) : a(dim + 1), b(dim + 1), c(dim + 1) {
    for (std::size_t k = 0; k <= dim; ++k) {
      const double dk = static_cast<double>(k);
      const std::size_t count = dim + 1 - k;
      a[k].resize(count);
      b[k].resize(count);
      c[k].resize(count);
      for (std::size_t n = 0; n < count; ++n) {
        const double dn = static_cast<double>(n);
        const double inv = 1.0 / std::sqrt((dn + 1.0) * (dn + 1.0 + dk));
        a[k][n] = (2.0 * dn + 1.0 + dk) * inv;
        b[k][n] = inv;
        c[k][n] = std::sqrt(dn * (dn + dk)) * inv;
      }
    }
  }
};

// Trailing levels are dropped while the summed magnitude of the discarded
// entries stays below this; each |n><m| contributes at most 1/pi pointwise.
constexpr double kTrimBudget = 1e-15;

std::size_t effective_dim(const CMatrix& h) {
  auto dim = static_cast<std::size_t>(h.rows());
  double dropped = 0.0;
  while (dim > 1) {
    const auto last = static_cast<Index>(dim - 1);
    const double edge = 2.0 * h.row(last).head(last).cwiseAbs().sum() + std::abs(h(last, last));
    if (dropped + edge > kTrimBudget) break;
    dropped += edge;
    --dim;
  }
  return dim;
}

Coefficients prepare(const CMatrix& h) {
  Coefficients c;
  c.dim = effective_dim(h);
  c.by_k.resize(c.dim);
  for (std::size_t k = 0; k < c.dim; ++k) {
    const double w = (k == 0 ? 1.0 : 2.0) / std::numbers::pi;
    auto& row = c.by_k[k];
    row.resize(c.dim - k);
    for (std::size_t n = 0; n + k < c.dim; ++n) {
      const double sign = n % 2 == 0 ? 1.0 : -1.0;
      row[n] = w * sign * h(static_cast<Index>(n), static_cast<Index>(n + k));
    }
  }
  return c;
}

double log_g0(std::size_t k, double x, double lx) {
  return 0.5 * static_cast<double>(k) * lx - 0.5 * x - 0.5 * log_factorial(static_cast<int>(k));
}

// Fills seq[0..count) with the normalized Laguerre-Gauss functions for fixed
// k, starting from seq[0] = start.
void recurse(const Recurrence& r, double* seq, std::size_t count, std::size_t k, double x,
             double start) {
  if (count == 0) return;
  const double* a = r.a[k].data();
  const double* b = r.b[k].data();
  const double* c = r.c[k].data();
  seq[0] = start;
  if (count == 1) return;
  seq[1] = (a[0] - b[0] * x) * start;
  for (std::size_t n = 1; n + 1 < count; ++n) seq[n + 1] = (a[n] - b[n] * x) * seq[n] - c[n] * seq[n - 1];
}

double value_at(const Coefficients& c, const Recurrence& rec, double q, double p,
                std::vector<double>& scratch) {
  const double x = 2.0 * (q * q + p * p);
  const double lx = x > 0 ? std::log(x) : 0.0;
  const Complex z = x > 0 ? Complex(q, p) / std::hypot(q, p) : Complex(1.0);
  scratch.resize(c.dim);
  Complex zk(1.0);
  double w = 0.0;
  for (std::size_t k = 0; k < c.dim; ++k) {
    const std::size_t count = c.dim - k;
    const double g0 = k == 0 ? std::exp(-0.5 * x) : (x > 0 ? std::exp(log_g0(k, x, lx)) : 0.0);
    if (g0 != 0.0) {
      recurse(rec, scratch.data(), count, k, x, g0);
      Complex s(0.0);
      const auto& row = c.by_k[k];
      for (std::size_t n = 0; n < count; ++n) s += row[n] * scratch[n];
      w += (s * zk).real();
    }
    zk *= z;
  }
  return w;
}

// Value and gradient. g holds g_n^(k), a holds g_n^(k)/sqrt(x); both are
// stored as dim x dim triangles indexed [k * dim + n].
WignerPoint point_at(const Coefficients& c, const Recurrence& rec, double q, double p,
                     std::vector<double>& g, std::vector<double>& a) {
  const std::size_t d = c.dim;
  const double x = 2.0 * (q * q + p * p);
  const double lx = x > 0 ? std::log(x) : 0.0;
  const Complex z = x > 0 ? Complex(q, p) / std::hypot(q, p) : Complex(1.0);
  g.assign(d * d, 0.0);
  a.assign(d * (d + 1), 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t count = d - k;
    const double g0 = k == 0 ? std::exp(-0.5 * x) : (x > 0 ? std::exp(log_g0(k, x, lx)) : 0.0);
    recurse(rec, &g[k * d], count, k, x, g0);
  }
  for (std::size_t k = 1; k <= d; ++k) {
    const std::size_t count = d + 1 - k;
    double a0 = 0.0;
    if (x > 0) {
      a0 = std::exp(0.5 * (static_cast<double>(k) - 1.0) * lx - 0.5 * x -
                    0.5 * log_factorial(static_cast<int>(k)));
    } else if (k == 1) {
      a0 = 1.0;
    }
    recurse(rec, &a[k * d], count, k, x, a0);
  }
  WignerPoint out;
  const double sqrt2 = std::numbers::sqrt2;
  Complex zk(1.0);
  Complex zkm1(0.0);  // e^{i(k-1)theta}
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t count = d - k;
    const auto& row = c.by_k[k];
    const double dk = static_cast<double>(k);
    Complex sg(0.0), sa(0.0), sb(0.0);
    for (std::size_t n = 0; n < count; ++n) {
      const Complex cn = row[n];
      sg += cn * g[k * d + n];
      if (k > 0) sa += cn * a[k * d + n];
      if (n > 0) sb += cn * std::sqrt(static_cast<double>(n)) * a[(k + 1) * d + n - 1];
    }
    out.w += (sg * zk).real();
    const Complex common = -4.0 * sb * zk - 2.0 * sg * zk;
    const Complex lead = k > 0 ? dk * sqrt2 * sa * zkm1 : Complex(0.0);
    out.dq += (lead + q * common).real();
    out.dp += (Complex(0.0, 1.0) * lead + p * common).real();
    zkm1 = zk;
    zk *= z;
  }
  return out;
}

void check_shape(const WignerField& f) {
  if (static_cast<std::size_t>(f.values.rows()) != f.grid.n_q() ||
      static_cast<std::size_t>(f.values.cols()) != f.grid.n_p()) {
    fail(ErrorKind::Shape, "Wigner field does not match its grid");
  }
}

Field synthesize_hermitian(const CMatrix& h, const PhaseSpaceGrid& grid) {
  const Coefficients c = prepare(h);
  const Recurrence rec(c.dim);
  Field out = grid.zeros();
  parallel_for(grid.n_q(), [&](std::size_t b, std::size_t e) {
    std::vector<double> scratch;
    for (std::size_t i = b; i < e; ++i)
      for (std::size_t j = 0; j < grid.n_p(); ++j)
        out(static_cast<Index>(i), static_cast<Index>(j)) = value_at(c, rec, grid.q(i), grid.p(j), scratch);
  });
  return out;
}

void check_residue(const CMatrix& op, const PhaseSpaceGrid& grid) {
  const CMatrix anti = Complex(0.0, -0.5) * (op - op.adjoint());
  // Every |n><m| has a Wigner function bounded by 1/pi.
  if (anti.cwiseAbs().sum() / std::numbers::pi <= kImaginaryResidueTolerance) return;
  const double residue = synthesize_hermitian(anti, grid).abs().maxCoeff();
  if (residue > kImaginaryResidueTolerance) {
    std::ostringstream os;
    os << "Wigner synthesis left an imaginary residue of " << residue
       << "; the input operator is not Hermitian";
    fail(ErrorKind::Consistency, os.str());
  }
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

}  // namespace

Field synthesize_wigner(const CMatrix& op, const PhaseSpaceGrid& grid) {
  require(op.rows() >= 1 && op.rows() == op.cols(), ErrorKind::Shape, "operator must be square");
  check_residue(op, grid);
  return synthesize_hermitian(0.5 * (op + op.adjoint()), grid);
}

WignerField wigner_from_fock(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid) {
  return WignerField{grid, synthesize_wigner(rho.entries(), grid), std::nullopt, std::nullopt};
}

WignerPoint wigner_point(const CMatrix& op, double q, double p) {
  const Coefficients c = prepare(0.5 * (op + op.adjoint()));
  const Recurrence rec(c.dim);
  std::vector<double> g, a;
  return point_at(c, rec, q, p, g, a);
}

WignerField wigner_gradient(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid) {
  const Coefficients c = prepare(rho.entries());
  const Recurrence rec(c.dim);
  Field w = grid.zeros(), gq = grid.zeros(), gp = grid.zeros();
  parallel_for(grid.n_q(), [&](std::size_t b, std::size_t e) {
    std::vector<double> g, a;
    for (std::size_t i = b; i < e; ++i)
      for (std::size_t j = 0; j < grid.n_p(); ++j) {
        const WignerPoint pt = point_at(c, rec, grid.q(i), grid.p(j), g, a);
        const auto ii = static_cast<Index>(i);
        const auto jj = static_cast<Index>(j);
        w(ii, jj) = pt.w;
        gq(ii, jj) = pt.dq;
        gp(ii, jj) = pt.dp;
      }
  });

  // Central-difference cross-check on a sparse subsample of the grid.
  const double gmax = std::max(gq.abs().maxCoeff(), gp.abs().maxCoeff());
  const double h = 1e-5;
  const std::size_t stride_q = std::max<std::size_t>(1, grid.n_q() / 17);
  const std::size_t stride_p = std::max<std::size_t>(1, grid.n_p() / 17);
  std::vector<double> scratch;
  double worst = 0.0;
  for (std::size_t i = stride_q / 2; i < grid.n_q(); i += stride_q)
    for (std::size_t j = stride_p / 2; j < grid.n_p(); j += stride_p) {
      const auto ii = static_cast<Index>(i);
      const auto jj = static_cast<Index>(j);
      if (std::abs(w(ii, jj)) <= 1e-6) continue;
      const double q = grid.q(i), p = grid.p(j);
      const double fq = (value_at(c, rec, q + h, p, scratch) - value_at(c, rec, q - h, p, scratch)) / (2 * h);
      const double fp = (value_at(c, rec, q, p + h, scratch) - value_at(c, rec, q, p - h, scratch)) / (2 * h);
      worst = std::max({worst, std::abs(fq - gq(ii, jj)), std::abs(fp - gp(ii, jj))});
    }
  if (gmax > 0 && worst > 1e-5 * gmax) {
    std::ostringstream os;
    os << "analytic Wigner gradient disagrees with finite differences (max deviation " << worst
       << ", gradient scale " << gmax << ")";
    fail(ErrorKind::Consistency, os.str());
  }
  return WignerField{grid, std::move(w), std::move(gq), std::move(gp)};
}

CMatrix position_matrix(std::size_t dim) {
  const CMatrix a = annihilation_matrix(dim);
  return (a + a.adjoint()) / std::numbers::sqrt2;
}

CMatrix momentum_matrix(std::size_t dim) {
  const CMatrix a = annihilation_matrix(dim);
  return (a - a.adjoint()) / Complex(0.0, std::numbers::sqrt2);
}

WignerHessian wigner_hessian(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid) {
  // Two extra levels make every commutator below exact in the truncated basis.
  const std::size_t dim = rho.dim() + 2;
  const CMatrix r = rho.embedded(dim).entries();
  const CMatrix q = position_matrix(dim);
  const CMatrix p = momentum_matrix(dim);
  const CMatrix cq = commutator(q, r);
  const CMatrix cp = commutator(p, r);
  WignerHessian out;
  out.qq = synthesize_wigner(-commutator(p, cp), grid);
  out.pp = synthesize_wigner(-commutator(q, cq), grid);
  out.qp = synthesize_wigner(commutator(p, cq), grid);
  return out;
}

void require_normalized(const WignerField& field) {
  check_shape(field);
  const double mass = integrate(field.values, field.grid);
  if (std::abs(mass - 1.0) > 1e-4) {
    std::ostringstream os;
    os << "Wigner field integrates to " << mass << " (expected 1)";
    fail(ErrorKind::Normalization, os.str());
  }
}

GaussianMoments moments(const WignerField& field) {
  require_normalized(field);
  const PhaseSpaceGrid& g = field.grid;
  const auto wq = quadrature_weights(g.n_q(), g.dq());
  const auto wp = quadrature_weights(g.n_p(), g.dp());
  double m0 = 0, mq = 0, mp = 0;
  for (std::size_t i = 0; i < g.n_q(); ++i)
    for (std::size_t j = 0; j < g.n_p(); ++j) {
      const double w = wq[i] * wp[j] * field.values(static_cast<Index>(i), static_cast<Index>(j));
      m0 += w;
      mq += w * g.q(i);
      mp += w * g.p(j);
    }
  GaussianMoments m;
  m.d = Eigen::Vector2d(mq / m0, mp / m0);
  double vqq = 0, vpp = 0, vqp = 0;
  for (std::size_t i = 0; i < g.n_q(); ++i)
    for (std::size_t j = 0; j < g.n_p(); ++j) {
      const double w = wq[i] * wp[j] * field.values(static_cast<Index>(i), static_cast<Index>(j));
      const double dq = g.q(i) - m.d(0);
      const double dp = g.p(j) - m.d(1);
      vqq += w * dq * dq;
      vpp += w * dp * dp;
      vqp += w * dq * dp;
    }
  m.V << vqq / m0, vqp / m0, vqp / m0, vpp / m0;
  return m;
}

GaussianMoments moments(const FockDensityMatrix& rho) {
  const FockMoments fm = fock_moments(rho);
  GaussianMoments m;
  m.d = std::numbers::sqrt2 * Eigen::Vector2d(fm.a.real(), fm.a.imag());
  const double qq = fm.a2.real() + fm.n + 0.5;
  const double pp = -fm.a2.real() + fm.n + 0.5;
  const double qp = fm.a2.imag();
  m.V << qq - m.d(0) * m.d(0), qp - m.d(0) * m.d(1), qp - m.d(0) * m.d(1), pp - m.d(1) * m.d(1);
  return m;
}

void validate_moments(const GaussianMoments& m, bool physical) {
  require(m.d.allFinite() && m.V.allFinite(), ErrorKind::Domain, "moments must be finite");
  require(std::abs(m.V(0, 1) - m.V(1, 0)) <= 1e-10 * std::max(1.0, m.V.cwiseAbs().maxCoeff()),
          ErrorKind::LinearAlgebra, "covariance matrix is not symmetric");
  Eigen::LLT<Eigen::Matrix2d> llt(m.V);
  if (llt.info() != Eigen::Success || m.V.determinant() <= 0) {
    fail(ErrorKind::LinearAlgebra, "covariance matrix is not positive definite");
  }
  if (physical && m.V.determinant() < 0.25 - 1e-6) {
    std::ostringstream os;
    os << "covariance violates the uncertainty bound (det V = " << m.V.determinant() << ")";
    fail(ErrorKind::Domain, os.str());
  }
}

WignerField gaussian_wigner(const GaussianMoments& m, const PhaseSpaceGrid& grid) {
  validate_moments(m, false);
  const Eigen::Matrix2d inv = m.V.inverse();
  const double pref = 1.0 / (2.0 * std::numbers::pi * std::sqrt(m.V.determinant()));
  Field out = grid.zeros();
  for (std::size_t i = 0; i < grid.n_q(); ++i)
    for (std::size_t j = 0; j < grid.n_p(); ++j) {
      const Eigen::Vector2d r(grid.q(i) - m.d(0), grid.p(j) - m.d(1));
      out(static_cast<Index>(i), static_cast<Index>(j)) = pref * std::exp(-0.5 * r.dot(inv * r));
    }
  return WignerField{grid, std::move(out), std::nullopt, std::nullopt};
}

double negative_volume(const WignerField& field) {
  require_normalized(field);
  const Field neg = (field.values.abs() - field.values) * 0.5;
  return std::max(0.0, integrate(neg, field.grid));
}

PhaseSpaceGrid auto_grid(const GaussianMoments& m, const GridOptions& options) {
  validate_moments(m, false);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m.V, Eigen::EigenvaluesOnly);
  const double sigma = std::sqrt(es.eigenvalues().maxCoeff());
  const double half = std::max(options.min_half_width, options.extent_sigmas * sigma);
  return PhaseSpaceGrid::centered(m.d(0), m.d(1), half, half, options.points);
}

PhaseSpaceGrid auto_grid(const FockDensityMatrix& rho, const GridOptions& options) {
  const GaussianMoments m = moments(rho);
  const Coefficients c = prepare(rho.entries());
  const Recurrence rec(c.dim);
  std::vector<double> scratch;
  PhaseSpaceGrid grid = auto_grid(m, options);
  for (int attempt = 0; attempt < 16; ++attempt) {
    double edge = 0.0;
    for (std::size_t i = 0; i < grid.n_q(); ++i) {
      edge = std::max(edge, std::abs(value_at(c, rec, grid.q(i), grid.p_min(), scratch)));
      edge = std::max(edge, std::abs(value_at(c, rec, grid.q(i), grid.p_max(), scratch)));
    }
    for (std::size_t j = 0; j < grid.n_p(); ++j) {
      edge = std::max(edge, std::abs(value_at(c, rec, grid.q_min(), grid.p(j), scratch)));
      edge = std::max(edge, std::abs(value_at(c, rec, grid.q_max(), grid.p(j), scratch)));
    }
    if (edge <= options.edge_tolerance) return grid;
    const double half = 0.5 * (grid.q_max() - grid.q_min()) * 1.15;
    grid = PhaseSpaceGrid::centered(m.d(0), m.d(1), half, half, options.points);
  }
  return grid;
}

}  // namespace ngm
