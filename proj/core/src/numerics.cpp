#include "ngm/numerics.hpp"

#include "ngm/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace ngm {

namespace {

std::size_t round_up_odd(std::size_t n) { return n % 2 == 0 ? n + 1 : n; }

// FFTW's planner is not re-entrant; execution on distinct arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

long aligned_offset(double coordinate_min, double step, const char* axis) {
  const double ratio = -coordinate_min / step;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-6) {
    std::ostringstream os;
    os << "grid " << axis << "-axis is not aligned with the origin (min/step = " << -ratio << ")";
    fail(ErrorKind::Shape, os.str());
  }
  return static_cast<long>(rounded);
}

}  // namespace

PhaseSpaceGrid::PhaseSpaceGrid(double q_min, double q_max, double p_min, double p_max,
                               std::size_t n_q, std::size_t n_p, GridPolicy policy)
    : q_min_(q_min), q_max_(q_max), p_min_(p_min), p_max_(p_max),
      n_q_(round_up_odd(n_q)), n_p_(round_up_odd(n_p)) {
  require(std::isfinite(q_min) && std::isfinite(q_max) && std::isfinite(p_min) &&
              std::isfinite(p_max),
          ErrorKind::Grid, "grid extents must be finite");
  require(q_max > q_min && p_max > p_min, ErrorKind::Grid, "grid extents must be increasing");
  if (n_q_ < policy.min_points || n_p_ < policy.min_points) {
    std::ostringstream os;
    os << "grid needs at least " << policy.min_points << " points per axis (got " << n_q_ << "x"
       << n_p_ << ")";
    fail(ErrorKind::Grid, os.str());
  }
  dq_ = (q_max_ - q_min_) / static_cast<double>(n_q_ - 1);
  dp_ = (p_max_ - p_min_) / static_cast<double>(n_p_ - 1);
}

PhaseSpaceGrid PhaseSpaceGrid::centered(double q_c, double p_c, double half_q, double half_p,
                                        std::size_t points, GridPolicy policy) {
  require(half_q > 0 && half_p > 0, ErrorKind::Grid, "grid half-widths must be positive");
  const std::size_t n = round_up_odd(points);
  require(n >= 3, ErrorKind::Grid, "grid needs at least 3 points");
  const double dq = 2 * half_q / static_cast<double>(n - 1);
  const double dp = 2 * half_p / static_cast<double>(n - 1);
  const double qs = std::round(q_c / dq) * dq;
  const double ps = std::round(p_c / dp) * dp;
  return PhaseSpaceGrid(qs - half_q, qs + half_q, ps - half_p, ps + half_p, n, n, policy);
}

PhaseSpaceGrid PhaseSpaceGrid::kernel(double step_q, double step_p, double half_width,
                                      GridPolicy policy) {
  require(step_q > 0 && step_p > 0, ErrorKind::Grid, "kernel steps must be positive");
  const auto half_nq = static_cast<std::size_t>(std::ceil(half_width / step_q));
  const auto half_np = static_cast<std::size_t>(std::ceil(half_width / step_p));
  const std::size_t hq = std::max<std::size_t>(half_nq, 1);
  const std::size_t hp = std::max<std::size_t>(half_np, 1);
  return PhaseSpaceGrid(-static_cast<double>(hq) * step_q, static_cast<double>(hq) * step_q,
                        -static_cast<double>(hp) * step_p, static_cast<double>(hp) * step_p,
                        2 * hq + 1, 2 * hp + 1, policy);
}

bool PhaseSpaceGrid::same_as(const PhaseSpaceGrid& o, double tol) const {
  return n_q_ == o.n_q_ && n_p_ == o.n_p_ && std::abs(q_min_ - o.q_min_) <= tol &&
         std::abs(q_max_ - o.q_max_) <= tol && std::abs(p_min_ - o.p_min_) <= tol &&
         std::abs(p_max_ - o.p_max_) <= tol;
}

double log_factorial(int n) {
  require(n >= 0, ErrorKind::Domain, "log_factorial of a negative integer");
  static const std::array<double, 257> table = [] {
    std::array<double, 257> t{};
    t[0] = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] + std::log(static_cast<double>(i));
    return t;
  }();
  if (n <= 256) return table[static_cast<std::size_t>(n)];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double laguerre_assoc(int n, int k, double x, int cutoff) {
  require(n >= 0 && k >= 0, ErrorKind::Domain, "Laguerre indices must be non-negative");
  if (n > cutoff) {
    std::ostringstream os;
    os << "Laguerre order " << n << " exceeds the Fock cutoff " << cutoff;
    fail(ErrorKind::Capacity, os.str());
  }
  require(std::isfinite(x), ErrorKind::Domain, "Laguerre argument must be finite");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + k - x;
  for (int j = 1; j < n; ++j) {
    const double next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double laguerre_assoc_derivative(int n, int k, double x, int cutoff) {
  require(n >= 0 && k >= 0, ErrorKind::Domain, "Laguerre indices must be non-negative");
  if (n > cutoff) {
    std::ostringstream os;
    os << "Laguerre order " << n << " exceeds the Fock cutoff " << cutoff;
    fail(ErrorKind::Capacity, os.str());
  }
  require(std::isfinite(x), ErrorKind::Domain, "Laguerre argument must be finite");
  if (n == 0) return 0.0;
  return -laguerre_assoc(n - 1, k + 1, x, cutoff);
}

std::vector<double> quadrature_weights(std::size_t n, double step) {
  require(n >= 2, ErrorKind::Grid, "quadrature needs at least two points");
  std::vector<double> w(n, step);
  if (n % 2 == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      const double c = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      w[i] = c * step / 3.0;
    }
  } else {
    w.front() = w.back() = 0.5 * step;
  }
  return w;
}

double integrate(const Field& values, const PhaseSpaceGrid& grid) {
  if (static_cast<std::size_t>(values.rows()) != grid.n_q() ||
      static_cast<std::size_t>(values.cols()) != grid.n_p()) {
    std::ostringstream os;
    os << "field is " << values.rows() << "x" << values.cols() << " but grid is " << grid.n_q()
       << "x" << grid.n_p();
    fail(ErrorKind::Shape, os.str());
  }
  const auto wq = quadrature_weights(grid.n_q(), grid.dq());
  const auto wp = quadrature_weights(grid.n_p(), grid.dp());
  double total = 0.0;
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    double column = 0.0;
    for (Eigen::Index i = 0; i < values.rows(); ++i) column += wq[static_cast<std::size_t>(i)] * values(i, j);
    total += wp[static_cast<std::size_t>(j)] * column;
  }
  return total;
}

double boundary_magnitude(const Field& v) {
  const Eigen::Index r = v.rows() - 1;
  const Eigen::Index c = v.cols() - 1;
  double m = v.row(0).abs().maxCoeff();
  m = std::max(m, v.row(r).abs().maxCoeff());
  m = std::max(m, v.col(0).abs().maxCoeff());
  m = std::max(m, v.col(c).abs().maxCoeff());
  return m;
}

Field convolve(const Field& a, const Field& b, const PhaseSpaceGrid& grid) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    fail(ErrorKind::Shape, "convolution operands must share a grid");
  }
  return convolve(a, grid, b, grid);
}

Field convolve(const Field& field, const PhaseSpaceGrid& field_grid, const Field& kernel,
               const PhaseSpaceGrid& kernel_grid) {
  if (static_cast<std::size_t>(field.rows()) != field_grid.n_q() ||
      static_cast<std::size_t>(field.cols()) != field_grid.n_p() ||
      static_cast<std::size_t>(kernel.rows()) != kernel_grid.n_q() ||
      static_cast<std::size_t>(kernel.cols()) != kernel_grid.n_p()) {
    fail(ErrorKind::Shape, "convolution operand does not match its grid");
  }
  if (std::abs(field_grid.dq() - kernel_grid.dq()) > 1e-12 * field_grid.dq() ||
      std::abs(field_grid.dp() - kernel_grid.dp()) > 1e-12 * field_grid.dp()) {
    fail(ErrorKind::Shape, "convolution operands must share step sizes");
  }
  for (const Field* f : {&field, &kernel}) {
    const double edge = boundary_magnitude(*f);
    if (edge > kConvolutionEdgeTolerance) {
      std::ostringstream os;
      os << "convolution operand has not decayed at the grid boundary (edge magnitude " << edge
         << " > " << kConvolutionEdgeTolerance << ")";
      fail(ErrorKind::Truncation, os.str());
    }
  }
  const long off_q = aligned_offset(kernel_grid.q_min(), kernel_grid.dq(), "q");
  const long off_p = aligned_offset(kernel_grid.p_min(), kernel_grid.dp(), "p");

  const int nq = static_cast<int>(field.rows() + kernel.rows() - 1);
  const int np = static_cast<int>(field.cols() + kernel.cols() - 1);
  const int np_half = np / 2 + 1;
  const std::size_t real_size = static_cast<std::size_t>(nq) * static_cast<std::size_t>(np);
  const std::size_t spec_size = static_cast<std::size_t>(nq) * static_cast<std::size_t>(np_half);

  std::vector<double> ra(real_size, 0.0), rb(real_size, 0.0);
  for (Eigen::Index i = 0; i < field.rows(); ++i)
    for (Eigen::Index j = 0; j < field.cols(); ++j)
      ra[static_cast<std::size_t>(i) * np + static_cast<std::size_t>(j)] = field(i, j);
  for (Eigen::Index i = 0; i < kernel.rows(); ++i)
    for (Eigen::Index j = 0; j < kernel.cols(); ++j)
      rb[static_cast<std::size_t>(i) * np + static_cast<std::size_t>(j)] = kernel(i, j);

  std::vector<std::complex<double>> sa(spec_size), sb(spec_size);
  auto* ca = reinterpret_cast<fftw_complex*>(sa.data());
  auto* cb = reinterpret_cast<fftw_complex*>(sb.data());

  fftw_plan fwd_a, fwd_b, inv;
  {
    std::lock_guard lock(fftw_planner_mutex());
    fwd_a = fftw_plan_dft_r2c_2d(nq, np, ra.data(), ca, FFTW_ESTIMATE);
    fwd_b = fftw_plan_dft_r2c_2d(nq, np, rb.data(), cb, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_2d(nq, np, ca, ra.data(), FFTW_ESTIMATE);
  }
  fftw_execute(fwd_a);
  fftw_execute(fwd_b);
  for (std::size_t i = 0; i < spec_size; ++i) sa[i] *= sb[i];
  fftw_execute(inv);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd_a);
    fftw_destroy_plan(fwd_b);
    fftw_destroy_plan(inv);
  }

  const double scale = field_grid.cell_area() / static_cast<double>(real_size);
  Field out = field_grid.zeros();
  for (Eigen::Index k = 0; k < out.rows(); ++k) {
    const long s = static_cast<long>(k) + off_q;
    if (s < 0 || s >= nq) continue;
    for (Eigen::Index l = 0; l < out.cols(); ++l) {
      const long t = static_cast<long>(l) + off_p;
      if (t < 0 || t >= np) continue;
      out(k, l) = ra[static_cast<std::size_t>(s) * np + static_cast<std::size_t>(t)] * scale;
    }
  }
  return out;
}

Field gaussian_blur(const Field& field, const PhaseSpaceGrid& grid, const Eigen::Matrix2d& cov) {
  if (static_cast<std::size_t>(field.rows()) != grid.n_q() ||
      static_cast<std::size_t>(field.cols()) != grid.n_p()) {
    fail(ErrorKind::Shape, "field does not match its grid");
  }
  require(cov.allFinite() && std::abs(cov(0, 1) - cov(1, 0)) <= 1e-14 &&
              cov(0, 0) >= 0 && cov(1, 1) >= 0 &&
              cov(0, 0) * cov(1, 1) - cov(0, 1) * cov(1, 0) >= -1e-14,
          ErrorKind::Domain, "blur covariance must be symmetric positive semidefinite");
  const double edge = boundary_magnitude(field);
  if (edge > kConvolutionEdgeTolerance) {
    std::ostringstream os;
    os << "convolution operand has not decayed at the grid boundary (edge magnitude " << edge
       << " > " << kConvolutionEdgeTolerance << ")";
    fail(ErrorKind::Truncation, os.str());
  }
  const auto pad = [](std::size_t n, double variance, double step) {
    const auto reach = static_cast<std::size_t>(std::ceil(10.0 * std::sqrt(variance) / step));
    return static_cast<int>(n + std::max(n - 1, 2 * reach + 1));
  };
  const int nq = pad(grid.n_q(), cov(0, 0), grid.dq());
  const int np = pad(grid.n_p(), cov(1, 1), grid.dp());
  const int np_half = np / 2 + 1;
  const std::size_t real_size = static_cast<std::size_t>(nq) * static_cast<std::size_t>(np);
  std::vector<double> buf(real_size, 0.0);
  for (Eigen::Index i = 0; i < field.rows(); ++i)
    for (Eigen::Index j = 0; j < field.cols(); ++j)
      buf[static_cast<std::size_t>(i) * np + static_cast<std::size_t>(j)] = field(i, j);
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(nq) * np_half);
  auto* cs = reinterpret_cast<fftw_complex*>(spec.data());
  fftw_plan fwd, inv;
  {
    std::lock_guard lock(fftw_planner_mutex());
    fwd = fftw_plan_dft_r2c_2d(nq, np, buf.data(), cs, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_2d(nq, np, cs, buf.data(), FFTW_ESTIMATE);
  }
  fftw_execute(fwd);
  const double two_pi = 2.0 * std::acos(-1.0);
  for (int a = 0; a < nq; ++a) {
    const double kq = two_pi * (a <= nq / 2 ? a : a - nq) / (nq * grid.dq());
    for (int b = 0; b < np_half; ++b) {
      const double kp = two_pi * b / (np * grid.dp());
      const double quad = cov(0, 0) * kq * kq + 2.0 * cov(0, 1) * kq * kp + cov(1, 1) * kp * kp;
      spec[static_cast<std::size_t>(a) * np_half + b] *= std::exp(-0.5 * quad) / static_cast<double>(real_size);
    }
  }
  fftw_execute(inv);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  Field out = grid.zeros();
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      out(i, j) = buf[static_cast<std::size_t>(i) * np + static_cast<std::size_t>(j)];
  return out;
}

}  // namespace ngm

namespace ngm {

namespace {

unsigned workers_from_env() {
  const char* env = std::getenv("NGM_WORKERS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) return 1;
  return static_cast<unsigned>(std::min<long>(v, 256));
}

std::atomic<unsigned>& worker_setting() {
  static std::atomic<unsigned> n{workers_from_env()};
  return n;
}

// Nested parallel_for calls run serially on the calling worker.
thread_local bool inside_worker = false;

}  // namespace

unsigned worker_count() { return worker_setting().load(); }

void set_worker_count(unsigned n) { worker_setting().store(std::max(1u, n)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers = inside_worker ? 1 : std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    if (n > 0) body(0, n);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    threads.emplace_back([&, w, b, e] {
      inside_worker = true;
      try {
        body(b, e);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace ngm
