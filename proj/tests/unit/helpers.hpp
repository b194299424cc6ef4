#pragma once

#include "ngm/errors.hpp"
#include "ngm/fock.hpp"
#include "ngm/numerics.hpp"
#include "ngm/wigner.hpp"

#include <gtest/gtest.h>

#include <functional>

namespace testing_helpers {

inline ngm::FockDensityMatrix fock_state(int n) {
  ngm::FockVector v{ngm::CVector::Zero(n + 1)};
  v.amplitudes(n) = 1.0;
  return ngm::FockDensityMatrix::pure(v);
}

inline ngm::FockDensityMatrix pure(const ngm::FockVector& v) { return ngm::FockDensityMatrix::pure(v); }

// Fast square grid for unit tests.
inline ngm::PhaseSpaceGrid square(double half, std::size_t points = 129) {
  return ngm::PhaseSpaceGrid(-half, half, -half, half, points, points);
}

inline ngm::Field sample(const ngm::PhaseSpaceGrid& g, const std::function<double(double, double)>& f) {
  ngm::Field out = g.zeros();
  for (std::size_t i = 0; i < g.n_q(); ++i)
    for (std::size_t j = 0; j < g.n_p(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f(g.q(i), g.p(j));
  return out;
}

inline void expect_error_kind(const std::function<void()>& f, ngm::ErrorKind kind) {
  try {
    f();
    ADD_FAILURE() << "expected " << ngm::to_string(kind) << " error";
  } catch (const ngm::Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

}  // namespace testing_helpers
