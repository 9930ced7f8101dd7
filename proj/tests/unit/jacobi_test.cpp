// Copyright 2026 The kipa-esr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kipa/jacobi.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "kipa/errors.hpp"

namespace {

kipa::Matrix random_symmetric(std::size_t n, std::mt19937& rng) {
  std::normal_distribution<double> d;
  kipa::Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = d(rng);
  return m;
}

TEST(Jacobi, DiagonalInputIsSortedAndUntouched) {
  kipa::Matrix m(3, 3);
  m(0, 0) = 3;
  m(1, 1) = -1;
  m(2, 2) = 2;
  auto e = kipa::jacobi_eigen(m);
  EXPECT_EQ(e.sweeps, 0);
  EXPECT_DOUBLE_EQ(e.values[0], -1);
  EXPECT_DOUBLE_EQ(e.values[1], 2);
  EXPECT_DOUBLE_EQ(e.values[2], 3);
  EXPECT_DOUBLE_EQ(std::abs(e.vectors(1, 0)), 1.0);
}

TEST(Jacobi, TwoByTwoClosedForm) {
  kipa::Matrix m(2, 2);
  m(0, 0) = 2;
  m(1, 1) = 2;
  m(0, 1) = m(1, 0) = 1;
  auto e = kipa::jacobi_eigen(m);
  EXPECT_NEAR(e.values[0], 1.0, 1e-15);
  EXPECT_NEAR(e.values[1], 3.0, 1e-15);
}

TEST(Jacobi, MatchesEigenOnRandomMatrices) {
  std::mt19937 rng(7);
  for (std::size_t n : {2u, 5u, 20u, 31u}) {
    const kipa::Matrix m = random_symmetric(n, rng);
    const auto e = kipa::jacobi_eigen(m);
    Eigen::MatrixXd em(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) em(i, j) = m(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(em);
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(e.values[k], es.eigenvalues()[k], 1e-12) << n;

    // Reconstruction and orthonormality.
    const kipa::Matrix& V = e.vectors;
    const kipa::Matrix AV = m * V;
    const kipa::Matrix VtV = V.transpose() * V;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        EXPECT_NEAR(AV(i, k), V(i, k) * e.values[k], 1e-12 * m.max_abs());
        EXPECT_NEAR(VtV(i, k), i == k ? 1.0 : 0.0, 1e-12);
      }
  }
}

TEST(Jacobi, SweepLimitReportsConvergenceError) {
  std::mt19937 rng(1);
  const kipa::Matrix m = random_symmetric(12, rng);
  try {
    kipa::jacobi_eigen(m, 1e-15, 1);
    FAIL() << "expected ConvergenceError";
  } catch (const kipa::ConvergenceError& e) {
    EXPECT_EQ(e.iterations(), 1);
  }
}

}  // namespace
