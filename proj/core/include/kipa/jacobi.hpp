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

#pragma once

#include <vector>

#include "kipa/matrix.hpp"

namespace kipa {

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k belongs to values[k]
  int sweeps = 0;
};

// Cyclic Jacobi rotations. Converges when the off-diagonal Frobenius norm
// falls below tol * ||A||_F. Throws ConvergenceError past max_sweeps.
SymmetricEigen jacobi_eigen(const Matrix& a, double tol = 1e-15, int max_sweeps = 100);

}  // namespace kipa
