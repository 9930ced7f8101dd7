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

#include <functional>
#include <vector>

namespace kipa {

// Adaptive Simpson over consecutive panels [b0, b1], [b1, b2], ...
// The absolute target is rel_tol times a coarse estimate of the whole
// integral. Throws ConvergenceError if any panel exhausts max_depth.
double adaptive_simpson(const std::function<double(double)>& f, const std::vector<double>& breakpoints,
                        double rel_tol = 1e-6, int max_depth = 48);

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-6,
                        int max_depth = 48);

}  // namespace kipa
