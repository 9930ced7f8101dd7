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

#include "kipa/quadrature.hpp"

#include <cmath>

#include "kipa/errors.hpp"

namespace kipa {
namespace {

struct Simpson {
  const std::function<double(double)>& f;
  int max_depth;
  int failures = 0;
  long evaluations = 0;

  double eval(double x) {
    ++evaluations;
    return f(x);
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = eval(lm), frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    if (depth >= max_depth) {
      ++failures;
      return left + right + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
  }
};

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, const std::vector<double>& bp, double rel_tol,
                        int max_depth) {
  if (bp.size() < 2) throw DomainError("adaptive_simpson needs at least one panel");
  for (std::size_t i = 1; i < bp.size(); ++i)
    if (!(bp[i] > bp[i - 1])) throw DomainError("adaptive_simpson breakpoints must increase");

  Simpson s{f, max_depth};
  // Coarse pass (16 sub-intervals per panel) fixes the absolute scale.
  double coarse = 0.0;
  std::vector<double> fa(bp.size() - 1), fm(bp.size() - 1), fb(bp.size() - 1);
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double a = bp[i], b = bp[i + 1], h = (b - a) / 16.0;
    double sum = 0.0;
    for (int k = 0; k < 16; ++k) {
      const double x0 = a + k * h;
      sum += h / 6.0 * (s.eval(x0) + 4.0 * s.eval(x0 + 0.5 * h) + s.eval(x0 + h));
    }
    coarse += std::abs(sum);
    fa[i] = s.eval(a);
    fm[i] = s.eval(0.5 * (a + b));
    fb[i] = s.eval(b);
  }
  const double span = bp.back() - bp.front();
  auto integrate = [&](double scale) {
    const double eps_total = rel_tol * scale;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      const double a = bp[i], b = bp[i + 1];
      const double whole = (b - a) / 6.0 * (fa[i] + 4.0 * fm[i] + fb[i]);
      total += s.recurse(a, b, fa[i], fm[i], fb[i], whole, eps_total * (b - a) / span, 0);
    }
    return total;
  };
  // A coarse grid can land on a narrow peak and overstate the scale; redo
  // with the refined value until the two agree.
  double scale = coarse > 0.0 ? coarse : 1.0;
  double total = integrate(scale);
  for (int pass = 0; pass < 4 && std::abs(total) > 0.0 && std::abs(total) < 0.5 * scale; ++pass) {
    scale = std::abs(total);
    s.failures = 0;
    total = integrate(scale);
  }
  if (s.failures > 0) throw ConvergenceError("adaptive_simpson: tolerance not met on some sub-panels", s.failures);
  return total;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double rel_tol, int max_depth) {
  return adaptive_simpson(f, std::vector<double>{a, b}, rel_tol, max_depth);
}

}  // namespace kipa
