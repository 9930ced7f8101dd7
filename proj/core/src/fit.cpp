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

#include "kipa/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "kipa/errors.hpp"

namespace kipa {

double FitResult::value(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return params[i];
  throw DomainError("fit has no parameter '" + name + "'");
}

double FitResult::error(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return std_errors[i];
  throw DomainError("fit has no parameter '" + name + "'");
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Problem {
  const ModelFn& model;
  const std::vector<double>& x;
  const std::vector<double>& y;
  const std::vector<FitParameter>& spec;

  std::vector<double> external(const VectorXd& u) const {
    std::vector<double> p(u.size());
    for (Eigen::Index j = 0; j < u.size(); ++j) p[j] = spec[j].positive ? std::exp(u[j]) : u[j];
    return p;
  }

  bool residuals(const VectorXd& u, VectorXd& r) const {
    const std::vector<double> p = external(u);
    r.resize(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
      r[i] = y[i] - model(x[i], p);
      if (!std::isfinite(r[i])) return false;
    }
    return true;
  }

  // d(residual)/du, forward differences.
  MatrixXd jacobian(const VectorXd& u, const VectorXd& r, const VectorXd& step) const {
    MatrixXd J(r.size(), u.size());
    VectorXd up = u, rp;
    for (Eigen::Index j = 0; j < u.size(); ++j) {
      double h = std::max(step[j], 1e-7 * std::abs(u[j]));
      up[j] = u[j] + h;
      if (!residuals(up, rp)) {
        up[j] = u[j] - h;
        residuals(up, rp);
        h = -h;
      }
      J.col(j) = (rp - r) / h;
      up[j] = u[j];
    }
    return J;
  }
};

}  // namespace

FitResult least_squares(const ModelFn& model, const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<FitParameter>& params, const LeastSquaresOptions& opt) {
  const std::size_t m = x.size(), n = params.size();
  if (n == 0) throw DomainError("least_squares needs at least one parameter");
  if (y.size() != m) throw DomainError("x and y lengths differ");
  if (m < n) throw DomainError("fewer data points than parameters");
  for (double v : x)
    if (!std::isfinite(v)) throw DomainError("non-finite abscissa");
  for (double v : y)
    if (!std::isfinite(v)) throw DomainError("non-finite data value");

  Problem prob{model, x, y, params};
  VectorXd u(n), step(n);
  for (std::size_t j = 0; j < n; ++j) {
    const FitParameter& p = params[j];
    if (p.positive) {
      if (!(p.initial > 0.0)) throw DomainError("positive parameter '" + p.name + "' needs a positive start");
      u[j] = std::log(p.initial);
      step[j] = 1e-7;
    } else {
      u[j] = p.initial;
      const double s = p.scale > 0.0 ? p.scale : (p.initial != 0.0 ? std::abs(p.initial) : 1.0);
      step[j] = 1e-7 * s;
    }
  }

  FitResult res;
  for (const auto& p : params) res.names.push_back(p.name);

  VectorXd r;
  if (!prob.residuals(u, r)) throw DomainError("model is not finite at the initial parameters");
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  bool converged = false;
  int it = 0;
  std::string message = "iteration limit reached";

  for (; it < opt.max_iterations; ++it) {
    const MatrixXd J = prob.jacobian(u, r, step);
    // J is d(residual)/du; the cost gradient is 2 J^T r.
    const MatrixXd A = J.transpose() * J;
    const VectorXd g = J.transpose() * r;
    VectorXd diag = A.diagonal();
    for (Eigen::Index j = 0; j < diag.size(); ++j) diag[j] = std::max(diag[j], 1e-300);

    bool accepted = false;
    while (!accepted) {
      MatrixXd Ad = A;
      Ad.diagonal() += lambda * diag;
      const VectorXd delta = Ad.ldlt().solve(-g);
      if (!delta.allFinite()) {
        lambda *= 10.0;
        if (lambda > 1e20) break;
        continue;
      }
      const VectorXd u_new = u + delta;
      VectorXd r_new;
      const bool ok = prob.residuals(u_new, r_new);
      const double cost_new = ok ? r_new.squaredNorm() : std::numeric_limits<double>::infinity();
      const double predicted = -(delta.dot(g) * 2.0 + delta.dot(A * delta));
      if (ok && cost_new < cost) {
        double rel = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          rel = std::max(rel, std::abs(delta[j]) / (std::abs(u[j]) + step[j] * 1e7));
        u = u_new;
        r = r_new;
        const double old = cost;
        cost = cost_new;
        lambda = std::max(lambda / 3.0, 1e-15);
        accepted = true;
        if (rel < opt.param_tol || old - cost_new <= 1e-15 * old) {
          converged = true;
          message = "relative parameter change below tolerance";
        }
      } else {
        // No decrease and the model predicts none either: at the minimum to
        // within rounding.
        if (cost == 0.0 || std::abs(predicted) <= 1e-15 * cost) {
          converged = true;
          message = "no further decrease possible";
          break;
        }
        lambda *= 4.0;
        if (lambda > 1e20) break;
      }
    }
    if (converged) {
      ++it;
      break;
    }
    if (!accepted) {
      message = "damping exhausted without decrease";
      break;
    }
  }

  res.iterations = it;
  res.params = prob.external(u);
  res.residual_rms = std::sqrt(cost / static_cast<double>(m));
  res.converged = converged;
  res.message = message;

  // Covariance in external parameters.
  const MatrixXd Ju = prob.jacobian(u, r, step);
  MatrixXd J = Ju;
  for (std::size_t j = 0; j < n; ++j)
    if (params[j].positive) J.col(j) /= res.params[j];
  VectorXd colscale(n);
  const double yscale = std::max(VectorXd::Map(y.data(), m).cwiseAbs().maxCoeff(), 1e-300);
  for (std::size_t j = 0; j < n; ++j) {
    // Sensitivity of the model to a relative change of parameter j.
    const double mag = params[j].positive ? res.params[j]
                                          : std::max(std::abs(res.params[j]), step[j] * 1e7);
    colscale[j] = J.col(j).norm() * mag;
  }
  res.std_errors.assign(n, std::numeric_limits<double>::infinity());
  res.unit_errors.assign(n, std::numeric_limits<double>::infinity());
  bool identifiable = true;
  for (std::size_t j = 0; j < n; ++j)
    if (!(colscale[j] > 1e-9 * yscale * std::sqrt(static_cast<double>(m)))) identifiable = false;
  if (identifiable) {
    // Condition the normal matrix on unit-scaled columns.
    MatrixXd Js = J;
    for (std::size_t j = 0; j < n; ++j) Js.col(j) /= J.col(j).norm();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(Js.transpose() * Js);
    const VectorXd ev = es.eigenvalues();
    if (!(ev.minCoeff() > 1e-14 * ev.maxCoeff())) identifiable = false;
  }
  if (identifiable) {
    const MatrixXd cov = (J.transpose() * J).inverse();
    const double dof = m > n ? static_cast<double>(m - n) : 1.0;
    const double s2 = cost / dof;
    for (std::size_t j = 0; j < n; ++j) {
      res.unit_errors[j] = std::sqrt(std::max(cov(j, j), 0.0));
      res.std_errors[j] = std::sqrt(std::max(cov(j, j) * s2, 0.0));
    }
  } else {
    res.converged = false;
    res.message = "parameters not identifiable from the data (singular Jacobian)";
  }
  for (double p : res.params)
    if (!std::isfinite(p)) res.converged = false;
  return res;
}

double lorentzian(double x, double center, double fwhm, double peak, double offset) {
  const double u = 2.0 * (x - center) / fwhm;
  return offset + peak / (1.0 + u * u);
}

namespace {

void check_xy(const std::vector<double>& x, const std::vector<double>& y, std::size_t min_points, const char* what) {
  if (x.size() != y.size()) throw DomainError(std::string(what) + ": x and y lengths differ");
  if (x.size() < min_points)
    throw DomainError(std::string(what) + ": needs at least " + std::to_string(min_points) + " points");
}

double data_span(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

}  // namespace

FitResult fit_lorentzian(const std::vector<double>& x, const std::vector<double>& y) {
  check_xy(x, y, 4, "fit_lorentzian");
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  const double offset0 = 0.5 * (y[idx.front()] + y[idx.back()]);
  std::size_t ext = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (std::abs(y[i] - offset0) > std::abs(y[ext] - offset0)) ext = i;
  const double peak0 = y[ext] - offset0;
  // Width from the samples above half height.
  double lo = x[ext], hi = x[ext];
  for (std::size_t i = 0; i < x.size(); ++i)
    if (std::abs(y[i] - offset0) >= 0.5 * std::abs(peak0)) {
      lo = std::min(lo, x[i]);
      hi = std::max(hi, x[i]);
    }
  const double xspan = data_span(x);
  double fwhm0 = hi - lo;
  if (!(fwhm0 > 0.0)) fwhm0 = 0.1 * xspan;
  if (!(fwhm0 > 0.0)) throw DomainError("fit_lorentzian: abscissa has no spread");
  const double yscale = std::max(data_span(y), std::abs(offset0));
  std::vector<FitParameter> p = {
      {"center", x[ext], false, std::max(std::abs(x[ext]), xspan)},
      {"fwhm", fwhm0, true, 0.0},
      {"peak", peak0, false, yscale > 0.0 ? yscale : 1.0},
      {"offset", offset0, false, yscale > 0.0 ? yscale : 1.0},
  };
  return least_squares([](double v, const std::vector<double>& q) { return lorentzian(v, q[0], q[1], q[2], q[3]); },
                       x, y, p);
}

double exponential(double t, ExpKind kind, double amplitude, double tau, double offset) {
  const double e = std::exp(-t / tau);
  return kind == ExpKind::Decay ? amplitude * e + offset : amplitude * (1.0 - e) + offset;
}

FitResult fit_exponential(const std::vector<double>& t, const std::vector<double>& y, ExpKind kind) {
  check_xy(t, y, 4, "fit_exponential");
  std::vector<std::size_t> idx(t.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return t[a] < t[b]; });
  const double y_first = y[idx.front()], y_last = y[idx.back()];
  const double t0 = t[idx.front()];
  const double c0 = kind == ExpKind::Decay ? y_last : y_first;
  const double a0 = kind == ExpKind::Decay ? y_first - y_last : y_last - y_first;
  // tau from the first sample that has covered 1 - 1/e of the change.
  const double target = y_first + (y_last - y_first) * (1.0 - std::exp(-1.0));
  double tau0 = 0.0;
  for (std::size_t k : idx) {
    const bool past = (y_last > y_first) ? y[k] >= target : y[k] <= target;
    if (past) {
      tau0 = t[k] - t0;
      break;
    }
  }
  const double tspan = data_span(t);
  if (!(tspan > 0.0)) throw DomainError("fit_exponential: time axis has no spread");
  if (!(tau0 > 0.0)) tau0 = tspan / 3.0;
  const double yscale = std::max({data_span(y), std::abs(c0), 1e-300});
  std::vector<FitParameter> p = {
      {"amplitude", a0, false, yscale},
      {"tau", tau0, true, 0.0},
      {"offset", c0, false, yscale},
  };
  return least_squares(
      [kind](double v, const std::vector<double>& q) { return exponential(v, kind, q[0], q[1], q[2]); }, t, y, p);
}

double snr_vs_gain(double Gk, double A, double B) {
  const double g2 = Gk * Gk;
  return std::sqrt(g2 * A / (g2 * B + 1.0));
}

FitResult fit_snr_vs_gain(const std::vector<double>& Gk, const std::vector<double>& snr) {
  check_xy(Gk, snr, 3, "fit_snr_vs_gain");
  std::set<double> distinct(Gk.begin(), Gk.end());
  if (distinct.size() < 3) throw DomainError("fit_snr_vs_gain: needs at least 3 distinct G_k values");
  for (std::size_t i = 0; i < Gk.size(); ++i)
    if (!(Gk[i] > 0.0) || !(snr[i] > 0.0)) throw DomainError("fit_snr_vs_gain: G_k and SNR must be positive");
  // 1/SNR^2 = B/A + (1/A)/G^2 is linear in 1/G^2; use it for the start point.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double m = static_cast<double>(Gk.size());
  for (std::size_t i = 0; i < Gk.size(); ++i) {
    const double u = 1.0 / (Gk[i] * Gk[i]), v = 1.0 / (snr[i] * snr[i]);
    sx += u;
    sy += v;
    sxx += u * u;
    sxy += u * v;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double icept = (sy - slope * sx) / m;
  double A0 = slope > 0.0 ? 1.0 / slope : snr[0] * snr[0];
  double B0 = slope > 0.0 ? icept / slope : 0.0;
  std::vector<FitParameter> p = {{"A", A0, true, 0.0}, {"B", B0, false, std::max(std::abs(B0), 1e-3)}};
  return least_squares([](double g, const std::vector<double>& q) { return snr_vs_gain(g, q[0], q[1]); }, Gk, snr,
                       p);
}

double gsnr_vs_te(double Te, double a, double tau_k) { return a * (1.0 - std::exp(-Te / tau_k)); }

FitResult fit_gsnr_vs_te(const std::vector<double>& Te, const std::vector<double>& gsnr) {
  check_xy(Te, gsnr, 3, "fit_gsnr_vs_te");
  for (double t : Te)
    if (!(t >= 0.0)) throw DomainError("fit_gsnr_vs_te: echo durations must be >= 0");
  const double a0 = *std::max_element(gsnr.begin(), gsnr.end());
  if (!(a0 > 0.0)) throw DomainError("fit_gsnr_vs_te: needs positive G_SNR values");
  std::vector<std::size_t> idx(Te.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return Te[a] < Te[b]; });
  double tau0 = 0.0;
  for (std::size_t k : idx)
    if (gsnr[k] >= (1.0 - std::exp(-1.0)) * a0) {
      tau0 = Te[k];
      break;
    }
  if (!(tau0 > 0.0)) tau0 = Te[idx[idx.size() / 2]];
  if (!(tau0 > 0.0)) tau0 = 1.0;
  std::vector<FitParameter> p = {{"a", a0, true, 0.0}, {"tau_k", tau0, true, 0.0}};
  return least_squares([](double t, const std::vector<double>& q) { return gsnr_vs_te(t, q[0], q[1]); }, Te, gsnr,
                       p);
}

}  // namespace kipa
