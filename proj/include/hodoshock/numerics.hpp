#pragma once

// Small numerical utilities shared across the library: finite differences
// with Richardson extrapolation, an adaptive Gauss-Kronrod quadrature, an
// adaptive RK45 (Cash-Karp) scalar integrator and a least-squares line fit.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "hodoshock/errors.hpp"

namespace hodoshock::num {

/// Central difference (f(x+h) - f(x-h)) / 2h.
template <class F>
double fd_central(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Richardson-extrapolated central difference, O(h^4).
template <class F>
double fd_richardson(F&& f, double x, double h) {
  const double d1 = fd_central(f, x, h);
  const double d2 = fd_central(f, x, h / 2.0);
  return (4.0 * d2 - d1) / 3.0;
}

namespace detail {
// 15-point Kronrod nodes/weights with embedded 7-point Gauss rule on [-1,1].
inline constexpr std::array<double, 15> kKronrodX = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
inline constexpr std::array<double, 15> kKronrodW = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
inline constexpr std::array<double, 7> kGaussW = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

template <class F>
void gk15(F&& f, double a, double b, double& value, double& err) {
  const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double fx = f(c + hw * kKronrodX[i]);
    kron += kKronrodW[i] * fx;
    if (i % 2 == 1) gauss += kGaussW[i / 2] * fx;
  }
  value = kron * hw;
  err = std::abs((kron - gauss) * hw);
}
}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a,b].
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-12,
                 double rel_tol = 1e-11, int max_depth = 40) {
  if (a == b) return 0.0;
  struct Seg { double a, b, value, err; int depth; };
  double v0, e0;
  detail::gk15(f, a, b, v0, e0);
  std::vector<Seg> stack{{a, b, v0, e0, 0}};
  double total = 0.0, total_err = 0.0;
  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    const double tol =
        std::max(abs_tol * std::abs(s.b - s.a) / std::abs(b - a),
                 rel_tol * std::abs(s.value));
    if (s.err <= tol || s.depth >= max_depth) {
      if (s.depth >= max_depth && s.err > 1e3 * tol)
        throw QuadFailure("adaptive quadrature failed to converge");
      total += s.value;
      total_err += s.err;
      continue;
    }
    const double m = 0.5 * (s.a + s.b);
    double vl, el, vr, er;
    detail::gk15(f, s.a, m, vl, el);
    detail::gk15(f, m, s.b, vr, er);
    stack.push_back({s.a, m, vl, el, s.depth + 1});
    stack.push_back({m, s.b, vr, er, s.depth + 1});
  }
  (void)total_err;
  return total;
}

/// Non-adaptive 15-point Gauss-Kronrod panel (for short smooth panels).
template <class F>
double integrate_panel(F&& f, double a, double b) {
  double v, e;
  detail::gk15(f, a, b, v, e);
  return v;
}

/// Adaptive Cash-Karp RK45 for a scalar ODE y' = f(x, y), integrating from
/// x0 to x1 (x1 may be < x0). Tolerance is abs_tol + rel_tol*|y| per step.
template <class F>
double rk45(F&& f, double x0, double x1, double y0, double abs_tol,
            double rel_tol, std::size_t max_steps = 2000000) {
  static constexpr double a2 = 0.2, a3 = 0.3, a4 = 0.6, a5 = 1.0, a6 = 0.875;
  static constexpr double b21 = 0.2;
  static constexpr double b31 = 3.0 / 40.0, b32 = 9.0 / 40.0;
  static constexpr double b41 = 0.3, b42 = -0.9, b43 = 1.2;
  static constexpr double b51 = -11.0 / 54.0, b52 = 2.5, b53 = -70.0 / 27.0,
                          b54 = 35.0 / 27.0;
  static constexpr double b61 = 1631.0 / 55296.0, b62 = 175.0 / 512.0,
                          b63 = 575.0 / 13824.0, b64 = 44275.0 / 110592.0,
                          b65 = 253.0 / 4096.0;
  static constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0,
                          c4 = 125.0 / 594.0, c6 = 512.0 / 1771.0;
  static constexpr double d1 = c1 - 2825.0 / 27648.0,
                          d3 = c3 - 18575.0 / 48384.0,
                          d4 = c4 - 13525.0 / 55296.0, d5 = -277.0 / 14336.0,
                          d6 = c6 - 0.25;

  if (x0 == x1) return y0;
  const double dir = (x1 > x0) ? 1.0 : -1.0;
  double x = x0, y = y0;
  double h = dir * std::max(1e-12, std::abs(x1 - x0) / 64.0);
  std::size_t steps = 0;
  while (dir * (x1 - x) > 0.0) {
    if (++steps > max_steps) throw StepFailure("rk45: step limit exceeded");
    if (dir * (x + h - x1) > 0.0) h = x1 - x;
    const double k1 = f(x, y);
    const double k2 = f(x + a2 * h, y + h * b21 * k1);
    const double k3 = f(x + a3 * h, y + h * (b31 * k1 + b32 * k2));
    const double k4 = f(x + a4 * h, y + h * (b41 * k1 + b42 * k2 + b43 * k3));
    const double k5 =
        f(x + a5 * h, y + h * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4));
    const double k6 = f(x + a6 * h, y + h * (b61 * k1 + b62 * k2 + b63 * k3 +
                                             b64 * k4 + b65 * k5));
    const double dy = h * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
    const double err =
        std::abs(h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6));
    const double tol = abs_tol + rel_tol * std::abs(y);
    if (err <= tol) {
      x += h;
      y += dy;
    }
    const double shrink =
        (err > 0.0) ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
    h *= std::clamp(shrink, 0.1, 5.0);
    if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(x)))
      throw StepFailure("rk45: step size underflow");
  }
  return y;
}

/// Gaussian elimination with partial pivoting for tiny dense systems.
template <int N>
std::array<double, N> solve_dense(std::array<std::array<double, N>, N> A,
                                  std::array<double, N> b) {
  for (int col = 0; col < N; ++col) {
    int piv = col;
    for (int r = col + 1; r < N; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (A[piv][col] == 0.0)
      throw SingularSystem("solve_dense: singular matrix");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < N; ++r) {
      const double m = A[r][col] / A[col][col];
      for (int c = col; c < N; ++c) A[r][c] -= m * A[col][c];
      b[r] -= m * b[col];
    }
  }
  std::array<double, N> x{};
  for (int r = N - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < N; ++c) s -= A[r][c] * x[c];
    x[r] = s / A[r][r];
  }
  return x;
}

/// Least-squares slope of y against x. Throws InsufficientData for n < 2.
inline double fit_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InsufficientData("fit_slope: need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw InsufficientData("fit_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / den;
}

/// Cubic Hermite evaluation on [x0,x1] from endpoint values/derivatives.
inline double hermite(double x, double x0, double x1, double y0, double y1,
                      double d0, double d1) {
  const double w = x1 - x0;
  const double t = (x - x0) / w;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * w * d0 +
         (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * w * d1;
}

inline double hermite_deriv(double x, double x0, double x1, double y0,
                            double y1, double d0, double d1) {
  const double w = x1 - x0;
  const double t = (x - x0) / w;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * w * d0 +
          (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * w * d1) /
         w;
}

}  // namespace hodoshock::num
