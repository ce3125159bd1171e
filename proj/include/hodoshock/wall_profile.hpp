#pragma once

// Wedge boundary data B(k) on [flat, sharp): zero at flat, convex and
// increasing, equal to the power tail (sharp - k)^(-alpha) on the last
// delta-window. The blend on [flat, sharp - delta] prescribes the curvature
// shape B'' ~ t^p and matches the tail C^2 exactly.

#include <array>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hodoshock/errors.hpp"

namespace hodoshock {

struct WallEval {
  double B = 0, Bp = 0, Bpp = 0;
};

class WallProfile {
 public:
  enum class Kind { blended, pure_tail, custom };

  WallProfile(double flat, double sharp, double alpha, double delta,
              Kind kind, std::function<WallEval(double)> eval)
      : flat_(flat), sharp_(sharp), alpha_(alpha), delta_(delta), kind_(kind),
        eval_(std::move(eval)) {}

  double flat() const { return flat_; }
  double sharp() const { return sharp_; }
  double alpha() const { return alpha_; }
  double delta() const { return delta_; }
  Kind kind() const { return kind_; }

  WallEval eval(double k) const {
    if (k < flat_ - 1e-12 * (sharp_ - flat_) || k >= sharp_)
      throw OutOfDomain("WallProfile: k outside [flat, sharp)");
    return eval_(k);
  }
  double B(double k) const { return eval(k).B; }
  double Bp(double k) const { return eval(k).Bp; }
  double Bpp(double k) const { return eval(k).Bpp; }

  /// (ln B')'(k); in the tail this is (alpha+1)/(sharp-k).
  double dlogBp(double k) const {
    const WallEval e = eval(k);
    return e.Bpp / e.Bp;
  }

  bool in_tail(double k) const { return k > sharp_ - delta_; }

 private:
  double flat_, sharp_, alpha_, delta_;
  Kind kind_;
  std::function<WallEval(double)> eval_;
};

namespace detail {
inline void check_wall_params(double flat, double sharp, double alpha,
                              double delta) {
  if (!(flat > 0.0 && flat < sharp && sharp < std::sqrt(0.5)))
    throw BadSlope(
        "wall profile: need 0 < flat < sharp < sqrt(1/2) "
        "(gamma = 2 subsonic-arc bound)");
  if (!(alpha > 0.0)) throw BadState("wall profile: alpha must be positive");
  if (!(delta > 0.0 && delta < sharp - flat))
    throw BadState("wall profile: delta must lie in (0, sharp - flat)");
}

inline WallEval tail_eval(double k, double sharp, double alpha) {
  const double w = sharp - k;
  const double b = std::pow(w, -alpha);
  return {b, alpha * b / w, alpha * (alpha + 1.0) * b / (w * w)};
}
}  // namespace detail

/// Profile equal to the power tail on (sharp-delta, sharp) and to a convex
/// curvature-shape blend on [flat, sharp-delta], C^2-matched at the junction
/// with B(flat) = 0 and B'(flat) > 0. Throws BlendNotConvex when no such
/// convex blend exists for the given parameters.
inline WallProfile make_blended_profile(double flat, double sharp,
                                        double alpha, double delta) {
  detail::check_wall_params(flat, sharp, alpha, delta);
  const double L = sharp - delta - flat;
  // Junction data scaled to t = (k - flat)/L on [0, 1].
  const double M0 = std::pow(delta, -alpha);
  const double M1 = L * alpha * std::pow(delta, -alpha - 1.0);
  const double M2 =
      L * L * alpha * (alpha + 1.0) * std::pow(delta, -alpha - 2.0);
  if (!(M1 > M0))
    throw BlendNotConvex(
        "make_blended_profile: alpha*(sharp-delta-flat) <= delta leaves no "
        "room for a convex blend reaching zero at flat");
  const double p = M2 / (M1 - M0) - 2.0;
  if (!(p >= 0.0))
    throw BlendNotConvex("make_blended_profile: curvature exponent negative");
  const double s = M1 - M2 / (p + 1.0);
  if (!(s > 0.0))
    throw BlendNotConvex("make_blended_profile: blend slope at flat is not "
                         "positive");
  auto eval = [=](double k) -> WallEval {
    if (k > sharp - delta) return detail::tail_eval(k, sharp, alpha);
    const double t = (k - flat) / L;
    const double tp = (t > 0.0) ? std::pow(t, p) : (p == 0.0 ? 1.0 : 0.0);
    WallEval e;
    e.B = s * t + M2 * tp * t * t / ((p + 1.0) * (p + 2.0));
    e.Bp = (s + M2 * tp * t / (p + 1.0)) / L;
    e.Bpp = M2 * tp / (L * L);
    return e;
  };
  return WallProfile(flat, sharp, alpha, delta, WallProfile::Kind::blended,
                     eval);
}

/// Quick-test profile B = (sharp-k)^(-alpha) - (sharp-flat)^(-alpha): exact
/// power-law derivatives everywhere, but the value in the tail window is off
/// the exact tail by that constant.
inline WallProfile make_pure_tail_profile(double flat, double sharp,
                                          double alpha, double delta) {
  detail::check_wall_params(flat, sharp, alpha, delta);
  const double shift = std::pow(sharp - flat, -alpha);
  auto eval = [=](double k) -> WallEval {
    WallEval e = detail::tail_eval(k, sharp, alpha);
    e.B -= shift;
    return e;
  };
  return WallProfile(flat, sharp, alpha, delta, WallProfile::Kind::pure_tail,
                     eval);
}

struct WallValidationReport {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Samples the profile and checks B(flat) = 0, positivity of B' and B'' and
/// exact tail equality. Failures are reported, not thrown.
inline WallValidationReport validate(const WallProfile& W,
                                     std::size_t n_samples = 10000) {
  WallValidationReport rep;
  auto fail = [&](const std::string& msg) {
    rep.ok = false;
    rep.failures.push_back(msg);
  };
  const double span = W.sharp() - W.flat();
  const double b0 = std::abs(W.B(W.flat()));
  const double scale0 = std::abs(W.B(W.sharp() - W.delta()));
  if (b0 > 1e-12 * std::max(1.0, scale0)) {
    std::ostringstream os;
    os << "B(flat) = " << b0 << " (expected 0)";
    fail(os.str());
  }
  std::size_t bad_bp = 0, bad_bpp = 0, bad_tail = 0;
  double first_bad_bp = 0, first_bad_bpp = 0, first_bad_tail = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double k =
        W.flat() + span * (1.0 - 1e-9) * (i + 0.5) / n_samples;
    const WallEval e = W.eval(k);
    if (!(e.Bp > 0.0)) {
      if (bad_bp++ == 0) first_bad_bp = k;
    }
    if (!(e.Bpp > 0.0)) {
      if (bad_bpp++ == 0) first_bad_bpp = k;
    }
    if (W.in_tail(k)) {
      const double tail = std::pow(W.sharp() - k, -W.alpha());
      if (std::abs(e.B - tail) > 1e-12 * tail) {
        if (bad_tail++ == 0) first_bad_tail = k;
      }
    }
  }
  if (bad_bp) {
    std::ostringstream os;
    os << "B' <= 0 at " << bad_bp << " samples, first at k = " << first_bad_bp;
    fail(os.str());
  }
  if (bad_bpp) {
    std::ostringstream os;
    os << "B'' <= 0 at " << bad_bpp << " samples, first at k = "
       << first_bad_bpp;
    fail(os.str());
  }
  if (bad_tail) {
    std::ostringstream os;
    os << "tail mismatch at " << bad_tail << " samples, first at k = "
       << first_bad_tail;
    fail(os.str());
  }
  return rep;
}

}  // namespace hodoshock
