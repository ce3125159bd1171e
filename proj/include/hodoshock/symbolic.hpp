#pragma once

// Exact polynomial/rational arithmetic over Q in the five symbols
// (u, v, q, b, c) -- q the limit speed, b and c transcendental markers for
// B' and B'' -- reduced modulo the shock-polar ideal <v^2 - u(q - u)>.
// Equality of rational expressions is decided by cross-multiplication in
// the quotient ring (the ideal is prime, so the quotient is a domain).

#include <array>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "hodoshock/errors.hpp"

namespace hodoshock::sym {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum Var : int { VU = 0, VV = 1, VQ = 2, VB = 3, VC = 4 };

using Mono = std::array<std::uint8_t, 5>;

class PolyQ {
 public:
  PolyQ() = default;

  static PolyQ constant(Rational r) {
    PolyQ p;
    if (r != 0) p.terms_[Mono{0, 0, 0, 0, 0}] = std::move(r);
    return p;
  }
  static PolyQ constant(long n) { return constant(Rational(n)); }

  static PolyQ var(Var i, unsigned exp = 1) {
    PolyQ p;
    Mono m{0, 0, 0, 0, 0};
    m[static_cast<int>(i)] = static_cast<std::uint8_t>(exp);
    p.terms_[m] = 1;
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  PolyQ operator-() const {
    PolyQ r;
    for (const auto& [m, cf] : terms_) r.terms_[m] = -cf;
    return r;
  }

  PolyQ& operator+=(const PolyQ& o) {
    for (const auto& [m, cf] : o.terms_) add_term(m, cf);
    return *this;
  }
  PolyQ& operator-=(const PolyQ& o) {
    for (const auto& [m, cf] : o.terms_) add_term(m, -cf);
    return *this;
  }

  friend PolyQ operator+(PolyQ a, const PolyQ& b) { return a += b; }
  friend PolyQ operator-(PolyQ a, const PolyQ& b) { return a -= b; }

  friend PolyQ operator*(const PolyQ& a, const PolyQ& b) {
    PolyQ r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Mono m;
        for (int i = 0; i < 5; ++i) {
          const int e = ma[i] + mb[i];
          if (e > 250) throw BadState("PolyQ: exponent overflow");
          m[i] = static_cast<std::uint8_t>(e);
        }
        r.add_term(m, ca * cb);
      }
    return r;
  }

  friend PolyQ operator*(const PolyQ& a, const Rational& s) {
    PolyQ r;
    if (s == 0) return r;
    for (const auto& [m, cf] : a.terms_) r.terms_[m] = cf * s;
    return r;
  }
  friend PolyQ operator*(const Rational& s, const PolyQ& a) { return a * s; }

  PolyQ pow(unsigned n) const {
    PolyQ r = constant(1);
    PolyQ base = *this;
    while (n) {
      if (n & 1u) r = r * base;
      base = base * base;
      n >>= 1u;
    }
    return r;
  }

  bool operator==(const PolyQ& o) const { return terms_ == o.terms_; }

  /// Canonical form modulo the circle relation: every v^n with n >= 2 is
  /// replaced by (u(q-u))^(n/2) v^(n mod 2); idempotent.
  PolyQ reduced() const {
    PolyQ r;
    for (const auto& [m, cf] : terms_) {
      const int ev = m[VV];
      if (ev < 2) {
        r.add_term(m, cf);
        continue;
      }
      const int half = ev / 2, rem = ev % 2;
      // (u(q-u))^half = sum_j C(half,j) (-1)^j u^(half+j) q^(half-j)
      BigInt binom = 1;
      for (int j = 0; j <= half; ++j) {
        Mono mm = m;
        mm[VV] = static_cast<std::uint8_t>(rem);
        const int eu = m[VU] + half + j;
        const int eq = m[VQ] + half - j;
        if (eu > 250 || eq > 250)
          throw BadState("PolyQ::reduced: exponent overflow");
        mm[VU] = static_cast<std::uint8_t>(eu);
        mm[VQ] = static_cast<std::uint8_t>(eq);
        Rational term = cf * Rational(binom);
        if (j % 2 == 1) term = -term;
        r.add_term(mm, term);
        binom = binom * (half - j) / (j + 1);
      }
    }
    return r;
  }

  /// Numeric evaluation at (u, v, q, b, c).
  double eval(const std::array<double, 5>& x) const {
    double acc = 0.0;
    for (const auto& [m, cf] : terms_) {
      double t = static_cast<double>(cf);
      for (int i = 0; i < 5; ++i)
        for (int e = 0; e < m[i]; ++e) t *= x[i];
      acc += t;
    }
    return acc;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    static const char* names[5] = {"u", "v", "q", "b", "c"};
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, cf] : terms_) {
      os << (first ? "" : " + ") << cf;
      for (int i = 0; i < 5; ++i) {
        if (m[i] == 0) continue;
        os << "*" << names[i];
        if (m[i] > 1) os << "^" << int(m[i]);
      }
      first = false;
    }
    return os.str();
  }

 private:
  void add_term(const Mono& m, const Rational& cf) {
    if (cf == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, cf);
    } else {
      it->second += cf;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::map<Mono, Rational> terms_;
};

/// Rational expression num/den over the quotient ring.
struct RatQ {
  PolyQ num;
  PolyQ den = PolyQ::constant(1);

  RatQ() = default;
  RatQ(PolyQ n) : num(std::move(n)) {}
  RatQ(PolyQ n, PolyQ d) : num(std::move(n)), den(std::move(d)) {}

  friend RatQ operator+(const RatQ& a, const RatQ& b) {
    return {a.num * b.den + b.num * a.den, a.den * b.den};
  }
  friend RatQ operator-(const RatQ& a, const RatQ& b) {
    return {a.num * b.den - b.num * a.den, a.den * b.den};
  }
  friend RatQ operator*(const RatQ& a, const RatQ& b) {
    return {a.num * b.num, a.den * b.den};
  }
  friend RatQ operator/(const RatQ& a, const RatQ& b) {
    return {a.num * b.den, a.den * b.num};
  }
  RatQ operator-() const { return {-num, den}; }
};

/// Equality in the quotient ring by cross-multiplication.
inline bool rat_eq(const RatQ& a, const RatQ& b) {
  if (a.den.reduced().is_zero() || b.den.reduced().is_zero())
    throw ZeroDenominator("rat_eq: denominator reduces to zero");
  return (a.num * b.den - b.num * a.den).reduced().is_zero();
}

}  // namespace hodoshock::sym
