#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "sscope/scalar.hpp"

namespace sscope {

struct FormError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Point of the projective line over K, stored as a coordinate pair (s, t),
/// not both zero. Canonical form: over floats the coordinate of largest
/// magnitude equals 1, over exact rationals the first nonzero one does.
template <class K>
struct PointP1 {
  K s{};
  K t{};

  PointP1() = default;
  PointP1(K s_, K t_) : s(std::move(s_)), t(std::move(t_)) {
    if (is_zero(s) && is_zero(t)) throw FormError("PointP1: (0,0) is not a point");
  }

  PointP1 canonical() const {
    PointP1 p = *this;
    if constexpr (field_of<K>::exact) {
      if (!is_zero(p.s)) {
        p.t /= p.s;
        p.s = K(1);
      } else {
        p.s = K(0);
        p.t = K(1);
      }
    } else {
      if (abs_value(p.s) >= abs_value(p.t)) {
        p.t /= p.s;
        p.s = K(1);
      } else {
        p.s /= p.t;
        p.t = K(1);
      }
    }
    return p;
  }

  static PointP1 infinity() { return PointP1(K(1), K(0)); }
  static PointP1 zero() { return PointP1(K(0), K(1)); }
};

/// Chordal distance |s1 t2 - s2 t1| / (|p1| |p2|); metric on P^1 without
/// chart-boundary artifacts.
inline double p1_distance(const PointP1<CD>& a, const PointP1<CD>& b) {
  const double na = std::hypot(std::abs(a.s), std::abs(a.t));
  const double nb = std::hypot(std::abs(b.s), std::abs(b.t));
  return std::abs(a.s * b.t - b.s * a.t) / (na * nb);
}

inline bool p1_equal(const PointP1<Rat>& a, const PointP1<Rat>& b) {
  return is_zero(a.s * b.t - b.s * a.t);
}
inline bool p1_equal(const PointP1<CD>& a, const PointP1<CD>& b, double tol = 1e-8) {
  return p1_distance(a, b) <= tol;
}

/// Effective divisor on P^1: support points with positive multiplicities.
template <class K>
struct DivisorP1 {
  std::vector<std::pair<PointP1<K>, int>> points;

  int degree() const {
    int d = 0;
    for (const auto& [p, m] : points) d += m;
    return d;
  }
  void add(const PointP1<K>& p, int mult) {
    if (mult <= 0) throw FormError("DivisorP1: multiplicity must be positive");
    for (auto& [q, m] : points) {
      bool same;
      if constexpr (field_of<K>::exact)
        same = p1_equal(q, p);
      else
        same = p1_equal(q, p);
      if (same) {
        m += mult;
        return;
      }
    }
    points.push_back({p.canonical(), mult});
  }
};

/// Homogeneous polynomial of degree d in two variables s, t;
/// coeffs[i] is the coefficient of s^(d-i) t^i.
template <class K>
struct BinaryForm {
  int degree = 0;
  std::vector<K> coeffs;  // size degree+1

  BinaryForm() : coeffs(1, K(0)) {}
  BinaryForm(int d, std::vector<K> c) : degree(d), coeffs(std::move(c)) {
    if (static_cast<int>(coeffs.size()) != degree + 1)
      throw FormError("BinaryForm: coefficient count != degree+1");
  }
  static BinaryForm zero(int d) { return BinaryForm(d, std::vector<K>(d + 1, K(0))); }

  bool is_zero() const {
    for (const auto& c : coeffs)
      if (!sscope::is_zero(c)) return false;
    return true;
  }
  double scale() const {  // max coefficient magnitude
    double m = 0;
    for (const auto& c : coeffs) m = std::max(m, abs_value(c));
    return m;
  }
};

namespace detail {

// ---- error-free transformations (doubles) ----
inline std::pair<double, double> two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}
inline std::pair<double, double> two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}
// Complex product with a first-order error term.
inline std::pair<CD, CD> two_prod_c(const CD& a, const CD& b) {
  auto [t1, e1] = two_prod(a.real(), b.real());
  auto [t2, e2] = two_prod(a.imag(), b.imag());
  auto [t3, e3] = two_prod(a.real(), b.imag());
  auto [t4, e4] = two_prod(a.imag(), b.real());
  auto [re, e5] = two_sum(t1, -t2);
  auto [im, e6] = two_sum(t3, t4);
  return {CD(re, im), CD(e1 - e2 + e5, e3 + e4 + e6)};
}
inline std::pair<CD, CD> two_sum_c(const CD& a, const CD& b) {
  auto [re, er] = two_sum(a.real(), b.real());
  auto [im, ei] = two_sum(a.imag(), b.imag());
  return {CD(re, im), CD(er, ei)};
}

/// Compensated Horner: evaluates sum coeff[i] x^i for i = 0..n with the
/// accumulated rounding error folded back in at the end.
inline CD comp_horner(const std::vector<CD>& asc, const CD& x) {
  CD acc = asc.back();
  CD err(0.0, 0.0);
  for (int i = static_cast<int>(asc.size()) - 2; i >= 0; --i) {
    auto [p, ep] = two_prod_c(acc, x);
    auto [s, es] = two_sum_c(p, asc[i]);
    acc = s;
    err = err * x + (ep + es);
  }
  return acc + err;
}

template <class K>
K pow_int(K base, int n) {
  K r(1);
  while (n > 0) {
    if (n & 1) r *= base;
    base *= base;
    n >>= 1;
  }
  return r;
}

}  // namespace detail

/// Value of f at p, using the better-conditioned dehomogenization
/// (ratio of modulus <= 1) and compensated Horner over the complex field.
inline CD eval_form(const BinaryForm<CD>& f, const PointP1<CD>& p) {
  const int d = f.degree;
  if (abs_value(p.s) >= abs_value(p.t)) {
    const CD r = p.t / p.s;
    // f = s^d * sum_i c_i r^i
    return detail::comp_horner(f.coeffs, r) * detail::pow_int(p.s, d);
  }
  const CD r = p.s / p.t;
  std::vector<CD> asc(f.coeffs.rbegin(), f.coeffs.rend());  // c_d + c_{d-1} r + ...
  return detail::comp_horner(asc, r) * detail::pow_int(p.t, d);
}

inline Rat eval_form(const BinaryForm<Rat>& f, const PointP1<Rat>& p) {
  // Exact arithmetic; conditioning is a non-issue over Q.
  Rat v(0);
  for (int i = 0; i <= f.degree; ++i)
    v += f.coeffs[i] * detail::pow_int(p.s, f.degree - i) * detail::pow_int(p.t, i);
  return v;
}

template <class K>
BinaryForm<K> add(const BinaryForm<K>& f, const BinaryForm<K>& g) {
  if (f.degree != g.degree) throw FormError("add: degree mismatch");
  BinaryForm<K> r = f;
  for (int i = 0; i <= f.degree; ++i) r.coeffs[i] += g.coeffs[i];
  return r;
}

template <class K>
BinaryForm<K> scale(const BinaryForm<K>& f, const K& c) {
  BinaryForm<K> r = f;
  for (auto& a : r.coeffs) a *= c;
  return r;
}

template <class K>
BinaryForm<K> multiply(const BinaryForm<K>& f, const BinaryForm<K>& g) {
  BinaryForm<K> r = BinaryForm<K>::zero(f.degree + g.degree);
  for (int i = 0; i <= f.degree; ++i)
    for (int j = 0; j <= g.degree; ++j) r.coeffs[i + j] += f.coeffs[i] * g.coeffs[j];
  return r;
}

/// d/ds and d/dt of a binary form (degree drops by one).
template <class K>
BinaryForm<K> deriv_s(const BinaryForm<K>& f) {
  if (f.degree == 0) return BinaryForm<K>::zero(0);
  BinaryForm<K> r = BinaryForm<K>::zero(f.degree - 1);
  for (int i = 0; i < f.degree; ++i) r.coeffs[i] = K(f.degree - i) * f.coeffs[i];
  return r;
}
template <class K>
BinaryForm<K> deriv_t(const BinaryForm<K>& f) {
  if (f.degree == 0) return BinaryForm<K>::zero(0);
  BinaryForm<K> r = BinaryForm<K>::zero(f.degree - 1);
  for (int i = 1; i <= f.degree; ++i) r.coeffs[i - 1] = K(i) * f.coeffs[i];
  return r;
}

/// The unique (up to scale) form whose divisor is exactly D, leading
/// nonzero coefficient normalized to 1.
template <class K>
BinaryForm<K> form_from_divisor(const DivisorP1<K>& D) {
  if (D.points.empty()) throw FormError("form_from_divisor: empty divisor");
  BinaryForm<K> f(0, {K(1)});
  for (const auto& [p, mult] : D.points) {
    // Linear form vanishing at [s0:t0] is (t0 s - s0 t).
    BinaryForm<K> lin(1, {p.t, -p.s});
    for (int j = 0; j < mult; ++j) f = multiply(f, lin);
  }
  // Normalize leading nonzero coefficient to 1.
  for (auto& c : f.coeffs) {
    if (!is_zero(c)) {
      K lead = c;
      for (auto& a : f.coeffs) a /= lead;
      break;
    }
  }
  return f;
}

/// f composed with the linear substitution (s,t) -> (m00 s + m01 t, m10 s + m11 t).
template <class K>
BinaryForm<K> mobius_transform(const BinaryForm<K>& f, const K& m00, const K& m01,
                               const K& m10, const K& m11) {
  if (is_zero(m00 * m11 - m01 * m10)) throw FormError("mobius_transform: singular matrix");
  const int d = f.degree;
  BinaryForm<K> u(1, {m00, m01});
  BinaryForm<K> v(1, {m10, m11});
  // Powers of u and v.
  std::vector<BinaryForm<K>> up(d + 1, BinaryForm<K>(0, {K(1)})), vp = up;
  for (int i = 1; i <= d; ++i) {
    up[i] = multiply(up[i - 1], u);
    vp[i] = multiply(vp[i - 1], v);
  }
  BinaryForm<K> r = BinaryForm<K>::zero(d);
  for (int i = 0; i <= d; ++i) {
    if (is_zero(f.coeffs[i])) continue;
    r = add(r, scale(multiply(up[d - i], vp[i]), f.coeffs[i]));
  }
  return r;
}

/// Multiplicity of [1:0] in f = number of vanishing leading coefficients
/// (degree minus degree of the dehomogenized polynomial). Over floats the
/// test is relative to the coefficient scale.
template <class K>
int multiplicity_at_infinity(const BinaryForm<K>& f, double rel_tol = 1e-11) {
  if (f.is_zero()) throw FormError("multiplicity_at_infinity: zero form");
  if constexpr (field_of<K>::exact) {
    int v = 0;
    while (is_zero(f.coeffs[v])) ++v;
    return v;
  } else {
    const double thr = rel_tol * f.scale();
    int v = 0;
    while (v <= f.degree && abs_value(f.coeffs[v]) <= thr) ++v;
    return v;
  }
}

}  // namespace sscope
