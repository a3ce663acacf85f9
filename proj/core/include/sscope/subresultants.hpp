#pragma once

#include <vector>

#include "sscope/binary_form.hpp"

namespace sscope {

struct GcdAmbiguous : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

/// Dense determinant with magnitude-based partial pivoting. Works for both
/// exact rationals (any nonzero pivot is fine) and complex doubles.
template <class K>
K determinant(std::vector<std::vector<K>> m) {
  const int n = static_cast<int>(m.size());
  K det(1);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    double best = 0;
    for (int r = c; r < n; ++r) {
      const double a = abs_value(m[r][c]);
      if (a > best) {
        best = a;
        piv = r;
      }
    }
    if (piv < 0 || is_zero(m[piv][c])) return K(0);
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < n; ++r) {
      if (is_zero(m[r][c])) continue;
      K f = m[r][c] / m[c][c];
      for (int j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

template <class K>
int true_degree(const std::vector<K>& desc, double rel_tol) {
  double sc = 0;
  for (const auto& c : desc) sc = std::max(sc, abs_value(c));
  int lead = 0;
  const int n = static_cast<int>(desc.size());
  if constexpr (field_of<K>::exact) {
    while (lead < n && is_zero(desc[lead])) ++lead;
  } else {
    while (lead < n && abs_value(desc[lead]) <= rel_tol * sc) ++lead;
  }
  return n - 1 - lead;  // -1 when identically zero
}

/// Principal subresultant coefficient psc_k of two univariate polynomials
/// given by descending coefficient arrays of formal degrees m, n. psc_0 is
/// the resultant; psc_k is the determinant of the (m+n-2k)-sized minor of
/// the Sylvester arrangement keeping the columns of degrees m+n-k-1 .. k.
template <class K>
K psc(const std::vector<K>& a, int m, const std::vector<K>& b, int n, int k) {
  const int sz = m + n - 2 * k;
  std::vector<std::vector<K>> mat(sz, std::vector<K>(sz, K(0)));
  for (int r = 0; r < n - k; ++r)
    for (int u = 0; u <= m; ++u) {
      const int col = r + u;
      if (col < sz) mat[r][col] = a[u];
    }
  for (int r = 0; r < m - k; ++r)
    for (int u = 0; u <= n; ++u) {
      const int col = r + u;
      if (col < sz) mat[n - k + r][col] = b[u];
    }
  return determinant(std::move(mat));
}

/// Exact remainder of A by B (descending coefficients, lc(B) != 0).
template <class K>
std::vector<K> poly_rem(std::vector<K> a, const std::vector<K>& b) {
  const int m = static_cast<int>(a.size()) - 1;
  const int n = static_cast<int>(b.size()) - 1;
  for (int i = 0; i <= m - n; ++i) {
    if (is_zero(a[i])) continue;
    K f = a[i] / b[0];
    for (int j = 0; j <= n; ++j) a[i + j] -= f * b[j];
    a[i] = K(0);
  }
  // Strip the (now zero) leading part down to degree n-1.
  std::vector<K> r(a.end() - std::min<int>(n, m + 1), a.end());
  return r;
}

/// Degree of gcd of two exact univariate polynomials via Euclid.
inline int euclid_gcd_degree(std::vector<Rat> a, std::vector<Rat> b) {
  auto strip = [](std::vector<Rat>& p) {
    std::size_t i = 0;
    while (i < p.size() && is_zero(p[i])) ++i;
    p.erase(p.begin(), p.begin() + i);
  };
  strip(a);
  strip(b);
  if (a.empty()) return static_cast<int>(b.size()) - 1;
  if (b.empty()) return static_cast<int>(a.size()) - 1;
  while (true) {
    if (a.size() < b.size()) std::swap(a, b);
    if (b.size() == 1) return 0;  // nonzero constant
    std::vector<Rat> r = poly_rem(a, b);
    strip(r);
    if (r.empty()) return static_cast<int>(b.size()) - 1;
    a = std::move(b);
    b = std::move(r);
  }
}

}  // namespace detail

/// Principal subresultant coefficients sres_0 (the resultant) through
/// sres_{min(deg f, deg g)-1} of two binary forms at their stated degrees.
/// Each entry is a polynomial function of the input coefficients.
template <class K>
std::vector<K> principal_subresultants(const BinaryForm<K>& f, const BinaryForm<K>& g) {
  if (f.is_zero() || g.is_zero())
    throw FormError("principal_subresultants: zero form");
  if (f.degree < 1 || g.degree < 1)
    throw FormError("principal_subresultants: degrees must be >= 1");
  const int kmax = std::min(f.degree, g.degree);
  std::vector<K> out;
  out.reserve(kmax);
  for (int k = 0; k < kmax; ++k)
    out.push_back(detail::psc(f.coeffs, f.degree, g.coeffs, g.degree, k));
  return out;
}

struct GcdOptions {
  double zero_tol = 1e-8;     // scale-aware subresultant zero threshold
  double trim_tol = 1e-11;    // leading-coefficient trim, relative
  double margin_hi = 10.0;    // |sres_k| must clear threshold by this factor
  double margin_lo = 0.1;     // "zero" entries must stay below by this factor
};

/// Degree of gcd(f, g) as binary forms (multiplicity at [1:0] included).
/// Exact Euclidean algorithm over the rationals.
inline int gcd_degree(const BinaryForm<Rat>& f, const BinaryForm<Rat>& g) {
  if (f.is_zero() || g.is_zero()) throw FormError("gcd_degree: zero form");
  const int vf = multiplicity_at_infinity(f);
  const int vg = multiplicity_at_infinity(g);
  std::vector<Rat> a(f.coeffs.begin() + vf, f.coeffs.end());
  std::vector<Rat> b(g.coeffs.begin() + vg, g.coeffs.end());
  return std::min(vf, vg) + detail::euclid_gcd_degree(a, b);
}

/// Floating verdict via the vanishing pattern of principal subresultants of
/// the trimmed (true-degree) dehomogenizations: the answer is the smallest k
/// with sres_k decisively nonzero while sres_0..sres_{k-1} are decisively
/// zero under thresholds scaled by the subresultant homogeneity degrees.
/// In-between magnitudes raise GcdAmbiguous rather than being resolved.
inline int gcd_degree(const BinaryForm<CD>& f, const BinaryForm<CD>& g,
                      const GcdOptions& opt = {}) {
  if (f.scale() == 0 || g.scale() == 0) throw FormError("gcd_degree: zero form");
  const int df = detail::true_degree(f.coeffs, opt.trim_tol);
  const int dg = detail::true_degree(g.coeffs, opt.trim_tol);
  const int vf = f.degree - df;
  const int vg = g.degree - dg;
  const int vshare = std::min(vf, vg);
  if (df == 0 || dg == 0) return vshare;

  std::vector<CD> a(f.coeffs.begin() + vf, f.coeffs.end());
  std::vector<CD> b(g.coeffs.begin() + vg, g.coeffs.end());
  double na = 0, nb = 0;
  for (const auto& c : a) na = std::max(na, abs_value(c));
  for (const auto& c : b) nb = std::max(nb, abs_value(c));

  const int kmax = std::min(df, dg);
  std::vector<double> ratio(kmax);
  for (int k = 0; k < kmax; ++k) {
    const CD s = detail::psc(a, df, b, dg, k);
    // psc_k is homogeneous of degree dg-k in a and df-k in b.
    const double thr =
        opt.zero_tol * std::pow(na, double(dg - k)) * std::pow(nb, double(df - k));
    ratio[k] = std::abs(s) / thr;
  }
  int k = 0;
  while (k < kmax && ratio[k] < 1.0) ++k;
  if (k == kmax) {
    for (int j = 0; j < kmax; ++j)
      if (ratio[j] > opt.margin_lo)
        throw GcdAmbiguous("gcd_degree: subresultant magnitudes straddle the threshold");
    return vshare + kmax;
  }
  if (ratio[k] < opt.margin_hi)
    throw GcdAmbiguous("gcd_degree: sres_" + std::to_string(k) + " is only weakly nonzero");
  for (int j = 0; j < k; ++j)
    if (ratio[j] > opt.margin_lo)
      throw GcdAmbiguous("gcd_degree: sres_" + std::to_string(j) + " is only weakly zero");
  return vshare + k;
}

}  // namespace sscope
