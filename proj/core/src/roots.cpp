#include "sscope/roots.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace sscope {

namespace {

// Horner value and derivative of a polynomial with descending coefficients.
struct PolyVal {
  CD p, dp;
};
PolyVal horner2(const std::vector<CD>& a, const CD& x) {
  CD p = a[0], dp(0.0, 0.0);
  for (std::size_t i = 1; i < a.size(); ++i) {
    dp = dp * x + p;
    p = p * x + a[i];
  }
  return {p, dp};
}

double poly_scale_at(const std::vector<CD>& a, double ax) {
  double s = 0, xp = 1;
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    s += std::abs(*it) * xp;
    xp *= ax;
  }
  return s;
}

/// Aberth-Ehrlich simultaneous iteration on a descending-coefficient
/// polynomial with nonzero leading and trailing coefficients.
std::vector<CD> aberth(const std::vector<CD>& a, const RootOptions& opt) {
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<CD> x(n);
  Rng rng(opt.seed);
  for (int attempt = 0; attempt <= opt.retries; ++attempt) {
    double r0 = std::pow(std::abs(a[n] / a[0]), 1.0 / n);
    r0 = std::clamp(r0, 1e-3, 1e3);
    for (int i = 0; i < n; ++i) {
      const double ang =
          2.0 * 3.14159265358979323846 * (i + 0.26 + 0.05 * rng.uniform()) / n;
      x[i] = r0 * CD(std::cos(ang), std::sin(ang)) * (1.0 + 0.02 * attempt);
    }
    bool done = false;
    for (int it = 0; it < opt.max_iters && !done; ++it) {
      double worst = 0;
      for (int i = 0; i < n; ++i) {
        auto [p, dp] = horner2(a, x[i]);
        if (std::abs(p) <= 1e-16 * poly_scale_at(a, std::abs(x[i]))) continue;
        CD nr = (std::abs(dp) > 0) ? p / dp : CD(1e-8, 0);
        CD sum(0.0, 0.0);
        for (int j = 0; j < n; ++j)
          if (j != i) sum += CD(1.0, 0.0) / (x[i] - x[j]);
        CD denom = CD(1.0, 0.0) - nr * sum;
        CD w = (std::abs(denom) > 1e-14) ? nr / denom : nr;
        x[i] -= w;
        worst = std::max(worst, std::abs(w) / (1.0 + std::abs(x[i])));
      }
      done = worst < 1e-14;
    }
    // Accept if every residual is small at the working precision.
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      auto [p, dp] = horner2(a, x[i]);
      (void)dp;
      if (std::abs(p) > 1e-9 * poly_scale_at(a, std::abs(x[i]))) {
        ok = false;
        break;
      }
    }
    if (ok) return x;
  }
  throw RootError("aberth: no convergence within retry budget");
}

// Newton polish in whichever chart keeps the working coordinate bounded.
// Works in x = s/t on the descending coefficients when |s| <= |t|,
// else in y = t/s on the reversed ones.
PointP1<CD> polish_point(const std::vector<CD>& desc, PointP1<CD> p, int iters,
                         double tol) {
  std::vector<CD> rev(desc.rbegin(), desc.rend());
  for (int it = 0; it < iters; ++it) {
    p = p.canonical();
    if (std::abs(p.s) <= std::abs(p.t)) {
      CD xx = p.s / p.t;
      auto [v, dv] = horner2(desc, xx);
      if (std::abs(v) <= tol * poly_scale_at(desc, std::abs(xx)))
        return PointP1<CD>(xx, CD(1)).canonical();
      if (std::abs(dv) == 0) break;
      xx -= v / dv;
      p = PointP1<CD>(xx, CD(1));
    } else {
      CD yy = p.t / p.s;
      auto [v, dv] = horner2(rev, yy);
      if (std::abs(v) <= tol * poly_scale_at(rev, std::abs(yy)))
        return PointP1<CD>(CD(1), yy).canonical();
      if (std::abs(dv) == 0) break;
      yy -= v / dv;
      p = PointP1<CD>(CD(1), yy);
    }
  }
  return p.canonical();
}

}  // namespace

double eval_residual(const BinaryForm<CD>& f, const PointP1<CD>& p) {
  const PointP1<CD> q = p.canonical();
  const double as = std::abs(q.s), at = std::abs(q.t);
  double s = 0;
  for (int i = 0; i <= f.degree; ++i)
    s += std::abs(f.coeffs[i]) * std::pow(as, f.degree - i) * std::pow(at, i);
  if (s == 0) return 0;
  return std::abs(eval_form(f, q)) / s;
}

DivisorP1<CD> roots_of_form(const BinaryForm<CD>& f, const RootOptions& opt) {
  if (f.scale() == 0) throw FormError("roots_of_form: zero form");
  const int d = f.degree;
  const double thr = opt.trim_tol * f.scale();

  int v_inf = 0;  // multiplicity of [1:0]
  while (v_inf <= d && std::abs(f.coeffs[v_inf]) <= thr) ++v_inf;
  int v_zero = 0;  // multiplicity of [0:1]
  while (v_zero <= d - v_inf && std::abs(f.coeffs[d - v_zero]) <= thr) ++v_zero;

  DivisorP1<CD> div;
  if (v_inf > 0) div.add(PointP1<CD>::infinity(), v_inf);
  if (v_zero > 0) div.add(PointP1<CD>::zero(), v_zero);

  // Middle factor: descending in x = s/t, nonzero ends.
  std::vector<CD> mid(f.coeffs.begin() + v_inf, f.coeffs.end() - v_zero);
  const int dm = static_cast<int>(mid.size()) - 1;
  if (dm == 0) return div;

  // Solve on the better-conditioned side.
  const bool reversed = std::abs(mid[0]) < std::abs(mid.back());
  std::vector<CD> work = mid;
  if (reversed) std::reverse(work.begin(), work.end());
  std::vector<CD> raw = aberth(work, opt);
  if (reversed)
    for (auto& r : raw) r = CD(1.0, 0.0) / r;

  // Polish in the canonical chart and compute inclusion radii.
  std::vector<PointP1<CD>> pts;
  std::vector<double> radius;
  pts.reserve(dm);
  for (const CD& r : raw) {
    PointP1<CD> p = polish_point(mid, PointP1<CD>(r, CD(1)), 40, opt.polish_tol);
    pts.push_back(p);
    // Newton-correction radius in the bounded chart, used for clustering.
    double rad;
    if (std::abs(p.s) <= std::abs(p.t)) {
      auto [v, dv] = horner2(mid, p.s / p.t);
      rad = (std::abs(dv) > 0) ? dm * std::abs(v / dv) : 1.0;
    } else {
      std::vector<CD> rev(mid.rbegin(), mid.rend());
      auto [v, dv] = horner2(rev, p.t / p.s);
      rad = (std::abs(dv) > 0) ? dm * std::abs(v / dv) : 1.0;
    }
    radius.push_back(std::min(rad, 1.0));
  }

  // Union-find clustering: points belong together when their distance is
  // within the joined inclusion radii (multiple roots scatter far beyond
  // the plain dedup tolerance).
  std::vector<int> parent(dm);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < dm; ++i)
    for (int j = i + 1; j < dm; ++j) {
      const double lim = std::max(opt.dedup_tol, 3.0 * (radius[i] + radius[j]));
      if (p1_distance(pts[i], pts[j]) <= lim) parent[find(i)] = find(j);
    }
  std::vector<std::vector<int>> clusters(dm);
  for (int i = 0; i < dm; ++i) clusters[find(i)].push_back(i);

  for (const auto& cl : clusters) {
    if (cl.empty()) continue;
    // Centroid in the chart of the first member (clusters are tight).
    const PointP1<CD>& p0 = pts[cl[0]];
    const bool t_chart = std::abs(p0.s) <= std::abs(p0.t);
    CD acc(0, 0);
    for (int i : cl) acc += t_chart ? (pts[i].s / pts[i].t) : (pts[i].t / pts[i].s);
    acc /= double(cl.size());
    PointP1<CD> c = t_chart ? PointP1<CD>(acc, CD(1)) : PointP1<CD>(CD(1), acc);
    if (cl.size() == 1) c = polish_point(mid, c, 10, opt.polish_tol);
    div.add(c.canonical(), static_cast<int>(cl.size()));
  }
  return div;
}

CommonDivisor common_divisor(const BinaryForm<CD>& f, const BinaryForm<CD>& g,
                             const RootOptions& opt) {
  if (f.scale() == 0 || g.scale() == 0)
    throw FormError("common_divisor: zero form");
  DivisorP1<CD> da = roots_of_form(f, opt);
  DivisorP1<CD> db = roots_of_form(g, opt);

  CommonDivisor out;
  const double match_tol = 1e-5;
  for (const auto& [pa, ma] : da.points) {
    int best = -1;
    double bestd = match_tol;
    for (int j = 0; j < static_cast<int>(db.points.size()); ++j) {
      const double dd = p1_distance(pa, db.points[j].first);
      if (dd < bestd) {
        bestd = dd;
        best = j;
      }
    }
    if (best < 0) continue;
    const auto& [pb, mb] = db.points[best];
    PointP1<CD> p = pa;
    // Joint Gauss-Newton polish on (f, g) unless pinned at a boundary point.
    const bool boundary =
        p1_distance(p, PointP1<CD>::infinity()) < 1e-12 || p1_distance(p, PointP1<CD>::zero()) < 1e-12;
    if (!boundary) {
      for (int it = 0; it < 20; ++it) {
        p = p.canonical();
        const bool t_chart = std::abs(p.s) <= std::abs(p.t);
        CD x = t_chart ? p.s / p.t : p.t / p.s;
        std::vector<CD> ca = f.coeffs, cb = g.coeffs;
        if (!t_chart) {
          std::reverse(ca.begin(), ca.end());
          std::reverse(cb.begin(), cb.end());
        }
        auto [va, dva] = horner2(ca, x);
        auto [vb, dvb] = horner2(cb, x);
        const double denom = std::norm(dva) + std::norm(dvb);
        if (denom == 0) break;
        const CD step = (std::conj(dva) * va + std::conj(dvb) * vb) / denom;
        x -= step;
        p = t_chart ? PointP1<CD>(x, CD(1)) : PointP1<CD>(CD(1), x);
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
      }
    }
    (void)pb;
    const double res = std::max(eval_residual(f, p), eval_residual(g, p));
    out.residual = std::max(out.residual, res);
    out.divisor.add(p.canonical(), std::min(ma, mb));
  }
  return out;
}

}  // namespace sscope
