#include "sscope/ci_curve.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <functional>

#include "sscope/subresultants.hpp"

namespace sscope {

namespace {

constexpr std::array<std::array<int, 4>, 6> kFrameCharts = {{
    // {piv0, piv1, free0, free1}
    {0, 1, 2, 3},
    {0, 2, 1, 3},
    {0, 3, 1, 2},
    {1, 2, 0, 3},
    {1, 3, 0, 2},
    {2, 3, 0, 1},
}};

MPoly embed_vars(const MPoly& p, int nv) {
  MPoly out(nv);
  for (const auto& t : p.terms()) {
    std::vector<int> e(nv, 0);
    std::copy(t.exps.begin(), t.exps.end(), e.begin());
    out.add_term(e, t.c);
  }
  return out;
}

/// Coefficients (in s^(n-m) t^m order) of F(s P(x) + t Q(x)) where P, Q are
/// the two rows of the chart frame; entries are polynomials in the 4 chart
/// variables.
std::vector<MPoly> restrict_symbolic(const SurfacePoly& f, const std::array<int, 4>& ch) {
  const int n = f.degree;
  std::array<MPoly, 4> P, Q;
  for (int i = 0; i < 4; ++i) {
    P[i] = MPoly(4);
    Q[i] = MPoly(4);
  }
  P[ch[0]] = MPoly::constant(4, CD(1, 0));
  Q[ch[1]] = MPoly::constant(4, CD(1, 0));
  P[ch[2]] = MPoly::variable(4, 0);
  P[ch[3]] = MPoly::variable(4, 1);
  Q[ch[2]] = MPoly::variable(4, 2);
  Q[ch[3]] = MPoly::variable(4, 3);

  std::vector<MPoly> acc(n + 1, MPoly(4));
  for (const auto& term : f.poly.terms()) {
    // Product over i of (P_i s + Q_i t)^{e_i}, tracked as a vector indexed
    // by t-degree.
    std::vector<MPoly> cur(1, MPoly::constant(4, term.c));
    for (int i = 0; i < 4; ++i) {
      for (int rep = 0; rep < term.exps[i]; ++rep) {
        std::vector<MPoly> nxt(cur.size() + 1, MPoly(4));
        for (std::size_t m = 0; m < cur.size(); ++m) {
          nxt[m] += cur[m] * P[i];
          nxt[m + 1] += cur[m] * Q[i];
        }
        cur = std::move(nxt);
      }
    }
    for (int m = 0; m <= n; ++m) acc[m] += cur[m];
  }
  return acc;
}

LineP3 line_of_frame_chart(const std::array<int, 4>& ch, const std::vector<CD>& x) {
  Vec4 p = Vec4::Zero(), q = Vec4::Zero();
  p(ch[0]) = CD(1, 0);
  p(ch[2]) = x[0];
  p(ch[3]) = x[1];
  q(ch[1]) = CD(1, 0);
  q(ch[2]) = x[2];
  q(ch[3]) = x[3];
  return LineP3::from_frame(p, q);
}

double mpoly_residual_at(const MPoly& p, const std::vector<CD>& x) {
  double scale = 1.0;
  for (const auto& t : p.terms()) {
    double m = std::abs(t.c);
    for (int i = 0; i < p.nvars(); ++i) m *= std::pow(std::abs(x[i]), t.exps[i]);
    scale += m;
  }
  return std::abs(p.eval(x)) / scale;
}

void sort_records(std::vector<SecantRecord>& recs) {
  std::sort(recs.begin(), recs.end(), [](const SecantRecord& a, const SecantRecord& b) {
    const Vec6 pa = a.line.canonical_plucker();
    const Vec6 pb = b.line.canonical_plucker();
    for (int i = 0; i < 6; ++i) {
      if (pa(i).real() != pb(i).real()) return pa(i).real() < pb(i).real();
      if (pa(i).imag() != pb(i).imag()) return pa(i).imag() < pb(i).imag();
    }
    return false;
  });
}

struct CiScan {
  std::vector<SecantRecord> records;
  bool nonfinite = false;
};

/// Lines lying on the surface: vanishing of all restricted coefficients,
/// squared up to four random combinations per chart.
CiScan lines_on_surface(const CICurve& c, const SurfacePoly& f, int min_len,
                        const SecantOptions& opt, std::uint64_t salt) {
  CiScan out;
  for (int chart = 0; chart < 6; ++chart) {
    std::vector<MPoly> coeffs = restrict_symbolic(f, kFrameCharts[chart]);
    Rng rng(opt.seed ^ (salt + 0x51ull * chart));
    PolySystem sys;
    sys.n_vars = 4;
    for (int r = 0; r < 4; ++r) {
      MPoly combo(4);
      for (const auto& cf : coeffs) combo += cf * rng.gauss_complex();
      combo.normalize();
      sys.polys.push_back(std::move(combo));
    }
    SolveOptions sopt = opt.solve;
    sopt.seed = opt.seed ^ (salt + 0x77ull * chart);
    SolveResult res = solve_square_system(sys, sopt);
    int fresh = 0;
    for (const auto& sol : res.solutions) {
      double worst = 0;
      for (const auto& cf : coeffs) worst = std::max(worst, mpoly_residual_at(cf, sol));
      if (worst > opt.verify_residual) continue;
      LineP3 line;
      try {
        line = line_of_frame_chart(kFrameCharts[chart], sol);
      } catch (const LineError&) {
        continue;
      }
      IntersectionDivisor idiv;
      try {
        idiv = ci_intersection_divisor(c, line);
      } catch (const std::exception&) {
        continue;
      }
      if (idiv.length < min_len || idiv.residual > opt.verify_residual) continue;
      bool dup = false;
      for (auto& r : out.records)
        if (line_distance(r.line, line) <= opt.line_dedup) {
          dup = true;
          break;
        }
      if (!dup) {
        SecantRecord rec;
        rec.line = line;
        rec.divisor = idiv.divisor;
        rec.length = idiv.length;
        rec.residual = std::max(idiv.residual, worst);
        out.records.push_back(std::move(rec));
        ++fresh;
      }
    }
    if (res.diag.nonfinite_suspect && fresh > opt.nonfinite_absorb_cap)
      out.nonfinite = true;
  }
  sort_records(out.records);
  return out;
}

/// Cofactor system at level j: restricted forms rA, rB acquire degree-
/// (a-j) and (b-j) cofactors p, q with rA q - rB p = 0.
CiScan scan_ci_level(const CICurve& c, int j, const SecantOptions& opt) {
  CiScan out;
  const int a = c.a(), b = c.b();
  for (int chart = 0; chart < 6; ++chart) {
    std::vector<MPoly> ra = restrict_symbolic(c.Fa, kFrameCharts[chart]);
    std::vector<MPoly> rb = restrict_symbolic(c.Fb, kFrameCharts[chart]);
    const int nq = b - j + 1, np = a - j + 1;
    const int nv = 4 + nq + np;
    const int qbase = 4, pbase = 4 + nq;

    std::vector<MPoly> eqs;
    for (int coef = 0; coef <= a + b - j; ++coef) {
      MPoly e(nv);
      for (int m = std::max(0, coef - (nq - 1)); m <= std::min(a, coef); ++m) {
        MPoly term = embed_vars(ra[m], nv) * MPoly::variable(nv, qbase + coef - m);
        e += term;
      }
      for (int m = std::max(0, coef - (np - 1)); m <= std::min(b, coef); ++m) {
        MPoly term = embed_vars(rb[m], nv) * MPoly::variable(nv, pbase + coef - m);
        term *= CD(-1.0, 0.0);
        e += term;
      }
      e.normalize();
      eqs.push_back(std::move(e));
    }

    Rng rng(opt.seed ^ (0xC1ull + 0x9ull * j + chart));
    const int target = nv - 1;
    PolySystem sys;
    sys.n_vars = nv;
    const int nb = static_cast<int>(eqs.size());
    if (nb > target) {
      for (int r = 0; r < target; ++r) {
        MPoly combo(nv);
        for (const auto& e : eqs) combo += e * rng.gauss_complex();
        combo.normalize();
        sys.polys.push_back(std::move(combo));
      }
    } else {
      sys.polys = eqs;
      for (int extra = nb; extra < target; ++extra) {
        MPoly slice = MPoly::constant(nv, rng.gauss_complex());
        for (int i = 0; i < 4; ++i)
          slice += MPoly::variable(nv, i) * rng.gauss_complex();
        sys.polys.push_back(std::move(slice));
      }
    }
    MPoly norm = MPoly::constant(nv, CD(-1.0, 0.0));
    for (int i = 4; i < nv; ++i) norm += MPoly::variable(nv, i) * rng.gauss_complex();
    sys.polys.push_back(std::move(norm));

    SolveOptions sopt = opt.solve;
    sopt.seed = opt.seed ^ (0xABull + (static_cast<std::uint64_t>(j) << 12) + chart);
    SolveResult res = solve_square_system(sys, sopt);
    int fresh = 0;
    for (const auto& sol : res.solutions) {
      LineP3 line;
      try {
        line = line_of_frame_chart(kFrameCharts[chart], sol);
      } catch (const LineError&) {
        continue;
      }
      IntersectionDivisor idiv;
      try {
        idiv = ci_intersection_divisor(c, line);
      } catch (const std::exception&) {
        continue;
      }
      if (idiv.length < j || idiv.residual > opt.verify_residual) continue;
      bool dup = false;
      for (auto& r : out.records)
        if (line_distance(r.line, line) <= opt.line_dedup) {
          dup = true;
          if (idiv.residual < r.residual) {
            r.divisor = idiv.divisor;
            r.length = idiv.length;
            r.residual = idiv.residual;
            r.line = line;
          }
          break;
        }
      if (!dup) {
        SecantRecord rec;
        rec.line = line;
        rec.divisor = idiv.divisor;
        rec.length = idiv.length;
        rec.residual = idiv.residual;
        out.records.push_back(std::move(rec));
        ++fresh;
      }
    }
    if (res.diag.nonfinite_suspect && fresh > opt.nonfinite_absorb_cap)
      out.nonfinite = true;
  }
  sort_records(out.records);
  return out;
}

}  // namespace

BinaryForm<CD> restrict_to_line(const SurfacePoly& f, const LineP3& line) {
  const int n = f.degree;
  // Powers of the linear forms (P_i s + Q_i t) per coordinate.
  std::array<std::vector<BinaryForm<CD>>, 4> pw;
  for (int i = 0; i < 4; ++i) {
    pw[i].resize(n + 1, BinaryForm<CD>(0, {CD(1, 0)}));
    BinaryForm<CD> lin(1, {line.frame[0](i), line.frame[1](i)});
    for (int e = 1; e <= n; ++e) pw[i][e] = multiply(pw[i][e - 1], lin);
  }
  BinaryForm<CD> out = BinaryForm<CD>::zero(n);
  for (const auto& term : f.poly.terms()) {
    BinaryForm<CD> m(0, {term.c});
    for (int i = 0; i < 4; ++i)
      if (term.exps[i] > 0) m = multiply(m, pw[i][term.exps[i]]);
    out = add(out, m);
  }
  return out;
}

IntersectionDivisor ci_intersection_divisor(const CICurve& c, const LineP3& line,
                                            const RootOptions& ropt) {
  BinaryForm<CD> ra = restrict_to_line(c.Fa, line);
  BinaryForm<CD> rb = restrict_to_line(c.Fb, line);
  const double za_thr = 1e-9 * std::max(c.Fa.poly.coeff_scale(), 1e-300);
  const double zb_thr = 1e-9 * std::max(c.Fb.poly.coeff_scale(), 1e-300);
  const bool za = ra.scale() <= za_thr;
  const bool zb = rb.scale() <= zb_thr;
  if (za && zb)
    throw CurveError("ci_intersection_divisor: line lies on both surfaces");
  IntersectionDivisor out;
  if (za || zb) {
    const BinaryForm<CD>& live = za ? rb : ra;
    out.divisor = roots_of_form(live, ropt);
    out.length = out.divisor.degree();
    double res = 0;
    for (const auto& [p, m] : out.divisor.points) {
      (void)m;
      res = std::max(res, eval_residual(live, p));
    }
    out.residual = res;
    return out;
  }
  CommonDivisor cdv = common_divisor(ra, rb, ropt);
  out.divisor = std::move(cdv.divisor);
  out.length = out.divisor.degree();
  out.residual = cdv.residual;
  return out;
}

int line_intersection_length(const CICurve& c, const LineP3& line) {
  return ci_intersection_divisor(c, line).length;
}

std::vector<SecantRecord> find_k_secants_ci(const CICurve& c, int k,
                                            const SecantOptions& opt) {
  if (k < 3) throw CurveError("find_k_secants_ci: k must be >= 3");
  const int a = c.a(), b = c.b();
  std::vector<SecantRecord> out;
  auto insert = [&](const SecantRecord& r) {
    for (auto& have : out)
      if (line_distance(have.line, r.line) <= opt.line_dedup) {
        if (r.residual < have.residual) have = r;
        return;
      }
    out.push_back(r);
  };

  // Lines on either surface (a k-secant with k > a must lie on F_a).
  if (b >= k) {
    CiScan scan = lines_on_surface(c, c.Fa, k, opt, 0x0Au);
    if (scan.nonfinite)
      throw NonFiniteSecantFamily(
          "find_k_secants_ci: the k-secants sweep a surface (lines on F_a)");
    for (const auto& r : scan.records) insert(r);
  }
  if (a >= k) {
    CiScan scan = lines_on_surface(c, c.Fb, k, opt, 0x0Bu);
    if (scan.nonfinite)
      throw NonFiniteSecantFamily(
          "find_k_secants_ci: the k-secants sweep a surface (lines on F_b)");
    for (const auto& r : scan.records) insert(r);
  }

  // Off-surface lines carry gcd degree <= a.
  for (int j = a; j >= std::max(k, 4); --j) {
    CiScan scan = scan_ci_level(c, j, opt);
    if (scan.nonfinite)
      throw NonFiniteSecantFamily("find_k_secants_ci: non-finite suspect at level " +
                                  std::to_string(j));
    for (const auto& r : scan.records)
      if (r.length >= k) insert(r);
  }
  if (k == 3 && a >= 3) {
    CiScan scan = scan_ci_level(c, 3, opt);  // sliced witnesses
    for (const auto& r : scan.records)
      if (r.length >= 3) insert(r);
  }
  for (auto& r : out) r.proper = (r.length == k);
  sort_records(out);
  return out;
}

SecantOrder secant_order_ci(const CICurve& c, const SecantOptions& opt) {
  const int a = c.a(), b = c.b();
  // Lines on F_a meet the curve in length b, the maximum possible.
  {
    CiScan scan = lines_on_surface(c, c.Fa, b, opt, 0x0Au);
    if (!scan.records.empty()) {
      SecantOrder so;
      so.l = b;
      for (auto r : scan.records) {
        r.maximal = true;
        r.proper = true;
        so.witnesses.push_back(std::move(r));
      }
      return so;
    }
  }
  if (a < b) {
    CiScan scan = lines_on_surface(c, c.Fb, a, opt, 0x0Bu);
    if (!scan.records.empty() && a >= 3) {
      // A line on F_b realizes length a; longer secants were ruled out
      // above, but off-surface lines might still reach length a; merge.
      SecantOrder so;
      so.l = a;
      for (auto r : scan.records) {
        r.maximal = true;
        r.proper = true;
        so.witnesses.push_back(std::move(r));
      }
      if (a >= 4) {
        CiScan more = scan_ci_level(c, a, opt);
        for (auto r : more.records)
          if (r.length == a) {
            bool dup = false;
            for (const auto& have : so.witnesses)
              if (line_distance(have.line, r.line) <= opt.line_dedup) dup = true;
            if (!dup) {
              r.maximal = true;
              r.proper = true;
              so.witnesses.push_back(std::move(r));
            }
          }
      }
      return so;
    }
  }
  for (int j = std::min(a, a); j >= 4; --j) {
    CiScan scan = scan_ci_level(c, j, opt);
    if (scan.nonfinite)
      throw NonFiniteSecantFamily("secant_order_ci: non-finite suspect at level " +
                                  std::to_string(j));
    if (scan.records.empty()) continue;
    SecantOrder so;
    for (const auto& r : scan.records) so.l = std::max(so.l, r.length);
    for (auto r : scan.records)
      if (r.length == so.l) {
        r.maximal = true;
        r.proper = true;
        so.witnesses.push_back(std::move(r));
      }
    return so;
  }
  if (a >= 3) {
    CiScan scan = scan_ci_level(c, 3, opt);
    if (!scan.records.empty()) {
      SecantOrder so;
      so.l = 3;
      for (auto r : scan.records)
        if (r.length == 3) {
          r.maximal = true;
          r.proper = true;
          so.witnesses.push_back(std::move(r));
        }
      return so;
    }
  }
  return SecantOrder{};
}

std::vector<std::vector<int>> monomials_of_degree(int nvars, int deg) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(nvars, 0);
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == nvars - 1) {
      cur[var] = left;
      out.push_back(cur);
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[var] = e;
      rec(var + 1, left - e);
    }
  };
  rec(0, deg);
  return out;
}

SurfacePoly random_surface(int degree, Rng& rng, bool integer_coeffs) {
  SurfacePoly f;
  f.degree = degree;
  f.poly = MPoly(4);
  for (const auto& e : monomials_of_degree(4, degree)) {
    CD c = integer_coeffs ? CD(double(rng.uniform_int(-9, 9)), 0.0)
                          : rng.gauss_complex();
    if (c != CD(0, 0)) f.poly.add_term(e, c);
  }
  f.poly.normalize();
  if (f.poly.is_zero()) f.poly.add_term(std::vector<int>{degree, 0, 0, 0}, CD(1, 0));
  return f;
}

std::vector<Vec4> sample_curve_points(const CICurve& c, int want, std::uint64_t seed) {
  std::vector<Vec4> pts;
  Rng rng(seed);
  const int ab = c.a() * c.b();
  int guard = 0;
  while (static_cast<int>(pts.size()) < want && guard++ < 4 * (want / std::max(ab, 1) + 4)) {
    // Random plane chart: x = u e1' + v e2' + e3' with a random unitary-ish frame.
    Eigen::Matrix<CD, 4, 3> B;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 3; ++j) B(i, j) = rng.gauss_complex();
    PolySystem sys;
    sys.n_vars = 2;
    for (const SurfacePoly* f : {&c.Fa, &c.Fb}) {
      MPoly e(2);
      for (const auto& term : f->poly.terms()) {
        // substitute x_i = B(i,0) u + B(i,1) v + B(i,2)
        MPoly m = MPoly::constant(2, term.c);
        for (int i = 0; i < 4; ++i)
          for (int rep = 0; rep < term.exps[i]; ++rep) {
            MPoly lin = MPoly::constant(2, B(i, 2));
            lin += MPoly::variable(2, 0) * B(i, 0);
            lin += MPoly::variable(2, 1) * B(i, 1);
            m *= lin;
          }
        e += m;
      }
      e.normalize();
      sys.polys.push_back(std::move(e));
    }
    SolveOptions sopt;
    sopt.seed = rng.bits();
    try {
      SolveResult res = solve_square_system(sys, sopt);
      for (const auto& sol : res.solutions) {
        Vec4 x;
        for (int i = 0; i < 4; ++i) x(i) = B(i, 0) * sol[0] + B(i, 1) * sol[1] + B(i, 2);
        pts.push_back(x.normalized());
        if (static_cast<int>(pts.size()) >= want) break;
      }
    } catch (const SolverFailure&) {
      continue;
    }
  }
  return pts;
}

namespace {

/// Smoothness screen: no common zero of {F_a, F_b, 2x2 Jacobian minors} in
/// any affine chart of P^3 (squared-up solve, candidates verified).
bool smoothness_screen_solver(const CICurve& c, std::uint64_t seed) {
  std::array<MPoly, 4> grad_a, grad_b;
  for (int i = 0; i < 4; ++i) {
    grad_a[i] = c.Fa.poly.derivative(i);
    grad_b[i] = c.Fb.poly.derivative(i);
  }
  std::vector<MPoly> full;
  full.push_back(c.Fa.poly);
  full.push_back(c.Fb.poly);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      MPoly m = grad_a[i] * grad_b[j] - grad_a[j] * grad_b[i];
      m.normalize();
      full.push_back(std::move(m));
    }

  for (int chartv = 0; chartv < 4; ++chartv) {
    // Substitute x_chartv = 1, keep the other three variables.
    std::vector<MPoly> sub;
    for (const auto& p : full) {
      MPoly q(3);
      for (const auto& t : p.terms()) {
        std::vector<int> e;
        for (int i = 0; i < 4; ++i)
          if (i != chartv) e.push_back(t.exps[i]);
        q.add_term(e, t.c);
      }
      q.normalize();
      sub.push_back(std::move(q));
    }
    Rng rng(seed + 0x600Dull * (chartv + 1));
    PolySystem sys;
    sys.n_vars = 3;
    for (int r = 0; r < 3; ++r) {
      MPoly combo(3);
      for (const auto& p : sub) combo += p * rng.gauss_complex();
      combo.normalize();
      sys.polys.push_back(std::move(combo));
    }
    SolveOptions sopt;
    sopt.seed = seed + 31 * chartv;
    SolveResult res;
    try {
      res = solve_square_system(sys, sopt);
    } catch (const SolverFailure&) {
      return false;  // cannot certify; resample the curve
    }
    for (const auto& sol : res.solutions) {
      double worst = 0;
      for (const auto& p : sub) worst = std::max(worst, mpoly_residual_at(p, sol));
      if (worst <= 1e-8) return false;  // verified singular point
    }
  }
  return true;
}

bool smoothness_screen_samples(const CICurve& c, std::uint64_t seed) {
  auto pts = sample_curve_points(c, 10000, seed);
  if (pts.empty()) return false;
  for (const auto& x : pts) {
    Eigen::Matrix<CD, 2, 4> J;
    std::vector<CD> xv{x(0), x(1), x(2), x(3)};
    for (int i = 0; i < 4; ++i) {
      J(0, i) = c.Fa.poly.derivative(i).eval(xv);
      J(1, i) = c.Fb.poly.derivative(i).eval(xv);
    }
    Eigen::JacobiSVD<Eigen::Matrix<CD, 2, 4>> svd(J);
    if (svd.singularValues()(1) < 1e-8 * svd.singularValues()(0)) return false;
  }
  return true;
}

bool common_factor_screen(const CICurve& c, std::uint64_t seed) {
  // Generic restrictions of coprime surfaces are coprime.
  Rng rng(seed ^ 0xFACull);
  for (int trial = 0; trial < 3; ++trial) {
    Vec4 p, q;
    for (int i = 0; i < 4; ++i) {
      p(i) = rng.gauss_complex();
      q(i) = rng.gauss_complex();
    }
    LineP3 line = LineP3::from_frame(p, q);
    try {
      if (gcd_degree(restrict_to_line(c.Fa, line), restrict_to_line(c.Fb, line)) != 0)
        return false;
    } catch (const std::exception&) {
      return false;
    }
  }
  return true;
}

}  // namespace

CICurve random_smooth_ci(int a, int b, std::uint64_t seed) {
  if (a < 2 || a > b) throw ConstructError("random_smooth_ci: need 2 <= a <= b");
  for (int attempt = 0; attempt < 64; ++attempt) {
    const std::uint64_t s = seed + 0x9E37ull * attempt;
    Rng rng(s);
    CICurve c;
    c.Fa = random_surface(a, rng, true);
    c.Fb = random_surface(b, rng, true);
    if (!common_factor_screen(c, s)) continue;
    if (a + b <= 9) {
      if (!smoothness_screen_solver(c, s)) continue;
      c.smoothness = SmoothnessStatus::SolverScreened;
    } else {
      if (!smoothness_screen_samples(c, s)) continue;
      c.smoothness = SmoothnessStatus::VerifiedAtSamples;
    }
    return c;
  }
  throw ConstructError("random_smooth_ci: retry budget exhausted");
}

PlantedCI construct_ci_with_secant_line(int a, int b, std::uint64_t seed) {
  if (a < 4 || a > b)
    throw ConstructError("construct_ci_with_secant_line: need 4 <= a <= b");
  std::string trail;
  for (int attempt = 0; attempt < 64; ++attempt) {
    const std::uint64_t s = seed + 0xB0Bull * attempt;
    Rng rng(s);
    Vec4 p, q;
    for (int i = 0; i < 4; ++i) {
      p(i) = rng.gauss_complex();
      q(i) = rng.gauss_complex();
    }
    LineP3 line = LineP3::from_frame(p, q);

    // F_a = A G + B H with (A, B) the line's dual forms.
    auto linform = [&](const Vec4& v) {
      MPoly m(4);
      for (int i = 0; i < 4; ++i) m += MPoly::variable(4, i) * v(i);
      return m;
    };
    SurfacePoly G = random_surface(a - 1, rng, false);
    SurfacePoly H = random_surface(a - 1, rng, false);
    CICurve c;
    c.Fa.degree = a;
    c.Fa.poly = linform(line.dual[0]) * G.poly + linform(line.dual[1]) * H.poly;
    c.Fa.poly.normalize();
    c.Fb = random_surface(b, rng, false);

    if (c.Fa.poly.is_zero()) continue;
    if (!common_factor_screen(c, s)) {
      trail += std::to_string(s) + " ";
      continue;
    }
    if (a + b <= 9) {
      if (!smoothness_screen_solver(c, s)) {
        trail += std::to_string(s) + " ";
        continue;
      }
      c.smoothness = SmoothnessStatus::SolverScreened;
    } else {
      if (!smoothness_screen_samples(c, s)) {
        trail += std::to_string(s) + " ";
        continue;
      }
      c.smoothness = SmoothnessStatus::VerifiedAtSamples;
    }

    int len;
    try {
      len = line_intersection_length(c, line);
    } catch (const std::exception&) {
      trail += std::to_string(s) + " ";
      continue;
    }
    if (len != b) {
      trail += std::to_string(s) + " ";
      continue;
    }
    PlantedCI out;
    out.curve = std::move(c);
    out.line = line;
    out.length = len;
    out.ab_equal_warning = (a == b);
    out.accepted_seed = s;
    return out;
  }
  throw ConstructError("construct_ci_with_secant_line: retry budget exhausted; seeds: " +
                       trail);
}

long long hilbert_dim_ci(int a, int b) {
  if (a < 1 || a > b) throw CurveError("hilbert_dim_ci: need 1 <= a <= b");
  auto h0 = [](int n) -> long long {
    if (n < 0) return 0;
    return static_cast<long long>(n + 3) * (n + 2) * (n + 1) / 6;
  };
  if (a == b) return 2 * h0(a) - 4;
  return h0(a) + h0(b) - h0(b - a) - 2;
}

}  // namespace sscope
