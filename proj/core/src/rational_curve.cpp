#include "sscope/rational_curve.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <map>

#include "sscope/subresultants.hpp"

namespace sscope {

namespace {

BinaryForm<CD> restricted_form(const RationalCurveMap& c, const Vec4& a) {
  BinaryForm<CD> r = BinaryForm<CD>::zero(c.degree);
  for (int i = 0; i < 4; ++i)
    for (int m = 0; m <= c.degree; ++m) r.coeffs[m] += a(i) * c.forms[i].coeffs[m];
  return r;
}

double mpoly_residual(const MPoly& p, const std::vector<CD>& x) {
  double scale = 1.0;
  for (const auto& t : p.terms()) {
    double m = std::abs(t.c);
    for (int i = 0; i < p.nvars(); ++i) m *= std::pow(std::abs(x[i]), t.exps[i]);
    scale += m;
  }
  return std::abs(p.eval(x)) / scale;
}

// The six row-reduced-echelon charts of pencils in the 4-space of the
// linear system; pivots carry the identity block, free columns the unknowns.
struct PencilChart {
  std::array<int, 2> piv;
  std::array<int, 2> free;
};
constexpr std::array<PencilChart, 6> kPencilCharts = {{
    {{0, 1}, {2, 3}},
    {{0, 2}, {1, 3}},
    {{0, 3}, {1, 2}},
    {{1, 2}, {0, 3}},
    {{1, 3}, {0, 2}},
    {{2, 3}, {0, 1}},
}};

/// Equations of "the chart pencil has a common factor of degree >= j":
/// there are cofactors p, q of degree d-j with g q - h p = 0. All equations
/// are bilinear in (chart variables) x (cofactor coefficients).
PolySystem build_pencil_system(const RationalCurveMap& c, int j,
                               const PencilChart& ch, Rng& rng) {
  const int d = c.degree;
  const int cof = d - j + 1;    // cofactor coefficient count
  const int nv = 4 + 2 * cof;  // chart + q + p
  const int qbase = 4, pbase = 4 + cof;

  std::vector<MPoly> eqs;
  for (int coef = 0; coef <= 2 * d - j; ++coef) {
    MPoly e(nv);
    for (int m = std::max(0, coef - (cof - 1)); m <= std::min(d, coef); ++m) {
      const int l = coef - m;
      // g_m q_l: g_m = f[piv0]_m + x0 f[free0]_m + x1 f[free1]_m
      std::vector<int> e0(nv, 0);
      e0[qbase + l] = 1;
      e.add_term(e0, c.forms[ch.piv[0]].coeffs[m]);
      for (int w = 0; w < 2; ++w) {
        std::vector<int> ew(nv, 0);
        ew[qbase + l] = 1;
        ew[w] = 1;
        e.add_term(ew, c.forms[ch.free[w]].coeffs[m]);
      }
      // -h_m p_l: h_m = f[piv1]_m + x2 f[free0]_m + x3 f[free1]_m
      std::vector<int> f0(nv, 0);
      f0[pbase + l] = 1;
      e.add_term(f0, -c.forms[ch.piv[1]].coeffs[m]);
      for (int w = 0; w < 2; ++w) {
        std::vector<int> fw(nv, 0);
        fw[pbase + l] = 1;
        fw[2 + w] = 1;
        e.add_term(fw, -c.forms[ch.free[w]].coeffs[m]);
      }
    }
    e.normalize();
    eqs.push_back(std::move(e));
  }

  // Square up: one linear normalization on the cofactors, random complex
  // combinations when overdetermined (j > 4), a random slice when j = 3.
  const int target = nv - 1;
  PolySystem sys;
  sys.n_vars = nv;
  const int nb = static_cast<int>(eqs.size());
  if (nb > target) {
    for (int r = 0; r < target; ++r) {
      MPoly combo(nv);
      for (int s = 0; s < nb; ++s) combo += eqs[s] * rng.gauss_complex();
      combo.normalize();
      sys.polys.push_back(std::move(combo));
    }
  } else {
    sys.polys = eqs;
    for (int extra = nb; extra < target; ++extra) {
      MPoly slice = MPoly::constant(nv, rng.gauss_complex());
      for (int i = 0; i < 4; ++i) slice += MPoly::variable(nv, i) * rng.gauss_complex();
      sys.polys.push_back(std::move(slice));
    }
  }
  MPoly norm = MPoly::constant(nv, CD(-1.0, 0.0));
  for (int i = 4; i < nv; ++i) norm += MPoly::variable(nv, i) * rng.gauss_complex();
  sys.polys.push_back(std::move(norm));
  return sys;
}

LineP3 line_of_chart_solution(const PencilChart& ch, const std::vector<CD>& x) {
  Vec4 a = Vec4::Zero(), b = Vec4::Zero();
  a(ch.piv[0]) = CD(1, 0);
  a(ch.free[0]) = x[0];
  a(ch.free[1]) = x[1];
  b(ch.piv[1]) = CD(1, 0);
  b(ch.free[0]) = x[2];
  b(ch.free[1]) = x[3];
  return LineP3::from_dual(a, b);
}

struct LevelScan {
  std::vector<SecantRecord> records;  // verified length >= level
  bool nonfinite = false;
};

/// Solve the level-j pencil systems over all six charts, verify candidates
/// by the gcd/divisor test, dedup lines.
LevelScan scan_level(const RationalCurveMap& c, int j, const SecantOptions& opt) {
  LevelScan out;
  Rng rng(opt.seed ^ (0xC0FFEEull + 0x101ull * static_cast<std::uint64_t>(j)));
  for (int chart = 0; chart < 6; ++chart) {
    Rng crng = rng.fork(chart + 1);
    PolySystem sys = build_pencil_system(c, j, kPencilCharts[chart], crng);
    SolveOptions sopt = opt.solve;
    sopt.seed = opt.seed ^ (static_cast<std::uint64_t>(j) << 16) ^ (chart + 7);
    SolveResult res = solve_square_system(sys, sopt);
    int fresh = 0;
    for (const auto& sol : res.solutions) {
      LineP3 line;
      try {
        line = line_of_chart_solution(kPencilCharts[chart], sol);
      } catch (const LineError&) {
        continue;
      }
      IntersectionDivisor idiv;
      try {
        idiv = intersection_divisor_with_line(c, line);
      } catch (const std::exception&) {
        continue;
      }
      if (idiv.length < j || idiv.residual > opt.verify_residual) continue;
      bool dup = false;
      for (auto& r : out.records)
        if (line_distance(r.line, line) <= opt.line_dedup) {
          dup = true;
          if (idiv.residual < r.residual) {
            r.line = line;
            r.divisor = idiv.divisor;
            r.length = idiv.length;
            r.residual = idiv.residual;
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
  // Deterministic order.
  std::sort(out.records.begin(), out.records.end(),
            [](const SecantRecord& a, const SecantRecord& b) {
              const Vec6 pa = a.line.canonical_plucker();
              const Vec6 pb = b.line.canonical_plucker();
              for (int i = 0; i < 6; ++i) {
                if (pa(i).real() != pb(i).real()) return pa(i).real() < pb(i).real();
                if (pa(i).imag() != pb(i).imag()) return pa(i).imag() < pb(i).imag();
              }
              return false;
            });
  return out;
}

BinaryForm<CD> wronskian(const BinaryForm<CD>& f, const BinaryForm<CD>& g) {
  return add(multiply(deriv_s(f), deriv_t(g)),
             scale(multiply(deriv_t(f), deriv_s(g)), CD(-1.0, 0.0)));
}

// (f(u) g(v) - f(v) g(u)) / (u - v) as a 2-variable polynomial: the
// divided-difference matrix via synthetic division, with the structurally
// zero top coefficients trimmed.
MPoly bezoutian(const BinaryForm<CD>& f, const BinaryForm<CD>& g) {
  const int d = std::max(f.degree, g.degree);
  std::vector<CD> A(d + 1, CD(0, 0)), B(d + 1, CD(0, 0));
  for (int a = 0; a <= f.degree; ++a) A[a] = f.coeffs[f.degree - a];
  for (int a = 0; a <= g.degree; ++a) B[a] = g.coeffs[g.degree - a];

  // n[a][b] = coefficient of u^a v^b in f(u) g(v) - g(u) f(v)
  std::vector<std::vector<CD>> n(d + 1, std::vector<CD>(d + 1, CD(0, 0)));
  double scale = 0;
  for (int a = 0; a <= d; ++a)
    for (int b = 0; b <= d; ++b) {
      n[a][b] = A[a] * B[b] - B[a] * A[b];
      scale = std::max(scale, std::abs(n[a][b]));
    }

  // q_{a-1}(v) = n_a(v) + v q_a(v), descending from a = d.
  std::vector<std::vector<CD>> q(d, std::vector<CD>(d + 2, CD(0, 0)));
  std::vector<CD> cur(d + 2, CD(0, 0));  // q_a, shifting down
  for (int a = d; a >= 1; --a) {
    std::vector<CD> next(d + 2, CD(0, 0));
    for (int b = 0; b <= d; ++b) next[b] += n[a][b];
    for (int b = 0; b + 1 <= d + 1; ++b) next[b + 1] += cur[b];
    q[a - 1] = next;
    cur = std::move(next);
  }

  MPoly out(2);
  const double thr = 1e-12 * std::max(scale, 1e-300);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b <= d + 1; ++b)
      if (std::abs(q[a][b]) > thr) out.add_term({a, b}, q[a][b]);
  out.normalize();
  return out;
}

PointP1<CD> random_point(Rng& rng) {
  return PointP1<CD>(rng.gauss_complex(), rng.gauss_complex()).canonical();
}

}  // namespace

BinaryForm<CD> random_form(int degree, Rng& rng) {
  BinaryForm<CD> f = BinaryForm<CD>::zero(degree);
  for (auto& c : f.coeffs) c = rng.gauss_complex();
  return f;
}

IntersectionDivisor intersection_divisor_with_line(const RationalCurveMap& c,
                                                   const LineP3& line,
                                                   const RootOptions& ropt) {
  BinaryForm<CD> ra = restricted_form(c, line.dual[0]);
  BinaryForm<CD> rb = restricted_form(c, line.dual[1]);
  const double zero_thr = 1e-12 * c.scale();
  const bool za = ra.scale() <= zero_thr;
  const bool zb = rb.scale() <= zero_thr;
  if (za && zb)
    throw CurveError(
        "intersection_divisor_with_line: both restrictions vanish (curve inside line)");
  IntersectionDivisor out;
  if (za || zb) {
    // Curve lies in one of the cutting hyperplanes; the intersection with
    // the line is cut by the other form alone.
    const BinaryForm<CD>& live = za ? rb : ra;
    out.divisor = roots_of_form(live, ropt);
    out.length = out.divisor.degree();
    return out;
  }
  CommonDivisor cd = common_divisor(ra, rb, ropt);
  out.divisor = std::move(cd.divisor);
  out.length = out.divisor.degree();
  out.residual = cd.residual;
  return out;
}

std::vector<SecantRecord> find_k_secants(const RationalCurveMap& c, int k,
                                         const SecantOptions& opt) {
  const int d = c.degree;
  if (k < 3) throw CurveError("find_k_secants: k must be >= 3");
  if (k > d) throw CurveError("find_k_secants: k exceeds curve degree");
  std::vector<SecantRecord> out;
  auto insert = [&](const SecantRecord& r) {
    for (auto& have : out)
      if (line_distance(have.line, r.line) <= opt.line_dedup) {
        if (r.residual < have.residual) have = r;
        return;
      }
    out.push_back(r);
  };
  for (int j = d - 1; j >= std::max(k, 4); --j) {
    LevelScan scan = scan_level(c, j, opt);
    if (scan.nonfinite)
      throw NonFiniteSecantFamily(
          "find_k_secants: non-finite suspect at level " + std::to_string(j) +
          " (curve may lie on a low-degree surface of secant lines)");
    for (const auto& r : scan.records)
      if (r.length >= k) insert(r);
  }
  if (k == 3 && d >= 3) {
    LevelScan scan = scan_level(c, 3, opt);  // sliced witnesses of the family
    for (const auto& r : scan.records)
      if (r.length >= 3) insert(r);
  }
  for (auto& r : out) r.proper = (r.length == k);
  std::sort(out.begin(), out.end(), [](const SecantRecord& a, const SecantRecord& b) {
    const Vec6 pa = a.line.canonical_plucker();
    const Vec6 pb = b.line.canonical_plucker();
    for (int i = 0; i < 6; ++i) {
      if (pa(i).real() != pb(i).real()) return pa(i).real() < pb(i).real();
      if (pa(i).imag() != pb(i).imag()) return pa(i).imag() < pb(i).imag();
    }
    return false;
  });
  return out;
}

SecantOrder secant_order(const RationalCurveMap& c, const SecantOptions& opt) {
  const int d = c.degree;
  for (int j = d - 1; j >= 4; --j) {
    LevelScan scan = scan_level(c, j, opt);
    if (scan.nonfinite)
      throw NonFiniteSecantFamily("secant_order: non-finite suspect at level " +
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
  if (d >= 3) {
    LevelScan scan = scan_level(c, 3, opt);
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
  return SecantOrder{};  // l = 2: chords only
}

bool is_aligned(const RationalCurveMap& c, const std::vector<PointP1<CD>>& pts) {
  const int k = static_cast<int>(pts.size());
  if (k < 2) throw CurveError("is_aligned: need at least two points");
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (p1_distance(pts[i], pts[j]) <= 1e-8)
        throw CurveError("is_aligned: points must be distinct");

  // Rank <= 2 of the k x 4 evaluation matrix, rows scaled.
  Eigen::MatrixXcd E(k, 4);
  for (int i = 0; i < k; ++i) {
    const PointP1<CD> p = pts[i].canonical();
    for (int j = 0; j < 4; ++j) E(i, j) = eval_form(c.forms[j], p);
    const double rn = E.row(i).norm();
    if (rn > 0) E.row(i) /= rn;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(E);
  const auto& sv = svd.singularValues();
  const int nsv = static_cast<int>(sv.size());
  const double cutoff = 1e-8 * sv(0);
  int rank = 0;
  while (rank < nsv && sv(rank) >= cutoff) ++rank;
  for (int i = 0; i < nsv; ++i) {
    const double rel = sv(i) / sv(0);
    if (rel > 1e-10 && rel < 1e-6)
      throw RankAmbiguous("is_aligned: singular-value gap below threshold");
  }
  const bool eval_verdict = rank <= 2;

  // Pencil-side test: dim of the subspace of the linear system divisible by
  // the divisor form of the points. dim(delta ∩ m·C[x]_{d-k}) =
  // 4 + (d-k+1) - rank[delta basis | multiples of m].
  const int d = c.degree;
  bool pencil_verdict;
  if (k > d) {
    pencil_verdict = false;
  } else {
    DivisorP1<CD> D;
    for (const auto& p : pts) D.add(p, 1);
    BinaryForm<CD> m = form_from_divisor(D);
    Eigen::MatrixXcd M(d + 1, 4 + (d - k + 1));
    M.setZero();
    for (int j = 0; j < 4; ++j) {
      double sc = std::max(c.forms[j].scale(), 1e-300);
      for (int r = 0; r <= d; ++r) M(r, j) = c.forms[j].coeffs[r] / sc;
    }
    for (int sft = 0; sft <= d - k; ++sft)
      for (int r = 0; r <= k; ++r) M(sft + r, 4 + sft) = m.coeffs[r];
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd2(M);
    const auto& sv2 = svd2.singularValues();
    const int n2 = static_cast<int>(sv2.size());
    const double cut2 = 1e-8 * sv2(0);
    int rank2 = 0;
    while (rank2 < n2 && sv2(rank2) >= cut2) ++rank2;
    for (int i = 0; i < n2; ++i) {
      const double rel = sv2(i) / sv2(0);
      if (rel > 1e-10 && rel < 1e-6)
        throw RankAmbiguous("is_aligned: pencil-side singular-value gap below threshold");
    }
    const int meet = 4 + (d - k + 1) - rank2;
    pencil_verdict = meet >= 2;
  }

  if (eval_verdict != pencil_verdict)
    throw RankAmbiguous("is_aligned: rank test and pencil test disagree");
  return eval_verdict;
}

EmbeddingVerdict validate_embedding(const RationalCurveMap& c, std::uint64_t seed) {
  EmbeddingVerdict v;
  const int d = c.degree;
  const double cs = std::max(c.scale(), 1e-300);

  // (0) the four forms must span a 4-dimensional system.
  {
    Eigen::MatrixXcd M(4, d + 1);
    for (int i = 0; i < 4; ++i)
      for (int m = 0; m <= d; ++m) M(i, m) = c.forms[i].coeffs[m] / cs;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    if (svd.singularValues()(3) < 1e-10 * svd.singularValues()(0))
      v.reasons.push_back("forms are linearly dependent");
  }

  // (i) base-point freeness.
  {
    // Common roots of f1, f2 also vanishing on f3, f4.
    int i0 = -1, i1 = -1;
    for (int i = 0; i < 4; ++i)
      if (c.forms[i].scale() > 1e-12 * cs) {
        if (i0 < 0)
          i0 = i;
        else if (i1 < 0)
          i1 = i;
      }
    if (i1 < 0) {
      v.reasons.push_back("fewer than two nonzero forms");
    } else {
      try {
        CommonDivisor cdv = common_divisor(c.forms[i0], c.forms[i1]);
        for (const auto& [p, mult] : cdv.divisor.points) {
          (void)mult;
          bool all = true;
          for (int i = 0; i < 4; ++i) {
            if (c.forms[i].scale() <= 1e-12 * cs) continue;
            if (eval_residual(c.forms[i], p) > 1e-8) {
              all = false;
              break;
            }
          }
          if (all) {
            v.base_point = p;
            v.reasons.push_back("base point found");
            break;
          }
        }
      } catch (const RootError&) {
        v.inconclusive = true;
        v.reasons.push_back("base-point check inconclusive (root finder)");
      }
    }
  }

  // (ii) injectivity: the double-point system after diagonal removal.
  {
    std::vector<MPoly> bez;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) bez.push_back(bezoutian(c.forms[i], c.forms[j]));

    Rng rng(seed ^ 0xD0B1Eull);
    PolySystem sys;
    sys.n_vars = 2;
    for (int r = 0; r < 2; ++r) {
      MPoly combo(2);
      for (const auto& b : bez) combo += b * rng.gauss_complex();
      combo.normalize();
      sys.polys.push_back(std::move(combo));
    }
    SolveOptions sopt;
    sopt.seed = seed;
    sopt.multistart_rescue = true;
    SolveResult res = solve_square_system(sys, sopt);
    for (const auto& sol : res.solutions) {
      const PointP1<CD> pu = PointP1<CD>(sol[0], CD(1, 0)).canonical();
      const PointP1<CD> pv = PointP1<CD>(sol[1], CD(1, 0)).canonical();
      if (p1_distance(pu, pv) <= 1e-6) continue;  // diagonal: immersion's job
      double worst = 0;
      for (const auto& b : bez) worst = std::max(worst, mpoly_residual(b, sol));
      if (worst <= 1e-8) {
        v.double_point = {pu, pv};
        v.reasons.push_back("non-injective: two parameters map to one point");
        break;
      }
      if (worst <= 1e-6) {
        v.inconclusive = true;
        v.reasons.push_back("injectivity verdict in the gray zone");
      }
    }

    // Pairs involving [1:0].
    if (!v.double_point) {
      Vec4 lead;
      for (int i = 0; i < 4; ++i) lead(i) = c.forms[i].coeffs[0];
      if (lead.norm() > 1e-12 * cs) {
        std::vector<BinaryForm<CD>> minors;
        for (int i = 0; i < 4; ++i)
          for (int j = i + 1; j < 4; ++j) {
            BinaryForm<CD> mm =
                add(scale(c.forms[j], lead(i)), scale(c.forms[i], -lead(j)));
            minors.push_back(std::move(mm));
          }
        int first = -1;
        for (std::size_t i = 0; i < minors.size(); ++i)
          if (minors[i].scale() > 1e-10 * cs * cs) {
            first = static_cast<int>(i);
            break;
          }
        if (first >= 0) {
          try {
            DivisorP1<CD> roots = roots_of_form(minors[first]);
            for (const auto& [p, mult] : roots.points) {
              (void)mult;
              if (p1_distance(p, PointP1<CD>::infinity()) <= 1e-6) continue;
              double worst = 0;
              for (const auto& mm : minors) {
                if (mm.scale() <= 1e-10 * cs * cs) continue;
                worst = std::max(worst, eval_residual(mm, p));
              }
              if (worst <= 1e-8) {
                v.double_point = {PointP1<CD>::infinity(), p};
                v.reasons.push_back("non-injective: [1:0] collides with an affine point");
                break;
              }
            }
          } catch (const RootError&) {
            v.inconclusive = true;
            v.reasons.push_back("injectivity at [1:0] inconclusive (root finder)");
          }
        }
      }
    }
  }

  // (iii) immersion: the 4x2 Jacobian must have rank 2 everywhere.
  {
    std::vector<BinaryForm<CD>> wr;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) wr.push_back(wronskian(c.forms[i], c.forms[j]));
    int first = -1;
    for (std::size_t i = 0; i < wr.size(); ++i)
      if (wr[i].scale() > 1e-10 * cs * cs) {
        first = static_cast<int>(i);
        break;
      }
    if (first < 0) {
      v.reasons.push_back("all Jacobian minors vanish identically (degenerate map)");
    } else {
      try {
        DivisorP1<CD> roots = roots_of_form(wr[first]);
        for (const auto& [p, mult] : roots.points) {
          (void)mult;
          double worst = 0;
          for (const auto& w : wr) {
            if (w.scale() <= 1e-10 * cs * cs) continue;
            worst = std::max(worst, eval_residual(w, p));
          }
          if (worst <= 1e-8) {
            v.non_immersive_point = p;
            v.reasons.push_back("non-immersive point (vanishing Jacobian minors)");
            break;
          }
        }
      } catch (const RootError&) {
        v.inconclusive = true;
        v.reasons.push_back("immersion check inconclusive (root finder)");
      }
    }
    // Sampled backup: the Jacobian at random parameters.
    Rng rng(seed ^ 0x1AC0Bull);
    for (int s = 0; s < 40 && !v.non_immersive_point; ++s) {
      const PointP1<CD> p = random_point(rng);
      Eigen::MatrixXcd J(4, 2);
      for (int i = 0; i < 4; ++i) {
        J(i, 0) = eval_form(deriv_s(c.forms[i]), p);
        J(i, 1) = eval_form(deriv_t(c.forms[i]), p);
      }
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
      if (svd.singularValues()(1) < 1e-10 * svd.singularValues()(0)) {
        v.non_immersive_point = p;
        v.reasons.push_back("non-immersive point (sampled Jacobian)");
      }
    }
  }

  v.valid = v.reasons.empty() && !v.inconclusive;
  return v;
}

PlantedCurve construct_with_k_secant(int d, int k, std::uint64_t seed) {
  if (d < 4 || k < 3 || k > d - 1)
    throw ConstructError("construct_with_k_secant: need 3 <= k <= d-1, d >= 4");
  std::string trail;
  for (int attempt = 0; attempt < 64; ++attempt) {
    const std::uint64_t s = seed + 0x9E3779B9ull * attempt;
    Rng rng(s);
    // Planted degree-k divisor, distinct points.
    DivisorP1<CD> D;
    while (D.degree() < k) {
      PointP1<CD> p = random_point(rng);
      bool clash = false;
      for (const auto& [q, m] : D.points) {
        (void)m;
        if (p1_distance(p, q) < 1e-3) clash = true;
      }
      if (!clash) D.add(p, 1);
    }
    BinaryForm<CD> m = form_from_divisor(D);

    BinaryForm<CD> u, vfac;
    if (k == d - 1) {
      u = BinaryForm<CD>(1, {CD(1, 0), CD(0, 0)});     // s
      vfac = BinaryForm<CD>(1, {CD(0, 0), CD(1, 0)});  // t
    } else {
      bool ok = false;
      for (int tries = 0; tries < 16 && !ok; ++tries) {
        u = random_form(d - k, rng);
        vfac = random_form(d - k, rng);
        try {
          ok = gcd_degree(u, vfac) == 0;
        } catch (const GcdAmbiguous&) {
          ok = false;
        }
      }
      if (!ok) continue;
    }

    RationalCurveMap c;
    c.degree = d;
    c.forms[0] = multiply(m, u);
    c.forms[1] = multiply(m, vfac);
    c.forms[2] = random_form(d, rng);
    c.forms[3] = random_form(d, rng);

    EmbeddingVerdict verdict = validate_embedding(c, s ^ 0xFEEDull);
    if (!verdict.valid) {
      trail += std::to_string(s) + " ";
      continue;
    }

    Vec4 e0 = Vec4::Zero(), e1 = Vec4::Zero();
    e0(0) = CD(1, 0);
    e1(1) = CD(1, 0);
    LineP3 line = LineP3::from_dual(e0, e1);
    IntersectionDivisor idiv = intersection_divisor_with_line(c, line);
    if (idiv.length < k) {
      trail += std::to_string(s) + " ";
      continue;
    }

    PlantedCurve out;
    out.curve = std::move(c);
    out.planted_divisor = D;
    out.planted.line = line;
    out.planted.divisor = idiv.divisor;
    out.planted.length = idiv.length;
    out.planted.proper = (idiv.length == k);
    out.planted.residual = idiv.residual;
    out.accepted_seed = s;
    return out;
  }
  throw ConstructError("construct_with_k_secant: retry budget exhausted; seeds tried: " +
                       trail);
}

RationalCurveMap random_valid_curve(int d, std::uint64_t seed) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const std::uint64_t s = seed + 0x51D3ull * attempt;
    Rng rng(s);
    RationalCurveMap c;
    c.degree = d;
    for (auto& f : c.forms) f = random_form(d, rng);
    if (validate_embedding(c, s ^ 0xABCDull).valid) return c;
  }
  throw ConstructError("random_valid_curve: retry budget exhausted");
}

RationalCurveMap apply_projective(const RationalCurveMap& c,
                                  const Eigen::Matrix<CD, 4, 4>& m) {
  RationalCurveMap out;
  out.degree = c.degree;
  for (int i = 0; i < 4; ++i) {
    BinaryForm<CD> g = BinaryForm<CD>::zero(c.degree);
    for (int j = 0; j < 4; ++j) g = add(g, scale(c.forms[j], m(i, j)));
    out.forms[i] = std::move(g);
  }
  return out;
}

RationalCurveMap apply_mobius(const RationalCurveMap& c, const CD& m00, const CD& m01,
                              const CD& m10, const CD& m11) {
  RationalCurveMap out;
  out.degree = c.degree;
  for (int i = 0; i < 4; ++i)
    out.forms[i] = mobius_transform(c.forms[i], m00, m01, m10, m11);
  return out;
}

}  // namespace sscope
