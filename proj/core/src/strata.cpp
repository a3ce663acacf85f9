#include "sscope/strata.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <limits>

#include "sscope/subresultants.hpp"

namespace sscope {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

DivisorP1<CD> random_affine_divisor(int k, Rng& rng) {
  DivisorP1<CD> d;
  while (d.degree() < k) {
    PointP1<CD> p(rng.gauss_complex(), CD(1, 0));
    bool clash = false;
    for (const auto& [q, m] : d.points) {
      (void)m;
      if (p1_distance(p, q) < 1e-3) clash = true;
    }
    if (!clash) d.add(p.canonical(), 1);
  }
  return d;
}

/// Monic descending coefficients of the divisor form (affine support).
std::vector<CD> monic_of_divisor(const DivisorP1<CD>& d) {
  BinaryForm<CD> m = form_from_divisor(d);
  std::vector<CD> c = m.coeffs;
  if (std::abs(c[0]) < 1e-12)
    throw StrataError("monic_of_divisor: divisor touches [1:0]");
  for (auto& x : c) x /= m.coeffs[0];
  return c;
}

int rank_with_gap(const MatrixXcd& m, double cutoff_rel, double& gap) {
  Eigen::JacobiSVD<MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  const int n = static_cast<int>(sv.size());
  if (n == 0 || sv(0) == 0.0) {
    gap = std::numeric_limits<double>::infinity();
    return 0;
  }
  const double cut = cutoff_rel * sv(0);
  int rank = 0;
  while (rank < n && sv(rank) >= cut) ++rank;
  if (rank == n)
    gap = std::numeric_limits<double>::infinity();
  else if (rank == 0)
    gap = 0.0;
  else
    gap = sv(rank - 1) / std::max(sv(rank), 1e-300);
  return rank;
}

}  // namespace

AlignedScheme random_aligned_scheme(int k, std::uint64_t seed) {
  Rng rng(seed);
  Vec4 p, q;
  for (int i = 0; i < 4; ++i) {
    p(i) = rng.gauss_complex();
    q(i) = rng.gauss_complex();
  }
  AlignedScheme z;
  z.line = LineP3::from_frame(p, q);
  z.divisor = random_affine_divisor(k, rng);
  return z;
}

int conditions_imposed(const AlignedScheme& z, int m) {
  const int k = z.length();
  if (k < 1 || m < 1) throw StrataError("conditions_imposed: need k >= 1, m >= 1");
  const std::vector<CD> md = monic_of_divisor(z.divisor);
  const auto monos = monomials_of_degree(4, m);
  MatrixXcd mat(static_cast<int>(monos.size()), k);
  mat.setZero();
  for (int r = 0; r < static_cast<int>(monos.size()); ++r) {
    SurfacePoly mono;
    mono.degree = m;
    mono.poly = MPoly(4);
    mono.poly.add_term(monos[r], CD(1, 0));
    BinaryForm<CD> rest = restrict_to_line(mono, z.line);
    // Remainder mod the divisor form, coefficients descending.
    std::vector<CD> rem = detail::poly_rem(rest.coeffs, md);
    const int off = k - static_cast<int>(rem.size());
    for (int j = 0; j < static_cast<int>(rem.size()); ++j) mat(r, off + j) = rem[j];
  }
  double gap = 0;
  const int rank = rank_with_gap(mat, 1e-10, gap);
  if (gap < 1e3)
    throw RankAmbiguous("conditions_imposed: rank ambiguous");
  return rank;
}

VarietyChart stratum_equations(StratumLabel label, const StratumParams& prm,
                               std::uint64_t seed) {
  Rng rng(seed);
  VarietyChart ch;
  switch (label) {
    case StratumLabel::Alk: {
      const int k = prm.k;
      if (k < 2) throw StrataError("Alk: need k >= 2");
      ch.label = "Al^" + std::to_string(k);
      ch.ambient_dim = 4 + k;
      ch.equations.n_vars = 4 + k;
      ch.quotient_shift = 0;
      ch.expected_dim = expected_dim_alk(k);
      ch.sample.assign(4 + k, CD(0, 0));
      for (auto& c : ch.sample) c = rng.gauss_complex();
      return ch;
    }
    case StratumLabel::Pk: {
      const int d = prm.d, k = prm.k;
      if (k < 3 || k > d) throw StrataError("Pk: need 3 <= k <= d");
      ch.label = "P_" + std::to_string(k) + "(d=" + std::to_string(d) + ")";
      // Planted pencil g = m u, h = m v with coprime cofactors.
      DivisorP1<CD> D = random_affine_divisor(k, rng);
      BinaryForm<CD> m = form_from_divisor(D);
      BinaryForm<CD> u, v;
      for (;;) {
        u = random_form(d - k, rng);
        v = random_form(d - k, rng);
        try {
          if (gcd_degree(u, v) == 0) break;
        } catch (const GcdAmbiguous&) {
        }
      }
      BinaryForm<CD> g = multiply(m, u), h = multiply(m, v);

      // Pick the best-conditioned pivot column pair of [g; h].
      int c0 = 0, c1 = 1;
      double best = -1;
      for (int i = 0; i <= d; ++i)
        for (int j = i + 1; j <= d; ++j) {
          const double det =
              std::abs(g.coeffs[i] * h.coeffs[j] - g.coeffs[j] * h.coeffs[i]);
          if (det > best) {
            best = det;
            c0 = i;
            c1 = j;
          }
        }
      if (best <= 0) throw StrataError("Pk: degenerate planted pencil");
      // Row-reduce so that columns (c0, c1) carry the identity.
      const CD det = g.coeffs[c0] * h.coeffs[c1] - g.coeffs[c1] * h.coeffs[c0];
      std::vector<CD> gt(d + 1), ht(d + 1);
      for (int r = 0; r <= d; ++r) {
        gt[r] = (h.coeffs[c1] * g.coeffs[r] - g.coeffs[c1] * h.coeffs[r]) / det;
        ht[r] = (-h.coeffs[c0] * g.coeffs[r] + g.coeffs[c0] * h.coeffs[r]) / det;
      }
      // Cofactors of the reduced generators: gt = m*ut, ht = m*vt with
      // (ut, vt) the same row operations applied to (u, v).
      std::vector<CD> ut(d - k + 1), vt(d - k + 1);
      for (int r = 0; r <= d - k; ++r) {
        ut[r] = (h.coeffs[c1] * u.coeffs[r] - g.coeffs[c1] * v.coeffs[r]) / det;
        vt[r] = (-h.coeffs[c0] * u.coeffs[r] + g.coeffs[c0] * v.coeffs[r]) / det;
      }

      const int nfree = d - 1;
      const int cof = d - k + 1;
      const int nv = 2 * nfree + 2 * cof;
      const int gbase = 0, hbase = nfree, qbase = 2 * nfree, pbase = 2 * nfree + cof;
      std::vector<int> freecols;
      for (int i = 0; i <= d; ++i)
        if (i != c0 && i != c1) freecols.push_back(i);

      // Generator coefficient m-polys: constants at pivots, variables at
      // the free columns.
      auto gen_coeff = [&](int base, int pivcol, int col) -> MPoly {
        if (col == pivcol) return MPoly::constant(nv, CD(1, 0));
        if (col == c0 || col == c1) return MPoly::constant(nv, CD(0, 0));
        const int idx =
            static_cast<int>(std::find(freecols.begin(), freecols.end(), col) -
                             freecols.begin());
        return MPoly::variable(nv, base + idx);
      };

      ch.equations.n_vars = nv;
      for (int coef = 0; coef <= 2 * d - k; ++coef) {
        MPoly e(nv);
        for (int mm = std::max(0, coef - (cof - 1)); mm <= std::min(d, coef); ++mm) {
          const int l = coef - mm;
          e += gen_coeff(gbase, c0, mm) * MPoly::variable(nv, qbase + l);
          MPoly hterm = gen_coeff(hbase, c1, mm) * MPoly::variable(nv, pbase + l);
          hterm *= CD(-1, 0);
          e += hterm;
        }
        e.normalize();
        ch.equations.polys.push_back(std::move(e));
      }
      // Normalization on the cofactors.
      std::vector<CD> ncoef(2 * cof);
      for (auto& c : ncoef) c = rng.gauss_complex();
      MPoly norm = MPoly::constant(nv, CD(-1, 0));
      for (int i = 0; i < 2 * cof; ++i)
        norm += MPoly::variable(nv, qbase + i) * ncoef[i];
      ch.equations.polys.push_back(std::move(norm));

      // Sample: free entries of (gt, ht), cofactors (q, p) = lambda (vt, ut).
      ch.sample.assign(nv, CD(0, 0));
      for (int i = 0; i < nfree; ++i) {
        ch.sample[gbase + i] = gt[freecols[i]];
        ch.sample[hbase + i] = ht[freecols[i]];
      }
      CD ndot(0, 0);
      for (int i = 0; i < cof; ++i) ndot += ncoef[i] * vt[i];
      for (int i = 0; i < cof; ++i) ndot += ncoef[cof + i] * ut[i];
      const CD lambda = CD(1, 0) / ndot;
      for (int i = 0; i < cof; ++i) {
        ch.sample[qbase + i] = lambda * vt[i];
        ch.sample[pbase + i] = lambda * ut[i];
      }
      ch.label += " [pencil chart + cofactors]";
      ch.ambient_dim = nv;
      ch.quotient_shift = 0;
      ch.expected_dim = expected_dim_pk(d, k);
      return ch;
    }
    case StratumLabel::IkRational: {
      const int d = prm.d, k = prm.k;
      if (d < 4 || k < 3 || k > d - 1)
        throw StrataError("IkRational: need 3 <= k <= d-1, d >= 4");
      PlantedCurve pc = construct_with_k_secant(d, k, seed ^ 0x1A5ull);
      std::vector<CD> mcoef = monic_of_divisor(pc.planted_divisor);
      BinaryForm<CD> mono(k, mcoef);

      // Quotient samples: f0 = m qa, f1 = m qb exactly (division).
      auto divide_exact = [&](const BinaryForm<CD>& f) {
        std::vector<CD> a = f.coeffs;  // descending, degree d
        std::vector<CD> q(d - k + 1, CD(0, 0));
        for (int i = 0; i <= d - k; ++i) {
          q[i] = a[i];
          for (int j = 0; j <= k; ++j) a[i + j] -= q[i] * mcoef[j];
        }
        return q;
      };
      std::vector<CD> qa = divide_exact(pc.curve.forms[0]);
      std::vector<CD> qb = divide_exact(pc.curve.forms[1]);

      const int fbase = 0;               // 4(d+1) curve coefficients
      const int lbase = 4 * (d + 1);     // 4 chart coords of the dual pencil
      const int ubase = lbase + 4;       // k non-leading coefficients of m
      const int qabase = ubase + k;      // d-k+1
      const int qbbase = qabase + (d - k + 1);
      const int nv = qbbase + (d - k + 1);

      ch.equations.n_vars = nv;
      // alpha = (1, 0, x0, x1), beta = (0, 1, x2, x3) in the chart with
      // pivots (0,1); the planted line is exactly there.
      auto alpha_coef = [&](int i) -> MPoly {
        if (i == 0) return MPoly::constant(nv, CD(1, 0));
        if (i == 1) return MPoly::constant(nv, CD(0, 0));
        return MPoly::variable(nv, lbase + (i - 2));
      };
      auto beta_coef = [&](int i) -> MPoly {
        if (i == 0) return MPoly::constant(nv, CD(0, 0));
        if (i == 1) return MPoly::constant(nv, CD(1, 0));
        return MPoly::variable(nv, lbase + 2 + (i - 2));
      };
      auto m_coef = [&](int j) -> MPoly {  // descending index 0..k
        if (j == 0) return MPoly::constant(nv, CD(1, 0));
        return MPoly::variable(nv, ubase + (j - 1));
      };

      for (int side = 0; side < 2; ++side) {
        const int qb0 = side == 0 ? qabase : qbbase;
        for (int r = 0; r <= d; ++r) {
          MPoly e(nv);
          for (int i = 0; i < 4; ++i) {
            MPoly ai = side == 0 ? alpha_coef(i) : beta_coef(i);
            e += ai * MPoly::variable(nv, fbase + i * (d + 1) + r);
          }
          for (int j = std::max(0, r - (d - k)); j <= std::min(k, r); ++j) {
            MPoly term = m_coef(j) * MPoly::variable(nv, qb0 + (r - j));
            term *= CD(-1, 0);
            e += term;
          }
          e.normalize();
          ch.equations.polys.push_back(std::move(e));
        }
      }

      ch.sample.assign(nv, CD(0, 0));
      for (int i = 0; i < 4; ++i)
        for (int r = 0; r <= d; ++r)
          ch.sample[fbase + i * (d + 1) + r] = pc.curve.forms[i].coeffs[r];
      // line chart coords are zero for the planted line
      for (int j = 1; j <= k; ++j) ch.sample[ubase + (j - 1)] = mcoef[j];
      for (int r = 0; r <= d - k; ++r) {
        ch.sample[qabase + r] = qa[r];
        ch.sample[qbbase + r] = qb[r];
      }

      ch.label = "I_" + std::to_string(k) + "^s(d=" + std::to_string(d) +
                 ") [parametrized chart]";
      ch.ambient_dim = nv;
      ch.quotient_shift = 4;  // scale + Aut(P^1) of the parametrization
      ch.expected_dim = expected_dim_iks(d, k);
      return ch;
    }
    case StratumLabel::CIFiber: {
      const int a = prm.a, b = prm.b, k = prm.k;
      if (a < 1 || a > b || k < 1) throw StrataError("CIFiber: need 1 <= a <= b, k >= 1");
      if (k > b) throw StrataError("CIFiber: need k <= b");
      AlignedScheme z = random_aligned_scheme(k, seed ^ 0xF1Bull);
      std::vector<CD> md = monic_of_divisor(z.divisor);

      const auto mon_a = monomials_of_degree(4, a);
      const auto mon_b = monomials_of_degree(4, b);
      const int na = static_cast<int>(mon_a.size());
      const int nb = static_cast<int>(mon_b.size());
      const int nv = na + nb;
      ch.equations.n_vars = nv;

      // Remainder rows per monomial; k linear equations per surface.
      auto add_surface_eqs = [&](const std::vector<std::vector<int>>& monos, int deg,
                                 int base) {
        std::vector<std::vector<CD>> rows(static_cast<int>(monos.size()));
        for (int r = 0; r < static_cast<int>(monos.size()); ++r) {
          SurfacePoly mono;
          mono.degree = deg;
          mono.poly = MPoly(4);
          mono.poly.add_term(monos[r], CD(1, 0));
          BinaryForm<CD> rest = restrict_to_line(mono, z.line);
          std::vector<CD> rem = detail::poly_rem(rest.coeffs, md);
          std::vector<CD> padded(k, CD(0, 0));
          const int off = k - static_cast<int>(rem.size());
          for (int j = 0; j < static_cast<int>(rem.size()); ++j) padded[off + j] = rem[j];
          rows[r] = std::move(padded);
        }
        for (int j = 0; j < k; ++j) {
          MPoly e(nv);
          for (int r = 0; r < static_cast<int>(monos.size()); ++r)
            if (rows[r][j] != CD(0, 0))
              e += MPoly::variable(nv, base + r) * rows[r][j];
          e.normalize();
          ch.equations.polys.push_back(std::move(e));
        }
        return rows;
      };
      auto rows_a = add_surface_eqs(mon_a, a, 0);
      auto rows_b = add_surface_eqs(mon_b, b, na);

      // Sample: random nullspace members of the two linear condition sets.
      auto nullspace_sample = [&](const std::vector<std::vector<CD>>& rows, int n) {
        MatrixXcd M(k, n);
        for (int r = 0; r < n; ++r)
          for (int j = 0; j < k; ++j) M(j, r) = rows[r][j];
        Eigen::JacobiSVD<MatrixXcd> svd(M, Eigen::ComputeFullV);
        const int rank = [&] {
          double gap;
          return rank_with_gap(M, 1e-10, gap);
        }();
        std::vector<CD> out(n, CD(0, 0));
        for (int col = rank; col < n; ++col) {
          const CD w = rng.gauss_complex();
          for (int r = 0; r < n; ++r) out[r] += w * svd.matrixV()(r, col);
        }
        return out;
      };
      std::vector<CD> fa = nullspace_sample(rows_a, na);
      std::vector<CD> fb = nullspace_sample(rows_b, nb);
      ch.sample.assign(nv, CD(0, 0));
      for (int r = 0; r < na; ++r) ch.sample[r] = fa[r];
      for (int r = 0; r < nb; ++r) ch.sample[na + r] = fb[r];

      ch.label = "q-fiber I_" + std::to_string(k) + "(a=" + std::to_string(a) +
                 ",b=" + std::to_string(b) + ")";
      ch.ambient_dim = nv;
      // (F_a, F_b) pairs overcount the curve by the scales (and by mixing
      // F_a into F_b when a < b; by GL2 when a = b).
      ch.quotient_shift =
          a == b ? 4 : 2 + static_cast<int>((b - a + 3LL) * (b - a + 2) * (b - a + 1) / 6);
      ch.expected_dim = static_cast<int>(expected_reldim_ci_fiber(a, b, k));
      return ch;
    }
  }
  throw StrataError("stratum_equations: unknown label");
}

DimensionReport estimate_local_dimension(const VarietyChart& chart) {
  DimensionReport rep;
  rep.label = chart.label;
  rep.ambient_dim = chart.ambient_dim;
  rep.quotient_shift = chart.quotient_shift;
  rep.expected_dim = chart.expected_dim;

  const int nv = chart.ambient_dim;
  const int ne = static_cast<int>(chart.equations.polys.size());
  if (ne == 0) {
    rep.jacobian_rank = 0;
    rep.estimated_dim = nv - chart.quotient_shift;
    rep.singular_value_gap = std::numeric_limits<double>::infinity();
    rep.verdict = rep.estimated_dim == rep.expected_dim ? DimVerdict::Match
                                                        : DimVerdict::Mismatch;
    return rep;
  }

  // Polish the sample with Gauss-Newton steps on the (generally
  // rectangular) system.
  std::vector<CD> x = chart.sample;
  MatrixXcd J(ne, nv);
  VectorXcd F(ne);
  std::vector<CD> grad;
  auto fill = [&](const std::vector<CD>& at) {
    for (int e = 0; e < ne; ++e) {
      F(e) = chart.equations.polys[e].eval_grad(at, grad);
      for (int j = 0; j < nv; ++j) J(e, j) = grad[j];
    }
  };
  for (int it = 0; it < 20; ++it) {
    fill(x);
    if (scaled_residual(chart.equations, x) <= 1e-12) break;
    Eigen::JacobiSVD<MatrixXcd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    VectorXcd dx = svd.solve(-F);
    for (int j = 0; j < nv; ++j) x[j] += dx(j);
    if (dx.lpNorm<Eigen::Infinity>() < 1e-15) break;
  }
  rep.sample_residual = scaled_residual(chart.equations, x);
  if (rep.sample_residual > 1e-10)
    throw StrataError("estimate_local_dimension: sample residual above 1e-10 after polish");

  fill(x);
  // Row-scale the Jacobian so mixed equation scales do not skew the rank.
  for (int e = 0; e < ne; ++e) {
    const double rn = J.row(e).norm();
    if (rn > 0) J.row(e) /= rn;
  }
  rep.jacobian_rank = rank_with_gap(J, 1e-7, rep.singular_value_gap);
  rep.estimated_dim = nv - rep.jacobian_rank - chart.quotient_shift;
  if (rep.singular_value_gap <= 1e3)
    rep.verdict = DimVerdict::Ambiguous;
  else
    rep.verdict = rep.estimated_dim == rep.expected_dim ? DimVerdict::Match
                                                        : DimVerdict::Mismatch;
  return rep;
}

int expected_dim_alk(int k) {
  if (k < 2) throw StrataError("expected_dim_alk: k >= 2");
  return 4 + k;
}
int expected_dim_pk(int d, int k) {
  if (k < 2 || k > d) throw StrataError("expected_dim_pk: need 2 <= k <= d");
  return 2 * d - k - 2;
}
int expected_dim_incidence_pencils(int d, int k) { return 4 * d - k - 8; }
int expected_dim_iks(int d, int k) {
  if (d < 5 || k < 4 || k > d - 1)
    throw StrataError("expected_dim_iks: need d >= 5, 4 <= k <= d-1");
  return 4 * d - (k - 4);
}
int expected_dim_hks_rational(int d, int k) {
  if (d < 5 || k < 4 || k > d - 1)
    throw StrataError("expected_dim_hks_rational: need d >= 5, 4 <= k <= d-1");
  return 4 * d - (k - 4);
}
long long expected_dim_hks_ci(int a, int b, int k) {
  if (a < 4 || a > b || k < 4 || k > b)
    throw StrataError("expected_dim_hks_ci: need a >= 4, 4 <= k <= b");
  const long long h = hilbert_dim_ci(a, b);
  if (k <= a + 1) return h - (k - 4);
  return h - (a - 3);
}
long long expected_reldim_ci_fiber(int a, int b, int k) {
  if (k > b) throw StrataError("expected_reldim_ci_fiber: k <= b required");
  const long long h = hilbert_dim_ci(a, b);
  return std::max(h - 2 * k, h - (a + 1) - k);
}

std::vector<ExpectedDimRow> expected_dims_table(int d_lo, int d_hi) {
  std::vector<ExpectedDimRow> rows;
  for (int d = d_lo; d <= d_hi; ++d) {
    for (int k = 4; k <= d - 1; ++k) {
      rows.push_back({"H_k^s(d,0)", "d=" + std::to_string(d) + ",k=" + std::to_string(k),
                      expected_dim_hks_rational(d, k)});
    }
    rows.push_back({"H_{d-1}^s(d,0) [3d+5]", "d=" + std::to_string(d),
                    3LL * d + 5});
  }
  return rows;
}

}  // namespace sscope
