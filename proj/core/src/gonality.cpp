#include "sscope/gonality.hpp"

namespace sscope {

int gonality_from_secants(int dC, int l) {
  if (l < 2) throw GonalityError("gonality_from_secants: l >= 2 required");
  if (dC <= l) throw GonalityError("gonality_from_secants: d(C) > l required");
  return dC - l;
}

std::pair<int, CliffordCase> clifford_trichotomy(int dC, int l) {
  if (l < 3) throw GonalityError("clifford_trichotomy: l >= 3 required");
  if (dC < l + 4) throw GonalityError("clifford_trichotomy: d(C) >= l + 4 required");
  if (l == 3) return {dC - 6, CliffordCase::GonMinus3};
  return {dC - l - 2, CliffordCase::GonMinus2};
}

long long genus_subcanonical(long long alpha, long long dC) {
  if ((alpha * dC) % 2 != 0)
    throw GonalityError("genus_subcanonical: alpha * d(C) must be even");
  return (alpha * dC + 2) / 2;
}

long long cm_degree_bound(long long clifford) {
  if (clifford < 0) throw GonalityError("cm_degree_bound: clifford >= 0 required");
  return (3 * (clifford + 2)) / 2;
}

std::vector<HypothesisReport> check_theorem_hypotheses(int alpha, int dC, HypMode mode,
                                                       const HypSearch& search) {
  if (search.f_lo > search.f_hi)
    throw GonalityError("check_theorem_hypotheses: empty search range");
  const int d_max = search.d_max > 0 ? search.d_max : dC - 3;
  if (d_max < 1) throw GonalityError("check_theorem_hypotheses: empty search range");

  std::vector<HypothesisReport> rows;
  for (int f = search.f_lo; f <= search.f_hi; ++f) {
    HypothesisReport r;
    r.alpha = alpha;
    r.f = f;
    r.p = mode == HypMode::Thm1_4 ? alpha : alpha - 1;
    r.dC = dC;
    r.d_max = d_max;

    r.cond_b = f < alpha + 4;

    // c): exists s >= 1 with p - f + 4 > s + d/(s f), checked at the worst
    // admissible pencil degree d = d_max in exact integer arithmetic.
    const int w = r.p - f + 4;
    r.cond_c = false;
    if (f >= 1 && w >= 2) {
      const long long s_hi = static_cast<long long>(f) * w;
      for (long long s = 1; s <= s_hi; ++s) {
        // w > s + d/(s f)  <=>  (w - s) s f > d
        if ((w - s) * s * f > d_max) {
          r.cond_c = true;
          r.witness_s = static_cast<int>(s);
          break;
        }
      }
    }

    r.cond_d = static_cast<long long>(dC) <= 2LL * (r.p - f + 2) * f;
    r.overall = r.cond_b && r.cond_c && r.cond_d;
    r.gamma_degree_lower_bound = static_cast<long long>(r.p - f + 3) * f;
    rows.push_back(r);
  }
  return rows;
}

bool hypotheses_overall(const std::vector<HypothesisReport>& rows) {
  for (const auto& r : rows)
    if (r.overall) return true;
  return false;
}

HypSearch ci_hypothesis_range(int a, int b) {
  if (a < 2 || a > b) throw GonalityError("ci_hypothesis_range: need 2 <= a <= b");
  const int alpha = a + b - 4;
  HypSearch s;
  s.f_lo = (a == b) ? b + 1 : b;
  s.f_hi = alpha + 3;  // condition b) is f < alpha + 4
  s.d_max = a * b - 3;
  return s;
}

GonalityReport analyze_rational(const RationalCurveMap& c, const SecantOptions& opt) {
  GonalityReport rep;
  rep.dC = c.degree;
  SecantOrder so = secant_order(c, opt);
  rep.l = so.l;
  rep.witnesses = std::move(so.witnesses);
  rep.theorem_layer = false;
  rep.status = "out-of-regime";
  rep.assumptions.push_back(
      "rational curves are not subcanonical with alpha >= 4; theorem layer disabled");
  return rep;
}

GonalityReport analyze_ci(const CICurve& c, const SecantOptions& opt) {
  GonalityReport rep;
  const int a = c.a(), b = c.b();
  rep.dC = a * b;
  SecantOrder so = secant_order_ci(c, opt);
  rep.l = so.l;
  rep.witnesses = std::move(so.witnesses);

  if (a < 4) {
    rep.theorem_layer = false;
    rep.status = "out-of-regime";
    rep.assumptions.push_back(
        "a < 4: the structural results are not claimed in this regime");
    return rep;
  }

  rep.theorem_layer = true;
  rep.status = "verified-with-assumptions";
  rep.gonality = gonality_from_secants(rep.dC, rep.l);
  if (rep.l >= 3 && rep.dC >= rep.l + 4) {
    auto [cliff, cc] = clifford_trichotomy(rep.dC, rep.l);
    rep.clifford = cliff;
    rep.clifford_case = cc;
  } else {
    rep.assumptions.push_back("secant order below 3: Clifford trichotomy not applied");
  }
  rep.assumptions.push_back("condition (o) (Noether-Lefschetz genericity) assumed");
  rep.assumptions.push_back(
      "cohomological vanishings h1(I_C(1)) = h1(I_C(alpha)) = 0 assumed (condition a)");
  rep.assumptions.push_back("C assumed neither hyperelliptic nor bielliptic (user-asserted)");
  if (a == b)
    rep.assumptions.push_back(
        "a = b: the b-secant uniqueness argument relies on unverified genericity");
  switch (c.smoothness) {
    case SmoothnessStatus::SolverScreened:
      rep.assumptions.push_back("smoothness: screened by the Jacobian-minor solve");
      break;
    case SmoothnessStatus::VerifiedAtSamples:
      rep.assumptions.push_back("smoothness: verified at sampled points only");
      break;
    case SmoothnessStatus::PlantedSmooth:
      break;
    case SmoothnessStatus::Unknown:
      rep.assumptions.push_back("smoothness: unknown (not screened)");
      break;
  }
  return rep;
}

}  // namespace sscope
