#pragma once

#include "sscope/ci_curve.hpp"

namespace sscope {

struct GonalityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class CliffordCase { GonMinus3, GonMinus2 };

/// Gonality = d(C) - l with the Clifford trichotomy tied to the
/// (non)existence of 4-secant lines.
struct GonalityReport {
  int dC = 0;
  int l = 0;
  bool theorem_layer = false;  // false: only the secant structure is filled
  std::string status;          // verified | verified-with-assumptions | out-of-regime
  int gonality = 0;
  int clifford = 0;
  CliffordCase clifford_case = CliffordCase::GonMinus2;
  std::vector<std::string> assumptions;
  std::vector<SecantRecord> witnesses;
};

int gonality_from_secants(int dC, int l);

/// l = 3: (d(C)-6, Gon-3); l >= 4: (d(C)-l-2, Gon-2).
std::pair<int, CliffordCase> clifford_trichotomy(int dC, int l);

/// g(C) = (alpha d(C) + 2) / 2 for a subcanonical curve.
long long genus_subcanonical(long long alpha, long long dC);

/// d(Gamma) <= 3 (Cliff+2) / 2, rounded down.
long long cm_degree_bound(long long clifford);

enum class HypMode { Thm1_4, Thm1_10 };

struct HypothesisReport {
  int alpha = 0;
  int f = 0;
  int p = 0;
  int dC = 0;
  int d_max = 0;
  std::string cond_a_status = "assumed";  // cohomological, never evaluated
  bool cond_b = false;
  bool cond_c = false;
  bool cond_d = false;
  int witness_s = 0;  // smallest s making condition c) hold
  bool overall = false;
  long long gamma_degree_lower_bound = 0;  // informational: (p-f+3) f
};

struct HypSearch {
  int f_lo = 0;
  int f_hi = 0;
  int d_max = -1;  // default d(C) - 3
};

/// Per-f reports of the numeric hypothesis conditions b), c), d);
/// condition a) is recorded as assumed. Mode selects p = alpha (Thm 1.4
/// as applied to gonality) or p = alpha - 1 (the Thm 1.10 variant).
std::vector<HypothesisReport> check_theorem_hypotheses(int alpha, int dC, HypMode mode,
                                                       const HypSearch& search);
bool hypotheses_overall(const std::vector<HypothesisReport>& rows);

/// Admissible surface-degree range for a complete intersection of type
/// (a,b): f = b works when a < b; a = b needs f > b. Upper end: f < alpha+4.
HypSearch ci_hypothesis_range(int a, int b);

GonalityReport analyze_rational(const RationalCurveMap& c, const SecantOptions& opt = {});
GonalityReport analyze_ci(const CICurve& c, const SecantOptions& opt = {});

}  // namespace sscope
