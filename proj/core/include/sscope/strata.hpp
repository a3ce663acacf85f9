#pragma once

#include <string>

#include "sscope/ci_curve.hpp"
#include "sscope/mpoly.hpp"

namespace sscope {

struct StrataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Length-k aligned scheme: a line together with a degree-k divisor on it.
struct AlignedScheme {
  LineP3 line;
  DivisorP1<CD> divisor;

  int length() const { return divisor.degree(); }
};
AlignedScheme random_aligned_scheme(int k, std::uint64_t seed);

/// Rank of the evaluation map from degree-m forms on P^3 to functions on an
/// aligned scheme Z; equals min(k, m+1).
int conditions_imposed(const AlignedScheme& z, int m);

/// Local model of a stratum: chart variables, defining equations (possibly
/// empty), a certified sample point from a planted construction, and the
/// dimension of the quotient/reparametrization fiber the chart carries on
/// top of the stratum itself.
struct VarietyChart {
  std::string label;
  int ambient_dim = 0;  // number of chart variables
  PolySystem equations;
  std::vector<CD> sample;
  int quotient_shift = 0;
  int expected_dim = 0;
};

enum class StratumLabel { Alk, Pk, IkRational, CIFiber };

struct StratumParams {
  int d = 0;
  int k = 0;
  int a = 0;
  int b = 0;
};

VarietyChart stratum_equations(StratumLabel label, const StratumParams& params,
                               std::uint64_t seed);

enum class DimVerdict { Match, Mismatch, Ambiguous };

struct DimensionReport {
  std::string label;
  int ambient_dim = 0;
  int jacobian_rank = 0;
  int quotient_shift = 0;
  int estimated_dim = 0;  // ambient - rank - shift
  int expected_dim = 0;
  double singular_value_gap = 0.0;
  double sample_residual = 0.0;
  DimVerdict verdict = DimVerdict::Ambiguous;
};

/// Numerical local dimension at the chart sample: polish, then the rank of
/// the equation Jacobian via singular values (relative cutoff 1e-7, a
/// verdict only when the gap across the cutoff exceeds 10^3).
DimensionReport estimate_local_dimension(const VarietyChart& chart);

// Closed-form expected dimensions.
int expected_dim_alk(int k);
int expected_dim_pk(int d, int k);
int expected_dim_incidence_pencils(int d, int k);  // the fibered incidence over P_k
int expected_dim_iks(int d, int k);
int expected_dim_hks_rational(int d, int k);
long long expected_dim_hks_ci(int a, int b, int k);
long long expected_reldim_ci_fiber(int a, int b, int k);

struct ExpectedDimRow {
  std::string label;
  std::string params;
  long long dim = 0;
};
std::vector<ExpectedDimRow> expected_dims_table(int d_lo, int d_hi);

}  // namespace sscope
