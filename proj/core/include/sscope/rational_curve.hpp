#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sscope/binary_form.hpp"
#include "sscope/line.hpp"
#include "sscope/psolve.hpp"
#include "sscope/roots.hpp"

namespace sscope {

struct CurveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RankAmbiguous : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonFiniteSecantFamily : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConstructError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rational space curve: four degree-d binary forms spanning the linear
/// system that maps P^1 into P^3. Complex by default; exact coefficients
/// are kept alongside when the input was rational.
struct RationalCurveMap {
  int degree = 0;
  std::array<BinaryForm<CD>, 4> forms;
  std::optional<std::array<BinaryForm<Rat>, 4>> exact_forms;

  double scale() const {
    double s = 0;
    for (const auto& f : forms) s = std::max(s, f.scale());
    return s;
  }
};

/// A found (or planted) secant line with its intersection data.
struct SecantRecord {
  LineP3 line;
  DivisorP1<CD> divisor;  // preimage on the curve's P^1
  int length = 0;         // deg(divisor), >= the requested k
  bool proper = false;    // length == requested k
  bool maximal = false;   // no longer secant exists on the curve
  double residual = 0.0;
};

struct EmbeddingVerdict {
  bool valid = false;
  bool inconclusive = false;
  std::vector<std::string> reasons;
  std::optional<PointP1<CD>> base_point;
  std::optional<std::pair<PointP1<CD>, PointP1<CD>>> double_point;
  std::optional<PointP1<CD>> non_immersive_point;
};

struct SecantOptions {
  std::uint64_t seed = 0;
  SolveOptions solve;
  double verify_residual = 1e-8;
  double line_dedup = 1e-6;
  int nonfinite_absorb_cap = 64;  // distinct verified lines a flagged solve may emit
};

/// Very-ampleness check: base-point freeness, injectivity via the
/// double-point (Bezoutian) system, immersion via the 4x2 Jacobian minors.
EmbeddingVerdict validate_embedding(const RationalCurveMap& c, std::uint64_t seed = 1);

/// True iff the images of the given distinct points are aligned in P^3.
/// Computes both the rank-<=2 test on the evaluation matrix and the
/// pencil-dimension test on the divisor side, and insists they agree.
bool is_aligned(const RationalCurveMap& c, const std::vector<PointP1<CD>>& pts);

/// Intersection divisor of the curve with a line: the divisor of the gcd
/// of the two restricted forms cut out by the line's dual frame.
struct IntersectionDivisor {
  DivisorP1<CD> divisor;
  int length = 0;
  double residual = 0.0;
};
IntersectionDivisor intersection_divisor_with_line(const RationalCurveMap& c,
                                                   const LineP3& line,
                                                   const RootOptions& ropt = {});

/// All lines meeting the curve in length >= k (k >= 4 yields the finite
/// enumeration; k = 3 adds sliced witnesses of the trisecant family).
std::vector<SecantRecord> find_k_secants(const RationalCurveMap& c, int k,
                                         const SecantOptions& opt = {});

/// Maximal intersection length over all lines, with maximal witnesses.
struct SecantOrder {
  int l = 2;
  std::vector<SecantRecord> witnesses;
};
SecantOrder secant_order(const RationalCurveMap& c, const SecantOptions& opt = {});

/// Draws a curve of degree d with a planted k-secant: two basis forms share
/// a planted degree-k divisor factor, the rest are random; retries until
/// the embedding validates.
struct PlantedCurve {
  RationalCurveMap curve;
  SecantRecord planted;
  DivisorP1<CD> planted_divisor;
  std::uint64_t accepted_seed = 0;
};
PlantedCurve construct_with_k_secant(int d, int k, std::uint64_t seed);

/// Random curve with validate_embedding == valid (resampled as needed).
RationalCurveMap random_valid_curve(int d, std::uint64_t seed);

/// Coordinate changes, used by the invariance tests and the CLI.
RationalCurveMap apply_projective(const RationalCurveMap& c,
                                  const Eigen::Matrix<CD, 4, 4>& m);
RationalCurveMap apply_mobius(const RationalCurveMap& c, const CD& m00, const CD& m01,
                              const CD& m10, const CD& m11);

BinaryForm<CD> random_form(int degree, Rng& rng);

}  // namespace sscope
