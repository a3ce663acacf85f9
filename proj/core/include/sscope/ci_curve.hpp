#pragma once

#include <optional>

#include "sscope/mpoly.hpp"
#include "sscope/rational_curve.hpp"

namespace sscope {

/// Homogeneous polynomial in 4 variables, the defining equation of a
/// surface in P^3.
struct SurfacePoly {
  int degree = 0;
  MPoly poly{4};

  void check() const {
    if (poly.is_zero()) throw PolyError("SurfacePoly: zero polynomial");
    for (const auto& t : poly.terms()) {
      int s = 0;
      for (int e : t.exps) s += e;
      if (s != degree) throw PolyError("SurfacePoly: non-homogeneous term");
    }
  }
};

enum class SmoothnessStatus { SolverScreened, VerifiedAtSamples, PlantedSmooth, Unknown };

/// Complete-intersection curve F_a ∩ F_b with a <= b.
struct CICurve {
  SurfacePoly Fa;
  SurfacePoly Fb;
  SmoothnessStatus smoothness = SmoothnessStatus::Unknown;

  int a() const { return Fa.degree; }
  int b() const { return Fb.degree; }
  int curve_degree() const { return Fa.degree * Fb.degree; }
};

/// F restricted to the line via the parametrization s P + t Q of its frame;
/// identically zero iff the line lies on the surface.
BinaryForm<CD> restrict_to_line(const SurfacePoly& f, const LineP3& line);

/// Length of C ∩ L with multiplicity. If L lies on one surface the length
/// is the degree of the divisor cut by the other one (= its degree); a line
/// on both surfaces violates the curve contract.
int line_intersection_length(const CICurve& c, const LineP3& line);

/// Divisor version used to fill SecantRecords (divisor lives on the line's
/// parameter space [s:t]).
IntersectionDivisor ci_intersection_divisor(const CICurve& c, const LineP3& line,
                                            const RootOptions& ropt = {});

/// Lines with intersection length >= k over the six affine charts of
/// G(1,3): on-surface enumeration for k above min(a,b)'s reach, cofactor
/// systems for 4 <= k <= a, sliced witnesses for k = 3.
std::vector<SecantRecord> find_k_secants_ci(const CICurve& c, int k,
                                            const SecantOptions& opt = {});

SecantOrder secant_order_ci(const CICurve& c, const SecantOptions& opt = {});

/// Random integer-coefficient surfaces resampled until the smoothness
/// screen passes (Jacobian-minor solve for a+b <= 9, point sampling above).
CICurve random_smooth_ci(int a, int b, std::uint64_t seed);

struct PlantedCI {
  CICurve curve;
  LineP3 line;
  int length = 0;
  bool ab_equal_warning = false;  // a = b relies on an unverified genericity argument
  std::uint64_t accepted_seed = 0;
};
/// F_a random in the ideal of a random line L, F_b random; the planted L is
/// a proper b-secant. Requires a >= 4 (a = b allowed with a warning flag).
PlantedCI construct_ci_with_secant_line(int a, int b, std::uint64_t seed);

/// Dimension of the Hilbert scheme of complete intersections of type (a,b).
long long hilbert_dim_ci(int a, int b);

/// All exponent vectors of total degree deg in nvars variables.
std::vector<std::vector<int>> monomials_of_degree(int nvars, int deg);

SurfacePoly random_surface(int degree, Rng& rng, bool integer_coeffs);

/// Sample points of C (solved plane sections); used by the smoothness
/// sampling screen and the degree spot-check.
std::vector<Vec4> sample_curve_points(const CICurve& c, int want, std::uint64_t seed);

}  // namespace sscope
