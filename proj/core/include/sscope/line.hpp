#pragma once

#include <Eigen/Dense>
#include <array>

#include "sscope/scalar.hpp"

namespace sscope {

struct LineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Vec4 = Eigen::Matrix<CD, 4, 1>;
using Vec6 = Eigen::Matrix<CD, 6, 1>;

/// Line in P^3, kept in three equivalent representations:
///  - plucker: 6 coordinates (p01, p02, p03, p12, p13, p23) on the quadric,
///  - frame: two distinct points spanning the line,
///  - dual: two independent linear forms cutting it out.
struct LineP3 {
  Vec6 plucker;
  std::array<Vec4, 2> frame;
  std::array<Vec4, 2> dual;

  static LineP3 from_frame(const Vec4& p, const Vec4& q);
  static LineP3 from_dual(const Vec4& a, const Vec4& b);

  /// Scale/phase-normalized Plücker vector usable as a dedup key.
  Vec6 canonical_plucker() const;

  /// Residual of the Plücker quadric p01 p23 - p02 p13 + p03 p12, scaled.
  double plucker_residual() const;
  /// Worst |dual_i . frame_j| over the four pairings, scaled.
  double incidence_residual() const;

  /// Point p s + q t on the line for a parameter [s:t].
  Vec4 point_at(const CD& s, const CD& t) const;
};

/// Distance between canonical Plücker vectors; 0 iff same line.
double line_distance(const LineP3& a, const LineP3& b);

Vec6 plucker_of_frame(const Vec4& p, const Vec4& q);

}  // namespace sscope
