#include "sscope/line.hpp"

#include <Eigen/SVD>

namespace sscope {

namespace {

// Orthonormal kernel basis of a 2x4 matrix (rank 2 expected).
std::array<Vec4, 2> kernel2(const Eigen::Matrix<CD, 2, 4>& m) {
  Eigen::JacobiSVD<Eigen::Matrix<CD, 2, 4>> svd(m, Eigen::ComputeFullV);
  if (svd.singularValues()(1) <= 1e-12 * svd.singularValues()(0))
    throw LineError("kernel2: input rows are not independent");
  const auto& V = svd.matrixV();
  return {Vec4(V.col(2)), Vec4(V.col(3))};
}

}  // namespace

Vec6 plucker_of_frame(const Vec4& p, const Vec4& q) {
  Vec6 pl;
  pl(0) = p(0) * q(1) - p(1) * q(0);  // p01
  pl(1) = p(0) * q(2) - p(2) * q(0);  // p02
  pl(2) = p(0) * q(3) - p(3) * q(0);  // p03
  pl(3) = p(1) * q(2) - p(2) * q(1);  // p12
  pl(4) = p(1) * q(3) - p(3) * q(1);  // p13
  pl(5) = p(2) * q(3) - p(3) * q(2);  // p23
  return pl;
}

LineP3 LineP3::from_frame(const Vec4& p, const Vec4& q) {
  LineP3 l;
  l.frame = {p.normalized(), q.normalized()};
  l.plucker = plucker_of_frame(l.frame[0], l.frame[1]);
  if (l.plucker.norm() < 1e-12)
    throw LineError("LineP3: frame points coincide");
  Eigen::Matrix<CD, 2, 4> m;
  m.row(0) = l.frame[0].transpose();
  m.row(1) = l.frame[1].transpose();
  l.dual = kernel2(m);
  return l;
}

LineP3 LineP3::from_dual(const Vec4& a, const Vec4& b) {
  Eigen::Matrix<CD, 2, 4> m;
  m.row(0) = a.normalized().transpose();
  m.row(1) = b.normalized().transpose();
  auto pts = kernel2(m);
  LineP3 l;
  l.frame = pts;
  l.dual = {a.normalized(), b.normalized()};
  l.plucker = plucker_of_frame(l.frame[0], l.frame[1]);
  if (l.plucker.norm() < 1e-12)
    throw LineError("LineP3: dual forms do not cut a line");
  return l;
}

Vec6 LineP3::canonical_plucker() const {
  // Normalize scale, then kill the phase by making the largest-magnitude
  // component real positive.
  Vec6 p = plucker;
  int imax = 0;
  double best = 0;
  for (int i = 0; i < 6; ++i)
    if (std::abs(p(i)) > best) {
      best = std::abs(p(i));
      imax = i;
    }
  if (best == 0) throw LineError("canonical_plucker: zero vector");
  p /= p(imax) / best;  // phase
  p /= best;            // scale
  return p;
}

double LineP3::plucker_residual() const {
  const Vec6& p = plucker;
  const CD q = p(0) * p(5) - p(1) * p(4) + p(2) * p(3);
  const double s = p.squaredNorm();
  return s == 0 ? 0.0 : std::abs(q) / s;
}

double LineP3::incidence_residual() const {
  // Incidence is the bilinear pairing sum a_i f_i (no conjugation).
  double r = 0;
  for (const auto& a : dual)
    for (const auto& f : frame) {
      CD s(0, 0);
      for (int i = 0; i < 4; ++i) s += a(i) * f(i);
      r = std::max(r, std::abs(s) / std::max(1e-300, a.norm() * f.norm()));
    }
  return r;
}

Vec4 LineP3::point_at(const CD& s, const CD& t) const {
  return frame[0] * s + frame[1] * t;
}

double line_distance(const LineP3& a, const LineP3& b) {
  return (a.canonical_plucker() - b.canonical_plucker()).lpNorm<Eigen::Infinity>();
}

}  // namespace sscope
