#pragma once

#include <cstdint>

#include "sscope/binary_form.hpp"

namespace sscope {

struct RootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RootOptions {
  double trim_tol = 1e-11;    // boundary-point detection, relative to scale
  double polish_tol = 1e-12;  // Newton polish residual target (relative)
  double dedup_tol = 1e-8;    // point identification tolerance
  int max_iters = 160;
  int retries = 3;
  std::uint64_t seed = 0x5eca97;
};

/// Divisor of a nonzero complex binary form: simultaneous-iteration
/// (Aberth) root finding on the better-conditioned dehomogenization,
/// Newton polish, multiplicities by cluster detection. [1:0] and [0:1]
/// are read off the vanishing boundary coefficients.
DivisorP1<CD> roots_of_form(const BinaryForm<CD>& f, const RootOptions& opt = {});

/// Common divisor of two nonzero forms (the divisor of their gcd),
/// computed by matching the two root divisors and jointly polishing each
/// common point. Returns the divisor together with the worst scaled
/// residual over its support.
struct CommonDivisor {
  DivisorP1<CD> divisor;
  double residual = 0.0;
};
CommonDivisor common_divisor(const BinaryForm<CD>& f, const BinaryForm<CD>& g,
                             const RootOptions& opt = {});

/// Scaled evaluation residual |f(p)| / sum_i |c_i| |s|^(d-i) |t|^i.
double eval_residual(const BinaryForm<CD>& f, const PointP1<CD>& p);

}  // namespace sscope
