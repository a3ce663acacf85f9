#pragma once

#include <cstdint>
#include <vector>

#include "sscope/mpoly.hpp"

namespace sscope {

struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveOptions {
  std::uint64_t seed = 0;
  double corrector_tol = 1e-8;   // relative Newton tolerance along paths
  double final_residual = 1e-10; // scaled residual for accepted solutions
  double dedup_tol = 1e-8;       // relative solution identification
  double dt_init = 0.1;
  double dt_min = 1e-7;
  int max_steps = 3000;
  double diverge_radius = 1e8;
  double fail_ratio_cap = 0.2;
  int gamma_retries = 2;
  int threads = 0;               // 0 = hardware concurrency
  bool multistart_rescue = true;
  int polish_iters = 60;
};

struct SolveDiagnostics {
  long long bezout_bound = 0;
  int paths_tracked = 0;
  int path_failures = 0;
  int divergent_paths = 0;
  double max_residual = 0.0;
  std::uint64_t seed = 0;
  bool nonfinite_suspect = false;
  int rank_deficient_endpoints = 0;
  bool rescue_used = false;
  int gamma_retries_used = 0;
};

struct SolveResult {
  std::vector<std::vector<CD>> solutions;  // canonically sorted
  SolveDiagnostics diag;
};

/// Product of the total degrees of a square system; the start-system size
/// for the total-degree homotopy and an upper bound on isolated solutions.
long long bezout_bound(const PolySystem& sys);

/// Total-degree homotopy continuation with Euler prediction, Newton
/// correction, adaptive steps, endpoint polishing and deduplication.
/// Deterministic for a fixed (system, seed).
SolveResult solve_square_system(const PolySystem& sys, const SolveOptions& opt = {});

/// Damped multistart Newton from complex Gaussian starts; the cross-check
/// oracle and the rescue path when homotopy path failures exceed the cap.
std::vector<std::vector<CD>> solve_multistart(const PolySystem& sys, int n_starts,
                                              const SolveOptions& opt = {});

/// max_i |F_i(x)| / (1 + sum of term magnitudes), the acceptance residual.
double scaled_residual(const PolySystem& sys, const std::vector<CD>& x);

}  // namespace sscope
