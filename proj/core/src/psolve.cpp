#include "sscope/psolve.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <thread>

namespace sscope {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// Flattened term storage for fast repeated evaluation of F and J.
class SystemEval {
 public:
  explicit SystemEval(const PolySystem& sys)
      : n_(sys.n_vars), m_(static_cast<int>(sys.polys.size())) {
    offsets_.push_back(0);
    for (const auto& p : sys.polys) {
      for (const auto& t : p.terms()) {
        coefs_.push_back(t.c);
        exps_.insert(exps_.end(), t.exps.begin(), t.exps.end());
        maxdeg_ = std::max(maxdeg_, *std::max_element(t.exps.begin(), t.exps.end()));
      }
      offsets_.push_back(static_cast<int>(coefs_.size()));
    }
  }

  int n() const { return n_; }
  int m() const { return m_; }

  void eval(const std::vector<CD>& x, VectorXcd& F) const {
    thread_local std::vector<CD> pw;
    build_powers(x, pw);
    for (int e = 0; e < m_; ++e) {
      CD v(0, 0);
      for (int t = offsets_[e]; t < offsets_[e + 1]; ++t) {
        CD m = coefs_[t];
        const int* ex = &exps_[static_cast<std::size_t>(t) * n_];
        for (int i = 0; i < n_; ++i) m *= pw[i * (maxdeg_ + 1) + ex[i]];
        v += m;
      }
      F(e) = v;
    }
  }

  void eval_jac(const std::vector<CD>& x, VectorXcd& F, MatrixXcd& J) const {
    thread_local std::vector<CD> pw, prefix, suffix;
    build_powers(x, pw);
    prefix.assign(n_ + 1, CD(1, 0));
    suffix.assign(n_ + 1, CD(1, 0));
    F.setZero();
    J.setZero();
    for (int e = 0; e < m_; ++e) {
      for (int t = offsets_[e]; t < offsets_[e + 1]; ++t) {
        const int* ex = &exps_[static_cast<std::size_t>(t) * n_];
        for (int i = 0; i < n_; ++i)
          prefix[i + 1] = prefix[i] * pw[i * (maxdeg_ + 1) + ex[i]];
        suffix[n_] = CD(1, 0);
        for (int i = n_ - 1; i >= 0; --i)
          suffix[i] = suffix[i + 1] * pw[i * (maxdeg_ + 1) + ex[i]];
        const CD c = coefs_[t];
        F(e) += c * prefix[n_];
        for (int i = 0; i < n_; ++i) {
          const int d = ex[i];
          if (d == 0) continue;
          J(e, i) += c * double(d) * prefix[i] * suffix[i + 1] *
                     pw[i * (maxdeg_ + 1) + d - 1];
        }
      }
    }
  }

  /// 1 + sum of term magnitudes per equation, for scaled residuals.
  double scale_at(const std::vector<CD>& x, int e) const {
    thread_local std::vector<CD> pw;
    build_powers(x, pw);
    double s = 1.0;
    for (int t = offsets_[e]; t < offsets_[e + 1]; ++t) {
      double m = std::abs(coefs_[t]);
      const int* ex = &exps_[static_cast<std::size_t>(t) * n_];
      for (int i = 0; i < n_; ++i) m *= std::abs(pw[i * (maxdeg_ + 1) + ex[i]]);
      s += m;
    }
    return s;
  }

 private:
  void build_powers(const std::vector<CD>& x, std::vector<CD>& pw) const {
    pw.assign(static_cast<std::size_t>(n_) * (maxdeg_ + 1), CD(1, 0));
    for (int i = 0; i < n_; ++i)
      for (int d = 1; d <= maxdeg_; ++d)
        pw[i * (maxdeg_ + 1) + d] = pw[i * (maxdeg_ + 1) + d - 1] * x[i];
  }

  int n_;
  int m_;
  int maxdeg_ = 0;
  std::vector<CD> coefs_;
  std::vector<int> exps_;
  std::vector<int> offsets_;
};

double inf_norm(const std::vector<CD>& x) {
  double m = 0;
  for (const auto& v : x) m = std::max(m, std::abs(v));
  return m;
}

enum class PathStatus { Converged, Divergent, Failed };

struct PathOutcome {
  PathStatus status = PathStatus::Failed;
  std::vector<CD> x;
  double residual = 0;
};

struct Homotopy {
  const SystemEval& target;
  std::vector<int> degs;   // start-system degrees
  std::vector<CD> start_c; // x_i^{d_i} = c_i
  CD gamma;

  // H(x,t) = (1-t) gamma G(x) + t F(x)
  void eval_jac(const std::vector<CD>& x, double t, VectorXcd& H, MatrixXcd& J,
                VectorXcd& Ft, MatrixXcd& scratch) const {
    const int n = target.n();
    target.eval_jac(x, Ft, scratch);
    for (int i = 0; i < n; ++i) {
      CD xp(1, 0);
      for (int k = 0; k < degs[i] - 1; ++k) xp *= x[i];
      const CD g = xp * x[i] - start_c[i];   // x^d - c
      const CD dg = double(degs[i]) * xp;    // d x^(d-1)
      H(i) = (1.0 - t) * gamma * g + t * Ft(i);
      for (int j = 0; j < n; ++j) J(i, j) = t * scratch(i, j);
      J(i, i) += (1.0 - t) * gamma * dg;
    }
  }
};

PathOutcome track_path(const Homotopy& hom, std::vector<CD> x, const SolveOptions& opt) {
  const int n = hom.target.n();
  VectorXcd H(n), Ft(n), rhs(n), dx(n);
  MatrixXcd J(n, n), scratch(n, n);

  double t = 0.0, dt = opt.dt_init;
  int streak = 0, steps = 0;
  PathOutcome out;

  while (t < 1.0) {
    if (++steps > opt.max_steps) return out;  // Failed
    const double t2 = std::min(1.0, t + dt);

    // Euler predictor: J dx = -(F - gamma G) (t2 - t); F - gamma G = dH/dt.
    hom.eval_jac(x, t, H, J, Ft, scratch);
    VectorXcd Gpart(n);
    for (int i = 0; i < n; ++i) {
      // gamma*G recovered from H = (1-t) gamma G + t F
      Gpart(i) = (t < 1.0) ? (H(i) - t * Ft(i)) / (1.0 - t) : CD(0, 0);
    }
    Eigen::PartialPivLU<MatrixXcd> lu(J);
    rhs = -(Ft - Gpart) * (t2 - t);
    dx = lu.solve(rhs);
    std::vector<CD> xc(x);
    for (int i = 0; i < n; ++i) xc[i] += dx(i);

    // Newton corrector at t2.
    bool ok = false;
    for (int it = 0; it < 3; ++it) {
      hom.eval_jac(xc, t2, H, J, Ft, scratch);
      Eigen::PartialPivLU<MatrixXcd> lu2(J);
      dx = lu2.solve(-H);
      for (int i = 0; i < n; ++i) xc[i] += dx(i);
      if (dx.lpNorm<Eigen::Infinity>() <= opt.corrector_tol * (1.0 + inf_norm(xc))) {
        ok = true;
        break;
      }
    }

    if (ok) {
      x = std::move(xc);
      t = t2;
      if (++streak >= 4) {
        dt = std::min(dt * 2.0, 0.2);
        streak = 0;
      }
      if (inf_norm(x) > opt.diverge_radius) {
        out.status = PathStatus::Divergent;
        return out;
      }
    } else {
      dt *= 0.5;
      streak = 0;
      if (dt < opt.dt_min) {
        if (t > 0.99) break;  // endgame: polish from here
        return out;           // Failed
      }
    }
  }

  // Final polish on the target system.
  VectorXcd F(n);
  MatrixXcd Jf(n, n);
  for (int it = 0; it < opt.polish_iters; ++it) {
    hom.target.eval_jac(x, F, Jf);
    Eigen::PartialPivLU<MatrixXcd> lu(Jf);
    dx = lu.solve(-F);
    double step = dx.lpNorm<Eigen::Infinity>();
    for (int i = 0; i < n; ++i) x[i] += dx(i);
    if (inf_norm(x) > opt.diverge_radius) {
      out.status = PathStatus::Divergent;
      return out;
    }
    if (step <= 1e-15 * (1.0 + inf_norm(x))) break;
  }
  hom.target.eval(x, F);
  double res = 0;
  for (int i = 0; i < n; ++i)
    res = std::max(res, std::abs(F(i)) / hom.target.scale_at(x, i));
  if (res <= opt.final_residual) {
    out.status = PathStatus::Converged;
    out.x = std::move(x);
    out.residual = res;
  }
  return out;
}

bool same_solution(const std::vector<CD>& a, const std::vector<CD>& b, double tol) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d <= tol * (1.0 + std::max(inf_norm(a), inf_norm(b)));
}

bool lex_less(const std::vector<CD>& a, const std::vector<CD>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

void run_parallel(int njobs, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || njobs <= 1) {
    for (int i = 0; i < njobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= njobs) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace

long long bezout_bound(const PolySystem& sys) {
  sys.check_square();
  long long b = 1;
  for (const auto& p : sys.polys) {
    const int d = p.total_degree();
    if (d < 0) throw PolyError("bezout_bound: zero polynomial in system");
    b *= std::max(d, 0);
  }
  return b;
}

double scaled_residual(const PolySystem& sys, const std::vector<CD>& x) {
  SystemEval ev(sys);
  VectorXcd F(ev.m());
  ev.eval(x, F);
  double r = 0;
  for (int i = 0; i < ev.m(); ++i)
    r = std::max(r, std::abs(F(i)) / ev.scale_at(x, i));
  return r;
}

SolveResult solve_square_system(const PolySystem& sys, const SolveOptions& opt) {
  sys.check_square();
  const int n = sys.n_vars;
  const long long bez = bezout_bound(sys);
  SystemEval ev(sys);

  const int threads = opt.threads > 0
                          ? opt.threads
                          : std::max(1u, std::thread::hardware_concurrency());

  SolveResult best;
  bool have_best = false;

  for (int attempt = 0; attempt <= opt.gamma_retries; ++attempt) {
    Rng rng(opt.seed + 0x9E37u * static_cast<std::uint64_t>(attempt));
    Homotopy hom{ev, {}, {}, rng.unit_complex()};
    for (const auto& p : sys.polys) hom.degs.push_back(std::max(p.total_degree(), 1));
    for (int i = 0; i < n; ++i) hom.start_c.push_back(rng.unit_complex());

    // Enumerate start roots: mixed-radix digits over the degrees.
    const long long npaths = bez == 0 ? 0 : [&] {
      long long m = 1;
      for (int d : hom.degs) m *= d;
      return m;
    }();

    std::vector<PathOutcome> outcomes(npaths);
    run_parallel(
        static_cast<int>(npaths), threads,
        [&](int pid) {
          std::vector<CD> x0(n);
          long long rem = pid;
          for (int i = 0; i < n; ++i) {
            const int d = hom.degs[i];
            const int digit = static_cast<int>(rem % d);
            rem /= d;
            const double arg = std::arg(hom.start_c[i]);
            const double ang = (arg + 2.0 * 3.14159265358979323846 * digit) / d;
            x0[i] = CD(std::cos(ang), std::sin(ang));
          }
          outcomes[pid] = track_path(hom, std::move(x0), opt);
        });

    SolveResult res;
    res.diag.bezout_bound = bez;
    res.diag.paths_tracked = static_cast<int>(npaths);
    res.diag.seed = opt.seed;
    res.diag.gamma_retries_used = attempt;

    // Ordered merge + dedup keeps results schedule-independent.
    std::vector<int> weight;  // converged paths per representative
    for (const auto& oc : outcomes) {
      if (oc.status == PathStatus::Failed) ++res.diag.path_failures;
      if (oc.status == PathStatus::Divergent) ++res.diag.divergent_paths;
      if (oc.status != PathStatus::Converged) continue;
      res.diag.max_residual = std::max(res.diag.max_residual, oc.residual);
      bool found = false;
      for (std::size_t i = 0; i < res.solutions.size(); ++i) {
        if (same_solution(res.solutions[i], oc.x, opt.dedup_tol)) {
          ++weight[i];
          found = true;
          break;
        }
      }
      if (!found) {
        res.solutions.push_back(oc.x);
        weight.push_back(1);
      }
    }

    // Endpoint Jacobian rank check: positive-dimensional sets show up as
    // converged paths sitting on rank-deficient endpoints.
    int rankdef_paths = 0;
    VectorXcd F(n);
    MatrixXcd J(n, n);
    for (std::size_t i = 0; i < res.solutions.size(); ++i) {
      ev.eval_jac(res.solutions[i], F, J);
      Eigen::JacobiSVD<MatrixXcd> svd(J);
      const auto& sv = svd.singularValues();
      if (sv(0) == 0.0 || sv(n - 1) / sv(0) < 1e-8) {
        ++res.diag.rank_deficient_endpoints;
        rankdef_paths += weight[i];
      }
    }
    if (res.diag.paths_tracked > 0 &&
        rankdef_paths > 0.2 * res.diag.paths_tracked)
      res.diag.nonfinite_suspect = true;

    std::sort(res.solutions.begin(), res.solutions.end(), lex_less);

    const double fail_ratio =
        npaths == 0 ? 0.0 : double(res.diag.path_failures) / double(npaths);
    if (!have_best || res.diag.path_failures < best.diag.path_failures) {
      best = res;
      have_best = true;
    }
    if (fail_ratio <= opt.fail_ratio_cap) return res;
  }

  // Every gamma exceeded the failure cap.
  if (opt.multistart_rescue) {
    auto extra = solve_multistart(sys, std::max<long long>(200, 4 * bez) > 20000
                                           ? 20000
                                           : static_cast<int>(std::max<long long>(200, 4 * bez)),
                                  opt);
    for (const auto& s : extra) {
      bool found = false;
      for (const auto& have : best.solutions)
        if (same_solution(have, s, opt.dedup_tol)) {
          found = true;
          break;
        }
      if (!found) best.solutions.push_back(s);
    }
    std::sort(best.solutions.begin(), best.solutions.end(), lex_less);
    best.diag.rescue_used = true;
    return best;
  }
  throw SolverFailure("solve_square_system: path-failure ratio above cap after gamma retries");
}

std::vector<std::vector<CD>> solve_multistart(const PolySystem& sys, int n_starts,
                                              const SolveOptions& opt) {
  sys.check_square();
  const int n = sys.n_vars;
  SystemEval ev(sys);
  const int threads = opt.threads > 0
                          ? opt.threads
                          : std::max(1u, std::thread::hardware_concurrency());

  // Pre-generate all starts so parallel execution stays deterministic.
  Rng rng(opt.seed ^ 0xA5A5A5A5ull);
  std::vector<std::vector<CD>> starts(n_starts, std::vector<CD>(n));
  for (auto& s : starts)
    for (auto& c : s) c = rng.gauss_complex();

  std::vector<std::vector<CD>> endpoints(n_starts);
  std::vector<char> good(n_starts, 0);

  run_parallel(n_starts, threads, [&](int sid) {
    std::vector<CD> x = starts[sid];
    VectorXcd F(n), dx(n);
    MatrixXcd J(n, n);
    ev.eval_jac(x, F, J);
    double fn = F.norm();
    for (int it = 0; it < 100; ++it) {
      Eigen::PartialPivLU<MatrixXcd> lu(J);
      dx = lu.solve(-F);
      double lambda = 1.0;
      std::vector<CD> xn(n);
      bool moved = false;
      for (int half = 0; half < 9; ++half) {
        for (int i = 0; i < n; ++i) xn[i] = x[i] + lambda * dx(i);
        VectorXcd Fn(n);
        ev.eval(xn, Fn);
        if (Fn.norm() <= (1.0 - 0.25 * lambda) * fn) {
          x = xn;
          moved = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!moved) break;
      ev.eval_jac(x, F, J);
      fn = F.norm();
      if (inf_norm(x) > opt.diverge_radius) break;
      if (dx.lpNorm<Eigen::Infinity>() < 1e-14 * (1.0 + inf_norm(x))) break;
    }
    double res = 0;
    ev.eval(x, F);
    for (int i = 0; i < n; ++i)
      res = std::max(res, std::abs(F(i)) / ev.scale_at(x, i));
    if (res <= opt.final_residual) {
      endpoints[sid] = std::move(x);
      good[sid] = 1;
    }
  });

  std::vector<std::vector<CD>> sols;
  for (int i = 0; i < n_starts; ++i) {
    if (!good[i]) continue;
    bool found = false;
    for (const auto& s : sols)
      if (same_solution(s, endpoints[i], opt.dedup_tol)) {
        found = true;
        break;
      }
    if (!found) sols.push_back(endpoints[i]);
  }
  std::sort(sols.begin(), sols.end(), lex_less);
  return sols;
}

}  // namespace sscope
