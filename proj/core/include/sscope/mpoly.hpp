#pragma once

#include <vector>

#include "sscope/scalar.hpp"

namespace sscope {

struct PolyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One term of a sparse multivariate polynomial: coefficient times the
/// monomial with the given exponent vector.
struct MTerm {
  std::vector<int> exps;
  CD c;
};

/// Sparse multivariate polynomial with complex coefficients.
class MPoly {
 public:
  explicit MPoly(int nvars = 0) : nvars_(nvars) {}

  static MPoly constant(int nvars, CD c);
  static MPoly variable(int nvars, int i);

  int nvars() const { return nvars_; }
  const std::vector<MTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;  // -1 for the zero polynomial
  double coeff_scale() const;

  void add_term(const std::vector<int>& exps, CD c);

  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const MPoly& o);
  MPoly& operator*=(CD c);
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(MPoly a, const MPoly& b) { return a *= b; }
  friend MPoly operator*(MPoly a, CD c) { return a *= c; }

  MPoly derivative(int var) const;

  CD eval(const std::vector<CD>& x) const;
  /// Value plus full gradient in one pass (prefix/suffix products).
  CD eval_grad(const std::vector<CD>& x, std::vector<CD>& grad) const;

  /// Combine equal monomials, drop exact zeros, sort lexicographically.
  void normalize();

 private:
  int nvars_;
  std::vector<MTerm> terms_;
};

/// Square system carrier for the homotopy and Newton solvers.
struct PolySystem {
  int n_vars = 0;
  std::vector<MPoly> polys;

  void check_square() const {
    if (static_cast<int>(polys.size()) != n_vars)
      throw PolyError("PolySystem: not square");
    for (const auto& p : polys)
      if (p.nvars() != n_vars) throw PolyError("PolySystem: variable count mismatch");
  }
};

}  // namespace sscope
