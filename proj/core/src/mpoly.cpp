#include "sscope/mpoly.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sscope {

MPoly MPoly::constant(int nvars, CD c) {
  MPoly p(nvars);
  if (c != CD(0.0, 0.0)) p.terms_.push_back({std::vector<int>(nvars, 0), c});
  return p;
}

MPoly MPoly::variable(int nvars, int i) {
  MPoly p(nvars);
  std::vector<int> e(nvars, 0);
  e[i] = 1;
  p.terms_.push_back({std::move(e), CD(1.0, 0.0)});
  return p;
}

int MPoly::total_degree() const {
  int d = -1;
  for (const auto& t : terms_) {
    int s = 0;
    for (int e : t.exps) s += e;
    d = std::max(d, s);
  }
  return d;
}

double MPoly::coeff_scale() const {
  double s = 0;
  for (const auto& t : terms_) s = std::max(s, std::abs(t.c));
  return s;
}

void MPoly::add_term(const std::vector<int>& exps, CD c) {
  if (static_cast<int>(exps.size()) != nvars_)
    throw PolyError("MPoly: exponent vector length mismatch");
  terms_.push_back({exps, c});
}

MPoly& MPoly::operator+=(const MPoly& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  normalize();
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  for (const auto& t : o.terms_) terms_.push_back({t.exps, -t.c});
  normalize();
  return *this;
}

MPoly& MPoly::operator*=(const MPoly& o) {
  std::vector<MTerm> out;
  out.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : o.terms_) {
      MTerm t;
      t.exps.resize(nvars_);
      for (int i = 0; i < nvars_; ++i) t.exps[i] = a.exps[i] + b.exps[i];
      t.c = a.c * b.c;
      out.push_back(std::move(t));
    }
  terms_ = std::move(out);
  normalize();
  return *this;
}

MPoly& MPoly::operator*=(CD c) {
  if (c == CD(0.0, 0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.c *= c;
  return *this;
}

MPoly MPoly::derivative(int var) const {
  MPoly d(nvars_);
  for (const auto& t : terms_) {
    if (t.exps[var] == 0) continue;
    MTerm s = t;
    s.c *= double(s.exps[var]);
    --s.exps[var];
    d.terms_.push_back(std::move(s));
  }
  d.normalize();
  return d;
}

CD MPoly::eval(const std::vector<CD>& x) const {
  CD v(0.0, 0.0);
  for (const auto& t : terms_) {
    CD m = t.c;
    for (int i = 0; i < nvars_; ++i) {
      CD p(1.0, 0.0);
      CD b = x[i];
      int e = t.exps[i];
      while (e > 0) {
        if (e & 1) p *= b;
        b *= b;
        e >>= 1;
      }
      m *= p;
    }
    v += m;
  }
  return v;
}

CD MPoly::eval_grad(const std::vector<CD>& x, std::vector<CD>& grad) const {
  grad.assign(nvars_, CD(0.0, 0.0));
  CD v(0.0, 0.0);
  std::vector<CD> pw(nvars_), prefix(nvars_ + 1), suffix(nvars_ + 1);
  for (const auto& t : terms_) {
    for (int i = 0; i < nvars_; ++i) {
      CD p(1.0, 0.0);
      CD b = x[i];
      int e = t.exps[i];
      while (e > 0) {
        if (e & 1) p *= b;
        b *= b;
        e >>= 1;
      }
      pw[i] = p;
    }
    prefix[0] = CD(1.0, 0.0);
    for (int i = 0; i < nvars_; ++i) prefix[i + 1] = prefix[i] * pw[i];
    suffix[nvars_] = CD(1.0, 0.0);
    for (int i = nvars_ - 1; i >= 0; --i) suffix[i] = suffix[i + 1] * pw[i];
    v += t.c * prefix[nvars_];
    for (int i = 0; i < nvars_; ++i) {
      const int e = t.exps[i];
      if (e == 0) continue;
      // x_i^(e-1) computed from pw by one division unless x_i ~ 0.
      CD pim1;
      if (std::abs(x[i]) > 1e-150) {
        pim1 = pw[i] / x[i];
      } else {
        pim1 = CD(1.0, 0.0);
        CD b = x[i];
        int ee = e - 1;
        while (ee > 0) {
          if (ee & 1) pim1 *= b;
          b *= b;
          ee >>= 1;
        }
      }
      grad[i] += t.c * double(e) * prefix[i] * suffix[i + 1] * pim1;
    }
  }
  return v;
}

void MPoly::normalize() {
  std::map<std::vector<int>, CD> acc;
  for (auto& t : terms_) acc[t.exps] += t.c;
  terms_.clear();
  for (auto& [e, c] : acc)
    if (c != CD(0.0, 0.0)) terms_.push_back({e, c});
}

}  // namespace sscope
