#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace sscope {

/// Complex double, the floating field used by all numeric kernels.
using CD = std::complex<double>;

/// Exact rational scalar. mpq_class keeps values in lowest terms with a
/// positive denominator, which is exactly the canonical form we require.
using Rat = mpq_class;

enum class Field { Rational, Complex };

struct ScalarError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class K>
struct field_of;
template <>
struct field_of<Rat> {
  static constexpr Field value = Field::Rational;
  static constexpr bool exact = true;
};
template <>
struct field_of<CD> {
  static constexpr Field value = Field::Complex;
  static constexpr bool exact = false;
};

inline double abs_value(const Rat& x) { return std::abs(x.get_d()); }
inline double abs_value(const CD& x) { return std::abs(x); }

inline bool is_zero(const Rat& x) { return sgn(x) == 0; }
inline bool is_zero(const CD& x) { return x == CD(0.0, 0.0); }

inline Rat parse_rational(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw ScalarError("invalid rational literal: " + s);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rat& x) { return x.get_str(); }

inline CD to_complex(const Rat& x) { return CD(x.get_d(), 0.0); }
inline CD to_complex(const CD& x) { return x; }

/// Deterministic RNG wrapper; every randomized routine takes one of these
/// (or a raw seed) so results are reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double gauss() { return normal_(eng_); }
  double uniform() { return unif_(eng_); }
  std::uint64_t bits() { return eng_(); }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  CD gauss_complex() { return CD(normal_(eng_), normal_(eng_)); }
  CD unit_complex() {
    const double a = 2.0 * 3.14159265358979323846 * unif_(eng_);
    return CD(std::cos(a), std::sin(a));
  }
  /// Derive an independent stream, e.g. for per-chart or per-retry work.
  Rng fork(std::uint64_t salt) {
    return Rng(eng_() ^ (salt * 0x9E3779B97F4A7C15ull + 0x7F4A7C15ull));
  }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
};

}  // namespace sscope
