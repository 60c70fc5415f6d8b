// Copyright 2026 The ensdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENSDIST_ENSEMBLES_HPP_
#define ENSDIST_ENSEMBLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ensdist/errors.hpp"
#include "ensdist/numerics/rng.hpp"
#include "ensdist/numerics/variates.hpp"

namespace ensdist {

/// Parameters (beta, m, a1[, a2]) of the beta-Laguerre / beta-Jacobi pair.
/// Construction validates a1 > beta (m - 1) / 2 and, when present,
/// a2 > beta (m - 1) / 2.
class EnsembleParams {
 public:
  static EnsembleParams laguerre(double beta, int m, double a1) {
    return EnsembleParams(beta, m, a1, std::nullopt);
  }
  static EnsembleParams jacobi(double beta, int m, double a1, double a2) {
    return EnsembleParams(beta, m, a1, a2);
  }

  EnsembleParams(double beta, int m, double a1, std::optional<double> a2)
      : beta_(beta), m_(m), a1_(a1), a2_(a2) {
    validate();
  }

  double beta() const { return beta_; }
  int m() const { return m_; }
  std::size_t size() const { return static_cast<std::size_t>(m_); }
  double a1() const { return a1_; }
  bool has_a2() const { return a2_.has_value(); }
  double a2() const {
    if (!a2_) throw ParameterError("a2 is required for the Jacobi ensemble");
    return *a2_;
  }
  std::optional<double> maybe_a2() const { return a2_; }

  double eta() const { return 0.5 * beta_; }
  /// a = a1 + a2.
  double a() const { return a1_ + a2(); }
  /// r = 1 + beta (m - 1) / 2.
  double r() const { return 1.0 + eta() * (m_ - 1); }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    os << "beta=" << beta_ << " m=" << m_ << " a1=" << a1_;
    if (a2_) os << " a2=" << *a2_;
    return os.str();
  }

 private:
  void validate() const {
    if (!(beta_ > 0.0) || !std::isfinite(beta_)) {
      throw ParameterError("beta must be positive and finite");
    }
    if (m_ < 1) throw ParameterError("m must be at least 1");
    const double floor = eta() * (m_ - 1);
    if (!(a1_ > floor) || !std::isfinite(a1_)) {
      throw ParameterError("a1 must exceed beta(m-1)/2 = " + fmt(floor) +
                           " (got a1=" + fmt(a1_) + ")");
    }
    if (a2_ && (!(*a2_ > floor) || !std::isfinite(*a2_))) {
      throw ParameterError("a2 must exceed beta(m-1)/2 = " + fmt(floor) +
                           " (got a2=" + fmt(*a2_) + ")");
    }
  }
  static std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
  }

  double beta_;
  int m_;
  double a1_;
  std::optional<double> a2_;
};

/// Lower-bidiagonal Laguerre factor A: diagonal x_1..x_m and subdiagonal
/// y_2..y_m (y[k] sits in row k + 2, 1-based).
struct LaguerreBidiagonal {
  std::vector<double> x;
  std::vector<double> y;
};

/// Beta variables c_1..c_m and c'_1..c'_{m-1} of the Jacobi factor B;
/// s_i = 1 - c_i and s'_i = 1 - c'_i.
struct JacobiBidiagonal {
  std::vector<double> c;
  std::vector<double> cp;

  double s(std::size_t i) const { return 1.0 - c[i]; }
  double sp(std::size_t i) const { return 1.0 - cp[i]; }
};

/// Symmetric tridiagonal matrix: diag has m entries, offdiag m - 1.
struct SymmetricTridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;

  std::size_t size() const { return diag.size(); }

  SymmetricTridiagonal scaled(double factor) const {
    SymmetricTridiagonal out = *this;
    for (double &d : out.diag) d *= factor;
    for (double &e : out.offdiag) e *= factor;
    return out;
  }
};

enum class SpectrumKind {
  kJacobiUnit,    ///< lambda in [0, 1]^m
  kJacobiScaled,  ///< theta = 2 a lambda in [0, 2a]^m
  kLaguerre,      ///< mu >= 0
};

inline const char *to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::kJacobiUnit: return "jacobi";
    case SpectrumKind::kJacobiScaled: return "jacobi-scaled";
    case SpectrumKind::kLaguerre: return "laguerre";
  }
  return "?";
}

/// Eigenvalues of one ensemble draw, sorted nonincreasing.
struct Spectrum {
  std::vector<double> values;
  SpectrumKind kind = SpectrumKind::kLaguerre;

  std::size_t size() const { return values.size(); }
};

// ---------------------------------------------------------------------------
// Sampling

/// Dumitriu-Edelman chi factor: x_i^2 ~ chi2(2 a1 - beta (i - 1)),
/// y_i^2 ~ chi2(beta (m - i + 1)) for i = 2..m, all independent.
inline LaguerreBidiagonal sample_laguerre_bidiagonal(const EnsembleParams &p,
                                                     RngStream &rng) {
  const std::size_t m = p.size();
  if (!(2.0 * p.a1() - p.beta() * (p.m() - 1) > 0.0)) {
    throw ParameterError("2 a1 - beta (m - 1) must be positive");
  }
  LaguerreBidiagonal out;
  out.x.resize(m);
  out.y.resize(m - 1);
  for (std::size_t k = 0; k < m; ++k) {
    const double i = static_cast<double>(k + 1);
    out.x[k] = std::sqrt(sample_chi_square(2.0 * p.a1() - p.beta() * (i - 1.0), rng));
  }
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double i = static_cast<double>(k + 2);
    out.y[k] = std::sqrt(sample_chi_square(p.beta() * (p.m() - (i - 1.0)), rng));
  }
  return out;
}

/// Edelman-Sutton Beta factor: c_i ~ Beta(a1 - eta (m - i), a2 - eta (m - i))
/// and c'_i ~ Beta(eta i, a1 + a2 - eta (2m - i - 1)), all independent.
inline JacobiBidiagonal sample_jacobi_bidiagonal(const EnsembleParams &p,
                                                 RngStream &rng) {
  const std::size_t m = p.size();
  const double eta = p.eta();
  const double a2 = p.a2();
  JacobiBidiagonal out;
  out.c.resize(m);
  out.cp.resize(m - 1);
  for (std::size_t k = 0; k < m; ++k) {
    const double shift = eta * (p.m() - static_cast<double>(k + 1));
    const double alpha = p.a1() - shift;
    const double beta_param = a2 - shift;
    if (!(alpha > 0.0) || !(beta_param > 0.0)) {
      throw ParameterError("Jacobi Beta parameter for c_i is not positive");
    }
    out.c[k] = sample_beta(alpha, beta_param, rng);
  }
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double i = static_cast<double>(k + 1);
    const double alpha = eta * i;
    const double beta_param = p.a() - eta * (2.0 * p.m() - i - 1.0);
    if (!(alpha > 0.0) || !(beta_param > 0.0)) {
      throw ParameterError("Jacobi Beta parameter for c'_i is not positive");
    }
    out.cp[k] = sample_beta(alpha, beta_param, rng);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gram matrices

/// T = A A': diag_i = x_i^2 + y_i^2 (y_1 = 0), offdiag_i = x_i y_{i+1}.
inline SymmetricTridiagonal gram_tridiagonal(const LaguerreBidiagonal &a) {
  const std::size_t m = a.x.size();
  SymmetricTridiagonal t;
  t.diag.resize(m);
  t.offdiag.resize(m > 0 ? m - 1 : 0);
  for (std::size_t k = 0; k < m; ++k) {
    t.diag[k] = a.x[k] * a.x[k] + (k > 0 ? a.y[k - 1] * a.y[k - 1] : 0.0);
  }
  for (std::size_t k = 0; k + 1 < m; ++k) t.offdiag[k] = a.x[k] * a.y[k];
  return t;
}

/// Lower-bidiagonal factor F with diagonal `diag` (m) and subdiagonal `sub`
/// (m - 1); the Gram matrix is F F'.
struct BidiagonalFactor {
  std::vector<double> diag;
  std::vector<double> sub;
};

inline BidiagonalFactor bidiagonal_factor(const LaguerreBidiagonal &a) { return {a.x, a.y}; }

/// Magnitudes of the Jacobi factor B. Row k (1-based) has diagonal
/// sqrt(c_{m+1-k} s'_{m-k}) with s'_0 = 1 and subdiagonal
/// -sqrt(s_{m+1-k} c'_{m+1-k}); the signs do not change the spectrum.
inline BidiagonalFactor bidiagonal_factor(const JacobiBidiagonal &b) {
  const std::size_t m = b.c.size();
  BidiagonalFactor f;
  f.diag.resize(m);
  f.sub.resize(m > 0 ? m - 1 : 0);
  for (std::size_t j = 0; j < m; ++j) {
    const double sp = (j + 1 < m) ? b.sp(m - 2 - j) : 1.0;
    f.diag[j] = std::sqrt(b.c[m - 1 - j] * sp);
  }
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const std::size_t index = m - 2 - j;
    f.sub[j] = std::sqrt(b.s(index) * b.cp[index]);
  }
  return f;
}

inline SymmetricTridiagonal gram_tridiagonal(const BidiagonalFactor &f) {
  const std::size_t m = f.diag.size();
  SymmetricTridiagonal t;
  t.diag.resize(m);
  t.offdiag.resize(f.sub.size());
  for (std::size_t k = 0; k < m; ++k) {
    t.diag[k] = f.diag[k] * f.diag[k] + (k > 0 ? f.sub[k - 1] * f.sub[k - 1] : 0.0);
  }
  for (std::size_t k = 0; k + 1 < m; ++k) t.offdiag[k] = f.diag[k] * f.sub[k];
  return t;
}

/// T = B B' for the Jacobi factor.
inline SymmetricTridiagonal gram_tridiagonal(const JacobiBidiagonal &b) {
  return gram_tridiagonal(bidiagonal_factor(b));
}

// ---------------------------------------------------------------------------
// Spectral extraction

/// All eigenvalues of a symmetric tridiagonal matrix, sorted nonincreasing.
/// Implicit-shift QL iteration (tql1); an off-diagonal entry is deflated
/// once it drops below machine epsilon times its two diagonal neighbours.
inline std::vector<double> eigenvalues(const SymmetricTridiagonal &t) {
  const std::size_t n = t.size();
  std::vector<double> d = t.diag;
  std::vector<double> e(n, 0.0);
  std::copy(t.offdiag.begin(), t.offdiag.end(), e.begin());
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int kMaxIterations = 60;

  for (std::size_t l = 0; l < n; ++l) {
    int iterations = 0;
    std::size_t mm;
    do {
      for (mm = l; mm + 1 < n; ++mm) {
        const double dd = std::fabs(d[mm]) + std::fabs(d[mm + 1]);
        if (std::fabs(e[mm]) <= eps * dd) break;
      }
      if (mm == l) break;
      if (++iterations > kMaxIterations) {
        throw ConsistencyError("eigenvalues: QL iteration did not converge");
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = mm; i-- > l;) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[mm] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[mm] = 0.0;
    } while (true);
  }
  std::sort(d.begin(), d.end(), std::greater<>());
  return d;
}

/// Smallest and largest eigenvalue bounds from Gershgorin discs.
inline double gershgorin_radius(const SymmetricTridiagonal &t) {
  double radius = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    double row = std::fabs(t.diag[k]);
    if (k > 0) row += std::fabs(t.offdiag[k - 1]);
    if (k + 1 < t.size()) row += std::fabs(t.offdiag[k]);
    radius = std::max(radius, row);
  }
  return radius;
}

/// log det(I + (shift I - T) / scale) = sum_i log1p((shift - mu_i) / scale)
/// by the LDL' pivot recursion, keeping each pivot as its offset from one so
/// that small (shift - mu_i) / scale are not rounded against 1.
/// `positive_definite` is false when some eigenvalue of T is >= shift + scale;
/// log_det is then meaningless.
struct UnitShiftLogDet {
  double log_det = 0.0;
  bool positive_definite = true;
};

inline UnitShiftLogDet log_det_unit_shift(const SymmetricTridiagonal &t,
                                          double shift, double scale) {
  UnitShiftLogDet out;
  double delta = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double alpha = (shift - t.diag[k]) / scale;
    if (k == 0) {
      delta = alpha;
    } else {
      const double e = t.offdiag[k - 1] / scale;
      delta = alpha - e * e / (1.0 + delta);
    }
    if (!(delta > -1.0)) {
      out.positive_definite = false;
      out.log_det = -std::numeric_limits<double>::infinity();
      return out;
    }
    out.log_det += std::log1p(delta);
  }
  return out;
}

/// tr((T - shift I)^k) for k = 1, 2, 3 straight from the tridiagonal entries.
struct ShiftedTraces {
  double first = 0.0;
  double second = 0.0;
  double third = 0.0;
};

inline ShiftedTraces shifted_traces(const SymmetricTridiagonal &t, double shift) {
  ShiftedTraces out;
  const std::size_t n = t.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double u = t.diag[k] - shift;
    out.first += u;
    out.second += u * u;
    out.third += u * u * u;
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double e2 = t.offdiag[k] * t.offdiag[k];
    out.second += 2.0 * e2;
    out.third += 3.0 * e2 * (t.diag[k] + t.diag[k + 1] - 2.0 * shift);
  }
  return out;
}

namespace detail {

// Values within `slack` outside [lo, hi] are rounding; anything further is a
// bug upstream.
inline void clamp_spectrum(std::vector<double> &values, double lo, double hi,
                           double slack, const char *what) {
  for (double &v : values) {
    if (v < lo) {
      if (v < lo - slack) {
        throw ConsistencyError(std::string(what) + ": eigenvalue " +
                               std::to_string(v) + " below support");
      }
      v = lo;
    } else if (v > hi) {
      if (v > hi + slack) {
        throw ConsistencyError(std::string(what) + ": eigenvalue " +
                               std::to_string(v) + " above support");
      }
      v = hi;
    }
  }
}

}  // namespace detail

/// Overshoot of the unit interval tolerated (and clamped) for Jacobi spectra.
inline constexpr double kJacobiClampSlack = 1e-12;

/// Number of eigenvalues of F F' below sigma, from the differential
/// stationary qd transform of F F' - sigma I. The pivots are computed from
/// the squared factor entries, so the count is relatively accurate even for
/// eigenvalues far below the rounding level of the Gram matrix.
inline std::size_t count_below(const BidiagonalFactor &f, double sigma) {
  const std::size_t m = f.diag.size();
  std::size_t negative = 0;
  double t = -sigma;
  for (std::size_t k = 0; k < m; ++k) {
    double dplus = f.diag[k] * f.diag[k] + t;
    if (dplus == 0.0) dplus = -std::numeric_limits<double>::min();
    if (dplus < 0.0) ++negative;
    if (k + 1 < m) t = t / dplus * (f.sub[k] * f.sub[k]) - sigma;
  }
  return negative;
}

/// Eigenvalues below this fraction of the largest one are recomputed by
/// refine_small_eigenvalues; QL only resolves them to eps times the norm.
inline constexpr double kRefineFraction = 1e-8;

/// Recomputes, to high relative accuracy, the eigenvalues in `values`
/// (sorted nonincreasing) below kRefineFraction max(values), by geometric
/// bisection on count_below.
inline void refine_small_eigenvalues(const BidiagonalFactor &f, std::vector<double> &values) {
  if (values.empty()) return;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double floor = kRefineFraction * std::max(values.front(), 0.0);
  std::size_t small = 0;
  for (double v : values) small += v <= floor ? 1 : 0;
  if (small == 0 || floor == 0.0) return;
  const double top = 4.0 * floor;
  if (count_below(f, top) < small) return;
  const double bottom = top * 1e-300;
  const std::size_t m = values.size();
  for (std::size_t j = 1; j <= small; ++j) {
    double lo = bottom, hi = top;
    if (count_below(f, lo) >= j) {
      values[m - j] = lo;
      continue;
    }
    for (int it = 0; it < 200 && hi > lo * (1.0 + 4.0 * eps); ++it) {
      const double mid = std::sqrt(lo * hi);
      if (count_below(f, mid) >= j) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    values[m - j] = 0.5 * (lo + hi);
  }
  std::sort(values.begin(), values.end(), std::greater<>());
}

/// Eigenvalues of B B' clamped into [0, 1].
inline std::vector<double> jacobi_eigenvalues(const SymmetricTridiagonal &t) {
  auto values = eigenvalues(t);
  detail::clamp_spectrum(values, 0.0, 1.0, kJacobiClampSlack, "jacobi spectrum");
  return values;
}

/// Eigenvalues of A A', with rounding-level negatives clamped to zero.
inline std::vector<double> laguerre_eigenvalues(const SymmetricTridiagonal &t) {
  auto values = eigenvalues(t);
  const double scale = std::max(1.0, values.empty() ? 0.0 : values.front());
  const double slack =
      64.0 * std::numeric_limits<double>::epsilon() * scale * static_cast<double>(t.size());
  detail::clamp_spectrum(values, 0.0, std::numeric_limits<double>::infinity(),
                         slack, "laguerre spectrum");
  return values;
}

/// One spectrum draw of the requested kind. Eigenvalues far below the
/// largest are recomputed from the bidiagonal factor, so sampled
/// spectra stay strictly positive.
inline Spectrum sample_spectrum(SpectrumKind kind, const EnsembleParams &p,
                                RngStream &rng) {
  Spectrum out;
  out.kind = kind;
  if (kind == SpectrumKind::kLaguerre) {
    const auto f = bidiagonal_factor(sample_laguerre_bidiagonal(p, rng));
    out.values = laguerre_eigenvalues(gram_tridiagonal(f));
    refine_small_eigenvalues(f, out.values);
    return out;
  }
  const auto f = bidiagonal_factor(sample_jacobi_bidiagonal(p, rng));
  out.values = jacobi_eigenvalues(gram_tridiagonal(f));
  refine_small_eigenvalues(f, out.values);
  if (kind == SpectrumKind::kJacobiScaled) {
    const double two_a = 2.0 * p.a();
    for (double &v : out.values) v *= two_a;
  }
  return out;
}

}  // namespace ensdist

#endif  // ENSDIST_ENSEMBLES_HPP_
