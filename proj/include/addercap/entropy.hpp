#pragma once

// Shannon entropy of a Bernoulli sum Z_p (in bits) and its analytic first
// and second derivatives with respect to the success probabilities.
//
// Writing b(k, p) for the PMF of Z_p, b_l for the PMF with trial l removed
// and (Δf)(k) = f(k) - f(k-1) (zero-extended), the closed forms are
//
//   dH/dp_l        =  Σ_k  Δb_l(k) · log2 b(k, p)
//   d²H/dp_l dp_m  = -Σ_k  Δ²b_{l,m}(k) · log2 b(k, p)
//                    -Σ_k  Δb_l(k) Δb_m(k) / (ln2 · b(k, p))      (l ≠ m)
//   d²H/dp_l²      = -Σ_k  (Δb_l(k))² / (ln2 · b(k, p))
//
// with every sum running over k = 0..n. All values are in bits; the 1/ln2
// factors are the base conversion in d(log2 x)/dx = 1/(x ln2).

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "addercap/poisson_binomial.hpp"

namespace addercap {

/// -Σ_k m_k log2 m_k with the 0·log 0 = 0 convention.
inline double entropy_bits(const Pmf& f) {
  double h = 0.0;
  for (double m : f.mass()) {
    if (m > 0.0) h -= m * std::log2(m);
  }
  return h;
}

/// Entropy of the binomial distribution B(n, p) in bits.
inline double binomial_entropy(std::size_t n, double p) {
  return entropy_bits(binomial_pmf(n, p));
}

namespace detail {

inline void require_interior(const ProbVector& p, const char* where) {
  if (!p.interior()) {
    throw std::domain_error(std::string(where) + ": p must lie in [" +
                            std::to_string(kInteriorMargin) + ", 1 - " +
                            std::to_string(kInteriorMargin) + "] in every coordinate");
  }
}

inline void require_index(std::size_t i, std::size_t n, const char* where) {
  if (i >= n) {
    throw std::invalid_argument(std::string(where) + ": index " + std::to_string(i) +
                                " out of range for n = " + std::to_string(n));
  }
}

// log2 of every mass; throws if any mass underflowed to zero, since the
// derivative formulas then stop being finite.
inline std::vector<double> log2_masses(const Pmf& b, const char* where) {
  std::vector<double> logb(b.support_size() + 1);
  for (std::size_t k = 0; k < logb.size(); ++k) {
    if (!(b[k] > 0.0)) {
      throw std::domain_error(std::string(where) + ": PMF mass underflowed to zero at k = " +
                              std::to_string(k));
    }
    logb[k] = std::log2(b[k]);
  }
  return logb;
}

inline double delta(const Pmf& f, std::size_t k) {
  const auto sk = static_cast<std::ptrdiff_t>(k);
  return f.at(sk) - f.at(sk - 1);
}

inline double delta2(const Pmf& f, std::size_t k) {
  const auto sk = static_cast<std::ptrdiff_t>(k);
  return f.at(sk) - 2.0 * f.at(sk - 1) + f.at(sk - 2);
}

}  // namespace detail

/// Analytic gradient of H(Z_p) in bits. Requires interior p.
inline std::vector<double> entropy_gradient(const ProbVector& p) {
  detail::require_interior(p, "entropy_gradient");
  const std::size_t n = p.size();
  const Pmf b = pmf_dp(p);
  const std::vector<double> logb = detail::log2_masses(b, "entropy_gradient");
  std::vector<double> grad(n);
  for (std::size_t l = 0; l < n; ++l) {
    const Pmf bl = pmf_dp(leave_out(p, {l}));
    double s = 0.0;
    for (std::size_t k = 0; k <= n; ++k) s += detail::delta(bl, k) * logb[k];
    grad[l] = s;
  }
  return grad;
}

/// One entry of the Hessian of H(Z_p); l == m selects the diagonal formula
/// (which uses d²b/dp_l² = 0). Requires interior p.
inline double entropy_hessian_entry(const ProbVector& p, std::size_t l, std::size_t m) {
  detail::require_interior(p, "entropy_hessian_entry");
  detail::require_index(l, p.size(), "entropy_hessian_entry");
  detail::require_index(m, p.size(), "entropy_hessian_entry");
  const std::size_t n = p.size();
  const Pmf b = pmf_dp(p);
  const std::vector<double> logb = detail::log2_masses(b, "entropy_hessian_entry");
  constexpr double ln2 = std::numbers::ln2;

  if (l == m) {
    const Pmf bl = pmf_dp(leave_out(p, {l}));
    double s = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      const double d = detail::delta(bl, k);
      s += d * d / (ln2 * b[k]);
    }
    return -s;
  }

  const Pmf blm = pmf_dp(leave_out(p, {std::min(l, m), std::max(l, m)}));
  const Pmf bl = pmf_dp(leave_out(p, {l}));
  const Pmf bm = pmf_dp(leave_out(p, {m}));
  double s_log = 0.0, s_quad = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    s_log += detail::delta2(blm, k) * logb[k];
    s_quad += detail::delta(bl, k) * detail::delta(bm, k) / (ln2 * b[k]);
  }
  return -s_log - s_quad;
}

/// Gradient plus the full symmetric Hessian.
struct EntropyDerivatives {
  std::vector<double> gradient;
  std::vector<std::vector<double>> hessian;
};

inline EntropyDerivatives entropy_derivatives(const ProbVector& p) {
  const std::size_t n = p.size();
  EntropyDerivatives d;
  d.gradient = entropy_gradient(p);
  d.hessian.assign(n, std::vector<double>(n));
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t m = l; m < n; ++m) {
      d.hessian[l][m] = d.hessian[m][l] = entropy_hessian_entry(p, l, m);
    }
  }
  return d;
}

/// Unit direction e_l - e_m along which the restricted entropy is examined.
struct Direction {
  std::size_t l;
  std::size_t m;

  Direction(std::size_t l_, std::size_t m_) : l(l_), m(m_) {
    if (l >= m) throw std::invalid_argument("Direction: requires l < m");
  }
};

/// Second derivative of H(Z_p) along e_l - e_m, carried both as the
/// three-Hessian-entry combination and as the two-term split whose
/// quadratic part is manifestly nonpositive. The two routes agree up to
/// rounding; value() is the Hessian combination.
struct DirectionalCurvature {
  double from_hessian;    // H_ll - 2 H_lm + H_mm
  double log_term;        // 2 Σ Δ²b_{l,m}(k) · log2 b(k, p)
  double quadratic_term;  // -Σ (Δb_l(k) - Δb_m(k))² / (ln2 · b(k, p))

  double value() const { return from_hessian; }
  double decomposed() const { return log_term + quadratic_term; }
};

inline DirectionalCurvature directional_second_derivative(const ProbVector& p, Direction dir) {
  detail::require_interior(p, "directional_second_derivative");
  detail::require_index(dir.m, p.size(), "directional_second_derivative");
  const std::size_t n = p.size();
  const Pmf b = pmf_dp(p);
  const std::vector<double> logb = detail::log2_masses(b, "directional_second_derivative");
  constexpr double ln2 = std::numbers::ln2;

  const Pmf bl = pmf_dp(leave_out(p, {dir.l}));
  const Pmf bm = pmf_dp(leave_out(p, {dir.m}));
  const Pmf blm = pmf_dp(leave_out(p, {dir.l, dir.m}));

  double h_ll = 0.0, h_mm = 0.0, h_lm_quad = 0.0, s_log = 0.0, s_quad = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double dl = detail::delta(bl, k);
    const double dm = detail::delta(bm, k);
    const double d2 = detail::delta2(blm, k);
    const double w = 1.0 / (ln2 * b[k]);
    h_ll += dl * dl * w;
    h_mm += dm * dm * w;
    h_lm_quad += dl * dm * w;
    s_log += d2 * logb[k];
    s_quad += (dl - dm) * (dl - dm) * w;
  }
  DirectionalCurvature out{};
  const double h_lm = -s_log - h_lm_quad;
  out.from_hessian = -h_ll - 2.0 * h_lm - h_mm;
  out.log_term = 2.0 * s_log;
  out.quadratic_term = -s_quad;
  return out;
}

/// Central finite differences of p -> H(Z_p), the numerical counterpart of
/// the analytic formulas above. Perturbed coordinates are clamped back into
/// [kInteriorMargin, 1 - kInteriorMargin] so every evaluation stays legal.
namespace fd {

namespace impl {

inline std::vector<double> bump(const ProbVector& p, std::size_t i, double h) {
  std::vector<double> out(p.begin(), p.end());
  out[i] = std::clamp(out[i] + h, kInteriorMargin, 1.0 - kInteriorMargin);
  return out;
}

inline double entropy_at(const std::vector<double>& p) {
  return entropy_bits(pmf_dp(ProbVector(p)));
}

}  // namespace impl

inline double gradient_entry(const ProbVector& p, std::size_t l, double h = 1e-5) {
  detail::require_interior(p, "fd::gradient_entry");
  detail::require_index(l, p.size(), "fd::gradient_entry");
  return (impl::entropy_at(impl::bump(p, l, h)) - impl::entropy_at(impl::bump(p, l, -h))) /
         (2.0 * h);
}

inline double hessian_entry(const ProbVector& p, std::size_t l, std::size_t m, double h = 1e-4) {
  detail::require_interior(p, "fd::hessian_entry");
  detail::require_index(l, p.size(), "fd::hessian_entry");
  detail::require_index(m, p.size(), "fd::hessian_entry");
  if (l == m) {
    const double center = entropy_bits(pmf_dp(p));
    return (impl::entropy_at(impl::bump(p, l, h)) - 2.0 * center +
            impl::entropy_at(impl::bump(p, l, -h))) /
           (h * h);
  }
  const double pp = impl::entropy_at(impl::bump(ProbVector(impl::bump(p, l, h)), m, h));
  const double pm = impl::entropy_at(impl::bump(ProbVector(impl::bump(p, l, h)), m, -h));
  const double mp = impl::entropy_at(impl::bump(ProbVector(impl::bump(p, l, -h)), m, h));
  const double mm = impl::entropy_at(impl::bump(ProbVector(impl::bump(p, l, -h)), m, -h));
  return (pp - pm - mp + mm) / (4.0 * h * h);
}

/// Curvature of t -> H(p + t(e_l - e_m)) at t = 0.
inline double line_curvature(const ProbVector& p, Direction dir, double h = 1e-4) {
  detail::require_interior(p, "fd::line_curvature");
  detail::require_index(dir.m, p.size(), "fd::line_curvature");
  const double center = entropy_bits(pmf_dp(p));
  const double plus = impl::entropy_at(impl::bump(ProbVector(impl::bump(p, dir.l, h)), dir.m, -h));
  const double minus = impl::entropy_at(impl::bump(ProbVector(impl::bump(p, dir.l, -h)), dir.m, h));
  return (plus - 2.0 * center + minus) / (h * h);
}

}  // namespace fd

}  // namespace addercap
