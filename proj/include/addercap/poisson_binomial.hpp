#pragma once

// Exact evaluation of the distribution of a sum of independent Bernoulli
// trials with per-trial success probabilities (the Poisson-binomial
// distribution), together with leave-out marginals and the finite
// difference operator used by the entropy calculus on top of it.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace addercap {

/// Probabilities below this distance from {0,1} are rejected by the
/// derivative formulas, which need every PMF mass strictly positive.
inline constexpr double kInteriorMargin = 1e-9;

/// Largest trial count accepted by the 2^n enumeration oracle.
inline constexpr std::size_t kBruteForceMaxTrials = 24;

/// Success-probability vector p = (p_1, ..., p_n), each p_i in [0,1].
/// n = 0 is legal and denotes the empty sum (point mass at 0).
class ProbVector {
 public:
  ProbVector() = default;

  explicit ProbVector(std::vector<double> probs) : probs_(std::move(probs)) {
    for (double p : probs_) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("ProbVector: probability " + std::to_string(p) +
                                " outside [0, 1]");
      }
    }
  }

  ProbVector(std::initializer_list<double> probs) : ProbVector(std::vector<double>(probs)) {}

  ProbVector(std::size_t n, double fill) : ProbVector(std::vector<double>(n, fill)) {}

  std::size_t size() const { return probs_.size(); }
  bool empty() const { return probs_.empty(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> values() const { return probs_; }
  auto begin() const { return probs_.begin(); }
  auto end() const { return probs_.end(); }

  /// True when every coordinate lies in [margin, 1 - margin].
  bool interior(double margin = kInteriorMargin) const {
    return std::all_of(probs_.begin(), probs_.end(),
                       [margin](double p) { return p >= margin && p <= 1.0 - margin; });
  }

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  std::vector<double> probs_;
};

/// PMF of a random variable on support {0, ..., n}; queries outside the
/// support return exactly 0.
class Pmf {
 public:
  explicit Pmf(std::vector<double> mass) : mass_(std::move(mass)) {
    if (mass_.empty()) throw std::invalid_argument("Pmf: empty mass vector");
    double sum = 0.0;
    for (double m : mass_) {
      if (!(m >= 0.0)) throw std::domain_error("Pmf: negative mass");
      sum += m;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw std::domain_error("Pmf: total mass " + std::to_string(sum) + " != 1");
    }
  }

  std::size_t support_size() const { return mass_.size() - 1; }

  /// In-range access, k in [0, support_size()].
  double operator[](std::size_t k) const { return mass_[k]; }

  /// Zero-extended access: 0 for k < 0 or k > support_size().
  double at(std::ptrdiff_t k) const {
    if (k < 0 || k >= static_cast<std::ptrdiff_t>(mass_.size())) return 0.0;
    return mass_[static_cast<std::size_t>(k)];
  }

  std::span<const double> mass() const { return mass_; }

  friend bool operator==(const Pmf&, const Pmf&) = default;

 private:
  std::vector<double> mass_;
};

/// Distinct 0-based positions to remove from a ProbVector.
using LeaveOutSet = std::vector<std::size_t>;

/// Subvector with the listed positions removed, original order preserved.
inline ProbVector leave_out(const ProbVector& p, const LeaveOutSet& drop) {
  std::vector<bool> dropped(p.size(), false);
  for (std::size_t i : drop) {
    if (i >= p.size()) {
      throw std::invalid_argument("leave_out: index " + std::to_string(i) + " out of range");
    }
    if (dropped[i]) {
      throw std::invalid_argument("leave_out: duplicate index " + std::to_string(i));
    }
    dropped[i] = true;
  }
  std::vector<double> kept;
  kept.reserve(p.size() - drop.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!dropped[i]) kept.push_back(p[i]);
  }
  return ProbVector(std::move(kept));
}

/// PMF of the Bernoulli sum by sequential convolution: starting from the
/// point mass at 0, each trial updates new[k] = old[k]*q_i + old[k-1]*p_i.
/// The in-place update runs k from high to low; output is deterministic.
inline Pmf pmf_dp(const ProbVector& p) {
  std::vector<double> mass;
  mass.reserve(p.size() + 1);
  mass.push_back(1.0);
  for (double pi : p) {
    const double qi = 1.0 - pi;
    mass.push_back(0.0);
    for (std::size_t k = mass.size(); k-- > 0;) {
      mass[k] = mass[k] * qi + (k > 0 ? mass[k - 1] * pi : 0.0);
    }
  }
  return Pmf(std::move(mass));
}

namespace detail {

inline void enumerate_outcomes(std::span<const double> p, std::size_t i, std::size_t ones,
                               double prod, std::vector<double>& mass) {
  if (i == p.size()) {
    mass[ones] += prod;
    return;
  }
  enumerate_outcomes(p, i + 1, ones, prod * (1.0 - p[i]), mass);
  enumerate_outcomes(p, i + 1, ones + 1, prod * p[i], mass);
}

}  // namespace detail

/// Ground-truth oracle: enumerates all 2^n outcome vectors and accumulates
/// their probabilities into mass[number of successes]. Intentionally shares
/// no code with pmf_dp.
inline Pmf pmf_bruteforce(const ProbVector& p) {
  if (p.size() > kBruteForceMaxTrials) {
    throw std::domain_error("pmf_bruteforce: n > " + std::to_string(kBruteForceMaxTrials) +
                            " (enumeration guard)");
  }
  std::vector<double> mass(p.size() + 1, 0.0);
  detail::enumerate_outcomes(p.values(), 0, 0, 1.0, mass);
  return Pmf(std::move(mass));
}

/// Difference operator applied across the whole (zero-extended) support:
/// returns (Δf)(k) = f(k) - f(k-1) for k = 0..n+1, so both boundary terms
/// f(-1) = f(n+1) = 0 are represented. The returned values sum to 0.
inline std::vector<double> forward_difference(const Pmf& f) {
  const std::size_t n = f.support_size();
  std::vector<double> diff(n + 2);
  for (std::size_t k = 0; k <= n + 1; ++k) {
    diff[k] = f.at(static_cast<std::ptrdiff_t>(k)) - f.at(static_cast<std::ptrdiff_t>(k) - 1);
  }
  return diff;
}

namespace detail {

// Row of binomial coefficients; C(64,32) still fits in 64 bits.
inline std::vector<std::uint64_t> binomial_row(std::size_t n) {
  std::vector<std::uint64_t> row(n + 1, 1);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t k = i; k-- > 1;) row[k] += row[k - 1];
  }
  return row;
}

}  // namespace detail

/// Binomial PMF: mass[k] = C(n,k) p^k (1-p)^(n-k). Exact coefficients are
/// used up to n = 64; beyond that the masses come from exponentiating
/// log-gamma sums and are renormalized by their total.
inline Pmf binomial_pmf(std::size_t n, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("binomial_pmf: p outside [0, 1]");
  }
  const double q = 1.0 - p;
  std::vector<double> mass(n + 1);
  if (n <= 64) {
    const auto coeff = detail::binomial_row(n);
    for (std::size_t k = 0; k <= n; ++k) {
      mass[k] = static_cast<double>(coeff[k]) * std::pow(p, static_cast<double>(k)) *
                std::pow(q, static_cast<double>(n - k));
    }
  } else if (p == 0.0 || p == 1.0) {
    mass[p == 0.0 ? 0 : n] = 1.0;
  } else {
    const double lp = std::log(p), lq = std::log(q);
    const double lg_n1 = std::lgamma(static_cast<double>(n) + 1.0);
    double sum = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      const double lc = lg_n1 - std::lgamma(static_cast<double>(k) + 1.0) -
                        std::lgamma(static_cast<double>(n - k) + 1.0);
      mass[k] = std::exp(lc + static_cast<double>(k) * lp + static_cast<double>(n - k) * lq);
      sum += mass[k];
    }
    for (double& m : mass) m /= sum;
  }
  return Pmf(std::move(mass));
}

}  // namespace addercap
