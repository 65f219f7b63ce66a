#pragma once

// Numerical certification of the concavity structure behind entropy
// maximization of Bernoulli sums: strict log-concavity of the PMF in k,
// strictly negative curvature of H(Z_p) along every e_l - e_m, the
// pairwise-equalization ascent that those facts make monotone, and the
// certificate that every ascent lands on the all-1/2 vector (Lindstrom's
// conjecture).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "addercap/entropy.hpp"
#include "addercap/poisson_binomial.hpp"
#include "addercap/sampling.hpp"
#include "addercap/serialize.hpp"

namespace addercap {

/// Outcome of scanning b(k)^2 - b(k-1)·b(k+1) over the support interior.
/// Triples touching a zero mass are skipped and counted, not failed.
struct LogConcavityReport {
  ProbVector p;
  double min_margin = 0.0;      // min over checked k; meaningful when checked_count > 0
  std::size_t witness_k = 0;    // k attaining the minimum
  std::size_t checked_count = 0;
  std::size_t skipped_count = 0;

  bool strict() const { return checked_count > 0 && min_margin > 0.0; }
};

inline LogConcavityReport log_concavity_margin(const ProbVector& p) {
  LogConcavityReport report;
  report.p = p;
  const Pmf b = pmf_dp(p);
  const std::size_t n = b.support_size();
  bool first = true;
  for (std::size_t k = 1; k + 1 <= n; ++k) {
    if (!(b[k - 1] > 0.0 && b[k] > 0.0 && b[k + 1] > 0.0)) {
      ++report.skipped_count;
      continue;
    }
    const double margin = b[k] * b[k] - b[k - 1] * b[k + 1];
    ++report.checked_count;
    if (first || margin < report.min_margin) {
      report.min_margin = margin;
      report.witness_k = k;
      first = false;
    }
  }
  return report;
}

/// Largest (closest to zero) directional second derivative over all pairs.
/// Negative max certifies strict concavity along every pair direction.
struct CurvatureReport {
  ProbVector p;
  double max_curvature;
  Direction witness;
};

inline CurvatureReport curvature_scan(const ProbVector& p) {
  detail::require_interior(p, "curvature_scan");
  if (p.size() < 2) {
    throw std::invalid_argument("curvature_scan: needs at least two coordinates");
  }
  CurvatureReport report{p, 0.0, Direction(0, 1)};
  bool first = true;
  for (std::size_t l = 0; l + 1 < p.size(); ++l) {
    for (std::size_t m = l + 1; m < p.size(); ++m) {
      const double c = directional_second_derivative(p, Direction(l, m)).value();
      if (first || c > report.max_curvature) {
        report.max_curvature = c;
        report.witness = Direction(l, m);
        first = false;
      }
    }
  }
  return report;
}

struct AscentStep {
  ProbVector p;
  double entropy_bits;
};

struct AscentTrace {
  std::vector<AscentStep> iterates;  // starting point included
  bool converged = false;
  ProbVector final_p;

  std::size_t steps() const { return iterates.size() - 1; }
};

/// Repeatedly replaces the currently most-unequal coordinate pair by its
/// mean. Along e_l - e_m the entropy is strictly concave and symmetric in
/// (p_l, p_m), so the midpoint is the line maximum and no step can lower
/// the entropy. The coordinate sum is preserved, hence the iterates
/// converge to the constant vector at the mean of p0.
inline AscentTrace pairwise_equalization_ascent(const ProbVector& p0, double tol,
                                                std::size_t max_iter = 100000) {
  detail::require_interior(p0, "pairwise_equalization_ascent");
  if (!(tol > 0.0)) throw std::domain_error("pairwise_equalization_ascent: tol must be > 0");

  std::vector<double> cur(p0.begin(), p0.end());
  AscentTrace trace;
  trace.iterates.push_back({p0, entropy_bits(pmf_dp(p0))});

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    // Most-unequal pair; strict > keeps the lexicographically first one.
    std::size_t best_l = 0, best_m = 0;
    double best_gap = -1.0;
    for (std::size_t l = 0; l + 1 < cur.size(); ++l) {
      for (std::size_t m = l + 1; m < cur.size(); ++m) {
        const double gap = std::abs(cur[l] - cur[m]);
        if (gap > best_gap) {
          best_gap = gap;
          best_l = l;
          best_m = m;
        }
      }
    }
    if (best_gap < tol) {
      trace.converged = true;
      break;
    }
    const double mean = 0.5 * (cur[best_l] + cur[best_m]);
    cur[best_l] = mean;
    cur[best_m] = mean;
    ProbVector p(cur);
    const double h = entropy_bits(pmf_dp(p));
    trace.iterates.push_back({std::move(p), h});
  }
  trace.final_p = trace.iterates.back().p;
  return trace;
}

struct ScanResult {
  double argmax_p;
  double max_value;
};

/// Grid maximization of the binomial entropy H_n(p) over [0, 1]. The grid
/// size must be odd so that p = 1/2 is on the grid.
inline ScanResult binomial_entropy_scan(std::size_t n, std::size_t grid_points) {
  if (grid_points < 3 || grid_points % 2 == 0) {
    throw std::domain_error("binomial_entropy_scan: grid_points must be odd and >= 3");
  }
  ScanResult best{0.0, binomial_entropy(n, 0.0)};
  for (std::size_t i = 1; i < grid_points; ++i) {
    const double p = static_cast<double>(i) / static_cast<double>(grid_points - 1);
    const double h = binomial_entropy(n, p);
    if (h > best.max_value) best = {p, h};
  }
  return best;
}

/// Golden-section maximization of a unimodal function on [lo, hi].
template <class F>
std::pair<double, double> golden_section_max(F&& f, double lo, double hi, double xtol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

/// Certificate that seeded random starting points all reach the all-1/2
/// maximizer: each trial runs the pairwise-equalization ascent and then a
/// golden-section maximization of H_n(p) around the resulting common value.
struct LindstromCertificate {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double worst_gap_bits = 0.0;   // max over trials of H_n(1/2) - H(Z_p0)
  bool all_converged = false;
  ProbVector worst_final_p;      // final point of the least-converged trial

  // Diagnostics behind all_converged.
  double worst_final_dist = 0.0;         // max |final common value - 1/2|
  double worst_final_entropy_err = 0.0;  // max |H(final) - H_n(1/2)|
  double max_start_excess = 0.0;         // max H(Z_p0) - H_n(1/2); theorem says <= 0
};

namespace detail {

struct LindstromTrial {
  double start_entropy;
  double final_value;
  double final_entropy;
  bool ascent_converged;
};

inline LindstromTrial run_lindstrom_trial(std::size_t n, std::uint64_t seed, std::size_t trial) {
  Rng rng = trial_rng(seed, trial);
  const ProbVector p0 = sample_interior(n, rng);
  LindstromTrial out{};
  out.start_entropy = entropy_bits(pmf_dp(p0));
  const AscentTrace trace = pairwise_equalization_ascent(p0, 1e-10);
  out.ascent_converged = trace.converged;
  // The final iterate is constant to within the ascent tolerance; a
  // bracket of half-width 1/2 around it always contains p = 1/2.
  const double common = trace.final_p[0];
  const auto [x, fx] = golden_section_max(
      [n](double q) { return binomial_entropy(n, q); }, std::max(0.0, common - 0.5),
      std::min(1.0, common + 0.5), 1e-9);
  out.final_value = x;
  out.final_entropy = fx;
  return out;
}

}  // namespace detail

inline LindstromCertificate certify_lindstrom(std::size_t n, std::size_t trials,
                                              std::uint64_t seed, bool parallel = false) {
  if (n < 1) throw std::domain_error("certify_lindstrom: n must be >= 1");
  if (trials < 1) throw std::domain_error("certify_lindstrom: trials must be >= 1");

  std::vector<detail::LindstromTrial> results(trials);
  if (parallel && trials > 1) {
    const std::size_t workers =
        std::min<std::size_t>(trials, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < trials; t += workers) {
          results[t] = detail::run_lindstrom_trial(n, seed, t);
        }
      });
    }
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t t = 0; t < trials; ++t) {
      results[t] = detail::run_lindstrom_trial(n, seed, t);
    }
  }

  const double h_half = binomial_entropy(n, 0.5);
  LindstromCertificate cert;
  cert.n = n;
  cert.trials = trials;
  cert.seed = seed;
  cert.all_converged = true;
  cert.worst_gap_bits = -std::numeric_limits<double>::infinity();
  cert.max_start_excess = -std::numeric_limits<double>::infinity();
  double worst_dist = -1.0;
  double worst_final_value = 0.5;
  for (const auto& r : results) {
    cert.worst_gap_bits = std::max(cert.worst_gap_bits, h_half - r.start_entropy);
    cert.max_start_excess = std::max(cert.max_start_excess, r.start_entropy - h_half);
    const double dist = std::abs(r.final_value - 0.5);
    const double err = std::abs(r.final_entropy - h_half);
    if (dist > worst_dist) {
      worst_dist = dist;
      worst_final_value = r.final_value;
    }
    cert.worst_final_entropy_err = std::max(cert.worst_final_entropy_err, err);
    if (!r.ascent_converged || dist > 1e-6 || err > 1e-9 || r.start_entropy > h_half + 1e-12) {
      cert.all_converged = false;
    }
  }
  cert.worst_final_dist = worst_dist;
  cert.worst_final_p = ProbVector(n, worst_final_value);
  return cert;
}

inline std::string to_json(const LindstromCertificate& cert) {
  std::string out = "{\"n\": " + std::to_string(cert.n) +
                    ", \"trials\": " + std::to_string(cert.trials) +
                    ", \"seed\": " + std::to_string(cert.seed) +
                    ", \"worst_gap_bits\": " + format_shortest(cert.worst_gap_bits) +
                    ", \"all_converged\": " + (cert.all_converged ? "true" : "false") +
                    ", \"worst_final_p\": [";
  for (std::size_t i = 0; i < cert.worst_final_p.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_shortest(cert.worst_final_p[i]);
  }
  out += "]}";
  return out;
}

}  // namespace addercap
