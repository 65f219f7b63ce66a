#pragma once

// Capacity region of the s-user multiple access adder channel: the single
// polyhedron { R : sum of any j rates <= H_j(1/2) }. Because the bound on a
// subset depends only on its size, the region keeps one constraint per
// size, and membership reduces to prefix sums of the sorted rates. The
// 2^s-subset oracle is kept alongside to certify that reduction.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "addercap/entropy.hpp"
#include "addercap/poisson_binomial.hpp"
#include "addercap/serialize.hpp"

namespace addercap {

inline constexpr std::size_t kMaxUsers = 64;
inline constexpr std::size_t kNaiveMembershipMaxUsers = 20;
inline constexpr std::size_t kConditioningMaxComplement = 20;

/// Nonnegative rate tuple (R_1, ..., R_s) in bits per transmission.
class RateTuple {
 public:
  explicit RateTuple(std::vector<double> rates) : rates_(std::move(rates)) {
    for (double r : rates_) {
      if (!(r >= 0.0)) throw std::domain_error("RateTuple: rates must be nonnegative");
    }
  }

  std::size_t size() const { return rates_.size(); }
  double operator[](std::size_t i) const { return rates_[i]; }
  std::span<const double> values() const { return rates_; }

 private:
  std::vector<double> rates_;
};

struct RegionConstraint {
  std::size_t subset_size;  // j
  double bound_bits;        // H_j(1/2)

  friend bool operator==(const RegionConstraint&, const RegionConstraint&) = default;
};

class CapacityRegion {
 public:
  CapacityRegion(std::size_t s, std::vector<RegionConstraint> constraints)
      : s_(s), constraints_(std::move(constraints)) {
    if (constraints_.size() != s_) {
      throw std::invalid_argument("CapacityRegion: expected one constraint per subset size");
    }
    for (std::size_t j = 1; j <= s_; ++j) {
      if (constraints_[j - 1].subset_size != j) {
        throw std::invalid_argument("CapacityRegion: constraints must cover sizes 1..s in order");
      }
    }
  }

  std::size_t users() const { return s_; }
  const std::vector<RegionConstraint>& constraints() const { return constraints_; }
  double bound_for_size(std::size_t j) const { return constraints_[j - 1].bound_bits; }

  friend bool operator==(const CapacityRegion&, const CapacityRegion&) = default;

 private:
  std::size_t s_;
  std::vector<RegionConstraint> constraints_;
};

/// Bound on the total rate of all s users, H_s(1/2).
inline double sum_rate_bound(std::size_t s) {
  if (s < 1) throw std::domain_error("sum_rate_bound: s must be >= 1");
  return binomial_entropy(s, 0.5);
}

inline CapacityRegion build_region(std::size_t s) {
  if (s < 1 || s > kMaxUsers) {
    throw std::domain_error("build_region: s must be in [1, " + std::to_string(kMaxUsers) + "]");
  }
  std::vector<RegionConstraint> constraints;
  constraints.reserve(s);
  for (std::size_t j = 1; j <= s; ++j) {
    constraints.push_back({j, binomial_entropy(j, 0.5)});
  }
  return CapacityRegion(s, std::move(constraints));
}

struct MembershipResult {
  bool member;
  std::size_t violated_size;  // 0 when member
  double violation;           // excess over the violated bound, 0 when member

  explicit operator bool() const { return member; }
};

/// Prefix-sum membership test: sort the rates descending and compare the
/// top-j sum against H_j(1/2) for every j. The tightest size-j subset is
/// always the j largest rates, so this is equivalent to checking all
/// 2^s - 1 subsets. On failure reports the first violated size and excess.
inline MembershipResult is_member(const CapacityRegion& region, const RateTuple& rates,
                                  double tol = 1e-12) {
  if (rates.size() != region.users()) {
    throw std::invalid_argument("is_member: rate tuple has wrong dimension");
  }
  if (tol < 0.0) throw std::domain_error("is_member: tol must be >= 0");
  std::vector<double> sorted(rates.values().begin(), rates.values().end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0;
  for (std::size_t j = 1; j <= sorted.size(); ++j) {
    prefix += sorted[j - 1];
    const double bound = region.bound_for_size(j);
    if (prefix > bound + tol) {
      return {false, j, prefix - bound};
    }
  }
  return {true, 0, 0.0};
}

/// Exhaustive oracle for is_member: checks every nonempty subset.
inline bool is_member_naive(const CapacityRegion& region, const RateTuple& rates,
                            double tol = 1e-12) {
  if (rates.size() != region.users()) {
    throw std::invalid_argument("is_member_naive: rate tuple has wrong dimension");
  }
  const std::size_t s = region.users();
  if (s > kNaiveMembershipMaxUsers) {
    throw std::domain_error("is_member_naive: s > " +
                            std::to_string(kNaiveMembershipMaxUsers) + " (enumeration guard)");
  }
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << s); ++mask) {
    double sum = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
      if (mask & (std::uint64_t{1} << i)) sum += rates[i];
    }
    const std::size_t j = static_cast<std::size_t>(std::popcount(mask));
    if (sum > region.bound_for_size(j) + tol) return false;
  }
  return true;
}

/// I(X(A); Y | X(A^c)) for the adder channel, computed two ways.
struct MutualInfo {
  double closed_form;            // H of the partial sum over A
  double conditional_expansion;  // Σ_x Pr(X(A^c)=x) · H(Y | X(A^c)=x)

  double value() const { return closed_form; }
};

/// subset holds distinct 0-based user indices; Y is the sum of all users.
/// The closed form is the entropy of Σ_{i in A} X_i. The expansion route
/// conditions on every assignment of the complement, whose size is capped
/// at kConditioningMaxComplement.
inline MutualInfo conditional_mutual_info(const ProbVector& p,
                                          const std::vector<std::size_t>& subset) {
  if (subset.empty()) {
    throw std::invalid_argument("conditional_mutual_info: subset must be nonempty");
  }
  std::vector<bool> in_subset(p.size(), false);
  for (std::size_t i : subset) {
    if (i >= p.size()) {
      throw std::invalid_argument("conditional_mutual_info: user index out of range");
    }
    if (in_subset[i]) {
      throw std::invalid_argument("conditional_mutual_info: duplicate user index");
    }
    in_subset[i] = true;
  }

  std::vector<double> sub_probs, comp_probs;
  for (std::size_t i = 0; i < p.size(); ++i) {
    (in_subset[i] ? sub_probs : comp_probs).push_back(p[i]);
  }
  const std::size_t r = comp_probs.size();
  if (r > kConditioningMaxComplement) {
    throw std::domain_error("conditional_mutual_info: complement larger than " +
                            std::to_string(kConditioningMaxComplement));
  }

  const ProbVector p_sub(sub_probs);
  MutualInfo out{};
  out.closed_form = entropy_bits(pmf_dp(p_sub));

  // Conditioning route. Given X(A^c) = x, the output is Σ_{i in A} X_i
  // shifted by the constant Σ x_i, so its PMF is the subset PMF placed at
  // offset popcount(x). The subset PMF comes from the enumeration oracle
  // to keep this route independent of pmf_dp.
  const Pmf cond = pmf_bruteforce(p_sub);
  double expansion = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << r); ++mask) {
    double weight = 1.0;
    for (std::size_t i = 0; i < r; ++i) {
      weight *= (mask & (std::uint64_t{1} << i)) ? comp_probs[i] : 1.0 - comp_probs[i];
    }
    const std::size_t shift = static_cast<std::size_t>(std::popcount(mask));
    std::vector<double> y_mass(p.size() + 1, 0.0);
    for (std::size_t k = 0; k <= cond.support_size(); ++k) y_mass[shift + k] = cond[k];
    expansion += weight * entropy_bits(Pmf(std::move(y_mass)));
  }
  out.conditional_expansion = expansion;
  return out;
}

enum class ExportFormat { json, csv };

/// Renders the constraint list with bounds at 17 significant digits, so the
/// output is byte-stable and parses back to the identical region.
inline std::string export_region(const CapacityRegion& region, ExportFormat format) {
  if (format == ExportFormat::csv) {
    std::string out = "subset_size,bound_bits\n";
    for (const auto& c : region.constraints()) {
      out += std::to_string(c.subset_size);
      out += ',';
      out += format_digits17(c.bound_bits);
      out += '\n';
    }
    return out;
  }
  std::string out = "{\"s\": " + std::to_string(region.users()) + ", \"constraints\": [";
  bool sep = false;
  for (const auto& c : region.constraints()) {
    if (sep) out += ", ";
    out += "{\"subset_size\": " + std::to_string(c.subset_size) +
           ", \"bound_bits\": " + format_digits17(c.bound_bits) + "}";
    sep = true;
  }
  out += "]}";
  return out;
}

inline CapacityRegion parse_region_json(std::string_view text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  const std::size_t s = doc.at("s").get<std::size_t>();
  std::vector<RegionConstraint> constraints;
  for (const auto& c : doc.at("constraints")) {
    constraints.push_back(
        {c.at("subset_size").get<std::size_t>(), c.at("bound_bits").get<double>()});
  }
  return CapacityRegion(s, std::move(constraints));
}

inline CapacityRegion parse_region_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "subset_size,bound_bits") {
    throw std::invalid_argument("parse_region_csv: missing header");
  }
  std::vector<RegionConstraint> constraints;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("parse_region_csv: malformed row: " + line);
    }
    constraints.push_back(
        {std::stoul(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  const std::size_t s = constraints.size();
  return CapacityRegion(s, std::move(constraints));
}

}  // namespace addercap
