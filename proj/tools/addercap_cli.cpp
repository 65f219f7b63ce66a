// Command-line front end for the addercap library. Every subcommand maps
// to one library operation, takes an explicit probability list or a seeded
// random one, and writes plain, json or csv output.
//
// Exit codes: 0 success, 1 domain error, 2 a verified inequality failed
// numerically, 64 usage error.

#include <cstddef>
#include <cstdint>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "addercap/addercap.hpp"

namespace {

namespace ac = addercap;

constexpr int kExitOk = 0;
constexpr int kExitDomainError = 1;
constexpr int kExitVerificationFailed = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { plain, json, csv };

const std::map<std::string, Format> kFormatNames{
    {"plain", Format::plain}, {"json", Format::json}, {"csv", Format::csv}};

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string token = text.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + token + "'");
    }
    pos = comma + 1;
  }
  return out;
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_double_list(text)) {
    if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw UsageError("not a valid index: " + ac::format_shortest(v));
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

// Either an explicit probability list or a seeded random vector.
struct PSpec {
  std::string list;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  bool has_list = false;
  bool has_n = false;
};

void add_p_options(CLI::App* cmd, PSpec& spec) {
  auto* p = cmd->add_option("--p", spec.list, "comma-separated success probabilities");
  auto* n = cmd->add_option("--n", spec.n, "number of trials for a random p");
  auto* seed = cmd->add_option("--seed", spec.seed, "PRNG seed (required with --n)");
  n->needs(seed);
  seed->needs(n);
  p->excludes(n);
  p->excludes(seed);
  cmd->callback([&spec, p, n] {
    spec.has_list = p->count() > 0;
    spec.has_n = n->count() > 0;
  });
}

void add_format_option(CLI::App* cmd, Format& format) {
  cmd->add_option("--format", format, "output format: plain, json or csv")
      ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));
}

ac::ProbVector resolve_p(const PSpec& spec) {
  if (spec.has_list) return ac::ProbVector(parse_double_list(spec.list));
  if (!spec.has_n) throw UsageError("either --p or --n with --seed is required");
  ac::Rng rng = ac::seeded_rng(spec.seed);
  return ac::sample_interior(spec.n, rng);
}

std::string join_shortest(std::span<const double> values, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += sep;
    out += ac::format_shortest(values[i]);
  }
  return out;
}

void emit_kv_csv(const std::vector<std::pair<std::string, std::string>>& rows) {
  for (const auto& [key, value] : rows) std::cout << key << ',' << value << '\n';
}

int run_pmf(const PSpec& spec, Format format) {
  const ac::Pmf f = ac::pmf_dp(resolve_p(spec));
  switch (format) {
    case Format::csv:
      std::cout << ac::pmf_to_csv(f);
      break;
    case Format::json:
      std::cout << ac::pmf_to_json(f) << '\n';
      break;
    case Format::plain:
      for (std::size_t k = 0; k <= f.support_size(); ++k) {
        std::cout << "P(Z = " << k << ") = " << ac::format_shortest(f[k]) << '\n';
      }
      break;
  }
  return kExitOk;
}

int run_entropy(const PSpec& spec, Format format) {
  const double h = ac::entropy_bits(ac::pmf_dp(resolve_p(spec)));
  switch (format) {
    case Format::csv:
      emit_kv_csv({{"entropy_bits", ac::format_shortest(h)}});
      break;
    case Format::json:
      std::cout << "{\"entropy_bits\": " << ac::format_shortest(h) << "}\n";
      break;
    case Format::plain:
      std::cout << "H(Z_p) = " << ac::format_shortest(h) << " bits\n";
      break;
  }
  return kExitOk;
}

int run_grad(const PSpec& spec, Format format) {
  const auto grad = ac::entropy_gradient(resolve_p(spec));
  switch (format) {
    case Format::csv:
      for (std::size_t l = 0; l < grad.size(); ++l) {
        std::cout << l << ',' << ac::format_shortest(grad[l]) << '\n';
      }
      break;
    case Format::json:
      std::cout << '[' << join_shortest(grad) << "]\n";
      break;
    case Format::plain:
      for (std::size_t l = 0; l < grad.size(); ++l) {
        std::cout << "dH/dp[" << l << "] = " << ac::format_shortest(grad[l]) << '\n';
      }
      break;
  }
  return kExitOk;
}

int run_hessian_check(const PSpec& spec, double tol, Format format) {
  const ac::ProbVector p = resolve_p(spec);
  const double h = 1e-4;
  double max_dev = 0.0;
  for (std::size_t l = 0; l < p.size(); ++l) {
    for (std::size_t m = l; m < p.size(); ++m) {
      const double analytic = ac::entropy_hessian_entry(p, l, m);
      const double numeric = ac::fd::hessian_entry(p, l, m, h);
      max_dev = std::max(max_dev, std::abs(analytic - numeric));
    }
  }
  const bool pass = max_dev <= tol;
  switch (format) {
    case Format::csv:
      emit_kv_csv({{"max_deviation", ac::format_shortest(max_dev)},
                   {"tolerance", ac::format_shortest(tol)},
                   {"pass", pass ? "1" : "0"}});
      break;
    case Format::json:
      std::cout << "{\"max_deviation\": " << ac::format_shortest(max_dev)
                << ", \"tolerance\": " << ac::format_shortest(tol)
                << ", \"step\": " << ac::format_shortest(h)
                << ", \"pass\": " << (pass ? "true" : "false") << "}\n";
      break;
    case Format::plain:
      std::cout << "analytic vs finite-difference Hessian (h = " << ac::format_shortest(h)
                << ")\nmax |deviation| = " << ac::format_shortest(max_dev)
                << "  tolerance = " << ac::format_shortest(tol) << '\n'
                << (pass ? "PASS" : "FAIL") << '\n';
      break;
  }
  return pass ? kExitOk : kExitVerificationFailed;
}

int run_logconcavity(const PSpec& spec, Format format) {
  const auto report = ac::log_concavity_margin(resolve_p(spec));
  const bool failed = report.checked_count > 0 && report.min_margin <= 0.0;
  switch (format) {
    case Format::csv:
      emit_kv_csv({{"min_margin", ac::format_shortest(report.min_margin)},
                   {"witness_k", std::to_string(report.witness_k)},
                   {"checked", std::to_string(report.checked_count)},
                   {"skipped", std::to_string(report.skipped_count)},
                   {"strict", report.strict() ? "1" : "0"}});
      break;
    case Format::json:
      std::cout << "{\"min_margin\": " << ac::format_shortest(report.min_margin)
                << ", \"witness_k\": " << report.witness_k
                << ", \"checked\": " << report.checked_count
                << ", \"skipped\": " << report.skipped_count
                << ", \"strict\": " << (report.strict() ? "true" : "false") << "}\n";
      break;
    case Format::plain:
      if (report.checked_count == 0) {
        std::cout << "no checkable k (all triples touch a zero mass; skipped "
                  << report.skipped_count << ")\n";
      } else {
        std::cout << "min b(k)^2 - b(k-1)b(k+1) = " << ac::format_shortest(report.min_margin)
                  << " at k = " << report.witness_k << "  (checked " << report.checked_count
                  << ", skipped " << report.skipped_count << ")\n"
                  << "strictly log-concave: " << (report.min_margin > 0.0 ? "yes" : "NO") << '\n';
      }
      break;
  }
  return failed ? kExitVerificationFailed : kExitOk;
}

int run_curvature(const PSpec& spec, Format format) {
  const auto report = ac::curvature_scan(resolve_p(spec));
  const bool pass = report.max_curvature < 0.0;
  switch (format) {
    case Format::csv:
      emit_kv_csv({{"max_curvature", ac::format_shortest(report.max_curvature)},
                   {"witness_l", std::to_string(report.witness.l)},
                   {"witness_m", std::to_string(report.witness.m)},
                   {"strict", pass ? "1" : "0"}});
      break;
    case Format::json:
      std::cout << "{\"max_curvature\": " << ac::format_shortest(report.max_curvature)
                << ", \"witness_pair\": [" << report.witness.l << ", " << report.witness.m
                << "], \"strict\": " << (pass ? "true" : "false") << "}\n";
      break;
    case Format::plain:
      std::cout << "max D^2_u H = " << ac::format_shortest(report.max_curvature)
                << " at pair (" << report.witness.l << ", " << report.witness.m << ")\n"
                << "strictly concave along all pair directions: " << (pass ? "yes" : "NO")
                << '\n';
      break;
  }
  return pass ? kExitOk : kExitVerificationFailed;
}

int run_maximize(const PSpec& spec, double tol, bool show_trace, Format format) {
  const auto trace = ac::pairwise_equalization_ascent(resolve_p(spec), tol);
  bool monotone = true;
  for (std::size_t i = 1; i < trace.iterates.size(); ++i) {
    if (trace.iterates[i].entropy_bits < trace.iterates[i - 1].entropy_bits - 1e-12) {
      monotone = false;
    }
  }
  const auto& first = trace.iterates.front();
  const auto& last = trace.iterates.back();
  switch (format) {
    case Format::csv:
      for (std::size_t i = 0; i < trace.iterates.size(); ++i) {
        std::cout << i << ',' << ac::format_shortest(trace.iterates[i].entropy_bits) << '\n';
      }
      break;
    case Format::json:
      std::cout << "{\"steps\": " << trace.steps()
                << ", \"start_entropy_bits\": " << ac::format_shortest(first.entropy_bits)
                << ", \"final_entropy_bits\": " << ac::format_shortest(last.entropy_bits)
                << ", \"final_p\": [" << join_shortest(trace.final_p.values())
                << "], \"converged\": " << (trace.converged ? "true" : "false")
                << ", \"monotone\": " << (monotone ? "true" : "false") << "}\n";
      break;
    case Format::plain:
      std::cout << "steps = " << trace.steps() << '\n'
                << "entropy: " << ac::format_shortest(first.entropy_bits) << " -> "
                << ac::format_shortest(last.entropy_bits) << " bits\n"
                << "final p = " << join_shortest(trace.final_p.values()) << '\n'
                << "converged = " << (trace.converged ? "yes" : "no") << '\n';
      if (show_trace) {
        for (std::size_t i = 0; i < trace.iterates.size(); ++i) {
          std::cout << "  iterate " << i << ": H = "
                    << ac::format_shortest(trace.iterates[i].entropy_bits) << '\n';
        }
      }
      break;
  }
  return monotone ? kExitOk : kExitVerificationFailed;
}

int run_certify(std::size_t n, std::size_t trials, std::uint64_t seed, bool parallel,
                Format format) {
  const auto cert = ac::certify_lindstrom(n, trials, seed, parallel);
  switch (format) {
    case Format::csv:
      emit_kv_csv({{"n", std::to_string(cert.n)},
                   {"trials", std::to_string(cert.trials)},
                   {"seed", std::to_string(cert.seed)},
                   {"worst_gap_bits", ac::format_shortest(cert.worst_gap_bits)},
                   {"all_converged", cert.all_converged ? "1" : "0"}});
      break;
    case Format::json:
      std::cout << ac::to_json(cert) << '\n';
      break;
    case Format::plain:
      std::cout << "n = " << cert.n << "  trials = " << cert.trials << "  seed = " << cert.seed
                << '\n'
                << "all converged = " << (cert.all_converged ? "yes" : "NO") << '\n'
                << "worst entropy gap below H_n(1/2) = "
                << ac::format_shortest(cert.worst_gap_bits) << " bits\n"
                << "worst |final p - 1/2| = " << ac::format_shortest(cert.worst_final_dist)
                << '\n'
                << "worst |final H - H_n(1/2)| = "
                << ac::format_shortest(cert.worst_final_entropy_err) << '\n';
      break;
  }
  return cert.all_converged ? kExitOk : kExitVerificationFailed;
}

int run_region(std::size_t s, Format format) {
  const ac::CapacityRegion region = ac::build_region(s);
  switch (format) {
    case Format::csv:
      std::cout << ac::export_region(region, ac::ExportFormat::csv);
      break;
    case Format::json:
      std::cout << ac::export_region(region, ac::ExportFormat::json) << '\n';
      break;
    case Format::plain:
      std::cout << "capacity region, s = " << s << '\n';
      for (const auto& c : region.constraints()) {
        std::cout << "sum of any " << c.subset_size
                  << " rates <= " << ac::format_shortest(c.bound_bits) << '\n';
      }
      break;
  }
  return kExitOk;
}

int run_member(std::size_t s, const std::string& rates_text, double tol, Format format) {
  const ac::RateTuple rates(parse_double_list(rates_text));
  const auto result = ac::is_member(ac::build_region(s), rates, tol);
  switch (format) {
    case Format::csv:
      emit_kv_csv({{"member", result.member ? "1" : "0"},
                   {"violated_size", std::to_string(result.violated_size)},
                   {"violation", ac::format_shortest(result.violation)}});
      break;
    case Format::json:
      std::cout << "{\"member\": " << (result.member ? "true" : "false")
                << ", \"violated_size\": " << result.violated_size
                << ", \"violation\": " << ac::format_shortest(result.violation) << "}\n";
      break;
    case Format::plain:
      if (result.member) {
        std::cout << "member\n";
      } else {
        std::cout << "non-member: sum of the top " << result.violated_size
                  << " rates exceeds its bound by " << ac::format_shortest(result.violation)
                  << " bits\n";
      }
      break;
  }
  return kExitOk;
}

int run_mi(const PSpec& spec, const std::string& subset_text, double tol, Format format) {
  const ac::ProbVector p = resolve_p(spec);
  const auto subset = parse_index_list(subset_text);
  const auto mi = ac::conditional_mutual_info(p, subset);
  const double diff = std::abs(mi.closed_form - mi.conditional_expansion);
  const bool pass = diff <= tol;
  switch (format) {
    case Format::csv:
      emit_kv_csv({{"mutual_info_bits", ac::format_shortest(mi.value())},
                   {"conditional_expansion", ac::format_shortest(mi.conditional_expansion)},
                   {"route_difference", ac::format_shortest(diff)},
                   {"pass", pass ? "1" : "0"}});
      break;
    case Format::json:
      std::cout << "{\"mutual_info_bits\": " << ac::format_shortest(mi.value())
                << ", \"conditional_expansion\": "
                << ac::format_shortest(mi.conditional_expansion)
                << ", \"route_difference\": " << ac::format_shortest(diff)
                << ", \"pass\": " << (pass ? "true" : "false") << "}\n";
      break;
    case Format::plain:
      std::cout << "I(X(A); Y | X(A^c)) = " << ac::format_shortest(mi.value()) << " bits\n"
                << "route difference = " << ac::format_shortest(diff) << "  (tolerance "
                << ac::format_shortest(tol) << ")\n";
      break;
  }
  return pass ? kExitOk : kExitVerificationFailed;
}

int run_scan(std::size_t n, std::size_t grid, Format format) {
  const auto result = ac::binomial_entropy_scan(n, grid);
  switch (format) {
    case Format::csv:
      std::cout << "argmax_p,max_value\n"
                << ac::format_shortest(result.argmax_p) << ','
                << ac::format_shortest(result.max_value) << '\n';
      break;
    case Format::json:
      std::cout << "{\"argmax_p\": " << ac::format_shortest(result.argmax_p)
                << ", \"max_value_bits\": " << ac::format_shortest(result.max_value) << "}\n";
      break;
    case Format::plain:
      std::cout << "argmax p = " << ac::format_shortest(result.argmax_p) << '\n'
                << "max H = " << ac::format_shortest(result.max_value) << " bits\n";
      break;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson-binomial entropy and adder-channel capacity toolkit"};
  app.require_subcommand(1);

  Format format = Format::plain;
  PSpec pmf_p, entropy_p, grad_p, hess_p, logc_p, curv_p, max_p, mi_p;

  auto* pmf_cmd = app.add_subcommand("pmf", "PMF of the Bernoulli sum");
  add_p_options(pmf_cmd, pmf_p);
  add_format_option(pmf_cmd, format);

  auto* entropy_cmd = app.add_subcommand("entropy", "Shannon entropy of the Bernoulli sum");
  add_p_options(entropy_cmd, entropy_p);
  add_format_option(entropy_cmd, format);

  auto* grad_cmd = app.add_subcommand("grad", "analytic entropy gradient");
  add_p_options(grad_cmd, grad_p);
  add_format_option(grad_cmd, format);

  double hess_tol = 1e-5;
  auto* hess_cmd =
      app.add_subcommand("hessian-check", "analytic Hessian vs finite differences");
  add_p_options(hess_cmd, hess_p);
  add_format_option(hess_cmd, format);
  hess_cmd->add_option("--tol", hess_tol, "max allowed deviation")
      ->check(CLI::PositiveNumber);

  auto* logc_cmd = app.add_subcommand("logconcavity", "PMF log-concavity margins");
  add_p_options(logc_cmd, logc_p);
  add_format_option(logc_cmd, format);

  auto* curv_cmd =
      app.add_subcommand("curvature", "directional curvature over all coordinate pairs");
  add_p_options(curv_cmd, curv_p);
  add_format_option(curv_cmd, format);

  double max_tol = 1e-10;
  bool show_trace = false;
  auto* max_cmd = app.add_subcommand("maximize", "pairwise-equalization entropy ascent");
  add_p_options(max_cmd, max_p);
  add_format_option(max_cmd, format);
  max_cmd->add_option("--tol", max_tol, "coordinate-range stopping tolerance")
      ->check(CLI::PositiveNumber);
  max_cmd->add_flag("--trace", show_trace, "print every iterate (plain format)");

  std::size_t cert_n = 0, cert_trials = 100;
  std::uint64_t cert_seed = 0;
  bool cert_parallel = false;
  auto* cert_cmd =
      app.add_subcommand("certify", "certify convergence to the all-1/2 maximizer");
  add_format_option(cert_cmd, format);
  cert_cmd->add_option("--n", cert_n, "number of trials in the Bernoulli sum")->required();
  cert_cmd->add_option("--trials", cert_trials, "number of random starting points");
  cert_cmd->add_option("--seed", cert_seed, "PRNG seed")->required();
  cert_cmd->add_flag("--parallel", cert_parallel, "run trials on all cores");

  std::size_t region_s = 0;
  auto* region_cmd = app.add_subcommand("region", "capacity region constraints");
  add_format_option(region_cmd, format);
  region_cmd->add_option("--s", region_s, "number of users")->required();

  std::size_t member_s = 0;
  std::string member_rates;
  double member_tol = 1e-12;
  auto* member_cmd = app.add_subcommand("member", "rate tuple membership test");
  add_format_option(member_cmd, format);
  member_cmd->add_option("--s", member_s, "number of users")->required();
  member_cmd->add_option("--rates", member_rates, "comma-separated rates")->required();
  member_cmd->add_option("--tol", member_tol, "membership tolerance")
      ->check(CLI::NonNegativeNumber);

  std::string mi_subset;
  double mi_tol = 1e-10;
  auto* mi_cmd =
      app.add_subcommand("mi", "conditional mutual information of a user subset");
  add_p_options(mi_cmd, mi_p);
  add_format_option(mi_cmd, format);
  mi_cmd->add_option("--subset", mi_subset, "comma-separated 0-based user indices")
      ->required();
  mi_cmd->add_option("--tol", mi_tol, "route agreement tolerance")
      ->check(CLI::PositiveNumber);

  std::size_t scan_n = 0, scan_grid = 1001;
  auto* scan_cmd = app.add_subcommand("scan", "grid scan of the binomial entropy");
  add_format_option(scan_cmd, format);
  scan_cmd->add_option("--n", scan_n, "number of trials")->required();
  scan_cmd->add_option("--grid", scan_grid, "odd number of grid points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*pmf_cmd) return run_pmf(pmf_p, format);
    if (*entropy_cmd) return run_entropy(entropy_p, format);
    if (*grad_cmd) return run_grad(grad_p, format);
    if (*hess_cmd) return run_hessian_check(hess_p, hess_tol, format);
    if (*logc_cmd) return run_logconcavity(logc_p, format);
    if (*curv_cmd) return run_curvature(curv_p, format);
    if (*max_cmd) return run_maximize(max_p, max_tol, show_trace, format);
    if (*cert_cmd) return run_certify(cert_n, cert_trials, cert_seed, cert_parallel, format);
    if (*region_cmd) return run_region(region_s, format);
    if (*member_cmd) return run_member(member_s, member_rates, member_tol, format);
    if (*mi_cmd) return run_mi(mi_p, mi_subset, mi_tol, format);
    if (*scan_cmd) return run_scan(scan_n, scan_grid, format);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  return kExitOk;
}
