#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "adaswitch/harness.hpp"

namespace adaswitch {

/// Outcome of one named check. For a negative control, `passed` means the
/// deliberately broken configuration was caught.
struct CheckResult {
    std::string name;
    bool passed = false;
    bool control = false;
    double worst = 0.0;  ///< check-specific worst value (violation or normalized slack)
    std::string detail;
};

struct SuiteOptions {
    std::uint64_t seed = 0;
    std::int64_t T = 4096;
    bool negative_controls = true;
};

struct SuiteOutput {
    std::vector<CheckResult> checks;
    std::vector<BoundReport> reports;
    std::vector<SweepReport> sweeps;

    void append(SuiteOutput other);
    /// Non-control checks that failed.
    std::size_t failures() const;
};

/// Names accepted by run_suite, in the order "all" runs them.
const std::vector<std::string>& suite_names();

/// Runs one named suite, or every suite for "all".
SuiteOutput run_suite(std::string_view name, const SuiteOptions& options);

// Individual suites.
SuiteOutput potential_suite(const SuiteOptions& options);     ///< regret + trajectory switching
SuiteOutput residual_suite(const SuiteOptions& options);      ///< Delta_t grid
SuiteOutput heat_suite(const SuiteOptions& options);          ///< PDE identity + finite differences
SuiteOutput erfi_suite(const SuiteOptions& options);          ///< inverse round trip + growth bound
SuiteOutput constrained_suite(const SuiteOptions& options);   ///< bounded-domain regret + windows
SuiteOutput doubling_suite(const SuiteOptions& options);
SuiteOutput baseline_suite(const SuiteOptions& options);
SuiteOutput lea_suite(const SuiteOptions& options);
SuiteOutput divergence_suite(const SuiteOptions& options);
SuiteOutput policy_suite(const SuiteOptions& options);        ///< monotone policy + per-step switch lemma
SuiteOutput control_suite(const SuiteOptions& options);       ///< alpha = 1 negative controls

/// Largest relative error of central differences (step h in S and in t)
/// against the closed forms on the sweep grid. dS and dt difference V itself;
/// dSS and dSSS difference the closed-form dS and dSS, since a second
/// difference of V at h = 1e-4 loses about 1e-8 * alpha * t to rounding.
struct FiniteDifferenceReport {
    double worst_dS = 0.0;
    double worst_dt = 0.0;
    double worst_dSS = 0.0;
    double worst_dSSS = 0.0;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;

    double worst() const;
};

FiniteDifferenceReport finite_difference_check(const SweepGrid& grid, double h = 1e-4);

/// The pair (p, q) on the d-simplex with p_1 = 1/sqrt(log d), q_1 = p_1 / d and
/// the remaining mass spread evenly, for which tv * kl <= 1 while kl grows
/// like sqrt(log d).
std::pair<std::vector<double>, std::vector<double>> tv_kl_separating_pair(std::size_t d);

void write_checks_json(std::ostream& os, const SuiteOutput& out);
void write_checks_csv(std::ostream& os, const SuiteOutput& out);

}  // namespace adaswitch
