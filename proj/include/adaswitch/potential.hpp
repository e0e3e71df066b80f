#pragma once

#include <stdexcept>
#include <string>

namespace adaswitch {

/// Raised when an evaluation would leave the representable range of a double.
/// Carries the (t, S, alpha) coordinates that triggered it.
class RangeError : public std::range_error {
public:
    RangeError(const std::string& what, double t, double S, double alpha);

    double t() const noexcept { return t_; }
    double S() const noexcept { return S_; }
    double alpha() const noexcept { return alpha_; }

private:
    double t_;
    double S_;
    double alpha_;
};

/// Largest admissible y^2 = S^2 / (4 alpha t) before exp(y^2) is refused.
inline constexpr double kMaxExponent = 700.0;

/// Hyperparameters shared by the potential-based learners.
///
/// `alpha` is the (negative) thermal diffusivity of the potential. The
/// switching-adjusted choice is 4 lambda / G + 2; the doubling wrapper uses
/// 8 lambda / G + 2. Any positive alpha may be supplied explicitly, which the
/// harness uses for negative controls.
struct LearnerConfig {
    double C = 1.0;
    double G = 1.0;
    double lambda = 0.0;
    double alpha = 2.0;

    static LearnerConfig switching(double C, double G, double lambda);
    static LearnerConfig doubling(double C, double G, double lambda);
    static LearnerConfig with_alpha(double C, double G, double lambda, double alpha);

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

/// A point (t, S) of the potential's domain.
struct PotentialPoint {
    double t = 0.0;
    double S = 0.0;
};

struct DiscreteDerivs {
    double gradS = 0.0;
    double gradT = 0.0;
    double laplS = 0.0;
};

struct AnalyticDerivs {
    double dS = 0.0;
    double dt = 0.0;
    double dSS = 0.0;
    double dSSS = 0.0;
};

/// erfi(z) = integral of exp(x^2) over [0, z]. Odd in z.
/// Throws RangeError when z^2 > kMaxExponent.
double erfi(double z);

/// Inverse of erfi on [0, inf). Requires y >= 0 and finite.
double erfi_inv(double y);

/// V_alpha(t, S) = C sqrt(alpha t) [2 y erfi(y) - exp(y^2)], y = S / sqrt(4 alpha t).
/// V_alpha(0, S) is defined as 0.
double potential_value(const LearnerConfig& cfg, PotentialPoint p);

/// Central discrete derivatives with unit increment in S and in t.
/// gradT needs t >= 1.
DiscreteDerivs discrete_derivs(const LearnerConfig& cfg, PotentialPoint p);

/// Only the S-gradient (the learner's prediction); cheaper than discrete_derivs.
double discrete_grad_s(const LearnerConfig& cfg, PotentialPoint p);

/// Closed-form partial derivatives of V_alpha. Requires t > 0.
AnalyticDerivs analytic_derivs(const LearnerConfig& cfg, PotentialPoint p);

/// dt + alpha * dSS; zero up to rounding for V_alpha.
double heat_residual(const LearnerConfig& cfg, PotentialPoint p);

/// Same residual with an arbitrary diffusivity in place of cfg.alpha.
double heat_residual_with(const LearnerConfig& cfg, PotentialPoint p, double diffusivity);

/// One-step residual
///   gradT(t,S) + laplS(t,S) / 2 + (lambda / G) [gradS(t,S+1) - gradS(t,S-1)]
/// evaluated at S = S_{t-1}. Nonpositive whenever alpha >= 4 lambda / G + 2.
double residual_delta(const LearnerConfig& cfg, PotentialPoint p);

}  // namespace adaswitch
