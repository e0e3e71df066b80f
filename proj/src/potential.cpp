#include "adaswitch/potential.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace adaswitch {

namespace {

// Below this magnitude the Maclaurin series is used; above it the asymptotic
// expansion's smallest term is under 1e-16 relative.
constexpr double kSeriesLimit = 6.0;

std::string range_message(const std::string& what, double t, double S, double alpha) {
    std::ostringstream os;
    os << what << " (t=" << t << ", S=" << S << ", alpha=" << alpha << ")";
    return os.str();
}

double erfi_series(double z) {
    const double z2 = z * z;
    double power = z;  // z^{2k+1} / k!
    double sum = z;
    for (int k = 1; k < 1000; ++k) {
        power *= z2 / k;
        const double term = power / (2 * k + 1);
        sum += term;
        if (term <= 1e-17 * sum) {
            break;
        }
    }
    return sum;
}

// exp(z^2) / (2z) * sum_k (2k-1)!! / (2 z^2)^k, truncated at the smallest term.
double erfi_asymptotic(double z) {
    const double inv = 1.0 / (2.0 * z * z);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 1000; ++k) {
        const double next = term * (2 * k - 1) * inv;
        if (next >= term) {
            break;
        }
        term = next;
        sum += term;
        if (term <= 1e-17 * sum) {
            break;
        }
    }
    return std::exp(z * z) / (2.0 * z) * sum;
}

void check_point(const LearnerConfig& cfg, PotentialPoint p) {
    if (!std::isfinite(p.t) || !std::isfinite(p.S)) {
        throw std::invalid_argument("potential point must be finite");
    }
    if (p.t < 0.0) {
        throw std::invalid_argument("potential point requires t >= 0");
    }
    (void)cfg;
}

// y = S / sqrt(4 alpha t), guarded against exp overflow.
double scaled_statistic(const LearnerConfig& cfg, PotentialPoint p) {
    const double y = p.S / std::sqrt(4.0 * cfg.alpha * p.t);
    if (y * y > kMaxExponent) {
        throw RangeError("potential argument exceeds overflow guard", p.t, p.S, cfg.alpha);
    }
    return y;
}

}  // namespace

RangeError::RangeError(const std::string& what, double t, double S, double alpha)
    : std::range_error(range_message(what, t, S, alpha)), t_(t), S_(S), alpha_(alpha) {}

LearnerConfig LearnerConfig::switching(double C, double G, double lambda) {
    LearnerConfig cfg{C, G, lambda, 4.0 * lambda / G + 2.0};
    cfg.validate();
    return cfg;
}

LearnerConfig LearnerConfig::doubling(double C, double G, double lambda) {
    LearnerConfig cfg{C, G, lambda, 8.0 * lambda / G + 2.0};
    cfg.validate();
    return cfg;
}

LearnerConfig LearnerConfig::with_alpha(double C, double G, double lambda, double alpha) {
    LearnerConfig cfg{C, G, lambda, alpha};
    cfg.validate();
    return cfg;
}

void LearnerConfig::validate() const {
    if (!(C > 0.0) || !std::isfinite(C)) {
        throw std::invalid_argument("LearnerConfig: C must be positive and finite");
    }
    if (!(G > 0.0) || !std::isfinite(G)) {
        throw std::invalid_argument("LearnerConfig: G must be positive and finite");
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("LearnerConfig: lambda must be nonnegative and finite");
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("LearnerConfig: alpha must be positive and finite");
    }
}

double erfi(double z) {
    if (!std::isfinite(z)) {
        throw std::invalid_argument("erfi: argument must be finite");
    }
    if (z * z > kMaxExponent) {
        throw RangeError("erfi argument exceeds overflow guard",
                         std::numeric_limits<double>::quiet_NaN(), z,
                         std::numeric_limits<double>::quiet_NaN());
    }
    const double a = std::fabs(z);
    if (a == 0.0) {
        return 0.0;
    }
    const double value = a <= kSeriesLimit ? erfi_series(a) : erfi_asymptotic(a);
    return std::copysign(value, z);
}

double erfi_inv(double y) {
    if (!std::isfinite(y) || y < 0.0) {
        throw std::invalid_argument("erfi_inv: argument must be finite and nonnegative");
    }
    if (y == 0.0) {
        return 0.0;
    }
    // erfi is increasing and convex on [0, inf), so Newton's method started at
    // the upper bracket 1 + sqrt(log(1 + y)) decreases monotonically to the root.
    double lo = 0.0;
    double hi = 1.0 + std::sqrt(std::log1p(y));
    double z = hi;
    for (int iter = 0; iter < 200; ++iter) {
        const double f = erfi(z) - y;
        if (f == 0.0) {
            return z;
        }
        if (f > 0.0) {
            hi = z;
        } else {
            lo = z;
        }
        double next = z - f / std::exp(z * z);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        const double step = std::fabs(next - z);
        z = next;
        if (step <= 4.0 * std::numeric_limits<double>::epsilon() * z) {
            break;
        }
    }
    return z;
}

double potential_value(const LearnerConfig& cfg, PotentialPoint p) {
    check_point(cfg, p);
    if (p.t == 0.0) {
        return 0.0;
    }
    const double y = scaled_statistic(cfg, p);
    const double prefactor = cfg.C * std::sqrt(cfg.alpha * p.t);
    return prefactor * (2.0 * y * erfi(y) - std::exp(y * y));
}

double discrete_grad_s(const LearnerConfig& cfg, PotentialPoint p) {
    const double up = potential_value(cfg, {p.t, p.S + 1.0});
    const double down = potential_value(cfg, {p.t, p.S - 1.0});
    return 0.5 * (up - down);
}

DiscreteDerivs discrete_derivs(const LearnerConfig& cfg, PotentialPoint p) {
    if (p.t < 1.0) {
        throw std::invalid_argument("discrete_derivs: requires t >= 1");
    }
    const double mid = potential_value(cfg, p);
    const double up = potential_value(cfg, {p.t, p.S + 1.0});
    const double down = potential_value(cfg, {p.t, p.S - 1.0});
    const double prev = potential_value(cfg, {p.t - 1.0, p.S});
    return {0.5 * (up - down), mid - prev, up + down - 2.0 * mid};
}

AnalyticDerivs analytic_derivs(const LearnerConfig& cfg, PotentialPoint p) {
    check_point(cfg, p);
    if (p.t <= 0.0) {
        throw std::invalid_argument("analytic_derivs: requires t > 0");
    }
    const double y = scaled_statistic(cfg, p);
    const double at = cfg.alpha * p.t;
    const double e = std::exp(y * y);
    AnalyticDerivs d;
    d.dS = cfg.C * erfi(y);
    d.dSS = cfg.C / (2.0 * std::sqrt(at)) * e;
    d.dSSS = cfg.C * p.S / (4.0 * at * std::sqrt(at)) * e;
    d.dt = -cfg.C * std::sqrt(cfg.alpha) / (2.0 * std::sqrt(p.t)) * e;
    return d;
}

double heat_residual_with(const LearnerConfig& cfg, PotentialPoint p, double diffusivity) {
    const AnalyticDerivs d = analytic_derivs(cfg, p);
    return d.dt + diffusivity * d.dSS;
}

double heat_residual(const LearnerConfig& cfg, PotentialPoint p) {
    return heat_residual_with(cfg, p, cfg.alpha);
}

double residual_delta(const LearnerConfig& cfg, PotentialPoint p) {
    if (p.t < 1.0) {
        throw std::invalid_argument("residual_delta: requires t >= 1");
    }
    double v[5];
    for (int k = -2; k <= 2; ++k) {
        v[k + 2] = potential_value(cfg, {p.t, p.S + k});
    }
    const double prev = potential_value(cfg, {p.t - 1.0, p.S});
    const double gradT = v[2] - prev;
    const double laplS = v[3] + v[1] - 2.0 * v[2];
    // gradS(S+1) - gradS(S-1) = (V(S+2) - V(S) - V(S) + V(S-2)) / 2
    const double switching = 0.5 * (v[4] - 2.0 * v[2] + v[0]);
    return gradT + 0.5 * laplS + cfg.lambda / cfg.G * switching;
}

}  // namespace adaswitch
