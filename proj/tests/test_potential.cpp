#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "adaswitch/potential.hpp"
#include "oracle.hpp"

using namespace adaswitch;

namespace {

// 30-digit reference values (mpmath), rounded to double.
constexpr double kErfi1 = 1.46265174590718160880;
constexpr double kV_1_1 = -1.23365985224864720520;     // C=1, alpha=2, t=1, S=1
constexpr double kV_2_2 = -1.47807662500823852082;     // t=2, S=2
constexpr double kGradS_2_1 = 0.260961687495880739589;
constexpr double kGradT_2_1 = -0.640021604942872334590;
constexpr double kDSS_1_1 = 0.400628477627299586739;
constexpr double kDelta_5_2 = -0.363054563856449971243;  // C=1, G=1, lambda=1, alpha=6

LearnerConfig unit_cfg(double alpha = 2.0) { return LearnerConfig::with_alpha(1.0, 1.0, 0.0, alpha); }

double rel_err(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

}  // namespace

TEST(Erfi, ZeroAndOne) {
    EXPECT_EQ(erfi(0.0), 0.0);
    EXPECT_LT(rel_err(erfi(1.0), kErfi1), 1e-14);
    EXPECT_LT(rel_err(erfi(1.0), oracle::erfi(1.0)), 1e-12);
}

TEST(Erfi, OddSymmetry) {
    for (double z : {0.35355, 1.0, 4.9, 6.0, 7.5}) {
        EXPECT_EQ(erfi(-z), -erfi(z)) << z;
    }
}

TEST(Erfi, MatchesQuadratureAcrossBothRegimes) {
    for (double z = 0.01; z <= 10.0; z += 0.173) {
        EXPECT_LT(rel_err(erfi(z), oracle::erfi(z)), 1e-12) << "z=" << z;
    }
    for (double z : {5.999999, 6.0, 6.000001}) {
        EXPECT_LT(rel_err(erfi(z), oracle::erfi(z)), 1e-12) << "z=" << z;
    }
}

TEST(Erfi, GuardAndBadInput) {
    EXPECT_THROW(erfi(std::sqrt(701.0)), RangeError);
    EXPECT_NO_THROW(erfi(std::sqrt(699.0)));
    EXPECT_THROW(erfi(std::nan("")), std::invalid_argument);
}

TEST(ErfiInv, Examples) {
    EXPECT_EQ(erfi_inv(0.0), 0.0);
    EXPECT_NEAR(erfi_inv(kErfi1), 1.0, 1e-12);
    EXPECT_LE(erfi_inv(10.0), 2.54851389170338751084);
    EXPECT_THROW(erfi_inv(-1.0), std::invalid_argument);
    EXPECT_THROW(erfi_inv(INFINITY), std::invalid_argument);
}

TEST(ErfiInv, RoundTripLogGrid) {
    for (int k = 0; k <= 1200; ++k) {
        const double y = std::pow(10.0, -6.0 + 12.0 * k / 1200.0);
        EXPECT_LE(std::fabs(erfi(erfi_inv(y)) - y), 1e-10 * std::max(1.0, y)) << y;
        EXPECT_LE(erfi_inv(y), 1.0 + std::sqrt(std::log1p(y))) << y;
    }
}

TEST(LearnerConfig, AlphaChoicesAndValidation) {
    EXPECT_DOUBLE_EQ(LearnerConfig::switching(1.0, 2.0, 1.0).alpha, 4.0);
    EXPECT_DOUBLE_EQ(LearnerConfig::doubling(1.0, 2.0, 1.0).alpha, 6.0);
    EXPECT_THROW(LearnerConfig::switching(0.0, 1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(LearnerConfig::switching(1.0, -1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(LearnerConfig::switching(1.0, 1.0, -0.1), std::invalid_argument);
    EXPECT_THROW(LearnerConfig::with_alpha(1.0, 1.0, 0.0, 0.0), std::invalid_argument);
}

TEST(PotentialValue, Examples) {
    const auto cfg = unit_cfg();
    EXPECT_NEAR(potential_value(cfg, {1.0, 0.0}), -std::numbers::sqrt2, 1e-15);
    EXPECT_LT(rel_err(potential_value(cfg, {1.0, 1.0}), kV_1_1), 1e-14);
    EXPECT_LT(rel_err(potential_value(cfg, {2.0, 2.0}), kV_2_2), 1e-14);
    EXPECT_EQ(potential_value(cfg, {0.0, 5.0}), 0.0);
}

TEST(PotentialValue, MatchesNestedQuadrature) {
    for (double alpha : {2.0, 2.4, 6.0}) {
        const auto cfg = LearnerConfig::with_alpha(1.7, 1.0, 0.0, alpha);
        for (double t : {1.0, 3.0, 17.0, 250.0}) {
            for (double S : {-20.0, -3.0, -0.5, 0.0, 1.0, 4.0, 11.0}) {
                EXPECT_LT(rel_err(potential_value(cfg, {t, S}), oracle::potential(1.7, alpha, t, S)),
                          1e-11)
                    << "alpha=" << alpha << " t=" << t << " S=" << S;
            }
        }
    }
}

TEST(PotentialValue, ErrorsCarryCoordinates) {
    const auto cfg = unit_cfg();
    EXPECT_THROW(potential_value(cfg, {-1.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(potential_value(cfg, {1.0, INFINITY}), std::invalid_argument);
    try {
        potential_value(cfg, {1.0, 100.0});  // y^2 = 1250
        FAIL() << "expected RangeError";
    } catch (const RangeError& e) {
        EXPECT_EQ(e.t(), 1.0);
        EXPECT_EQ(e.S(), 100.0);
        EXPECT_EQ(e.alpha(), 2.0);
    }
}

TEST(DiscreteDerivs, Examples) {
    const auto cfg = unit_cfg();
    EXPECT_EQ(discrete_derivs(cfg, {1.0, 0.0}).gradS, 0.0);
    const auto d = discrete_derivs(cfg, {2.0, 1.0});
    EXPECT_LT(rel_err(d.gradS, kGradS_2_1), 1e-13);
    EXPECT_LT(rel_err(d.gradT, kGradT_2_1), 1e-13);
    EXPECT_LT(rel_err(d.gradS, oracle::grad_s(1.0, 2.0, 2.0, 1.0)), 1e-11);
    EXPECT_EQ(discrete_grad_s(cfg, {2.0, 1.0}), d.gradS);
    EXPECT_THROW(discrete_derivs(cfg, {0.5, 0.0}), std::invalid_argument);
}

TEST(AnalyticDerivs, Examples) {
    const auto cfg = unit_cfg();
    const auto a0 = analytic_derivs(cfg, {1.0, 0.0});
    EXPECT_EQ(a0.dS, 0.0);
    EXPECT_NEAR(a0.dt, -std::numbers::sqrt2 / 2.0, 1e-15);
    const auto a1 = analytic_derivs(cfg, {1.0, 1.0});
    EXPECT_LT(rel_err(a1.dSS, kDSS_1_1), 1e-14);
    EXPECT_LT(rel_err(a1.dSS, std::exp(0.125) / (2.0 * std::numbers::sqrt2)), 1e-15);
    EXPECT_THROW(analytic_derivs(cfg, {0.0, 0.0}), std::invalid_argument);
}

TEST(HeatResidual, Examples) {
    EXPECT_NEAR(heat_residual(unit_cfg(), {1.0, 0.0}), 0.0, 1e-12);
    const auto cfg = LearnerConfig::with_alpha(3.0, 1.0, 0.0, 6.0);
    const auto d = analytic_derivs(cfg, {17.0, 4.0});
    EXPECT_LE(std::fabs(heat_residual(cfg, {17.0, 4.0})), 1e-9 * std::fabs(d.dt));
    // Wrong diffusivity: -sqrt2/2 + 1/(2 sqrt2) = -1/(2 sqrt2)
    EXPECT_NEAR(heat_residual_with(unit_cfg(), {1.0, 0.0}, 1.0), -0.35355339059327373, 1e-15);
}

TEST(HeatResidual, PdeIdentityGrid) {
    for (double alpha : {2.0, 2.4, 6.0, 42.0}) {
        const auto cfg = LearnerConfig::with_alpha(1.0, 1.0, 0.0, alpha);
        for (int t = 1; t <= 1000; t += 3) {
            for (int k = 0; k < 100; ++k) {
                const double S = -t + 2.0 * t * k / 99.0;
                try {
                    const auto d = analytic_derivs(cfg, {double(t), S});
                    ASSERT_LE(std::fabs(d.dt + alpha * d.dSS), 1e-9 * std::max(1.0, std::fabs(d.dt)))
                        << "t=" << t << " S=" << S;
                } catch (const RangeError&) {
                }
            }
        }
    }
}

TEST(ResidualDelta, Examples) {
    EXPECT_LT(rel_err(residual_delta(unit_cfg(), {1.0, 0.0}), kV_1_1), 1e-14);
    const auto cfg = LearnerConfig::with_alpha(1.0, 1.0, 1.0, 6.0);
    const double delta = residual_delta(cfg, {5.0, 2.0});
    EXPECT_LE(delta, 0.0);
    EXPECT_LT(rel_err(delta, kDelta_5_2), 1e-13);
    EXPECT_THROW(residual_delta(cfg, {0.5, 0.0}), std::invalid_argument);
}

TEST(ResidualDelta, NonpositiveForAdmissibleAlpha) {
    for (double G : {1.0, 15.0}) {
        for (double lambda : {0.0, 0.1, 1.0, 10.0}) {
            const auto cfg = LearnerConfig::switching(1.0, G, lambda);
            for (int t = 1; t <= 300; ++t) {
                for (int S = -(t - 1); S <= t - 1; S += std::max(1, t / 20)) {
                    ASSERT_LE(residual_delta(cfg, {double(t), double(S)}), 1e-12)
                        << "G=" << G << " lambda=" << lambda << " t=" << t << " S=" << S;
                }
            }
        }
    }
}

TEST(ResidualDelta, SmallAlphaViolates) {
    const auto cfg = LearnerConfig::with_alpha(1.0, 1.0, 1.0, 1.0);
    double worst = -INFINITY;
    for (int t = 1; t <= 200; ++t) {
        for (int S = -(t - 1); S <= t - 1; ++S) {
            worst = std::max(worst, residual_delta(cfg, {double(t), double(S)}));
        }
    }
    EXPECT_GT(worst, 1e-12);
}

TEST(PotentialShape, EvenConvexOddMonotone) {
    for (double lambda : {0.0, 1.0}) {
        const auto cfg = LearnerConfig::switching(2.0, 1.0, lambda);
        for (int t = 1; t <= 400; t += 7) {
            double prev = -INFINITY;
            for (int k = 0; k <= 80; ++k) {
                const double S = -t + 2.0 * t * k / 80.0;
                const PotentialPoint p{double(t), S};
                EXPECT_EQ(potential_value(cfg, p), potential_value(cfg, {double(t), -S}));
                const auto d = discrete_derivs(cfg, p);
                EXPECT_GE(d.laplS, -1e-12);
                EXPECT_EQ(discrete_grad_s(cfg, {double(t), -S}), -d.gradS);
                EXPECT_GE(d.gradS, prev - 1e-12);
                prev = d.gradS;
            }
        }
    }
}

TEST(PotentialShape, FiniteDifferencesMatchClosedForms) {
    const double h = 1e-4;
    const auto cfg = LearnerConfig::switching(1.0, 1.0, 0.1);
    for (double t : {1.0, 2.0, 9.0, 64.0, 500.0}) {
        for (double S : {-0.7 * t, -1.5, 0.3, 2.0, 0.9 * t}) {
            const auto a = analytic_derivs(cfg, {t, S});
            const double fd_dS =
                (potential_value(cfg, {t, S + h}) - potential_value(cfg, {t, S - h})) / (2 * h);
            const double fd_dt =
                (potential_value(cfg, {t + h, S}) - potential_value(cfg, {t - h, S})) / (2 * h);
            const double fd_dSS = (analytic_derivs(cfg, {t, S + h}).dS -
                                   analytic_derivs(cfg, {t, S - h}).dS) / (2 * h);
            const double fd_dSSS = (analytic_derivs(cfg, {t, S + h}).dSS -
                                    analytic_derivs(cfg, {t, S - h}).dSS) / (2 * h);
            EXPECT_LT(rel_err(fd_dS, a.dS), 1e-6) << t << ' ' << S;
            EXPECT_LT(rel_err(fd_dt, a.dt), 1e-6) << t << ' ' << S;
            EXPECT_LT(rel_err(fd_dSS, a.dSS), 1e-6) << t << ' ' << S;
            EXPECT_LT(rel_err(fd_dSSS, a.dSSS), 1e-6) << t << ' ' << S;
        }
    }
}
