#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "adaswitch/harness.hpp"
#include "adaswitch/rng.hpp"
#include "adaswitch/scalar_learners.hpp"
#include "oracle.hpp"

using namespace adaswitch;

namespace {

constexpr double kGradS_2_1 = 0.260961687495880739589;

// Emits a fixed value and records what it was fed.
class StubLearner final : public ScalarLearner {
public:
    StubLearner(double value, double G, std::vector<double>* seen) : value_(value), G_(G), seen_(seen) {}
    double lipschitz() const override { return G_; }

protected:
    double do_predict() override { return value_; }
    void do_observe(double g) override { seen_->push_back(g); }

private:
    double value_;
    double G_;
    std::vector<double>* seen_;
};

std::vector<double> gradient_sequence(std::size_t n, std::uint64_t seed, double G) {
    Rng rng(seed);
    std::vector<double> g(n);
    for (auto& v : g) v = G * rng.uniform_pm1();
    return g;
}

}  // namespace

TEST(PotentialLearner, FirstPredictionsAndSymmetry) {
    const auto cfg = LearnerConfig::with_alpha(1.0, 1.0, 0.0, 2.0);
    PotentialLearner up(cfg);
    EXPECT_EQ(up.predict(), 0.0);
    up.observe(-1.0);
    const double x2 = up.predict();
    EXPECT_NEAR(x2, kGradS_2_1, 1e-13);
    EXPECT_NEAR(x2, oracle::grad_s(1.0, 2.0, 2.0, 1.0), 1e-11);

    PotentialLearner down(cfg);
    down.predict();
    down.observe(1.0);
    EXPECT_EQ(down.predict(), -x2);
    EXPECT_EQ(down.state().S, -1.0);
    EXPECT_EQ(down.state().t, 2);
}

TEST(PotentialLearner, Lifecycle) {
    PotentialLearner l(LearnerConfig::switching(1.0, 1.0, 0.1));
    EXPECT_THROW(l.observe(0.5), LifecycleError);
    l.predict();
    EXPECT_THROW(l.predict(), LifecycleError);
    EXPECT_THROW(l.observe(1.5), GradientBoundError);
    l.observe(1.0);  // boundary accepted
    l.predict();
}

TEST(PotentialLearner, SignEquivariance) {
    const auto g = gradient_sequence(500, 3, 2.0);
    PotentialLearner a(LearnerConfig::switching(1.5, 2.0, 0.3));
    PotentialLearner b(LearnerConfig::switching(1.5, 2.0, 0.3));
    for (double gt : g) {
        EXPECT_EQ(a.predict(), -b.predict());
        a.observe(gt);
        b.observe(-gt);
    }
}

TEST(PotentialLearner, PerStepSwitchWithinCurvature) {
    for (double lambda : {0.0, 0.5, 4.0}) {
        const auto cfg = LearnerConfig::switching(1.0, 1.0, lambda);
        PotentialLearner l(cfg);
        double x = l.predict();
        for (double gt : gradient_sequence(2000, 11, 1.0)) {
            const double t = static_cast<double>(l.state().t);
            const double S = l.state().S;
            const double curvature =
                discrete_grad_s(cfg, {t, S + 1.0}) - discrete_grad_s(cfg, {t, S - 1.0});
            l.observe(gt);
            const double next = l.predict();
            ASSERT_LE(std::fabs(next - x), curvature + 1e-12) << "lambda=" << lambda << " t=" << t;
            x = next;
        }
    }
}

TEST(PotentialLearner, AugmentedLossBelowNegatedPotential) {
    // Telescoping the one-step inequality: loss + lambda * switching <= -G V(T, S_T).
    for (double lambda : {0.0, 0.1, 1.0}) {
        for (double G : {1.0, 15.0}) {
            const auto cfg = LearnerConfig::switching(2.0, G, lambda);
            for (auto spec : standard_adversary_suite(G, 5)) {
                PotentialLearner l(cfg);
                const auto ledger = run_episode(l, spec, 1500, lambda);
                const auto cum = ledger.cumulative_augmented_loss();
                double S = 0.0;
                for (std::size_t t = 1; t <= ledger.rounds(); ++t) {
                    S -= ledger.gradient(t)[0] / G;
                    const double rhs = -G * potential_value(cfg, {double(t), S});
                    ASSERT_LE(cum[t - 1], rhs + 1e-9 * std::max(1.0, std::fabs(rhs)))
                        << spec.label() << " lambda=" << lambda << " G=" << G << " t=" << t;
                }
            }
        }
    }
}

TEST(WealthFixedPoint, Examples) {
    EXPECT_DOUBLE_EQ(solve_wealth_fixed_point(1.0, 0.5, 0.2, 0.1, 0.0), 0.9);
    EXPECT_NEAR(solve_wealth_fixed_point(1.0, 0.0, 0.5, 0.0, 0.1), 0.95, 1e-15);
    EXPECT_EQ(solve_wealth_fixed_point(1.0, 0.0, 0.0, 0.0, 0.1), 1.0);
    EXPECT_THROW(solve_wealth_fixed_point(1.0, 0.0, 0.0, 10.0, 0.1), std::domain_error);
}

TEST(WealthFixedPoint, SolvesTheEquation) {
    Rng rng(17);
    for (int k = 0; k < 2000; ++k) {
        const double wp = 0.1 + 5.0 * rng.uniform01();
        const double g = rng.uniform_pm1();
        const double bt = 0.5 * rng.uniform_pm1();
        const double bn = 0.5 * rng.uniform_pm1();
        const double lam = 1.5 * rng.uniform01();
        const double W = solve_wealth_fixed_point(wp, g, bt, bn, lam);
        const double rhs = (1.0 - g * bt) * wp - lam * std::fabs(bt * wp - bn * W);
        ASSERT_NEAR(W, rhs, 1e-12 * std::max(1.0, std::fabs(W)));
    }
}

TEST(BaselineLearner, FirstSteps) {
    BaselineLearner up(1.0, 1.0, 0.0);
    EXPECT_EQ(up.predict(), 0.0);
    up.observe(-1.0);
    EXPECT_DOUBLE_EQ(up.predict(), 0.5);
    EXPECT_DOUBLE_EQ(up.state().wealth, 1.0);

    BaselineLearner down(1.0, 1.0, 0.0);
    down.predict();
    down.observe(1.0);
    EXPECT_DOUBLE_EQ(down.predict(), -0.5);
}

TEST(BaselineLearner, FractionCapAndPositiveWealth) {
    for (double lambda : {0.0, 0.1, 1.0}) {
        BaselineLearner l(1.0, 1.0, lambda);
        const double K = 1.0 + lambda;
        for (double gt : gradient_sequence(3000, 23, 1.0)) {
            l.predict();
            l.observe(gt);
            const double rounds = static_cast<double>(l.state().t - 1);
            ASSERT_LE(std::fabs(l.state().beta), 1.0 / (K * std::sqrt(2.0 * rounds)) + 1e-15);
            ASSERT_GT(l.state().wealth, 0.0);
        }
    }
    EXPECT_THROW(BaselineLearner(0.0, 1.0, 0.0), std::invalid_argument);
}

TEST(DomainInterval, Validation) {
    EXPECT_THROW((DomainInterval{1.0, 0.0, 0.5}.validate()), std::invalid_argument);
    EXPECT_THROW((DomainInterval{0.0, 1.0, 2.0}.validate()), std::invalid_argument);
    EXPECT_NO_THROW((DomainInterval{0.0, INFINITY, 0.0}.validate()));
    EXPECT_EQ((DomainInterval{0.0, 1.0, 0.0}.project(-3.0)), 0.0);
}

TEST(ConstrainedLearner, ClipAndSurrogate) {
    const DomainInterval unit{0.0, 1.0, 0.0};
    std::vector<double> seen;
    {
        ConstrainedLearner c(std::make_unique<StubLearner>(1.5, 1.0, &seen), unit);
        EXPECT_EQ(c.predict(), 1.0);
        c.observe(1.0);
        c.predict();
        c.observe(-1.0);
    }
    ASSERT_EQ(seen.size(), 2u);
    EXPECT_EQ(seen[0], 1.0);
    EXPECT_EQ(seen[1], 0.0);

    seen.clear();
    {
        ConstrainedLearner c(std::make_unique<StubLearner>(0.5, 1.0, &seen), unit);
        for (double g : {1.0, -1.0, 0.25}) {
            EXPECT_EQ(c.predict(), 0.5);
            c.observe(g);
        }
    }
    EXPECT_EQ(seen, (std::vector<double>{1.0, -1.0, 0.25}));
}

TEST(ConstrainedLearner, StaysInsideDomain) {
    const DomainInterval dom{-0.5, 2.0, 0.25};
    ConstrainedLearner c(std::make_unique<PotentialLearner>(LearnerConfig::switching(3.0, 1.0, 0.1)), dom);
    for (double gt : gradient_sequence(2000, 29, 1.0)) {
        const double x = c.predict();
        ASSERT_GE(x, dom.lower);
        ASSERT_LE(x, dom.upper);
        c.observe(gt);
        ASSERT_LE(std::fabs(c.last_surrogate()), std::fabs(gt));
    }
}

TEST(DoublingLearner, EpochSchedule) {
    DoublingLearner d(1.0, 1.0, 0.5);
    const std::vector<double> expected_C{1.0, 0.5, 0.5, 0.25, 0.25, 0.25, 0.25, 0.125};
    for (std::size_t t = 1; t <= expected_C.size(); ++t) {
        const double x = d.predict();
        EXPECT_EQ(d.epoch_C(), expected_C[t - 1]) << t;
        if (t == 1 || t == 2 || t == 4 || t == 8) EXPECT_EQ(x, 0.0) << t;
        d.observe(t % 2 ? 1.0 : -0.5);
        if (t == 5) EXPECT_EQ(d.epochs_started(), 3);
    }
}

TEST(MetaLearner, StrictThresholdAndFrozenOutput) {
    MetaLearner m(potential_factory(1.0, 2.0), 1.0, 2.0);
    EXPECT_EQ(m.threshold(), 2.0);
    EXPECT_EQ(m.base().lipschitz(), 3.0);
    const double x1 = m.predict();
    m.observe(1.0);
    EXPECT_EQ(m.predict(), x1);
    m.observe(1.0);
    EXPECT_EQ(m.flushes(), 0);
    EXPECT_EQ(m.accumulator(), 2.0);
    EXPECT_EQ(m.predict(), x1);
    m.observe(1.0);
    EXPECT_EQ(m.flushes(), 1);
    EXPECT_EQ(m.accumulator(), 0.0);
    EXPECT_NE(m.predict(), x1);

    MetaLearner r(potential_factory(1.0, 0.0), 1.0, 0.0);
    r.predict();
    EXPECT_THROW(r.observe(1.5), GradientBoundError);
}
