#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "adaswitch/portfolio.hpp"

using namespace adaswitch;

namespace {

// Replays a fixed list of holdings.
class ScriptedLearner final : public VectorLearner {
public:
    ScriptedLearner(std::vector<std::vector<double>> script, double G) : script_(std::move(script)), G_(G) {}
    std::size_t dim() const override { return script_.front().size(); }
    double lipschitz() const override { return G_; }

protected:
    std::vector<double> do_predict() override { return script_[std::min(t_, script_.size() - 1)]; }
    void do_observe(std::span<const double>) override { ++t_; }

private:
    std::vector<std::vector<double>> script_;
    double G_;
    std::size_t t_ = 0;
};

PriceSeries parse(const std::string& text) {
    std::istringstream in(text);
    return parse_price_csv(in);
}

std::size_t error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const PriceParseError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST(SyntheticMarket, DeterministicPart) {
    const auto m1 = market_model(1);
    EXPECT_NEAR(m1.deterministic_part(0, 250), 0.6, 1e-15);
    const auto zero_noise = gen_synthetic_market(1, 500, 0, false);
    EXPECT_NEAR(zero_noise(249, 0), 0.6, 1e-15);
    EXPECT_NEAR(zero_noise(0, 4), 0.2, 1e-15);
    EXPECT_EQ(market_model(3).assets[4].trend, 0.5);
    EXPECT_THROW(market_model(4), std::invalid_argument);
    EXPECT_THROW(gen_synthetic_market(0, 10, 0), std::invalid_argument);
}

TEST(SyntheticMarket, RangeAndDeterminism) {
    for (int model : {1, 2, 3}) {
        const auto g = gen_synthetic_market(model, 10000, 5);
        ASSERT_EQ(g.rows, 10000u);
        ASSERT_EQ(g.cols, 5u);
        for (double v : g.data) {
            ASSERT_GE(v, -1.0);
            ASSERT_LE(v, 1.0);
        }
        EXPECT_EQ(g, gen_synthetic_market(model, 10000, 5));
        EXPECT_FALSE(g == gen_synthetic_market(model, 10000, 6));
    }
}

TEST(PriceCsv, TwoRows) {
    const auto ps = parse("date,A\n2024-01-02,10.0\n2024-01-03,11.5\n");
    const auto pg = price_to_gradients(ps);
    ASSERT_EQ(pg.gradients.rows, 1u);
    EXPECT_DOUBLE_EQ(pg.gradients(0, 0), 1.5);
    EXPECT_DOUBLE_EQ(pg.posterior_G, 1.5);
}

TEST(PriceCsv, ConstantSeries) {
    const auto pg = price_to_gradients(parse("date,A,B\n2024-01-02,3,4\n2024-01-03,3,4\n2024-01-04,3,4\n"));
    EXPECT_EQ(pg.gradients.rows, 2u);
    for (double v : pg.gradients.data) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(pg.posterior_G, 0.0);
}

TEST(PriceCsv, EightSymbolFixture) {
    const auto ps = load_price_csv(ADASWITCH_FIXTURE_DIR "/prices_8sym.csv");
    EXPECT_EQ(ps.symbols.size(), 8u);
    EXPECT_EQ(ps.symbols[0], "AAPL");
    const auto pg = price_to_gradients(ps);
    EXPECT_EQ(pg.gradients.rows, 4u);
    EXPECT_EQ(pg.gradients.cols, 8u);
    EXPECT_NEAR(pg.gradients(0, 0), 184.25 - 185.64, 1e-12);
    EXPECT_EQ(ps.dates[1] - ps.dates[0], std::chrono::days(1));
}

TEST(PriceCsv, Errors) {
    EXPECT_EQ(error_line(""), 1u);
    EXPECT_EQ(error_line("when,A\n"), 1u);
    EXPECT_EQ(error_line("date,A\n2024-01-02,1\n2024-01-03,1,2\n"), 3u);
    EXPECT_EQ(error_line("date,A\n2024-01-02,1\n2024-02-30,1\n"), 3u);
    EXPECT_EQ(error_line("date,A\n2024-01-03,1\n2024-01-02,1\n"), 3u);
    EXPECT_EQ(error_line("date,A\n2024-01-02,-1\n"), 2u);
    EXPECT_EQ(error_line("date,A\n2024-01-02,abc\n"), 2u);
    EXPECT_EQ(error_line("date,A\n2024-01-02,1.5\n"), 0u);
    EXPECT_THROW(load_price_csv("/nonexistent/prices.csv"), std::runtime_error);
}

TEST(Backtest, ZeroLearnerAndFixedHoldings) {
    const Matrix g = gen_synthetic_market(2, 50, 1);
    ScriptedLearner zero({std::vector<double>(5, 0.0)}, 1.0);
    for (double w : backtest(zero, g, 0.1).wealth) EXPECT_EQ(w, 0.0);

    Matrix flat(3, 1);
    for (std::size_t t = 0; t < 3; ++t) flat(t, 0) = 0.5;
    ScriptedLearner jump({{0.0}, {1.0}, {1.0}}, 1.0);
    const auto curve = backtest(jump, flat, 0.1);
    ASSERT_EQ(curve.wealth.size(), 3u);
    EXPECT_DOUBLE_EQ(curve.wealth.back(), 0.9);
}

TEST(Backtest, WealthIsNegatedAugmentedLoss) {
    const Matrix g = gen_synthetic_market(1, 400, 3);
    auto a = make_coordinate_olo(5, 1.0, 1.0, 0.1);
    const auto curve = backtest(*a, g, 0.1);
    auto b = make_coordinate_olo(5, 1.0, 1.0, 0.1);
    double wealth = 0.0;
    std::vector<double> prev;
    for (std::size_t t = 0; t < g.rows; ++t) {
        const auto x = b->predict();
        for (std::size_t i = 0; i < 5; ++i) {
            wealth += g(t, i) * x[i];
            if (!prev.empty()) wealth -= 0.1 * std::fabs(x[i] - prev[i]);
        }
        std::vector<double> neg(5);
        for (std::size_t i = 0; i < 5; ++i) neg[i] = -g(t, i);
        b->observe(neg);
        prev = x;
        ASSERT_NEAR(curve.wealth[t], wealth, 1e-9 * std::max(1.0, std::fabs(wealth)));
    }
}

TEST(Backtest, RegretAgainstBuyAndHold) {
    // Wealth >= <sum g, u> - bound(u) for every buy-and-hold u.
    const double C = 1.0, G = 1.0, lambda = 0.1;
    const std::int64_t T = 2000;
    BoundParams params{.C = C, .G = G, .lambda = lambda};
    for (int model : {1, 2, 3}) {
        const Matrix g = gen_synthetic_market(model, T, 11);
        auto learner = make_coordinate_olo(5, C, G, lambda);
        const double wealth = backtest(*learner, g, lambda).wealth.back();
        for (std::size_t i = 0; i < 5; ++i) {
            for (double shares : {1.0, 10.0, 100.0}) {
                std::vector<double> u(5, 0.0);
                u[i] = shares;
                double hold = 0.0;
                for (std::size_t t = 0; t < g.rows; ++t) hold += shares * g(t, i);
                const double bound = theoretical_bound(TheoremId::coordinate_regret, params, u, double(T));
                EXPECT_GE(wealth, hold - bound) << "model " << model << " asset " << i << " u " << shares;
            }
        }
    }
}

TEST(Backtest, InvestmentTracking) {
    const auto ps = parse("date,A\n2024-01-02,10\n2024-01-03,12\n2024-01-04,11\n2024-01-05,11\n");
    const auto pg = price_to_gradients(ps);
    ScriptedLearner l({{0.0}, {1.0}, {3.0}}, 15.0);
    const auto curve = backtest(l, pg.gradients, 0.5, &ps);
    // buy 1 at 12 (+0.5 fee), then 2 more at 11 (+1.0 fee)
    ASSERT_EQ(curve.investment.size(), 3u);
    EXPECT_DOUBLE_EQ(curve.investment[0], 0.0);
    EXPECT_DOUBLE_EQ(curve.investment[1], 12.5);
    EXPECT_DOUBLE_EQ(curve.investment[2], 35.5);
}

TEST(TrialStudy, SingleTrialAndPairing) {
    const std::vector<LabeledFactory> learners{
        {"ours", [] { return make_coordinate_olo(5, 1.0, 1.0, 0.1); }},
        {"baseline", [] { return make_coordinate_baseline(5, 1.0, 1.0, 0.1); }},
    };
    const auto one = trial_study(1, 1, 300, learners, 7, 0.1);
    ASSERT_EQ(one.size(), 2u);
    for (const auto& c : one) {
        for (double s : c.std_wealth) EXPECT_EQ(s, 0.0);
    }
    auto direct = make_coordinate_olo(5, 1.0, 1.0, 0.1);
    EXPECT_EQ(one[0].mean_wealth, backtest(*direct, gen_synthetic_market(1, 300, 7), 0.1).wealth);

    const auto many = trial_study(1, 4, 300, learners, 7, 0.1);
    double mean = 0.0;
    for (int k = 0; k < 4; ++k) {
        auto l = make_coordinate_baseline(5, 1.0, 1.0, 0.1);
        mean += backtest(*l, gen_synthetic_market(1, 300, 7 + k), 0.1).wealth.back() / 4.0;
    }
    EXPECT_NEAR(many[1].mean_wealth.back(), mean, 1e-9 * std::max(1.0, std::fabs(mean)));
    EXPECT_GT(many[1].std_wealth.back(), 0.0);

    std::ostringstream csv;
    write_study_csv(csv, many);
    std::istringstream in(csv.str());
    std::string line;
    std::size_t rows = 0;
    std::getline(in, line);
    EXPECT_EQ(line, "round,learner_label,mean_wealth,std_wealth");
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 600u);
}
