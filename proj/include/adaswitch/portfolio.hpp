#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adaswitch/harness.hpp"
#include "adaswitch/matrix.hpp"
#include "adaswitch/vector_learners.hpp"

namespace adaswitch {

// ---------------------------------------------------------------------------
// Synthetic markets

/// g_{t,i} = noise_amp U + sine_amp sin((t / (period/2) + sine_phase) pi) + trend
struct AssetModel {
    double noise_amp = 0.0;
    double sine_amp = 0.0;
    double sine_phase = 0.0;  ///< multiples of pi
    double trend = 0.0;
};

struct MarketModelSpec {
    std::vector<AssetModel> assets;
    double period = 1000.0;

    /// Largest |g| the model can emit.
    double max_abs_gradient() const;
    double deterministic_part(std::size_t asset, std::int64_t t) const;
};

/// Coefficient tables for the three five-asset markets.
MarketModelSpec market_model(int model);

/// T x 5 gradient matrix; row t-1 holds round t. Uniform draws are taken in
/// row-major order from Rng(seed). With include_noise = false only the
/// deterministic part is returned.
Matrix gen_synthetic_market(int model, std::int64_t T, std::uint64_t seed,
                            bool include_noise = true);

// ---------------------------------------------------------------------------
// Price data

class PriceParseError : public std::runtime_error {
public:
    PriceParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct PriceSeries {
    std::vector<std::chrono::sys_days> dates;
    std::vector<std::string> symbols;
    Matrix closes;  ///< rows are dates, columns symbols
};

/// Header `date,SYM1,...,SYMd`, then `YYYY-MM-DD,close,...` rows.
PriceSeries parse_price_csv(std::istream& in);
PriceSeries load_price_csv(const std::filesystem::path& path);

struct PriceGradients {
    Matrix gradients;       ///< (T-1) x d, close_{t+1} - close_t
    double posterior_G = 0.0;  ///< max |g|; reported only, never adopted
};

PriceGradients price_to_gradients(const PriceSeries& ps);

// ---------------------------------------------------------------------------
// Backtests

struct WealthCurve {
    std::vector<double> wealth;
    /// Cumulative cash outlay; empty when no prices were supplied.
    std::vector<double> investment;
};

/// Trades on the holdings chosen by `learner`, which receives -g_t.
/// wealth_t = sum_{tau<=t} <g_tau, x_tau> - lambda sum_{tau<t} ||x_tau - x_{tau+1}||_1.
/// With prices, investment_t = sum_{tau<=t} <p_tau, x_tau - x_{tau-1}> + lambda ||x_tau - x_{tau-1}||_1
/// where p_tau is the close of row tau-1 and x_0 = x_1.
WealthCurve backtest(VectorLearner& learner, const Matrix& gradients, double lambda,
                     const PriceSeries* prices = nullptr);

struct LabeledFactory {
    std::string label;
    VectorFactory factory;
};

struct StudyCurve {
    std::string label;
    std::vector<double> mean_wealth;
    std::vector<double> std_wealth;  ///< population standard deviation
};

/// Trial k draws the market with seed base_seed + k and runs every learner on it.
std::vector<StudyCurve> trial_study(int model, int n_trials, std::int64_t T,
                                    const std::vector<LabeledFactory>& learners,
                                    std::uint64_t base_seed, double lambda);

void write_study_csv(std::ostream& os, const std::vector<StudyCurve>& curves);
void write_study_json(std::ostream& os, const std::vector<StudyCurve>& curves);

struct LabeledCurve {
    std::string label;
    WealthCurve curve;
};

/// Single-run output in the study layout (std column 0), plus
/// cumulative_investment when the curves carry it.
void write_backtest_csv(std::ostream& os, const std::vector<LabeledCurve>& runs);
void write_backtest_json(std::ostream& os, const std::vector<LabeledCurve>& runs);

}  // namespace adaswitch
