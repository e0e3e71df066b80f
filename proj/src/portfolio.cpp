#include "adaswitch/portfolio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "adaswitch/rng.hpp"

namespace adaswitch {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) {
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::chrono::sys_days parse_iso_date(const std::string& text, std::size_t line) {
    const auto digits = [&](std::size_t from, std::size_t n) {
        int v = 0;
        for (std::size_t i = from; i < from + n; ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
                throw PriceParseError(line, "malformed date '" + text + "'");
            }
            v = v * 10 + (text[i] - '0');
        }
        return v;
    };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw PriceParseError(line, "expected YYYY-MM-DD date, got '" + text + "'");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{digits(0, 4)},
                                          std::chrono::month{static_cast<unsigned>(digits(5, 2))},
                                          std::chrono::day{static_cast<unsigned>(digits(8, 2))}};
    if (!ymd.ok()) {
        throw PriceParseError(line, "invalid calendar date '" + text + "'");
    }
    return std::chrono::sys_days{ymd};
}

double parse_price(const std::string& text, std::size_t line) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw PriceParseError(line, "malformed price '" + text + "'");
    }
    if (v < 0.0) {
        throw PriceParseError(line, "negative price '" + text + "'");
    }
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------

double MarketModelSpec::max_abs_gradient() const {
    double m = 0.0;
    for (const auto& a : assets) {
        m = std::max(m, std::fabs(a.noise_amp) + std::fabs(a.sine_amp) + std::fabs(a.trend));
    }
    return m;
}

double MarketModelSpec::deterministic_part(std::size_t asset, std::int64_t t) const {
    const AssetModel& a = assets.at(asset);
    double v = a.trend;
    if (a.sine_amp != 0.0) {
        const double half = 0.5 * period;
        v += a.sine_amp * std::sin((static_cast<double>(t) / half + a.sine_phase) * std::numbers::pi);
    }
    return v;
}

MarketModelSpec market_model(int model) {
    MarketModelSpec spec;
    switch (model) {
        case 1:
            spec.assets = {{0.4, 0.4, 0.0, 0.2},
                           {0.5, 0.3, 0.5, 0.2},
                           {0.6, 0.2, 1.0, 0.2},
                           {0.7, 0.1, 1.5, 0.2},
                           {0.8, 0.0, 0.0, 0.2}};
            break;
        case 2:
        case 3:
            spec.assets = {{0.2, 0.4, 0.0, 0.4},
                           {0.3, 0.3, 0.5, 0.4},
                           {0.4, 0.2, 1.0, 0.4},
                           {0.5, 0.1, 1.5, 0.4},
                           {0.55, 0.0, 0.0, 0.45}};
            if (model == 3) {
                spec.assets[4] = {0.5, 0.0, 0.0, 0.5};
            }
            break;
        default:
            throw std::invalid_argument("market_model: model must be 1, 2 or 3");
    }
    return spec;
}

Matrix gen_synthetic_market(int model, std::int64_t T, std::uint64_t seed, bool include_noise) {
    if (T < 0) {
        throw std::invalid_argument("gen_synthetic_market: T must be nonnegative");
    }
    const MarketModelSpec spec = market_model(model);
    const std::size_t d = spec.assets.size();
    Matrix g(static_cast<std::size_t>(T), d);
    Rng rng(seed);
    for (std::int64_t t = 1; t <= T; ++t) {
        auto row = g.row(static_cast<std::size_t>(t - 1));
        for (std::size_t i = 0; i < d; ++i) {
            const double u = rng.uniform_pm1();
            double v = spec.deterministic_part(i, t);
            if (include_noise) {
                v += spec.assets[i].noise_amp * u;
            }
            row[i] = std::clamp(v, -1.0, 1.0);
        }
    }
    return g;
}

// ---------------------------------------------------------------------------

PriceParseError::PriceParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

PriceSeries parse_price_csv(std::istream& in) {
    PriceSeries ps;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) {
        throw PriceParseError(1, "missing header");
    }
    ++lineno;
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) {
        line.erase(0, 3);  // UTF-8 byte order mark
    }
    auto header = split_commas(trim(line));
    if (header.size() < 2 || trim(header[0]) != "date") {
        throw PriceParseError(lineno, "header must be 'date,SYM1,...,SYMd'");
    }
    for (std::size_t i = 1; i < header.size(); ++i) {
        auto sym = trim(header[i]);
        if (sym.empty()) {
            throw PriceParseError(lineno, "empty symbol name");
        }
        ps.symbols.push_back(std::move(sym));
    }
    const std::size_t d = ps.symbols.size();
    std::vector<double> closes;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto fields = split_commas(line);
        if (fields.size() != d + 1) {
            throw PriceParseError(lineno, "expected " + std::to_string(d + 1) + " fields, got " +
                                              std::to_string(fields.size()));
        }
        const auto date = parse_iso_date(trim(fields[0]), lineno);
        if (!ps.dates.empty() && date <= ps.dates.back()) {
            throw PriceParseError(lineno, "dates must be strictly increasing");
        }
        ps.dates.push_back(date);
        for (std::size_t i = 1; i <= d; ++i) {
            closes.push_back(parse_price(trim(fields[i]), lineno));
        }
    }
    ps.closes.rows = ps.dates.size();
    ps.closes.cols = d;
    ps.closes.data = std::move(closes);
    return ps;
}

PriceSeries load_price_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open price file " + path.string());
    }
    return parse_price_csv(in);
}

PriceGradients price_to_gradients(const PriceSeries& ps) {
    PriceGradients out;
    const std::size_t rows = ps.closes.rows > 0 ? ps.closes.rows - 1 : 0;
    out.gradients = Matrix(rows, ps.closes.cols);
    for (std::size_t t = 0; t < rows; ++t) {
        for (std::size_t i = 0; i < ps.closes.cols; ++i) {
            const double g = ps.closes(t + 1, i) - ps.closes(t, i);
            out.gradients(t, i) = g;
            out.posterior_G = std::max(out.posterior_G, std::fabs(g));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

WealthCurve backtest(VectorLearner& learner, const Matrix& gradients, double lambda,
                     const PriceSeries* prices) {
    if (gradients.cols != learner.dim()) {
        throw std::invalid_argument("backtest: learner dimension does not match asset count");
    }
    if (prices && (prices->closes.cols != gradients.cols || prices->closes.rows < gradients.rows)) {
        throw std::invalid_argument("backtest: price matrix does not cover the gradient rows");
    }
    ReplayAdversary market(gradients, -1.0);
    const EpisodeLedger ledger =
        run_episode(learner, market, static_cast<std::int64_t>(gradients.rows), lambda);

    WealthCurve curve;
    const auto loss = ledger.cumulative_augmented_loss();
    curve.wealth.reserve(loss.size());
    for (double l : loss) {
        curve.wealth.push_back(0.0 - l);
    }
    if (prices) {
        curve.investment.reserve(ledger.rounds());
        double total = 0.0;
        for (std::size_t t = 1; t <= ledger.rounds(); ++t) {
            if (t >= 2) {  // x_0 = x_1 makes round 1 free
                const auto x = ledger.prediction(t);
                const auto prev = ledger.prediction(t - 1);
                const auto p = prices->closes.row(t - 1);
                for (std::size_t i = 0; i < x.size(); ++i) {
                    const double dx = x[i] - prev[i];
                    total += p[i] * dx + lambda * std::fabs(dx);
                }
            }
            curve.investment.push_back(total);
        }
    }
    return curve;
}

std::vector<StudyCurve> trial_study(int model, int n_trials, std::int64_t T,
                                    const std::vector<LabeledFactory>& learners,
                                    std::uint64_t base_seed, double lambda) {
    if (n_trials < 1) {
        throw std::invalid_argument("trial_study: n_trials must be at least 1");
    }
    const auto rounds = static_cast<std::size_t>(std::max<std::int64_t>(T, 0));
    std::vector<std::vector<double>> sum(learners.size(), std::vector<double>(rounds, 0.0));
    std::vector<std::vector<double>> sum_sq = sum;
    for (int k = 0; k < n_trials; ++k) {
        const Matrix market =
            gen_synthetic_market(model, T, base_seed + static_cast<std::uint64_t>(k));
        for (std::size_t j = 0; j < learners.size(); ++j) {
            auto learner = learners[j].factory();
            const WealthCurve curve = backtest(*learner, market, lambda);
            for (std::size_t t = 0; t < rounds; ++t) {
                sum[j][t] += curve.wealth[t];
                sum_sq[j][t] += curve.wealth[t] * curve.wealth[t];
            }
        }
    }
    std::vector<StudyCurve> out;
    const auto n = static_cast<double>(n_trials);
    for (std::size_t j = 0; j < learners.size(); ++j) {
        StudyCurve c;
        c.label = learners[j].label;
        c.mean_wealth.resize(rounds);
        c.std_wealth.resize(rounds);
        for (std::size_t t = 0; t < rounds; ++t) {
            const double mean = sum[j][t] / n;
            c.mean_wealth[t] = mean;
            c.std_wealth[t] =
                n_trials == 1 ? 0.0 : std::sqrt(std::max(0.0, sum_sq[j][t] / n - mean * mean));
        }
        out.push_back(std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------------------

void write_study_csv(std::ostream& os, const std::vector<StudyCurve>& curves) {
    os << "round,learner_label,mean_wealth,std_wealth\n" << std::setprecision(17);
    for (const auto& c : curves) {
        for (std::size_t t = 0; t < c.mean_wealth.size(); ++t) {
            os << t + 1 << ',' << c.label << ',' << c.mean_wealth[t] << ',' << c.std_wealth[t]
               << '\n';
        }
    }
}

void write_study_json(std::ostream& os, const std::vector<StudyCurve>& curves) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : curves) {
        std::vector<std::size_t> rounds(c.mean_wealth.size());
        for (std::size_t t = 0; t < rounds.size(); ++t) rounds[t] = t + 1;
        out.push_back({{"learner_label", c.label},
                       {"round", rounds},
                       {"mean_wealth", c.mean_wealth},
                       {"std_wealth", c.std_wealth}});
    }
    os << out.dump(2) << '\n';
}

void write_backtest_csv(std::ostream& os, const std::vector<LabeledCurve>& runs) {
    const bool inv = !runs.empty() && !runs.front().curve.investment.empty();
    os << "round,learner_label,mean_wealth,std_wealth";
    if (inv) os << ",cumulative_investment";
    os << '\n' << std::setprecision(17);
    for (const auto& run : runs) {
        const auto& curve = run.curve;
        for (std::size_t t = 0; t < curve.wealth.size(); ++t) {
            os << t + 1 << ',' << run.label << ',' << curve.wealth[t] << ",0";
            if (inv) os << ',' << curve.investment.at(t);
            os << '\n';
        }
    }
}

void write_backtest_json(std::ostream& os, const std::vector<LabeledCurve>& runs) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& run : runs) {
        const auto& curve = run.curve;
        std::vector<std::size_t> rounds(curve.wealth.size());
        for (std::size_t t = 0; t < rounds.size(); ++t) rounds[t] = t + 1;
        nlohmann::json obj = {{"learner_label", run.label},
                              {"round", rounds},
                              {"mean_wealth", curve.wealth},
                              {"std_wealth", std::vector<double>(curve.wealth.size(), 0.0)}};
        if (!curve.investment.empty()) {
            obj["cumulative_investment"] = curve.investment;
        }
        out.push_back(std::move(obj));
    }
    os << out.dump(2) << '\n';
}

}  // namespace adaswitch
