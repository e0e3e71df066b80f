// adaswitch: verification sweeps, single episodes and portfolio backtests.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "adaswitch/harness.hpp"
#include "adaswitch/portfolio.hpp"
#include "adaswitch/suites.hpp"

namespace {

using namespace adaswitch;

struct RunConfig {
    double C = 1.0;
    double G = 1.0;
    double lambda = 0.1;
    std::int64_t T = 1000;
    std::uint64_t seed = 0;
    std::string output;
    std::string format = "csv";

    // verify
    std::string suite = "all";
    bool negative_controls = false;

    // simulate
    std::string learner = "potential";
    std::string adversary = "sign";
    std::optional<double> magnitude;
    double period = 64.0;
    double phase = 0.0;
    std::size_t dim = 1;
    std::int64_t drift_rounds = 64;

    // backtests
    int model = 1;
    int trials = 50;
    std::optional<double> baseline_C;
    std::string csv;
};

class OutputSink {
public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) {
                throw std::runtime_error("cannot open output file " + path);
            }
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

VectorLearnerPtr make_learner(const RunConfig& cfg) {
    const std::string& name = cfg.learner;
    if (name == "coordinate") return make_coordinate_olo(cfg.dim, cfg.C, cfg.G, cfg.lambda);
    if (name == "lea") {
        return std::make_unique<LeaLearner>(SimplexPoint::uniform(cfg.dim), cfg.G, cfg.lambda);
    }
    if (cfg.dim != 1) {
        throw std::invalid_argument("--dim applies only to the coordinate and lea learners");
    }
    if (name == "potential") {
        return as_vector(
            std::make_unique<PotentialLearner>(LearnerConfig::switching(cfg.C, cfg.G, cfg.lambda)));
    }
    if (name == "baseline") {
        return as_vector(std::make_unique<BaselineLearner>(cfg.C, cfg.G, cfg.lambda));
    }
    if (name == "doubling") {
        return as_vector(std::make_unique<DoublingLearner>(cfg.C, cfg.G, cfg.lambda));
    }
    if (name == "meta") {
        return as_vector(std::make_unique<MetaLearner>(potential_factory(cfg.C, cfg.lambda), cfg.G,
                                                       cfg.lambda));
    }
    throw std::invalid_argument("unknown learner: " + name);
}

int run_verify(const RunConfig& cfg) {
    SuiteOptions options;
    options.seed = cfg.seed;
    options.negative_controls = cfg.negative_controls;
    SuiteOutput out = run_suite(cfg.suite, options);
    if (cfg.suite != "all" && cfg.negative_controls && cfg.suite != "controls") {
        out.append(control_suite(options));
    }
    for (const auto& c : out.checks) {
        std::cerr << (c.passed ? "PASS " : "FAIL ") << (c.control ? "[control] " : "") << c.name
                  << ": " << c.detail << '\n';
    }
    OutputSink sink(cfg.output);
    if (cfg.format == "json") {
        write_checks_json(sink.stream(), out);
    } else {
        write_reports_csv(sink.stream(), out.reports);
    }
    const std::size_t failures = out.failures();
    std::cerr << failures << " non-control failure(s)\n";
    return failures == 0 ? 0 : 1;
}

int run_simulate(const RunConfig& cfg) {
    auto learner = make_learner(cfg);
    AdversarySpec spec;
    spec.kind = adversary_kind_from_string(cfg.adversary);
    spec.magnitude = cfg.magnitude.value_or(cfg.G);
    spec.seed = cfg.seed;
    spec.period = cfg.period;
    spec.phase = cfg.phase;
    spec.drift_rounds = cfg.drift_rounds;
    if (cfg.learner == "lea") {
        spec.reference = 1.0 / static_cast<double>(cfg.dim);
    }
    const EpisodeLedger ledger = run_episode(*learner, spec, cfg.T, cfg.lambda);
    OutputSink sink(cfg.output);
    if (cfg.format == "json") {
        write_ledger_json(sink.stream(), ledger);
    } else {
        write_ledger_csv(sink.stream(), ledger);
    }
    return 0;
}

int run_backtest_synthetic(const RunConfig& cfg) {
    const std::size_t d = market_model(cfg.model).assets.size();
    const double baseline_C = cfg.baseline_C.value_or(cfg.C);
    const std::vector<LabeledFactory> learners{
        {"ours", [&] { return make_coordinate_olo(d, cfg.C, cfg.G, cfg.lambda); }},
        {"baseline", [&] { return make_coordinate_baseline(d, baseline_C, cfg.G, cfg.lambda); }},
    };
    const auto curves = trial_study(cfg.model, cfg.trials, cfg.T, learners, cfg.seed, cfg.lambda);
    OutputSink sink(cfg.output);
    if (cfg.format == "json") {
        write_study_json(sink.stream(), curves);
    } else {
        write_study_csv(sink.stream(), curves);
    }
    return 0;
}

int run_backtest_csv(const RunConfig& cfg) {
    if (cfg.csv.empty()) {
        throw std::invalid_argument("backtest-csv requires --csv PATH");
    }
    const PriceSeries prices = load_price_csv(cfg.csv);
    const PriceGradients pg = price_to_gradients(prices);
    std::cerr << "posterior G (max |price change|) = " << pg.posterior_G << "; using --G "
              << cfg.G << '\n';
    const std::size_t d = prices.symbols.size();
    const double baseline_C = cfg.baseline_C.value_or(cfg.C);
    std::vector<LabeledCurve> runs;
    {
        auto ours = make_coordinate_olo(d, cfg.C, cfg.G, cfg.lambda);
        runs.push_back({"ours", backtest(*ours, pg.gradients, cfg.lambda, &prices)});
    }
    {
        auto base = make_coordinate_baseline(d, baseline_C, cfg.G, cfg.lambda);
        runs.push_back({"baseline", backtest(*base, pg.gradients, cfg.lambda, &prices)});
    }
    OutputSink sink(cfg.output);
    if (cfg.format == "json") {
        write_backtest_json(sink.stream(), runs);
    } else {
        write_backtest_csv(sink.stream(), runs);
    }
    return 0;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--C", cfg.C, "hyperparameter C (> 0)")->check(CLI::PositiveNumber);
    sub->add_option("--G", cfg.G, "Lipschitz constant G (> 0)")->check(CLI::PositiveNumber);
    sub->add_option("--lambda", cfg.lambda, "switching cost weight (>= 0)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--T", cfg.T, "number of rounds")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", cfg.seed, "base seed of the mt19937_64 generator");
    sub->add_option("--output", cfg.output, "output file (stdout when omitted)");
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Comparator-adaptive online learning with switching costs"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* verify = app.add_subcommand("verify", "run invariant sweeps and regret-bound checks");
    add_common(verify, cfg);
    std::vector<std::string> suites = suite_names();
    suites.push_back("all");
    verify->add_option("--suite", cfg.suite, "suite to run")->check(CLI::IsMember(suites));
    verify->add_flag("--negative-controls", cfg.negative_controls,
                     "include the deliberately misconfigured checks");

    auto* simulate = app.add_subcommand("simulate", "run one episode and write its ledger");
    add_common(simulate, cfg);
    simulate->add_option("--learner", cfg.learner, "learner")
        ->check(CLI::IsMember({"potential", "baseline", "doubling", "meta", "coordinate", "lea"}));
    simulate->add_option("--adversary", cfg.adversary, "adversary kind")
        ->check(CLI::IsMember(
            {"sign", "constant", "alternating", "uniform_random", "uniform", "sinusoidal",
                             "drift_alternating"}));
    simulate->add_option("--drift-rounds", cfg.drift_rounds, "drift length for drift_alternating")
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--magnitude", cfg.magnitude, "gradient magnitude (defaults to G)");
    simulate->add_option("--period", cfg.period, "sinusoidal period")->check(CLI::PositiveNumber);
    simulate->add_option("--phase", cfg.phase, "sinusoidal phase (radians)");
    simulate->add_option("--dim", cfg.dim, "dimension for the coordinate and lea learners")
        ->check(CLI::PositiveNumber);

    auto* synth = app.add_subcommand("backtest-synthetic", "paired trials on a synthetic market");
    add_common(synth, cfg);
    synth->add_option("--model", cfg.model, "market model")->check(CLI::IsMember({1, 2, 3}));
    synth->add_option("--trials", cfg.trials, "number of paired trials")->check(CLI::PositiveNumber);
    synth->add_option("--baseline-C", cfg.baseline_C, "baseline hyperparameter (defaults to C)")
        ->check(CLI::PositiveNumber);

    auto* csv = app.add_subcommand("backtest-csv", "backtest on a price CSV");
    add_common(csv, cfg);
    csv->add_option("--csv", cfg.csv, "price file: date,SYM1,...,SYMd")->required();
    csv->add_option("--baseline-C", cfg.baseline_C, "baseline hyperparameter (default 10)")
        ->check(CLI::PositiveNumber);

    // Subcommand-specific defaults, applied before parsing overrides them.
    synth->preparse_callback([&](std::size_t) { cfg.T = 2000; });
    csv->preparse_callback([&](std::size_t) {
        cfg.G = 15.0;
        cfg.baseline_C = 10.0;
    });

    CLI11_PARSE(app, argc, argv);

    try {
        if (*verify) return run_verify(cfg);
        if (*simulate) return run_simulate(cfg);
        if (*synth) return run_backtest_synthetic(cfg);
        if (*csv) return run_backtest_csv(cfg);
    } catch (const RangeError& e) {
        std::cerr << "error: " << e.what() << " (t=" << e.t() << ", S=" << e.S()
                  << ", alpha=" << e.alpha() << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
