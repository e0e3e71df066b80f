#include "adaswitch/suites.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "adaswitch/rng.hpp"

namespace adaswitch {

namespace {

const std::vector<double> kLambdas{0.0, 0.1, 1.0};
const std::vector<double> kGs{1.0, 15.0};
const std::vector<double> kCs{0.1, 1.0, 10.0};

std::vector<std::vector<double>> scalar_u_grid() {
    std::vector<std::vector<double>> grid;
    for (double u : {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 5.0, -5.0, 10.0, -10.0}) {
        grid.push_back({u});
    }
    return grid;
}

template <class... Args>
std::string fmt(const Args&... args) {
    std::ostringstream os;
    os << std::setprecision(6);
    (os << ... << args);
    return os.str();
}

double report_score(const BoundReport& r) {
    return r.slack / std::max(1.0, std::fabs(r.bound_value));
}

// Reduces a batch of bound reports to one check.
CheckResult summarize_reports(const std::string& name, const std::vector<BoundReport>& reports,
                              const std::string& context) {
    CheckResult c;
    c.name = name;
    c.worst = std::numeric_limits<double>::infinity();
    std::size_t unsound = 0;
    const BoundReport* worst = nullptr;
    for (const auto& r : reports) {
        if (!r.sound()) ++unsound;
        const double s = report_score(r);
        if (s < c.worst) {
            c.worst = s;
            worst = &r;
        }
    }
    c.passed = unsound == 0;
    std::ostringstream os;
    os << std::setprecision(6) << reports.size() << " reports, " << unsound << " unsound";
    if (worst) {
        os << "; tightest: adversary=" << worst->adversary << " u=";
        for (std::size_t i = 0; i < worst->comparator.size(); ++i) {
            os << (i ? ";" : "") << worst->comparator[i];
        }
        os << " t=" << worst->T << " regret=" << worst->measured_regret
           << " bound=" << worst->bound_value << " relative_slack=" << c.worst;
    }
    if (!context.empty()) os << "; " << context;
    c.detail = os.str();
    return c;
}

CheckResult summarize_sweep(const std::string& name, const SweepReport& r) {
    CheckResult c;
    c.name = name;
    c.passed = r.passed();
    c.worst = r.worst_violation;
    c.detail = fmt("evaluated ", r.evaluated, ", skipped ", r.skipped, " beyond overflow guard",
                   "; worst ", r.worst_violation, " (tolerance ", r.tolerance, ") at t=", r.worst_t,
                   " S=", r.worst_S, " lambda=", r.worst_lambda, " G=", r.worst_G,
                   " C=", r.worst_C);
    return c;
}

using ScalarBuilder = std::function<ScalarLearnerPtr(double C, double G, double lambda)>;

// Criterion-1 style sweep over (lambda, G, C) x adversaries x u for a scalar learner.
SuiteOutput scalar_bound_sweep(const std::string& name, TheoremId theorem,
                               const ScalarBuilder& build, const SuiteOptions& options,
                               const std::function<void(const EpisodeLedger&, double C, double G,
                                                        double lambda)>& on_ledger = {}) {
    SuiteOutput out;
    const auto u_grid = scalar_u_grid();
    for (double lambda : kLambdas) {
        for (double G : kGs) {
            for (double C : kCs) {
                BoundParams params;
                params.C = C;
                params.G = G;
                params.lambda = lambda;
                const auto suite = standard_adversary_suite(G, options.seed);
                std::vector<EpisodeLedger> ledgers;
                auto reports = verify_bounds(
                    [&] { return as_vector(build(C, G, lambda)); }, suite, u_grid, options.T,
                    theorem, params, lambda, on_ledger ? &ledgers : nullptr);
                for (const auto& ledger : ledgers) {
                    on_ledger(ledger, C, G, lambda);
                }
                out.reports.insert(out.reports.end(), reports.begin(), reports.end());
            }
        }
    }
    out.checks.push_back(summarize_reports(name, out.reports, fmt("T=", options.T)));
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

void SuiteOutput::append(SuiteOutput other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    reports.insert(reports.end(), other.reports.begin(), other.reports.end());
    sweeps.insert(sweeps.end(), other.sweeps.begin(), other.sweeps.end());
}

std::size_t SuiteOutput::failures() const {
    return static_cast<std::size_t>(std::count_if(
        checks.begin(), checks.end(), [](const CheckResult& c) { return !c.control && !c.passed; }));
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{
        "potential", "residual", "heat",   "erfi",       "constrained", "doubling",
        "baseline",  "lea",      "divergence", "policy", "controls"};
    return names;
}

SuiteOutput run_suite(std::string_view name, const SuiteOptions& options) {
    if (name == "all") {
        SuiteOutput out;
        for (const auto& n : suite_names()) {
            if (n == "controls" && !options.negative_controls) continue;
            out.append(run_suite(n, options));
        }
        return out;
    }
    if (name == "potential") return potential_suite(options);
    if (name == "residual") return residual_suite(options);
    if (name == "heat") return heat_suite(options);
    if (name == "erfi") return erfi_suite(options);
    if (name == "constrained") return constrained_suite(options);
    if (name == "doubling") return doubling_suite(options);
    if (name == "baseline") return baseline_suite(options);
    if (name == "lea") return lea_suite(options);
    if (name == "divergence") return divergence_suite(options);
    if (name == "policy") return policy_suite(options);
    if (name == "controls") return control_suite(options);
    throw std::invalid_argument("unknown suite: " + std::string(name));
}

// ---------------------------------------------------------------------------

SuiteOutput potential_suite(const SuiteOptions& options) {
    double worst_step = -std::numeric_limits<double>::infinity();
    std::size_t episodes = 0;
    auto out = scalar_bound_sweep(
        "potential_regret_bound", TheoremId::potential_regret,
        [](double C, double G, double lambda) {
            return std::make_unique<PotentialLearner>(LearnerConfig::switching(C, G, lambda));
        },
        options,
        [&](const EpisodeLedger& ledger, double C, double G, double lambda) {
            worst_step = std::max(
                worst_step, switching_lemma_violation(ledger, LearnerConfig::switching(C, G, lambda)));
            ++episodes;
        });
    CheckResult c;
    c.name = "potential_step_switching";
    c.worst = worst_step;
    c.passed = worst_step <= 1e-12;
    c.detail = fmt(episodes, " episodes; worst |x_t - x_{t+1}| minus hull width ", worst_step,
                   " (tolerance 1e-12)");
    out.checks.push_back(c);
    return out;
}

SuiteOutput residual_suite(const SuiteOptions&) {
    SuiteOutput out;
    const auto r = invariant_sweep(InvariantKind::residual_delta, SweepGrid::standard());
    out.sweeps.push_back(r);
    out.checks.push_back(summarize_sweep("residual_nonpositive", r));
    return out;
}

FiniteDifferenceReport finite_difference_check(const SweepGrid& grid, double h) {
    FiniteDifferenceReport rep;
    const auto rel = [](double approx, double exact) {
        const double err = std::fabs(approx - exact);
        return exact == 0.0 ? err : err / std::fabs(exact);
    };
    for (double C : grid.Cs) {
        for (double G : grid.Gs) {
            for (double lambda : grid.lambdas) {
                const double alpha = grid.alpha.value_or(4.0 * lambda / G + 2.0);
                const auto cfg = LearnerConfig::with_alpha(C, G, lambda, alpha);
                for (double t : grid.ts) {
                    const double R = grid.reachable_only ? t - 1.0 : t;
                    const int n = (R == 0.0) ? 1 : grid.s_points;
                    for (int k = 0; k < n; ++k) {
                        const double S = n == 1 ? 0.0 : -R + 2.0 * R * k / (n - 1);
                        try {
                            const auto a = analytic_derivs(cfg, {t, S});
                            const auto ap = analytic_derivs(cfg, {t, S + h});
                            const auto am = analytic_derivs(cfg, {t, S - h});
                            const double vp = potential_value(cfg, {t, S + h});
                            const double vm = potential_value(cfg, {t, S - h});
                            const double vtp = potential_value(cfg, {t + h, S});
                            const double vtm = potential_value(cfg, {t - h, S});
                            const double two_h = 2.0 * h;
                            rep.worst_dS = std::max(rep.worst_dS, rel((vp - vm) / two_h, a.dS));
                            rep.worst_dt = std::max(rep.worst_dt, rel((vtp - vtm) / two_h, a.dt));
                            rep.worst_dSS = std::max(rep.worst_dSS, rel((ap.dS - am.dS) / two_h, a.dSS));
                            rep.worst_dSSS =
                                std::max(rep.worst_dSSS, rel((ap.dSS - am.dSS) / two_h, a.dSSS));
                            ++rep.evaluated;
                        } catch (const RangeError&) {
                            ++rep.skipped;
                        }
                    }
                }
            }
        }
    }
    return rep;
}

double FiniteDifferenceReport::worst() const {
    return std::max({worst_dS, worst_dt, worst_dSS, worst_dSSS});
}

SuiteOutput heat_suite(const SuiteOptions&) {
    SuiteOutput out;
    const auto grid = SweepGrid::standard();
    const auto r = invariant_sweep(InvariantKind::heat_pde, grid);
    out.sweeps.push_back(r);
    out.checks.push_back(summarize_sweep("heat_identity", r));

    const auto fd = finite_difference_check(grid);
    CheckResult c;
    c.name = "finite_differences";
    c.worst = fd.worst();
    c.passed = fd.worst() <= 1e-6;
    c.detail = fmt("evaluated ", fd.evaluated, ", skipped ", fd.skipped, "; worst relative error dS=",
                   fd.worst_dS, " dt=", fd.worst_dt, " dSS=", fd.worst_dSS, " dSSS=", fd.worst_dSSS,
                   " (tolerance 1e-6, h=1e-4)");
    out.checks.push_back(c);
    return out;
}

SuiteOutput erfi_suite(const SuiteOptions&) {
    SuiteOutput out;
    constexpr int n = 12001;  // 1000 points per decade
    double worst_rt = 0.0;
    double worst_y = 0.0;
    double worst_excess = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        const double y = std::pow(10.0, -6.0 + 12.0 * k / (n - 1));
        const double z = erfi_inv(y);
        const double err = std::fabs(erfi(z) - y) / y;
        if (err > worst_rt) {
            worst_rt = err;
            worst_y = y;
        }
        worst_excess = std::max(worst_excess, z - (1.0 + std::sqrt(std::log1p(y))));
    }
    CheckResult rt;
    rt.name = "erfi_round_trip";
    rt.worst = worst_rt;
    rt.passed = worst_rt <= 1e-10;
    rt.detail = fmt(n, " points log-spaced in [1e-6, 1e6]; worst relative error ", worst_rt,
                    " at y=", worst_y, " (tolerance 1e-10)");
    out.checks.push_back(rt);

    CheckResult gb;
    gb.name = "erfi_inverse_growth";
    gb.worst = worst_excess;
    gb.passed = worst_excess <= 0.0;
    gb.detail = fmt("max of erfi_inv(y) - (1 + sqrt(log(1 + y))) = ", worst_excess);
    out.checks.push_back(gb);
    return out;
}

SuiteOutput constrained_suite(const SuiteOptions& options) {
    SuiteOutput out;
    const std::vector<double> offsets{0.0, 0.5, 1.0};
    std::vector<std::vector<double>> u_grid;
    for (double u : {0.0, 0.25, 0.5, 0.75, 1.0}) u_grid.push_back({u});

    std::vector<BoundReport> regret_reports;
    IntervalSwitchReport worst_window;
    double worst_score = std::numeric_limits<double>::infinity();
    std::string worst_label;
    std::size_t windows = 0;
    std::size_t unsound_windows = 0;

    const std::int64_t window_T = std::min<std::int64_t>(options.T, 1024);
    for (double lambda : kLambdas) {
        for (double G : kGs) {
            for (double offset : offsets) {
                const DomainInterval dom{0.0, 1.0, offset};
                // The sign adversary pushes away from the domain centre.
                const auto suite = standard_adversary_suite(G, options.seed, 0.5);
                for (double C : kCs) {
                    BoundParams params;
                    params.C = C;
                    params.G = G;
                    params.lambda = lambda;
                    params.offset = offset;
                    const auto factory = [&] {
                        return as_vector(std::make_unique<ConstrainedLearner>(
                            std::make_unique<PotentialLearner>(LearnerConfig::switching(C, G, lambda)),
                            dom));
                    };
                    auto reports = verify_bounds(factory, suite, u_grid, options.T,
                                                 TheoremId::constrained_regret, params, lambda);
                    regret_reports.insert(regret_reports.end(), reports.begin(), reports.end());

                    if (C != 1.0) continue;
                    for (const auto& spec : suite) {
                        auto learner = factory();
                        const auto ledger = run_episode(*learner, spec, window_T, lambda);
                        const auto w = verify_interval_switching(ledger, C, dom.diameter());
                        windows += w.windows;
                        if (!w.sound()) ++unsound_windows;
                        const double score = w.slack / std::max(1.0, std::fabs(w.bound));
                        if (w.windows > 0 && score < worst_score) {
                            worst_score = score;
                            worst_window = w;
                            worst_label = fmt(spec.label(), " lambda=", lambda, " G=", G,
                                              " offset=", offset);
                        }
                    }
                }
            }
        }
    }
    out.checks.push_back(summarize_reports("constrained_regret_bound", regret_reports,
                                           fmt("domain [0,1], T=", options.T)));
    out.reports = std::move(regret_reports);

    CheckResult c;
    c.name = "constrained_interval_switching";
    c.worst = worst_score;
    c.passed = unsound_windows == 0;
    c.detail = fmt(windows, " windows in [1, ", window_T, "], ", unsound_windows,
                   " episodes with a violated window; tightest [", worst_window.T1, ", ",
                   worst_window.T2, "] ", worst_label, ": switching ", worst_window.measured,
                   " bound ", worst_window.bound);
    out.checks.push_back(c);
    return out;
}

SuiteOutput doubling_suite(const SuiteOptions& options) {
    return scalar_bound_sweep("doubling_regret_bound", TheoremId::doubling_regret,
                              [](double C, double G, double lambda) {
                                  return std::make_unique<DoublingLearner>(C, G, lambda);
                              },
                              options);
}

SuiteOutput baseline_suite(const SuiteOptions& options) {
    return scalar_bound_sweep("baseline_regret_bound", TheoremId::baseline_regret,
                              [](double C, double G, double lambda) {
                                  return std::make_unique<BaselineLearner>(C, G, lambda);
                              },
                              options);
}

SuiteOutput lea_suite(const SuiteOptions& options) {
    SuiteOutput out;
    for (std::size_t d : {2u, 5u, 10u}) {
        const auto prior = SimplexPoint::uniform(d);
        std::vector<std::vector<double>> u_grid;
        for (std::size_t i = 0; i < d; ++i) u_grid.push_back(SimplexPoint::vertex(d, i).weights());
        u_grid.push_back(prior.weights());
        for (double lambda : kLambdas) {
            for (double G : kGs) {
                BoundParams params;
                params.G = G;
                params.lambda = lambda;
                params.prior = prior.weights();
                const auto suite =
                    standard_adversary_suite(G, options.seed, 1.0 / static_cast<double>(d));
                auto reports = verify_bounds(
                    [&] { return std::make_unique<LeaLearner>(prior, G, lambda); }, suite, u_grid,
                    options.T, TheoremId::lea_regret, params, lambda);
                out.reports.insert(out.reports.end(), reports.begin(), reports.end());
            }
        }
    }
    out.checks.push_back(
        summarize_reports("lea_regret_bound", out.reports, fmt("d in {2,5,10}, T=", options.T)));
    return out;
}

std::pair<std::vector<double>, std::vector<double>> tv_kl_separating_pair(std::size_t d) {
    if (d < 3) {
        throw std::invalid_argument("tv_kl_separating_pair: needs d >= 3");
    }
    const auto dd = static_cast<double>(d);
    const double p1 = 1.0 / std::sqrt(std::log(dd));
    const double q1 = p1 / dd;
    std::vector<double> p(d, (1.0 - p1) / (dd - 1.0));
    std::vector<double> q(d, (1.0 - q1) / (dd - 1.0));
    p[0] = p1;
    q[0] = q1;
    return {p, q};
}

SuiteOutput divergence_suite(const SuiteOptions& options) {
    SuiteOutput out;
    Rng rng = Rng::split(options.seed, 9);

    // f(x) <= 2 (1 - x + x log x) on [0, 100]
    double worst_lemma = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 100000; ++k) {
        const double x = k == 0 ? 0.0 : (k == 100000 ? 100.0 : 100.0 * rng.uniform01());
        const double xlogx = x > 0.0 ? x * std::log(x) : 0.0;
        const double rhs = 2.0 * (1.0 - x + xlogx);
        worst_lemma = std::max(worst_lemma, (f_generator(x) - rhs) / std::max(1.0, rhs));
    }
    CheckResult lemma;
    lemma.name = "f_generator_bound";
    lemma.worst = worst_lemma;
    lemma.passed = worst_lemma <= 1e-12;
    lemma.detail = fmt("100001 samples of [0, 100]; worst relative excess ", worst_lemma);
    out.checks.push_back(lemma);

    const auto random_simplex = [&](std::size_t d) {
        std::vector<double> w(d);
        for (double& wi : w) wi = -std::log1p(-rng.uniform01());
        return SimplexPoint(std::move(w)).weights();
    };
    double worst_ratio = -std::numeric_limits<double>::infinity();
    for (std::size_t d : {2u, 5u, 50u}) {
        for (int k = 0; k < 10000; ++k) {
            const auto u = random_simplex(d);
            const auto p = random_simplex(d);
            const auto div = divergences(u, p);
            worst_ratio = std::max(worst_ratio, (div.f_div - 2.0 * div.kl) / std::max(1.0, div.kl));
        }
    }
    CheckResult fd;
    fd.name = "f_divergence_vs_kl";
    fd.worst = worst_ratio;
    fd.passed = worst_ratio <= 1e-12;
    fd.detail = fmt("10000 random pairs for each d in {2,5,50}; worst (f_div - 2 kl) relative ",
                    worst_ratio);
    out.checks.push_back(fd);

    const auto [p, q] = tv_kl_separating_pair(100);
    const auto div = divergences(p, q);
    CheckResult sep;
    sep.name = "tv_kl_separation";
    sep.worst = div.tv * div.kl;
    sep.passed = div.tv * div.kl <= 1.0 && div.kl >= std::sqrt(std::log(100.0)) - 0.5;
    sep.detail = fmt("d=100: tv=", div.tv, " kl=", div.kl, " tv*kl=", div.tv * div.kl,
                     " sqrt(log d)-0.5=", std::sqrt(std::log(100.0)) - 0.5);
    out.checks.push_back(sep);
    return out;
}

SuiteOutput policy_suite(const SuiteOptions&) {
    SuiteOutput out;
    const auto grid = SweepGrid::standard();
    for (auto kind : {InvariantKind::monotone_policy, InvariantKind::switch_lemma}) {
        const auto r = invariant_sweep(kind, grid);
        out.sweeps.push_back(r);
        out.checks.push_back(summarize_sweep(std::string(to_string(kind)), r));
    }
    return out;
}

SuiteOutput control_suite(const SuiteOptions& options) {
    SuiteOutput out;
    SweepGrid grid = SweepGrid::standard();
    grid.lambdas = {1.0};
    grid.Gs = {1.0};
    grid.alpha = 1.0;
    const auto r = invariant_sweep(InvariantKind::residual_delta, grid);
    out.sweeps.push_back(r);
    CheckResult sweep = summarize_sweep("control_residual_alpha1", r);
    sweep.control = true;
    sweep.passed = !r.passed();
    out.checks.push_back(sweep);

    BoundParams params;
    params.C = 1.0;
    params.G = 1.0;
    params.lambda = 1.0;
    AdversarySpec sign;
    sign.kind = AdversaryKind::sign;
    sign.magnitude = 1.0;
    AdversarySpec drift = sign;
    drift.kind = AdversaryKind::drift_alternating;
    drift.drift_rounds = 400;
    const std::vector<AdversarySpec> suite{sign, drift};
    const auto reports = verify_bounds(
        [] {
            return as_vector(
                std::make_unique<PotentialLearner>(LearnerConfig::with_alpha(1.0, 1.0, 1.0, 1.0)));
        },
        suite, scalar_u_grid(), options.T, TheoremId::potential_regret, params, 1.0);
    CheckResult bound = summarize_reports("control_bound_alpha1", reports, "alpha=1 lambda=1 G=1");
    bound.control = true;
    bound.passed = !bound.passed;
    out.checks.push_back(bound);
    out.reports.insert(out.reports.end(), reports.begin(), reports.end());
    return out;
}

// ---------------------------------------------------------------------------

void write_checks_json(std::ostream& os, const SuiteOutput& out) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : out.checks) {
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"control", c.control},
                          {"worst", c.worst},
                          {"detail", c.detail}});
    }
    nlohmann::json sweeps = nlohmann::json::array();
    for (const auto& s : out.sweeps) {
        sweeps.push_back({{"kind", to_string(s.kind)},
                          {"evaluated", s.evaluated},
                          {"skipped", s.skipped},
                          {"worst_violation", s.worst_violation},
                          {"tolerance", s.tolerance},
                          {"worst_t", s.worst_t},
                          {"worst_S", s.worst_S},
                          {"worst_lambda", s.worst_lambda},
                          {"worst_G", s.worst_G},
                          {"worst_C", s.worst_C}});
    }
    std::ostringstream reports;
    write_reports_json(reports, out.reports);
    nlohmann::json doc = {{"rng", std::string(kRngAlgorithm)},
                          {"failures", out.failures()},
                          {"checks", checks},
                          {"sweeps", sweeps},
                          {"reports", nlohmann::json::parse(reports.str())}};
    os << doc.dump(2) << '\n';
}

void write_checks_csv(std::ostream& os, const SuiteOutput& out) {
    os << "name,control,passed,worst,detail\n" << std::setprecision(17);
    for (const auto& c : out.checks) {
        std::string detail = c.detail;
        std::replace(detail.begin(), detail.end(), '"', '\'');
        os << c.name << ',' << (c.control ? 1 : 0) << ',' << (c.passed ? 1 : 0) << ',' << c.worst
           << ",\"" << detail << "\"\n";
    }
}

}  // namespace adaswitch
