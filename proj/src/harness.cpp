#include "adaswitch/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "adaswitch/rng.hpp"

namespace adaswitch {

namespace {

double sgn_tie_plus(double v) { return v < 0.0 ? -1.0 : 1.0; }

class SignAdversary final : public Adversary {
public:
    SignAdversary(double magnitude, double reference) : m_(magnitude), ref_(reference) {}
    std::vector<double> next(std::int64_t, std::span<const double> x) override {
        std::vector<double> g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            g[i] = m_ * sgn_tie_plus(x[i] - ref_);
        }
        return g;
    }

private:
    double m_;
    double ref_;
};

class ConstantAdversary final : public Adversary {
public:
    ConstantAdversary(double magnitude, double direction) : m_(magnitude), dir_(direction) {}
    std::vector<double> next(std::int64_t, std::span<const double> x) override {
        std::vector<double> g(x.size(), -dir_ * m_);
        if (!g.empty()) {
            g[0] = dir_ * m_;
        }
        return g;
    }

private:
    double m_;
    double dir_;
};

class AlternatingAdversary final : public Adversary {
public:
    explicit AlternatingAdversary(double magnitude) : m_(magnitude) {}
    std::vector<double> next(std::int64_t t, std::span<const double> x) override {
        std::vector<double> g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            g[i] = ((t + static_cast<std::int64_t>(i)) % 2 == 1) ? m_ : -m_;
        }
        return g;
    }

private:
    double m_;
};

class UniformAdversary final : public Adversary {
public:
    UniformAdversary(double magnitude, std::uint64_t seed) : m_(magnitude), rng_(seed) {}
    std::vector<double> next(std::int64_t, std::span<const double> x) override {
        std::vector<double> g(x.size());
        for (double& gi : g) {
            gi = m_ * rng_.uniform_pm1();
        }
        return g;
    }

private:
    double m_;
    Rng rng_;
};

class SinusoidalAdversary final : public Adversary {
public:
    SinusoidalAdversary(double magnitude, double period, double phase)
        : m_(magnitude), period_(period), phase_(phase) {}
    std::vector<double> next(std::int64_t t, std::span<const double> x) override {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        const auto d = static_cast<double>(x.size());
        std::vector<double> g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double angle = two_pi * static_cast<double>(t) / period_ + phase_ +
                                 two_pi * static_cast<double>(i) / d;
            g[i] = std::clamp(m_ * std::sin(angle), -m_, m_);
        }
        return g;
    }

private:
    double m_;
    double period_;
    double phase_;
};

class DriftAlternatingAdversary final : public Adversary {
public:
    DriftAlternatingAdversary(double magnitude, double direction, std::int64_t drift)
        : drift_(drift), constant_(magnitude, direction), alternating_(magnitude) {}
    std::vector<double> next(std::int64_t t, std::span<const double> x) override {
        return t <= drift_ ? constant_.next(t, x) : alternating_.next(t - drift_, x);
    }

private:
    std::int64_t drift_;
    ConstantAdversary constant_;
    AlternatingAdversary alternating_;
};

// Non-owning view of a scalar learner as a 1-d vector learner.
class ScalarView final : public VectorLearner {
public:
    explicit ScalarView(ScalarLearner& inner) : inner_(inner) {}
    std::size_t dim() const override { return 1; }
    double lipschitz() const override { return inner_.lipschitz(); }

protected:
    std::vector<double> do_predict() override { return {inner_.predict()}; }
    void do_observe(std::span<const double> g) override { inner_.observe(g[0]); }

private:
    ScalarLearner& inner_;
};

double l1_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) {
        s += std::fabs(x);
    }
    return s;
}

double require(const std::optional<double>& v, const char* name) {
    if (!v) {
        throw std::invalid_argument(std::string("theoretical_bound: missing parameter ") + name);
    }
    return *v;
}

double scalar_comparator(std::span<const double> u, TheoremId id) {
    if (u.size() != 1) {
        throw std::invalid_argument(std::string("theoretical_bound: ") +
                                    std::string(to_string(id)) +
                                    " needs a one-dimensional comparator");
    }
    return u[0];
}

// sqrt(scale * T) [C + |u| (sqrt(4 log(1 + |u| / C)) + 2)]
double potential_form(double scale, double T, double C, double u_abs) {
    return std::sqrt(scale * T) * (C + u_abs * (std::sqrt(4.0 * std::log1p(u_abs / C)) + 2.0));
}

double normalized_slack(double slack, double bound) {
    return slack / std::max(1.0, std::fabs(bound));
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n <= 1 || lo == hi) {
        return {0.5 * (lo + hi)};
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
    }
    return out;
}

std::string join(std::span<const double> v) {
    std::ostringstream os;
    os << std::setprecision(17);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ';';
        os << v[i];
    }
    return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(AdversaryKind kind) {
    switch (kind) {
        case AdversaryKind::sign: return "sign";
        case AdversaryKind::constant: return "constant";
        case AdversaryKind::alternating: return "alternating";
        case AdversaryKind::uniform_random: return "uniform_random";
        case AdversaryKind::sinusoidal: return "sinusoidal";
        case AdversaryKind::drift_alternating: return "drift_alternating";
    }
    return "unknown";
}

AdversaryKind adversary_kind_from_string(std::string_view name) {
    for (auto k : {AdversaryKind::sign, AdversaryKind::constant, AdversaryKind::alternating,
                   AdversaryKind::uniform_random, AdversaryKind::sinusoidal,
                   AdversaryKind::drift_alternating}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    if (name == "uniform") {
        return AdversaryKind::uniform_random;
    }
    throw std::invalid_argument("unknown adversary kind: " + std::string(name));
}

std::string AdversarySpec::label() const {
    std::ostringstream os;
    os << to_string(kind);
    switch (kind) {
        case AdversaryKind::uniform_random:
            os << "(seed=" << seed << ")";
            break;
        case AdversaryKind::sinusoidal:
            os << "(period=" << period << ",phase=" << phase << ")";
            break;
        case AdversaryKind::drift_alternating:
            os << "(drift=" << drift_rounds << ")";
            break;
        default:
            break;
    }
    return os.str();
}

void AdversarySpec::validate(double G) const {
    if (!(magnitude > 0.0) || magnitude > G) {
        throw std::invalid_argument("AdversarySpec: magnitude must lie in (0, G]");
    }
    if (kind == AdversaryKind::sinusoidal && !(period > 0.0)) {
        throw std::invalid_argument("AdversarySpec: sinusoidal period must be positive");
    }
    if ((kind == AdversaryKind::constant || kind == AdversaryKind::drift_alternating) &&
        std::fabs(direction) != 1.0) {
        throw std::invalid_argument("AdversarySpec: direction must be +1 or -1");
    }
    if (kind == AdversaryKind::drift_alternating && drift_rounds < 0) {
        throw std::invalid_argument("AdversarySpec: drift_rounds must be nonnegative");
    }
}

std::unique_ptr<Adversary> make_adversary(const AdversarySpec& spec, std::size_t /*dim*/) {
    switch (spec.kind) {
        case AdversaryKind::sign:
            return std::make_unique<SignAdversary>(spec.magnitude, spec.reference);
        case AdversaryKind::constant:
            return std::make_unique<ConstantAdversary>(spec.magnitude, spec.direction);
        case AdversaryKind::alternating:
            return std::make_unique<AlternatingAdversary>(spec.magnitude);
        case AdversaryKind::uniform_random:
            return std::make_unique<UniformAdversary>(spec.magnitude, spec.seed);
        case AdversaryKind::sinusoidal:
            return std::make_unique<SinusoidalAdversary>(spec.magnitude, spec.period, spec.phase);
        case AdversaryKind::drift_alternating:
            return std::make_unique<DriftAlternatingAdversary>(spec.magnitude, spec.direction,
                                                               spec.drift_rounds);
    }
    throw std::invalid_argument("make_adversary: unknown kind");
}

ReplayAdversary::ReplayAdversary(const Matrix& rows, double scale) : rows_(rows), scale_(scale) {}

std::vector<double> ReplayAdversary::next(std::int64_t t, std::span<const double> x) {
    if (t < 1 || static_cast<std::size_t>(t) > rows_.rows) {
        throw std::out_of_range("ReplayAdversary: round beyond the recorded matrix");
    }
    if (x.size() != rows_.cols) {
        throw std::invalid_argument("ReplayAdversary: dimension mismatch");
    }
    const auto row = rows_.row(static_cast<std::size_t>(t - 1));
    std::vector<double> g(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
        g[i] = scale_ * row[i];
    }
    return g;
}

std::vector<AdversarySpec> standard_adversary_suite(double G, std::uint64_t seed,
                                                    double sign_reference) {
    std::vector<AdversarySpec> suite;
    AdversarySpec spec;
    spec.magnitude = G;
    spec.seed = seed;
    spec.reference = sign_reference;
    for (auto k : {AdversaryKind::sign, AdversaryKind::constant, AdversaryKind::alternating,
                   AdversaryKind::uniform_random}) {
        spec.kind = k;
        suite.push_back(spec);
    }
    return suite;
}

// ---------------------------------------------------------------------------

EpisodeLedger::EpisodeLedger(std::size_t dim, double lambda, double G)
    : dim_(dim), lambda_(lambda), G_(G) {
    if (dim == 0) {
        throw std::invalid_argument("EpisodeLedger: dimension must be positive");
    }
}

void EpisodeLedger::record(std::span<const double> x, std::span<const double> g) {
    if (x.size() != dim_ || g.size() != dim_) {
        throw std::invalid_argument("EpisodeLedger: dimension mismatch");
    }
    for (double gi : g) {
        if (std::fabs(gi) > G_) {
            throw GradientBoundError("EpisodeLedger: recorded gradient exceeds G");
        }
    }
    if (rounds_ > 0) {
        const auto prev = prediction(rounds_);
        double s = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            s += std::fabs(prev[i] - x[i]);
        }
        switch_costs_.push_back(s);
    }
    predictions_.insert(predictions_.end(), x.begin(), x.end());
    gradients_.insert(gradients_.end(), g.begin(), g.end());
    ++rounds_;
}

std::span<const double> EpisodeLedger::prediction(std::size_t t) const {
    return {predictions_.data() + (t - 1) * dim_, dim_};
}

std::span<const double> EpisodeLedger::gradient(std::size_t t) const {
    return {gradients_.data() + (t - 1) * dim_, dim_};
}

std::vector<double> EpisodeLedger::cumulative_augmented_loss() const {
    const std::vector<double> zero(dim_, 0.0);
    return prefix_augmented_regret(*this, zero);
}

EpisodeLedger run_episode(VectorLearner& learner, Adversary& adversary, std::int64_t T,
                          double lambda) {
    if (T < 0) {
        throw std::invalid_argument("run_episode: T must be nonnegative");
    }
    EpisodeLedger ledger(learner.dim(), lambda, learner.lipschitz());
    for (std::int64_t t = 1; t <= T; ++t) {
        const std::vector<double> x = learner.predict();
        const std::vector<double> g = adversary.next(t, x);
        learner.observe(g);
        ledger.record(x, g);
    }
    return ledger;
}

EpisodeLedger run_episode(ScalarLearner& learner, Adversary& adversary, std::int64_t T,
                          double lambda) {
    ScalarView view(learner);
    return run_episode(view, adversary, T, lambda);
}

EpisodeLedger run_episode(VectorLearner& learner, const AdversarySpec& spec, std::int64_t T,
                          double lambda) {
    spec.validate(learner.lipschitz());
    auto adversary = make_adversary(spec, learner.dim());
    return run_episode(learner, *adversary, T, lambda);
}

EpisodeLedger run_episode(ScalarLearner& learner, const AdversarySpec& spec, std::int64_t T,
                          double lambda) {
    ScalarView view(learner);
    return run_episode(view, spec, T, lambda);
}

std::vector<double> prefix_augmented_regret(const EpisodeLedger& ledger,
                                            std::span<const double> u) {
    if (u.size() != ledger.dim()) {
        throw std::invalid_argument("augmented_regret: comparator dimension mismatch");
    }
    std::vector<double> out(ledger.rounds());
    double linear = 0.0;
    double switching = 0.0;
    for (std::size_t t = 1; t <= ledger.rounds(); ++t) {
        const auto x = ledger.prediction(t);
        const auto g = ledger.gradient(t);
        for (std::size_t i = 0; i < u.size(); ++i) {
            linear += g[i] * (x[i] - u[i]);
        }
        if (t >= 2) {
            switching += ledger.switch_costs()[t - 2];
        }
        out[t - 1] = linear + ledger.lambda() * switching;
    }
    return out;
}

double augmented_regret(const EpisodeLedger& ledger, std::span<const double> u) {
    const auto prefix = prefix_augmented_regret(ledger, u);
    return prefix.empty() ? 0.0 : prefix.back();
}

// ---------------------------------------------------------------------------

std::string_view to_string(TheoremId id) {
    switch (id) {
        case TheoremId::potential_regret: return "potential_regret";
        case TheoremId::baseline_regret: return "baseline_regret";
        case TheoremId::constrained_regret: return "constrained_regret";
        case TheoremId::constrained_switching: return "constrained_switching";
        case TheoremId::doubling_regret: return "doubling_regret";
        case TheoremId::coordinate_regret: return "coordinate_regret";
        case TheoremId::lea_regret: return "lea_regret";
    }
    return "unknown";
}

TheoremId theorem_from_string(std::string_view name) {
    for (auto id : {TheoremId::potential_regret, TheoremId::baseline_regret,
                    TheoremId::constrained_regret, TheoremId::constrained_switching,
                    TheoremId::doubling_regret, TheoremId::coordinate_regret,
                    TheoremId::lea_regret}) {
        if (to_string(id) == name) {
            return id;
        }
    }
    throw std::invalid_argument("unknown theorem id: " + std::string(name));
}

double theoretical_bound(TheoremId id, const BoundParams& params, std::span<const double> u,
                         double T) {
    if (!(T >= 0.0)) {
        throw std::invalid_argument("theoretical_bound: T must be nonnegative");
    }
    switch (id) {
        case TheoremId::potential_regret: {
            const double C = require(params.C, "C");
            const double G = require(params.G, "G");
            const double lambda = require(params.lambda, "lambda");
            const double a = std::fabs(scalar_comparator(u, id));
            return potential_form(4.0 * lambda * G + 2.0 * G * G, T, C, a);
        }
        case TheoremId::constrained_regret: {
            const double C = require(params.C, "C");
            const double G = require(params.G, "G");
            const double lambda = require(params.lambda, "lambda");
            const double offset = require(params.offset, "offset");
            const double a = std::fabs(scalar_comparator(u, id) - offset);
            return potential_form(4.0 * lambda * G + 2.0 * G * G, T, C, a);
        }
        case TheoremId::baseline_regret: {
            const double C = require(params.C, "C");
            const double G = require(params.G, "G");
            const double lambda = require(params.lambda, "lambda");
            const double a = std::fabs(scalar_comparator(u, id));
            double tail = 0.0;
            if (a > 0.0) {
                tail = a * std::sqrt(2.0 * T) *
                       (1.5 + std::log(std::numbers::sqrt2 * a * std::pow(T, 2.5) / C));
            }
            return (G + lambda) * (C + tail);
        }
        case TheoremId::constrained_switching: {
            const double C = require(params.C, "C");
            const double D = require(params.diameter, "diameter");
            return 22.0 * std::sqrt(T) *
                   (2.0 * D + C + 2.0 * D * std::sqrt(std::log1p(D / C)));
        }
        case TheoremId::doubling_regret: {
            const double C = require(params.C, "C");
            const double G = require(params.G, "G");
            const double lambda = require(params.lambda, "lambda");
            const double a = std::fabs(scalar_comparator(u, id));
            const double alpha = 8.0 * lambda / G + 2.0;
            const double lead = std::sqrt(2.0 * alpha) * G / (std::numbers::sqrt2 - 1.0);
            return lead * (C + a * std::sqrt(T) *
                                   (std::sqrt(8.0 * std::log1p(a * T / C)) +
                                    2.0 * std::numbers::sqrt2));
        }
        case TheoremId::coordinate_regret: {
            const double C = require(params.C, "C");
            const double G = require(params.G, "G");
            const double lambda = require(params.lambda, "lambda");
            if (u.empty()) {
                throw std::invalid_argument("theoretical_bound: empty comparator");
            }
            const double alpha = 4.0 * lambda / G + 2.0;
            const double l1 = l1_norm(u);
            double linf = 0.0;
            for (double ui : u) {
                linf = std::max(linf, std::fabs(ui));
            }
            const auto d = static_cast<double>(u.size());
            return G * std::sqrt(alpha * T) *
                   (C + l1 * (std::sqrt(4.0 * std::log1p(linf * d / C)) + 2.0));
        }
        case TheoremId::lea_regret: {
            const double G = require(params.G, "G");
            const double lambda = require(params.lambda, "lambda");
            if (!params.prior) {
                throw std::invalid_argument("theoretical_bound: missing parameter prior");
            }
            const auto& pi = *params.prior;
            if (pi.size() != u.size()) {
                throw std::invalid_argument("theoretical_bound: prior/comparator size mismatch");
            }
            double dist = 0.0;
            double weighted = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) {
                const double diff = std::fabs(u[i] - pi[i]);
                dist += diff;
                weighted += diff * std::log1p(diff / pi[i]);
            }
            return std::sqrt((32.0 * lambda * G + 8.0 * G * G) * T) *
                   (1.0 + 2.0 * dist + 2.0 * std::sqrt(dist * weighted));
        }
    }
    throw std::invalid_argument("theoretical_bound: unknown theorem");
}

double meta_adaptive_rate(double C, double G, double lambda, double u, double sum_abs_grad) {
    const double M = std::max(lambda, G);
    return (G + lambda) * C + std::fabs(u) * (M + std::sqrt(M * sum_abs_grad));
}

bool BoundReport::sound() const {
    return slack >= -kBoundTolerance * std::max(1.0, std::fabs(bound_value));
}

std::vector<BoundReport> verify_bounds(const VectorFactory& factory,
                                       std::span<const AdversarySpec> adversaries,
                                       const std::vector<std::vector<double>>& u_grid,
                                       std::int64_t T, TheoremId theorem,
                                       const BoundParams& params, double lambda,
                                       std::vector<EpisodeLedger>* ledgers) {
    std::vector<BoundReport> reports;
    for (const auto& spec : adversaries) {
        auto learner = factory();
        EpisodeLedger ledger = run_episode(*learner, spec, T, lambda);
        for (const auto& u : u_grid) {
            BoundReport report;
            report.comparator = u;
            report.theorem_id = theorem;
            report.adversary = spec.label();
            const auto regrets = prefix_augmented_regret(ledger, u);
            double worst = std::numeric_limits<double>::infinity();
            for (std::size_t t = 1; t <= regrets.size(); ++t) {
                const double bound = theoretical_bound(theorem, params, u, static_cast<double>(t));
                const double slack = bound - regrets[t - 1];
                const double score = normalized_slack(slack, bound);
                if (score < worst) {
                    worst = score;
                    report.measured_regret = regrets[t - 1];
                    report.bound_value = bound;
                    report.slack = slack;
                    report.T = static_cast<std::int64_t>(t);
                }
            }
            reports.push_back(std::move(report));
        }
        if (ledgers) {
            ledgers->push_back(std::move(ledger));
        }
    }
    return reports;
}

bool IntervalSwitchReport::sound() const {
    return slack >= -kBoundTolerance * std::max(1.0, std::fabs(bound));
}

IntervalSwitchReport verify_interval_switching(const EpisodeLedger& ledger, double C,
                                               double diameter) {
    const std::size_t T = ledger.rounds();
    // prefix[t] = sum_{tau < t} |x_tau - x_{tau+1}|, t = 1..T
    std::vector<double> prefix(T + 1, 0.0);
    for (std::size_t t = 2; t <= T; ++t) {
        prefix[t] = prefix[t - 1] + ledger.switch_costs()[t - 2];
    }
    BoundParams params;
    params.C = C;
    params.diameter = diameter;
    const double unit = theoretical_bound(TheoremId::constrained_switching, params, {}, 1.0);
    IntervalSwitchReport report;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t t1 = 1; t1 <= T; ++t1) {
        for (std::size_t t2 = t1 + 1; t2 <= T; ++t2) {
            const double measured = prefix[t2] - prefix[t1];
            const double bound = unit * std::sqrt(static_cast<double>(t2 - t1));
            const double slack = bound - measured;
            const double score = normalized_slack(slack, bound);
            ++report.windows;
            if (score < worst) {
                worst = score;
                report.T1 = static_cast<std::int64_t>(t1);
                report.T2 = static_cast<std::int64_t>(t2);
                report.measured = measured;
                report.bound = bound;
                report.slack = slack;
            }
        }
    }
    return report;
}

double switching_lemma_violation(const EpisodeLedger& ledger, const LearnerConfig& cfg) {
    if (ledger.dim() != 1) {
        throw std::invalid_argument("switching_lemma_violation: needs a scalar ledger");
    }
    double worst = -std::numeric_limits<double>::infinity();
    double S = 0.0;
    for (std::size_t t = 1; t < ledger.rounds(); ++t) {
        const double step = std::fabs(ledger.prediction(t)[0] - ledger.prediction(t + 1)[0]);
        const auto tt = static_cast<double>(t);
        const double bound =
            discrete_grad_s(cfg, {tt, S + 1.0}) - discrete_grad_s(cfg, {tt, S - 1.0});
        worst = std::max(worst, step - bound);
        S -= ledger.gradient(t)[0] / cfg.G;
    }
    return ledger.rounds() < 2 ? 0.0 : worst;
}

// ---------------------------------------------------------------------------

std::string_view to_string(InvariantKind kind) {
    switch (kind) {
        case InvariantKind::residual_delta: return "residual_delta";
        case InvariantKind::switch_lemma: return "switch_lemma";
        case InvariantKind::heat_pde: return "heat_pde";
        case InvariantKind::monotone_policy: return "monotone_policy";
    }
    return "unknown";
}

SweepGrid SweepGrid::standard() {
    SweepGrid grid;
    for (int t = 1; t <= 1000; ++t) {
        grid.ts.push_back(t);
    }
    for (int k = 10; k <= 14; ++k) {
        grid.ts.push_back(std::ldexp(1.0, k));
    }
    return grid;
}

SweepReport invariant_sweep(InvariantKind kind, const SweepGrid& grid) {
    SweepReport report;
    report.kind = kind;
    report.worst_violation = -std::numeric_limits<double>::infinity();
    switch (kind) {
        case InvariantKind::residual_delta: report.tolerance = 1e-12; break;
        case InvariantKind::heat_pde: report.tolerance = 1e-9; break;
        case InvariantKind::switch_lemma: report.tolerance = 1e-12; break;
        case InvariantKind::monotone_policy: report.tolerance = 1e-12; break;
    }

    for (double C : grid.Cs) {
        for (double G : grid.Gs) {
            for (double lambda : grid.lambdas) {
                const double alpha = grid.alpha.value_or(4.0 * lambda / G + 2.0);
                const LearnerConfig cfg = LearnerConfig::with_alpha(C, G, lambda, alpha);
                for (double t : grid.ts) {
                    const double R = grid.reachable_only ? t - 1.0 : t;
                    const auto points = linspace(-R, R, grid.s_points);
                    double prev_grad = -std::numeric_limits<double>::infinity();
                    for (double S : points) {
                        double violation = 0.0;
                        try {
                            switch (kind) {
                                case InvariantKind::residual_delta:
                                    violation = residual_delta(cfg, {t, S});
                                    break;
                                case InvariantKind::heat_pde: {
                                    const auto d = analytic_derivs(cfg, {t, S});
                                    violation = std::fabs(d.dt + alpha * d.dSS) /
                                                std::max(1.0, std::fabs(d.dt));
                                    break;
                                }
                                case InvariantKind::switch_lemma: {
                                    const double here = discrete_grad_s(cfg, {t, S});
                                    const double up = discrete_grad_s(cfg, {t + 1.0, S + 1.0});
                                    const double down = discrete_grad_s(cfg, {t + 1.0, S - 1.0});
                                    const double step =
                                        std::max(std::fabs(here - up), std::fabs(here - down));
                                    const double bound = discrete_grad_s(cfg, {t, S + 1.0}) -
                                                         discrete_grad_s(cfg, {t, S - 1.0});
                                    violation = (step - bound) / std::max(1.0, bound);
                                    break;
                                }
                                case InvariantKind::monotone_policy: {
                                    const double g = discrete_grad_s(cfg, {t, S});
                                    const double mirrored = discrete_grad_s(cfg, {t, -S});
                                    const double scale = std::max(1.0, std::fabs(g));
                                    const double odd = std::fabs(g + mirrored) / scale;
                                    const double drop = (prev_grad - g) / scale;
                                    violation = std::max(odd, drop);
                                    prev_grad = g;
                                    break;
                                }
                            }
                        } catch (const RangeError&) {
                            ++report.skipped;
                            continue;
                        }
                        ++report.evaluated;
                        if (violation > report.worst_violation) {
                            report.worst_violation = violation;
                            report.worst_t = t;
                            report.worst_S = S;
                            report.worst_lambda = lambda;
                            report.worst_G = G;
                            report.worst_C = C;
                        }
                    }
                }
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------------------

void write_reports_json(std::ostream& os, std::span<const BoundReport> reports) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : reports) {
        out.push_back({{"theorem_id", to_string(r.theorem_id)},
                       {"adversary", r.adversary},
                       {"comparator", r.comparator},
                       {"T", r.T},
                       {"measured_regret", r.measured_regret},
                       {"bound_value", r.bound_value},
                       {"slack", r.slack},
                       {"sound", r.sound()}});
    }
    os << out.dump(2) << '\n';
}

void write_reports_csv(std::ostream& os, std::span<const BoundReport> reports) {
    os << "theorem_id,adversary,u,T,measured,bound,slack\n";
    os << std::setprecision(17);
    for (const auto& r : reports) {
        os << to_string(r.theorem_id) << ',' << r.adversary << ',' << join(r.comparator) << ','
           << r.T << ',' << r.measured_regret << ',' << r.bound_value << ',' << r.slack << '\n';
    }
}

void write_ledger_json(std::ostream& os, const EpisodeLedger& ledger) {
    nlohmann::json predictions = nlohmann::json::array();
    nlohmann::json gradients = nlohmann::json::array();
    for (std::size_t t = 1; t <= ledger.rounds(); ++t) {
        const auto x = ledger.prediction(t);
        const auto g = ledger.gradient(t);
        predictions.push_back(std::vector<double>(x.begin(), x.end()));
        gradients.push_back(std::vector<double>(g.begin(), g.end()));
    }
    nlohmann::json out = {{"dim", ledger.dim()},
                          {"lambda", ledger.lambda()},
                          {"G", ledger.G()},
                          {"rounds", ledger.rounds()},
                          {"predictions", predictions},
                          {"gradients", gradients},
                          {"switch_costs", ledger.switch_costs()}};
    os << out.dump(2) << '\n';
}

void write_ledger_csv(std::ostream& os, const EpisodeLedger& ledger) {
    os << "round";
    for (std::size_t i = 0; i < ledger.dim(); ++i) os << ",x" << i;
    for (std::size_t i = 0; i < ledger.dim(); ++i) os << ",g" << i;
    os << ",switch_cost\n";
    os << std::setprecision(17);
    for (std::size_t t = 1; t <= ledger.rounds(); ++t) {
        os << t;
        for (double v : ledger.prediction(t)) os << ',' << v;
        for (double v : ledger.gradient(t)) os << ',' << v;
        os << ',';
        if (t < ledger.rounds()) os << ledger.switch_costs()[t - 1];
        os << '\n';
    }
}

}  // namespace adaswitch
