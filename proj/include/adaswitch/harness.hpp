#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adaswitch/matrix.hpp"
#include "adaswitch/potential.hpp"
#include "adaswitch/vector_learners.hpp"

namespace adaswitch {

// ---------------------------------------------------------------------------
// Adversaries

enum class AdversaryKind {
    sign,
    constant,
    alternating,
    uniform_random,
    sinusoidal,
    drift_alternating,
};

std::string_view to_string(AdversaryKind kind);
AdversaryKind adversary_kind_from_string(std::string_view name);

/// Description of a gradient-generating adversary. All kinds emit gradients
/// with ||g||_inf <= magnitude.
///
/// Vector forms, coordinate i of round t (1-based):
///   sign          magnitude * sgn(x_i - reference), +magnitude on ties
///   constant      direction * magnitude on i = 0, the opposite sign elsewhere
///   alternating   magnitude * (-1)^(t + i + 1), so +magnitude at t = 1, i = 0
///   uniform       magnitude * U[-1, 1), i.i.d. from the seeded generator
///   sinusoidal    magnitude * sin(2 pi t / period + phase + 2 pi i / d)
///   drift_alternating  the constant pattern for t <= drift_rounds, then the
///                 alternating pattern restarted at round drift_rounds + 1. Builds
///                 up |S| and then makes the learner pay curvature on every step.
struct AdversarySpec {
    AdversaryKind kind = AdversaryKind::sign;
    double magnitude = 1.0;
    std::uint64_t seed = 0;
    double phase = 0.0;
    double period = 64.0;
    double direction = -1.0;
    double reference = 0.0;
    std::int64_t drift_rounds = 64;

    std::string label() const;
    void validate(double G) const;
};

class Adversary {
public:
    virtual ~Adversary() = default;
    /// Gradient for round t given the learner's prediction x_t.
    virtual std::vector<double> next(std::int64_t t, std::span<const double> x) = 0;
};

std::unique_ptr<Adversary> make_adversary(const AdversarySpec& spec, std::size_t dim);

/// Replays the rows of a matrix, multiplied by `scale`.
class ReplayAdversary final : public Adversary {
public:
    ReplayAdversary(const Matrix& rows, double scale);
    std::vector<double> next(std::int64_t t, std::span<const double> x) override;

private:
    const Matrix& rows_;
    double scale_;
};

/// The four kinds used by the bound sweeps, each at full magnitude G.
std::vector<AdversarySpec> standard_adversary_suite(double G, std::uint64_t seed,
                                                    double sign_reference = 0.0);

// ---------------------------------------------------------------------------
// Episodes

/// Trajectory of one episode: predictions x_1..x_T, gradients g_1..g_T and
/// switch costs ||x_t - x_{t+1}||_1 for t = 1..T-1.
class EpisodeLedger {
public:
    EpisodeLedger(std::size_t dim, double lambda, double G);

    void record(std::span<const double> x, std::span<const double> g);

    std::size_t dim() const { return dim_; }
    std::size_t rounds() const { return rounds_; }
    double lambda() const { return lambda_; }
    double G() const { return G_; }

    /// Round t is 1-based.
    std::span<const double> prediction(std::size_t t) const;
    std::span<const double> gradient(std::size_t t) const;
    const std::vector<double>& switch_costs() const { return switch_costs_; }

    /// sum_{tau <= t} <g_tau, x_tau> + lambda sum_{tau < t} ||x_tau - x_{tau+1}||_1
    /// for t = 1..T, i.e. the augmented regret against u = 0 at every prefix.
    std::vector<double> cumulative_augmented_loss() const;

    bool operator==(const EpisodeLedger&) const = default;

private:
    std::size_t dim_;
    double lambda_;
    double G_;
    std::size_t rounds_ = 0;
    std::vector<double> predictions_;
    std::vector<double> gradients_;
    std::vector<double> switch_costs_;
};

/// Runs predict -> adversary -> observe for T rounds.
EpisodeLedger run_episode(VectorLearner& learner, Adversary& adversary, std::int64_t T,
                          double lambda);
EpisodeLedger run_episode(ScalarLearner& learner, Adversary& adversary, std::int64_t T,
                          double lambda);
EpisodeLedger run_episode(VectorLearner& learner, const AdversarySpec& spec, std::int64_t T,
                          double lambda);
EpisodeLedger run_episode(ScalarLearner& learner, const AdversarySpec& spec, std::int64_t T,
                          double lambda);

/// sum_t <g_t, x_t - u> + lambda sum_t ||x_t - x_{t+1}||_1 over the full ledger.
double augmented_regret(const EpisodeLedger& ledger, std::span<const double> u);

/// Augmented regret against u at every prefix length t = 1..T.
std::vector<double> prefix_augmented_regret(const EpisodeLedger& ledger,
                                            std::span<const double> u);

// ---------------------------------------------------------------------------
// Theorem right-hand sides

enum class TheoremId {
    potential_regret,       ///< potential learner, alpha = 4 lambda / G + 2
    baseline_regret,        ///< coin-betting baseline
    constrained_regret,     ///< constrained wrapper, comparator measured from the offset
    constrained_switching,  ///< interval switching cost of the constrained wrapper
    doubling_regret,        ///< doubling wrapper, alpha = 8 lambda / G + 2
    coordinate_regret,      ///< coordinate-wise d-dimensional learner
    lea_regret,             ///< experts learner, explicit form before constants are absorbed
};

std::string_view to_string(TheoremId id);
TheoremId theorem_from_string(std::string_view name);

/// Inputs for theoretical_bound. Which fields are required depends on the
/// theorem; a missing one raises std::invalid_argument naming it.
struct BoundParams {
    std::optional<double> C;
    std::optional<double> G;
    std::optional<double> lambda;
    std::optional<double> diameter;
    std::optional<double> offset;
    std::optional<std::vector<double>> prior;
};

/// Closed-form right-hand side of the selected regret bound at horizon T.
/// For constrained_switching, T is the window length T2 - T1.
double theoretical_bound(TheoremId id, const BoundParams& params, std::span<const double> u,
                         double T);

/// Shape of the gradient-adaptive meta-wrapper's guarantee with unit
/// constants and logarithmic factors dropped:
///   (G + lambda) C + |u| (M + sqrt(M sum|g_t|)),  M = max{lambda, G}.
/// The printed guarantee hides constants, so this is a rate, not a checkable bound.
double meta_adaptive_rate(double C, double G, double lambda, double u, double sum_abs_grad);

struct BoundReport {
    std::vector<double> comparator;
    double measured_regret = 0.0;
    double bound_value = 0.0;
    double slack = 0.0;
    TheoremId theorem_id = TheoremId::potential_regret;
    std::string adversary;
    std::int64_t T = 0;  ///< prefix length attaining the smallest slack

    bool sound() const;
};

/// Relative soundness margin shared by every bound check.
inline constexpr double kBoundTolerance = 1e-9;

using VectorFactory = std::function<VectorLearnerPtr()>;

/// Runs one episode per adversary and checks the bound against every
/// comparator at every prefix t <= T. Each report carries the worst prefix.
std::vector<BoundReport> verify_bounds(const VectorFactory& factory,
                                       std::span<const AdversarySpec> adversaries,
                                       const std::vector<std::vector<double>>& u_grid,
                                       std::int64_t T, TheoremId theorem,
                                       const BoundParams& params, double lambda,
                                       std::vector<EpisodeLedger>* ledgers = nullptr);

/// Smallest slack of the interval switching bound over all windows
/// [T1, T2] with 1 <= T1 < T2 <= T.
struct IntervalSwitchReport {
    std::int64_t T1 = 0;
    std::int64_t T2 = 0;
    double measured = 0.0;
    double bound = 0.0;
    double slack = 0.0;
    std::size_t windows = 0;

    bool sound() const;
};

IntervalSwitchReport verify_interval_switching(const EpisodeLedger& ledger, double C,
                                               double diameter);

/// Largest value of |x_t - x_{t+1}| - [gradS(t, S_{t-1}+1) - gradS(t, S_{t-1}-1)]
/// along a potential-learner trajectory, with S_{t-1} recovered from the ledger.
double switching_lemma_violation(const EpisodeLedger& ledger, const LearnerConfig& cfg);

// ---------------------------------------------------------------------------
// Invariant sweeps

enum class InvariantKind { residual_delta, switch_lemma, heat_pde, monotone_policy };

std::string_view to_string(InvariantKind kind);

struct SweepGrid {
    std::vector<double> ts;
    int s_points = 200;
    /// S ranges over [-(t - 1), t - 1] when true, [-t, t] otherwise.
    bool reachable_only = true;
    std::vector<double> lambdas{0.0, 0.1, 1.0, 10.0};
    std::vector<double> Gs{1.0, 15.0};
    std::vector<double> Cs{1.0};
    /// Replaces 4 lambda / G + 2 when set (negative controls).
    std::optional<double> alpha;

    /// t in {1..1000} and {2^k : k <= 14}, 200 S points.
    static SweepGrid standard();
};

struct SweepReport {
    InvariantKind kind = InvariantKind::residual_delta;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;  ///< points beyond the overflow guard
    double worst_violation = 0.0;
    double tolerance = 0.0;
    double worst_t = 0.0;
    double worst_S = 0.0;
    double worst_lambda = 0.0;
    double worst_G = 0.0;
    double worst_C = 0.0;

    bool passed() const { return worst_violation <= tolerance; }
};

/// Evaluates the named inequality on every grid point and reports the worst
/// violation. Violation measures, all required to be <= tolerance:
///   residual_delta   Delta_t (absolute), tolerance 1e-12
///   heat_pde         |dt + alpha dSS| / max(1, |dt|), tolerance 1e-9
///   switch_lemma     (max_c |gradS(t,S) - gradS(t+1,S+c)| - [gradS(t,S+1) - gradS(t,S-1)])
///                    / max(1, bound), tolerance 1e-12
///   monotone_policy  oddness and monotonicity defects of gradS relative to
///                    max(1, |gradS|), tolerance 1e-12
SweepReport invariant_sweep(InvariantKind kind, const SweepGrid& grid);

// ---------------------------------------------------------------------------
// Report files

void write_reports_json(std::ostream& os, std::span<const BoundReport> reports);
void write_reports_csv(std::ostream& os, std::span<const BoundReport> reports);
void write_ledger_json(std::ostream& os, const EpisodeLedger& ledger);
void write_ledger_csv(std::ostream& os, const EpisodeLedger& ledger);

}  // namespace adaswitch
