#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "adaswitch/potential.hpp"

namespace adaswitch {

/// Raised when predict/observe are called out of order.
class LifecycleError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Raised when an observed gradient exceeds the learner's Lipschitz bound.
class GradientBoundError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Tracks strict predict/observe alternation, starting with predict.
class Alternation {
public:
    void before_predict();
    void before_observe();

private:
    bool awaiting_observe_ = false;
};

/// One-dimensional online linear optimizer.
///
/// Calls must alternate predict(), observe(g), predict(), ... The public
/// methods enforce ordering and |g| <= lipschitz(); subclasses implement the
/// do_* hooks.
class ScalarLearner {
public:
    virtual ~ScalarLearner() = default;

    double predict();
    void observe(double g);

    virtual double lipschitz() const = 0;

protected:
    virtual double do_predict() = 0;
    virtual void do_observe(double g) = 0;

private:
    Alternation phase_;
};

using ScalarLearnerPtr = std::unique_ptr<ScalarLearner>;

/// Builds a fresh scalar learner for a given Lipschitz constant.
using ScalarFactory = std::function<ScalarLearnerPtr(double lipschitz)>;

struct ScalarState {
    std::int64_t t = 1;
    double S = 0.0;
    double last_prediction = 0.0;
};

/// Predicts the discrete S-gradient of V_alpha at (t, S_{t-1}) and updates
/// S_t = S_{t-1} - g_t / G.
class PotentialLearner final : public ScalarLearner {
public:
    explicit PotentialLearner(const LearnerConfig& cfg);

    double lipschitz() const override { return cfg_.G; }
    const LearnerConfig& config() const { return cfg_; }
    const ScalarState& state() const { return state_; }

protected:
    double do_predict() override;
    void do_observe(double g) override;

private:
    LearnerConfig cfg_;
    ScalarState state_;
};

/// Solves W = (1 - g b_t) W_prev - lambda |b_t W_prev - b_next W| for W.
///
/// Each sign of the absolute value gives a linear equation; the returned root
/// is the sign-consistent one. Requires lambda * |b_next| < 1, otherwise
/// throws std::domain_error.
double solve_wealth_fixed_point(double wealth_prev, double g, double beta_t, double beta_next,
                                double lambda);

struct BaselineState {
    double wealth = 0.0;
    double beta = 0.0;
    double grad_sum = 0.0;
    std::int64_t t = 1;
    double K = 0.0;
};

/// Coin-betting learner with a hard O(1/sqrt(t)) cap on the betting fraction.
class BaselineLearner final : public ScalarLearner {
public:
    BaselineLearner(double C, double G, double lambda);

    double lipschitz() const override { return G_; }
    const BaselineState& state() const { return state_; }
    double lambda() const { return lambda_; }

    /// 1 / (K sqrt(2 t)), the cap applied to beta_{t+1}.
    double threshold(std::int64_t t) const;

protected:
    double do_predict() override;
    void do_observe(double g) override;

private:
    double G_;
    double lambda_;
    BaselineState state_;
    double prediction_ = 0.0;
};

/// Closed interval [lower, upper] (either end may be infinite) with an
/// anchor point `offset` inside it.
struct DomainInterval {
    double lower = 0.0;
    double upper = 1.0;
    double offset = 0.0;

    void validate() const;
    double project(double x) const;
    double diameter() const { return upper - lower; }
};

/// Restricts an unconstrained base learner to a domain by clipping
/// base + offset and feeding back a surrogate gradient that is zeroed when the
/// clip moved the point in the gradient's favour.
class ConstrainedLearner final : public ScalarLearner {
public:
    ConstrainedLearner(ScalarLearnerPtr base, const DomainInterval& dom);

    double lipschitz() const override { return base_->lipschitz(); }
    const DomainInterval& domain() const { return dom_; }
    const ScalarLearner& base() const { return *base_; }

    double last_base_prediction() const { return base_prediction_; }
    double last_surrogate() const { return surrogate_; }

protected:
    double do_predict() override;
    void do_observe(double g) override;

private:
    ScalarLearnerPtr base_;
    DomainInterval dom_;
    double base_prediction_ = 0.0;
    double prediction_ = 0.0;
    double surrogate_ = 0.0;
};

/// Doubling trick over potential learners: epoch m covers rounds
/// [2^m, 2^{m+1} - 1] and uses hyperparameter C 2^{-m}, alpha = 8 lambda / G + 2.
class DoublingLearner final : public ScalarLearner {
public:
    DoublingLearner(double C, double G, double lambda);

    double lipschitz() const override { return G_; }

    /// Index of the epoch that owns the next prediction.
    int epoch() const { return epoch_; }
    /// Number of epochs started so far.
    int epochs_started() const { return epoch_ + 1; }
    double epoch_C() const { return active_->config().C; }

protected:
    double do_predict() override;
    void do_observe(double g) override;

private:
    double C_;
    double G_;
    double lambda_;
    std::int64_t t_ = 1;
    int epoch_ = 0;
    std::unique_ptr<PotentialLearner> active_;
};

/// Gradient-adaptive wrapper: freezes the base output while accumulating
/// gradients and forwards the accumulated sum once it exceeds max{lambda, G}.
/// The base is built with Lipschitz constant max{lambda, G} + G.
class MetaLearner final : public ScalarLearner {
public:
    MetaLearner(const ScalarFactory& base_factory, double G, double lambda);

    double lipschitz() const override { return G_; }
    double threshold() const { return threshold_; }
    double accumulator() const { return Z_; }
    std::int64_t flushes() const { return flushes_; }
    const ScalarLearner& base() const { return *base_; }

protected:
    double do_predict() override;
    void do_observe(double g) override;

private:
    double G_;
    double threshold_;
    ScalarLearnerPtr base_;
    double w_ = 0.0;
    double Z_ = 0.0;
    std::int64_t flushes_ = 0;
};

/// Factory helpers for wrappers.
ScalarFactory potential_factory(double C, double lambda);
ScalarFactory baseline_factory(double C, double lambda);

}  // namespace adaswitch
