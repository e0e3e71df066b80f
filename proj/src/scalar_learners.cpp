#include "adaswitch/scalar_learners.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace adaswitch {

void Alternation::before_predict() {
    if (awaiting_observe_) {
        throw LifecycleError("predict called twice without an intervening observe");
    }
    awaiting_observe_ = true;
}

void Alternation::before_observe() {
    if (!awaiting_observe_) {
        throw LifecycleError("observe called without a preceding predict");
    }
    awaiting_observe_ = false;
}

double ScalarLearner::predict() {
    phase_.before_predict();
    return do_predict();
}

void ScalarLearner::observe(double g) {
    if (!std::isfinite(g) || std::fabs(g) > lipschitz()) {
        std::ostringstream os;
        os << "gradient " << g << " violates |g| <= " << lipschitz();
        throw GradientBoundError(os.str());
    }
    phase_.before_observe();
    do_observe(g);
}

// ---------------------------------------------------------------------------

PotentialLearner::PotentialLearner(const LearnerConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

double PotentialLearner::do_predict() {
    state_.last_prediction =
        discrete_grad_s(cfg_, {static_cast<double>(state_.t), state_.S});
    return state_.last_prediction;
}

void PotentialLearner::do_observe(double g) {
    state_.S -= g / cfg_.G;
    ++state_.t;
}

// ---------------------------------------------------------------------------

double solve_wealth_fixed_point(double wealth_prev, double g, double beta_t, double beta_next,
                                double lambda) {
    if (!(lambda * std::fabs(beta_next) < 1.0)) {
        throw std::domain_error("wealth fixed point infeasible: lambda * |beta_next| >= 1");
    }
    const double a = (1.0 - g * beta_t) * wealth_prev;
    const double b = beta_t * wealth_prev;
    const double c = beta_next;
    if (lambda == 0.0) {
        return a;
    }
    // b - c W >= 0:  W = a - lambda (b - c W)
    const double w_plus = (a - lambda * b) / (1.0 - lambda * c);
    // b - c W <= 0:  W = a + lambda (b - c W)
    const double w_minus = (a + lambda * b) / (1.0 + lambda * c);
    const double gap_plus = b - c * w_plus;
    const double gap_minus = b - c * w_minus;
    const double tol = 1e-12 * std::max({1.0, std::fabs(b), std::fabs(c * w_plus)});
    const bool plus_ok = gap_plus >= -tol;
    const bool minus_ok = gap_minus <= tol;
    if (plus_ok && minus_ok) {
        // Both consistent only at the kink, where the two roots agree.
        if (std::fabs(w_plus - w_minus) > 1e-12 * std::max(1.0, std::fabs(w_plus))) {
            throw std::logic_error("wealth fixed point: branches disagree at the kink");
        }
        return w_plus;
    }
    if (plus_ok) {
        return w_plus;
    }
    if (minus_ok) {
        return w_minus;
    }
    throw std::logic_error("wealth fixed point: no sign-consistent branch");
}

BaselineLearner::BaselineLearner(double C, double G, double lambda) : G_(G), lambda_(lambda) {
    if (!(C > 0.0) || !(G > 0.0) || !(lambda >= 0.0)) {
        throw std::invalid_argument("BaselineLearner: requires C > 0, G > 0, lambda >= 0");
    }
    state_.K = G + lambda;
    state_.wealth = C * state_.K;
}

double BaselineLearner::threshold(std::int64_t t) const {
    return 1.0 / (state_.K * std::sqrt(2.0 * static_cast<double>(t)));
}

double BaselineLearner::do_predict() { return prediction_; }

void BaselineLearner::do_observe(double g) {
    const double K = state_.K;
    const auto t = static_cast<double>(state_.t);
    state_.grad_sum += g;
    const double unprojected = -state_.grad_sum / (2.0 * K * K * t);
    const double cap = threshold(state_.t);
    const double beta_next = std::clamp(unprojected, -cap, cap);
    state_.wealth = solve_wealth_fixed_point(state_.wealth, g, state_.beta, beta_next, lambda_);
    state_.beta = beta_next;
    prediction_ = beta_next * state_.wealth;
    ++state_.t;
}

// ---------------------------------------------------------------------------

void DomainInterval::validate() const {
    if (std::isnan(lower) || std::isnan(upper) || !std::isfinite(offset)) {
        throw std::invalid_argument("DomainInterval: NaN bound or non-finite offset");
    }
    if (!(lower < upper)) {
        throw std::invalid_argument("DomainInterval: requires lower < upper");
    }
    if (offset < lower || offset > upper) {
        throw std::invalid_argument("DomainInterval: offset must lie inside the domain");
    }
}

double DomainInterval::project(double x) const { return std::clamp(x, lower, upper); }

ConstrainedLearner::ConstrainedLearner(ScalarLearnerPtr base, const DomainInterval& dom)
    : base_(std::move(base)), dom_(dom) {
    if (!base_) {
        throw std::invalid_argument("ConstrainedLearner: null base learner");
    }
    dom_.validate();
}

double ConstrainedLearner::do_predict() {
    base_prediction_ = base_->predict();
    prediction_ = dom_.project(base_prediction_ + dom_.offset);
    return prediction_;
}

void ConstrainedLearner::do_observe(double g) {
    const double shifted = base_prediction_ + dom_.offset;
    surrogate_ = g * shifted >= g * prediction_ ? g : 0.0;
    base_->observe(surrogate_);
}

// ---------------------------------------------------------------------------

DoublingLearner::DoublingLearner(double C, double G, double lambda)
    : C_(C), G_(G), lambda_(lambda),
      active_(std::make_unique<PotentialLearner>(LearnerConfig::doubling(C, G, lambda))) {}

double DoublingLearner::do_predict() {
    const std::int64_t next_start = std::int64_t{1} << (epoch_ + 1);
    if (t_ == next_start) {
        ++epoch_;
        active_ = std::make_unique<PotentialLearner>(
            LearnerConfig::doubling(std::ldexp(C_, -epoch_), G_, lambda_));
    }
    return active_->predict();
}

void DoublingLearner::do_observe(double g) {
    active_->observe(g);
    ++t_;
}

// ---------------------------------------------------------------------------

MetaLearner::MetaLearner(const ScalarFactory& base_factory, double G, double lambda)
    : G_(G), threshold_(std::max(lambda, G)) {
    if (!(G > 0.0) || !(lambda >= 0.0)) {
        throw std::invalid_argument("MetaLearner: requires G > 0, lambda >= 0");
    }
    base_ = base_factory(threshold_ + G_);
    if (!base_) {
        throw std::invalid_argument("MetaLearner: factory returned null");
    }
    w_ = base_->predict();
}

double MetaLearner::do_predict() { return w_; }

void MetaLearner::do_observe(double g) {
    Z_ += g;
    if (std::fabs(Z_) > threshold_) {
        base_->observe(Z_);
        Z_ = 0.0;
        ++flushes_;
        w_ = base_->predict();
    }
}

ScalarFactory potential_factory(double C, double lambda) {
    return [C, lambda](double lipschitz) -> ScalarLearnerPtr {
        return std::make_unique<PotentialLearner>(LearnerConfig::switching(C, lipschitz, lambda));
    };
}

ScalarFactory baseline_factory(double C, double lambda) {
    return [C, lambda](double lipschitz) -> ScalarLearnerPtr {
        return std::make_unique<BaselineLearner>(C, lipschitz, lambda);
    };
}

}  // namespace adaswitch
