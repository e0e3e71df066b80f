#include "adaswitch/vector_learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace adaswitch {

namespace {

double linf(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::fabs(x));
    }
    return m;
}

void check_same_size(std::span<const double> a, std::span<const double> b, const char* who) {
    if (a.size() != b.size()) {
        std::ostringstream os;
        os << who << ": dimension mismatch (" << a.size() << " vs " << b.size() << ")";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

SimplexPoint::SimplexPoint(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw std::invalid_argument("SimplexPoint: empty weight vector");
    }
    double sum = 0.0;
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0) {
            throw std::invalid_argument("SimplexPoint: weights must be finite and nonnegative");
        }
        sum += w;
    }
    if (!(sum > 0.0)) {
        throw std::invalid_argument("SimplexPoint: weights sum to zero");
    }
    for (double& w : weights_) {
        w /= sum;
    }
}

SimplexPoint SimplexPoint::uniform(std::size_t d) {
    return SimplexPoint(std::vector<double>(d, 1.0));
}

SimplexPoint SimplexPoint::vertex(std::size_t d, std::size_t i) {
    std::vector<double> w(d, 0.0);
    w.at(i) = 1.0;
    return SimplexPoint(std::move(w));
}

// ---------------------------------------------------------------------------

std::vector<double> VectorLearner::predict() {
    phase_.before_predict();
    return do_predict();
}

void VectorLearner::observe(std::span<const double> g) {
    if (g.size() != dim()) {
        std::ostringstream os;
        os << "gradient dimension " << g.size() << " does not match learner dimension " << dim();
        throw std::invalid_argument(os.str());
    }
    for (double gi : g) {
        if (!std::isfinite(gi) || std::fabs(gi) > lipschitz()) {
            std::ostringstream os;
            os << "gradient coordinate " << gi << " violates |g_i| <= " << lipschitz();
            throw GradientBoundError(os.str());
        }
    }
    phase_.before_observe();
    do_observe(g);
}

CoordinateLearner::CoordinateLearner(std::vector<ScalarLearnerPtr> coords)
    : coords_(std::move(coords)), lipschitz_(std::numeric_limits<double>::infinity()) {
    if (coords_.empty()) {
        throw std::invalid_argument("CoordinateLearner: needs at least one coordinate");
    }
    for (const auto& c : coords_) {
        if (!c) {
            throw std::invalid_argument("CoordinateLearner: null coordinate learner");
        }
        lipschitz_ = std::min(lipschitz_, c->lipschitz());
    }
}

std::vector<double> CoordinateLearner::do_predict() {
    std::vector<double> x(coords_.size());
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        x[i] = coords_[i]->predict();
    }
    return x;
}

void CoordinateLearner::do_observe(std::span<const double> g) {
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        coords_[i]->observe(g[i]);
    }
}

std::unique_ptr<CoordinateLearner> make_coordinate_olo(std::size_t d, double C, double G,
                                                       double lambda) {
    if (d == 0) {
        throw std::invalid_argument("make_coordinate_olo: d must be positive");
    }
    const LearnerConfig cfg = LearnerConfig::switching(C / static_cast<double>(d), G, lambda);
    std::vector<ScalarLearnerPtr> coords;
    coords.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        coords.push_back(std::make_unique<PotentialLearner>(cfg));
    }
    return std::make_unique<CoordinateLearner>(std::move(coords));
}

std::unique_ptr<CoordinateLearner> make_coordinate_baseline(std::size_t d, double C, double G,
                                                            double lambda) {
    if (d == 0) {
        throw std::invalid_argument("make_coordinate_baseline: d must be positive");
    }
    std::vector<ScalarLearnerPtr> coords;
    coords.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        coords.push_back(
            std::make_unique<BaselineLearner>(C / static_cast<double>(d), G, lambda));
    }
    return std::make_unique<CoordinateLearner>(std::move(coords));
}

std::unique_ptr<CoordinateLearner> as_vector(ScalarLearnerPtr learner) {
    std::vector<ScalarLearnerPtr> coords;
    coords.push_back(std::move(learner));
    return std::make_unique<CoordinateLearner>(std::move(coords));
}

// ---------------------------------------------------------------------------

SimplexPoint lea_project(std::span<const double> w) {
    if (w.empty()) {
        throw std::invalid_argument("lea_project: empty weight vector");
    }
    double norm = 0.0;
    for (double wi : w) {
        if (!std::isfinite(wi) || wi < 0.0) {
            throw std::invalid_argument("lea_project: weights must be finite and nonnegative");
        }
        norm += wi;
    }
    const auto d = static_cast<double>(w.size());
    const double lift = std::max(0.0, 1.0 - norm) / d;
    const double scale = std::max(norm, 1.0);
    std::vector<double> x(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        x[i] = (w[i] + lift) / scale;
    }
    return SimplexPoint(std::move(x));
}

std::vector<double> lea_surrogate(std::span<const double> g, double l1_norm_w,
                                  SurrogateVariant variant, std::span<const double> x) {
    if (!std::isfinite(l1_norm_w) || l1_norm_w < 0.0) {
        throw std::invalid_argument("lea_surrogate: ||w||_1 must be finite and nonnegative");
    }
    for (double gi : g) {
        if (!std::isfinite(gi)) {
            throw std::invalid_argument("lea_surrogate: non-finite gradient");
        }
    }
    std::vector<double> z(g.begin(), g.end());
    if (l1_norm_w == 1.0 || g.empty()) {
        return z;
    }
    const bool below = l1_norm_w < 1.0;
    double shift = 0.0;
    switch (variant) {
        case SurrogateVariant::paper:
            shift = below ? linf(g) : -linf(g);
            break;
        case SurrogateVariant::maxshift:
            shift = below ? *std::max_element(g.begin(), g.end())
                          : *std::min_element(g.begin(), g.end());
            break;
        case SurrogateVariant::innershift:
            if (below) {
                shift = std::accumulate(g.begin(), g.end(), 0.0);
            } else {
                check_same_size(g, x, "lea_surrogate(innershift)");
                shift = std::inner_product(g.begin(), g.end(), x.begin(), 0.0);
            }
            break;
    }
    for (double& zi : z) {
        zi -= shift;
    }
    return z;
}

double surrogate_lipschitz(SurrogateVariant variant, std::size_t d, double G) {
    if (variant == SurrogateVariant::innershift) {
        // g_i - sum_j g_j = -sum_{j != i} g_j
        return std::max(2.0, static_cast<double>(d) - 1.0) * G;
    }
    return 2.0 * G;
}

LeaLearner::LeaLearner(const SimplexPoint& prior, double G, double lambda,
                       SurrogateVariant variant)
    : prior_(prior), G_(G), lambda_(lambda), variant_(variant) {
    if (!(G > 0.0) || !(lambda >= 0.0)) {
        throw std::invalid_argument("LeaLearner: requires G > 0, lambda >= 0");
    }
    const double base_G = surrogate_lipschitz(variant, prior.size(), G);
    const double base_lambda = 4.0 * lambda;
    coords_.reserve(prior.size());
    for (std::size_t i = 0; i < prior.size(); ++i) {
        const double pi = prior[i];
        if (!(pi > 0.0)) {
            throw std::invalid_argument("LeaLearner: prior must be strictly positive");
        }
        auto base = std::make_unique<PotentialLearner>(
            LearnerConfig::switching(pi, base_G, base_lambda));
        const DomainInterval dom{0.0, std::numeric_limits<double>::infinity(), pi};
        coords_.push_back(std::make_unique<ConstrainedLearner>(std::move(base), dom));
    }
    w_.resize(prior.size());
}

std::vector<double> LeaLearner::do_predict() {
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        w_[i] = coords_[i]->predict();
    }
    x_ = lea_project(w_).weights();
    return x_;
}

void LeaLearner::do_observe(std::span<const double> g) {
    const double norm = std::accumulate(w_.begin(), w_.end(), 0.0);
    z_ = lea_surrogate(g, norm, variant_, x_);
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        coords_[i]->observe(z_[i]);
    }
}

// ---------------------------------------------------------------------------

double f_generator(double x) {
    const double a = std::fabs(x - 1.0);
    return a * std::log1p(a);
}

double total_variation(std::span<const double> u, std::span<const double> p) {
    check_same_size(u, p, "total_variation");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        s += std::fabs(u[i] - p[i]);
    }
    return 0.5 * s;
}

Divergences divergences(std::span<const double> u, std::span<const double> p) {
    check_same_size(u, p, "divergences");
    Divergences out;
    out.tv = total_variation(u, p);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (p[i] <= 0.0) {
            if (u[i] > 0.0) {
                std::ostringstream os;
                os << "divergences: u has mass " << u[i] << " at coordinate " << i
                   << " where p is zero";
                throw std::domain_error(os.str());
            }
            continue;
        }
        if (u[i] > 0.0) {
            out.kl += u[i] * std::log(u[i] / p[i]);
        }
        out.f_div += p[i] * f_generator(u[i] / p[i]);
    }
    return out;
}

}  // namespace adaswitch
