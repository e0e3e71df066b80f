#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adaswitch/scalar_learners.hpp"

namespace adaswitch {

/// A point of the probability simplex. Weights are validated nonnegative and
/// renormalized to sum to one on construction.
class SimplexPoint {
public:
    explicit SimplexPoint(std::vector<double> weights);

    static SimplexPoint uniform(std::size_t d);
    static SimplexPoint vertex(std::size_t d, std::size_t i);

    std::size_t size() const { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }
    std::span<const double> span() const { return weights_; }

private:
    std::vector<double> weights_;
};

/// d-dimensional online linear optimizer with the same lifecycle contract as
/// ScalarLearner. observe() checks the dimension and ||g||_inf <= lipschitz().
class VectorLearner {
public:
    virtual ~VectorLearner() = default;

    std::vector<double> predict();
    void observe(std::span<const double> g);

    virtual std::size_t dim() const = 0;
    virtual double lipschitz() const = 0;

protected:
    virtual std::vector<double> do_predict() = 0;
    virtual void do_observe(std::span<const double> g) = 0;

private:
    Alternation phase_;
};

using VectorLearnerPtr = std::unique_ptr<VectorLearner>;

/// Independent scalar learners, one per coordinate.
class CoordinateLearner final : public VectorLearner {
public:
    explicit CoordinateLearner(std::vector<ScalarLearnerPtr> coords);

    std::size_t dim() const override { return coords_.size(); }
    double lipschitz() const override { return lipschitz_; }
    const ScalarLearner& coordinate(std::size_t i) const { return *coords_[i]; }

protected:
    std::vector<double> do_predict() override;
    void do_observe(std::span<const double> g) override;

private:
    std::vector<ScalarLearnerPtr> coords_;
    double lipschitz_;
};

/// d copies of the potential learner, each with hyperparameter C / d and
/// alpha = 4 lambda / G + 2.
std::unique_ptr<CoordinateLearner> make_coordinate_olo(std::size_t d, double C, double G,
                                                       double lambda);

/// Coordinate-wise coin-betting baseline, each copy with hyperparameter C / d.
std::unique_ptr<CoordinateLearner> make_coordinate_baseline(std::size_t d, double C, double G,
                                                            double lambda);

/// Wraps any scalar learner as a one-dimensional vector learner.
std::unique_ptr<CoordinateLearner> as_vector(ScalarLearnerPtr learner);

/// L1 projection of a nonnegative weight vector onto the simplex: the uniform
/// lift w + (1 - ||w||_1) / d when ||w||_1 <= 1, and w / ||w||_1 otherwise.
SimplexPoint lea_project(std::span<const double> w);

enum class SurrogateVariant {
    paper,       ///< g -/+ ||g||_inf
    maxshift,    ///< g - max g  /  g - min g
    innershift,  ///< g - sum g  /  g - <g, x>
};

/// Surrogate loss for the coordinate learners, selected by whether ||w||_1
/// is below, at, or above one. `innershift` additionally needs the current
/// prediction x when ||w||_1 > 1.
std::vector<double> lea_surrogate(std::span<const double> g, double l1_norm_w,
                                  SurrogateVariant variant,
                                  std::span<const double> x = {});

/// Largest |z_i| the surrogate can produce for ||g||_inf <= G in dimension d.
double surrogate_lipschitz(SurrogateVariant variant, std::size_t d, double G);

/// Experts learner on the simplex built from constrained potential learners
/// on [0, inf) with offset and hyperparameter pi_i, switching weight 4 lambda
/// and Lipschitz constant 2G (alpha = 8 lambda / G + 2).
class LeaLearner final : public VectorLearner {
public:
    LeaLearner(const SimplexPoint& prior, double G, double lambda,
               SurrogateVariant variant = SurrogateVariant::paper);

    std::size_t dim() const override { return coords_.size(); }
    double lipschitz() const override { return G_; }

    const SimplexPoint& prior() const { return prior_; }
    /// Base outputs w_t behind the most recent prediction.
    const std::vector<double>& last_weights() const { return w_; }
    /// Surrogate losses sent to the bases in the most recent observe.
    const std::vector<double>& last_surrogate() const { return z_; }

protected:
    std::vector<double> do_predict() override;
    void do_observe(std::span<const double> g) override;

private:
    SimplexPoint prior_;
    double G_;
    double lambda_;
    SurrogateVariant variant_;
    std::vector<std::unique_ptr<ConstrainedLearner>> coords_;
    std::vector<double> w_;
    std::vector<double> x_;
    std::vector<double> z_;
};

struct Divergences {
    double tv = 0.0;
    double kl = 0.0;
    double f_div = 0.0;
};

/// |x - 1| log(1 + |x - 1|)
double f_generator(double x);

/// 1/2 sum |u_i - p_i|; defined for any pair of equal-length vectors.
double total_variation(std::span<const double> u, std::span<const double> p);

/// TV, KL and the f-divergence with f_generator. Throws std::domain_error if
/// u puts mass where p has none.
Divergences divergences(std::span<const double> u, std::span<const double> p);

}  // namespace adaswitch
