#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "pmdep/matrix.hpp"

namespace pmdep {

// Ridge regression with an unpenalized intercept. When ridge_lambda is
// unset the fit uses 1e-6 * trace(G'G)/d to stabilize near-singular
// designs; lambda = 0 requests the exact least-squares solution.
struct LinearSpec {
    std::optional<double> ridge_lambda;
};

// k-nearest-neighbor mean in unscaled Euclidean distance.
struct KnnSpec {
    std::size_t k = 5;
};

// Squared-loss gradient boosted trees: F0 = mean(targets), then nrounds
// regression trees fit to the running residuals, each scaled by eta.
// Trees are grown greedily by variance-reduction splits, exact enumeration
// over sorted feature values.
struct GbtSpec {
    double eta = 0.1;
    std::size_t nrounds = 200;
    std::size_t max_depth = 6;
    std::size_t min_leaf = 5;
};

// Oracle regressor: predictions come from the supplied function and ignore
// the training data entirely. Used to test the inferential layer without
// estimation noise.
struct FixedSpec {
    std::function<double(std::span<const double>)> f;
};

using RegressorSpec = std::variant<LinearSpec, KnnSpec, GbtSpec, FixedSpec>;

class Predictor {
public:
    virtual ~Predictor() = default;
    virtual double predict(std::span<const double> features) const = 0;
};

// Immutable conditional-mean predictor. Cheap to copy and safe to share
// across threads.
class FittedModel {
public:
    FittedModel() = default;
    FittedModel(std::shared_ptr<const Predictor> impl, std::size_t dim, RegressorSpec spec)
        : impl_(std::move(impl)), dim_(dim), spec_(std::move(spec)) {}

    double predict(std::span<const double> features) const;
    std::size_t dim() const { return dim_; }
    const RegressorSpec& spec() const { return spec_; }
    const Predictor* impl() const { return impl_.get(); }

private:
    std::shared_ptr<const Predictor> impl_;
    std::size_t dim_ = 0;
    RegressorSpec spec_;
};

// Fits spec on (features, targets). features has one row per observation.
// d = 0 is permitted only for the linear kind (intercept-only fit) and for
// fixed, which ignores the data.
FittedModel fit(const RegressorSpec& spec, const Matrix& features,
                std::span<const double> targets);

std::vector<double> predict_all(const FittedModel& model, const Matrix& features);

// Per-round mean squared training residual of a GBT fit, starting at the
// F0 baseline. Empty for other kinds.
std::vector<double> gbt_training_mse(const FittedModel& model);

// Ranks feature columns by empirical distance correlation with the targets
// and returns the indices of the min(keep, d) largest values, descending,
// ties broken by lower index. dCor is 0 by convention when either distance
// variance vanishes.
std::vector<std::size_t> screen_features(const Matrix& features,
                                         std::span<const double> targets,
                                         std::size_t keep);

} // namespace pmdep
