#include "pmdep/regress.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "gbt_internal.hpp"
#include "pmdep/errors.hpp"

namespace pmdep {

namespace {

void check_training_data(const Matrix& features, std::span<const double> targets) {
    if (features.rows() != targets.size())
        throw input_error("fit: feature rows and target length differ");
    if (targets.size() < 2) throw input_error("fit: need at least 2 training rows");
    for (double t : targets)
        if (!std::isfinite(t)) throw input_error("fit: non-finite target");
    for (double v : features.data())
        if (!std::isfinite(v)) throw input_error("fit: non-finite feature value");
}

struct LinearPredictor final : Predictor {
    double intercept = 0.0;
    std::vector<double> coef;

    double predict(std::span<const double> x) const override {
        double out = intercept;
        for (std::size_t j = 0; j < coef.size(); ++j) out += coef[j] * x[j];
        return out;
    }
};

std::shared_ptr<const Predictor> fit_linear(const LinearSpec& spec, const Matrix& g,
                                            std::span<const double> targets) {
    const auto m = static_cast<Eigen::Index>(g.rows());
    const auto d = static_cast<Eigen::Index>(g.cols());
    auto model = std::make_shared<LinearPredictor>();

    if (d == 0) {
        model->intercept =
            std::accumulate(targets.begin(), targets.end(), 0.0) / static_cast<double>(m);
        return model;
    }

    Eigen::MatrixXd design(m, d + 1);
    design.col(0).setOnes();
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < d; ++j) design(i, j + 1) = g(i, j);
    Eigen::Map<const Eigen::VectorXd> t(targets.data(), m);

    double lambda;
    if (spec.ridge_lambda) {
        lambda = *spec.ridge_lambda;
        if (lambda < 0.0) throw input_error("linear: ridge_lambda must be nonnegative");
    } else {
        const double trace = design.rightCols(d).squaredNorm();
        lambda = 1e-6 * trace / static_cast<double>(d);
    }

    Eigen::MatrixXd normal = design.transpose() * design;
    normal.diagonal().tail(d).array() += lambda;  // intercept unpenalized
    const Eigen::VectorXd beta = normal.ldlt().solve(design.transpose() * t);

    model->intercept = beta(0);
    model->coef.assign(beta.data() + 1, beta.data() + 1 + d);
    return model;
}

struct KnnPredictor final : Predictor {
    Matrix train_x;
    std::vector<double> train_y;
    std::size_t k = 1;

    double predict(std::span<const double> x) const override {
        const std::size_t m = train_x.rows();
        std::vector<std::pair<double, std::size_t>> dist(m);
        for (std::size_t i = 0; i < m; ++i) {
            double d2 = 0.0;
            const auto row = train_x.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) {
                const double diff = row[j] - x[j];
                d2 += diff * diff;
            }
            dist[i] = {d2, i};
        }
        // Ties resolve to the lower training index.
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
        double sum = 0.0;
        for (std::size_t i = 0; i < k; ++i) sum += train_y[dist[i].second];
        return sum / static_cast<double>(k);
    }
};

struct FixedPredictor final : Predictor {
    std::function<double(std::span<const double>)> f;
    double predict(std::span<const double> x) const override { return f(x); }
};

// Pairwise-distance matrix double-centered in place:
// A_ij - rowmean_i - colmean_j + grandmean.
void double_center(std::vector<double>& a, std::size_t m) {
    std::vector<double> row_mean(m, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += a[i * m + j];
        row_mean[i] = s / static_cast<double>(m);
        grand += s;
    }
    grand /= static_cast<double>(m) * static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) a[i * m + j] += grand - row_mean[i] - row_mean[j];
}

double mean_product(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s / static_cast<double>(a.size());
}

} // namespace

double FittedModel::predict(std::span<const double> features) const {
    if (!impl_) throw input_error("predict: model is empty");
    if (features.size() != dim_)
        throw input_error("predict: feature dimension " + std::to_string(features.size()) +
                          " does not match model dimension " + std::to_string(dim_));
    return impl_->predict(features);
}

FittedModel fit(const RegressorSpec& spec, const Matrix& features,
                std::span<const double> targets) {
    check_training_data(features, targets);
    const std::size_t d = features.cols();

    std::shared_ptr<const Predictor> impl = std::visit(
        [&](const auto& s) -> std::shared_ptr<const Predictor> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, LinearSpec>) {
                return fit_linear(s, features, targets);
            } else if constexpr (std::is_same_v<T, KnnSpec>) {
                if (d == 0) throw input_error("knn: needs at least one feature");
                if (s.k < 1 || s.k > targets.size())
                    throw input_error("knn: k must lie in [1, m]");
                auto model = std::make_shared<KnnPredictor>();
                model->train_x = features;
                model->train_y.assign(targets.begin(), targets.end());
                model->k = s.k;
                return model;
            } else if constexpr (std::is_same_v<T, GbtSpec>) {
                if (d == 0) throw input_error("gbt: needs at least one feature");
                if (!(s.eta > 0.0 && s.eta <= 1.0))
                    throw input_error("gbt: eta must lie in (0,1]");
                if (s.min_leaf < 1) throw input_error("gbt: min_leaf must be positive");
                return detail::fit_gbt(s, features, targets);
            } else {
                if (!s.f) throw input_error("fixed: no function supplied");
                auto model = std::make_shared<FixedPredictor>();
                model->f = s.f;
                return model;
            }
        },
        spec);

    return FittedModel(std::move(impl), d, spec);
}

std::vector<double> predict_all(const FittedModel& model, const Matrix& features) {
    if (features.rows() > 0 && features.cols() != model.dim())
        throw input_error("predict_all: feature dimension mismatch");
    std::vector<double> out(features.rows());
    for (std::size_t i = 0; i < features.rows(); ++i) out[i] = model.predict(features.row(i));
    return out;
}

std::vector<double> gbt_training_mse(const FittedModel& model) {
    if (model.impl() == nullptr) return {};
    const std::vector<double>* path = detail::gbt_mse_path(*model.impl());
    return path ? *path : std::vector<double>{};
}

std::vector<std::size_t> screen_features(const Matrix& features,
                                         std::span<const double> targets,
                                         std::size_t keep) {
    const std::size_t m = features.rows();
    const std::size_t d = features.cols();
    if (m != targets.size()) throw input_error("screen_features: row/target length mismatch");
    if (m < 4) throw input_error("screen_features: need at least 4 rows");
    if (keep < 1) throw input_error("screen_features: keep must be positive");

    std::vector<double> b(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) b[i * m + j] = std::abs(targets[i] - targets[j]);
    double_center(b, m);
    const double dvar_y = std::sqrt(std::max(0.0, mean_product(b, b)));

    std::vector<std::pair<double, std::size_t>> ranked(d);
    std::vector<double> a(m * m);
    for (std::size_t col = 0; col < d; ++col) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                a[i * m + j] = std::abs(features(i, col) - features(j, col));
        double_center(a, m);
        const double dvar_x = std::sqrt(std::max(0.0, mean_product(a, a)));

        double dcor = 0.0;
        if (dvar_x > 0.0 && dvar_y > 0.0) {
            const double dcov2 = std::max(0.0, mean_product(a, b));
            dcor = std::sqrt(dcov2 / (dvar_x * dvar_y));
        }
        ranked[col] = {dcor, col};
    }

    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& lhs, const auto& rhs) {
        return lhs.first > rhs.first;
    });

    const std::size_t take = std::min(keep, d);
    std::vector<std::size_t> out(take);
    for (std::size_t i = 0; i < take; ++i) out[i] = ranked[i].second;
    return out;
}

} // namespace pmdep
