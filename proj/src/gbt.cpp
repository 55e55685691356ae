#include "gbt_internal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pmdep::detail {

namespace {

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;
};

using Tree = std::vector<TreeNode>;

double tree_predict(const Tree& tree, std::span<const double> x) {
    int node = 0;
    while (tree[node].feature >= 0) {
        const TreeNode& nd = tree[node];
        node = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return tree[node].value;
}

struct NodeStats {
    std::size_t count = 0;
    double sum = 0.0;
};

struct SplitChoice {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

// Grows one regression tree on the current residuals. Level-wise exact
// greedy search: per depth level each feature's presorted order is swept
// once, accumulating left-side stats per active node.
Tree grow_tree(const Matrix& x, std::span<const double> resid,
               const std::vector<std::vector<std::size_t>>& order, std::size_t max_depth,
               std::size_t min_leaf) {
    const std::size_t m = x.rows();
    const std::size_t d = x.cols();

    Tree tree;
    std::vector<NodeStats> stats;
    const double total_sum = std::accumulate(resid.begin(), resid.end(), 0.0);
    tree.push_back({-1, 0.0, -1, -1, m ? total_sum / static_cast<double>(m) : 0.0});
    stats.push_back({m, total_sum});

    std::vector<int> node_of(m, 0);
    std::vector<int> active{0};  // splittable nodes at the current level

    for (std::size_t depth = 0; depth < max_depth && !active.empty(); ++depth) {
        const std::size_t n_active = active.size();
        std::vector<int> slot_of(tree.size(), -1);
        for (std::size_t s = 0; s < n_active; ++s) slot_of[active[s]] = static_cast<int>(s);

        std::vector<SplitChoice> best(n_active);

        std::vector<std::size_t> cnt_left(n_active);
        std::vector<double> sum_left(n_active);
        std::vector<double> last_val(n_active);
        std::vector<char> seen(n_active);

        for (std::size_t j = 0; j < d; ++j) {
            std::fill(cnt_left.begin(), cnt_left.end(), 0);
            std::fill(sum_left.begin(), sum_left.end(), 0.0);
            std::fill(seen.begin(), seen.end(), 0);

            for (const std::size_t i : order[j]) {
                const int nd = node_of[i];
                if (nd < 0) continue;
                const int s = slot_of[nd];
                if (s < 0) continue;

                const double v = x(i, j);
                const NodeStats& st = stats[nd];
                if (seen[s] && v > last_val[s] && cnt_left[s] >= min_leaf &&
                    st.count - cnt_left[s] >= min_leaf) {
                    const auto nl = static_cast<double>(cnt_left[s]);
                    const auto nr = static_cast<double>(st.count - cnt_left[s]);
                    const double sl = sum_left[s];
                    const double sr = st.sum - sl;
                    const double gain =
                        sl * sl / nl + sr * sr / nr - st.sum * st.sum / static_cast<double>(st.count);
                    if (gain > best[s].gain) {
                        double thr = last_val[s] + 0.5 * (v - last_val[s]);
                        if (!(thr > last_val[s] && thr < v)) thr = last_val[s];
                        best[s] = {gain, static_cast<int>(j), thr};
                    }
                }
                cnt_left[s] += 1;
                sum_left[s] += resid[i];
                last_val[s] = v;
                seen[s] = 1;
            }
        }

        // Materialize the chosen splits and reassign rows to children.
        std::vector<int> next_active;
        for (std::size_t s = 0; s < n_active; ++s) {
            const int nd = active[s];
            if (best[s].feature < 0 || !(best[s].gain > 1e-12)) continue;
            const int left = static_cast<int>(tree.size());
            const int right = left + 1;
            tree[nd].feature = best[s].feature;
            tree[nd].threshold = best[s].threshold;
            tree[nd].left = left;
            tree[nd].right = right;
            tree.push_back({});
            tree.push_back({});
            stats.push_back({});
            stats.push_back({});
        }

        for (std::size_t i = 0; i < m; ++i) {
            const int nd = node_of[i];
            if (nd < 0 || static_cast<std::size_t>(nd) >= slot_of.size() || slot_of[nd] < 0)
                continue;
            if (tree[nd].feature < 0) {
                node_of[i] = -1;  // settled leaf
                continue;
            }
            const int child = x(i, static_cast<std::size_t>(tree[nd].feature)) <= tree[nd].threshold
                                  ? tree[nd].left
                                  : tree[nd].right;
            node_of[i] = child;
            stats[child].count += 1;
            stats[child].sum += resid[i];
        }

        for (std::size_t s = 0; s < n_active; ++s) {
            const int nd = active[s];
            if (tree[nd].feature < 0) continue;
            for (const int child : {tree[nd].left, tree[nd].right}) {
                tree[child].value = stats[child].sum / static_cast<double>(stats[child].count);
                if (depth + 1 < max_depth && stats[child].count >= 2 * min_leaf)
                    next_active.push_back(child);
            }
        }
        active = std::move(next_active);
    }

    return tree;
}

} // namespace

struct GbtPredictorImpl final : Predictor {
    double base = 0.0;
    std::vector<Tree> trees;  // leaf values already scaled by eta
    std::vector<double> mse_path;

    double predict(std::span<const double> x) const override {
        double out = base;
        for (const Tree& t : trees) out += tree_predict(t, x);
        return out;
    }
};

std::shared_ptr<const Predictor> fit_gbt(const GbtSpec& spec, const Matrix& features,
                                         std::span<const double> targets) {
    const std::size_t m = features.rows();
    const std::size_t d = features.cols();

    auto model = std::make_shared<GbtPredictorImpl>();
    model->base =
        std::accumulate(targets.begin(), targets.end(), 0.0) / static_cast<double>(m);

    std::vector<double> resid(m);
    for (std::size_t i = 0; i < m; ++i) resid[i] = targets[i] - model->base;

    auto mse = [&] {
        double s = 0.0;
        for (double r : resid) s += r * r;
        return s / static_cast<double>(m);
    };
    model->mse_path.push_back(mse());

    // Feature orders are shared by every round.
    std::vector<std::vector<std::size_t>> order(d);
    for (std::size_t j = 0; j < d; ++j) {
        order[j].resize(m);
        std::iota(order[j].begin(), order[j].end(), std::size_t{0});
        std::stable_sort(order[j].begin(), order[j].end(),
                         [&](std::size_t a, std::size_t b) { return features(a, j) < features(b, j); });
    }

    model->trees.reserve(spec.nrounds);
    for (std::size_t round = 0; round < spec.nrounds; ++round) {
        Tree tree = grow_tree(features, resid, order, spec.max_depth, spec.min_leaf);
        for (TreeNode& nd : tree)
            if (nd.feature < 0) nd.value *= spec.eta;
        for (std::size_t i = 0; i < m; ++i) resid[i] -= tree_predict(tree, features.row(i));
        model->trees.push_back(std::move(tree));
        model->mse_path.push_back(mse());
    }
    return model;
}

const std::vector<double>* gbt_mse_path(const Predictor& p) {
    if (const auto* g = dynamic_cast<const GbtPredictorImpl*>(&p)) return &g->mse_path;
    return nullptr;
}

} // namespace pmdep::detail
