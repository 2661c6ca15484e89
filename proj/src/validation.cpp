#include "wastesig/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "wastesig/rng.hpp"

namespace wastesig {

namespace {

struct SplitChoice {
    int feature = -1;
    double threshold = 0.0;
    double impurity = std::numeric_limits<double>::infinity();
};

double gini(const std::vector<int>& counts, int total) {
    if (total == 0) return 0.0;
    double g = 1.0;
    for (const int c : counts) {
        const double p = static_cast<double>(c) / total;
        g -= p * p;
    }
    return g;
}

class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, const std::vector<int>& y, std::size_t n_classes,
                const ForestParams& params, Rng& rng)
        : x_(x), y_(y), n_classes_(n_classes), params_(params), rng_(rng) {}

    Tree build(const std::vector<std::size_t>& sample) {
        tree_.nodes.clear();
        grow(sample, 0);
        return std::move(tree_);
    }

private:
    int grow(const std::vector<std::size_t>& sample, int depth) {
        std::vector<int> counts(n_classes_, 0);
        for (const std::size_t i : sample) ++counts[static_cast<std::size_t>(y_[i])];

        const int node_id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();

        const bool pure = std::count_if(counts.begin(), counts.end(),
                                        [](int c) { return c > 0; }) <= 1;
        SplitChoice split;
        if (!pure && depth < params_.max_depth &&
            sample.size() >= static_cast<std::size_t>(2 * params_.min_leaf))
            split = best_split(sample, counts);

        if (split.feature < 0) {
            auto& leaf = tree_.nodes[static_cast<std::size_t>(node_id)];
            leaf.class_counts = counts;
            leaf.leaf_class = static_cast<int>(
                std::max_element(counts.begin(), counts.end()) - counts.begin());
            return node_id;
        }

        std::vector<std::size_t> left, right;
        for (const std::size_t i : sample) {
            if (x_[i][static_cast<std::size_t>(split.feature)] <= split.threshold)
                left.push_back(i);
            else
                right.push_back(i);
        }
        const int left_id = grow(left, depth + 1);
        const int right_id = grow(right, depth + 1);
        auto& node = tree_.nodes[static_cast<std::size_t>(node_id)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = left_id;
        node.right = right_id;
        return node_id;
    }

    SplitChoice best_split(const std::vector<std::size_t>& sample,
                           const std::vector<int>& total_counts) {
        const std::size_t d = x_[0].size();
        std::vector<int> feature_order(d);
        std::iota(feature_order.begin(), feature_order.end(), 0);
        if (params_.feature_subsample > 0 &&
            static_cast<std::size_t>(params_.feature_subsample) < d) {
            // Partial Fisher-Yates from the seeded stream.
            for (int j = 0; j < params_.feature_subsample; ++j) {
                const std::size_t pick =
                    static_cast<std::size_t>(j) +
                    rng_.below(d - static_cast<std::size_t>(j));
                std::swap(feature_order[static_cast<std::size_t>(j)], feature_order[pick]);
            }
            feature_order.resize(static_cast<std::size_t>(params_.feature_subsample));
            std::sort(feature_order.begin(), feature_order.end());
        }

        const int total = static_cast<int>(sample.size());
        SplitChoice best;

        std::vector<std::pair<double, int>> ordered(sample.size());
        for (const int f : feature_order) {
            for (std::size_t i = 0; i < sample.size(); ++i)
                ordered[i] = {x_[sample[i]][static_cast<std::size_t>(f)],
                              y_[sample[i]]};
            std::sort(ordered.begin(), ordered.end());
            if (ordered.front().first == ordered.back().first) continue;  // constant feature

            std::vector<int> left_counts(n_classes_, 0);
            int left_total = 0;
            for (std::size_t i = 0; i + 1 < ordered.size(); ++i) {
                ++left_counts[static_cast<std::size_t>(ordered[i].second)];
                ++left_total;
                if (ordered[i].first == ordered[i + 1].first) continue;
                const int right_total = total - left_total;
                if (left_total < params_.min_leaf || right_total < params_.min_leaf) continue;

                std::vector<int> right_counts(n_classes_);
                for (std::size_t c = 0; c < n_classes_; ++c)
                    right_counts[c] = total_counts[c] - left_counts[c];
                const double impurity =
                    (left_total * gini(left_counts, left_total) +
                     right_total * gini(right_counts, right_total)) /
                    total;
                const double threshold = ordered[i].first +
                                         0.5 * (ordered[i + 1].first - ordered[i].first);
                if (impurity < best.impurity) {  // ties keep lowest feature, lowest threshold
                    best.impurity = impurity;
                    best.feature = f;
                    best.threshold = threshold;
                }
            }
        }
        return best;
    }

    const Matrix& x_;
    const std::vector<int>& y_;
    std::size_t n_classes_;
    const ForestParams& params_;
    Rng& rng_;
    Tree tree_;
};

int predict_tree(const Tree& tree, const std::vector<double>& x) {
    int node = 0;
    while (tree.nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const auto& n = tree.nodes[static_cast<std::size_t>(node)];
        node = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return tree.nodes[static_cast<std::size_t>(node)].leaf_class;
}

int majority_vote(const std::vector<int>& votes) {
    // Ties go to the lowest class index, i.e. the lexicographically smallest
    // name since class_names are sorted.
    int best = 0;
    for (std::size_t c = 1; c < votes.size(); ++c)
        if (votes[c] > votes[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
    return best;
}

}  // namespace

Forest fit_forest(const Matrix& X, const std::vector<std::string>& labels,
                  const std::vector<std::string>& row_keys, const ForestParams& params) {
    if (X.size() != labels.size() || X.size() != row_keys.size())
        throw std::invalid_argument("fit_forest: size mismatch");
    if (X.size() < 4) throw std::invalid_argument("fit_forest: need at least 4 samples");
    if (params.n_trees < 1 || params.max_depth < 1 || params.min_leaf < 1)
        throw std::invalid_argument("fit_forest: invalid parameters");

    Forest forest;
    forest.params = params;
    forest.class_names = labels;
    std::sort(forest.class_names.begin(), forest.class_names.end());
    forest.class_names.erase(
        std::unique(forest.class_names.begin(), forest.class_names.end()),
        forest.class_names.end());
    forest.single_class = forest.class_names.size() < 2;

    // Canonical order: bootstrap positions refer to rows sorted by key, so
    // the model is invariant to input row permutation.
    std::vector<std::size_t> order(X.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (row_keys[a] != row_keys[b]) return row_keys[a] < row_keys[b];
        return a < b;
    });

    Matrix xs(X.size());
    std::vector<int> ys(X.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        xs[i] = X[order[i]];
        const auto it = std::lower_bound(forest.class_names.begin(), forest.class_names.end(),
                                         labels[order[i]]);
        ys[i] = static_cast<int>(it - forest.class_names.begin());
    }

    const std::size_t n = xs.size();
    Rng rng(params.seed);
    std::vector<std::vector<int>> oob_votes(n,
                                            std::vector<int>(forest.class_names.size(), 0));
    std::vector<bool> in_bag(n);

    for (int t = 0; t < params.n_trees; ++t) {
        std::fill(in_bag.begin(), in_bag.end(), false);
        std::vector<std::size_t> sample(n);
        for (std::size_t i = 0; i < n; ++i) {
            sample[i] = rng.below(n);
            in_bag[sample[i]] = true;
        }
        TreeBuilder builder(xs, ys, forest.class_names.size(), params, rng);
        forest.trees.push_back(builder.build(sample));

        for (std::size_t i = 0; i < n; ++i)
            if (!in_bag[i])
                ++oob_votes[i][static_cast<std::size_t>(
                    predict_tree(forest.trees.back(), xs[i]))];
    }

    std::size_t oob_correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const bool seen = std::any_of(oob_votes[i].begin(), oob_votes[i].end(),
                                      [](int v) { return v > 0; });
        if (!seen) continue;
        ++forest.oob_evaluated;
        if (majority_vote(oob_votes[i]) == ys[i]) ++oob_correct;
    }
    forest.oob_accuracy = forest.oob_evaluated
                              ? static_cast<double>(oob_correct) / forest.oob_evaluated
                              : 0.0;

    std::size_t train_correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> votes(forest.class_names.size(), 0);
        for (const auto& tree : forest.trees)
            ++votes[static_cast<std::size_t>(predict_tree(tree, xs[i]))];
        if (majority_vote(votes) == ys[i]) ++train_correct;
    }
    forest.training_accuracy = static_cast<double>(train_correct) / n;
    return forest;
}

std::string predict(const Forest& forest, const std::vector<double>& x) {
    std::vector<int> votes(forest.class_names.size(), 0);
    for (const auto& tree : forest.trees)
        ++votes[static_cast<std::size_t>(predict_tree(tree, x))];
    return forest.class_names[static_cast<std::size_t>(majority_vote(votes))];
}

Evaluation evaluate(const Forest& forest, const Matrix& X,
                    const std::vector<std::string>& labels) {
    if (X.size() != labels.size()) throw std::invalid_argument("evaluate: size mismatch");
    Evaluation ev;
    ev.class_names = forest.class_names;
    // True labels outside the training classes get their own rows.
    for (const auto& label : labels)
        if (!std::binary_search(ev.class_names.begin(), ev.class_names.end(), label)) {
            ev.class_names.push_back(label);
            std::sort(ev.class_names.begin(), ev.class_names.end());
        }
    ev.class_names.erase(std::unique(ev.class_names.begin(), ev.class_names.end()),
                         ev.class_names.end());

    const std::size_t m = ev.class_names.size();
    ev.confusion.assign(m, std::vector<int>(m, 0));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        const std::string predicted = predict(forest, X[i]);
        const auto row = static_cast<std::size_t>(
            std::lower_bound(ev.class_names.begin(), ev.class_names.end(), labels[i]) -
            ev.class_names.begin());
        const auto col = static_cast<std::size_t>(
            std::lower_bound(ev.class_names.begin(), ev.class_names.end(), predicted) -
            ev.class_names.begin());
        ++ev.confusion[row][col];
        if (labels[i] == predicted) ++correct;
    }
    ev.accuracy = X.empty() ? 0.0 : static_cast<double>(correct) / X.size();
    return ev;
}

}  // namespace wastesig
