// validation.hpp — supervised check that the tiers are recoverable from the
// engineered features: bagged CART trees with out-of-bag accuracy.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wastesig/types.hpp"

namespace wastesig {

using Matrix = std::vector<std::vector<double>>;

struct ForestParams {
    int n_trees = 25;
    int max_depth = 8;
    int min_leaf = 1;
    // Features considered per split; 0 means all (plain bagging). With a
    // handful of features, per-split subsampling adds variance without value.
    int feature_subsample = 0;
    std::uint64_t seed = 42;
};

struct TreeNode {
    int feature = -1;        // -1 marks a leaf
    double threshold = 0.0;  // go left when x[feature] <= threshold
    int left = -1;
    int right = -1;
    int leaf_class = -1;
    std::vector<int> class_counts;  // leaf sample distribution
};

struct Tree {
    std::vector<TreeNode> nodes;  // node 0 is the root
};

struct Forest {
    std::vector<Tree> trees;
    std::vector<std::string> class_names;  // sorted; vote ties break to lowest index
    ForestParams params;
    double oob_accuracy = 0.0;
    std::size_t oob_evaluated = 0;  // samples that were out-of-bag at least once
    double training_accuracy = 0.0;
    bool single_class = false;
};

// Bagged CART ensemble (Gini impurity, axis-aligned splits, midpoint
// thresholds between sorted distinct values). Bootstrap indices are drawn
// from the seeded generator over positions after a canonical sort by
// row_keys, so permuting the input rows does not change the model.
// Majority vote; ties go to the lexicographically smallest class name.
Forest fit_forest(const Matrix& X, const std::vector<std::string>& labels,
                  const std::vector<std::string>& row_keys, const ForestParams& params);

std::string predict(const Forest& forest, const std::vector<double>& x);

struct Evaluation {
    double accuracy = 0.0;
    std::vector<std::vector<int>> confusion;  // rows = true, cols = predicted
    std::vector<std::string> class_names;
};

Evaluation evaluate(const Forest& forest, const Matrix& X,
                    const std::vector<std::string>& labels);

}  // namespace wastesig
