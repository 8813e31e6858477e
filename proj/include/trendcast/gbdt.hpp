#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trendcast/features.hpp"
#include "trendcast/target_encoding.hpp"

namespace trendcast::models {

struct TrainParams {
    int rounds = 500;
    int max_depth = 6;
    double learning_rate = 0.05;
    int min_samples_leaf = 20;
    std::uint64_t seed = 42;
    double encoding_smoothing = 1.0;

    void validate() const;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    bool missing_left = true;
    int left = -1;
    int right = -1;
    double value = 0.0;  // mean residual of the training rows that reached the node

    bool is_leaf() const { return feature < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    /// Routes x <= threshold left; missing values follow the recorded direction.
    int leaf_index(std::span<const double> x) const;
    double predict(std::span<const double> x) const { return nodes[static_cast<std::size_t>(leaf_index(x))].value; }
    int depth() const;
};

/// Name of the ordered target-encoded topic column appended after the schema features.
inline constexpr const char* kTopicEncodingFeature = "topic";

struct GbdtModel {
    features::FeatureSchema schema;
    bool encode_topic = true;
    TargetEncoding encoding;
    double initial_prediction = 0.0;
    double learning_rate = 0.05;
    TrainParams params;
    std::vector<Tree> trees;
    /// Training MSE after the initial constant (index 0) and after each round.
    std::vector<double> train_mse;

    /// Schema features followed by the topic encoding column when enabled.
    std::vector<std::string> input_names() const;
    /// F0 plus the shrunken leaf outputs of every tree, accumulated in tree order.
    double predict_row(std::span<const double> x) const;
};

/// Least-squares boosting over exact greedy splits. Topic ids enter through ordered target encoding.
GbdtModel fit_gbdt(const features::FeatureTable& table, std::span<const double> targets,
                   const TrainParams& params = {}, bool encode_topic = true);

/// Feature matrix in input_names() order, including the inference-time topic encoding.
std::vector<std::vector<double>> gbdt_inputs(const GbdtModel& model, const features::FeatureTable& table);

std::vector<double> predict(const GbdtModel& model, const features::FeatureTable& table);

}  // namespace trendcast::models
