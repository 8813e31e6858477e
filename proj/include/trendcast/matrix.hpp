#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "trendcast/features.hpp"

namespace trendcast::models {

/// Dense row-major matrix of feature values.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

/// Extracts the named columns from a feature table. Throws ValidationError naming a missing feature.
Matrix design_matrix(const features::FeatureTable& table, const std::vector<std::string>& names);

/// Throws ValidationError unless the table's feature names are exactly the expected set.
void check_schema(const features::FeatureSchema& expected, const features::FeatureSchema& actual);

}  // namespace trendcast::models
