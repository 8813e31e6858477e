#include "trendcast/matrix.hpp"

#include <algorithm>

#include "trendcast/error.hpp"

namespace trendcast::models {

Matrix design_matrix(const features::FeatureTable& table, const std::vector<std::string>& names) {
    std::vector<std::size_t> cols;
    cols.reserve(names.size());
    for (const auto& name : names) {
        auto idx = table.schema.index_of(name);
        if (!idx) throw ValidationError("missing feature '" + name + "'");
        cols.push_back(*idx);
    }
    Matrix m(table.rows.size(), names.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& values = table.rows[r].values;
        if (values.size() != table.schema.names.size()) {
            throw ValidationError("row " + std::to_string(r) + " has " + std::to_string(values.size()) +
                                  " values for a schema of " + std::to_string(table.schema.names.size()));
        }
        for (std::size_t c = 0; c < cols.size(); ++c) m(r, c) = values[cols[c]];
    }
    return m;
}

void check_schema(const features::FeatureSchema& expected, const features::FeatureSchema& actual) {
    for (const auto& name : expected.names) {
        if (!actual.index_of(name)) throw ValidationError("schema mismatch: missing feature '" + name + "'");
    }
    for (const auto& name : actual.names) {
        if (!expected.index_of(name)) throw ValidationError("schema mismatch: extra feature '" + name + "'");
    }
}

}  // namespace trendcast::models
