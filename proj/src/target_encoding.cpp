#include "trendcast/target_encoding.hpp"

#include <algorithm>
#include <numeric>

#include "trendcast/error.hpp"

namespace trendcast::models {

double TargetEncoding::encode(const std::string& topic_id) const {
    auto it = table.find(topic_id);
    return it == table.end() ? prior_mean : it->second;
}

OrderedEncoding target_encode(std::span<const std::string> topics, std::span<const int> base_years,
                              std::span<const double> targets, double smoothing) {
    if (!(smoothing > 0.0)) throw ValidationError("target encoding smoothing must be positive");
    const std::size_t n = topics.size();
    if (base_years.size() != n || targets.size() != n) throw ValidationError("target encoding: length mismatch");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (base_years[a] != base_years[b]) return base_years[a] < base_years[b];
        return topics[a] < topics[b];
    });

    OrderedEncoding out;
    out.encoded.resize(n);
    std::map<std::string, std::pair<double, double>> seen;  // topic -> (sum, count)
    double global_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t i = order[k];
        const double prior = k == 0 ? 0.0 : global_sum / static_cast<double>(k);
        auto& [sum, count] = seen[topics[i]];
        out.encoded[i] = (sum + prior * smoothing) / (count + smoothing);
        sum += targets[i];
        count += 1.0;
        global_sum += targets[i];
    }

    out.encoding.smoothing = smoothing;
    out.encoding.prior_mean = n == 0 ? 0.0 : global_sum / static_cast<double>(n);
    for (const auto& [topic, sc] : seen) {
        out.encoding.table[topic] = (sc.first + out.encoding.prior_mean * smoothing) / (sc.second + smoothing);
    }
    return out;
}

}  // namespace trendcast::models
