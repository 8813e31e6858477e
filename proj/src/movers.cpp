#include "trendcast/movers.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "trendcast/csv.hpp"

namespace trendcast::evaluation {

MoversReport rank_movers(std::vector<MoverEntry> forecasts, int base_year) {
    std::sort(forecasts.begin(), forecasts.end(), [](const MoverEntry& a, const MoverEntry& b) {
        const double ma = std::abs(a.predicted_pct), mb = std::abs(b.predicted_pct);
        if (ma != mb) return ma > mb;
        return a.topic_id < b.topic_id;
    });
    MoversReport report;
    report.base_year = base_year;
    for (const auto& f : forecasts) {
        const bool predicted_up = f.predicted_pct > 0.0;
        (predicted_up ? report.up : report.down).push_back(f);
        if (!std::isnan(f.recent_pct) && (f.recent_pct > 0.0) != predicted_up) report.reversals.push_back(f);
    }
    return report;
}

void write_movers_csv(const MoversReport& report, std::ostream& out) {
    out << "section,rank,topic,recent_pct,predicted_pct\n";
    auto section = [&](const char* name, const std::vector<MoverEntry>& entries) {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            out << name << ',' << i + 1 << ',' << csv::quote(entries[i].topic_id) << ','
                << csv::format_double(entries[i].recent_pct) << ',' << csv::format_double(entries[i].predicted_pct)
                << '\n';
        }
    };
    section("up", report.up);
    section("down", report.down);
    section("reversal", report.reversals);
}

}  // namespace trendcast::evaluation
