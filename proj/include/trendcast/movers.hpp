#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trendcast::evaluation {

struct MoverEntry {
    std::string topic_id;
    double recent_pct = 0.0;     // trailing one-year change into the base year; NaN if undefined
    double predicted_pct = 0.0;  // predicted change from the base year to base year + horizon
};

struct MoversReport {
    int base_year = 0;
    std::vector<MoverEntry> up;         // predicted_pct > 0
    std::vector<MoverEntry> down;       // predicted_pct <= 0
    std::vector<MoverEntry> reversals;  // predicted direction differs from the trailing one
};

/// Each section sorted by |predicted_pct| descending, ties by topic_id.
MoversReport rank_movers(std::vector<MoverEntry> forecasts, int base_year);

/// section,rank,topic,recent_pct,predicted_pct
void write_movers_csv(const MoversReport& report, std::ostream& out);

}  // namespace trendcast::evaluation
