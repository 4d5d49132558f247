#pragma once

#include <map>
#include <string>
#include <vector>

namespace dwork::weyl {

// degree -> dimension
using DimTable = std::map<int, int>;

struct Snapshot {
    int bound = 0;  // truncation degree (twisted) or step t (supports)
    int level = 0;  // evaluation level
    DimTable dims;
};

struct CohomologyReport {
    std::string side;     // "twisted", "complement" or "supports"
    std::string problem;  // human-readable statement of the input
    DimTable dims;        // last snapshot
    bool stabilized = false;
    int window = 3;
    std::vector<Snapshot> trace;
    bool consistency_ok = true;  // d^2 = 0 / exactness checks over the whole trace
};

struct CohomologyOptions {
    int d_max = 30;
    int pole_max = 10;
    int window = 3;
};

int default_d_max(int twisted_vars);
// True when the last `window` snapshots of the trace carry identical dims.
bool trace_stabilized(const std::vector<Snapshot>& trace, int window);

}  // namespace dwork::weyl
