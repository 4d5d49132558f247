#include "dwork/weyl/cohomology.hpp"

namespace dwork::weyl {

int default_d_max(int twisted_vars) {
    if (twisted_vars <= 3) return 30;
    if (twisted_vars == 4) return 16;
    return 10;
}

bool trace_stabilized(const std::vector<Snapshot>& trace, int window) {
    if (window < 1 || static_cast<int>(trace.size()) < window) return false;
    const DimTable& last = trace.back().dims;
    for (int i = 0; i < window; ++i)
        if (trace[trace.size() - 1 - i].dims != last) return false;
    return true;
}

}  // namespace dwork::weyl
