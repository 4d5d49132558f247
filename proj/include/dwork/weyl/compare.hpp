#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dwork/weyl/cohomology.hpp"
#include "dwork/weyl/supports.hpp"

namespace dwork::weyl {

struct CompareOptions {
    std::optional<int> d_max;  // default depends on the number of twisted variables
    int pole_max = 10;
    int window = 3;
};

struct ComparisonReport {
    int n = 0;
    std::vector<std::string> f;  // as rendered polynomials
    std::string potential;       // sum y_i f_i
    CohomologyReport twisted;
    CohomologyReport complement;
    CohomologyReport supports;
    bool stabilized = false;
    bool match = false;
};

// F = sum_i y_i f_i in variables (x_1..x_n, y_1..y_r).
MultiPoly dwork_potential(const SupportsProblem& p);
std::vector<std::string> potential_variable_names(int n, int r);

ComparisonReport dwork_compare(const SupportsProblem& p, const CompareOptions& opts);

// Reads DWORK_DMAX from the environment, falling back to default_d_max.
int resolve_d_max(int twisted_vars);

}  // namespace dwork::weyl
