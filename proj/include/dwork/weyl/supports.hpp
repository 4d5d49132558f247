#pragma once

#include <vector>

#include "dwork/weyl/cohomology.hpp"
#include "dwork/weyl/polynomial.hpp"

namespace dwork::weyl {

// Closed subset S = V(f_1..f_r) of affine n-space and its complement U.
struct SupportsProblem {
    int n = 1;
    std::vector<MultiPoly> f;
};

struct ComplementSnapshotResult {
    Snapshot snapshot;
    bool d_squared_zero = true;
    bool constant_class_survives = true;
};

// One step of the filtered Cech-de Rham model of U: sources with pole <= t and net
// weight <= t, measured at pole ceil(t/2) and net weight floor(t/2).
ComplementSnapshotResult complement_snapshot(const SupportsProblem& p, int t);

CohomologyReport complement_cohomology(const SupportsProblem& p, const CohomologyOptions& opts);

// Supports dims from the long exact sequence of the pair (A^n, U).
DimTable supports_from_complement(const DimTable& complement, int n, int r);
// Checks the long exact sequence ranks for the given pair of tables.
bool les_exact(const DimTable& complement, const DimTable& supports, int top_degree);

CohomologyReport supports_cohomology(const SupportsProblem& p, const CohomologyOptions& opts,
                                     CohomologyReport* complement_out = nullptr);

}  // namespace dwork::weyl
