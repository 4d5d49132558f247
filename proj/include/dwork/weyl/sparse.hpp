#pragma once

#include <unordered_map>
#include <utility>
#include <vector>

#include "dwork/weyl/polynomial.hpp"

namespace dwork::weyl {

// Sorted by index; no explicit zeros.
using SparseVec = std::vector<std::pair<int, Rational>>;

SparseVec axpy(const SparseVec& v, const Rational& a, const SparseVec& w);  // v + a*w

// Row echelon basis keyed by leading (largest) index. Pivot rows are scaled to lead 1.
class EchelonBasis {
public:
    // Reduces v against the pivots; stores it if independent. Returns true if stored.
    bool insert(SparseVec v);
    // Reduced remainder of v (empty if v lies in the span).
    SparseVec reduce(SparseVec v) const;

    int rank() const { return static_cast<int>(pivots_.size()); }
    std::vector<int> leading_indices() const;
    int count_leading_below(int bound) const;  // pivots with leading index < bound

private:
    std::unordered_map<int, SparseVec> pivots_;
};

int rank_of(const std::vector<SparseVec>& vecs);

}  // namespace dwork::weyl
