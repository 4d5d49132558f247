#include "dwork/weyl/sparse.hpp"

#include <algorithm>

namespace dwork::weyl {

SparseVec axpy(const SparseVec& v, const Rational& a, const SparseVec& w) {
    SparseVec out;
    out.reserve(v.size() + w.size());
    std::size_t i = 0, j = 0;
    while (i < v.size() || j < w.size()) {
        if (j == w.size() || (i < v.size() && v[i].first < w[j].first)) {
            out.push_back(v[i++]);
        } else if (i == v.size() || w[j].first < v[i].first) {
            out.emplace_back(w[j].first, a * w[j].second);
            ++j;
        } else {
            Rational s = v[i].second + a * w[j].second;
            if (s != 0) out.emplace_back(v[i].first, std::move(s));
            ++i;
            ++j;
        }
    }
    return out;
}

SparseVec EchelonBasis::reduce(SparseVec v) const {
    while (!v.empty()) {
        auto it = pivots_.find(v.back().first);
        if (it == pivots_.end()) break;
        Rational factor = -v.back().second;
        v = axpy(v, factor, it->second);
    }
    return v;
}

bool EchelonBasis::insert(SparseVec v) {
    v = reduce(std::move(v));
    if (v.empty()) return false;
    Rational inv = 1 / v.back().second;
    if (inv != 1)
        for (auto& entry : v) entry.second *= inv;
    int lead = v.back().first;
    pivots_.emplace(lead, std::move(v));
    return true;
}

std::vector<int> EchelonBasis::leading_indices() const {
    std::vector<int> out;
    out.reserve(pivots_.size());
    for (const auto& entry : pivots_) out.push_back(entry.first);
    std::sort(out.begin(), out.end());
    return out;
}

int EchelonBasis::count_leading_below(int bound) const {
    int n = 0;
    for (const auto& entry : pivots_)
        if (entry.first < bound) ++n;
    return n;
}

int rank_of(const std::vector<SparseVec>& vecs) {
    EchelonBasis basis;
    for (const auto& v : vecs) basis.insert(v);
    return basis.rank();
}

}  // namespace dwork::weyl
