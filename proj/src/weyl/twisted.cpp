#include "dwork/weyl/twisted.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace dwork::weyl {

namespace {

std::uint64_t encode(const Monomial& m) {
    std::uint64_t key = 0;
    for (int e : m.exps) key = key * 64 + static_cast<std::uint64_t>(e);
    return key;
}

void monomials_of_degree(int nvars, int degree, std::vector<Monomial>& out) {
    // Lexicographically increasing exponent vectors with the given sum.
    std::vector<int> e(nvars, 0);
    auto rec = [&](auto&& self, int var, int left) -> void {
        if (var == nvars - 1) {
            e[var] = left;
            out.emplace_back(e);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            e[var] = v;
            self(self, var + 1, left - v);
        }
    };
    if (nvars == 0) {
        if (degree == 0) out.emplace_back(e);
        return;
    }
    rec(rec, 0, degree);
}

}  // namespace

FormIndexer::FormIndexer(int nvars, int top_degree) : nvars_(nvars), top_(top_degree) {
    if (nvars > 10 || top_degree > 60) throw std::invalid_argument("form indexer size out of range");
    for (int d = 0; d <= top_degree; ++d) {
        monomials_of_degree(nvars, d, monos_);
        count_upto_.push_back(static_cast<int>(monos_.size()));
    }
    for (int i = 0; i < static_cast<int>(monos_.size()); ++i) mono_pos_.emplace(encode(monos_[i]), i);
    masks_.assign(nvars + 1, {});
    mask_rank_.assign(std::size_t(1) << nvars, 0);
    for (FormMask m = 0; m < (FormMask(1) << nvars); ++m) {
        auto& list = masks_[popcount(m)];
        mask_rank_[m] = static_cast<int>(list.size());
        list.push_back(m);
    }
}

int FormIndexer::monomial_count(int max_degree) const {
    if (max_degree < 0) return 0;
    return count_upto_.at(std::min(max_degree, top_));
}

int FormIndexer::count(int grade, int max_degree) const {
    return monomial_count(max_degree) * static_cast<int>(masks_[grade].size());
}

int FormIndexer::index(const Monomial& m, FormMask mask) const {
    auto it = mono_pos_.find(encode(m));
    if (it == mono_pos_.end()) throw std::out_of_range("monomial above indexer bound");
    return it->second * static_cast<int>(masks_[popcount(mask)].size()) + mask_rank_[mask];
}

TruncatedComplex build_twisted_complex(const MultiPoly& F, int D, const FormIndexer& indexer) {
    const int n = F.nvars();
    TruncatedComplex tc;
    tc.nvars = n;
    tc.bound = D;
    tc.degree_raise = std::max(F.degree() - 1, 0);
    std::vector<MultiPoly> dF;
    for (int i = 0; i < n; ++i) dF.push_back(F.derivative(i));

    tc.domain_size.resize(n + 1);
    tc.columns.resize(n + 1);
    const int nmono = indexer.monomial_count(D);
    for (int k = 0; k <= n; ++k) {
        const auto& masks = indexer.masks(k);
        tc.domain_size[k] = nmono * static_cast<int>(masks.size());
        if (k == n) continue;
        auto& cols = tc.columns[k];
        cols.reserve(tc.domain_size[k]);
        std::map<int, Rational> acc;
        for (int mi = 0; mi < nmono; ++mi) {
            const Monomial& a = indexer.monomials()[mi];
            for (FormMask I : masks) {
                acc.clear();
                for (int i = 0; i < n; ++i) {
                    int s = wedge_sign(i, I);
                    if (s == 0) continue;
                    FormMask J = I | (FormMask(1) << i);
                    if (a.exps[i] > 0) {
                        Monomial b(a);
                        b.exps[i] -= 1;
                        acc[indexer.index(b, J)] += Rational(s * a.exps[i]);
                    }
                    for (const auto& [m, c] : dF[i].terms()) acc[indexer.index(a * m, J)] += s * c;
                }
                SparseVec v;
                v.reserve(acc.size());
                for (auto& [idx, c] : acc)
                    if (c != 0) v.emplace_back(idx, c);
                cols.push_back(std::move(v));
            }
        }
    }
    return tc;
}

namespace {

SparseVec apply_columns(const std::vector<SparseVec>& cols, const SparseVec& v) {
    std::map<int, Rational> acc;
    for (const auto& [idx, c] : v)
        for (const auto& [j, a] : cols.at(idx)) acc[j] += c * a;
    SparseVec out;
    for (auto& [j, a] : acc)
        if (a != 0) out.emplace_back(j, a);
    return out;
}

}  // namespace

TwistedSnapshotResult twisted_snapshot(const MultiPoly& F, int D) {
    const int n = F.nvars();
    const int raise = std::max(F.degree() - 1, 0);
    FormIndexer indexer(n, D + raise);
    TruncatedComplex tc = build_twisted_complex(F, D, indexer);
    const int L = D / 2;

    TwistedSnapshotResult result;
    result.snapshot.bound = D;
    result.snapshot.level = L;

    std::vector<EchelonBasis> images(n + 1);
    std::vector<int> rank_at_level(n + 1, 0);
    for (int k = 0; k < n; ++k) {
        const int low = indexer.count(k, L);
        for (int c = 0; c < static_cast<int>(tc.columns[k].size()); ++c) {
            if (c == low) rank_at_level[k] = images[k].rank();
            images[k].insert(tc.columns[k][c]);
        }
        if (low >= static_cast<int>(tc.columns[k].size())) rank_at_level[k] = images[k].rank();
    }
    for (int k = 0; k <= n; ++k) {
        int cocycles = indexer.count(k, L) - rank_at_level[k];
        int coboundaries = k == 0 ? 0 : images[k - 1].count_leading_below(indexer.count(k, L));
        result.snapshot.dims[k] = cocycles - coboundaries;
    }

    for (int k = 0; k + 1 < n && result.d_squared_zero; ++k) {
        const int sources = indexer.count(k, D - raise);
        for (int c = 0; c < sources; ++c) {
            if (!apply_columns(tc.columns[k + 1], tc.columns[k][c]).empty()) {
                result.d_squared_zero = false;
                break;
            }
        }
    }
    return result;
}

CohomologyReport twisted_cohomology(const MultiPoly& F, const CohomologyOptions& opts,
                                    const std::string& problem) {
    if (F.is_constant()) throw std::invalid_argument("twisting polynomial must be nonconstant");
    CohomologyReport report;
    report.side = "twisted";
    report.problem = problem;
    report.window = opts.window;
    for (int D = F.degree(); D <= opts.d_max; D += 2) {
        TwistedSnapshotResult snap = twisted_snapshot(F, D);
        report.consistency_ok = report.consistency_ok && snap.d_squared_zero;
        report.trace.push_back(snap.snapshot);
        if (trace_stabilized(report.trace, opts.window)) {
            report.stabilized = true;
            break;
        }
    }
    if (!report.trace.empty()) report.dims = report.trace.back().dims;
    return report;
}

}  // namespace dwork::weyl
