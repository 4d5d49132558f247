#include "dwork/weyl/supports.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>
#include <tuple>

#include "dwork/weyl/forms.hpp"
#include "dwork/weyl/sparse.hpp"

namespace dwork::weyl {

namespace {

using CechSet = std::uint32_t;  // bit j set <=> f_j inverted

struct CochainKey {
    CechSet J;
    Monomial e;
    FormMask I;
    bool operator<(const CochainKey& o) const {
        return std::tie(J, e.exps, I) < std::tie(o.J, o.e.exps, o.I);
    }
};

using Cochain = std::map<CochainKey, Rational>;

class CechModel {
public:
    explicit CechModel(const SupportsProblem& p) : n_(p.n), f_(p.f) {
        r_ = static_cast<int>(f_.size());
        for (CechSet J = 1; J < (CechSet(1) << r_); ++J) {
            MultiPoly prod = MultiPoly::constant(n_, 1);
            for (int j = 0; j < r_; ++j)
                if (J & (CechSet(1) << j)) prod = prod * f_[j];
            fJ_[J] = prod;
            dfJ_[J] = {};
            for (int i = 0; i < n_; ++i) dfJ_[J].push_back(prod.derivative(i));
        }
    }

    int top_degree() const { return n_ + r_ - 1; }

    // Basis of total degree k with pole m and net weight <= w.
    std::vector<CochainKey> pieces(int k, int m, int w) const {
        std::vector<CochainKey> out;
        for (CechSet J = 1; J < (CechSet(1) << r_); ++J) {
            int p = std::popcount(J) - 1;
            int q = k - p;
            if (q < 0 || q > n_) continue;
            int max_mono = w + m * fJ_.at(J).degree() - q;
            if (max_mono < 0) continue;
            for (FormMask I = 0; I < (FormMask(1) << n_); ++I) {
                if (popcount(I) != q) continue;
                for (const Monomial& e : monomials_upto(max_mono)) out.push_back({J, e, I});
            }
        }
        return out;
    }

    // Total differential of x^e dx_I / f_J^m, written over f_{J'}^{m+1}.
    Cochain differential(const CochainKey& key, int m) const {
        Cochain out;
        const int p = std::popcount(key.J) - 1;
        const int sign_d = (p % 2) ? -1 : 1;
        const MultiPoly& fj = fJ_.at(key.J);
        MultiPoly g = MultiPoly::monomial(key.e);
        for (int i = 0; i < n_; ++i) {
            int s = wedge_sign(i, key.I);
            if (s == 0) continue;
            FormMask K = key.I | (FormMask(1) << i);
            MultiPoly t = fj * g.derivative(i) - g * dfJ_.at(key.J)[i] * Rational(m);
            for (const auto& [mono, c] : t.terms()) add(out, {key.J, mono, K}, c * (sign_d * s));
        }
        for (int j = 0; j < r_; ++j) {
            CechSet bit = CechSet(1) << j;
            if (key.J & bit) continue;
            CechSet J2 = key.J | bit;
            int pos = std::popcount(J2 & (bit - 1));
            int s = (pos % 2) ? -1 : 1;
            MultiPoly t = g * f_[j].pow(m + 1) * fj;
            for (const auto& [mono, c] : t.terms()) add(out, {J2, mono, key.I}, c * s);
        }
        return out;
    }

    Cochain differential(const Cochain& c, int m) const {
        Cochain out;
        for (const auto& [key, a] : c)
            for (const auto& [k2, b] : differential(key, m)) add(out, k2, a * b);
        return out;
    }

    // x^e dx_I / f_J^m rewritten over f_J^target.
    Cochain raise_pole(const CochainKey& key, int m, int target) const {
        Cochain out;
        MultiPoly t = MultiPoly::monomial(key.e) * fJ_.at(key.J).pow(target - m);
        for (const auto& [mono, c] : t.terms()) add(out, {key.J, mono, key.I}, c);
        return out;
    }

    Cochain constant_class(int m) const {
        Cochain out;
        for (int j = 0; j < r_; ++j) {
            MultiPoly t = f_[j].pow(m);
            for (const auto& [mono, c] : t.terms()) add(out, {CechSet(1) << j, mono, 0}, c);
        }
        return out;
    }

private:
    int n_;
    int r_;
    std::vector<MultiPoly> f_;
    std::map<CechSet, MultiPoly> fJ_;
    std::map<CechSet, std::vector<MultiPoly>> dfJ_;
    mutable std::map<int, std::vector<Monomial>> mono_cache_;

    static void add(Cochain& c, const CochainKey& k, const Rational& a) {
        if (a == 0) return;
        auto [it, inserted] = c.emplace(k, a);
        if (!inserted) {
            it->second += a;
            if (it->second == 0) c.erase(it);
        }
    }

    const std::vector<Monomial>& monomials_upto(int d) const {
        auto it = mono_cache_.find(d);
        if (it != mono_cache_.end()) return it->second;
        std::vector<Monomial> out;
        std::vector<int> e(n_, 0);
        auto rec = [&](auto&& self, int var, int left) -> void {
            if (var == n_) {
                out.emplace_back(e);
                return;
            }
            for (int v = 0; v <= left; ++v) {
                e[var] = v;
                self(self, var + 1, left - v);
            }
            e[var] = 0;
        };
        rec(rec, 0, d);
        return mono_cache_.emplace(d, std::move(out)).first->second;
    }
};

class KeyIndex {
public:
    SparseVec vec(const Cochain& c) {
        SparseVec v;
        for (const auto& [k, a] : c) {
            auto [it, inserted] = ids_.emplace(k, static_cast<int>(ids_.size()));
            v.emplace_back(it->second, a);
        }
        std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        return v;
    }

private:
    std::map<CochainKey, int> ids_;
};

}  // namespace

ComplementSnapshotResult complement_snapshot(const SupportsProblem& p, int t) {
    CechModel model(p);
    const int m = t, w = t;
    const int m2 = (t + 1) / 2, w2 = t / 2;
    ComplementSnapshotResult result;
    result.snapshot.bound = t;
    result.snapshot.level = m2;

    for (int k = 0; k <= model.top_degree(); ++k) {
        std::vector<CochainKey> small = model.pieces(k, m2, w2);
        int cocycles = static_cast<int>(small.size());
        {
            KeyIndex idx;
            EchelonBasis img;
            for (const auto& b : small) {
                Cochain d = model.differential(b, m2);
                if (k == 0 && result.d_squared_zero && !model.differential(d, m2 + 1).empty())
                    result.d_squared_zero = false;
                img.insert(idx.vec(d));
            }
            cocycles -= img.rank();
        }
        int boundaries = 0;
        if (k > 0 && !small.empty()) {
            KeyIndex idx;
            EchelonBasis span;
            for (const auto& b : model.pieces(k - 1, m, w)) span.insert(idx.vec(model.differential(b, m)));
            int ra = span.rank();
            for (const auto& b : small) span.insert(idx.vec(model.raise_pole(b, m2, m + 1)));
            boundaries = ra + static_cast<int>(small.size()) - span.rank();
        }
        result.snapshot.dims[k] = cocycles - boundaries;
    }
    for (int k = 1; k < model.top_degree() && result.d_squared_zero; ++k) {
        for (const auto& b : model.pieces(k, m2, w2)) {
            if (!model.differential(model.differential(b, m2), m2 + 1).empty()) {
                result.d_squared_zero = false;
                break;
            }
        }
    }
    result.constant_class_survives = model.differential(model.constant_class(m2), m2).empty() &&
                                     result.snapshot.dims[0] >= 1;
    return result;
}

CohomologyReport complement_cohomology(const SupportsProblem& p, const CohomologyOptions& opts) {
    if (p.f.empty()) throw std::invalid_argument("empty polynomial list");
    for (const auto& f : p.f) {
        if (f.is_zero()) throw std::invalid_argument("zero polynomial in list");
        if (f.nvars() != p.n) throw std::invalid_argument("polynomial in wrong number of variables");
    }
    CohomologyReport report;
    report.side = "complement";
    report.window = opts.window;
    const int last = std::min(opts.pole_max, opts.d_max);
    for (int t = 1; t <= last; ++t) {
        ComplementSnapshotResult snap = complement_snapshot(p, t);
        report.consistency_ok = report.consistency_ok && snap.d_squared_zero && snap.constant_class_survives;
        report.trace.push_back(snap.snapshot);
        if (trace_stabilized(report.trace, opts.window)) {
            report.stabilized = true;
            break;
        }
    }
    if (!report.trace.empty()) report.dims = report.trace.back().dims;
    return report;
}

DimTable supports_from_complement(const DimTable& complement, int n, int r) {
    const int top = n + r;
    DimTable out;
    auto get = [&](int k) {
        auto it = complement.find(k);
        return it == complement.end() ? 0 : it->second;
    };
    const int u0 = get(0);
    // U nonempty iff the constant class is nonzero; then restriction has rank 1 in degree 0.
    const int rho0 = u0 > 0 ? 1 : 0;
    for (int k = 0; k <= top; ++k) {
        int from_prev = k == 0 ? 0 : get(k - 1) - (k - 1 == 0 ? rho0 : 0);
        int into_affine = k == 0 ? 1 - rho0 : 0;
        out[k] = from_prev + into_affine;
    }
    return out;
}

bool les_exact(const DimTable& complement, const DimTable& supports, int top_degree) {
    auto get = [](const DimTable& t, int k) {
        auto it = t.find(k);
        return it == t.end() ? 0 : it->second;
    };
    // ... -> H^{k-1}(U) -delta-> H^k_S -> H^k(A) -rho-> H^k(U) -> ...
    const int rho0 = get(complement, 0) > 0 ? 1 : 0;
    for (int k = 0; k <= top_degree; ++k) {
        int hA = k == 0 ? 1 : 0;
        int rho = k == 0 ? rho0 : 0;
        if (rho > hA || rho > get(complement, k)) return false;
        int iota = hA - rho;
        int delta_prev = k == 0 ? 0 : get(complement, k - 1) - (k == 1 ? rho0 : 0);
        if (delta_prev < 0 || iota < 0) return false;
        if (get(supports, k) != delta_prev + iota) return false;
        if (get(supports, k) < 0) return false;
    }
    return true;
}

CohomologyReport supports_cohomology(const SupportsProblem& p, const CohomologyOptions& opts,
                                     CohomologyReport* complement_out) {
    CohomologyReport comp = complement_cohomology(p, opts);
    const int r = static_cast<int>(p.f.size());
    CohomologyReport report;
    report.side = "supports";
    report.problem = comp.problem;
    report.window = comp.window;
    report.stabilized = comp.stabilized;
    report.consistency_ok = comp.consistency_ok;
    for (const Snapshot& s : comp.trace) {
        Snapshot t = s;
        t.dims = supports_from_complement(s.dims, p.n, r);
        report.consistency_ok = report.consistency_ok && les_exact(s.dims, t.dims, p.n + r);
        report.trace.push_back(t);
    }
    if (!report.trace.empty()) report.dims = report.trace.back().dims;
    if (complement_out) *complement_out = comp;
    return report;
}

}  // namespace dwork::weyl
