#include "oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace oracle {

Poly Poly::constant(int nvars, const mpq_class& c) {
    Poly p;
    p.nvars = nvars;
    if (c != 0) p.terms[Exponent(nvars, 0)] = c;
    return p;
}

Poly Poly::variable(int nvars, int i) {
    Poly p;
    p.nvars = nvars;
    Exponent e(nvars, 0);
    e[i] = 1;
    p.terms[e] = 1;
    return p;
}

int Poly::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms) {
        int s = 0;
        for (int v : e) s += v;
        d = std::max(d, s);
    }
    return d;
}

Poly Poly::derivative(int i) const {
    Poly out;
    out.nvars = nvars;
    for (const auto& [e, c] : terms) {
        if (e[i] == 0) continue;
        Exponent f = e;
        f[i] -= 1;
        out.terms[f] += c * e[i];
    }
    return out;
}

Poly Poly::operator+(const Poly& o) const {
    Poly out = *this;
    for (const auto& [e, c] : o.terms) {
        out.terms[e] += c;
        if (out.terms[e] == 0) out.terms.erase(e);
    }
    return out;
}

Poly Poly::operator-(const Poly& o) const { return *this + o * mpq_class(-1); }

Poly Poly::operator*(const Poly& o) const {
    Poly out;
    out.nvars = nvars;
    for (const auto& [a, x] : terms)
        for (const auto& [b, y] : o.terms) {
            Exponent e(nvars);
            for (int i = 0; i < nvars; ++i) e[i] = a[i] + b[i];
            out.terms[e] += x * y;
        }
    for (auto it = out.terms.begin(); it != out.terms.end();) it = it->second == 0 ? out.terms.erase(it) : std::next(it);
    return out;
}

Poly Poly::operator*(const mpq_class& c) const {
    Poly out;
    out.nvars = nvars;
    if (c == 0) return out;
    for (const auto& [e, x] : terms) out.terms[e] = x * c;
    return out;
}

Poly Poly::pow(int e) const {
    Poly out = constant(nvars, 1);
    for (int i = 0; i < e; ++i) out = out * *this;
    return out;
}

Poly Poly::extend(int n) const {
    Poly out;
    out.nvars = n;
    for (const auto& [e, c] : terms) {
        Exponent f = e;
        f.resize(n, 0);
        out.terms[f] = c;
    }
    return out;
}

Poly poly(int nvars, const std::vector<std::pair<Exponent, long>>& terms) {
    Poly p;
    p.nvars = nvars;
    for (const auto& [e, c] : terms) {
        if (static_cast<int>(e.size()) != nvars) throw std::invalid_argument("exponent length");
        p.terms[e] += c;
    }
    return p;
}

int dense_rank(std::vector<std::vector<mpq_class>> rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows[0].size();
    int rank = 0;
    for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[pivot], rows[rank]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            if (rows[r][c] == 0) continue;
            mpq_class factor = rows[r][c] / rows[rank][c];
            for (std::size_t k = c; k < cols; ++k) rows[r][k] -= factor * rows[rank][k];
        }
        ++rank;
    }
    return rank;
}

namespace {

// A vector of the ambient space: coordinates keyed by (slot, exponent).
using Key = std::pair<std::vector<int>, Exponent>;
using Vec = std::map<Key, mpq_class>;

void add(Vec& v, const Key& k, const mpq_class& c) {
    if (c == 0) return;
    mpq_class& x = v[k];
    x += c;
    if (x == 0) v.erase(k);
}

// Rank of a family of sparse vectors, densified over the union of their supports.
int rank_of(const std::vector<Vec>& vecs) {
    std::map<Key, std::size_t> index;
    for (const Vec& v : vecs)
        for (const auto& [k, c] : v) index.emplace(k, 0);
    std::size_t i = 0;
    for (auto& [k, pos] : index) pos = i++;
    std::vector<std::vector<mpq_class>> rows;
    for (const Vec& v : vecs) {
        std::vector<mpq_class> row(index.size());
        for (const auto& [k, c] : v) row[index[k]] = c;
        rows.push_back(std::move(row));
    }
    return dense_rank(std::move(rows));
}

// dim(span a ∩ span b) = dim span a + dim span b - dim(span a + span b).
int intersection_dim(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    std::vector<Vec> both = a;
    both.insert(both.end(), b.begin(), b.end());
    return rank_of(a) + rank_of(b) - rank_of(both);
}

std::vector<Exponent> monomials(int nvars, int max_degree) {
    std::vector<Exponent> out;
    Exponent e(nvars, 0);
    auto rec = [&](auto&& self, int i, int left) -> void {
        if (i == nvars) {
            out.push_back(e);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            e[i] = k;
            self(self, i + 1, left - k);
        }
        e[i] = 0;
    };
    rec(rec, 0, max_degree);
    return out;
}

std::vector<std::vector<int>> subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    for (int mask = 0; mask < (1 << n); ++mask) {
        if (__builtin_popcount(mask) != k) continue;
        std::vector<int> s;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) s.push_back(i);
        out.push_back(s);
    }
    return out;
}

// dx_i ^ dx_J: the sign and the sorted index set, or nothing when i is in J.
bool wedge_front(int i, const std::vector<int>& J, std::vector<int>& out, int& sign) {
    if (std::find(J.begin(), J.end(), i) != J.end()) return false;
    int before = 0;
    for (int j : J)
        if (j < i) ++before;
    sign = before % 2 ? -1 : 1;
    out = J;
    out.insert(std::upper_bound(out.begin(), out.end(), i), i);
    return true;
}

int exponent_degree(const Exponent& e) {
    int s = 0;
    for (int v : e) s += v;
    return s;
}

}  // namespace

Dims twisted_dims(const Poly& F, int bound, int level) {
    const int n = F.nvars;
    std::vector<Poly> dF;
    for (int i = 0; i < n; ++i) dF.push_back(F.derivative(i));

    // nabla(x^a dx_J) in slot-keyed coordinates (slot = J).
    auto nabla = [&](const Exponent& a, const std::vector<int>& J) {
        Vec out;
        for (int i = 0; i < n; ++i) {
            std::vector<int> K;
            int sign;
            if (!wedge_front(i, J, K, sign)) continue;
            if (a[i] > 0) {
                Exponent b = a;
                b[i] -= 1;
                add(out, {K, b}, mpq_class(sign * a[i]));
            }
            for (const auto& [e, c] : dF[i].terms) {
                Exponent b(n);
                for (int t = 0; t < n; ++t) b[t] = a[t] + e[t];
                add(out, {K, b}, c * sign);
            }
        }
        return out;
    };
    auto basis = [&](int k, int max_degree) {
        std::vector<std::pair<Exponent, std::vector<int>>> out;
        for (const auto& J : subsets(n, k))
            for (const auto& a : monomials(n, max_degree)) out.push_back({a, J});
        return out;
    };
    auto unit = [](const Exponent& a, const std::vector<int>& J) {
        Vec v;
        v[{J, a}] = 1;
        return v;
    };

    Dims dims;
    for (int k = 0; k <= n; ++k) {
        auto small = basis(k, level);
        std::vector<Vec> images;
        for (const auto& [a, J] : small) images.push_back(nabla(a, J));
        int cocycles = static_cast<int>(small.size()) - rank_of(images);
        int coboundaries = 0;
        if (k > 0) {
            std::vector<Vec> boundary, target;
            for (const auto& [a, J] : basis(k - 1, bound)) boundary.push_back(nabla(a, J));
            for (const auto& [a, J] : small) target.push_back(unit(a, J));
            coboundaries = intersection_dim(boundary, target);
        }
        if (cocycles - coboundaries != 0) dims[k] = cocycles - coboundaries;
    }
    return dims;
}

Poly potential(const std::vector<Poly>& f) {
    const int n = f.at(0).nvars;
    const int r = static_cast<int>(f.size());
    Poly F = Poly::constant(n + r, 0);
    for (int i = 0; i < r; ++i) F = F + f[i].extend(n + r) * Poly::variable(n + r, n + i);
    return F;
}

namespace {

// An element g / f_I^pole dx_J of the Cech-de Rham complex.
struct Piece {
    int opens;  // bitmask I
    std::vector<int> J;
    Poly g;
    int pole;
};

struct Cech {
    int n;
    std::vector<Poly> f;
    int ambient_pole;

    Poly product(int opens) const {
        Poly p = Poly::constant(n, 1);
        for (int i = 0; i < static_cast<int>(f.size()); ++i)
            if (opens >> i & 1) p = p * f[i];
        return p;
    }

    // Coordinates over the common denominator f_I^ambient_pole.
    void embed(Vec& out, const Piece& x, const mpq_class& c) const {
        Poly h = x.g * product(x.opens).pow(ambient_pole - x.pole);
        std::vector<int> slot{x.opens};
        slot.insert(slot.end(), x.J.begin(), x.J.end());
        for (const auto& [e, v] : h.terms) add(out, {slot, e}, v * c);
    }

    // Total differential: Cech part plus (-1)^p times de Rham.
    Vec differential(const Piece& x) const {
        Vec out;
        const int r = static_cast<int>(f.size());
        const int p = __builtin_popcount(x.opens) - 1;
        for (int j = 0; j < r; ++j) {
            if (x.opens >> j & 1) continue;
            int position = 0;
            for (int i = 0; i < j; ++i)
                if (x.opens >> i & 1) ++position;
            Piece y{x.opens | (1 << j), x.J, x.g * f[j].pow(x.pole), x.pole};
            embed(out, y, position % 2 ? -1 : 1);
        }
        const Poly fI = product(x.opens);
        const int ds = p % 2 ? -1 : 1;
        for (int i = 0; i < n; ++i) {
            std::vector<int> K;
            int sign;
            if (!wedge_front(i, x.J, K, sign)) continue;
            Poly num = x.g.derivative(i) * fI - x.g * fI.derivative(i) * mpq_class(x.pole);
            embed(out, {x.opens, K, num, x.pole + 1}, sign * ds);
        }
        return out;
    }

    std::vector<Piece> basis(int k, int pole, int degree) const {
        std::vector<Piece> out;
        const int r = static_cast<int>(f.size());
        for (int opens = 1; opens < (1 << r); ++opens) {
            int q = k - (__builtin_popcount(opens) - 1);
            if (q < 0 || q > n) continue;
            for (int order = 0; order <= pole; ++order)
                for (const auto& J : subsets(n, q))
                    for (const auto& a : monomials(n, degree)) {
                        Poly g;
                        g.nvars = n;
                        g.terms[a] = 1;
                        out.push_back({opens, J, g, order});
                    }
        }
        return out;
    }
};

}  // namespace

Dims complement_dims(const std::vector<Poly>& f, int pole, int degree, int slack) {
    const int n = f.at(0).nvars;
    const int r = static_cast<int>(f.size());
    const int big_pole = pole + 2;
    Cech cech{n, f, big_pole + 1};
    Dims dims;
    for (int k = 0; k <= n + r - 1; ++k) {
        auto small = cech.basis(k, pole, degree);
        std::vector<Vec> images, targets;
        for (const Piece& x : small) {
            images.push_back(cech.differential(x));
            Vec v;
            cech.embed(v, x, 1);
            targets.push_back(v);
        }
        int cocycles = rank_of(targets) - rank_of(images);
        int coboundaries = 0;
        if (k > 0) {
            std::vector<Vec> boundary;
            for (const Piece& x : cech.basis(k - 1, big_pole, degree + slack)) boundary.push_back(cech.differential(x));
            coboundaries = intersection_dim(boundary, targets);
        }
        if (cocycles - coboundaries != 0) dims[k] = cocycles - coboundaries;
    }
    return dims;
}

Dims supports_from_complement(const Dims& complement, int n) {
    // H^0(A^n) = Q maps injectively to H^0(U); the higher cohomology of A^n vanishes.
    Dims out;
    auto h = [&](int k) {
        auto it = complement.find(k);
        return it == complement.end() ? 0 : it->second;
    };
    if (h(0) - 1 > 0) out[1] = h(0) - 1;
    for (int k = 2; k <= 2 * n; ++k)
        if (h(k - 1) > 0) out[k] = h(k - 1);
    return out;
}

}  // namespace oracle
