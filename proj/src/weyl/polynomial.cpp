#include "dwork/weyl/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dwork::weyl {

std::string rational_to_string(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    return c.get_str();
}

int Monomial::degree() const {
    int d = 0;
    for (int e : exps) d += e;
    return d;
}

bool Monomial::divides(const Monomial& other) const {
    for (std::size_t i = 0; i < exps.size(); ++i)
        if (exps[i] > other.exps[i]) return false;
    return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
    Monomial r(*this);
    for (std::size_t i = 0; i < exps.size(); ++i) r.exps[i] += other.exps[i];
    return r;
}

Monomial Monomial::operator/(const Monomial& other) const {
    Monomial r(*this);
    for (std::size_t i = 0; i < exps.size(); ++i) r.exps[i] -= other.exps[i];
    return r;
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return a.exps < b.exps;
}

MultiPoly MultiPoly::constant(int nvars, const Rational& c) {
    MultiPoly p(nvars);
    p.add_term(Monomial(nvars), c);
    return p;
}

MultiPoly MultiPoly::variable(int nvars, int index) {
    MultiPoly p(nvars);
    Monomial m(nvars);
    m.exps[index] = 1;
    p.add_term(m, 1);
    return p;
}

MultiPoly MultiPoly::monomial(const Monomial& m, const Rational& c) {
    MultiPoly p(m.nvars());
    p.add_term(m, c);
    return p;
}

bool MultiPoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.degree() == 0);
}

int MultiPoly::degree() const {
    if (terms_.empty()) return -1;
    return terms_.rbegin()->first.degree();
}

Rational MultiPoly::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

const Monomial& MultiPoly::leading_monomial() const {
    if (terms_.empty()) throw std::logic_error("leading monomial of zero polynomial");
    return terms_.rbegin()->first;
}

void MultiPoly::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    MultiPoly r(*this);
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
    MultiPoly r(*this);
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r(nvars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    MultiPoly r(nvars_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
    return r;
}

MultiPoly MultiPoly::operator*(const Rational& c) const {
    MultiPoly r(nvars_);
    if (c == 0) return r;
    for (const auto& [m, a] : terms_) r.terms_.emplace(m, a * c);
    return r;
}

MultiPoly MultiPoly::mul_monomial(const Monomial& mono, const Rational& c) const {
    MultiPoly r(nvars_);
    if (c == 0) return r;
    for (const auto& [m, a] : terms_) r.terms_.emplace(m * mono, a * c);
    return r;
}

MultiPoly MultiPoly::pow(int e) const {
    if (e < 0) throw std::invalid_argument("negative exponent");
    MultiPoly result = constant(nvars_, 1);
    MultiPoly base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

MultiPoly MultiPoly::derivative(int var) const {
    MultiPoly r(nvars_);
    for (const auto& [m, c] : terms_) {
        int e = m.exps[var];
        if (e == 0) continue;
        Monomial d(m);
        d.exps[var] -= 1;
        r.add_term(d, c * e);
    }
    return r;
}

MultiPoly MultiPoly::embed(int new_nvars, int offset) const {
    MultiPoly r(new_nvars);
    for (const auto& [m, c] : terms_) {
        Monomial e(new_nvars);
        for (int i = 0; i < nvars_; ++i) e.exps[offset + i] = m.exps[i];
        r.add_term(e, c);
    }
    return r;
}

std::optional<MultiPoly> MultiPoly::divide_exact(const MultiPoly& divisor) const {
    if (divisor.is_zero()) throw std::invalid_argument("division by zero polynomial");
    MultiPoly quotient(nvars_);
    MultiPoly rem(*this);
    const Monomial& lead = divisor.leading_monomial();
    const Rational lead_c = divisor.terms_.rbegin()->second;
    while (!rem.is_zero()) {
        const auto& [m, c] = *rem.terms_.rbegin();
        if (!lead.divides(m)) return std::nullopt;
        Monomial q = m / lead;
        Rational qc = c / lead_c;
        quotient.add_term(q, qc);
        rem = rem - divisor.mul_monomial(q, qc);
    }
    return quotient;
}

bool MultiPoly::operator==(const MultiPoly& o) const {
    return nvars_ == o.nvars_ && terms_ == o.terms_;
}

std::string MultiPoly::to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rational a = abs(c);
        if (first) {
            if (c < 0) out << "-";
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        first = false;
        bool unit = (a == 1);
        if (!unit || m.degree() == 0) {
            out << rational_to_string(a);
            if (m.degree() > 0) out << "*";
        }
        bool first_var = true;
        for (int i = 0; i < m.nvars(); ++i) {
            if (m.exps[i] == 0) continue;
            if (!first_var) out << "*";
            first_var = false;
            out << names.at(i);
            if (m.exps[i] > 1) out << "^" << m.exps[i];
        }
    }
    return out.str();
}

}  // namespace dwork::weyl
