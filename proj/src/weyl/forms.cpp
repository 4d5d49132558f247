#include "dwork/weyl/forms.hpp"

#include <bit>

namespace dwork::weyl {

int popcount(FormMask m) {
    return std::popcount(m);
}

int wedge_sign(int i, FormMask mask) {
    FormMask bit = FormMask(1) << i;
    if (mask & bit) return 0;
    return (std::popcount(mask & (bit - 1)) % 2) ? -1 : 1;
}

MultiPoly PolyForm::component(FormMask m) const {
    auto it = comps_.find(m);
    return it == comps_.end() ? MultiPoly(nvars_) : it->second;
}

void PolyForm::add(FormMask mask, const MultiPoly& coeff) {
    if (coeff.is_zero()) return;
    auto it = comps_.find(mask);
    if (it == comps_.end()) {
        comps_.emplace(mask, coeff);
        return;
    }
    it->second = it->second + coeff;
    if (it->second.is_zero()) comps_.erase(it);
}

PolyForm PolyForm::operator+(const PolyForm& o) const {
    PolyForm r(*this);
    for (const auto& [m, c] : o.comps_) r.add(m, c);
    return r;
}

PolyForm PolyForm::operator*(const MultiPoly& g) const {
    PolyForm r(nvars_, grade_);
    for (const auto& [m, c] : comps_) r.add(m, c * g);
    return r;
}

bool PolyForm::operator==(const PolyForm& o) const {
    return grade_ == o.grade_ && comps_ == o.comps_;
}

PolyForm exterior_derivative(const PolyForm& w) {
    PolyForm r(w.nvars(), w.grade() + 1);
    for (const auto& [mask, coeff] : w.components()) {
        for (int i = 0; i < w.nvars(); ++i) {
            int s = wedge_sign(i, mask);
            if (s == 0) continue;
            MultiPoly d = coeff.derivative(i);
            if (!d.is_zero()) r.add(mask | (FormMask(1) << i), d * Rational(s));
        }
    }
    return r;
}

PolyForm wedge_differential(const MultiPoly& g, const PolyForm& w) {
    PolyForm r(w.nvars(), w.grade() + 1);
    for (int i = 0; i < w.nvars(); ++i) {
        MultiPoly gi = g.derivative(i);
        if (gi.is_zero()) continue;
        for (const auto& [mask, coeff] : w.components()) {
            int s = wedge_sign(i, mask);
            if (s == 0) continue;
            r.add(mask | (FormMask(1) << i), gi * coeff * Rational(s));
        }
    }
    return r;
}

PolyForm twisted_differential(const MultiPoly& F, const PolyForm& w) {
    return exterior_derivative(w) + wedge_differential(F, w);
}

LocalizedForm LocalizedForm::reduced() const {
    LocalizedForm r = *this;
    if (r.numerator.is_zero()) {
        r.pole = 0;
        return r;
    }
    while (r.pole > 0) {
        PolyForm q(r.numerator.nvars(), r.numerator.grade());
        bool ok = true;
        for (const auto& [mask, coeff] : r.numerator.components()) {
            auto d = coeff.divide_exact(r.f);
            if (!d) {
                ok = false;
                break;
            }
            q.add(mask, *d);
        }
        if (!ok) break;
        r.numerator = q;
        --r.pole;
    }
    return r;
}

// d(w / f^m) = (f dw - m df ^ w) / f^(m+1)
LocalizedForm LocalizedForm::differential() const {
    LocalizedForm r;
    r.f = f;
    r.pole = pole + 1;
    r.numerator = exterior_derivative(numerator) * f;
    if (pole != 0) {
        PolyForm t = wedge_differential(f, numerator) * MultiPoly::constant(f.nvars(), Rational(-pole));
        r.numerator = r.numerator + t;
    }
    return r.reduced();
}

}  // namespace dwork::weyl
