#pragma once

#include <cstdint>
#include <map>

#include "dwork/weyl/polynomial.hpp"

namespace dwork::weyl {

using FormMask = std::uint32_t;  // bit i set <=> dx_i present

int popcount(FormMask m);
// Sign of dx_i ^ dx_I relative to the increasing ordering of I u {i}; 0 if i in I.
int wedge_sign(int i, FormMask mask);

// Polynomial differential form of fixed grade.
class PolyForm {
public:
    explicit PolyForm(int nvars = 0, int grade = 0) : nvars_(nvars), grade_(grade) {}

    int nvars() const { return nvars_; }
    int grade() const { return grade_; }
    bool is_zero() const { return comps_.empty(); }
    const std::map<FormMask, MultiPoly>& components() const { return comps_; }
    MultiPoly component(FormMask m) const;

    void add(FormMask mask, const MultiPoly& coeff);

    PolyForm operator+(const PolyForm& o) const;
    PolyForm operator*(const MultiPoly& g) const;
    bool operator==(const PolyForm& o) const;

private:
    int nvars_;
    int grade_;
    std::map<FormMask, MultiPoly> comps_;
};

PolyForm exterior_derivative(const PolyForm& w);
PolyForm wedge_differential(const MultiPoly& g, const PolyForm& w);  // dg ^ w
PolyForm twisted_differential(const MultiPoly& F, const PolyForm& w);  // dw + dF ^ w

// omega / f^pole, kept reduced: pole is lowered while f divides every coefficient.
struct LocalizedForm {
    PolyForm numerator;
    MultiPoly f;
    int pole = 0;

    LocalizedForm reduced() const;
    LocalizedForm differential() const;
};

}  // namespace dwork::weyl
