#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dwork::weyl {

using Rational = mpq_class;

std::string rational_to_string(const Rational& q);

// Exponent vector; compared graded-lexicographically.
struct Monomial {
    std::vector<int> exps;

    Monomial() = default;
    explicit Monomial(int nvars) : exps(nvars, 0) {}
    explicit Monomial(std::vector<int> e) : exps(std::move(e)) {}

    int nvars() const { return static_cast<int>(exps.size()); }
    int degree() const;
    bool divides(const Monomial& other) const;
    Monomial operator*(const Monomial& other) const;
    Monomial operator/(const Monomial& other) const;
    bool operator==(const Monomial& other) const { return exps == other.exps; }
};

struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

class MultiPoly {
public:
    using TermMap = std::map<Monomial, Rational, GrlexLess>;

    explicit MultiPoly(int nvars = 0) : nvars_(nvars) {}

    static MultiPoly constant(int nvars, const Rational& c);
    static MultiPoly variable(int nvars, int index);
    static MultiPoly monomial(const Monomial& m, const Rational& c = 1);

    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    int degree() const;
    const TermMap& terms() const { return terms_; }
    Rational coefficient(const Monomial& m) const;
    const Monomial& leading_monomial() const;

    void add_term(const Monomial& m, const Rational& c);

    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator-() const;
    MultiPoly operator*(const MultiPoly& o) const;
    MultiPoly operator*(const Rational& c) const;
    MultiPoly mul_monomial(const Monomial& m, const Rational& c) const;
    MultiPoly pow(int e) const;
    MultiPoly derivative(int var) const;

    // Places this polynomial's variables at positions offset.. in a ring of new_nvars variables.
    MultiPoly embed(int new_nvars, int offset) const;

    std::optional<MultiPoly> divide_exact(const MultiPoly& divisor) const;

    bool operator==(const MultiPoly& o) const;
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    std::string to_string(const std::vector<std::string>& names) const;

private:
    int nvars_;
    TermMap terms_;
};

}  // namespace dwork::weyl
