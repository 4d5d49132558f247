#pragma once

// Independent reference computations for the concrete side. Dense matrices over mpq_class,
// its own polynomial type and its own form bookkeeping; shares no code with the library.

#include <gmpxx.h>

#include <map>
#include <vector>

namespace oracle {

using Exponent = std::vector<int>;

struct Poly {
    int nvars = 0;
    std::map<Exponent, mpq_class> terms;

    static Poly constant(int nvars, const mpq_class& c);
    static Poly variable(int nvars, int i);
    int degree() const;
    Poly derivative(int i) const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const mpq_class& c) const;
    Poly pow(int e) const;
    // Same polynomial in more variables (the new ones come last).
    Poly extend(int nvars) const;
};

// Helper for writing fixtures: terms as (exponents, coefficient).
Poly poly(int nvars, const std::vector<std::pair<Exponent, long>>& terms);

using Dims = std::map<int, int>;  // nonzero entries only

int dense_rank(std::vector<std::vector<mpq_class>> rows);

// Twisted de Rham cohomology of e^F on affine space: cocycles of degree <= level modulo
// coboundaries of sources of degree <= bound.
Dims twisted_dims(const Poly& F, int bound, int level);

// sum_i y_i f_i in variables (x_1..x_n, y_1..y_r).
Poly potential(const std::vector<Poly>& f);

// De Rham cohomology of the complement of V(f_1..f_r) via the Cech-de Rham complex of the
// cover {f_i != 0}: cocycles with pole <= pole and numerator degree <= degree, modulo
// coboundaries with pole <= pole + 2 and numerator degree <= degree + slack.
Dims complement_dims(const std::vector<Poly>& f, int pole, int degree, int slack);

// Local cohomology of affine n-space along V(f) from the long exact sequence of the pair.
Dims supports_from_complement(const Dims& complement, int n);

}  // namespace oracle
