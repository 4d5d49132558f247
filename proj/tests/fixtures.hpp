#pragma once

#include <string>
#include <vector>

#include "dwork/weyl/poly_parser.hpp"
#include "oracle.hpp"

// The concrete suite with values frozen from the dense oracle.
struct SuiteCase {
    int n;
    std::vector<std::string> f;
    oracle::Dims expected;
};

inline const std::vector<SuiteCase>& concrete_suite() {
    static const std::vector<SuiteCase> suite{
        {1, {"x"}, {{2, 1}}},
        {1, {"x^2"}, {{2, 1}}},
        {1, {"x^2-1"}, {{2, 2}}},
        {1, {"x^3-x"}, {{2, 3}}},
        {2, {"x1", "x2"}, {{4, 1}}},
    };
    return suite;
}

inline oracle::Poly to_oracle(const dwork::weyl::MultiPoly& p) {
    oracle::Poly out;
    out.nvars = p.nvars();
    for (const auto& [m, c] : p.terms()) out.terms[m.exps] = c;
    return out;
}

inline std::vector<dwork::weyl::MultiPoly> parse_all(int n, const std::vector<std::string>& f) {
    std::vector<dwork::weyl::MultiPoly> out;
    for (const auto& s : f) out.push_back(dwork::weyl::parse_polynomial(s, dwork::weyl::base_variable_names(n)));
    return out;
}

inline oracle::Dims nonzero(const std::map<int, int>& dims) {
    oracle::Dims out;
    for (const auto& [k, v] : dims)
        if (v != 0) out[k] = v;
    return out;
}
