#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dwork/weyl/polynomial.hpp"

namespace dwork::weyl {

class PolyParseError : public std::runtime_error {
public:
    PolyParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg), position(pos) {}
    std::size_t position;
};

// Infix syntax: integers, rationals via '/', named variables, + - *, ^ or ** with
// nonnegative integer exponents, parentheses.
MultiPoly parse_polynomial(const std::string& text, const std::vector<std::string>& var_names);

// Names used by the command line: "x" when n == 1, otherwise x1..xn.
std::vector<std::string> base_variable_names(int n);

}  // namespace dwork::weyl
