#include "dwork/weyl/compare.hpp"

#include <cstdlib>
#include <stdexcept>

#include "dwork/weyl/poly_parser.hpp"
#include "dwork/weyl/twisted.hpp"

namespace dwork::weyl {

MultiPoly dwork_potential(const SupportsProblem& p) {
    const int r = static_cast<int>(p.f.size());
    const int N = p.n + r;
    MultiPoly F(N);
    for (int i = 0; i < r; ++i) F = F + p.f[i].embed(N, 0) * MultiPoly::variable(N, p.n + i);
    return F;
}

std::vector<std::string> potential_variable_names(int n, int r) {
    std::vector<std::string> names = base_variable_names(n);
    if (r == 1) {
        names.push_back("y");
    } else {
        for (int i = 1; i <= r; ++i) names.push_back("y" + std::to_string(i));
    }
    return names;
}

int resolve_d_max(int twisted_vars) {
    if (const char* env = std::getenv("DWORK_DMAX")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 60) return static_cast<int>(v);
    }
    return default_d_max(twisted_vars);
}

ComparisonReport dwork_compare(const SupportsProblem& p, const CompareOptions& opts) {
    if (p.n < 1) throw std::invalid_argument("n must be positive");
    if (p.f.empty()) throw std::invalid_argument("empty polynomial list");
    const int r = static_cast<int>(p.f.size());
    ComparisonReport out;
    out.n = p.n;
    std::vector<std::string> xs = base_variable_names(p.n);
    for (const auto& f : p.f) out.f.push_back(f.to_string(xs));

    MultiPoly F = dwork_potential(p);
    if (F.is_constant()) throw std::invalid_argument("potential is constant");
    out.potential = F.to_string(potential_variable_names(p.n, r));

    CohomologyOptions copts;
    copts.d_max = opts.d_max ? *opts.d_max : resolve_d_max(p.n + r);
    copts.pole_max = opts.pole_max;
    copts.window = opts.window;

    out.twisted = twisted_cohomology(F, copts, "F = " + out.potential);
    out.supports = supports_cohomology(p, copts, &out.complement);
    std::string fs;
    for (std::size_t i = 0; i < out.f.size(); ++i) fs += (i ? ", " : "") + out.f[i];
    out.complement.problem = "U = complement of V(" + fs + ") in A^" + std::to_string(p.n);
    out.supports.problem = "supports on V(" + fs + ") in A^" + std::to_string(p.n);

    out.stabilized = out.twisted.stabilized && out.supports.stabilized;
    DimTable a = out.twisted.dims, b = out.supports.dims;
    out.match = true;
    for (int k = 0; k <= p.n + r; ++k) {
        int da = a.count(k) ? a[k] : 0;
        int db = b.count(k) ? b[k] : 0;
        if (da != db) out.match = false;
    }
    return out;
}

}  // namespace dwork::weyl
