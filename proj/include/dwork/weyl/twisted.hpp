#pragma once

#include <unordered_map>
#include <vector>

#include "dwork/weyl/cohomology.hpp"
#include "dwork/weyl/forms.hpp"
#include "dwork/weyl/polynomial.hpp"
#include "dwork/weyl/sparse.hpp"

namespace dwork::weyl {

// Indexes x^a dx_I (|a| <= top_degree) so that the index order is graded in |a|:
// index = position(a) * C(n, k) + rank(I). Degree-<=L elements form a prefix.
class FormIndexer {
public:
    FormIndexer(int nvars, int top_degree);

    int nvars() const { return nvars_; }
    int top_degree() const { return top_; }
    int monomial_count(int max_degree) const;
    int count(int grade, int max_degree) const;
    int index(const Monomial& m, FormMask mask) const;
    const std::vector<Monomial>& monomials() const { return monos_; }
    const std::vector<FormMask>& masks(int grade) const { return masks_[grade]; }

private:
    int nvars_;
    int top_;
    std::vector<Monomial> monos_;
    std::vector<int> count_upto_;
    std::unordered_map<std::uint64_t, int> mono_pos_;
    std::vector<std::vector<FormMask>> masks_;
    std::vector<int> mask_rank_;
};

// The complex (Omega_{<=D}, d + dF^) with each differential stored by columns.
struct TruncatedComplex {
    int nvars = 0;
    int bound = 0;          // D
    int degree_raise = 0;   // deg F - 1
    std::vector<int> domain_size;                 // per grade, sources of degree <= D
    std::vector<std::vector<SparseVec>> columns;  // grade k -> images in grade k+1
};

TruncatedComplex build_twisted_complex(const MultiPoly& F, int D, const FormIndexer& indexer);

struct TwistedSnapshotResult {
    Snapshot snapshot;
    bool d_squared_zero = true;
};

TwistedSnapshotResult twisted_snapshot(const MultiPoly& F, int D);

CohomologyReport twisted_cohomology(const MultiPoly& F, const CohomologyOptions& opts,
                                    const std::string& problem = "");

}  // namespace dwork::weyl
