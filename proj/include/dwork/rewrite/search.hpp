#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dwork/rewrite/engine.hpp"

namespace dwork::rewrite {

struct SearchOptions {
    int depth = 6;               // total number of moves
    int strata = 1;
    Mode mode = Mode::Strict;
    std::size_t max_size = 64;   // terms larger than this are not explored
    std::size_t max_states = 400000;
    bool try_kashiwara = true;   // also try pushing both sides along closed embeddings
};

// One rule application leading out of a term; `result` is symbol-normalized and floated.
struct Successor {
    Move move;
    std::string rule;
    core::FloatedTerm result;
};

// All applications of catalogue rules (up to the stratum bound) anywhere in the term,
// excluding those that leave the normal form unchanged. Deterministic order.
std::vector<Successor> successors(const GeometryContext& ctx, const core::FloatedTerm& term,
                                  const SearchOptions& options);

// Bidirectional breadth-first search. Returns a certificate that passes check_certificate.
std::optional<ProofCertificate> search_equiv(const GeometryContext& ctx, const DExpr& lhs, const DExpr& rhs,
                                             const SearchOptions& options = {});

}  // namespace dwork::rewrite
