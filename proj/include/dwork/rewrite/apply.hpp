#pragma once

#include <string>
#include <vector>

#include "dwork/core/normalize.hpp"
#include "dwork/rewrite/rule.hpp"

namespace dwork::rewrite {

// All ways the pattern matches the term. Matching first runs literally; if that
// yields nothing it is rerun modulo the unit laws Opb(id,T)=T, Oim(id,T)=T and
// Opb(f,O_Y)=O_X for morphism positions fixed by earlier bindings.
std::vector<Bindings> match_pattern(const GeometryContext& ctx, const Pattern& p, const DExpr& term,
                                    const Bindings& given);

// Builds the term for a pattern with every metavariable bound. Throws std::runtime_error
// naming the first unbound metavariable.
DExpr instantiate(const GeometryContext& ctx, const Pattern& p, const Bindings& b);

struct RuleResult {
    DExpr replacement;
    int delta = 0;
    Bindings bindings;  // complete
};

struct ApplyOutcome {
    enum class Status { Ok, NoMatch, SideCondition, Ambiguous, IllFormed, BadBinding } status = Status::NoMatch;
    std::string reason;
    std::vector<RuleResult> results;  // distinct up to normal form and shift delta
};

// Applies one rule at the root of `subterm`.
ApplyOutcome apply_rule(const GeometryContext& ctx, const RewriteRule& rule, const DExpr& subterm, Direction dir,
                        const Bindings& given, Mode mode);

// Checks binding sorts against the rule's metavariables; returns an error message or "".
std::string check_binding_sorts(const RewriteRule& rule, const Bindings& given);

}  // namespace dwork::rewrite
