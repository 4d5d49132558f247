#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dwork/core/normalize.hpp"
#include "dwork/rewrite/apply.hpp"
#include "dwork/rewrite/rule.hpp"

namespace dwork::rewrite {

struct Move {
    Direction direction = Direction::Forward;
    Path path;
    Bindings bindings;
};

// One script line: a rule applied by one or more moves, or a previously proved goal.
struct ProofStep {
    std::string rule;   // catalogue id, or the goal name for a lemma step
    bool lemma = false;
    std::vector<Move> moves;
};

struct ProofCertificate {
    std::string name;
    DExpr lhs, rhs;
    std::optional<Name> kashiwara;  // both sides are pushed forward along this closed embedding first
    std::vector<ProofStep> steps;
    Mode mode = Mode::Strict;
    int strata = 1;  // highest rule stratum the script may use
};

// Proved equivalences usable as lemma steps.
struct Lemma {
    core::FloatedTerm lhs, rhs;
};
using LemmaTable = std::map<std::string, Lemma>;

enum class FailureKind {
    None,
    BadGoal,
    BadClosure,
    UnknownRule,
    UnknownLemma,
    Stratum,
    BadPath,
    BadBinding,
    NoMatch,
    SideCondition,
    Ambiguous,
    IllFormed,
    EndMismatch,
};
const char* failure_name(FailureKind k);

struct StepRecord {
    std::string rule;
    bool lemma = false;
    std::vector<Move> moves;  // with completed bindings
    int shift_delta = 0;
    std::string term_after;   // floated rendering
    std::optional<std::string> discharged_by;
};

struct ValidationReport {
    std::string goal;
    std::string statement;
    bool valid = false;
    Mode mode = Mode::Strict;
    int strata = 1;
    std::optional<std::size_t> failing_step;  // 1-based
    std::optional<std::size_t> failing_move;  // 1-based within the step
    FailureKind failure = FailureKind::None;
    std::string reason;
    std::vector<StepRecord> steps;
    int expected_shift = 0;
    int net_shift = 0;
    std::map<std::string, int> rules_used;  // family -> number of steps
    std::vector<std::string> lemmas_used;
    std::vector<std::string> discharged;  // "R5 by basechange"
    std::string final_term;
};

struct CheckOptions {
    std::optional<Mode> mode;
    std::optional<int> strata;
    // Rule family -> name of a valid certificate deriving it from lower strata.
    std::map<std::string, std::string> discharges;
};

ValidationReport check_certificate(const GeometryContext& ctx, const ProofCertificate& cert, const LemmaTable& lemmas,
                                   const CheckOptions& options = {});

// Applies one move to a floated term; the result is returned through `out`.
ApplyOutcome apply_move(const GeometryContext& ctx, const RewriteRule& rule, const core::FloatedTerm& term,
                        const Move& move, Mode mode, core::FloatedTerm* out);

// Pushes both sides of a goal forward along a closed embedding.
core::FloatedTerm kashiwara_closure(const GeometryContext& ctx, const Name& j, const core::FloatedTerm& side);

}  // namespace dwork::rewrite
