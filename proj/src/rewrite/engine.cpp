#include "dwork/rewrite/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace dwork::rewrite {

using namespace dwork::core;

const char* failure_name(FailureKind k) {
    switch (k) {
        case FailureKind::None: return "none";
        case FailureKind::BadGoal: return "bad-goal";
        case FailureKind::BadClosure: return "bad-closure";
        case FailureKind::UnknownRule: return "unknown-rule";
        case FailureKind::UnknownLemma: return "unknown-lemma";
        case FailureKind::Stratum: return "stratum";
        case FailureKind::BadPath: return "bad-path";
        case FailureKind::BadBinding: return "bad-binding";
        case FailureKind::NoMatch: return "no-match-at-path";
        case FailureKind::SideCondition: return "side-condition-failed";
        case FailureKind::Ambiguous: return "ambiguous";
        case FailureKind::IllFormed: return "ill-formed";
        case FailureKind::EndMismatch: return "end-mismatch";
    }
    return "?";
}

FloatedTerm kashiwara_closure(const GeometryContext& ctx, const Name& j, const FloatedTerm& side) {
    const MorphismInfo* info = ctx.morphism(j);
    if (!info || !info->closed_embedding()) throw ContextError(j + " is not a closed embedding");
    return {DExpr::oim(MorphismExpr::atom(j), side.core), side.shift};
}

ApplyOutcome apply_move(const GeometryContext& ctx, const RewriteRule& rule, const FloatedTerm& term, const Move& move,
                        Mode mode, FloatedTerm* out) {
    ApplyOutcome res;
    std::optional<DExpr> sub = term.core.at(move.path);
    if (!sub) {
        res.status = ApplyOutcome::Status::NoMatch;
        res.reason = "path " + render_path(move.path) + " does not exist in " + term.render();
        return res;
    }
    res = apply_rule(ctx, rule, *sub, move.direction, move.bindings, mode);
    if (res.status != ApplyOutcome::Status::Ok) return res;
    std::optional<DExpr> whole = term.core.replace(move.path, res.results.front().replacement);
    try {
        well_formed(ctx, *whole);
    } catch (const WellFormednessError& e) {
        res.status = ApplyOutcome::Status::IllFormed;
        res.reason = e.what();
        return res;
    }
    if (out) *out = {normalize_symbols(ctx, *whole), term.shift + res.results.front().delta};
    return res;
}

namespace {

FailureKind failure_of(ApplyOutcome::Status s) {
    switch (s) {
        case ApplyOutcome::Status::Ok: return FailureKind::None;
        case ApplyOutcome::Status::NoMatch: return FailureKind::NoMatch;
        case ApplyOutcome::Status::SideCondition: return FailureKind::SideCondition;
        case ApplyOutcome::Status::Ambiguous: return FailureKind::Ambiguous;
        case ApplyOutcome::Status::IllFormed: return FailureKind::IllFormed;
        case ApplyOutcome::Status::BadBinding: return FailureKind::BadBinding;
    }
    return FailureKind::None;
}

bool lemma_side_at(const GeometryContext& ctx, const FloatedTerm& side, const DExpr& sub) {
    return normal_form(ctx, side.core).key() == normal_form(ctx, sub).key();
}

}  // namespace

ValidationReport check_certificate(const GeometryContext& ctx, const ProofCertificate& cert, const LemmaTable& lemmas,
                                   const CheckOptions& options) {
    ValidationReport rep;
    rep.goal = cert.name;
    rep.mode = options.mode.value_or(cert.mode);
    rep.strata = options.strata ? std::min(*options.strata, cert.strata) : cert.strata;
    auto fail = [&](FailureKind k, const std::string& why, std::optional<std::size_t> step = std::nullopt,
                    std::optional<std::size_t> move = std::nullopt) {
        rep.valid = false;
        rep.failure = k;
        rep.reason = why;
        rep.failing_step = step;
        rep.failing_move = move;
        return rep;
    };

    FloatedTerm lhs, rhs;
    try {
        Name vl = well_formed(ctx, cert.lhs);
        Name vr = well_formed(ctx, cert.rhs);
        if (vl != vr) return fail(FailureKind::BadGoal, "the sides live on " + vl + " and " + vr);
        FloatedTerm fl = float_shifts(cert.lhs), fr = float_shifts(cert.rhs);
        lhs = {normalize_symbols(ctx, fl.core), fl.shift};
        rhs = {normalize_symbols(ctx, fr.core), fr.shift};
        rep.statement = lhs.render() + " ~ " + rhs.render();
    } catch (const std::exception& e) {
        return fail(FailureKind::BadGoal, e.what());
    }
    if (cert.kashiwara) {
        const MorphismInfo* j = ctx.morphism(*cert.kashiwara);
        if (j && rep.mode == Mode::Strict) {
            const VarietyInfo* src = ctx.variety(j->source);
            if (src && !src->smooth)
                return fail(FailureKind::BadClosure, "closure along " + j->name + " needs a smooth source in strict mode");
        }
        try {
            lhs = kashiwara_closure(ctx, *cert.kashiwara, lhs);
            rhs = kashiwara_closure(ctx, *cert.kashiwara, rhs);
            well_formed(ctx, lhs.core);
            ++rep.rules_used["R9"];
        } catch (const std::exception& e) {
            return fail(FailureKind::BadClosure, e.what());
        }
    }
    rep.expected_shift = rhs.shift - lhs.shift;

    FloatedTerm cur = lhs;
    for (std::size_t si = 0; si < cert.steps.size(); ++si) {
        const ProofStep& step = cert.steps[si];
        StepRecord rec;
        rec.rule = step.rule;
        rec.lemma = step.lemma;
        if (step.moves.empty()) return fail(FailureKind::BadPath, "step has no moves", si + 1);

        if (step.lemma) {
            auto it = lemmas.find(step.rule);
            if (it == lemmas.end()) return fail(FailureKind::UnknownLemma, "no proved goal named " + step.rule, si + 1);
            for (std::size_t mi = 0; mi < step.moves.size(); ++mi) {
                const Move& mv = step.moves[mi];
                const FloatedTerm& from = mv.direction == Direction::Forward ? it->second.lhs : it->second.rhs;
                const FloatedTerm& to = mv.direction == Direction::Forward ? it->second.rhs : it->second.lhs;
                std::optional<DExpr> sub = cur.core.at(mv.path);
                if (!sub) return fail(FailureKind::BadPath, "path " + render_path(mv.path) + " does not exist", si + 1, mi + 1);
                if (!lemma_side_at(ctx, from, *sub))
                    return fail(FailureKind::NoMatch,
                                "lemma " + step.rule + " does not apply to " + sub->render(), si + 1, mi + 1);
                DExpr whole = *cur.core.replace(mv.path, to.core);
                try {
                    well_formed(ctx, whole);
                } catch (const std::exception& e) {
                    return fail(FailureKind::IllFormed, e.what(), si + 1, mi + 1);
                }
                int delta = to.shift - from.shift;
                cur = {normalize_symbols(ctx, whole), cur.shift + delta};
                rec.shift_delta += delta;
                rec.moves.push_back(mv);
            }
            rep.lemmas_used.push_back(step.rule);
        } else {
            const RewriteRule* rule = find_rule(step.rule);
            if (!rule) return fail(FailureKind::UnknownRule, "unknown rule " + step.rule, si + 1);
            if (rule->stratum > rep.strata) {
                auto d = options.discharges.find(rule->family);
                if (d == options.discharges.end())
                    return fail(FailureKind::Stratum,
                                "rule " + rule->id + " has stratum " + std::to_string(rule->stratum) +
                                    " above the allowed " + std::to_string(rep.strata),
                                si + 1);
                rec.discharged_by = d->second;
                std::string note = rule->family + " by " + d->second;
                if (std::find(rep.discharged.begin(), rep.discharged.end(), note) == rep.discharged.end())
                    rep.discharged.push_back(note);
            }
            for (std::size_t mi = 0; mi < step.moves.size(); ++mi) {
                const Move& mv = step.moves[mi];
                FloatedTerm next;
                ApplyOutcome res = apply_move(ctx, *rule, cur, mv, rep.mode, &next);
                if (res.status != ApplyOutcome::Status::Ok)
                    return fail(res.status == ApplyOutcome::Status::NoMatch && !cur.core.at(mv.path)
                                    ? FailureKind::BadPath
                                    : failure_of(res.status),
                                res.reason, si + 1, mi + 1);
                rec.shift_delta += next.shift - cur.shift;
                cur = next;
                Move done = mv;
                done.bindings = res.results.front().bindings;
                rec.moves.push_back(std::move(done));
            }
            ++rep.rules_used[rule->family];
        }
        rec.term_after = cur.render();
        rep.steps.push_back(std::move(rec));
    }
    rep.net_shift = cur.shift - lhs.shift;
    rep.final_term = cur.render();
    FloatedTerm a = normal_form(ctx, cur.core), b = normal_form(ctx, rhs.core);
    a.shift += cur.shift;
    b.shift += rhs.shift;
    if (a.key() != b.key())
        return fail(FailureKind::EndMismatch, "script ends at " + a.render() + " but the goal is " + b.render());
    rep.valid = true;
    return rep;
}

}  // namespace dwork::rewrite
