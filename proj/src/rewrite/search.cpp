#include "dwork/rewrite/search.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace dwork::rewrite {

using namespace dwork::core;

std::vector<Successor> successors(const GeometryContext& ctx, const FloatedTerm& term, const SearchOptions& options) {
    std::vector<Successor> out;
    const std::string here = [&] {
        FloatedTerm nf = normal_form(ctx, term.core);
        nf.shift += term.shift;
        return nf.key();
    }();
    std::map<std::string, bool> seen;
    for (const Path& path : term.core.paths()) {
        DExpr sub = *term.core.at(path);
        Name variety;
        try {
            variety = well_formed(ctx, sub);
        } catch (const std::exception&) {
            continue;
        }
        for (const RewriteRule& rule : catalogue()) {
            if (rule.stratum > options.strata) continue;
            for (Direction dir : {Direction::Forward, Direction::Backward}) {
                const Pattern& from = dir == Direction::Forward ? rule.lhs : rule.rhs;
                const Pattern& to = dir == Direction::Forward ? rule.rhs : rule.lhs;
                for (const Bindings& m : match_pattern(ctx, from, sub, {})) {
                    Completion c;
                    try {
                        c = rule.complete ? rule.complete(ctx, m, dir, options.mode) : Completion{{m}, ""};
                    } catch (const std::exception&) {
                        continue;
                    }
                    for (const Bindings& full : c.candidates) {
                        FloatedTerm next;
                        try {
                            DExpr repl = instantiate(ctx, to, full);
                            if (well_formed(ctx, repl) != variety) continue;
                            DExpr whole = *term.core.replace(path, repl);
                            if (whole.size() > options.max_size) continue;
                            well_formed(ctx, whole);
                            int fwd = rule.delta ? rule.delta(ctx, full) : 0;
                            next = {normalize_symbols(ctx, whole),
                                    term.shift + (dir == Direction::Forward ? fwd : -fwd)};
                        } catch (const std::exception&) {
                            continue;
                        }
                        FloatedTerm nf = normal_form(ctx, next.core);
                        nf.shift += next.shift;
                        if (nf.key() == here) continue;
                        std::string key = rule.id + "|" + direction_name(dir) + "|" + render_path(path) + "|" + next.key();
                        if (seen.count(key)) continue;
                        seen[key] = true;
                        out.push_back({Move{dir, path, full}, rule.id, next});
                    }
                }
            }
        }
    }
    return out;
}

namespace {

struct Node {
    FloatedTerm term;
    long parent = -1;
    Successor via;  // move from parent to this node
    int depth = 0;
};

struct Frontier {
    std::vector<Node> nodes;
    std::unordered_map<std::string, long> index;  // literal key -> node
    std::size_t level_begin = 0;

    void seed(const FloatedTerm& t) {
        nodes.push_back({t, -1, {}, 0});
        index[t.key()] = 0;
    }
    std::vector<Successor> chain(long id) const {
        std::vector<Successor> out;
        for (long k = id; nodes[k].parent >= 0; k = nodes[k].parent) out.push_back(nodes[k].via);
        std::reverse(out.begin(), out.end());
        return out;
    }
};

// Finds bindings for a move that are as small as possible while still determining the result.
Move minimize(const GeometryContext& ctx, const RewriteRule& rule, const FloatedTerm& before, const Move& full,
              const FloatedTerm& expected, Mode mode) {
    auto nf_key = [&](const FloatedTerm& t) {
        FloatedTerm nf = normal_form(ctx, t.core);
        nf.shift += t.shift;
        return nf.key();
    };
    const std::string want = nf_key(expected);
    auto works = [&](const Bindings& b) {
        Move m{full.direction, full.path, b};
        FloatedTerm out;
        ApplyOutcome r = apply_move(ctx, rule, before, m, mode, &out);
        return r.status == ApplyOutcome::Status::Ok && nf_key(out) == want;
    };
    if (works({})) return {full.direction, full.path, {}};
    // Drop bindings one at a time while the move stays determined; symbols are kept longest.
    Bindings kept = full.bindings;
    std::vector<std::string> order;
    for (const auto& [k, v] : kept)
        if (std::holds_alternative<DExpr>(v)) order.push_back(k);
    for (const auto& [k, v] : kept)
        if (!std::holds_alternative<DExpr>(v)) order.push_back(k);
    for (const std::string& k : order) {
        Bindings trial = kept;
        trial.erase(k);
        if (works(trial)) kept = std::move(trial);
    }
    return {full.direction, full.path, kept};
}

std::vector<ProofStep> to_steps(const GeometryContext& ctx, const FloatedTerm& start, const std::vector<Successor>& moves,
                                Mode mode) {
    std::vector<ProofStep> steps;
    FloatedTerm cur = start;
    for (const Successor& s : moves) {
        const RewriteRule* rule = find_rule(s.rule);
        Move m = minimize(ctx, *rule, cur, s.move, s.result, mode);
        if (!steps.empty() && steps.back().rule == s.rule) steps.back().moves.push_back(m);
        else steps.push_back({s.rule, false, {m}});
        FloatedTerm next;
        if (apply_move(ctx, *rule, cur, m, mode, &next).status != ApplyOutcome::Status::Ok) return {};
        cur = next;
    }
    return steps;
}

// Reverses a move from `from` to `to`: the same rule in the other direction at the same path.
Successor invert(const Successor& s, const FloatedTerm& back_to) {
    Successor r = s;
    r.move.direction = opposite(s.move.direction);
    r.result = back_to;
    return r;
}

std::optional<std::vector<Successor>> bidirectional(const GeometryContext& ctx, const FloatedTerm& lhs,
                                                    const FloatedTerm& rhs, const SearchOptions& options) {
    auto nf_key = [&](const FloatedTerm& t) {
        FloatedTerm nf = normal_form(ctx, t.core);
        nf.shift += t.shift;
        return nf.key();
    };
    const std::string target = nf_key(rhs);
    if (nf_key(lhs) == target) return std::vector<Successor>{};

    Frontier fwd, bwd;
    fwd.seed(lhs);
    bwd.seed(rhs);
    int fdepth = 0, bdepth = 0;
    std::size_t states = 2;

    auto join = [&](long f, long b) {
        std::vector<Successor> path = fwd.chain(f);
        std::vector<Successor> back = bwd.chain(b);
        // back: rhs -> ... -> node b; walk it in reverse.
        for (long k = b; bwd.nodes[k].parent >= 0; k = bwd.nodes[k].parent)
            path.push_back(invert(bwd.nodes[k].via, bwd.nodes[bwd.nodes[k].parent].term));
        return path;
    };

    while (fdepth + bdepth < options.depth) {
        bool forward = fdepth <= bdepth;
        Frontier& me = forward ? fwd : bwd;
        Frontier& other = forward ? bwd : fwd;
        std::size_t begin = me.level_begin, end = me.nodes.size();
        if (begin == end) return std::nullopt;
        me.level_begin = end;
        for (std::size_t i = begin; i < end; ++i) {
            for (Successor& s : successors(ctx, me.nodes[i].term, options)) {
                std::string key = s.result.key();
                if (me.index.count(key)) continue;
                long id = static_cast<long>(me.nodes.size());
                FloatedTerm result = s.result;
                me.nodes.push_back({result, static_cast<long>(i), std::move(s), me.nodes[i].depth + 1});
                me.index[key] = id;
                if (++states > options.max_states) return std::nullopt;
                if (auto hit = other.index.find(key); hit != other.index.end())
                    return forward ? join(id, hit->second) : join(hit->second, id);
                if (forward && nf_key(result) == target) return join(id, 0);
            }
        }
        (forward ? fdepth : bdepth)++;
    }
    return std::nullopt;
}

}  // namespace

std::optional<ProofCertificate> search_equiv(const GeometryContext& ctx, const DExpr& lhs, const DExpr& rhs,
                                             const SearchOptions& options) {
    Name variety;
    FloatedTerm l, r;
    try {
        variety = well_formed(ctx, lhs);
        if (well_formed(ctx, rhs) != variety) return std::nullopt;
        FloatedTerm fl = float_shifts(lhs), fr = float_shifts(rhs);
        l = {normalize_symbols(ctx, fl.core), fl.shift};
        r = {normalize_symbols(ctx, fr.core), fr.shift};
    } catch (const std::exception&) {
        return std::nullopt;
    }

    std::vector<std::optional<Name>> closures{std::nullopt};
    if (options.try_kashiwara) {
        for (const auto& m : ctx.morphisms()) {
            if (!m.closed_embedding() || m.source != variety) continue;
            const VarietyInfo* src = ctx.variety(m.source);
            if (options.mode == Mode::Strict && src && !src->smooth) continue;
            closures.push_back(m.name);
        }
    }

    for (int depth = 0; depth <= options.depth; ++depth) {
        for (const auto& j : closures) {
            FloatedTerm a = j ? kashiwara_closure(ctx, *j, l) : l;
            FloatedTerm b = j ? kashiwara_closure(ctx, *j, r) : r;
            SearchOptions o = options;
            o.depth = depth;
            auto moves = bidirectional(ctx, a, b, o);
            if (!moves || static_cast<int>(moves->size()) != depth) continue;
            ProofCertificate cert;
            cert.name = "search";
            cert.lhs = lhs;
            cert.rhs = rhs;
            cert.kashiwara = j;
            cert.mode = options.mode;
            cert.strata = options.strata;
            cert.steps = to_steps(ctx, a, *moves, options.mode);
            if (check_certificate(ctx, cert, {}).valid) return cert;
        }
    }
    return std::nullopt;
}

}  // namespace dwork::rewrite
