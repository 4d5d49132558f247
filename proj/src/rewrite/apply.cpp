#include "dwork/rewrite/apply.hpp"

#include <set>
#include <stdexcept>

namespace dwork::rewrite {

using namespace dwork::core;

namespace {

template <typename T>
const T* get(const Bindings& b, const std::string& name) {
    auto it = b.find(name);
    if (it == b.end()) return nullptr;
    return std::get_if<T>(&it->second);
}

bool morph_bound(const MPat& p, const Bindings& b) {
    if (p.kind == MPat::Kind::Meta) return b.count(p.meta) > 0;
    for (const auto& q : p.parts)
        if (!morph_bound(q, b)) return false;
    return true;
}

MorphismExpr inst_morph(const GeometryContext& ctx, const MPat& p, const Bindings& b) {
    switch (p.kind) {
        case MPat::Kind::Meta: {
            const MorphismExpr* m = get<MorphismExpr>(b, p.meta);
            if (!m) throw std::runtime_error("unbound metavariable " + p.meta + " (binding required)");
            return *m;
        }
        case MPat::Kind::Compose:
            return normalize_morphism(ctx, MorphismExpr::compose(inst_morph(ctx, p.parts[0], b),
                                                                 inst_morph(ctx, p.parts[1], b)));
        case MPat::Kind::Transpose:
            return normalize_morphism(ctx, MorphismExpr::transpose(inst_morph(ctx, p.parts[0], b)));
    }
    throw std::logic_error("bad morphism pattern");
}

SubvarietyExpr inst_sub(const GeometryContext& ctx, const SPat& p, const Bindings& b) {
    switch (p.kind) {
        case SPat::Kind::Meta: {
            const SubvarietyExpr* s = get<SubvarietyExpr>(b, p.meta);
            if (!s) throw std::runtime_error("unbound metavariable " + p.meta + " (binding required)");
            return *s;
        }
        case SPat::Kind::Intersect:
            return normalize_subvariety(ctx, SubvarietyExpr::intersect(inst_sub(ctx, p.parts[0], b),
                                                                       inst_sub(ctx, p.parts[1], b)));
        case SPat::Kind::Preimage:
            return normalize_subvariety(
                ctx, SubvarietyExpr::preimage(inst_morph(ctx, p.morph[0], b), inst_sub(ctx, p.parts[0], b)));
        case SPat::Kind::Reduce:
            return normalize_subvariety(ctx, SubvarietyExpr::reduce(inst_sub(ctx, p.parts[0], b)));
    }
    throw std::logic_error("bad subvariety pattern");
}

FunctionExpr inst_fn(const GeometryContext& ctx, const FPat& p, const Bindings& b) {
    if (p.kind == FPat::Kind::Meta) {
        const FunctionExpr* f = get<FunctionExpr>(b, p.meta);
        if (!f) throw std::runtime_error("unbound metavariable " + p.meta + " (binding required)");
        return *f;
    }
    return normalize_function(ctx, FunctionExpr::pullback(inst_fn(ctx, p.base[0], b), inst_morph(ctx, p.morph[0], b)));
}

const Name& name_binding(const Bindings& b, const std::string& meta) {
    const Name* n = get<Name>(b, meta);
    if (!n) throw std::runtime_error("unbound metavariable " + meta + " (binding required)");
    return *n;
}

class Matcher {
public:
    Matcher(const GeometryContext& ctx, bool extended) : ctx_(ctx), ext_(extended) {}

    std::vector<Bindings> term(const Pattern& p, const DExpr& t, const Bindings& b) {
        std::vector<Bindings> out;
        switch (p.kind) {
            case Pattern::Kind::Meta: {
                if (const DExpr* bound = get<DExpr>(b, p.meta)) {
                    if (*bound == t) out.push_back(b);
                } else if (!b.count(p.meta)) {
                    Bindings nb = b;
                    nb[p.meta] = t;
                    out.push_back(std::move(nb));
                }
                return out;
            }
            case Pattern::Kind::Struct:
                if (t.kind() == DExpr::Kind::Struct) bind_name(p.meta, t.name(), b, out);
                return out;
            case Pattern::Kind::Exp:
                if (t.kind() != DExpr::Kind::Exp) return out;
                {
                    std::vector<Bindings> tmp;
                    bind_name(p.meta, t.name(), b, tmp);
                    for (const auto& b1 : tmp) append(out, fn(p.fn, t.function(), b1));
                }
                return out;
            case Pattern::Kind::Tensor:
                if (t.kind() != DExpr::Kind::Tensor) return out;
                out = pair(p.children[0], p.children[1], t.child(0), t.child(1), b);
                if (out.empty()) out = pair(p.children[0], p.children[1], t.child(1), t.child(0), b);
                return out;
            case Pattern::Kind::ETensor:
                if (t.kind() != DExpr::Kind::ETensor) return out;
                return pair(p.children[0], p.children[1], t.child(0), t.child(1), b);
            case Pattern::Kind::Opb:
            case Pattern::Kind::Oim:
                return pushpull(p, t, b);
            case Pattern::Kind::RGamma:
                if (t.kind() != DExpr::Kind::RGamma) return out;
                for (const auto& b1 : sub(p.sub, t.subvariety(), b)) append(out, term(p.children[0], t.child(0), b1));
                return out;
            case Pattern::Kind::Fourier:
                if (t.kind() != DExpr::Kind::Fourier) return out;
                for (const auto& b1 : bundle(p.bundle, t.name(), b)) append(out, term(p.children[0], t.child(0), b1));
                return out;
        }
        return out;
    }

private:
    const GeometryContext& ctx_;
    bool ext_;

    static void append(std::vector<Bindings>& out, std::vector<Bindings> more) {
        for (auto& m : more) out.push_back(std::move(m));
    }

    void bind_name(const std::string& meta, const Name& value, const Bindings& b, std::vector<Bindings>& out) {
        if (const Name* bound = get<Name>(b, meta)) {
            if (*bound == value) out.push_back(b);
        } else if (!b.count(meta)) {
            Bindings nb = b;
            nb[meta] = value;
            out.push_back(std::move(nb));
        }
    }

    std::vector<Bindings> pair(const Pattern& p0, const Pattern& p1, const DExpr& t0, const DExpr& t1,
                               const Bindings& b) {
        std::vector<Bindings> out;
        for (const auto& b1 : term(p0, t0, b)) append(out, term(p1, t1, b1));
        return out;
    }

    std::vector<Bindings> bundle(const BPat& p, const Name& name, const Bindings& b) {
        std::vector<Bindings> out;
        Name value = name;
        if (p.dual) {
            const BundleInfo* info = ctx_.bundle(name);
            if (!info || !info->dual) return out;
            value = *info->dual;
        }
        bind_name(p.meta, value, b, out);
        return out;
    }

    std::vector<Bindings> pushpull(const Pattern& p, const DExpr& t, const Bindings& b) {
        const DExpr::Kind head = p.kind == Pattern::Kind::Opb ? DExpr::Kind::Opb : DExpr::Kind::Oim;
        std::vector<Bindings> out;
        if (t.kind() == head)
            for (const auto& b1 : morph(p.morph, t.morphism(), b)) append(out, term(p.children[0], t.child(0), b1));
        if (!out.empty() || !ext_) return out;

        Name v;
        try {
            v = well_formed(ctx_, t);
        } catch (const std::exception&) {
            return out;
        }
        if (morph_bound(p.morph, b)) {
            MorphismExpr m;
            try {
                m = inst_morph(ctx_, p.morph, b);
            } catch (const std::exception&) {
                return out;
            }
            MorphismType ty = morphism_type(ctx_, m);
            if (m.kind() == MorphismExpr::Kind::Identity && ty.source == v) append(out, term(p.children[0], t, b));
            if (head == DExpr::Kind::Opb && t.kind() == DExpr::Kind::Struct && ty.source == t.name() &&
                m.kind() != MorphismExpr::Kind::Identity)
                append(out, term(p.children[0], DExpr::structure(ty.target), b));
            return out;
        }
        if (p.morph.kind == MPat::Kind::Meta && p.morph.unit_optional) {
            Bindings nb = b;
            nb[p.morph.meta] = MorphismExpr::identity(v);
            append(out, term(p.children[0], t, nb));
            return out;
        }
        if (p.morph.kind == MPat::Kind::Compose) {
            // Factorizations of the identity supplied by declared identities.
            for (const auto& id : ctx_.morphism_identities()) {
                if (!is_identity_morphism(ctx_, id.rhs) || morphism_type(ctx_, id.rhs).source != v) continue;
                if (id.lhs.kind() != MorphismExpr::Kind::Compose) continue;
                const auto& fs = id.lhs.factors();
                for (std::size_t i = 1; i < fs.size(); ++i) {
                    MorphismExpr outer = MorphismExpr::chain({fs.begin(), fs.begin() + i});
                    MorphismExpr inner = MorphismExpr::chain({fs.begin() + i, fs.end()});
                    for (const auto& b1 : morph(p.morph.parts[0], normalize_morphism(ctx_, outer), b))
                        for (const auto& b2 : morph(p.morph.parts[1], normalize_morphism(ctx_, inner), b1))
                            append(out, term(p.children[0], t, b2));
                }
            }
        }
        return out;
    }

    std::vector<Bindings> morph(const MPat& p, const MorphismExpr& m, const Bindings& b) {
        std::vector<Bindings> out;
        switch (p.kind) {
            case MPat::Kind::Meta: {
                auto it = b.find(p.meta);
                if (it != b.end()) {
                    const MorphismExpr* bound = std::get_if<MorphismExpr>(&it->second);
                    if (bound && same_morphism(ctx_, *bound, m)) out.push_back(b);
                } else {
                    Bindings nb = b;
                    nb[p.meta] = normalize_morphism(ctx_, m);
                    out.push_back(std::move(nb));
                }
                return out;
            }
            case MPat::Kind::Transpose: {
                MorphismExpr t;
                try {
                    t = normalize_morphism(ctx_, MorphismExpr::transpose(m));
                } catch (const std::exception&) {
                    return out;
                }
                return morph(p.parts[0], t, b);
            }
            case MPat::Kind::Compose:
                break;
        }
        const MPat& P = p.parts[0];
        const MPat& Q = p.parts[1];
        if (morph_bound(P, b) && morph_bound(Q, b)) {
            if (same_morphism(ctx_, MorphismExpr::compose(inst_morph(ctx_, P, b), inst_morph(ctx_, Q, b)), m))
                out.push_back(b);
            return out;
        }
        std::vector<std::pair<MorphismExpr, MorphismExpr>> splits;
        std::set<std::string> seen;
        auto add_split = [&](const MorphismExpr& o, const MorphismExpr& i) {
            MorphismExpr no = normalize_morphism(ctx_, o), ni = normalize_morphism(ctx_, i);
            if (seen.insert(no.render() + " | " + ni.render()).second) splits.emplace_back(no, ni);
        };
        std::vector<MorphismExpr> leaves = morphism_leaves(ctx_, m);
        for (std::size_t i = 1; i < leaves.size(); ++i)
            add_split(MorphismExpr::chain({leaves.begin(), leaves.begin() + i}),
                      MorphismExpr::chain({leaves.begin() + i, leaves.end()}));
        for (const auto& id : ctx_.morphism_identities()) {
            if (id.lhs.kind() != MorphismExpr::Kind::Compose || !same_morphism(ctx_, id.rhs, m)) continue;
            const auto& fs = id.lhs.factors();
            for (std::size_t i = 1; i < fs.size(); ++i)
                add_split(MorphismExpr::chain({fs.begin(), fs.begin() + i}), MorphismExpr::chain({fs.begin() + i, fs.end()}));
        }
        MorphismType ty = morphism_type(ctx_, m);
        if (morph_bound(P, b)) {
            std::vector<MorphismExpr> pl = morphism_leaves(ctx_, inst_morph(ctx_, P, b));
            if (pl.size() <= leaves.size() && std::equal(pl.begin(), pl.end(), leaves.begin())) {
                std::vector<MorphismExpr> rest(leaves.begin() + pl.size(), leaves.end());
                add_split(inst_morph(ctx_, P, b),
                          rest.empty() ? MorphismExpr::identity(ty.source) : MorphismExpr::chain(rest));
            }
        }
        if (morph_bound(Q, b)) {
            std::vector<MorphismExpr> ql = morphism_leaves(ctx_, inst_morph(ctx_, Q, b));
            if (ql.size() <= leaves.size() && std::equal(ql.rbegin(), ql.rend(), leaves.rbegin())) {
                std::vector<MorphismExpr> rest(leaves.begin(), leaves.end() - ql.size());
                add_split(rest.empty() ? MorphismExpr::identity(ty.target) : MorphismExpr::chain(rest),
                          inst_morph(ctx_, Q, b));
            }
        }
        for (const auto& [o, i] : splits)
            for (const auto& b1 : morph(P, o, b)) append(out, morph(Q, i, b1));
        return out;
    }

    std::vector<Bindings> sub(const SPat& p, const SubvarietyExpr& s, const Bindings& b) {
        std::vector<Bindings> out;
        switch (p.kind) {
            case SPat::Kind::Meta: {
                auto it = b.find(p.meta);
                if (it != b.end()) {
                    const SubvarietyExpr* bound = std::get_if<SubvarietyExpr>(&it->second);
                    if (bound && same_subvariety(ctx_, *bound, s)) out.push_back(b);
                } else {
                    Bindings nb = b;
                    nb[p.meta] = normalize_subvariety(ctx_, s);
                    out.push_back(std::move(nb));
                }
                return out;
            }
            case SPat::Kind::Reduce: {
                std::vector<SubvarietyExpr> cands;
                if (s.kind() == SubvarietyExpr::Kind::Reduce) cands.push_back(s.members()[0]);
                if (same_subvariety(ctx_, SubvarietyExpr::reduce(s), s)) cands.push_back(s);
                for (const auto& c : cands)
                    for (const auto& b1 : sub(p.parts[0], c, b))
                        if (same_subvariety(ctx_, inst_sub(ctx_, p, b1), s)) out.push_back(b1);
                return out;
            }
            case SPat::Kind::Intersect: {
                std::vector<std::pair<SubvarietyExpr, SubvarietyExpr>> cands;
                auto bipartitions = [&](const std::vector<SubvarietyExpr>& ms) {
                    const std::size_t k = ms.size();
                    if (k < 2 || k > 8) return;
                    for (std::size_t mask = 1; mask + 1 < (std::size_t(1) << k); ++mask) {
                        std::vector<SubvarietyExpr> a, c;
                        for (std::size_t i = 0; i < k; ++i) ((mask >> i) & 1 ? a : c).push_back(ms[i]);
                        cands.emplace_back(SubvarietyExpr::intersect_all(a), SubvarietyExpr::intersect_all(c));
                    }
                };
                if (s.kind() == SubvarietyExpr::Kind::Intersect) bipartitions(s.members());
                for (const auto& id : ctx_.subvariety_identities())
                    if (id.lhs.kind() == SubvarietyExpr::Kind::Intersect && same_subvariety(ctx_, id.rhs, s))
                        bipartitions(id.lhs.members());
                if (morph_free_bound(p.parts[0], b)) cands.emplace_back(inst_sub(ctx_, p.parts[0], b), s);
                if (morph_free_bound(p.parts[1], b)) cands.emplace_back(s, inst_sub(ctx_, p.parts[1], b));
                std::set<std::string> seen;
                for (const auto& [x, y] : cands) {
                    for (const auto& b1 : sub(p.parts[0], x, b)) {
                        for (const auto& b2 : sub(p.parts[1], y, b1)) {
                            if (!same_subvariety(ctx_, inst_sub(ctx_, p, b2), s)) continue;
                            std::string key = render_bindings(b2);
                            if (seen.insert(key).second) out.push_back(b2);
                        }
                    }
                }
                return out;
            }
            case SPat::Kind::Preimage: {
                std::vector<std::pair<MorphismExpr, SubvarietyExpr>> cands;
                if (s.kind() == SubvarietyExpr::Kind::Preimage) cands.emplace_back(s.morphism(), s.members()[0]);
                for (const auto& id : ctx_.subvariety_identities())
                    if (id.lhs.kind() == SubvarietyExpr::Kind::Preimage && same_subvariety(ctx_, id.rhs, s))
                        cands.emplace_back(id.lhs.morphism(), id.lhs.members()[0]);
                std::set<std::string> seen;
                for (const auto& [f, z] : cands) {
                    for (const auto& b1 : morph(p.morph[0], f, b)) {
                        for (const auto& b2 : sub(p.parts[0], normalize_subvariety(ctx_, z), b1)) {
                            if (!same_subvariety(ctx_, inst_sub(ctx_, p, b2), s)) continue;
                            if (seen.insert(render_bindings(b2)).second) out.push_back(b2);
                        }
                    }
                }
                if (out.empty() && morph_bound(p.morph[0], b) && morph_free_bound(p.parts[0], b) &&
                    same_subvariety(ctx_, inst_sub(ctx_, p, b), s))
                    out.push_back(b);
                return out;
            }
        }
        return out;
    }

    bool morph_free_bound(const SPat& p, const Bindings& b) {
        if (p.kind == SPat::Kind::Meta) return b.count(p.meta) > 0;
        for (const auto& q : p.parts)
            if (!morph_free_bound(q, b)) return false;
        for (const auto& m : p.morph)
            if (!morph_bound(m, b)) return false;
        return true;
    }

    std::vector<Bindings> fn(const FPat& p, const FunctionExpr& f, const Bindings& b) {
        std::vector<Bindings> out;
        if (p.kind == FPat::Kind::Meta) {
            auto it = b.find(p.meta);
            if (it != b.end()) {
                const FunctionExpr* bound = std::get_if<FunctionExpr>(&it->second);
                if (bound && same_function(ctx_, *bound, f)) out.push_back(b);
            } else {
                Bindings nb = b;
                nb[p.meta] = normalize_function(ctx_, f);
                out.push_back(std::move(nb));
            }
            return out;
        }
        try {
            // Everything already bound: compare normal forms directly.
            if (same_function(ctx_, inst_fn(ctx_, p, b), f)) out.push_back(b);
            return out;
        } catch (const std::runtime_error&) {
        }
        std::vector<std::pair<FunctionExpr, MorphismExpr>> cands;
        auto splits_of = [&](const FunctionExpr& g) {
            if (g.kind() != FunctionExpr::Kind::Pullback) return;
            // g = pb(base, chain); every cut of the chain gives a candidate.
            FunctionExpr base = g.base();
            std::vector<MorphismExpr> ls = {g.morphism()};
            if (g.morphism().kind() == MorphismExpr::Kind::Compose) ls = g.morphism().factors();
            for (std::size_t i = 0; i < ls.size(); ++i) {
                FunctionExpr head = i == 0 ? base
                                           : FunctionExpr::pullback(base, MorphismExpr::chain({ls.begin(), ls.begin() + i}));
                cands.emplace_back(head, MorphismExpr::chain({ls.begin() + i, ls.end()}));
            }
        };
        splits_of(f);
        for (const auto& id : ctx_.function_identities())
            if (same_function(ctx_, id.rhs, f)) splits_of(id.lhs);
        std::set<std::string> seen;
        for (const auto& [g, m] : cands) {
            for (const auto& b1 : fn(p.base[0], normalize_function(ctx_, g), b)) {
                for (const auto& b2 : morph(p.morph[0], normalize_morphism(ctx_, m), b1)) {
                    if (!same_function(ctx_, inst_fn(ctx_, p, b2), f)) continue;
                    if (seen.insert(render_bindings(b2)).second) out.push_back(b2);
                }
            }
        }
        return out;
    }

    static std::string render_bindings(const Bindings& b) {
        std::string s;
        for (const auto& [k, v] : b) s += k + "=" + render_binding(v) + ";";
        return s;
    }
};

}  // namespace

std::vector<Bindings> match_pattern(const GeometryContext& ctx, const Pattern& p, const DExpr& term,
                                    const Bindings& given) {
    try {
        std::vector<Bindings> out = Matcher(ctx, false).term(p, term, given);
        if (!out.empty()) return out;
        return Matcher(ctx, true).term(p, term, given);
    } catch (const ContextError&) {
        return {};
    }
}

DExpr instantiate(const GeometryContext& ctx, const Pattern& p, const Bindings& b) {
    switch (p.kind) {
        case Pattern::Kind::Meta: {
            const DExpr* t = get<DExpr>(b, p.meta);
            if (!t) throw std::runtime_error("unbound metavariable " + p.meta + " (binding required)");
            return *t;
        }
        case Pattern::Kind::Struct:
            return DExpr::structure(name_binding(b, p.meta));
        case Pattern::Kind::Exp:
            return DExpr::exp(name_binding(b, p.meta), normalize_function(ctx, inst_fn(ctx, p.fn, b)));
        case Pattern::Kind::Tensor:
            return DExpr::tensor(instantiate(ctx, p.children[0], b), instantiate(ctx, p.children[1], b));
        case Pattern::Kind::ETensor:
            return DExpr::etensor(instantiate(ctx, p.children[0], b), instantiate(ctx, p.children[1], b));
        case Pattern::Kind::Opb:
            return make_opb(ctx, inst_morph(ctx, p.morph, b), instantiate(ctx, p.children[0], b));
        case Pattern::Kind::Oim:
            return make_oim(ctx, inst_morph(ctx, p.morph, b), instantiate(ctx, p.children[0], b));
        case Pattern::Kind::RGamma:
            return DExpr::rgamma(normalize_subvariety(ctx, inst_sub(ctx, p.sub, b)), instantiate(ctx, p.children[0], b));
        case Pattern::Kind::Fourier: {
            Name bname = name_binding(b, p.bundle.meta);
            if (p.bundle.dual) {
                auto d = ctx.bundle(bname) ? ctx.bundle(bname)->dual : std::nullopt;
                if (!d) throw std::runtime_error("bundle " + bname + " has no dual");
                bname = *d;
            }
            return DExpr::fourier(bname, instantiate(ctx, p.children[0], b));
        }
    }
    throw std::logic_error("bad pattern");
}

std::string check_binding_sorts(const RewriteRule& rule, const Bindings& given) {
    for (const auto& [name, value] : given) {
        auto sort = rule.meta_sort(name);
        if (!sort) return "rule " + rule.id + " has no metavariable '" + name + "'";
        bool ok = false;
        switch (*sort) {
            case Sort::Term: ok = std::holds_alternative<DExpr>(value); break;
            case Sort::Morphism: ok = std::holds_alternative<MorphismExpr>(value); break;
            case Sort::Subvariety: ok = std::holds_alternative<SubvarietyExpr>(value); break;
            case Sort::Function: ok = std::holds_alternative<FunctionExpr>(value); break;
            case Sort::Variety:
            case Sort::Bundle: ok = std::holds_alternative<Name>(value); break;
        }
        if (!ok) return "binding for '" + name + "' must be a " + sort_name(*sort);
    }
    return "";
}

ApplyOutcome apply_rule(const GeometryContext& ctx, const RewriteRule& rule, const DExpr& subterm, Direction dir,
                        const Bindings& given, Mode mode) {
    ApplyOutcome out;
    if (std::string err = check_binding_sorts(rule, given); !err.empty()) {
        out.status = ApplyOutcome::Status::BadBinding;
        out.reason = err;
        return out;
    }
    Bindings normalized = given;
    try {
        for (auto& [name, value] : normalized) {
            if (auto* m = std::get_if<MorphismExpr>(&value)) *m = normalize_morphism(ctx, *m);
            else if (auto* s = std::get_if<SubvarietyExpr>(&value)) *s = normalize_subvariety(ctx, *s);
            else if (auto* f = std::get_if<FunctionExpr>(&value)) *f = normalize_function(ctx, *f);
        }
    } catch (const ContextError& e) {
        out.status = ApplyOutcome::Status::BadBinding;
        out.reason = e.what();
        return out;
    }

    const Pattern& from = dir == Direction::Forward ? rule.lhs : rule.rhs;
    const Pattern& to = dir == Direction::Forward ? rule.rhs : rule.lhs;
    std::vector<Bindings> matches = match_pattern(ctx, from, subterm, normalized);
    if (matches.empty()) {
        out.status = ApplyOutcome::Status::NoMatch;
        out.reason = std::string("rule ") + rule.id + " " + direction_name(dir) + " does not match " + subterm.render();
        return out;
    }
    Name variety;
    try {
        variety = well_formed(ctx, subterm);
    } catch (const std::exception& e) {
        out.status = ApplyOutcome::Status::IllFormed;
        out.reason = e.what();
        return out;
    }

    std::set<std::string> seen;
    std::string side_failure, build_failure;
    for (const auto& m : matches) {
        Completion c;
        try {
            c = rule.complete ? rule.complete(ctx, m, dir, mode) : Completion{{m}, ""};
        } catch (const std::exception& e) {
            c.failure = e.what();
        }
        if (c.candidates.empty() && side_failure.empty()) side_failure = c.failure;
        for (const auto& full : c.candidates) {
            RuleResult r;
            try {
                r.replacement = instantiate(ctx, to, full);
                Name v = well_formed(ctx, r.replacement);
                if (v != variety) throw std::runtime_error("result lives on " + v + " instead of " + variety);
                int fwd = rule.delta ? rule.delta(ctx, full) : 0;
                r.delta = dir == Direction::Forward ? fwd : -fwd;
            } catch (const std::exception& e) {
                if (build_failure.empty()) build_failure = e.what();
                continue;
            }
            r.bindings = full;
            std::string key = normal_form(ctx, r.replacement).key() + " #" + std::to_string(r.delta);
            if (seen.insert(key).second) out.results.push_back(std::move(r));
        }
    }
    if (out.results.empty()) {
        out.status = side_failure.empty() && !build_failure.empty() ? ApplyOutcome::Status::IllFormed
                                                                     : ApplyOutcome::Status::SideCondition;
        out.reason = !side_failure.empty() ? side_failure : build_failure;
        if (out.reason.empty()) out.reason = "side condition failed";
        return out;
    }
    if (out.results.size() > 1) {
        out.status = ApplyOutcome::Status::Ambiguous;
        out.reason = "rule " + rule.id + " matches in " + std::to_string(out.results.size()) +
                     " inequivalent ways; add bindings";
        return out;
    }
    out.status = ApplyOutcome::Status::Ok;
    return out;
}

}  // namespace dwork::rewrite
