#include "dwork/core/normalize.hpp"

#include <algorithm>
#include <set>

namespace dwork::core {

namespace {

constexpr int kRewriteLimit = 10000;

struct Leaf {
    Name atom;
    bool transposed = false;
    bool operator==(const Leaf& o) const { return atom == o.atom && transposed == o.transposed; }
};

MorphismExpr leaf_expr(const Leaf& l) {
    MorphismExpr a = MorphismExpr::atom(l.atom);
    return l.transposed ? MorphismExpr::transpose(a) : a;
}

void flatten(const GeometryContext& ctx, const MorphismExpr& m, bool transposed, std::vector<Leaf>& out) {
    switch (m.kind()) {
        case MorphismExpr::Kind::Atom: {
            if (!transposed) {
                out.push_back({m.name(), false});
                return;
            }
            const MorphismInfo* info = ctx.morphism(m.name());
            if (info && info->transpose) out.push_back({*info->transpose, false});
            else out.push_back({m.name(), true});
            return;
        }
        case MorphismExpr::Kind::Identity:
            return;
        case MorphismExpr::Kind::Compose:
            if (!transposed) {
                for (const auto& f : m.factors()) flatten(ctx, f, false, out);
            } else {
                for (auto it = m.factors().rbegin(); it != m.factors().rend(); ++it) flatten(ctx, *it, true, out);
            }
            return;
        case MorphismExpr::Kind::Transpose:
            flatten(ctx, m.argument(), !transposed, out);
            return;
    }
}

std::vector<Leaf> raw_leaves(const GeometryContext& ctx, const MorphismExpr& m) {
    std::vector<Leaf> out;
    flatten(ctx, m, false, out);
    return out;
}

bool rewrite_once(std::vector<Leaf>& seq, const std::vector<Leaf>& lhs, const std::vector<Leaf>& rhs) {
    if (lhs.empty() || lhs.size() > seq.size()) return false;
    for (std::size_t i = 0; i + lhs.size() <= seq.size(); ++i) {
        if (std::equal(lhs.begin(), lhs.end(), seq.begin() + i)) {
            std::vector<Leaf> next(seq.begin(), seq.begin() + i);
            next.insert(next.end(), rhs.begin(), rhs.end());
            next.insert(next.end(), seq.begin() + i + lhs.size(), seq.end());
            seq = std::move(next);
            return true;
        }
    }
    return false;
}

std::vector<Leaf> normalized_leaves(const GeometryContext& ctx, const MorphismExpr& m) {
    std::vector<Leaf> seq = raw_leaves(ctx, m);
    std::vector<std::pair<std::vector<Leaf>, std::vector<Leaf>>> rules;
    for (const auto& id : ctx.morphism_identities())
        rules.emplace_back(raw_leaves(ctx, id.lhs), raw_leaves(ctx, id.rhs));
    // Transposed identities, when every leaf has a declared transpose.
    std::size_t declared = rules.size();
    for (std::size_t k = 0; k < declared; ++k) {
        const auto& id = ctx.morphism_identities()[k];
        std::vector<Leaf> tl, tr;
        try {
            tl = raw_leaves(ctx, MorphismExpr::transpose(id.lhs));
            tr = raw_leaves(ctx, MorphismExpr::transpose(id.rhs));
        } catch (const ContextError&) {
            continue;
        }
        auto atomic = [](const std::vector<Leaf>& v) {
            return std::none_of(v.begin(), v.end(), [](const Leaf& l) { return l.transposed; });
        };
        if (tl.empty() || !atomic(tl) || !atomic(tr)) continue;
        bool known = false;
        for (std::size_t j = 0; j < rules.size(); ++j) known = known || rules[j].first == tl;
        if (!known) rules.emplace_back(std::move(tl), std::move(tr));
    }
    for (int iter = 0; iter < kRewriteLimit; ++iter) {
        bool changed = false;
        for (const auto& [lhs, rhs] : rules) {
            if (rewrite_once(seq, lhs, rhs)) {
                changed = true;
                break;
            }
        }
        if (!changed) return seq;
    }
    throw ContextError("morphism identities do not terminate on " + m.render());
}

Name dual_or_throw(const GeometryContext& ctx, const Name& v, const MorphismExpr& m) {
    auto d = ctx.dual_of(v);
    if (!d) throw ContextError("transpose of " + m.render() + " undefined: " + v + " has no declared dual");
    return *d;
}

}  // namespace

MorphismType morphism_type(const GeometryContext& ctx, const MorphismExpr& m) {
    switch (m.kind()) {
        case MorphismExpr::Kind::Atom: {
            const MorphismInfo* info = ctx.morphism(m.name());
            if (!info) throw ContextError("undeclared morphism '" + m.name() + "'");
            return {info->source, info->target};
        }
        case MorphismExpr::Kind::Identity:
            if (!ctx.variety(m.name())) throw ContextError("undeclared variety '" + m.name() + "'");
            return {m.name(), m.name()};
        case MorphismExpr::Kind::Compose: {
            const auto& fs = m.factors();
            MorphismType inner = morphism_type(ctx, fs.back());
            Name target = inner.target;
            for (int i = static_cast<int>(fs.size()) - 2; i >= 0; --i) {
                MorphismType t = morphism_type(ctx, fs[i]);
                if (t.source != target)
                    throw ContextError("cannot compose " + fs[i].render() + " after a map into " + target);
                target = t.target;
            }
            return {inner.source, target};
        }
        case MorphismExpr::Kind::Transpose: {
            const MorphismExpr& a = m.argument();
            if (a.kind() == MorphismExpr::Kind::Atom) {
                const MorphismInfo* info = ctx.morphism(a.name());
                if (info && info->transpose) return morphism_type(ctx, MorphismExpr::atom(*info->transpose));
            }
            MorphismType t = morphism_type(ctx, a);
            return {dual_or_throw(ctx, t.target, m), dual_or_throw(ctx, t.source, m)};
        }
    }
    throw ContextError("bad morphism");
}

MorphismExpr normalize_morphism(const GeometryContext& ctx, const MorphismExpr& m) {
    MorphismType t = morphism_type(ctx, m);
    std::vector<Leaf> seq = normalized_leaves(ctx, m);
    if (seq.empty()) return MorphismExpr::identity(t.source);
    std::vector<MorphismExpr> parts;
    for (const auto& l : seq) parts.push_back(leaf_expr(l));
    return MorphismExpr::chain(parts);
}

bool is_identity_morphism(const GeometryContext& ctx, const MorphismExpr& m) {
    return normalize_morphism(ctx, m).kind() == MorphismExpr::Kind::Identity;
}

std::vector<MorphismExpr> morphism_leaves(const GeometryContext& ctx, const MorphismExpr& m) {
    std::vector<MorphismExpr> out;
    for (const auto& l : normalized_leaves(ctx, m)) out.push_back(leaf_expr(l));
    return out;
}

bool same_morphism(const GeometryContext& ctx, const MorphismExpr& a, const MorphismExpr& b) {
    return normalize_morphism(ctx, a) == normalize_morphism(ctx, b);
}

// ---------------------------------------------------------------- functions

Name function_variety(const GeometryContext& ctx, const FunctionExpr& f) {
    if (f.kind() == FunctionExpr::Kind::Atom) {
        const FunctionInfo* info = ctx.function(f.name());
        if (!info) throw ContextError("undeclared function '" + f.name() + "'");
        return info->variety;
    }
    Name v = function_variety(ctx, f.base());
    MorphismType t = morphism_type(ctx, f.morphism());
    if (t.target != v)
        throw ContextError("cannot pull back " + f.base().render() + " (on " + v + ") along " +
                           f.morphism().render() + " (into " + t.target + ")");
    return t.source;
}

namespace {

void flatten_function(const GeometryContext& ctx, const FunctionExpr& f, Name& atom, std::vector<Leaf>& seq) {
    if (f.kind() == FunctionExpr::Kind::Atom) {
        atom = f.name();
        seq.clear();
        return;
    }
    flatten_function(ctx, f.base(), atom, seq);
    std::vector<Leaf> more = raw_leaves(ctx, f.morphism());
    seq.insert(seq.end(), more.begin(), more.end());
}

FunctionExpr build_function(const GeometryContext& ctx, const Name& atom, const std::vector<Leaf>& seq) {
    FunctionExpr base = FunctionExpr::atom(atom);
    if (seq.empty()) return base;
    std::vector<MorphismExpr> parts;
    for (const auto& l : seq) parts.push_back(leaf_expr(l));
    return FunctionExpr::pullback(base, normalize_morphism(ctx, MorphismExpr::chain(parts)));
}

}  // namespace

FunctionExpr normalize_function(const GeometryContext& ctx, const FunctionExpr& f) {
    function_variety(ctx, f);
    Name atom;
    std::vector<Leaf> seq;
    flatten_function(ctx, f, atom, seq);
    struct Rule {
        Name atom;
        std::vector<Leaf> prefix;
        Name rhs_atom;
        std::vector<Leaf> rhs_seq;
    };
    std::vector<Rule> rules;
    for (const auto& id : ctx.function_identities()) {
        Rule r;
        flatten_function(ctx, id.lhs, r.atom, r.prefix);
        flatten_function(ctx, id.rhs, r.rhs_atom, r.rhs_seq);
        rules.push_back(std::move(r));
    }
    for (int iter = 0; iter < kRewriteLimit; ++iter) {
        // Normalize the morphism part first so identities see normal leaves.
        if (!seq.empty()) {
            std::vector<MorphismExpr> parts;
            for (const auto& l : seq) parts.push_back(leaf_expr(l));
            seq = normalized_leaves(ctx, MorphismExpr::chain(parts));
        }
        bool changed = false;
        for (const auto& r : rules) {
            std::vector<Leaf> prefix = r.prefix;
            if (!prefix.empty()) {
                std::vector<MorphismExpr> parts;
                for (const auto& l : prefix) parts.push_back(leaf_expr(l));
                prefix = normalized_leaves(ctx, MorphismExpr::chain(parts));
            }
            if (r.atom != atom || prefix.size() > seq.size()) continue;
            if (!std::equal(prefix.begin(), prefix.end(), seq.begin())) continue;
            if (r.rhs_atom == atom && r.rhs_seq == prefix) continue;
            std::vector<Leaf> rest(seq.begin() + prefix.size(), seq.end());
            atom = r.rhs_atom;
            seq = r.rhs_seq;
            seq.insert(seq.end(), rest.begin(), rest.end());
            changed = true;
            break;
        }
        if (!changed) return build_function(ctx, atom, seq);
    }
    throw ContextError("function identities do not terminate on " + f.render());
}

bool same_function(const GeometryContext& ctx, const FunctionExpr& a, const FunctionExpr& b) {
    return normalize_function(ctx, a) == normalize_function(ctx, b);
}

// ---------------------------------------------------------------- subvarieties

Name subvariety_ambient(const GeometryContext& ctx, const SubvarietyExpr& s) {
    switch (s.kind()) {
        case SubvarietyExpr::Kind::Atom: {
            const SubvarietyInfo* info = ctx.subvariety(s.name());
            if (!info) throw ContextError("undeclared subvariety '" + s.name() + "'");
            return info->ambient;
        }
        case SubvarietyExpr::Kind::Reduce:
            return subvariety_ambient(ctx, s.members()[0]);
        case SubvarietyExpr::Kind::Intersect: {
            Name a = subvariety_ambient(ctx, s.members()[0]);
            for (const auto& m : s.members())
                if (subvariety_ambient(ctx, m) != a)
                    throw ContextError("intersection of subvarieties of different varieties: " + s.render());
            return a;
        }
        case SubvarietyExpr::Kind::Preimage: {
            Name z = subvariety_ambient(ctx, s.members()[0]);
            MorphismType t = morphism_type(ctx, s.morphism());
            if (t.target != z)
                throw ContextError("preimage along " + s.morphism().render() + " of a subvariety of " + z);
            return t.source;
        }
    }
    throw ContextError("bad subvariety");
}

namespace {

SubvarietyExpr structural_subvariety(const GeometryContext& ctx, const SubvarietyExpr& s,
                                     bool use_identities);

SubvarietyExpr apply_subvariety_identities(const GeometryContext& ctx, const SubvarietyExpr& s) {
    for (const auto& id : ctx.subvariety_identities()) {
        SubvarietyExpr lhs = structural_subvariety(ctx, id.lhs, false);
        SubvarietyExpr rhs = structural_subvariety(ctx, id.rhs, false);
        if (lhs == rhs) continue;
        if (s == lhs) return rhs;
        if (lhs.kind() == SubvarietyExpr::Kind::Intersect && s.kind() == SubvarietyExpr::Kind::Intersect) {
            std::vector<SubvarietyExpr> rest = s.members();
            bool all = true;
            for (const auto& m : lhs.members()) {
                auto it = std::find(rest.begin(), rest.end(), m);
                if (it == rest.end()) {
                    all = false;
                    break;
                }
                rest.erase(it);
            }
            if (all) {
                rest.push_back(rhs);
                return SubvarietyExpr::intersect_all(rest);
            }
        }
    }
    return s;
}

SubvarietyExpr structural_subvariety(const GeometryContext& ctx, const SubvarietyExpr& s,
                                     bool use_identities) {
    SubvarietyExpr cur;
    switch (s.kind()) {
        case SubvarietyExpr::Kind::Atom:
            cur = s;
            break;
        case SubvarietyExpr::Kind::Reduce: {
            SubvarietyExpr inner = structural_subvariety(ctx, s.members()[0], use_identities);
            if (inner.kind() == SubvarietyExpr::Kind::Reduce) {
                cur = inner;
            } else if (inner.kind() == SubvarietyExpr::Kind::Atom && ctx.subvariety(inner.name()) &&
                       ctx.subvariety(inner.name())->reduced) {
                cur = inner;
            } else {
                cur = SubvarietyExpr::reduce(inner);
            }
            break;
        }
        case SubvarietyExpr::Kind::Preimage: {
            MorphismExpr f = normalize_morphism(ctx, s.morphism());
            SubvarietyExpr z = structural_subvariety(ctx, s.members()[0], use_identities);
            if (f.kind() == MorphismExpr::Kind::Identity) {
                cur = z;
            } else if (z.kind() == SubvarietyExpr::Kind::Preimage) {
                cur = SubvarietyExpr::preimage(normalize_morphism(ctx, MorphismExpr::compose(z.morphism(), f)),
                                               z.members()[0]);
            } else {
                cur = SubvarietyExpr::preimage(f, z);
            }
            break;
        }
        case SubvarietyExpr::Kind::Intersect: {
            std::set<SubvarietyExpr> members;
            for (const auto& m : s.members()) {
                SubvarietyExpr n = structural_subvariety(ctx, m, use_identities);
                if (n.kind() == SubvarietyExpr::Kind::Intersect) members.insert(n.members().begin(), n.members().end());
                else members.insert(n);
            }
            cur = SubvarietyExpr::intersect_all(std::vector<SubvarietyExpr>(members.begin(), members.end()));
            break;
        }
    }
    if (!use_identities) return cur;
    for (int iter = 0; iter < kRewriteLimit; ++iter) {
        SubvarietyExpr next = apply_subvariety_identities(ctx, cur);
        if (next == cur) return cur;
        cur = structural_subvariety(ctx, next, true);
    }
    throw ContextError("subvariety identities do not terminate on " + s.render());
}

}  // namespace

SubvarietyExpr normalize_subvariety(const GeometryContext& ctx, const SubvarietyExpr& s) {
    subvariety_ambient(ctx, s);
    return structural_subvariety(ctx, s, true);
}

bool same_subvariety(const GeometryContext& ctx, const SubvarietyExpr& a, const SubvarietyExpr& b) {
    return normalize_subvariety(ctx, a) == normalize_subvariety(ctx, b);
}

// ---------------------------------------------------------------- modules

namespace {

Name wf(const GeometryContext& ctx, const DExpr& e, Path& path) {
    auto fail = [&](const std::string& msg) -> Name { throw WellFormednessError(path, msg); };
    auto sub = [&](std::size_t i) {
        path.push_back(static_cast<int>(i));
        Name v = wf(ctx, e.child(i), path);
        path.pop_back();
        return v;
    };
    try {
        switch (e.kind()) {
            case DExpr::Kind::Struct:
                if (!ctx.variety(e.name())) return fail("undeclared variety '" + e.name() + "'");
                return e.name();
            case DExpr::Kind::Exp: {
                if (!ctx.variety(e.name())) return fail("undeclared variety '" + e.name() + "'");
                Name v = function_variety(ctx, e.function());
                if (v != e.name()) return fail("function " + e.function().render() + " lives on " + v + ", not " + e.name());
                return v;
            }
            case DExpr::Kind::Var: {
                const ModuleInfo* m = ctx.module(e.name());
                if (!m) return fail("undeclared module '" + e.name() + "'");
                return m->variety;
            }
            case DExpr::Kind::Tensor: {
                Name a = sub(0), b = sub(1);
                if (a != b) return fail("Tensor of modules on " + a + " and " + b);
                return a;
            }
            case DExpr::Kind::ETensor: {
                Name a = sub(0), b = sub(1);
                const ProductInfo* p = ctx.product_of(a, b, std::nullopt);
                if (!p) return fail("no declared product " + a + " x " + b);
                return p->name;
            }
            case DExpr::Kind::Opb: {
                Name v = sub(0);
                MorphismType t = morphism_type(ctx, e.morphism());
                if (t.target != v)
                    return fail("Opb along " + e.morphism().render() + " into " + t.target + " of a module on " + v);
                return t.source;
            }
            case DExpr::Kind::Oim: {
                Name v = sub(0);
                MorphismType t = morphism_type(ctx, e.morphism());
                if (t.source != v)
                    return fail("Oim along " + e.morphism().render() + " from " + t.source + " of a module on " + v);
                return t.target;
            }
            case DExpr::Kind::RGamma: {
                Name v = sub(0);
                Name a = subvariety_ambient(ctx, e.subvariety());
                if (a != v) return fail("RGamma with " + e.subvariety().render() + " in " + a + " of a module on " + v);
                return v;
            }
            case DExpr::Kind::Fourier: {
                Name v = sub(0);
                const BundleInfo* b = ctx.bundle(e.name());
                if (!b) return fail("'" + e.name() + "' is not a declared bundle");
                if (!b->dual) return fail("bundle " + e.name() + " has no declared dual");
                if (v != e.name()) return fail("Fourier over " + e.name() + " of a module on " + v);
                return *b->dual;
            }
            case DExpr::Kind::Shift:
                return sub(0);
        }
    } catch (const ContextError& err) {
        return fail(err.what());
    }
    return fail("bad term");
}

DExpr symbols_nf(const GeometryContext& ctx, const DExpr& e) {
    std::vector<DExpr> kids;
    for (const auto& k : e.children()) kids.push_back(symbols_nf(ctx, k));
    switch (e.kind()) {
        case DExpr::Kind::Exp: return DExpr::exp(e.name(), normalize_function(ctx, e.function()));
        case DExpr::Kind::Opb: return DExpr::opb(normalize_morphism(ctx, e.morphism()), kids[0]);
        case DExpr::Kind::Oim: return DExpr::oim(normalize_morphism(ctx, e.morphism()), kids[0]);
        case DExpr::Kind::RGamma: return DExpr::rgamma(normalize_subvariety(ctx, e.subvariety()), kids[0]);
        default: return kids.empty() ? e : e.with_children(kids);
    }
}

FloatedTerm module_nf(const GeometryContext& ctx, const DExpr& e) {
    switch (e.kind()) {
        case DExpr::Kind::Shift: {
            FloatedTerm t = module_nf(ctx, e.child(0));
            t.shift += e.amount();
            return t;
        }
        case DExpr::Kind::Struct:
        case DExpr::Kind::Var:
            return {e, 0};
        case DExpr::Kind::Exp:
            return {DExpr::exp(e.name(), normalize_function(ctx, e.function())), 0};
        case DExpr::Kind::Opb: {
            MorphismExpr f = normalize_morphism(ctx, e.morphism());
            FloatedTerm t = module_nf(ctx, e.child(0));
            if (f.kind() == MorphismExpr::Kind::Identity) return t;
            if (t.core.kind() == DExpr::Kind::Struct) return {DExpr::structure(morphism_type(ctx, f).source), t.shift};
            return {DExpr::opb(f, t.core), t.shift};
        }
        case DExpr::Kind::Oim: {
            MorphismExpr f = normalize_morphism(ctx, e.morphism());
            FloatedTerm t = module_nf(ctx, e.child(0));
            if (f.kind() == MorphismExpr::Kind::Identity) return t;
            return {DExpr::oim(f, t.core), t.shift};
        }
        case DExpr::Kind::Tensor: {
            FloatedTerm a = module_nf(ctx, e.child(0));
            FloatedTerm b = module_nf(ctx, e.child(1));
            int s = a.shift + b.shift;
            if (a.core.kind() == DExpr::Kind::Struct) return {b.core, s};
            if (b.core.kind() == DExpr::Kind::Struct) return {a.core, s};
            if (b.core < a.core) std::swap(a, b);
            return {DExpr::tensor(a.core, b.core), s};
        }
        case DExpr::Kind::ETensor: {
            FloatedTerm a = module_nf(ctx, e.child(0));
            FloatedTerm b = module_nf(ctx, e.child(1));
            return {DExpr::etensor(a.core, b.core), a.shift + b.shift};
        }
        case DExpr::Kind::RGamma: {
            FloatedTerm t = module_nf(ctx, e.child(0));
            return {DExpr::rgamma(normalize_subvariety(ctx, e.subvariety()), t.core), t.shift};
        }
        case DExpr::Kind::Fourier: {
            FloatedTerm t = module_nf(ctx, e.child(0));
            return {DExpr::fourier(e.name(), t.core), t.shift};
        }
    }
    return {e, 0};
}

}  // namespace

Name well_formed(const GeometryContext& ctx, const DExpr& e) {
    Path path;
    return wf(ctx, e, path);
}

std::string FloatedTerm::key() const {
    return core.render() + " @" + std::to_string(shift);
}

std::string FloatedTerm::render() const {
    return shift == 0 ? core.render() : core.render() + "[" + std::to_string(shift) + "]";
}

FloatedTerm float_shifts(const DExpr& e) {
    if (e.kind() == DExpr::Kind::Shift) {
        FloatedTerm t = float_shifts(e.child(0));
        t.shift += e.amount();
        return t;
    }
    if (e.children().empty()) return {e, 0};
    std::vector<DExpr> kids;
    int total = 0;
    for (const auto& k : e.children()) {
        FloatedTerm t = float_shifts(k);
        kids.push_back(t.core);
        total += t.shift;
    }
    return {e.with_children(kids), total};
}

DExpr normalize_symbols(const GeometryContext& ctx, const DExpr& e) {
    return symbols_nf(ctx, e);
}

FloatedTerm normal_form(const GeometryContext& ctx, const DExpr& e) {
    return module_nf(ctx, e);
}

DExpr make_opb(const GeometryContext& ctx, const MorphismExpr& f, const DExpr& m) {
    MorphismExpr n = normalize_morphism(ctx, f);
    if (n.kind() == MorphismExpr::Kind::Identity) return m;
    return DExpr::opb(n, m);
}

DExpr make_oim(const GeometryContext& ctx, const MorphismExpr& f, const DExpr& m) {
    MorphismExpr n = normalize_morphism(ctx, f);
    if (n.kind() == MorphismExpr::Kind::Identity) return m;
    return DExpr::oim(n, m);
}

}  // namespace dwork::core
