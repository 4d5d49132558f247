#include "dwork/rewrite/rule.hpp"

#include <algorithm>
#include <set>

#include "dwork/core/normalize.hpp"

namespace dwork::rewrite {

using namespace dwork::core;

const char* sort_name(Sort s) {
    switch (s) {
        case Sort::Term: return "module term";
        case Sort::Morphism: return "morphism";
        case Sort::Subvariety: return "subvariety";
        case Sort::Function: return "function";
        case Sort::Variety: return "variety";
        case Sort::Bundle: return "bundle";
    }
    return "?";
}

std::string render_binding(const Binding& b) {
    return std::visit(
        [](const auto& v) -> std::string {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Name>) return v;
            else return v.render();
        },
        b);
}

const char* direction_name(Direction d) { return d == Direction::Forward ? "fwd" : "bwd"; }
const char* mode_name(Mode m) { return m == Mode::Strict ? "strict" : "allow-singular"; }

std::optional<Sort> RewriteRule::meta_sort(const std::string& name) const {
    for (const auto& [n, s] : metas)
        if (n == name) return s;
    return std::nullopt;
}

namespace {

// Pattern builders.
MPat mv(const std::string& n, bool unit_optional = false) {
    MPat p;
    p.meta = n;
    p.unit_optional = unit_optional;
    return p;
}
MPat mcomp(MPat outer, MPat inner) {
    MPat p;
    p.kind = MPat::Kind::Compose;
    p.parts = {std::move(outer), std::move(inner)};
    return p;
}
MPat mtr(MPat a) {
    MPat p;
    p.kind = MPat::Kind::Transpose;
    p.parts = {std::move(a)};
    return p;
}
SPat sv(const std::string& n) {
    SPat p;
    p.meta = n;
    return p;
}
SPat sand(SPat a, SPat b) {
    SPat p;
    p.kind = SPat::Kind::Intersect;
    p.parts = {std::move(a), std::move(b)};
    return p;
}
SPat spre(MPat f, SPat z) {
    SPat p;
    p.kind = SPat::Kind::Preimage;
    p.parts = {std::move(z)};
    p.morph = {std::move(f)};
    return p;
}
SPat sred(SPat a) {
    SPat p;
    p.kind = SPat::Kind::Reduce;
    p.parts = {std::move(a)};
    return p;
}
FPat fv(const std::string& n) {
    FPat p;
    p.meta = n;
    return p;
}
FPat fpb(FPat base, MPat m) {
    FPat p;
    p.kind = FPat::Kind::Pullback;
    p.base = {std::move(base)};
    p.morph = {std::move(m)};
    return p;
}
Pattern tv(const std::string& n) {
    Pattern p;
    p.meta = n;
    return p;
}
Pattern st(const std::string& var) {
    Pattern p;
    p.kind = Pattern::Kind::Struct;
    p.meta = var;
    return p;
}
Pattern ex(const std::string& var, FPat f) {
    Pattern p;
    p.kind = Pattern::Kind::Exp;
    p.meta = var;
    p.fn = std::move(f);
    return p;
}
Pattern binary(Pattern::Kind k, Pattern a, Pattern b) {
    Pattern p;
    p.kind = k;
    p.children = {std::move(a), std::move(b)};
    return p;
}
Pattern tn(Pattern a, Pattern b) { return binary(Pattern::Kind::Tensor, std::move(a), std::move(b)); }
Pattern et(Pattern a, Pattern b) { return binary(Pattern::Kind::ETensor, std::move(a), std::move(b)); }
Pattern opb(MPat m, Pattern a) {
    Pattern p;
    p.kind = Pattern::Kind::Opb;
    p.morph = std::move(m);
    p.children = {std::move(a)};
    return p;
}
Pattern oim(MPat m, Pattern a) {
    Pattern p = opb(std::move(m), std::move(a));
    p.kind = Pattern::Kind::Oim;
    return p;
}
Pattern rg(SPat s, Pattern a) {
    Pattern p;
    p.kind = Pattern::Kind::RGamma;
    p.sub = std::move(s);
    p.children = {std::move(a)};
    return p;
}
Pattern fo(const std::string& b, bool dual, Pattern a) {
    Pattern p;
    p.kind = Pattern::Kind::Fourier;
    p.bundle = {b, dual};
    p.children = {std::move(a)};
    return p;
}

std::string render_mpat(const MPat& p) {
    switch (p.kind) {
        case MPat::Kind::Meta: return p.meta;
        case MPat::Kind::Compose: return render_mpat(p.parts[0]) + " . " + render_mpat(p.parts[1]);
        case MPat::Kind::Transpose: return "tr(" + render_mpat(p.parts[0]) + ")";
    }
    return "?";
}

std::string render_spat(const SPat& p) {
    switch (p.kind) {
        case SPat::Kind::Meta: return p.meta;
        case SPat::Kind::Intersect: return render_spat(p.parts[0]) + " & " + render_spat(p.parts[1]);
        case SPat::Kind::Preimage: return "pre(" + render_mpat(p.morph[0]) + ", " + render_spat(p.parts[0]) + ")";
        case SPat::Kind::Reduce: return "red(" + render_spat(p.parts[0]) + ")";
    }
    return "?";
}

std::string render_fpat(const FPat& p) {
    if (p.kind == FPat::Kind::Meta) return p.meta;
    return "pb(" + render_fpat(p.base[0]) + ", " + render_mpat(p.morph[0]) + ")";
}

// ---- completion helpers ----

bool unify(const GeometryContext& ctx, Bindings& b, const std::string& meta, const Binding& value) {
    auto it = b.find(meta);
    if (it == b.end()) {
        b[meta] = value;
        return true;
    }
    const Binding& cur = it->second;
    if (cur.index() != value.index()) return false;
    if (auto* m = std::get_if<MorphismExpr>(&cur)) return same_morphism(ctx, *m, std::get<MorphismExpr>(value));
    if (auto* s = std::get_if<SubvarietyExpr>(&cur)) return same_subvariety(ctx, *s, std::get<SubvarietyExpr>(value));
    if (auto* f = std::get_if<FunctionExpr>(&cur)) return same_function(ctx, *f, std::get<FunctionExpr>(value));
    return render_binding(cur) == render_binding(value);
}

const MorphismExpr* bound_morph(const Bindings& b, const std::string& meta) {
    auto it = b.find(meta);
    return it == b.end() ? nullptr : std::get_if<MorphismExpr>(&it->second);
}

const DExpr* bound_term(const Bindings& b, const std::string& meta) {
    auto it = b.find(meta);
    return it == b.end() ? nullptr : std::get_if<DExpr>(&it->second);
}

const Name* bound_name(const Bindings& b, const std::string& meta) {
    auto it = b.find(meta);
    return it == b.end() ? nullptr : std::get_if<Name>(&it->second);
}

// Declared morphism behind a bound metavariable whose normal form is a single atom.
const MorphismInfo* atom_of(const GeometryContext& ctx, const Bindings& b, const std::string& meta) {
    const MorphismExpr* m = bound_morph(b, meta);
    if (!m) return nullptr;
    MorphismExpr n = normalize_morphism(ctx, *m);
    return n.kind() == MorphismExpr::Kind::Atom ? ctx.morphism(n.name()) : nullptr;
}

std::string binding_key(const Bindings& b) {
    std::string s;
    for (const auto& [k, v] : b) s += k + "=" + render_binding(v) + ";";
    return s;
}

struct Collector {
    Completion c;
    std::set<std::string> seen;
    void add(const Bindings& b) {
        if (seen.insert(binding_key(b)).second) c.candidates.push_back(b);
    }
    Completion done(const std::string& failure) {
        if (c.candidates.empty()) c.failure = failure;
        return c;
    }
};

Completion keep(const GeometryContext&, const Bindings& b, Direction, Mode) { return {{b}, ""}; }

Name term_variety(const GeometryContext& ctx, const Bindings& b, const std::string& meta) {
    const DExpr* t = bound_term(b, meta);
    if (!t) throw std::runtime_error("unbound metavariable " + meta);
    return well_formed(ctx, *t);
}

std::vector<const MorphismInfo*> morphisms_of_kind(const GeometryContext& ctx, MorphismKind k) {
    std::vector<const MorphismInfo*> out;
    for (const auto& m : ctx.morphisms())
        if (m.kind == k) out.push_back(&m);
    return out;
}

Completion complete_base_change(const GeometryContext& ctx, const Bindings& b, Mode mode, bool closed_h) {
    Collector col;
    std::string failure = "no declared Cartesian square fits";
    for (const auto& fact : ctx.cartesians()) {
        for (const CartesianFact& sq : {fact, fact.transposed()}) {
            Bindings nb = b;
            if (!unify(ctx, nb, "f", sq.f) || !unify(ctx, nb, "h", sq.h) || !unify(ctx, nb, "fp", sq.fp) ||
                !unify(ctx, nb, "hp", sq.hp))
                continue;
            if (closed_h) {
                const MorphismInfo* h = atom_of(ctx, nb, "h");
                if (!h || !h->closed_embedding()) {
                    failure = "square " + sq.name + ": " + sq.h.render() + " is not a closed embedding";
                    continue;
                }
            } else if (mode == Mode::Strict) {
                MorphismType f = morphism_type(ctx, sq.f), h = morphism_type(ctx, sq.h), fp = morphism_type(ctx, sq.fp);
                std::string bad;
                for (const Name& v : {f.source, f.target, h.source, fp.source}) {
                    const VarietyInfo* info = ctx.variety(v);
                    if (info && !info->smooth) {
                        bad = v;
                        break;
                    }
                }
                if (!bad.empty()) {
                    failure = "strict mode requires smooth corners; " + bad + " in square " + sq.name + " is singular";
                    continue;
                }
            }
            col.add(nb);
        }
    }
    return col.done(failure);
}

int base_change_delta(const GeometryContext& ctx, const Bindings& b) {
    MorphismType f = morphism_type(ctx, *bound_morph(b, "f"));
    MorphismType h = morphism_type(ctx, *bound_morph(b, "h"));
    MorphismType fp = morphism_type(ctx, *bound_morph(b, "fp"));
    return (ctx.dim(h.source) - ctx.dim(f.target)) - (ctx.dim(fp.source) - ctx.dim(f.source));
}

Completion complete_transposable(const GeometryContext& ctx, const Bindings& b) {
    const MorphismExpr* g = bound_morph(b, "g");
    if (!g) return {{}, "g must be bound"};
    if (is_identity_morphism(ctx, *g)) return {{}, "g is an identity"};
    MorphismType ty = morphism_type(ctx, *g);
    const BundleInfo* s = ctx.bundle(ty.source);
    const BundleInfo* t = ctx.bundle(ty.target);
    if (!s || !t || !s->dual || !t->dual) return {{}, g->render() + " is not a map of bundles with duals"};
    try {
        normalize_morphism(ctx, MorphismExpr::transpose(*g));
    } catch (const ContextError& e) {
        return {{}, e.what()};
    }
    Bindings nb = b;
    if (!unify(ctx, nb, "B1", ty.source) || !unify(ctx, nb, "B2", ty.target))
        return {{}, g->render() + " does not go from B1 to B2"};
    return {{nb}, ""};
}

struct Builder {
    std::vector<RewriteRule> rules;
    RewriteRule& add(const std::string& id, const std::string& title, int stratum,
                     std::vector<std::pair<std::string, Sort>> metas, Pattern lhs, Pattern rhs) {
        RewriteRule r;
        r.id = id;
        r.family = id.substr(0, id.find('.'));
        r.title = title;
        r.stratum = stratum;
        r.metas = std::move(metas);
        r.lhs = std::move(lhs);
        r.rhs = std::move(rhs);
        r.complete = keep;
        rules.push_back(std::move(r));
        return rules.back();
    }
};

constexpr Sort T = Sort::Term, Mo = Sort::Morphism, Su = Sort::Subvariety, Fn = Sort::Function, Va = Sort::Variety,
               Bu = Sort::Bundle;

std::vector<RewriteRule> build_catalogue() {
    Builder c;
    c.add("R1", "inverse image along a composite", 0, {{"f", Mo}, {"g", Mo}, {"N", T}},
          opb(mv("f"), opb(mv("g"), tv("N"))), opb(mcomp(mv("g"), mv("f")), tv("N")));
    c.add("R2", "direct image along a composite", 0, {{"f", Mo}, {"g", Mo}, {"M", T}},
          oim(mv("g"), oim(mv("f"), tv("M"))), oim(mcomp(mv("g"), mv("f")), tv("M")));
    c.add("R3", "inverse image is monoidal", 0, {{"f", Mo}, {"N", T}, {"N2", T}},
          opb(mv("f"), tn(tv("N"), tv("N2"))), tn(opb(mv("f"), tv("N")), opb(mv("f"), tv("N2"))));
    c.add("R4", "projection formula", 1, {{"f", Mo}, {"M", T}, {"N", T}},
          oim(mv("f"), tn(tv("M"), opb(mv("f"), tv("N")))), tn(oim(mv("f"), tv("M")), tv("N")));

    auto& r5 = c.add("R5", "base change", 1, {{"f", Mo}, {"h", Mo}, {"fp", Mo}, {"hp", Mo}, {"M", T}},
                     oim(mv("fp"), opb(mv("hp"), tv("M"))), opb(mv("h"), oim(mv("f"), tv("M"))));
    r5.complete = [](const GeometryContext& ctx, const Bindings& b, Direction, Mode mode) {
        return complete_base_change(ctx, b, mode, false);
    };
    r5.delta = base_change_delta;
    auto& r5c = c.add("R5c", "base change along a closed embedding", 0,
                      {{"f", Mo}, {"h", Mo}, {"fp", Mo}, {"hp", Mo}, {"M", T}},
                      oim(mv("fp"), opb(mv("hp"), tv("M"))), opb(mv("h"), oim(mv("f"), tv("M"))));
    r5c.complete = [](const GeometryContext& ctx, const Bindings& b, Direction, Mode mode) {
        return complete_base_change(ctx, b, mode, true);
    };
    r5c.delta = base_change_delta;

    auto& r6 = c.add("R6", "local cohomology as a tensor product", 0, {{"S", Su}, {"M", T}, {"X", Va}},
                     rg(sv("S"), tv("M")), tn(tv("M"), rg(sv("S"), st("X"))));
    r6.complete = [](const GeometryContext& ctx, const Bindings& b, Direction, Mode) -> Completion {
        Bindings nb = b;
        const SubvarietyExpr& s = std::get<SubvarietyExpr>(b.at("S"));
        if (!unify(ctx, nb, "X", subvariety_ambient(ctx, s))) return {{}, "X is not the ambient variety of S"};
        return {{nb}, ""};
    };
    c.add("R7", "iterated local cohomology", 0, {{"S", Su}, {"S2", Su}, {"M", T}},
          rg(sv("S"), rg(sv("S2"), tv("M"))), rg(sand(sv("S"), sv("S2")), tv("M")));
    c.add("R8", "direct image of local cohomology", 0, {{"f", Mo}, {"Z", Su}, {"M", T}},
          oim(mv("f"), rg(spre(mv("f"), sv("Z")), tv("M"))), rg(sv("Z"), oim(mv("f"), tv("M"))));

    auto& r10 = c.add("R10", "local cohomology along a closed embedding", 0, {{"Y", Su}, {"j", Mo}, {"M", T}},
                      rg(sv("Y"), tv("M")), oim(mv("j"), opb(mv("j"), tv("M"))));
    r10.complete = [](const GeometryContext& ctx, const Bindings& b, Direction, Mode mode) {
        Collector col;
        std::string failure = "no closed embedding has this image";
        for (const auto& s : ctx.subvarieties()) {
            if (!s.image_of) continue;
            Bindings nb = b;
            if (!unify(ctx, nb, "Y", SubvarietyExpr::atom(s.name)) ||
                !unify(ctx, nb, "j", MorphismExpr::atom(*s.image_of)))
                continue;
            const MorphismInfo* j = ctx.morphism(*s.image_of);
            if (!j || !j->closed_embedding()) {
                failure = *s.image_of + " is not a closed embedding";
                continue;
            }
            const VarietyInfo* src = ctx.variety(j->source);
            if (mode == Mode::Strict && src && !src->smooth) {
                failure = "strict mode requires a smooth source; " + j->source + " is singular";
                continue;
            }
            col.add(nb);
        }
        return col.done(failure);
    };
    r10.delta = [](const GeometryContext& ctx, const Bindings& b) {
        const MorphismInfo* j = atom_of(ctx, b, "j");
        return -ctx.embedding_codim(j->name).value_or(0);
    };

    auto& r11 = c.add("R11", "inverse image of an exponential", 0, {{"f", Mo}, {"Y", Va}, {"X", Va}, {"psi", Fn}},
                      opb(mv("f"), ex("Y", fv("psi"))), ex("X", fpb(fv("psi"), mv("f"))));
    r11.complete = [](const GeometryContext& ctx, const Bindings& b, Direction, Mode) -> Completion {
        MorphismType ty = morphism_type(ctx, *bound_morph(b, "f"));
        Bindings nb = b;
        if (!unify(ctx, nb, "X", ty.source) || !unify(ctx, nb, "Y", ty.target))
            return {{}, "f does not go from X to Y"};
        return {{nb}, ""};
    };

    auto& r12 = c.add("R12", "Fourier transform by its kernel", 0,
                      {{"B", Bu}, {"N", T}, {"p", Mo}, {"q", Mo}, {"gam", Mo}, {"L", Va}, {"t", Fn}},
                      fo("B", false, tv("N")),
                      oim(mv("q"), tn(opb(mv("p"), tv("N")), opb(mv("gam"), ex("L", fv("t"))))));
    r12.complete = [](const GeometryContext& ctx, const Bindings& b, Direction, Mode) {
        Collector col;
        for (const auto& prod : ctx.products()) {
            if (!prod.base) continue;
            const BundleInfo* left = ctx.bundle(prod.left);
            if (!left || !left->dual || *left->dual != prod.right) continue;
            // The kernel of either factor lives on the same fibre product.
            for (int side : {1, 2}) {
                const Name& bundle = side == 1 ? prod.left : prod.right;
                for (const auto& p : ctx.morphisms()) {
                    if (p.kind != MorphismKind::Factor || p.factor != side || p.source != prod.name) continue;
                    for (const auto& q : ctx.morphisms()) {
                        if (q.kind != MorphismKind::Factor || q.factor != 3 - side || q.source != prod.name) continue;
                        for (const auto& g : ctx.morphisms()) {
                            if (g.kind != MorphismKind::Pairing || g.source != prod.name) continue;
                            for (const auto& t : ctx.functions()) {
                                if (!t.coordinate || t.variety != g.target) continue;
                                Bindings nb = b;
                                if (unify(ctx, nb, "B", bundle) && unify(ctx, nb, "p", MorphismExpr::atom(p.name)) &&
                                    unify(ctx, nb, "q", MorphismExpr::atom(q.name)) &&
                                    unify(ctx, nb, "gam", MorphismExpr::atom(g.name)) &&
                                    unify(ctx, nb, "L", g.target) && unify(ctx, nb, "t", FunctionExpr::atom(t.name)))
                                    col.add(nb);
                            }
                        }
                    }
                }
            }
        }
        return col.done("no declared Fourier kernel fits");
    };

    auto& r13 = c.add("R13", "Fourier inversion", 0, {{"B", Bu}, {"N", T}, {"n", Mo}},
                      fo("B", true, fo("B", false, tv("N"))), opb(mv("n"), tv("N")));
    r13.complete = [](const GeometryContext& ctx, const Bindings& b, Direction, Mode) {
        Collector col;
        for (const MorphismInfo* n : morphisms_of_kind(ctx, MorphismKind::Negation)) {
            Bindings nb = b;
            if (unify(ctx, nb, "n", MorphismExpr::atom(n->name)) && unify(ctx, nb, "B", n->source)) col.add(nb);
        }
        return col.done("no negation map is declared on B");
    };
    auto& r14 = c.add("R14", "Fourier transform of a direct image", 1, {{"B1", Bu}, {"B2", Bu}, {"g", Mo}, {"N", T}},
                      fo("B2", false, oim(mv("g"), tv("N"))), opb(mtr(mv("g")), fo("B1", false, tv("N"))));
    r14.complete = [](const GeometryContext& ctx, const Bindings& b, Direction, Mode) {
        return complete_transposable(ctx, b);
    };
    auto& r15 = c.add("R15", "Fourier transform of an inverse image", 1, {{"B1", Bu}, {"B2", Bu}, {"g", Mo}, {"P", T}},
                      fo("B1", false, opb(mv("g"), tv("P"))), oim(mtr(mv("g")), fo("B2", false, tv("P"))));
    r15.complete = [](const GeometryContext& ctx, const Bindings& b, Direction, Mode) {
        return complete_transposable(ctx, b);
    };

    auto zero_section_data = [](const GeometryContext& ctx, const Bindings& b) {
        Collector col;
        for (const MorphismInfo* z : morphisms_of_kind(ctx, MorphismKind::ZeroSection)) {
            auto dual = ctx.bundle(z->target) ? ctx.bundle(z->target)->dual : std::nullopt;
            if (!dual) continue;
            for (const MorphismInfo* pi : morphisms_of_kind(ctx, MorphismKind::Projection)) {
                if (pi->source != *dual || pi->target != z->source) continue;
                Bindings nb = b;
                if (unify(ctx, nb, "iota", MorphismExpr::atom(z->name)) && unify(ctx, nb, "B", *dual) &&
                    unify(ctx, nb, "pi", MorphismExpr::atom(pi->name)))
                    col.add(nb);
            }
        }
        return col.done("no zero section and dual projection fit");
    };
    auto& r16 = c.add("R16", "direct image along a zero section", 0, {{"iota", Mo}, {"pi", Mo}, {"B", Bu}, {"M", T}},
                      oim(mv("iota"), tv("M")), fo("B", false, opb(mv("pi"), tv("M"))));
    r16.complete = [zero_section_data](const GeometryContext& ctx, const Bindings& b, Direction, Mode) {
        return zero_section_data(ctx, b);
    };
    auto& r17 = c.add("R17", "restriction to a zero section", 0, {{"iota", Mo}, {"pi", Mo}, {"B", Bu}, {"Q", T}},
                      opb(mv("iota"), tv("Q")), oim(mv("pi"), fo("B", true, tv("Q"))));
    r17.complete = [zero_section_data](const GeometryContext& ctx, const Bindings& b, Direction, Mode) {
        return zero_section_data(ctx, b);
    };
    c.add("R18", "local cohomology sees only the reduced support", 0, {{"S", Su}, {"M", T}},
          rg(sv("S"), tv("M")), rg(sred(sv("S")), tv("M")));

    auto identity_of_term = [](const GeometryContext& ctx, const Bindings& b, const char* morph,
                               const char* term) -> Completion {
        Bindings nb = b;
        Name v = term_variety(ctx, b, term);
        if (!unify(ctx, nb, morph, MorphismExpr::identity(v))) return {{}, std::string(morph) + " is not an identity"};
        return {{nb}, ""};
    };
    auto& r19a = c.add("R19.opb-id", "inverse image along an identity", 0, {{"f", Mo}, {"M", T}},
                       opb(mv("f"), tv("M")), tv("M"));
    r19a.complete = [identity_of_term](const GeometryContext& ctx, const Bindings& b, Direction, Mode) {
        return identity_of_term(ctx, b, "f", "M");
    };
    auto& r19b = c.add("R19.oim-id", "direct image along an identity", 0, {{"f", Mo}, {"M", T}},
                       oim(mv("f"), tv("M")), tv("M"));
    r19b.complete = r19a.complete;
    auto& r19c = c.add("R19.tensor-unit", "the structure sheaf is a tensor unit", 0, {{"M", T}, {"X", Va}},
                       tn(tv("M"), st("X")), tv("M"));
    r19c.complete = [](const GeometryContext& ctx, const Bindings& b, Direction, Mode) -> Completion {
        Bindings nb = b;
        if (!unify(ctx, nb, "X", term_variety(ctx, b, "M"))) return {{}, "M does not live on X"};
        return {{nb}, ""};
    };
    auto& r19d = c.add("R19.opb-struct", "inverse image of a structure sheaf", 0, {{"f", Mo}, {"Y", Va}, {"X", Va}},
                       opb(mv("f"), st("Y")), st("X"));
    r19d.complete = [](const GeometryContext& ctx, const Bindings& b, Direction, Mode) {
        Collector col;
        if (const MorphismExpr* f = bound_morph(b, "f")) {
            MorphismType ty = morphism_type(ctx, *f);
            Bindings nb = b;
            if (unify(ctx, nb, "X", ty.source) && unify(ctx, nb, "Y", ty.target)) col.add(nb);
            return col.done("f does not go from X to Y");
        }
        const Name* x = bound_name(b, "X");
        for (const auto& m : ctx.morphisms()) {
            if (!x || m.source != *x) continue;
            Bindings nb = b;
            if (unify(ctx, nb, "f", MorphismExpr::atom(m.name)) && unify(ctx, nb, "Y", m.target)) col.add(nb);
        }
        return col.done("no morphism leaves X");
    };

    auto factor_data = [](int which) {
        return [which](const GeometryContext& ctx, const Bindings& b, Direction, Mode) {
            Collector col;
            Name mv = term_variety(ctx, b, "M");
            for (const auto& prod : ctx.products()) {
                if (prod.base) continue;
                const Name& kept = which == 1 ? prod.left : prod.right;
                const Name& other = which == 1 ? prod.right : prod.left;
                if (kept != mv) continue;
                for (const auto& p : ctx.morphisms()) {
                    if (p.kind != MorphismKind::Factor || p.factor != which || p.source != prod.name) continue;
                    Bindings nb = b;
                    if (unify(ctx, nb, "p", MorphismExpr::atom(p.name)) && unify(ctx, nb, "Y", other)) col.add(nb);
                }
            }
            return col.done("no product projection fits");
        };
    };
    auto& r20a = c.add("R20.opb-factor1", "inverse image along a first projection", 0, {{"p", Mo}, {"M", T}, {"Y", Va}},
                       opb(mv("p"), tv("M")), et(tv("M"), st("Y")));
    r20a.complete = factor_data(1);
    auto& r20b = c.add("R20.opb-factor2", "inverse image along a second projection", 0,
                       {{"p", Mo}, {"M", T}, {"Y", Va}}, opb(mv("p"), tv("M")), et(st("Y"), tv("M")));
    r20b.complete = factor_data(2);
    auto product_map_data = [](const GeometryContext& ctx, const Bindings& b, Direction, Mode) {
        Collector col;
        for (const MorphismInfo* m : morphisms_of_kind(ctx, MorphismKind::ProductMap)) {
            Bindings nb = b;
            if (unify(ctx, nb, "fg", MorphismExpr::atom(m->name)) && unify(ctx, nb, "a", m->left) &&
                unify(ctx, nb, "b", m->right))
                col.add(nb);
        }
        return col.done("no declared product map fits");
    };
    auto& r20c = c.add("R20.oim-prod", "direct image of an external product", 0,
                       {{"fg", Mo}, {"a", Mo}, {"b", Mo}, {"A", T}, {"B", T}}, oim(mv("fg"), et(tv("A"), tv("B"))),
                       et(oim(mv("a", true), tv("A")), oim(mv("b", true), tv("B"))));
    r20c.complete = product_map_data;
    auto& r20d = c.add("R20.opb-prod", "inverse image of an external product", 0,
                       {{"fg", Mo}, {"a", Mo}, {"b", Mo}, {"A", T}, {"B", T}}, opb(mv("fg"), et(tv("A"), tv("B"))),
                       et(opb(mv("a", true), tv("A")), opb(mv("b", true), tv("B"))));
    r20d.complete = product_map_data;
    auto& r20e = c.add("R20.diagonal", "restricting an external product to the diagonal", 0,
                       {{"d", Mo}, {"M", T}, {"N", T}}, opb(mv("d"), et(tv("M"), tv("N"))), tn(tv("M"), tv("N")));
    r20e.complete = [](const GeometryContext& ctx, const Bindings& b, Direction, Mode) {
        Collector col;
        Name v = term_variety(ctx, b, "M");
        for (const MorphismInfo* d : morphisms_of_kind(ctx, MorphismKind::Diagonal)) {
            if (d->source != v) continue;
            Bindings nb = b;
            if (unify(ctx, nb, "d", MorphismExpr::atom(d->name))) col.add(nb);
        }
        return col.done("no diagonal of the right variety is declared");
    };

    std::sort(c.rules.begin(), c.rules.end(), [](const RewriteRule& a, const RewriteRule& b) {
        auto num = [](const std::string& id) { return std::stoi(id.substr(1)); };
        if (num(a.id) != num(b.id)) return num(a.id) < num(b.id);
        return a.id < b.id;
    });
    return c.rules;
}

}  // namespace

std::string render_pattern(const Pattern& p) {
    switch (p.kind) {
        case Pattern::Kind::Meta: return p.meta;
        case Pattern::Kind::Struct: return "O[" + p.meta + "]";
        case Pattern::Kind::Exp: return "Exp[" + p.meta + "](" + render_fpat(p.fn) + ")";
        case Pattern::Kind::Tensor:
            return "Tensor(" + render_pattern(p.children[0]) + ", " + render_pattern(p.children[1]) + ")";
        case Pattern::Kind::ETensor:
            return "ETensor(" + render_pattern(p.children[0]) + ", " + render_pattern(p.children[1]) + ")";
        case Pattern::Kind::Opb: return "Opb[" + render_mpat(p.morph) + "](" + render_pattern(p.children[0]) + ")";
        case Pattern::Kind::Oim: return "Oim[" + render_mpat(p.morph) + "](" + render_pattern(p.children[0]) + ")";
        case Pattern::Kind::RGamma:
            return "RGamma[" + render_spat(p.sub) + "](" + render_pattern(p.children[0]) + ")";
        case Pattern::Kind::Fourier:
            return "Fourier[" + std::string(p.bundle.dual ? "dual " : "") + p.bundle.meta + "](" +
                   render_pattern(p.children[0]) + ")";
    }
    return "?";
}

const std::vector<RewriteRule>& catalogue() {
    static const std::vector<RewriteRule> rules = build_catalogue();
    return rules;
}

const RewriteRule* find_rule(const std::string& id) {
    for (const auto& r : catalogue())
        if (r.id == id) return &r;
    return nullptr;
}

}  // namespace dwork::rewrite
