#include <map>
#include <set>

#include "dwork/core/normalize.hpp"
#include "dwork/dsl/document.hpp"

namespace dwork::dsl {

using namespace dwork::core;
using rewrite::Direction;
using rewrite::Mode;
using rewrite::Move;
using rewrite::ProofStep;
using rewrite::Sort;

namespace {

const std::set<std::string> kReserved = {"O",  "Exp", "Tensor", "ETensor", "Opb", "Oim", "RGamma",
                                         "Fourier", "tr", "id",  "pb",     "pre",     "red"};

class Parser {
public:
    explicit Parser(const std::string& text) : toks_(lex(text)) {}

    Document run() {
        while (peek().kind != Token::Kind::End) statement();
        try {
            ctx_.finalize();
        } catch (const ContextError& e) {
            throw ParseError(blame(e.what()), e.what());
        }
        return std::move(doc_);
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    GeometryContext ctx_;
    Document doc_;
    std::set<std::string> goals_, scripted_;

    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    bool at(const std::string& text) const {
        const Token& t = peek();
        return (t.kind == Token::Kind::Punct || t.kind == Token::Kind::Ident) && t.text == text;
    }
    bool accept(const std::string& text) {
        if (!at(text)) return false;
        next();
        return true;
    }
    [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(t.span, msg); }
    std::string describe(const Token& t) const {
        return t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    }
    const Token& expect(const std::string& text) {
        if (!at(text)) fail(peek(), "expected '" + text + "', found " + describe(peek()));
        return next();
    }
    std::string ident(const std::string& what) {
        if (peek().kind != Token::Kind::Ident) fail(peek(), "expected " + what + ", found " + describe(peek()));
        return next().text;
    }
    std::string new_name(const std::string& what) {
        const Token& t = peek();
        std::string n = ident(what);
        if (kReserved.count(n)) fail(t, "'" + n + "' is reserved");
        return n;
    }
    int number(const std::string& what) {
        if (peek().kind != Token::Kind::Number) fail(peek(), "expected " + what + ", found " + describe(peek()));
        const Token& t = next();
        try {
            return std::stoi(t.text);
        } catch (const std::exception&) {
            fail(t, "number out of range");
        }
    }

    Span blame(const std::string& message) const {
        for (const auto& item : doc_.items) {
            if (const auto* m = std::get_if<MorphismDecl>(&item.stmt))
                if (message.find("'" + m->info.name + "'") != std::string::npos) return item.span;
        }
        return peek().span;
    }

    // ---- names ----
    std::string variety_name() {
        const Token& t = peek();
        std::string n = ident("variety name");
        if (!ctx_.variety(n)) fail(t, "unknown variety '" + n + "'");
        return n;
    }
    std::string bundle_name() {
        const Token& t = peek();
        std::string n = ident("bundle name");
        if (!ctx_.bundle(n)) fail(t, "unknown bundle '" + n + "'");
        return n;
    }

    // ---- symbols ----
    MorphismExpr morph_primary() {
        const Token& t = peek();
        if (accept("(")) {
            MorphismExpr m = morphism();
            expect(")");
            return m;
        }
        std::string n = ident("morphism");
        if (n == "id") {
            expect("[");
            std::string v = variety_name();
            expect("]");
            return MorphismExpr::identity(v);
        }
        if (n == "tr") {
            expect("(");
            MorphismExpr m = morphism();
            expect(")");
            return MorphismExpr::transpose(m);
        }
        if (!ctx_.morphism(n)) fail(t, "unknown morphism '" + n + "'");
        return MorphismExpr::atom(n);
    }
    MorphismExpr morphism() {
        std::vector<MorphismExpr> fs{morph_primary()};
        while (accept(".")) fs.push_back(morph_primary());
        return MorphismExpr::chain(fs);
    }

    SubvarietyExpr sub_primary() {
        const Token& t = peek();
        if (accept("(")) {
            SubvarietyExpr s = subvariety();
            expect(")");
            return s;
        }
        std::string n = ident("subvariety");
        if (n == "red") {
            expect("(");
            SubvarietyExpr s = subvariety();
            expect(")");
            return SubvarietyExpr::reduce(s);
        }
        if (n == "pre") {
            expect("(");
            MorphismExpr f = morphism();
            expect(",");
            SubvarietyExpr z = subvariety();
            expect(")");
            return SubvarietyExpr::preimage(f, z);
        }
        if (!ctx_.subvariety(n)) fail(t, "unknown subvariety '" + n + "'");
        return SubvarietyExpr::atom(n);
    }
    SubvarietyExpr subvariety() {
        std::vector<SubvarietyExpr> ms{sub_primary()};
        while (accept("&")) ms.push_back(sub_primary());
        return SubvarietyExpr::intersect_all(ms);
    }

    FunctionExpr function() {
        const Token& t = peek();
        std::string n = ident("function");
        if (n == "pb") {
            expect("(");
            FunctionExpr phi = function();
            expect(",");
            MorphismExpr m = morphism();
            expect(")");
            return FunctionExpr::pullback(phi, m);
        }
        if (!ctx_.function(n)) fail(t, "unknown function '" + n + "'");
        return FunctionExpr::atom(n);
    }

    DExpr term() {
        DExpr e = term_primary();
        while (at("[")) {
            next();
            int k = number("shift amount");
            expect("]");
            e = DExpr::shift(e, k);
        }
        return e;
    }
    DExpr term_primary() {
        const Token& t = peek();
        if (accept("(")) {
            DExpr e = term();
            expect(")");
            return e;
        }
        std::string n = ident("module term");
        auto arg = [&] {
            expect("(");
            DExpr e = term();
            expect(")");
            return e;
        };
        if (n == "O") {
            expect("[");
            std::string v = variety_name();
            expect("]");
            return DExpr::structure(v);
        }
        if (n.rfind("O_", 0) == 0 && n.size() > 2) {
            std::string v = n.substr(2);
            if (!ctx_.variety(v)) fail(t, "unknown variety '" + v + "'");
            return DExpr::structure(v);
        }
        if (n == "Exp") {
            expect("[");
            std::string v = variety_name();
            expect("]");
            expect("(");
            FunctionExpr f = function();
            expect(")");
            return DExpr::exp(v, f);
        }
        if (n == "Tensor" || n == "ETensor") {
            expect("(");
            DExpr a = term();
            expect(",");
            DExpr b = term();
            expect(")");
            return n == "Tensor" ? DExpr::tensor(a, b) : DExpr::etensor(a, b);
        }
        if (n == "Opb" || n == "Oim") {
            expect("[");
            MorphismExpr m = morphism();
            expect("]");
            DExpr a = arg();
            return n == "Opb" ? DExpr::opb(m, a) : DExpr::oim(m, a);
        }
        if (n == "RGamma") {
            expect("[");
            SubvarietyExpr s = subvariety();
            expect("]");
            return DExpr::rgamma(s, arg());
        }
        if (n == "Fourier") {
            expect("[");
            std::string b = bundle_name();
            expect("]");
            return DExpr::fourier(b, arg());
        }
        if (!ctx_.module(n)) fail(t, "unknown module '" + n + "'");
        return DExpr::var(n);
    }

    // ---- statements ----
    void push(Statement s, const Token& first) {
        Span span = first.span;
        const Token& last = toks_[pos_ - 1];
        span.length = last.span.offset + last.span.length - first.span.offset;
        doc_.items.push_back({std::move(s), span});
    }

    void declare_checked(const Statement& s, const Token& first) {
        try {
            declare(ctx_, s);
        } catch (const ContextError& e) {
            Span span = first.span;
            const Token& last = toks_[pos_ - 1];
            span.length = last.span.offset + last.span.length - first.span.offset;
            throw ParseError(span, e.what());
        }
    }

    void statement() {
        const Token& first = peek();
        std::string kw = ident("a declaration keyword");
        Statement s;
        if (kw == "variety") s = variety_decl();
        else if (kw == "bundle") s = bundle_decl();
        else if (kw == "product") s = product_decl();
        else if (kw == "morphism") s = morphism_decl();
        else if (kw == "subvariety") s = subvariety_decl();
        else if (kw == "function") s = function_decl();
        else if (kw == "module") s = module_decl();
        else if (kw == "cartesian") s = cartesian_decl();
        else if (kw == "identity") s = identity_decl();
        else if (kw == "goal") s = goal_decl(first);
        else if (kw == "script") {
            s = script_decl(first);
            push(std::move(s), first);
            return;
        } else fail(first, "unknown declaration '" + kw + "'");
        expect(";");
        declare_checked(s, first);
        push(std::move(s), first);
    }

    VarietyDecl variety_decl() {
        VarietyDecl d;
        d.info.name = new_name("variety name");
        expect("dim");
        d.info.dim = number("dimension");
        while (!at(";")) {
            const Token& t = peek();
            std::string flag = ident("variety attribute");
            if (flag == "smooth") d.info.smooth = true;
            else if (flag == "singular") d.info.smooth = false;
            else if (flag == "reduced") d.info.reduced = true;
            else if (flag == "nonreduced") d.info.reduced = false;
            else fail(t, "expected ';' or one of smooth, singular, reduced, nonreduced; found '" + flag + "'");
        }
        return d;
    }

    BundleDecl bundle_decl() {
        BundleDecl d;
        d.name = new_name("bundle name");
        expect("over");
        d.base = variety_name();
        expect("rank");
        d.rank = number("rank");
        if (accept("dual")) d.dual = bundle_name();
        return d;
    }

    ProductDecl product_decl() {
        ProductDecl d;
        d.info.name = new_name("product name");
        expect("=");
        d.info.left = variety_name();
        expect("x");
        if (accept("[")) {
            d.info.base = variety_name();
            expect("]");
        }
        d.info.right = variety_name();
        return d;
    }

    MorphismDecl morphism_decl() {
        MorphismDecl d;
        MorphismInfo& m = d.info;
        m.name = new_name("morphism name");
        expect(":");
        m.source = variety_name();
        expect("->");
        m.target = variety_name();
        bool kinded = false;
        auto set_kind = [&](const Token& t, MorphismKind k) {
            if (kinded) fail(t, "morphism '" + m.name + "' already has a kind");
            kinded = true;
            m.kind = k;
        };
        while (!at(";")) {
            const Token& t = peek();
            std::string w = ident("morphism attribute");
            if (w == "projection") set_kind(t, MorphismKind::Projection);
            else if (w == "zero_section") set_kind(t, MorphismKind::ZeroSection);
            else if (w == "section") set_kind(t, MorphismKind::Section);
            else if (w == "pairing") set_kind(t, MorphismKind::Pairing);
            else if (w == "negation") set_kind(t, MorphismKind::Negation);
            else if (w == "bundle_map") set_kind(t, MorphismKind::BundleMap);
            else if (w == "open") set_kind(t, MorphismKind::Open);
            else if (w == "diagonal") set_kind(t, MorphismKind::Diagonal);
            else if (w == "factor") {
                set_kind(t, MorphismKind::Factor);
                m.factor = number("factor index");
            } else if (w == "closed") {
                set_kind(t, MorphismKind::Closed);
                if (accept("codim")) m.codim = number("codimension");
            } else if (w == "graph") {
                set_kind(t, MorphismKind::Graph);
                m.graph_of = morph_primary();
            } else if (w == "product") {
                set_kind(t, MorphismKind::ProductMap);
                m.left = morph_primary();
                m.right = morph_primary();
            } else if (w == "transpose") {
                if (m.transpose) fail(t, "duplicate transpose");
                m.transpose = ident("transpose name");
            } else {
                fail(t, "expected ';' or one of projection, zero_section, section, factor, pairing, negation, "
                        "bundle_map, closed, open, diagonal, graph, product, transpose; found '" + w + "'");
            }
        }
        return d;
    }

    SubvarietyDecl subvariety_decl() {
        SubvarietyDecl d;
        SubvarietyInfo& s = d.info;
        s.name = new_name("subvariety name");
        expect("in");
        s.ambient = variety_name();
        while (!at(";")) {
            const Token& t = peek();
            std::string w = ident("subvariety attribute");
            if (w == "closed") s.closed = true;
            else if (w == "open") s.closed = false;
            else if (w == "reduced") s.reduced = true;
            else if (w == "nonreduced") s.reduced = false;
            else if (w == "smooth") s.smooth = true;
            else if (w == "singular") s.smooth = false;
            else if (w == "image") {
                const Token& jt = peek();
                s.image_of = ident("morphism");
                if (!ctx_.morphism(*s.image_of)) fail(jt, "unknown morphism '" + *s.image_of + "'");
            } else {
                fail(t, "expected ';' or one of closed, open, reduced, nonreduced, smooth, singular, image; found '" +
                            w + "'");
            }
        }
        return d;
    }

    FunctionDecl function_decl() {
        FunctionDecl d;
        d.info.name = new_name("function name");
        expect("on");
        d.info.variety = variety_name();
        if (accept("coordinate")) d.info.coordinate = true;
        return d;
    }

    ModuleDecl module_decl() {
        ModuleDecl d;
        d.info.name = new_name("module name");
        expect("on");
        d.info.variety = variety_name();
        return d;
    }

    CartesianDecl cartesian_decl() {
        CartesianDecl d;
        d.fact.name = ident("square name");
        expect(":");
        std::map<std::string, MorphismExpr> sides;
        for (int k = 0; k < 4; ++k) {
            if (k) accept(",");
            const Token& t = peek();
            std::string key = ident("f, h, fp or hp");
            if (key != "f" && key != "h" && key != "fp" && key != "hp") fail(t, "expected f, h, fp or hp");
            if (sides.count(key)) fail(t, "duplicate corner '" + key + "'");
            expect("=");
            sides[key] = morphism();
        }
        d.fact.f = sides["f"];
        d.fact.h = sides["h"];
        d.fact.fp = sides["fp"];
        d.fact.hp = sides["hp"];
        return d;
    }

    enum class SymSort { Morphism, Function, Subvariety };

    SymSort infer_sort() {
        std::size_t k = 0;
        while (peek(k).kind == Token::Kind::Punct && peek(k).text == "(") ++k;
        const Token& t = peek(k);
        if (t.kind != Token::Kind::Ident) fail(t, "expected a symbol expression");
        if (t.text == "tr" || t.text == "id") return SymSort::Morphism;
        if (t.text == "pb") return SymSort::Function;
        if (t.text == "pre" || t.text == "red") return SymSort::Subvariety;
        std::vector<SymSort> sorts;
        if (ctx_.morphism(t.text)) sorts.push_back(SymSort::Morphism);
        if (ctx_.function(t.text)) sorts.push_back(SymSort::Function);
        if (ctx_.subvariety(t.text)) sorts.push_back(SymSort::Subvariety);
        if (sorts.empty()) fail(t, "unknown symbol '" + t.text + "'");
        if (sorts.size() > 1) fail(t, "'" + t.text + "' names symbols of several sorts; identity is ambiguous");
        return sorts.front();
    }

    IdentityDecl identity_decl() {
        IdentityDecl d;
        switch (infer_sort()) {
            case SymSort::Morphism: {
                MorphismExpr l = morphism();
                expect("=");
                d.identity = MorphismIdentity{l, morphism()};
                break;
            }
            case SymSort::Function: {
                FunctionExpr l = function();
                expect("=");
                d.identity = FunctionIdentity{l, function()};
                break;
            }
            case SymSort::Subvariety: {
                SubvarietyExpr l = subvariety();
                expect("=");
                d.identity = SubvarietyIdentity{l, subvariety()};
                break;
            }
        }
        return d;
    }

    GoalDecl goal_decl(const Token&) {
        GoalDecl g;
        const Token& t = peek();
        g.name = ident("goal name");
        if (goals_.count(g.name)) fail(t, "duplicate goal '" + g.name + "'");
        goals_.insert(g.name);
        expect(":");
        g.lhs = term();
        expect("~");
        g.rhs = term();
        return g;
    }

    Direction direction() {
        const Token& t = peek();
        std::string d = ident("fwd or bwd");
        if (d == "fwd") return Direction::Forward;
        if (d == "bwd") return Direction::Backward;
        fail(t, "expected fwd or bwd, found '" + d + "'");
    }

    Path path() {
        const Token& t = peek();
        if (t.kind != Token::Kind::Path) fail(t, "expected a path such as /0/1, found " + describe(t));
        next();
        auto p = parse_path(t.text);
        if (!p) fail(t, "malformed path '" + t.text + "'");
        return *p;
    }

    rewrite::Binding binding_value(Sort sort) {
        switch (sort) {
            case Sort::Term: return term();
            case Sort::Morphism: return morphism();
            case Sort::Subvariety: return subvariety();
            case Sort::Function: return function();
            case Sort::Variety: return variety_name();
            case Sort::Bundle: return bundle_name();
        }
        return Name{};
    }

    Move move(const rewrite::RewriteRule* rule) {
        Move mv;
        mv.direction = direction();
        expect("at");
        mv.path = path();
        if (accept("with")) {
            if (!rule) fail(toks_[pos_ - 1], "lemma steps take no bindings");
            do {
                const Token& t = peek();
                std::string meta = ident("metavariable");
                auto sort = rule->meta_sort(meta);
                if (!sort) fail(t, "rule " + rule->id + " has no metavariable '" + meta + "'");
                if (mv.bindings.count(meta)) fail(t, "duplicate binding for '" + meta + "'");
                expect(":=");
                mv.bindings[meta] = binding_value(*sort);
            } while (accept(","));
        }
        return mv;
    }

    std::string rule_id() {
        const Token& t = peek();
        std::string id = ident("rule name");
        if (accept(".")) id += "." + ident("rule variant");
        if (!rewrite::find_rule(id)) fail(t, "unknown rule '" + id + "'");
        return id;
    }

    ScriptDecl script_decl(const Token&) {
        ScriptDecl s;
        expect("for");
        const Token& gt = peek();
        s.goal = ident("goal name");
        if (!goals_.count(s.goal)) fail(gt, "script for undeclared goal '" + s.goal + "'");
        if (scripted_.count(s.goal)) fail(gt, "goal '" + s.goal + "' already has a script");
        scripted_.insert(s.goal);
        while (!at("{")) {
            const Token& t = peek();
            std::string w = ident("script option or '{'");
            if (w == "mode") {
                const Token& mt = peek();
                std::string m = ident("mode");
                if (m == "strict") s.mode = Mode::Strict;
                else if (m == "allow-singular") s.mode = Mode::AllowSingular;
                else fail(mt, "unknown mode '" + m + "'");
            } else if (w == "strata") {
                s.strata = number("stratum bound");
            } else {
                fail(t, "unknown script option '" + w + "'");
            }
        }
        expect("{");
        while (!accept("}")) {
            const Token& t = peek();
            std::string w = ident("'step' or 'kashiwara'");
            if (w == "kashiwara") {
                if (s.kashiwara || !s.steps.empty()) fail(t, "kashiwara must come once, before the steps");
                const Token& jt = peek();
                s.kashiwara = ident("closed embedding");
                const MorphismInfo* j = ctx_.morphism(*s.kashiwara);
                if (!j) fail(jt, "unknown morphism '" + *s.kashiwara + "'");
                if (!j->closed_embedding()) fail(jt, "'" + *s.kashiwara + "' is not a closed embedding");
                expect(";");
                continue;
            }
            if (w != "step") fail(t, "expected 'step' or 'kashiwara', found '" + w + "'");
            ProofStep step;
            const rewrite::RewriteRule* rule = nullptr;
            if (accept("lemma")) {
                const Token& lt = peek();
                step.lemma = true;
                step.rule = ident("goal name");
                if (!goals_.count(step.rule)) fail(lt, "unknown goal '" + step.rule + "'");
            } else {
                step.rule = rule_id();
                rule = rewrite::find_rule(step.rule);
            }
            step.moves.push_back(move(rule));
            while (accept("then")) step.moves.push_back(move(rule));
            expect(";");
            s.steps.push_back(std::move(step));
        }
        return s;
    }
};

}  // namespace

void declare(GeometryContext& ctx, const Statement& s) {
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, VarietyDecl>) ctx.add_variety(d.info);
            else if constexpr (std::is_same_v<T, BundleDecl>) ctx.add_bundle(d.name, d.base, d.rank, d.dual);
            else if constexpr (std::is_same_v<T, ProductDecl>) ctx.add_product(d.info);
            else if constexpr (std::is_same_v<T, MorphismDecl>) ctx.add_morphism(d.info);
            else if constexpr (std::is_same_v<T, SubvarietyDecl>) ctx.add_subvariety(d.info);
            else if constexpr (std::is_same_v<T, FunctionDecl>) ctx.add_function(d.info);
            else if constexpr (std::is_same_v<T, ModuleDecl>) ctx.add_module(d.info);
            else if constexpr (std::is_same_v<T, CartesianDecl>) ctx.add_cartesian(d.fact);
            else if constexpr (std::is_same_v<T, IdentityDecl>)
                std::visit([&](const auto& i) { ctx.add_identity(i); }, d.identity);
        },
        s);
}

Document parse_document(const std::string& text) { return Parser(text).run(); }

LoadedDocument load_document(const std::string& text) {
    LoadedDocument out;
    out.document = parse_document(text);
    for (const auto& item : out.document.items) declare(out.context, item.stmt);
    out.context.finalize();
    std::map<std::string, GoalDecl> goals;
    for (const auto& item : out.document.items) {
        if (const auto* g = std::get_if<GoalDecl>(&item.stmt)) {
            goals[g->name] = *g;
            out.goals.push_back(*g);
        } else if (const auto* s = std::get_if<ScriptDecl>(&item.stmt)) {
            const GoalDecl& g = goals.at(s->goal);
            rewrite::ProofCertificate c;
            c.name = g.name;
            c.lhs = g.lhs;
            c.rhs = g.rhs;
            c.kashiwara = s->kashiwara;
            c.steps = s->steps;
            c.mode = s->mode.value_or(Mode::Strict);
            c.strata = s->strata.value_or(1);
            out.certificates.push_back(std::move(c));
        }
    }
    return out;
}

}  // namespace dwork::dsl
