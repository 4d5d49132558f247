#include "dwork/dsl/document.hpp"

namespace dwork::dsl {

using namespace dwork::core;

namespace {

std::string morphism_decl(const MorphismInfo& m) {
    std::string s = "morphism " + m.name + " : " + m.source + " -> " + m.target;
    auto primary = [](const MorphismExpr& e) {
        return e.kind() == MorphismExpr::Kind::Compose ? "(" + e.render() + ")" : e.render();
    };
    switch (m.kind) {
        case MorphismKind::Plain: break;
        case MorphismKind::Factor: s += " factor " + std::to_string(m.factor); break;
        case MorphismKind::Closed:
            s += " closed";
            if (m.codim) s += " codim " + std::to_string(*m.codim);
            break;
        case MorphismKind::Graph: s += " graph " + primary(m.graph_of); break;
        case MorphismKind::ProductMap: s += " product " + primary(m.left) + " " + primary(m.right); break;
        default: s += std::string(" ") + morphism_kind_name(m.kind); break;
    }
    if (m.transpose) s += " transpose " + *m.transpose;
    return s;
}

std::string render_move(const rewrite::Move& mv) {
    std::string s = std::string(rewrite::direction_name(mv.direction)) + " at " + render_path(mv.path);
    bool first = true;
    for (const auto& [k, v] : mv.bindings) {
        s += first ? " with " : ", ";
        first = false;
        s += k + " := " + rewrite::render_binding(v);
    }
    return s;
}

}  // namespace

std::string render_step(const rewrite::ProofStep& step) {
    std::string s = "step " + std::string(step.lemma ? "lemma " : "") + step.rule;
    for (std::size_t i = 0; i < step.moves.size(); ++i) s += (i ? " then " : " ") + render_move(step.moves[i]);
    return s + ";";
}

std::string render_statement(const Statement& st) {
    return std::visit(
        [](const auto& d) -> std::string {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, VarietyDecl>) {
                std::string s = "variety " + d.info.name + " dim " + std::to_string(d.info.dim);
                if (!d.info.smooth) s += " singular";
                if (!d.info.reduced) s += " nonreduced";
                return s + ";";
            } else if constexpr (std::is_same_v<T, BundleDecl>) {
                std::string s = "bundle " + d.name + " over " + d.base + " rank " + std::to_string(d.rank);
                if (d.dual) s += " dual " + *d.dual;
                return s + ";";
            } else if constexpr (std::is_same_v<T, ProductDecl>) {
                return "product " + d.info.name + " = " + d.info.left + " x" +
                       (d.info.base ? "[" + *d.info.base + "]" : std::string()) + " " + d.info.right + ";";
            } else if constexpr (std::is_same_v<T, MorphismDecl>) {
                return morphism_decl(d.info) + ";";
            } else if constexpr (std::is_same_v<T, SubvarietyDecl>) {
                std::string s = "subvariety " + d.info.name + " in " + d.info.ambient;
                if (!d.info.closed) s += " open";
                if (!d.info.reduced) s += " nonreduced";
                if (!d.info.smooth) s += " singular";
                if (d.info.image_of) s += " image " + *d.info.image_of;
                return s + ";";
            } else if constexpr (std::is_same_v<T, FunctionDecl>) {
                return "function " + d.info.name + " on " + d.info.variety + (d.info.coordinate ? " coordinate" : "") +
                       ";";
            } else if constexpr (std::is_same_v<T, ModuleDecl>) {
                return "module " + d.info.name + " on " + d.info.variety + ";";
            } else if constexpr (std::is_same_v<T, CartesianDecl>) {
                const auto& c = d.fact;
                return "cartesian " + c.name + " : f = " + c.f.render() + ", h = " + c.h.render() +
                       ", fp = " + c.fp.render() + ", hp = " + c.hp.render() + ";";
            } else if constexpr (std::is_same_v<T, IdentityDecl>) {
                return std::visit(
                    [](const auto& i) { return "identity " + i.lhs.render() + " = " + i.rhs.render() + ";"; },
                    d.identity);
            } else if constexpr (std::is_same_v<T, GoalDecl>) {
                return "goal " + d.name + " : " + d.lhs.render() + " ~ " + d.rhs.render() + ";";
            } else {
                std::string s = "script for " + d.goal;
                if (d.mode) s += std::string(" mode ") + rewrite::mode_name(*d.mode);
                if (d.strata) s += " strata " + std::to_string(*d.strata);
                s += " {\n";
                if (d.kashiwara) s += "  kashiwara " + *d.kashiwara + ";\n";
                for (const auto& step : d.steps) s += "  " + render_step(step) + "\n";
                return s + "}";
            }
        },
        st);
}

std::string render_document(const Document& doc) {
    std::string out;
    bool prev_decl = false;
    for (const auto& item : doc.items) {
        bool decl = !std::holds_alternative<GoalDecl>(item.stmt) && !std::holds_alternative<ScriptDecl>(item.stmt);
        if (!out.empty() && (!decl || !prev_decl)) out += "\n";
        out += render_statement(item.stmt) + "\n";
        prev_decl = decl;
    }
    return out;
}

}  // namespace dwork::dsl
