#include "dwork/core/dexpr.hpp"

#include <cctype>
#include <stdexcept>

namespace dwork::core {

std::string render_path(const Path& p) {
    if (p.empty()) return "/";
    std::string out;
    for (int i : p) out += "/" + std::to_string(i);
    return out;
}

std::optional<Path> parse_path(const std::string& text) {
    if (text.empty() || text[0] != '/') return std::nullopt;
    if (text == "/") return Path{};
    Path out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '/') return std::nullopt;
        ++i;
        std::size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (start == i || i - start > 6) return std::nullopt;
        out.push_back(std::stoi(text.substr(start, i - start)));
    }
    return out;
}

struct DExpr::Node {
    Kind kind = Kind::Struct;
    Name name;
    FunctionExpr function;
    MorphismExpr morphism;
    SubvarietyExpr subvariety;
    int amount = 0;
    std::vector<DExpr> kids;
    std::string text;
    std::size_t size = 1;
};

const char* kind_name(DExpr::Kind k) {
    switch (k) {
        case DExpr::Kind::Struct: return "O";
        case DExpr::Kind::Exp: return "Exp";
        case DExpr::Kind::Var: return "Var";
        case DExpr::Kind::Tensor: return "Tensor";
        case DExpr::Kind::ETensor: return "ETensor";
        case DExpr::Kind::Opb: return "Opb";
        case DExpr::Kind::Oim: return "Oim";
        case DExpr::Kind::RGamma: return "RGamma";
        case DExpr::Kind::Fourier: return "Fourier";
        case DExpr::Kind::Shift: return "Shift";
    }
    return "?";
}

DExpr::Node DExpr::node(Kind k, const Name& name) {
    Node n;
    n.kind = k;
    n.name = name;
    return n;
}

DExpr DExpr::make(Node n) {
    for (const auto& k : n.kids) n.size += k.size();
    switch (n.kind) {
        case Kind::Struct: n.text = "O[" + n.name + "]"; break;
        case Kind::Exp: n.text = "Exp[" + n.name + "](" + n.function.render() + ")"; break;
        case Kind::Var: n.text = n.name; break;
        case Kind::Tensor:
        case Kind::ETensor:
            n.text = std::string(kind_name(n.kind)) + "(" + n.kids[0].render() + ", " + n.kids[1].render() + ")";
            break;
        case Kind::Opb:
        case Kind::Oim:
            n.text = std::string(kind_name(n.kind)) + "[" + n.morphism.render() + "](" + n.kids[0].render() + ")";
            break;
        case Kind::RGamma: n.text = "RGamma[" + n.subvariety.render() + "](" + n.kids[0].render() + ")"; break;
        case Kind::Fourier: n.text = "Fourier[" + n.name + "](" + n.kids[0].render() + ")"; break;
        case Kind::Shift: n.text = n.kids[0].render() + "[" + std::to_string(n.amount) + "]"; break;
    }
    DExpr e;
    e.node_ = std::make_shared<Node>(std::move(n));
    return e;
}

DExpr DExpr::structure(const Name& variety) {
    Node n = node(Kind::Struct, variety);
    return make(std::move(n));
}

DExpr DExpr::exp(const Name& variety, const FunctionExpr& phi) {
    Node n = node(Kind::Exp, variety);
    n.function = phi;
    return make(std::move(n));
}

DExpr DExpr::var(const Name& module) {
    Node n = node(Kind::Var, module);
    return make(std::move(n));
}

DExpr DExpr::tensor(const DExpr& a, const DExpr& b) {
    Node n = node(Kind::Tensor);
    n.kids = {a, b};
    return make(std::move(n));
}

DExpr DExpr::etensor(const DExpr& a, const DExpr& b) {
    Node n = node(Kind::ETensor);
    n.kids = {a, b};
    return make(std::move(n));
}

DExpr DExpr::opb(const MorphismExpr& f, const DExpr& m) {
    Node n = node(Kind::Opb);
    n.morphism = f;
    n.kids = {m};
    return make(std::move(n));
}

DExpr DExpr::oim(const MorphismExpr& f, const DExpr& m) {
    Node n = node(Kind::Oim);
    n.morphism = f;
    n.kids = {m};
    return make(std::move(n));
}

DExpr DExpr::rgamma(const SubvarietyExpr& s, const DExpr& m) {
    Node n = node(Kind::RGamma);
    n.subvariety = s;
    n.kids = {m};
    return make(std::move(n));
}

DExpr DExpr::fourier(const Name& bundle, const DExpr& m) {
    Node n = node(Kind::Fourier, bundle);
    n.kids = {m};
    return make(std::move(n));
}

DExpr DExpr::shift(const DExpr& m, int amount) {
    Node n = node(Kind::Shift);
    n.amount = amount;
    n.kids = {m};
    return make(std::move(n));
}

DExpr::Kind DExpr::kind() const { return node_->kind; }
const Name& DExpr::name() const { return node_->name; }
const FunctionExpr& DExpr::function() const { return node_->function; }
const MorphismExpr& DExpr::morphism() const { return node_->morphism; }
const SubvarietyExpr& DExpr::subvariety() const { return node_->subvariety; }
int DExpr::amount() const { return node_->amount; }
const std::vector<DExpr>& DExpr::children() const { return node_->kids; }
std::size_t DExpr::size() const { return node_->size; }

const std::string& DExpr::render() const {
    static const std::string null_text = "<null>";
    return node_ ? node_->text : null_text;
}

DExpr DExpr::with_children(const std::vector<DExpr>& kids) const {
    if (kids.size() != node_->kids.size()) throw std::invalid_argument("child count mismatch");
    Node n = *node_;
    n.kids = kids;
    n.size = 1;
    return make(std::move(n));
}

std::optional<DExpr> DExpr::at(const Path& p) const {
    DExpr cur = *this;
    for (int i : p) {
        if (i < 0 || i >= static_cast<int>(cur.children().size())) return std::nullopt;
        cur = cur.children()[i];
    }
    return cur;
}

std::optional<DExpr> DExpr::replace(const Path& p, const DExpr& replacement) const {
    if (p.empty()) return replacement;
    int i = p.front();
    if (i < 0 || i >= static_cast<int>(children().size())) return std::nullopt;
    auto sub = children()[i].replace(Path(p.begin() + 1, p.end()), replacement);
    if (!sub) return std::nullopt;
    std::vector<DExpr> kids = children();
    kids[i] = *sub;
    return with_children(kids);
}

std::vector<Path> DExpr::paths() const {
    std::vector<Path> out;
    Path cur;
    auto rec = [&](auto&& self, const DExpr& e) -> void {
        out.push_back(cur);
        for (int i = 0; i < static_cast<int>(e.children().size()); ++i) {
            cur.push_back(i);
            self(self, e.children()[i]);
            cur.pop_back();
        }
    };
    rec(rec, *this);
    return out;
}

}  // namespace dwork::core
