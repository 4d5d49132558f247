#include "dwork/core/symbols.hpp"

#include <stdexcept>

namespace dwork::core {

struct MorphismExpr::Node {
    Kind kind;
    Name name;
    std::vector<MorphismExpr> parts;
    std::string text;
};

namespace {

std::string wrap_if_compose(const MorphismExpr& m) {
    return m.kind() == MorphismExpr::Kind::Compose ? "(" + m.render() + ")" : m.render();
}

}  // namespace

MorphismExpr MorphismExpr::atom(const Name& name) {
    MorphismExpr m;
    m.node_ = std::make_shared<Node>(Node{Kind::Atom, name, {}, name});
    return m;
}

MorphismExpr MorphismExpr::identity(const Name& variety) {
    MorphismExpr m;
    m.node_ = std::make_shared<Node>(Node{Kind::Identity, variety, {}, "id[" + variety + "]"});
    return m;
}

MorphismExpr MorphismExpr::compose(const MorphismExpr& outer, const MorphismExpr& inner) {
    return chain({outer, inner});
}

MorphismExpr MorphismExpr::chain(const std::vector<MorphismExpr>& factors) {
    if (factors.empty()) throw std::invalid_argument("empty composition");
    if (factors.size() == 1) return factors.front();
    std::string text;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) text += " . ";
        text += wrap_if_compose(factors[i]);
    }
    MorphismExpr m;
    m.node_ = std::make_shared<Node>(Node{Kind::Compose, "", factors, text});
    return m;
}

MorphismExpr MorphismExpr::transpose(const MorphismExpr& arg) {
    MorphismExpr m;
    m.node_ = std::make_shared<Node>(Node{Kind::Transpose, "", {arg}, "tr(" + arg.render() + ")"});
    return m;
}

MorphismExpr::Kind MorphismExpr::kind() const { return node_->kind; }
const Name& MorphismExpr::name() const { return node_->name; }
const std::vector<MorphismExpr>& MorphismExpr::factors() const { return node_->parts; }
const MorphismExpr& MorphismExpr::argument() const { return node_->parts.at(0); }
std::string MorphismExpr::render() const { return node_ ? node_->text : "<null>"; }

struct SubvarietyExpr::Node {
    Kind kind;
    Name name;
    std::vector<SubvarietyExpr> members;
    MorphismExpr morphism;
    std::string text;
};

SubvarietyExpr SubvarietyExpr::atom(const Name& name) {
    SubvarietyExpr s;
    s.node_ = std::make_shared<Node>(Node{Kind::Atom, name, {}, {}, name});
    return s;
}

SubvarietyExpr SubvarietyExpr::reduce(const SubvarietyExpr& inner) {
    SubvarietyExpr s;
    s.node_ = std::make_shared<Node>(Node{Kind::Reduce, "", {inner}, {}, "red(" + inner.render() + ")"});
    return s;
}

SubvarietyExpr SubvarietyExpr::intersect(const SubvarietyExpr& a, const SubvarietyExpr& b) {
    return intersect_all({a, b});
}

SubvarietyExpr SubvarietyExpr::intersect_all(const std::vector<SubvarietyExpr>& members) {
    if (members.empty()) throw std::invalid_argument("empty intersection");
    if (members.size() == 1) return members.front();
    std::string text;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) text += " & ";
        const auto& m = members[i];
        text += m.kind() == Kind::Intersect ? "(" + m.render() + ")" : m.render();
    }
    SubvarietyExpr s;
    s.node_ = std::make_shared<Node>(Node{Kind::Intersect, "", members, {}, text});
    return s;
}

SubvarietyExpr SubvarietyExpr::preimage(const MorphismExpr& f, const SubvarietyExpr& z) {
    SubvarietyExpr s;
    s.node_ = std::make_shared<Node>(
        Node{Kind::Preimage, "", {z}, f, "pre(" + f.render() + ", " + z.render() + ")"});
    return s;
}

SubvarietyExpr::Kind SubvarietyExpr::kind() const { return node_->kind; }
const Name& SubvarietyExpr::name() const { return node_->name; }
const std::vector<SubvarietyExpr>& SubvarietyExpr::members() const { return node_->members; }
const MorphismExpr& SubvarietyExpr::morphism() const { return node_->morphism; }
std::string SubvarietyExpr::render() const { return node_ ? node_->text : "<null>"; }

struct FunctionExpr::Node {
    Kind kind;
    Name name;
    std::vector<FunctionExpr> base;
    MorphismExpr morphism;
    std::string text;
};

FunctionExpr FunctionExpr::atom(const Name& name) {
    FunctionExpr f;
    f.node_ = std::make_shared<Node>(Node{Kind::Atom, name, {}, {}, name});
    return f;
}

FunctionExpr FunctionExpr::pullback(const FunctionExpr& phi, const MorphismExpr& m) {
    FunctionExpr f;
    f.node_ = std::make_shared<Node>(
        Node{Kind::Pullback, "", {phi}, m, "pb(" + phi.render() + ", " + m.render() + ")"});
    return f;
}

FunctionExpr::Kind FunctionExpr::kind() const { return node_->kind; }
const Name& FunctionExpr::name() const { return node_->name; }
const FunctionExpr& FunctionExpr::base() const { return node_->base.at(0); }
const MorphismExpr& FunctionExpr::morphism() const { return node_->morphism; }
std::string FunctionExpr::render() const { return node_ ? node_->text : "<null>"; }

}  // namespace dwork::core
