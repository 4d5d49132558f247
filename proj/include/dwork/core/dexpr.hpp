#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dwork/core/symbols.hpp"

namespace dwork::core {

// Child indices from the root; "/" is the root, "/0/1" the second child of the first child.
using Path = std::vector<int>;

std::string render_path(const Path& p);
std::optional<Path> parse_path(const std::string& text);

class DExpr {
public:
    enum class Kind { Struct, Exp, Var, Tensor, ETensor, Opb, Oim, RGamma, Fourier, Shift };

    DExpr() = default;
    static DExpr structure(const Name& variety);
    static DExpr exp(const Name& variety, const FunctionExpr& phi);
    static DExpr var(const Name& module);
    static DExpr tensor(const DExpr& a, const DExpr& b);
    static DExpr etensor(const DExpr& a, const DExpr& b);
    static DExpr opb(const MorphismExpr& f, const DExpr& m);
    static DExpr oim(const MorphismExpr& f, const DExpr& m);
    static DExpr rgamma(const SubvarietyExpr& s, const DExpr& m);
    static DExpr fourier(const Name& bundle, const DExpr& m);
    static DExpr shift(const DExpr& m, int amount);

    bool valid() const { return node_ != nullptr; }
    Kind kind() const;
    const Name& name() const;  // variety (Struct, Exp), module (Var), bundle (Fourier)
    const FunctionExpr& function() const;
    const MorphismExpr& morphism() const;
    const SubvarietyExpr& subvariety() const;
    int amount() const;
    const std::vector<DExpr>& children() const;
    const DExpr& child(std::size_t i) const { return children().at(i); }

    // Same head with new children.
    DExpr with_children(const std::vector<DExpr>& kids) const;

    std::size_t size() const;
    const std::string& render() const;
    bool operator==(const DExpr& o) const { return render() == o.render(); }
    bool operator!=(const DExpr& o) const { return !(*this == o); }
    bool operator<(const DExpr& o) const { return render() < o.render(); }

    std::optional<DExpr> at(const Path& p) const;
    std::optional<DExpr> replace(const Path& p, const DExpr& replacement) const;
    // Preorder list of all paths.
    std::vector<Path> paths() const;

private:
    struct Node;
    std::shared_ptr<const Node> node_;
    static DExpr make(Node n);
    static Node node(Kind k, const Name& name = {});
};

const char* kind_name(DExpr::Kind k);

}  // namespace dwork::core
