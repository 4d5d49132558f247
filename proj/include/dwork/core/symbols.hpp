#pragma once

#include <memory>
#include <string>
#include <vector>

namespace dwork::core {

using Name = std::string;

class MorphismExpr {
public:
    enum class Kind { Atom, Identity, Compose, Transpose };

    MorphismExpr() = default;
    static MorphismExpr atom(const Name& name);
    static MorphismExpr identity(const Name& variety);
    static MorphismExpr compose(const MorphismExpr& outer, const MorphismExpr& inner);
    // factors listed outermost first; a single factor is returned unchanged
    static MorphismExpr chain(const std::vector<MorphismExpr>& factors);
    static MorphismExpr transpose(const MorphismExpr& m);

    bool valid() const { return node_ != nullptr; }
    Kind kind() const;
    const Name& name() const;  // atom name or identity variety
    const std::vector<MorphismExpr>& factors() const;
    const MorphismExpr& argument() const;  // transpose argument

    std::string render() const;
    bool operator==(const MorphismExpr& o) const { return render() == o.render(); }
    bool operator<(const MorphismExpr& o) const { return render() < o.render(); }

private:
    struct Node;
    std::shared_ptr<const Node> node_;
};

class SubvarietyExpr {
public:
    enum class Kind { Atom, Reduce, Intersect, Preimage };

    SubvarietyExpr() = default;
    static SubvarietyExpr atom(const Name& name);
    static SubvarietyExpr reduce(const SubvarietyExpr& s);
    static SubvarietyExpr intersect(const SubvarietyExpr& a, const SubvarietyExpr& b);
    static SubvarietyExpr intersect_all(const std::vector<SubvarietyExpr>& members);
    static SubvarietyExpr preimage(const MorphismExpr& f, const SubvarietyExpr& z);

    bool valid() const { return node_ != nullptr; }
    Kind kind() const;
    const Name& name() const;
    const std::vector<SubvarietyExpr>& members() const;  // Reduce/Preimage: one member
    const MorphismExpr& morphism() const;

    std::string render() const;
    bool operator==(const SubvarietyExpr& o) const { return render() == o.render(); }
    bool operator<(const SubvarietyExpr& o) const { return render() < o.render(); }

private:
    struct Node;
    std::shared_ptr<const Node> node_;
};

class FunctionExpr {
public:
    enum class Kind { Atom, Pullback };

    FunctionExpr() = default;
    static FunctionExpr atom(const Name& name);
    static FunctionExpr pullback(const FunctionExpr& phi, const MorphismExpr& f);

    bool valid() const { return node_ != nullptr; }
    Kind kind() const;
    const Name& name() const;
    const FunctionExpr& base() const;
    const MorphismExpr& morphism() const;

    std::string render() const;
    bool operator==(const FunctionExpr& o) const { return render() == o.render(); }
    bool operator<(const FunctionExpr& o) const { return render() < o.render(); }

private:
    struct Node;
    std::shared_ptr<const Node> node_;
};

}  // namespace dwork::core
