#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dwork/core/dexpr.hpp"
#include "dwork/core/symbols.hpp"

namespace dwork::core {

class ContextError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct VarietyInfo {
    Name name;
    int dim = 0;
    bool smooth = true;
    bool reduced = true;
};

struct BundleInfo {
    Name name;  // total space, also a declared variety
    Name base;
    int rank = 0;
    std::optional<Name> dual;
};

struct ProductInfo {
    Name name;
    Name left, right;
    std::optional<Name> base;  // fibre product over base when set
};

enum class MorphismKind {
    Plain,
    Projection,
    ZeroSection,
    Section,
    Factor,
    Pairing,
    Negation,
    BundleMap,
    Closed,
    Open,
    Diagonal,
    Graph,
    ProductMap,
};

const char* morphism_kind_name(MorphismKind k);

struct MorphismInfo {
    Name name;
    Name source, target;
    MorphismKind kind = MorphismKind::Plain;
    int factor = 0;                // Factor: 1 or 2
    std::optional<Name> transpose;  // BundleMap, Negation
    std::optional<int> codim;      // Closed: explicit codimension
    MorphismExpr graph_of;         // Graph
    MorphismExpr left, right;      // ProductMap components
    bool closed_embedding() const;
};

struct SubvarietyInfo {
    Name name;
    Name ambient;
    bool closed = true;
    bool reduced = true;
    bool smooth = true;
    std::optional<Name> image_of;  // closed embedding whose image this is
};

struct FunctionInfo {
    Name name;
    Name variety;
    bool coordinate = false;  // fibre coordinate of a rank-1 bundle
};

struct ModuleInfo {
    Name name;
    Name variety;
};

// Square X' -hp-> X -f-> Y and X' -fp-> Y' -h-> Y, Cartesian.
struct CartesianFact {
    Name name;
    MorphismExpr f, h, fp, hp;
    CartesianFact transposed() const;
};

struct MorphismIdentity {
    MorphismExpr lhs, rhs;
};
struct FunctionIdentity {
    FunctionExpr lhs, rhs;
};
struct SubvarietyIdentity {
    SubvarietyExpr lhs, rhs;
};

enum class SymbolSort { Variety, Bundle, Morphism, Subvariety, Function, Module };

class GeometryContext {
public:
    // Declarations; each validates and throws ContextError.
    void add_variety(const VarietyInfo& v);
    void add_bundle(const Name& name, const Name& base, int rank, const std::optional<Name>& dual);
    void add_product(const ProductInfo& p);
    void add_morphism(const MorphismInfo& m);
    void add_subvariety(const SubvarietyInfo& s);
    void add_function(const FunctionInfo& f);
    void add_module(const ModuleInfo& m);
    void add_cartesian(const CartesianFact& c);
    void add_identity(const MorphismIdentity& i);
    void add_identity(const FunctionIdentity& i);
    void add_identity(const SubvarietyIdentity& i);
    // Checks forward references (transposes); call after the last declaration.
    void finalize();

    const VarietyInfo* variety(const Name& n) const;
    const BundleInfo* bundle(const Name& n) const;
    const ProductInfo* product(const Name& n) const;
    const MorphismInfo* morphism(const Name& n) const;
    const SubvarietyInfo* subvariety(const Name& n) const;
    const FunctionInfo* function(const Name& n) const;
    const ModuleInfo* module(const Name& n) const;
    bool declared(SymbolSort sort, const Name& n) const;

    const std::vector<VarietyInfo>& varieties() const { return varieties_; }
    const std::vector<BundleInfo>& bundles() const { return bundles_; }
    const std::vector<ProductInfo>& products() const { return products_; }
    const std::vector<MorphismInfo>& morphisms() const { return morphisms_; }
    const std::vector<SubvarietyInfo>& subvarieties() const { return subvarieties_; }
    const std::vector<FunctionInfo>& functions() const { return functions_; }
    const std::vector<ModuleInfo>& modules() const { return modules_; }
    const std::vector<CartesianFact>& cartesians() const { return cartesians_; }
    const std::vector<MorphismIdentity>& morphism_identities() const { return m_ids_; }
    const std::vector<FunctionIdentity>& function_identities() const { return f_ids_; }
    const std::vector<SubvarietyIdentity>& subvariety_identities() const { return s_ids_; }

    int dim(const Name& variety) const;
    // Dual of a bundle; a variety that is not a bundle is its own dual (zero bundle).
    std::optional<Name> dual_of(const Name& variety) const;
    const ProductInfo* product_of(const Name& left, const Name& right, const std::optional<Name>& base) const;
    // Codimension of a closed embedding atom, if it is one.
    std::optional<int> embedding_codim(const Name& morphism) const;

private:
    std::vector<VarietyInfo> varieties_;
    std::vector<BundleInfo> bundles_;
    std::vector<ProductInfo> products_;
    std::vector<MorphismInfo> morphisms_;
    std::vector<SubvarietyInfo> subvarieties_;
    std::vector<FunctionInfo> functions_;
    std::vector<ModuleInfo> modules_;
    std::vector<CartesianFact> cartesians_;
    std::vector<MorphismIdentity> m_ids_;
    std::vector<FunctionIdentity> f_ids_;
    std::vector<SubvarietyIdentity> s_ids_;
    std::map<Name, std::size_t> variety_ix_, bundle_ix_, product_ix_, morphism_ix_, subvariety_ix_,
        function_ix_, module_ix_;

    void require_variety(const Name& n, const std::string& what) const;
};

}  // namespace dwork::core
