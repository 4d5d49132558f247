#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dwork/core/context.hpp"
#include "dwork/core/dexpr.hpp"

namespace dwork::core {

class WellFormednessError : public std::runtime_error {
public:
    WellFormednessError(const Path& p, const std::string& msg)
        : std::runtime_error(msg + " at " + render_path(p)), path(p), detail(msg) {}
    Path path;
    std::string detail;
};

struct MorphismType {
    Name source, target;
};

// Typing (throws ContextError on ill-typed expressions).
MorphismType morphism_type(const GeometryContext& ctx, const MorphismExpr& m);
Name function_variety(const GeometryContext& ctx, const FunctionExpr& f);
Name subvariety_ambient(const GeometryContext& ctx, const SubvarietyExpr& s);

// Normal forms of symbols. Morphisms: flat composition of atoms and transposed atoms,
// identities dropped, transposes pushed to atoms, declared identities applied to fixpoint.
MorphismExpr normalize_morphism(const GeometryContext& ctx, const MorphismExpr& m);
bool is_identity_morphism(const GeometryContext& ctx, const MorphismExpr& m);
// Leaves of the normal form, outermost first (empty for an identity).
std::vector<MorphismExpr> morphism_leaves(const GeometryContext& ctx, const MorphismExpr& m);
FunctionExpr normalize_function(const GeometryContext& ctx, const FunctionExpr& f);
SubvarietyExpr normalize_subvariety(const GeometryContext& ctx, const SubvarietyExpr& s);

bool same_morphism(const GeometryContext& ctx, const MorphismExpr& a, const MorphismExpr& b);
bool same_subvariety(const GeometryContext& ctx, const SubvarietyExpr& a, const SubvarietyExpr& b);
bool same_function(const GeometryContext& ctx, const FunctionExpr& a, const FunctionExpr& b);

// Variety the module lives on; throws WellFormednessError with the offending path.
Name well_formed(const GeometryContext& ctx, const DExpr& e);

// Term with all Shift nodes removed and their amounts summed.
struct FloatedTerm {
    DExpr core;
    int shift = 0;
    std::string key() const;
    std::string render() const;
};

FloatedTerm float_shifts(const DExpr& e);
// Normalizes embedded symbols only; the module structure is kept.
DExpr normalize_symbols(const GeometryContext& ctx, const DExpr& e);
// Canonical form used to compare end terms: floated shifts, unit laws
// (Opb/Oim along identities, Tensor with a structure sheaf, Opb of a structure sheaf),
// commutativity of Tensor and symbol normal forms.
FloatedTerm normal_form(const GeometryContext& ctx, const DExpr& e);

// Constructors that drop identity morphisms and normalize the morphism.
DExpr make_opb(const GeometryContext& ctx, const MorphismExpr& f, const DExpr& m);
DExpr make_oim(const GeometryContext& ctx, const MorphismExpr& f, const DExpr& m);

}  // namespace dwork::core
