#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dwork/core/context.hpp"
#include "dwork/core/dexpr.hpp"

namespace dwork::rewrite {

using core::DExpr;
using core::FunctionExpr;
using core::GeometryContext;
using core::MorphismExpr;
using core::Name;
using core::Path;
using core::SubvarietyExpr;

enum class Sort { Term, Morphism, Subvariety, Function, Variety, Bundle };
const char* sort_name(Sort s);

// Variety and bundle bindings are plain names.
using Binding = std::variant<DExpr, MorphismExpr, SubvarietyExpr, FunctionExpr, Name>;
using Bindings = std::map<std::string, Binding>;

std::string render_binding(const Binding& b);

enum class Direction { Forward, Backward };
inline Direction opposite(Direction d) { return d == Direction::Forward ? Direction::Backward : Direction::Forward; }
const char* direction_name(Direction d);  // "fwd" / "bwd"

enum class Mode { Strict, AllowSingular };
const char* mode_name(Mode m);

// Pattern trees. Symbol positions are metavariables or simple constructors over them.
struct MPat {
    enum class Kind { Meta, Compose, Transpose } kind = Kind::Meta;
    std::string meta;
    std::vector<MPat> parts;  // Compose: outer, inner. Transpose: argument.
    bool unit_optional = false;  // may bind to an identity when the term has no such head
};

struct SPat {
    enum class Kind { Meta, Intersect, Preimage, Reduce } kind = Kind::Meta;
    std::string meta;
    std::vector<SPat> parts;
    std::vector<MPat> morph;  // Preimage
};

struct FPat {
    enum class Kind { Meta, Pullback } kind = Kind::Meta;
    std::string meta;
    std::vector<FPat> base;
    std::vector<MPat> morph;
};

struct BPat {
    std::string meta;
    bool dual = false;
};

struct Pattern {
    enum class Kind { Meta, Struct, Exp, Tensor, ETensor, Opb, Oim, RGamma, Fourier } kind = Kind::Meta;
    std::string meta;  // Meta: term metavariable; Struct/Exp: variety metavariable
    MPat morph;
    SPat sub;
    FPat fn;
    BPat bundle;
    std::vector<Pattern> children;
};

std::string render_pattern(const Pattern& p);

struct Completion {
    std::vector<Bindings> candidates;
    std::string failure;  // reason when there are no candidates
};

using CompleteFn = std::function<Completion(const GeometryContext&, const Bindings&, Direction, Mode)>;
using DeltaFn = std::function<int(const GeometryContext&, const Bindings&)>;

struct RewriteRule {
    std::string id;      // e.g. "R10" or "R19.opb-struct"
    std::string family;  // e.g. "R19"
    std::string title;
    int stratum = 0;
    std::vector<std::pair<std::string, Sort>> metas;
    Pattern lhs, rhs;
    CompleteFn complete;  // fills derived metavariables and checks side conditions
    DeltaFn delta;        // shift change of a forward application
    std::optional<Sort> meta_sort(const std::string& name) const;
};

// The fixed catalogue, sorted by id.
const std::vector<RewriteRule>& catalogue();
const RewriteRule* find_rule(const std::string& id);

}  // namespace dwork::rewrite
