#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dwork/core/context.hpp"
#include "dwork/dsl/lexer.hpp"
#include "dwork/rewrite/engine.hpp"

namespace dwork::dsl {

using core::DExpr;
using core::Name;

struct VarietyDecl {
    core::VarietyInfo info;
};
struct BundleDecl {
    Name name, base;
    int rank = 1;
    std::optional<Name> dual;
};
struct ProductDecl {
    core::ProductInfo info;
};
struct MorphismDecl {
    core::MorphismInfo info;
};
struct SubvarietyDecl {
    core::SubvarietyInfo info;
};
struct FunctionDecl {
    core::FunctionInfo info;
};
struct ModuleDecl {
    core::ModuleInfo info;
};
struct CartesianDecl {
    core::CartesianFact fact;
};
struct IdentityDecl {
    std::variant<core::MorphismIdentity, core::FunctionIdentity, core::SubvarietyIdentity> identity;
};
struct GoalDecl {
    std::string name;
    DExpr lhs, rhs;
};
struct ScriptDecl {
    std::string goal;
    std::optional<rewrite::Mode> mode;
    std::optional<int> strata;
    std::optional<Name> kashiwara;
    std::vector<rewrite::ProofStep> steps;
};

using Statement = std::variant<VarietyDecl, BundleDecl, ProductDecl, MorphismDecl, SubvarietyDecl, FunctionDecl,
                               ModuleDecl, CartesianDecl, IdentityDecl, GoalDecl, ScriptDecl>;

struct Item {
    Statement stmt;
    Span span;
};

struct Document {
    std::vector<Item> items;
};

// Throws ParseError. Names are resolved against the declarations seen so far, and
// declarations are checked for consistency as they are read.
Document parse_document(const std::string& text);

// Canonical text; parse_document(render_document(d)) renders identically.
std::string render_document(const Document& doc);
std::string render_statement(const Statement& s);
std::string render_step(const rewrite::ProofStep& step);

// Applies a declaration to a context (goals and scripts are ignored).
void declare(core::GeometryContext& ctx, const Statement& s);

struct LoadedDocument {
    Document document;
    core::GeometryContext context;
    std::vector<GoalDecl> goals;
    std::vector<rewrite::ProofCertificate> certificates;  // goals with scripts, in document order
};

LoadedDocument load_document(const std::string& text);

// Documents compiled into the library, by file name.
const std::vector<std::pair<std::string, std::string>>& bundled_documents();
const std::string* bundled_document(const std::string& name);

}  // namespace dwork::dsl
