#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dwork/dsl/document.hpp"
#include "dwork/rewrite/engine.hpp"

namespace dwork::dsl {

// A certificate shipped with the library.
struct BuiltinCertificate {
    std::string label;     // C1 .. C9
    std::string document;  // bundled file name
    const LoadedDocument* source = nullptr;
    const rewrite::ProofCertificate* certificate = nullptr;
};

// Parsed bundled documents, loaded once.
const std::vector<std::pair<std::string, LoadedDocument>>& builtin_documents();

// Sorted by label.
const std::vector<BuiltinCertificate>& builtin_certificates();
const BuiltinCertificate* builtin_certificate(const std::string& label_or_goal);

struct PaperOptions {
    std::optional<rewrite::Mode> mode;  // overrides every script's own mode
    std::optional<int> strata;          // overrides every script's own bound
};

struct PaperResult {
    const BuiltinCertificate* entry = nullptr;
    rewrite::ValidationReport report;
};

// Validates every bundled certificate, lemmas before their uses. Below stratum 1 the rules
// proved by bundled certificates are discharged by them once those validate. Sorted by label.
std::vector<PaperResult> verify_paper(const PaperOptions& options = {});

// Rule family -> bundled certificate deriving it, for the bundled certificates that validate.
const std::map<std::string, std::string>& builtin_discharges();

// Validates the certificates of a document in order; valid ones become lemmas for later ones.
std::vector<rewrite::ValidationReport> check_document(const LoadedDocument& doc, const rewrite::CheckOptions& options = {});

}  // namespace dwork::dsl
