#include "dwork/dsl/document.hpp"

namespace dwork::dsl {

const std::vector<std::pair<std::string, std::string>>& bundled_documents() {
    static const std::vector<std::pair<std::string, std::string>> docs = {
#include "bundled_documents.inc"
    };
    return docs;
}

const std::string* bundled_document(const std::string& name) {
    for (const auto& [n, text] : bundled_documents())
        if (n == name) return &text;
    return nullptr;
}

}  // namespace dwork::dsl
