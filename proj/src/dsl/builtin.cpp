#include "dwork/dsl/builtin.hpp"

#include <algorithm>
#include <map>

namespace dwork::dsl {

using namespace dwork::rewrite;

namespace {

const std::map<std::string, std::string>& labels() {
    static const std::map<std::string, std::string> m{
        {"theorem-reduction", "C1"}, {"exp-to-fourier", "C2"},    {"pi-pushforward", "C3"},
        {"jjrsect", "C4"},           {"remark-jjrsect", "C5"},    {"basechange-proof", "C6"},
        {"projection-proof", "C7"},  {"fourier-oim-proof", "C8"}, {"fourier-opb-proof", "C9"},
    };
    return m;
}

// Rule family established by a certificate.
const std::map<std::string, std::string>& proves() {
    static const std::map<std::string, std::string> m{
        {"basechange-proof", "R5"},
        {"projection-proof", "R4"},
        {"fourier-oim-proof", "R14"},
        {"fourier-opb-proof", "R15"},
    };
    return m;
}

// Documents whose certificates discharge rules go first.
const std::vector<std::string>& document_order() {
    static const std::vector<std::string> v{"basechange.dwk", "projection.dwk", "fourier.dwk", "section2.dwk"};
    return v;
}

}  // namespace

const std::vector<std::pair<std::string, LoadedDocument>>& builtin_documents() {
    static const std::vector<std::pair<std::string, LoadedDocument>> docs = [] {
        std::vector<std::pair<std::string, LoadedDocument>> out;
        for (const std::string& name : document_order()) {
            const std::string* text = bundled_document(name);
            if (!text) throw std::logic_error("missing bundled document " + name);
            out.emplace_back(name, load_document(*text));
        }
        return out;
    }();
    return docs;
}

const std::vector<BuiltinCertificate>& builtin_certificates() {
    static const std::vector<BuiltinCertificate> certs = [] {
        std::vector<BuiltinCertificate> out;
        for (const auto& [name, doc] : builtin_documents()) {
            for (const ProofCertificate& c : doc.certificates) {
                auto it = labels().find(c.name);
                if (it == labels().end()) continue;
                out.push_back({it->second, name, &doc, &c});
            }
        }
        std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.label < b.label; });
        return out;
    }();
    return certs;
}

const BuiltinCertificate* builtin_certificate(const std::string& key) {
    for (const auto& c : builtin_certificates())
        if (c.label == key || c.certificate->name == key) return &c;
    return nullptr;
}

const std::map<std::string, std::string>& builtin_discharges() {
    static const std::map<std::string, std::string> m = [] {
        std::map<std::string, std::string> out;
        for (const PaperResult& r : verify_paper())
            if (auto p = proves().find(r.report.goal); r.report.valid && p != proves().end()) out[p->second] = r.report.goal;
        return out;
    }();
    return m;
}

std::vector<ValidationReport> check_document(const LoadedDocument& doc, const CheckOptions& options) {
    std::vector<ValidationReport> out;
    LemmaTable lemmas;
    for (const ProofCertificate& c : doc.certificates) {
        out.push_back(check_certificate(doc.context, c, lemmas, options));
        if (out.back().valid) {
            core::FloatedTerm l = core::float_shifts(c.lhs), r = core::float_shifts(c.rhs);
            lemmas[c.name] = {{core::normalize_symbols(doc.context, l.core), l.shift},
                              {core::normalize_symbols(doc.context, r.core), r.shift}};
        }
    }
    return out;
}

std::vector<PaperResult> verify_paper(const PaperOptions& options) {
    std::vector<PaperResult> out;
    std::map<std::string, std::string> discharges;
    for (const auto& [name, doc] : builtin_documents()) {
        LemmaTable lemmas;
        for (const ProofCertificate& c : doc.certificates) {
            CheckOptions o{options.mode, options.strata, discharges};
            ValidationReport rep = check_certificate(doc.context, c, lemmas, o);
            if (rep.valid) {
                core::FloatedTerm l = core::float_shifts(c.lhs), r = core::float_shifts(c.rhs);
                lemmas[c.name] = {{core::normalize_symbols(doc.context, l.core), l.shift},
                                  {core::normalize_symbols(doc.context, r.core), r.shift}};
                if (auto p = proves().find(c.name); p != proves().end()) discharges[p->second] = c.name;
            }
            out.push_back({builtin_certificate(c.name), std::move(rep)});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.entry->label < b.entry->label; });
    return out;
}

}  // namespace dwork::dsl
