#include "dwork/dsl/report.hpp"

#include <sstream>

namespace dwork::dsl {

using namespace dwork::rewrite;

namespace {

std::string signed_int(int v) { return (v > 0 ? "+" : "") + std::to_string(v); }

Json dims_json(const weyl::DimTable& dims) {
    Json out = Json::object();
    for (const auto& [deg, n] : dims)
        if (n != 0) out[std::to_string(deg)] = n;
    return out;
}

Json move_json(const Move& m) {
    Json b = Json::object();
    for (const auto& [k, v] : m.bindings) b[k] = render_binding(v);
    return Json{{"direction", direction_name(m.direction)}, {"path", core::render_path(m.path)}, {"bindings", b}};
}

std::string rules_text(const ValidationReport& r) {
    std::string out;
    for (const auto& [family, n] : r.rules_used) {
        if (!out.empty()) out += ", ";
        out += family + (n > 1 ? " x" + std::to_string(n) : "");
    }
    return out.empty() ? "none" : out;
}

std::string failure_text(const ValidationReport& r) {
    std::string where;
    if (r.failing_step) where += "step " + std::to_string(*r.failing_step);
    if (r.failing_move) where += " move " + std::to_string(*r.failing_move);
    if (where.empty()) where = "goal";
    return where + ": " + failure_name(r.failure) + ": " + r.reason;
}

}  // namespace

std::string render_dims(const weyl::DimTable& dims) {
    std::string out = "{";
    for (const auto& [deg, n] : dims) {
        if (n == 0) continue;
        if (out.size() > 1) out += ", ";
        out += std::to_string(deg) + ":" + std::to_string(n);
    }
    return out + "}";
}

Json report_json(const ValidationReport& r) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["goal"] = r.goal;
    j["statement"] = r.statement;
    j["valid"] = r.valid;
    j["mode"] = mode_name(r.mode);
    j["strata"] = r.strata;
    Json steps = Json::array();
    Json ledger = Json::array();
    int running = 0;
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
        const StepRecord& s = r.steps[i];
        Json moves = Json::array();
        for (const Move& m : s.moves) moves.push_back(move_json(m));
        Json step{{"index", i + 1}, {"rule", s.rule}, {"kind", s.lemma ? "lemma" : "rule"}, {"moves", moves},
                  {"shift_delta", s.shift_delta}, {"term", s.term_after}};
        if (s.discharged_by) step["discharged_by"] = *s.discharged_by;
        steps.push_back(step);
        running += s.shift_delta;
        ledger.push_back(Json{{"step", i + 1}, {"delta", s.shift_delta}, {"net", running}});
    }
    j["steps"] = steps;
    j["shift_ledger"] = ledger;
    j["expected_shift"] = r.expected_shift;
    j["net_shift"] = r.net_shift;
    Json rules = Json::object();
    for (const auto& [family, n] : r.rules_used) rules[family] = n;
    j["rules_used"] = rules;
    j["lemmas_used"] = r.lemmas_used;
    j["discharged"] = r.discharged;
    if (r.valid) {
        j["failure"] = nullptr;
    } else {
        Json f{{"kind", failure_name(r.failure)}, {"reason", r.reason}};
        f["step"] = r.failing_step ? Json(*r.failing_step) : Json(nullptr);
        f["move"] = r.failing_move ? Json(*r.failing_move) : Json(nullptr);
        j["failure"] = f;
    }
    return j;
}

Json report_json(const weyl::CohomologyReport& r) {
    Json trace = Json::array();
    for (const weyl::Snapshot& s : r.trace)
        trace.push_back(Json{{"bound", s.bound}, {"level", s.level}, {"dims", dims_json(s.dims)}});
    return Json{{"schema_version", kSchemaVersion},
                {"side", r.side},
                {"problem", r.problem},
                {"dims", dims_json(r.dims)},
                {"stabilized", r.stabilized},
                {"window", r.window},
                {"consistency_ok", r.consistency_ok},
                {"truncation_trace", trace}};
}

Json report_json(const weyl::ComparisonReport& r) {
    auto side = [](const weyl::CohomologyReport& c) {
        Json j = report_json(c);
        j.erase("schema_version");
        return j;
    };
    return Json{{"schema_version", kSchemaVersion},
                {"n", r.n},
                {"f", r.f},
                {"potential", r.potential},
                {"twisted", side(r.twisted)},
                {"complement", side(r.complement)},
                {"supports", side(r.supports)},
                {"stabilized", r.stabilized},
                {"match", r.match}};
}

std::string summary_line(const ValidationReport& r) {
    std::ostringstream out;
    out << r.goal << ": " << (r.valid ? "valid" : "INVALID") << ", " << r.steps.size() << " steps, rules "
        << rules_text(r);
    if (!r.lemmas_used.empty()) {
        out << ", lemmas ";
        for (std::size_t i = 0; i < r.lemmas_used.size(); ++i) out << (i ? ", " : "") << r.lemmas_used[i];
    }
    out << ", shift " << signed_int(r.net_shift) << " (goal " << signed_int(r.expected_shift) << ")";
    return out.str();
}

std::string render_report(const ValidationReport& r, ReportFormat format) {
    if (format == ReportFormat::Machine) return report_json(r).dump(2) + "\n";
    std::ostringstream out;
    out << "goal " << r.goal << ": " << r.statement << "\n";
    out << "mode " << mode_name(r.mode) << ", strata " << r.strata << "\n";
    int running = 0;
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
        const StepRecord& s = r.steps[i];
        running += s.shift_delta;
        out << "  " << i + 1 << ". " << (s.lemma ? "lemma " : "") << s.rule;
        for (std::size_t k = 0; k < s.moves.size(); ++k)
            out << (k ? ", " : " ") << direction_name(s.moves[k].direction) << " at " << core::render_path(s.moves[k].path);
        out << "  shift " << signed_int(s.shift_delta) << " (net " << signed_int(running) << ")";
        if (s.discharged_by) out << "  [derived by " << *s.discharged_by << "]";
        out << "\n     " << s.term_after << "\n";
    }
    out << "rules used: " << rules_text(r) << "\n";
    if (!r.lemmas_used.empty()) {
        out << "lemmas used:";
        for (const auto& l : r.lemmas_used) out << " " << l;
        out << "\n";
    }
    out << "shift ledger: net " << signed_int(r.net_shift) << ", goal " << signed_int(r.expected_shift) << "\n";
    if (r.valid) out << "result: valid\n";
    else out << "result: INVALID at " << failure_text(r) << "\n";
    return out.str();
}

std::string render_report(const weyl::CohomologyReport& r, ReportFormat format) {
    if (format == ReportFormat::Machine) return report_json(r).dump(2) + "\n";
    std::ostringstream out;
    out << r.side << ": " << r.problem << "\n";
    for (const weyl::Snapshot& s : r.trace)
        out << "  bound " << s.bound << " level " << s.level << "  " << render_dims(s.dims) << "\n";
    out << "  dims " << render_dims(r.dims) << (r.stabilized ? ", stabilized" : ", NOT stabilized") << " (window "
        << r.window << ")" << (r.consistency_ok ? "" : ", consistency check FAILED") << "\n";
    return out.str();
}

std::string render_report(const weyl::ComparisonReport& r, ReportFormat format) {
    if (format == ReportFormat::Machine) return report_json(r).dump(2) + "\n";
    std::ostringstream out;
    out << "potential F = " << r.potential << "\n";
    out << render_report(r.twisted, format) << render_report(r.complement, format) << render_report(r.supports, format);
    out << "twisted  " << render_dims(r.twisted.dims) << "\n";
    out << "supports " << render_dims(r.supports.dims) << "\n";
    if (!r.stabilized) out << "result: inconclusive (not stabilized)\n";
    else out << "result: " << (r.match ? "match" : "MISMATCH") << "\n";
    return out.str();
}

}  // namespace dwork::dsl
