#include "dwork/cli/commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dwork/dsl/builtin.hpp"
#include "dwork/dsl/report.hpp"
#include "dwork/rewrite/search.hpp"
#include "dwork/weyl/poly_parser.hpp"

namespace dwork::cli {

using dsl::Json;
using dsl::ReportFormat;

namespace {

struct Common {
    std::string mode;
    std::optional<int> strata;
    std::string output = "text";

    ReportFormat format() const { return output == "machine" ? ReportFormat::Machine : ReportFormat::Text; }
    std::optional<rewrite::Mode> parsed_mode() const {
        if (mode == "strict") return rewrite::Mode::Strict;
        if (mode == "allow-singular") return rewrite::Mode::AllowSingular;
        return std::nullopt;
    }
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--mode", c.mode, "Side-condition mode for every script")
        ->check(CLI::IsMember({"strict", "allow-singular"}));
    cmd->add_option("--strata", c.strata, "Highest rule stratum scripts may use")->check(CLI::NonNegativeNumber);
    cmd->add_option("--output", c.output, "Report format")->check(CLI::IsMember({"text", "machine"}));
}

int verify_paper(const Common& c, std::ostream& out) {
    dsl::PaperOptions opts{c.parsed_mode(), c.strata};
    std::vector<dsl::PaperResult> results = dsl::verify_paper(opts);
    std::size_t valid = 0;
    for (const auto& r : results) valid += r.report.valid;

    if (c.format() == ReportFormat::Machine) {
        Json certs = Json::array();
        for (const auto& r : results) {
            Json j{{"label", r.entry->label}, {"document", r.entry->document}};
            Json rep = dsl::report_json(r.report);
            rep.erase("schema_version");
            j.update(rep);
            certs.push_back(j);
        }
        Json j{{"schema_version", dsl::kSchemaVersion},
               {"command", "verify-paper"},
               {"mode", c.mode.empty() ? Json("declared") : Json(c.mode)},
               {"strata", c.strata ? Json(*c.strata) : Json("declared")},
               {"certificates", certs},
               {"valid", valid},
               {"total", results.size()},
               {"all_valid", valid == results.size()}};
        out << j.dump(2) << "\n";
    } else {
        for (const auto& r : results) {
            out << r.entry->label << " " << dsl::summary_line(r.report) << "\n";
            if (!r.report.discharged.empty()) {
                out << "   derived:";
                for (const auto& d : r.report.discharged) out << " " << d << ";";
                out << "\n";
            }
            if (!r.report.valid) {
                out << "   failed at";
                if (r.report.failing_step) out << " step " << *r.report.failing_step;
                if (r.report.failing_move) out << " move " << *r.report.failing_move;
                out << ": " << rewrite::failure_name(r.report.failure) << ": " << r.report.reason << "\n";
            }
        }
        out << valid << "/" << results.size() << " certificates valid\n";
    }
    return valid == results.size() ? kSuccess : kFalsified;
}

int prove(const std::string& path, const Common& c, std::optional<int> search_depth, std::ostream& out,
          std::ostream& err) {
    std::ifstream in(path);
    if (!in) {
        err << path << ": cannot read file\n";
        return kInputError;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    dsl::LoadedDocument doc;
    try {
        doc = dsl::load_document(buf.str());
    } catch (const dsl::ParseError& e) {
        err << path << ":" << e.span.line << ":" << e.span.column << ": error: " << e.detail << "\n";
        return kInputError;
    }

    rewrite::CheckOptions opts{c.parsed_mode(), c.strata, dsl::builtin_discharges()};
    std::vector<rewrite::ValidationReport> reports = dsl::check_document(doc, opts);

    bool invalid = false, open = false;
    Json goals = Json::array();
    std::map<std::string, const rewrite::ValidationReport*> by_goal;
    for (const auto& rep : reports) by_goal[rep.goal] = &rep;
    for (const dsl::GoalDecl& g : doc.goals) {
        Json entry{{"goal", g.name}};
        if (auto it = by_goal.find(g.name); it != by_goal.end()) {
            const auto& rep = *it->second;
            invalid |= !rep.valid;
            entry["status"] = rep.valid ? "valid" : "invalid";
            Json r = dsl::report_json(rep);
            r.erase("schema_version");
            entry["report"] = r;
            if (c.format() == ReportFormat::Text) out << dsl::render_report(rep, ReportFormat::Text) << "\n";
            goals.push_back(entry);
            continue;
        }
        if (!search_depth) {
            open = true;
            entry["status"] = "unproved";
            if (c.format() == ReportFormat::Text) out << "goal " << g.name << ": no script\n\n";
            goals.push_back(entry);
            continue;
        }
        rewrite::SearchOptions so;
        so.depth = *search_depth;
        so.mode = c.parsed_mode().value_or(rewrite::Mode::Strict);
        so.strata = c.strata.value_or(1);
        auto found = rewrite::search_equiv(doc.context, g.lhs, g.rhs, so);
        if (!found) {
            open = true;
            entry["status"] = "not-found";
            entry["depth"] = *search_depth;
            if (c.format() == ReportFormat::Text)
                out << "goal " << g.name << ": no proof found within depth " << *search_depth << "\n\n";
            goals.push_back(entry);
            continue;
        }
        found->name = g.name;
        rewrite::ValidationReport rep = rewrite::check_certificate(doc.context, *found, {}, opts);
        invalid |= !rep.valid;
        dsl::ScriptDecl script{g.name, found->mode, found->strata, found->kashiwara, found->steps};
        std::string text = dsl::render_statement(script);
        entry["status"] = rep.valid ? "found" : "invalid";
        entry["script"] = text;
        Json r = dsl::report_json(rep);
        r.erase("schema_version");
        entry["report"] = r;
        if (c.format() == ReportFormat::Text)
            out << "found by search:\n" << text << "\n" << dsl::render_report(rep, ReportFormat::Text) << "\n";
        goals.push_back(entry);
    }
    int code = invalid ? kFalsified : open ? kInconclusive : kSuccess;
    if (c.format() == ReportFormat::Machine) {
        Json j{{"schema_version", dsl::kSchemaVersion}, {"command", "prove"}, {"goals", goals}, {"exit_code", code}};
        out << j.dump(2) << "\n";
    }
    return code;
}

struct DworkArgs {
    int n = 1;
    std::optional<int> r;
    std::vector<std::string> f;
    std::optional<int> d_max;
    int pole_max = 10;
    int window = 3;
    std::string output = "text";
};

int dwork_check(const DworkArgs& a, std::ostream& out, std::ostream& err) {
    if (a.r && *a.r != static_cast<int>(a.f.size())) {
        err << "--r " << *a.r << " does not match the " << a.f.size() << " polynomial(s) given\n";
        return kInputError;
    }
    weyl::SupportsProblem p;
    p.n = a.n;
    for (const std::string& text : a.f) {
        try {
            p.f.push_back(weyl::parse_polynomial(text, weyl::base_variable_names(a.n)));
        } catch (const std::exception& e) {
            err << "cannot parse polynomial '" << text << "': " << e.what() << "\n";
            return kInputError;
        }
    }
    weyl::CompareOptions opts;
    opts.d_max = a.d_max;
    opts.pole_max = a.pole_max;
    opts.window = a.window;
    weyl::ComparisonReport rep = weyl::dwork_compare(p, opts);
    out << dsl::render_report(rep, a.output == "machine" ? ReportFormat::Machine : ReportFormat::Text);
    if (!rep.stabilized) return kInconclusive;
    return rep.match ? kSuccess : kFalsified;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rewriting certificates and concrete checks for exponential D-modules", "dwork"};
    app.require_subcommand(1);

    Common paper_opts;
    CLI::App* paper = app.add_subcommand("verify-paper", "Replay the bundled certificates");
    add_common(paper, paper_opts);

    Common prove_opts;
    std::string file;
    std::optional<int> search;
    CLI::App* prove_cmd = app.add_subcommand("prove", "Check the scripts of a .dwk document");
    prove_cmd->add_option("file", file, "Document to check")->required();
    prove_cmd->add_option("--search", search, "Search for proofs of goals without scripts, up to this many moves")
        ->check(CLI::Range(0, 12));
    add_common(prove_cmd, prove_opts);

    DworkArgs dw;
    CLI::App* dwork = app.add_subcommand("dwork-check", "Compare twisted and supports cohomology dimensions");
    dwork->add_option("--n", dw.n, "Dimension of the affine space")->check(CLI::Range(1, 4));
    dwork->add_option("--r", dw.r, "Number of polynomials (defaults to the number of --f)")->check(CLI::Range(1, 4));
    dwork->add_option("--f", dw.f, "Polynomial cutting out S (repeatable)")->required()->take_all();
    dwork->add_option("--d-max", dw.d_max, "Largest truncation degree (default from DWORK_DMAX)")->check(CLI::Range(1, 200));
    dwork->add_option("--pole-max", dw.pole_max, "Largest pole order on the complement")->check(CLI::Range(1, 100));
    dwork->add_option("--window", dw.window, "Identical snapshots required for stabilization")->check(CLI::Range(1, 20));
    dwork->add_option("--output", dw.output, "Report format")->check(CLI::IsMember({"text", "machine"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kInputError;
    }

    if (paper->parsed()) return verify_paper(paper_opts, out);
    if (prove_cmd->parsed()) return prove(file, prove_opts, search, out, err);
    return dwork_check(dw, out, err);
}

}  // namespace dwork::cli
