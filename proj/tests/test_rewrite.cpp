#include <gtest/gtest.h>

#include <random>
#include <set>

#include "dwork/dsl/builtin.hpp"
#include "dwork/rewrite/search.hpp"

using namespace dwork;
using namespace dwork::rewrite;
using core::DExpr;
using core::FloatedTerm;
using core::MorphismExpr;
using core::SubvarietyExpr;

namespace {

const dsl::LoadedDocument& document(const std::string& name) {
    for (const auto& [n, doc] : dsl::builtin_documents())
        if (n == name) return doc;
    throw std::logic_error("no document " + name);
}

const GeometryContext& theorem_ctx() { return document("section2.dwk").context; }

const ProofCertificate& certificate(const std::string& label) { return *dsl::builtin_certificate(label)->certificate; }

DExpr parse_term(const GeometryContext&, const std::string& text) {
    // Goals are the simplest way to reach the term grammar.
    std::string doc = *dsl::bundled_document("section2.dwk") + "\ngoal probe_term : " + text + " ~ " + text + ";\n";
    return dsl::load_document(doc).goals.back().lhs;
}

std::string nf_key(const GeometryContext& ctx, const FloatedTerm& t) {
    FloatedTerm nf = core::normal_form(ctx, t.core);
    nf.shift += t.shift;
    return nf.key();
}

int family_stratum(const std::string& family) {
    int s = -1;
    for (const auto& r : catalogue())
        if (r.family == family) s = std::max(s, r.stratum);
    return s;
}

std::map<std::string, dsl::PaperResult> paper(const dsl::PaperOptions& o = {}) {
    std::map<std::string, dsl::PaperResult> out;
    for (auto& r : dsl::verify_paper(o)) out[r.entry->label] = r;
    return out;
}

}  // namespace

TEST(Builtin, NineCertificatesAllValid) {
    auto results = paper();
    ASSERT_EQ(results.size(), 9u);
    for (const auto& [label, r] : results) EXPECT_TRUE(r.report.valid) << label << ": " << r.report.reason;
}

TEST(Builtin, RuleMultisets) {
    using M = std::map<std::string, int>;
    const std::map<std::string, std::pair<M, std::size_t>> expected{
        {"C1", {{{"R6", 1}, {"R4", 1}}, 4}},
        {"C2", {{{"R11", 1}, {"R19", 2}, {"R2", 1}, {"R4", 1}, {"R5", 1}, {"R12", 1}}, 7}},
        {"C3", {{{"R17", 1}}, 2}},
        {"C4", {{{"R9", 1}, {"R19", 1}, {"R10", 2}, {"R7", 1}, {"R8", 1}}, 5}},
        {"C5", {{{"R5", 1}, {"R10", 1}}, 2}},
        {"C6", {{{"R1", 2}, {"R5c", 1}, {"R20", 3}}, 6}},
        {"C7", {{{"R20", 4}, {"R1", 1}, {"R5c", 1}}, 6}},
        {"C8", {{{"R5", 2}, {"R3", 1}, {"R1", 2}, {"R2", 1}, {"R4", 1}, {"R12", 1}}, 8}},
        {"C9", {{{"R1", 1}, {"R13", 2}, {"R14", 2}, {"R2", 1}, {"R5", 1}}, 7}},
    };
    auto results = paper();
    for (const auto& [label, want] : expected) {
        const auto& rep = results.at(label).report;
        EXPECT_EQ(rep.rules_used, want.first) << label;
        EXPECT_EQ(rep.steps.size(), want.second) << label;
    }
    EXPECT_EQ(results.at("C1").report.lemmas_used, (std::vector<std::string>{"jjrsect", "pi-pushforward"}));
    EXPECT_EQ(results.at("C3").report.lemmas_used, (std::vector<std::string>{"exp-to-fourier"}));
}

TEST(Builtin, ExpToFourierRuleSequence) {
    const auto rep = paper().at("C2").report;
    std::vector<std::string> families;
    for (const auto& s : rep.steps) families.push_back(find_rule(s.rule)->family);
    EXPECT_EQ(families, (std::vector<std::string>{"R11", "R19", "R2", "R4", "R19", "R5", "R12"}));
}

TEST(Builtin, BaseChangeDerivationAvoidsBaseChange) {
    const auto rep = paper().at("C6").report;
    EXPECT_EQ(rep.rules_used.count("R5"), 0u);
    EXPECT_EQ(rep.strata, 0);
}

TEST(Builtin, StrictModeRejectsSingularRemark) {
    dsl::PaperOptions o;
    o.mode = Mode::Strict;
    auto results = paper(o);
    for (const auto& [label, r] : results) {
        if (label == "C5") {
            EXPECT_FALSE(r.report.valid);
            EXPECT_EQ(r.report.failure, FailureKind::SideCondition);
            EXPECT_EQ(r.report.failing_step, 1u);
            EXPECT_NE(r.report.reason.find("S"), std::string::npos);
        } else {
            EXPECT_TRUE(r.report.valid) << label;
        }
    }
    o.mode = Mode::AllowSingular;
    EXPECT_TRUE(paper(o).at("C5").report.valid);
}

TEST(Builtin, ShiftLedger) {
    for (const auto& [label, r] : paper()) {
        ASSERT_TRUE(r.report.valid) << label;
        int sum = 0;
        for (const auto& s : r.report.steps) sum += s.shift_delta;
        EXPECT_EQ(sum, r.report.net_shift) << label;
        EXPECT_EQ(r.report.net_shift, r.report.expected_shift) << label;
    }
    // The two local-cohomology steps pass through [2] and net to [1].
    const auto& c4 = paper().at("C4").report;
    EXPECT_NE(c4.steps[1].term_after.find("[2]"), std::string::npos) << c4.steps[1].term_after;
    EXPECT_EQ(c4.net_shift, 1);
}

TEST(Builtin, StratumZeroUsesOnlyStratumZeroOrDerivedRules) {
    dsl::PaperOptions o;
    o.strata = 0;
    auto results = paper(o);
    std::set<std::string> stratum_zero_valid;
    for (const auto& [label, r] : results)
        if (r.report.valid) stratum_zero_valid.insert(r.report.goal);
    for (const auto& [label, r] : results) {
        EXPECT_TRUE(r.report.valid) << label << ": " << r.report.reason;
        for (const auto& [family, n] : r.report.rules_used) {
            if (family == "R9" || family_stratum(family) == 0) continue;
            bool derived = false;
            for (const auto& s : r.report.steps)
                if (s.discharged_by && find_rule(s.rule)->family == family)
                    derived = stratum_zero_valid.count(*s.discharged_by) > 0;
            EXPECT_TRUE(derived) << label << " uses " << family;
        }
    }
    for (const char* label : {"C6", "C7"})
        for (const auto& [family, n] : results.at(label).report.rules_used)
            EXPECT_TRUE(family_stratum(family) == 0) << label << " " << family;
}

TEST(Builtin, StratumZeroWithoutDischargeFails) {
    const auto& doc = document("fourier.dwk");
    CheckOptions o;
    o.strata = 0;
    auto rep = check_certificate(doc.context, doc.certificates.front(), {}, o);
    EXPECT_FALSE(rep.valid);
    EXPECT_EQ(rep.failure, FailureKind::Stratum);
}

TEST(Apply, CompositionThenExponential) {
    const auto& ctx = theorem_ctx();
    FloatedTerm t{parse_term(ctx, "Opb[stilde](Opb[gamma](Exp[A1X](t)))"), 0};
    FloatedTerm out;
    ASSERT_EQ(apply_move(ctx, *find_rule("R1"), t, {Direction::Forward, {}, {}}, Mode::Strict, &out).status,
              ApplyOutcome::Status::Ok);
    EXPECT_EQ(out.core.kind(), DExpr::Kind::Opb);
    FloatedTerm exp;
    ASSERT_EQ(apply_move(ctx, *find_rule("R11"), out, {Direction::Forward, {}, {}}, Mode::Strict, &exp).status,
              ApplyOutcome::Status::Ok);
    EXPECT_EQ(exp.render(), "Exp[V](F)");
}

TEST(Apply, UnitLaw) {
    const auto& ctx = theorem_ctx();
    FloatedTerm t{parse_term(ctx, "Opb[id[X]](M)"), 0};
    FloatedTerm out;
    ASSERT_EQ(apply_move(ctx, *find_rule("R19.opb-id"), t, {Direction::Forward, {}, {}}, Mode::Strict, &out).status,
              ApplyOutcome::Status::Ok);
    EXPECT_EQ(out.render(), "M");
}

TEST(Apply, BaseChangeNeedsDeclaredSquare) {
    const auto& ctx = theorem_ctx();
    // No square with iota on both sides is declared.
    FloatedTerm t{parse_term(ctx, "Opb[iota](Oim[iota](M))"), 0};
    FloatedTerm out;
    ApplyOutcome r = apply_move(ctx, *find_rule("R5"), t, {Direction::Backward, {}, {}}, Mode::AllowSingular, &out);
    EXPECT_EQ(r.status, ApplyOutcome::Status::SideCondition);
    EXPECT_NE(r.reason.find("Cartesian"), std::string::npos) << r.reason;
}

TEST(Apply, NoMatchAtPath) {
    const auto& ctx = theorem_ctx();
    FloatedTerm t{parse_term(ctx, "Tensor(M, O_X)"), 0};
    FloatedTerm out;
    EXPECT_EQ(apply_move(ctx, *find_rule("R8"), t, {Direction::Forward, {}, {}}, Mode::Strict, &out).status,
              ApplyOutcome::Status::NoMatch);
}

TEST(Check, EmptyCertificateForEqualSides) {
    ProofCertificate c;
    c.name = "refl";
    c.lhs = c.rhs = parse_term(theorem_ctx(), "RGamma[S](M)[1]");
    auto rep = check_certificate(theorem_ctx(), c, {});
    EXPECT_TRUE(rep.valid);
    EXPECT_TRUE(rep.steps.empty());
}

TEST(Check, JjrsectStepThreeMutatedToSibling) {
    ProofCertificate c = certificate("C4");
    c.steps[2].moves[0].path = {0};
    auto rep = check_certificate(theorem_ctx(), c, {});
    EXPECT_FALSE(rep.valid);
    EXPECT_EQ(rep.failing_step, 3u);
    EXPECT_EQ(rep.failure, FailureKind::NoMatch);
}

TEST(Check, AllSingleStepCorruptionsOfJjrsect) {
    // Every corruption of one move (direction flipped, path changed, rule swapped) is either
    // rejected at or after the corrupted step, or still proves the goal.
    const ProofCertificate base = certificate("C4");
    const auto& ctx = theorem_ctx();
    int rejected = 0, total = 0;
    for (std::size_t si = 0; si < base.steps.size(); ++si) {
        for (std::size_t mi = 0; mi < base.steps[si].moves.size(); ++mi) {
            std::vector<ProofCertificate> variants;
            ProofCertificate flip = base;
            flip.steps[si].moves[mi].direction = opposite(flip.steps[si].moves[mi].direction);
            variants.push_back(flip);
            for (core::Path p : std::vector<core::Path>{{}, {0}, {1}, {0, 0}, {0, 1}, {5}}) {
                if (p == base.steps[si].moves[mi].path) continue;
                ProofCertificate v = base;
                v.steps[si].moves[mi].path = p;
                variants.push_back(v);
            }
            for (const char* rule : {"R7", "R8", "R10", "R6"}) {
                if (base.steps[si].rule == rule) continue;
                ProofCertificate v = base;
                v.steps[si].rule = rule;
                variants.push_back(v);
            }
            for (const auto& v : variants) {
                ++total;
                ValidationReport rep;
                ASSERT_NO_THROW(rep = check_certificate(ctx, v, {}));
                if (rep.valid) continue;
                ++rejected;
                if (rep.failing_step) EXPECT_GE(*rep.failing_step, si + 1);
            }
        }
    }
    EXPECT_GT(total, 60);
    EXPECT_GT(rejected, total * 9 / 10);
}

TEST(Check, MalformedCertificatesNeverThrow) {
    std::mt19937 rng(3);
    const auto& ctx = theorem_ctx();
    const auto& rules = catalogue();
    for (int trial = 0; trial < 300; ++trial) {
        ProofCertificate c = certificate(trial % 2 ? "C4" : "C2");
        std::uniform_int_distribution<int> pick(0, static_cast<int>(rules.size()) - 1);
        for (auto& s : c.steps) {
            if (rng() % 3 == 0) s.rule = rules[pick(rng)].id;
            if (rng() % 5 == 0) s.rule = "nonsense";
            if (rng() % 7 == 0) s.lemma = true;
            for (auto& m : s.moves) {
                if (rng() % 3 == 0) m.path.push_back(static_cast<int>(rng() % 3));
                if (rng() % 4 == 0) m.bindings["f"] = MorphismExpr::atom("pi");
                if (rng() % 6 == 0) m.bindings["zz"] = SubvarietyExpr::atom("S");
            }
        }
        if (trial % 11 == 0) c.kashiwara = "pi";
        EXPECT_NO_THROW(check_certificate(ctx, c, {}));
    }
}

TEST(Properties, NormalFormIdempotent) {
    for (const auto& [name, doc] : dsl::builtin_documents()) {
        for (const auto& g : doc.goals) {
            for (const DExpr& side : {g.lhs, g.rhs}) {
                FloatedTerm once = core::normal_form(doc.context, side);
                FloatedTerm twice = core::normal_form(doc.context, once.core);
                EXPECT_EQ(once.core.render(), twice.core.render()) << name;
                EXPECT_EQ(twice.shift, 0) << name;
            }
        }
    }
}

TEST(Properties, RuleRoundTripFuzz) {
    // Random walks from every goal side; each applicable (rule, direction, path) is undone at
    // the same path with the same bindings and must return to the same normal form.
    std::mt19937 rng(11);
    std::size_t triples = 0;
    std::set<std::string> families;
    SearchOptions opts;
    opts.mode = Mode::AllowSingular;
    for (int round = 0; triples < 10000 && round < 200; ++round) {
        for (const auto& [name, doc] : dsl::builtin_documents()) {
            const auto& ctx = doc.context;
            for (const auto& g : doc.goals) {
                FloatedTerm cur = core::float_shifts(rng() % 2 ? g.lhs : g.rhs);
                cur.core = core::normalize_symbols(ctx, cur.core);
                for (int step = 0; step < 4; ++step) {
                    std::vector<Successor> next = successors(ctx, cur, opts);
                    if (next.empty()) break;
                    for (const Successor& s : next) {
                        ++triples;
                        const RewriteRule* rule = find_rule(s.rule);
                        families.insert(rule->family);
                        ASSERT_EQ(core::well_formed(ctx, s.result.core), core::well_formed(ctx, cur.core)) << s.rule;
                        Move back = s.move;
                        back.direction = opposite(s.move.direction);
                        FloatedTerm restored;
                        ApplyOutcome r = apply_move(ctx, *rule, s.result, back, opts.mode, &restored);
                        ASSERT_EQ(r.status, ApplyOutcome::Status::Ok)
                            << s.rule << " at " << core::render_path(s.move.path) << " on " << cur.render() << ": "
                            << r.reason;
                        ASSERT_EQ(nf_key(ctx, restored), nf_key(ctx, cur)) << s.rule << " on " << cur.render();
                    }
                    cur = next[rng() % next.size()].result;
                }
            }
        }
    }
    EXPECT_GE(triples, 10000u);
    EXPECT_GE(families.size(), 12u);
}

TEST(Search, RediscoversJjrsect) {
    const ProofCertificate& c4 = certificate("C4");
    SearchOptions o;
    o.depth = 6;
    auto found = search_equiv(theorem_ctx(), c4.lhs, c4.rhs, o);
    ASSERT_TRUE(found.has_value());
    auto rep = check_certificate(theorem_ctx(), *found, {});
    EXPECT_TRUE(rep.valid) << rep.reason;
    std::size_t moves = 0;
    for (const auto& s : found->steps) moves += s.moves.size();
    EXPECT_LE(moves, 6u);
    EXPECT_EQ(found->kashiwara, std::optional<core::Name>("iota"));
    // Same families as the bundled chain apart from the explicit unit step.
    EXPECT_EQ(rep.rules_used.count("R10"), 1u);
    EXPECT_EQ(rep.rules_used.count("R7"), 1u);
    EXPECT_EQ(rep.rules_used.count("R8"), 1u);
}

TEST(Search, EqualSidesGiveEmptyCertificate) {
    DExpr t = parse_term(theorem_ctx(), "Oim[pi](Exp[V](F))");
    auto found = search_equiv(theorem_ctx(), t, t, {});
    ASSERT_TRUE(found.has_value());
    EXPECT_TRUE(found->steps.empty());
}

TEST(Search, NoChainAtDepthThree) {
    SearchOptions o;
    o.depth = 3;
    auto found = search_equiv(theorem_ctx(), parse_term(theorem_ctx(), "Oim[pi](O[V])"),
                              parse_term(theorem_ctx(), "RGamma[S](O[X])"), o);
    EXPECT_FALSE(found.has_value());
}

TEST(Search, Deterministic) {
    const ProofCertificate& c4 = certificate("C4");
    auto a = search_equiv(theorem_ctx(), c4.lhs, c4.rhs, {});
    auto b = search_equiv(theorem_ctx(), c4.lhs, c4.rhs, {});
    ASSERT_TRUE(a && b);
    ASSERT_EQ(a->steps.size(), b->steps.size());
    for (std::size_t i = 0; i < a->steps.size(); ++i) EXPECT_EQ(dsl::render_step(a->steps[i]), dsl::render_step(b->steps[i]));
}

TEST(Search, SoundnessOnRandomGoals) {
    // Goals built by short random walks; whatever search returns must check.
    std::mt19937 rng(5);
    int found = 0, tried = 0;
    SearchOptions o;
    o.depth = 3;
    o.try_kashiwara = false;
    for (const auto& [name, doc] : dsl::builtin_documents()) {
        const auto& ctx = doc.context;
        for (const auto& g : doc.goals) {
            FloatedTerm start = core::float_shifts(g.lhs);
            start.core = core::normalize_symbols(ctx, start.core);
            FloatedTerm cur = start;
            int len = 1 + static_cast<int>(rng() % 2);
            for (int k = 0; k < len; ++k) {
                auto next = successors(ctx, cur, o);
                if (next.empty()) break;
                cur = next[rng() % next.size()].result;
            }
            ++tried;
            DExpr rhs = cur.shift ? DExpr::shift(cur.core, cur.shift) : cur.core;
            DExpr lhs = start.shift ? DExpr::shift(start.core, start.shift) : start.core;
            auto cert = search_equiv(ctx, lhs, rhs, o);
            if (!cert) continue;
            ++found;
            auto rep = check_certificate(ctx, *cert, {});
            EXPECT_TRUE(rep.valid) << name << " " << g.name << ": " << rep.reason;
        }
    }
    EXPECT_GT(found, tried / 2);
}
