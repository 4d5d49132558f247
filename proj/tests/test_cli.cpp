#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct Outcome {
    int code;
    std::string out;
};

Outcome run(const std::string& args) {
    std::string cmd = std::string(DWORK_CLI_PATH) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string share(const std::string& name) { return std::string(DWORK_SHARE_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string write_temp(const std::string& name, const std::string& text) {
    std::string path = testing::TempDir() + name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST(Cli, VerifyPaper) {
    Outcome r = run("verify-paper");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("9/9 certificates valid"), std::string::npos) << r.out;
}

TEST(Cli, VerifyPaperStrict) {
    Outcome r = run("verify-paper --mode strict");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("8/9 certificates valid"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("C5 remark-jjrsect: INVALID"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("side-condition-failed"), std::string::npos) << r.out;
}

TEST(Cli, VerifyPaperStratumZero) {
    Outcome r = run("verify-paper --strata 0 --output machine");
    EXPECT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["valid"], 9);
    for (const auto& c : j["certificates"]) {
        if (c["label"] == "C6" || c["label"] == "C7") {
            for (const char* f : {"R4", "R5", "R14", "R15"}) EXPECT_FALSE(c["rules_used"].contains(f)) << c["label"];
        }
        if (c["label"] == "C9") EXPECT_EQ(c["discharged"].size(), 2u);
    }
}

TEST(Cli, MachineOutputIsByteStable) {
    Outcome a = run("verify-paper --output machine");
    Outcome b = run("verify-paper --output machine");
    EXPECT_EQ(a.out, b.out);
    Outcome c = run("dwork-check --n 1 --f x^2-1 --output machine");
    Outcome d = run("dwork-check --n 1 --f x^2-1 --output machine");
    EXPECT_EQ(c.out, d.out);
    EXPECT_EQ(nlohmann::json::parse(a.out)["schema_version"], 1);
}

TEST(Cli, ProveBundledDocuments) {
    for (const char* name : {"section2.dwk", "basechange.dwk", "projection.dwk", "fourier.dwk"}) {
        Outcome r = run("prove " + share(name));
        EXPECT_EQ(r.code, 0) << name << "\n" << r.out;
    }
}

TEST(Cli, ProveMutatedPath) {
    std::string text = read_file(share("section2.dwk"));
    std::string from = "step R7 fwd at / then";
    ASSERT_NE(text.find(from), std::string::npos);
    text.replace(text.find(from), from.size(), "step R7 fwd at /0 then");
    Outcome r = run("prove " + write_temp("mutated.dwk", text) + " --output machine");
    EXPECT_EQ(r.code, 1);
    auto j = nlohmann::json::parse(r.out);
    bool seen = false;
    for (const auto& g : j["goals"])
        if (g["goal"] == "jjrsect") {
            seen = true;
            EXPECT_EQ(g["report"]["failure"]["step"], 3);
            EXPECT_EQ(g["report"]["failure"]["kind"], "no-match-at-path");
        }
    EXPECT_TRUE(seen);
}

TEST(Cli, ProveBrokenSyntax) {
    std::string path = write_temp("broken.dwk", "variety X dim 1;\nmorphism f : X -> ;\n");
    Outcome r = run("prove " + path);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find(":2:19: error"), std::string::npos) << r.out;
}

TEST(Cli, ProveWithSearch) {
    std::string text = read_file(share("section2.dwk"));
    // Drop every script so that all goals are open.
    text = text.substr(0, text.find("script for"));
    std::string path = write_temp("open.dwk", text);
    Outcome plain = run("prove " + path);
    EXPECT_EQ(plain.code, 3);
    Outcome searched = run("prove " + path + " --search 6 --output machine");
    auto j = nlohmann::json::parse(searched.out);
    for (const auto& g : j["goals"])
        if (g["goal"] == "jjrsect") {
            EXPECT_EQ(g["status"], "found");
            EXPECT_EQ(g["report"]["valid"], true);
        }
}

TEST(Cli, DworkCheck) {
    Outcome a = run("dwork-check --n 1 --f x^2-1");
    EXPECT_EQ(a.code, 0);
    EXPECT_NE(a.out.find("twisted  {2:2}"), std::string::npos) << a.out;
    EXPECT_NE(a.out.find("supports {2:2}"), std::string::npos) << a.out;
    Outcome b = run("dwork-check --n 1 --f x^2");
    EXPECT_EQ(b.code, 0);
    EXPECT_NE(b.out.find("supports {2:1}"), std::string::npos) << b.out;
    Outcome c = run("dwork-check --n 2 --f x1 --f x2 --output machine");
    EXPECT_EQ(c.code, 0);
    auto j = nlohmann::json::parse(c.out);
    EXPECT_EQ(j["twisted"]["dims"].dump(), "{\"4\":1}");
    EXPECT_EQ(j["match"], true);
}

TEST(Cli, DworkCheckInconclusive) {
    Outcome r = run("dwork-check --n 1 --f x --d-max 2");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("inconclusive"), std::string::npos);
}

TEST(Cli, InputErrors) {
    EXPECT_EQ(run("verify-paper --bogus").code, 2);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("dwork-check --n 1 --f \"x +* 1\"").code, 2);
    EXPECT_EQ(run("dwork-check --n 1 --f z").code, 2);
    EXPECT_EQ(run("dwork-check --n 1 --r 2 --f x").code, 2);
    EXPECT_EQ(run("prove /nonexistent/file.dwk").code, 2);
    EXPECT_EQ(run("verify-paper --mode lenient").code, 2);
}

TEST(Cli, EnvironmentDmax) {
    std::string cmd = "DWORK_DMAX=2 " + std::string(DWORK_CLI_PATH) + " dwork-check --n 1 --f x > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    EXPECT_EQ(WEXITSTATUS(status), 3);
}
