#pragma once

// Random well-formed .dwk documents for round-trip testing.

#include <random>
#include <string>
#include <vector>

#include "dwork/rewrite/rule.hpp"

class DocGenerator {
public:
    explicit DocGenerator(unsigned seed) : rng_(seed) {}

    std::string generate() {
        reset();
        std::string out;
        int nv = range(1, 3);
        for (int i = 0; i < nv; ++i) {
            std::string name = fresh("v");
            int dim = range(0, 3);
            bool singular = chance(4);
            std::string flags = singular ? " singular" : "";
            if (chance(6)) flags += " nonreduced";
            out += "variety " + name + " dim " + std::to_string(dim) + flags + ";\n";
            vars_.push_back({name, dim, singular});
        }
        int nb = range(0, 2);
        for (int i = 0; i < nb; ++i) {
            Var base = pick(vars_);
            int rank = range(1, 2);
            std::string b = fresh("b");
            out += "bundle " + b + " over " + base.name + " rank " + std::to_string(rank) + ";\n";
            vars_.push_back({b, base.dim + rank, base.singular});
            morphs_.push_back({fresh("pr"), b, base.name, false});
            out += "morphism " + morphs_.back().name + " : " + b + " -> " + base.name + " projection;\n";
            morphs_.push_back({fresh("z"), base.name, b, true});
            out += "morphism " + morphs_.back().name + " : " + base.name + " -> " + b + " zero_section;\n";
            if (rank == 1) {
                funcs_.push_back({fresh("t"), b});
                out += "function " + funcs_.back().name + " on " + b + " coordinate;\n";
            }
            if (chance(2)) {
                std::string d = fresh("bd");
                out += "bundle " + d + " over " + base.name + " rank " + std::to_string(rank) + " dual " + b + ";\n";
                vars_.push_back({d, base.dim + rank, base.singular});
                duals_.push_back({b, d});
            }
        }
        if (chance(2) && vars_.size() >= 2) {
            Var a = pick(vars_), c = pick(vars_);
            std::string p = fresh("p");
            out += "product " + p + " = " + a.name + " x " + c.name + ";\n";
            vars_.push_back({p, a.dim + c.dim, a.singular || c.singular});
            morphs_.push_back({fresh("q"), p, a.name, false});
            out += "morphism " + morphs_.back().name + " : " + p + " -> " + a.name + " factor 1;\n";
        }
        int nm = range(1, 4);
        for (int i = 0; i < nm; ++i) {
            Var s = pick(vars_), t = pick(vars_);
            std::string m = fresh("m");
            if (t.dim >= s.dim && chance(2)) {
                out += "morphism " + m + " : " + s.name + " -> " + t.name + " closed codim " + std::to_string(t.dim - s.dim) + ";\n";
                morphs_.push_back({m, s.name, t.name, true});
            } else {
                out += "morphism " + m + " : " + s.name + " -> " + t.name + ";\n";
                morphs_.push_back({m, s.name, t.name, false});
            }
        }
        int ns = range(0, 3);
        for (int i = 0; i < ns; ++i) {
            std::string s = fresh("s");
            std::vector<Morph> closed;
            for (const auto& m : morphs_)
                if (m.closed && !is_singular(m.source)) closed.push_back(m);
            if (!closed.empty() && chance(2)) {
                Morph j = pick(closed);
                out += "subvariety " + s + " in " + j.target + " image " + j.name + ";\n";
                subs_.push_back({s, j.target});
            } else {
                Var a = pick(vars_);
                out += "subvariety " + s + " in " + a.name + (chance(2) ? " singular" : "") + ";\n";
                subs_.push_back({s, a.name});
            }
        }
        int nf = range(0, 2);
        for (int i = 0; i < nf; ++i) {
            Var a = pick(vars_);
            funcs_.push_back({fresh("f"), a.name});
            out += "function " + funcs_.back().name + " on " + a.name + ";\n";
        }
        int nmod = range(1, 2);
        for (int i = 0; i < nmod; ++i) {
            Var a = pick(vars_);
            mods_.push_back({fresh("M"), a.name});
            out += "module " + mods_.back().name + " on " + a.name + ";\n";
        }
        // A composite renamed by a fresh symbol.
        for (const auto& g : morphs_) {
            for (const auto& f : morphs_) {
                if (f.target != g.source || !chance(3)) continue;
                std::string h = fresh("h");
                out += "morphism " + h + " : " + f.source + " -> " + g.target + ";\n";
                out += "identity " + g.name + " . " + f.name + " = " + h + ";\n";
                morphs_.push_back({h, f.source, g.target, false});
                goto composed;
            }
        }
    composed:
        int ng = range(0, 3);
        std::vector<std::string> goals;
        for (int i = 0; i < ng; ++i) {
            Var v = pick(vars_);
            std::string g = fresh("goal");
            out += "goal " + g + " : " + term(v.name, 2) + " ~ " + term(v.name, 2) + ";\n";
            goals.push_back(g);
        }
        for (std::size_t i = 0; i < goals.size(); ++i) {
            if (!chance(2) && i + 1 != goals.size()) continue;
            out += "script for " + goals[i];
            if (chance(3)) out += chance(2) ? " mode strict" : " mode allow-singular";
            if (chance(3)) out += " strata " + std::to_string(range(0, 1));
            out += " {\n";
            std::vector<Morph> closed;
            for (const auto& m : morphs_)
                if (m.closed) closed.push_back(m);
            if (!closed.empty() && chance(3)) out += "  kashiwara " + pick(closed).name + ";\n";
            int steps = range(0, 4);
            for (int s = 0; s < steps; ++s) {
                if (i > 0 && chance(5)) {
                    out += "  step lemma " + goals[range(0, static_cast<int>(i) - 1)] + " " + move(nullptr) + ";\n";
                    continue;
                }
                const auto& rules = dwork::rewrite::catalogue();
                const auto& rule = rules[range(0, static_cast<int>(rules.size()) - 1)];
                out += "  step " + rule.id + " " + move(&rule);
                if (chance(4)) out += " then " + move(&rule);
                out += ";\n";
            }
            out += "}\n";
        }
        return out;
    }

private:
    struct Var {
        std::string name;
        int dim;
        bool singular;
    };
    struct Morph {
        std::string name, source, target;
        bool closed;
    };
    struct Named {
        std::string name, on;
    };

    std::mt19937 rng_;
    int counter_ = 0;
    std::vector<Var> vars_;
    std::vector<Morph> morphs_;
    std::vector<Named> subs_, funcs_, mods_;
    std::vector<std::pair<std::string, std::string>> duals_;

    void reset() {
        counter_ = 0;
        vars_.clear();
        morphs_.clear();
        subs_.clear();
        funcs_.clear();
        mods_.clear();
        duals_.clear();
    }
    int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool chance(int one_in) { return range(1, one_in) == 1; }
    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[range(0, static_cast<int>(v.size()) - 1)];
    }
    std::string fresh(const std::string& prefix) { return prefix + std::to_string(counter_++); }
    bool is_singular(const std::string& name) const {
        for (const auto& v : vars_)
            if (v.name == name) return v.singular;
        return false;
    }

    std::string morph_into(const std::string& target) {
        std::vector<Morph> c;
        for (const auto& m : morphs_)
            if (m.target == target) c.push_back(m);
        return c.empty() ? "" : pick(c).name;
    }

    std::string term(const std::string& on, int depth) {
        std::vector<std::string> options{"O[" + on + "]", "O_" + on};
        for (const auto& m : mods_)
            if (m.on == on) options.push_back(m.name);
        for (const auto& f : funcs_)
            if (f.on == on) options.push_back("Exp[" + on + "](" + f.name + ")");
        if (depth > 0) {
            for (int k = 0; k < 3; ++k) options.push_back("");
        }
        std::string choice = pick(options);
        if (!choice.empty()) return chance(5) ? choice + "[" + std::to_string(range(-2, 2)) + "]" : choice;
        int kind = range(0, 4);
        if (kind == 0) return "Tensor(" + term(on, depth - 1) + ", " + term(on, depth - 1) + ")";
        if (kind == 1) {
            for (const auto& m : morphs_)
                if (m.source == on && chance(2)) return "Opb[" + m.name + "](" + term(m.target, depth - 1) + ")";
        }
        if (kind == 2) {
            for (const auto& m : morphs_)
                if (m.target == on && chance(2)) return "Oim[" + m.name + "](" + term(m.source, depth - 1) + ")";
        }
        if (kind == 3) {
            for (const auto& s : subs_)
                if (s.on == on) return "RGamma[" + s.name + "](" + term(on, depth - 1) + ")";
        }
        if (kind == 4) {
            for (const auto& [b, d] : duals_)
                if (d == on) return "Fourier[" + b + "](" + term(b, depth - 1) + ")";
        }
        return "O[" + on + "]";
    }

    std::string binding(dwork::rewrite::Sort sort) {
        using dwork::rewrite::Sort;
        switch (sort) {
            case Sort::Term: return term(pick(vars_).name, 1);
            case Sort::Morphism: {
                const Morph& m = pick(morphs_);
                if (chance(4)) return "id[" + m.source + "]";
                std::string g = morph_into(m.source);
                return g.empty() || !chance(3) ? m.name : m.name + " . " + g;
            }
            case Sort::Subvariety:
                if (subs_.empty()) return "red(" + std::string("s") + ")";
                return chance(4) ? "red(" + pick(subs_).name + ")" : pick(subs_).name;
            case Sort::Function:
                if (funcs_.empty()) return "";
                return pick(funcs_).name;
            case Sort::Variety: return pick(vars_).name;
            case Sort::Bundle: return "";
        }
        return "";
    }

    std::string move(const dwork::rewrite::RewriteRule* rule) {
        std::string path = "/";
        int len = range(0, 3);
        for (int i = 0; i < len; ++i) path += (i ? "/" : "") + std::to_string(range(0, 1));
        std::string out = std::string(chance(2) ? "fwd" : "bwd") + " at " + path;
        if (!rule || !chance(2)) return out;
        std::string with;
        for (const auto& [meta, sort] : rule->metas) {
            if (!chance(2)) continue;
            std::string v = binding(sort);
            if (v.empty() || v.rfind("red(s)", 0) == 0) continue;
            with += (with.empty() ? " with " : ", ") + meta + " := " + v;
        }
        return out + with;
    }
};
