#include "dwork/weyl/poly_parser.hpp"

#include <cctype>

namespace dwork::weyl {

namespace {

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& names)
        : text_(text), names_(names), n_(static_cast<int>(names.size())) {}

    MultiPoly run() {
        MultiPoly p = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return p;
    }

private:
    const std::string& text_;
    const std::vector<std::string>& names_;
    int n_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw PolyParseError(msg + " at offset " + std::to_string(pos_), pos_);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(const std::string& tok) {
        skip_ws();
        if (text_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    bool peek_char(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    MultiPoly expr() {
        MultiPoly acc = term();
        while (true) {
            if (accept("+")) acc = acc + term();
            else if (accept("-")) acc = acc - term();
            else return acc;
        }
    }

    MultiPoly term() {
        MultiPoly acc = unary();
        while (true) {
            skip_ws();
            if (text_.compare(pos_, 2, "**") == 0) return acc;
            if (accept("*")) {
                acc = acc * unary();
            } else if (peek_char('/')) {
                ++pos_;
                Rational d = integer_literal();
                if (d == 0) fail("division by zero");
                acc = acc * Rational(1 / d);
            } else {
                return acc;
            }
        }
    }

    MultiPoly unary() {
        if (accept("-")) return -unary();
        if (accept("+")) return unary();
        return power();
    }

    MultiPoly power() {
        MultiPoly base = atom();
        if (accept("^") || accept("**")) {
            skip_ws();
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                fail("expected nonnegative integer exponent");
            Rational e = integer_literal();
            if (e > 1000) fail("exponent too large");
            base = base.pow(static_cast<int>(e.get_num().get_si()));
        }
        return base;
    }

    Rational integer_literal() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected integer");
        return Rational(mpz_class(text_.substr(start, pos_ - start)));
    }

    MultiPoly atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            MultiPoly inner = expr();
            if (!accept(")")) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return MultiPoly::constant(n_, integer_literal());
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name = text_.substr(start, pos_ - start);
            for (int i = 0; i < n_; ++i)
                if (names_[i] == name) return MultiPoly::variable(n_, i);
            pos_ = start;
            fail("unknown variable '" + name + "'");
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }
};

}  // namespace

MultiPoly parse_polynomial(const std::string& text, const std::vector<std::string>& var_names) {
    return Parser(text, var_names).run();
}

std::vector<std::string> base_variable_names(int n) {
    if (n == 1) return {"x"};
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

}  // namespace dwork::weyl
