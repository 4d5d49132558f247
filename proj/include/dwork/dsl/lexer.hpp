#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dwork::dsl {

struct Span {
    std::size_t offset = 0;
    std::size_t length = 0;
    int line = 1;
    int column = 1;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const Span& s, const std::string& msg)
        : std::runtime_error("line " + std::to_string(s.line) + ", column " + std::to_string(s.column) + ": " + msg),
          span(s),
          detail(msg) {}
    Span span;
    std::string detail;
};

struct Token {
    enum class Kind { Ident, Number, Path, Punct, End } kind = Kind::End;
    std::string text;
    Span span;
};

// Identifiers may contain '-' between letters ("allow-singular"); '#' starts a comment.
std::vector<Token> lex(const std::string& text);

}  // namespace dwork::dsl
