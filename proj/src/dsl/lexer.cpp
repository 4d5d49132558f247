#include "dwork/dsl/lexer.hpp"

#include <cctype>

namespace dwork::dsl {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1, col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        Token t;
        t.span = {i, 0, line, col};
        std::size_t j = i;
        if (ident_start(c)) {
            t.kind = Token::Kind::Ident;
            while (j < text.size() &&
                   (ident_char(text[j]) || (text[j] == '-' && j + 1 < text.size() && ident_start(text[j + 1]) &&
                                            j > i && std::isalpha(static_cast<unsigned char>(text[j - 1])))))
                ++j;
        } else if (digit(c) || (c == '-' && i + 1 < text.size() && digit(text[i + 1]))) {
            t.kind = Token::Kind::Number;
            j = i + 1;
            while (j < text.size() && digit(text[j])) ++j;
        } else if (c == '/') {
            t.kind = Token::Kind::Path;
            while (j < text.size() && (text[j] == '/' || digit(text[j]))) ++j;
        } else {
            t.kind = Token::Kind::Punct;
            static const char* two[] = {":=", "->"};
            j = i + 1;
            for (const char* p : two)
                if (text.compare(i, 2, p) == 0) j = i + 2;
            if (j == i + 1 && std::string(";:=~.&,()[]{}").find(c) == std::string::npos)
                throw ParseError({i, 1, line, col}, std::string("unexpected character '") + c + "'");
        }
        t.text = text.substr(i, j - i);
        t.span.length = j - i;
        advance(j - i);
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Token::Kind::End;
    end.span = {text.size(), 0, line, col};
    out.push_back(end);
    return out;
}

}  // namespace dwork::dsl
