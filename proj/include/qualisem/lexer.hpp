#pragma once

// Tokenizer shared by the formula, term and scenario parsers.
// Whitespace-insensitive; '#' starts a comment that runs to end of line.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "qualisem/error.hpp"

namespace qualisem {

struct Token {
    enum class Kind { Ident, Number, Punct, End };

    Kind kind = Kind::End;
    std::string text;
    SourcePos pos;

    std::string describe() const {
        switch (kind) {
            case Kind::Ident: return "identifier '" + text + "'";
            case Kind::Number: return "number " + text;
            case Kind::Punct: return "'" + text + "'";
            case Kind::End: return "end of input";
        }
        return "?";
    }
};

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    SourcePos pos;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++pos.line;
                pos.column = 1;
            } else {
                ++pos.column;
            }
        }
    };
    auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto is_ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };

    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        Token tok;
        tok.pos = pos;
        std::size_t len = 0;
        if (is_ident_start(c)) {
            tok.kind = Token::Kind::Ident;
            while (i + len < src.size() && is_ident_char(src[i + len])) ++len;
        } else if (is_digit(c)) {
            tok.kind = Token::Kind::Number;
            while (i + len < src.size() && is_digit(src[i + len])) ++len;
            if (i + len + 1 < src.size() && src[i + len] == '.' && is_digit(src[i + len + 1])) {
                ++len;
                while (i + len < src.size() && is_digit(src[i + len])) ++len;
            }
            if (i + len < src.size() && (src[i + len] == 'e' || src[i + len] == 'E')) {
                std::size_t k = len + 1;
                if (i + k < src.size() && (src[i + k] == '+' || src[i + k] == '-')) ++k;
                if (i + k < src.size() && is_digit(src[i + k])) {
                    len = k;
                    while (i + len < src.size() && is_digit(src[i + len])) ++len;
                }
            }
        } else if (src.substr(i, 2) == "->") {
            tok.kind = Token::Kind::Punct;
            len = 2;
        } else if (std::string_view("{}()[],;:=.\\*+-").find(c) != std::string_view::npos) {
            tok.kind = Token::Kind::Punct;
            len = 1;
        } else {
            throw SyntaxError(pos, {"a token"}, std::string("character '") + c + "'");
        }
        tok.text = std::string(src.substr(i, len));
        advance(len);
        out.push_back(std::move(tok));
    }
    Token end;
    end.kind = Token::Kind::End;
    end.pos = pos;
    out.push_back(end);
    return out;
}

class TokenStream {
public:
    explicit TokenStream(std::string_view src) : tokens_(tokenize(src)) {}

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t k = std::min(index_ + ahead, tokens_.size() - 1);
        return tokens_[k];
    }
    const Token& next() {
        const Token& t = tokens_[index_];
        if (index_ + 1 < tokens_.size()) ++index_;
        return t;
    }
    bool at_end() const { return peek().kind == Token::Kind::End; }

    bool is(std::string_view text) const {
        const auto& t = peek();
        return t.kind != Token::Kind::End && t.kind != Token::Kind::Number && t.text == text;
    }
    bool accept(std::string_view text) {
        if (!is(text)) return false;
        next();
        return true;
    }
    void expect(std::string_view text) {
        if (!accept(text)) fail({"'" + std::string(text) + "'"});
    }
    std::string expect_ident(const char* what = "identifier") {
        if (peek().kind != Token::Kind::Ident) fail({what});
        return next().text;
    }
    std::string expect_keyword(std::initializer_list<std::string_view> options) {
        for (auto o : options)
            if (is(o)) return next().text;
        std::vector<std::string> exp;
        for (auto o : options) exp.push_back("'" + std::string(o) + "'");
        fail(exp);
    }
    double expect_number() {
        bool negative = false;
        if (accept("-")) negative = true;
        else accept("+");
        if (peek().kind != Token::Kind::Number) fail({"number"});
        const auto& t = next();
        double v = std::stod(t.text);
        return negative ? -v : v;
    }
    std::int64_t expect_integer() {
        bool negative = false;
        if (accept("-")) negative = true;
        else accept("+");
        const auto& t = peek();
        std::int64_t v = 0;
        if (t.kind != Token::Kind::Number) fail({"integer"});
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size()) fail({"integer"});
        next();
        return negative ? -v : v;
    }
    void expect_end() {
        if (!at_end()) fail({"end of input"});
    }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        throw SyntaxError(peek().pos, std::move(expected), peek().describe());
    }

private:
    std::vector<Token> tokens_;
    std::size_t index_ = 0;
};

}  // namespace qualisem
