#ifndef WEILFORGE_PARSER_HPP
#define WEILFORGE_PARSER_HPP

#include <cctype>
#include <functional>
#include <string>

#include "weilforge/errors.hpp"
#include "weilforge/rational.hpp"

namespace weilforge {

struct SyntaxError : InputError {
    std::size_t position;
    SyntaxError(const std::string& m, std::size_t pos)
        : InputError("SyntaxError", m + " at position " + std::to_string(pos)), position(pos) {}
};
struct UnknownGenerator : InputError {
    explicit UnknownGenerator(const std::string& m) : InputError("UnknownGenerator", m) {}
};
struct IndexOutOfRange : InputError {
    explicit IndexOutOfRange(const std::string& m) : InputError("IndexOutOfRange", m) {}
};
struct OddPower : InputError {
    explicit OddPower(const std::string& m) : InputError("OddPower", m) {}
};

// Recursive-descent parser for the shared expression grammar:
//   expr     := term (("+"|"-") term)*
//   term     := factor ("*" factor)*
//   factor   := rational | gen | factor "^" nat | "(" expr ")"
//   gen      := ("v"|"vh"|"th"|"u"|"uh"|"xi"|"e"|"eb"|"c") nat
//   rational := int ("/" nat)?
// The Builder supplies the target algebra:
//   using Element = ...;
//   Element constant(const Rat&);
//   Element generator(const std::string& name, int index /*1-based*/);
//   bool generator_is_odd(const std::string& name);
//   Element add/sub/mul(Element, Element);  Element power(Element, int);
template <typename Builder>
typename Builder::Element parse_expression(const std::string& src, Builder& b) {
    std::size_t pos = 0;

    auto skip_ws = [&] {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    };
    auto peek = [&]() -> int {
        std::size_t p = pos;
        while (p < src.size() && std::isspace(static_cast<unsigned char>(src[p]))) ++p;
        return p < src.size() ? src[p] : -1;
    };

    auto parse_nat = [&]() -> long {
        skip_ws();
        std::size_t start = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos == start) throw SyntaxError("expected number", start);
        return std::stol(src.substr(start, pos - start));
    };

    // mutually recursive via function objects
    std::function<typename Builder::Element()> parse_expr, parse_term, parse_factor;

    parse_factor = [&]() -> typename Builder::Element {
        skip_ws();
        if (pos >= src.size()) throw SyntaxError("unexpected end of input", pos);
        typename Builder::Element base{};
        bool base_is_odd_gen = false;
        char c = src[pos];
        if (c == '(') {
            ++pos;
            base = parse_expr();
            skip_ws();
            if (pos >= src.size() || src[pos] != ')') throw SyntaxError("expected ')'", pos);
            ++pos;
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+') {
            std::size_t start = pos;
            if (c == '-' || c == '+') ++pos;
            std::size_t digits = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            if (pos == digits) throw SyntaxError("expected number", start);
            std::string num = src.substr(start, pos - start);
            std::string lit = num;
            if (pos < src.size() && src[pos] == '.')
                throw SyntaxError("floating literals are rejected", pos);
            if (pos < src.size() && src[pos] == '/') {
                ++pos;
                std::size_t dstart = pos;
                while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
                if (pos == dstart) throw SyntaxError("expected denominator", dstart);
                lit += "/" + src.substr(dstart, pos - dstart);
            }
            base = b.constant(parse_rational(lit));
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos;
            while (pos < src.size() && std::isalpha(static_cast<unsigned char>(src[pos]))) ++pos;
            std::string name = src.substr(start, pos - start);
            if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos])))
                throw SyntaxError("generator '" + name + "' needs an index", pos);
            long idx = parse_nat();
            base = b.generator(name, static_cast<int>(idx));
            base_is_odd_gen = b.generator_is_odd(name);
        } else {
            throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
        }
        while (peek() == '^') {
            skip_ws();
            ++pos; // '^'
            long k = parse_nat();
            if (base_is_odd_gen && k > 1)
                throw OddPower("odd generator raised to power " + std::to_string(k));
            base = b.power(base, static_cast<int>(k));
            base_is_odd_gen = false;
        }
        return base;
    };

    parse_term = [&]() -> typename Builder::Element {
        auto r = parse_factor();
        while (peek() == '*') {
            skip_ws();
            ++pos;
            r = b.mul(r, parse_factor());
        }
        return r;
    };

    parse_expr = [&]() -> typename Builder::Element {
        auto r = parse_term();
        while (true) {
            int c = peek();
            if (c == '+') {
                skip_ws();
                ++pos;
                r = b.add(r, parse_term());
            } else if (c == '-') {
                skip_ws();
                ++pos;
                r = b.sub(r, parse_term());
            } else {
                break;
            }
        }
        return r;
    };

    auto result = parse_expr();
    skip_ws();
    if (pos != src.size()) throw SyntaxError("trailing input", pos);
    return result;
}

} // namespace weilforge

#endif
