#pragma once

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "offsetshape/poly2.hpp"

namespace offsetshape {

namespace detail {

/// Recursive-descent parser for polynomial expressions over named variables
/// with integer/rational/decimal coefficients and + - * / ^ ( ).
/// Division requires a nonzero constant divisor.
class PolyParser {
public:
    PolyParser(std::string text, std::vector<std::string> vars)
        : s_(std::move(text)), vars_(std::move(vars)) {}

    QPoly2 parse() {
        skip();
        if (eof()) throw parse_error("empty polynomial expression", 0);
        QPoly2 e = expr();
        skip();
        if (!eof()) throw parse_error("unexpected trailing input", pos_);
        return e;
    }

private:
    QPoly2 expr() {
        QPoly2 acc = term();
        for (;;) {
            skip();
            if (match('+'))
                acc = acc + term();
            else if (match('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    QPoly2 term() {
        QPoly2 acc = factor();
        for (;;) {
            skip();
            if (match('*')) {
                acc = acc * factor();
            } else if (match('/')) {
                std::size_t at = pos_;
                QPoly2 g = factor();
                if (g.total_degree() > 0) throw parse_error("divisor must be a constant", at);
                Rat c = g.coeff(0, 0);
                if (c == 0) throw parse_error("division by zero", at);
                acc = acc.scaled(Rat(1) / c);
            } else {
                return acc;
            }
        }
    }

    QPoly2 factor() {
        skip();
        int sign = 1;
        while (peek() == '+' || peek() == '-') {
            if (get() == '-') sign = -sign;
            skip();
        }
        QPoly2 b = base();
        skip();
        if (match('^')) {
            skip();
            std::size_t at = pos_;
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                throw parse_error("exponent must be a nonnegative integer", at);
            long long e = 0;
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                e = e * 10 + (get() - '0');
                if (e > 512) throw parse_error("exponent too large", at);
            }
            b = b.pow(static_cast<int>(e));
        }
        return sign < 0 ? b.scaled(Rat(-1)) : b;
    }

    QPoly2 base() {
        skip();
        if (eof()) throw parse_error("unexpected end of input", pos_);
        char c = peek();
        if (c == '(') {
            get();
            QPoly2 e = expr();
            skip();
            if (!match(')')) throw parse_error("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return variable();
        throw parse_error(std::string("unexpected character '") + c + "'", pos_);
    }

    QPoly2 number() {
        std::size_t start = pos_;
        std::string tok;
        while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') tok.push_back(get());
        try {
            return QPoly2::constant(rat_from_string(tok));
        } catch (const parse_error&) {
            throw parse_error("invalid number '" + tok + "'", start);
        }
    }

    QPoly2 variable() {
        std::size_t start = pos_;
        std::string name;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') name.push_back(get());
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == name) return i == 0 ? QPoly2::var_x() : QPoly2::var_y();
        throw parse_error("unknown variable '" + name + "'", start);
    }

    void skip() {
        while (!eof() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return eof() ? '\0' : s_[pos_]; }
    char get() { return s_[pos_++]; }
    bool match(char c) {
        skip();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string s_;
    std::vector<std::string> vars_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses an implicit curve equation in x, y. Rejects the zero polynomial,
/// constants, and lines (degree-1 curves are their own offsets' trivia).
inline QPoly2 parse_poly(const std::string& text) {
    QPoly2 f = detail::PolyParser(text, {"x", "y"}).parse();
    if (f.is_zero()) throw parse_error("zero polynomial does not define a curve");
    int d = f.total_degree();
    if (d == 0) throw parse_error("constant polynomial does not define a curve");
    if (d == 1) throw parse_error("degree-1 input rejected: the curve is a line");
    return f;
}

/// Parses "xpoly, ypoly" in the parameter h into a pair of exact series.
inline std::pair<TruncSeries<Rat>, TruncSeries<Rat>> parse_place_text(const std::string& text,
                                                                      int trunc) {
    auto comma = text.find(',');
    if (comma == std::string::npos) throw parse_error("place literal needs 'x(h), y(h)'");
    auto side = [&](const std::string& part, std::size_t offset) {
        QPoly2 p;
        try {
            p = detail::PolyParser(part, {"h"}).parse();
        } catch (const parse_error& e) {
            throw parse_error(std::string(e.what()) + " in place coordinate", offset);
        }
        if (p.deg_y() > 0) throw parse_error("place coordinates use the single variable h", offset);
        TruncSeries<Rat> s(trunc);
        for (auto& [k, v] : p.terms()) {
            if (k.first >= trunc)
                throw truncation_error("place coordinate degree exceeds requested trunc");
            s.coeff(k.first) = v;
        }
        return s;
    };
    return {side(text.substr(0, comma), 0), side(text.substr(comma + 1), comma + 1)};
}

template <typename K>
Poly2<K> convert_poly(const QPoly2& f) {
    Poly2<K> r;
    for (auto& [k, v] : f.terms()) r.set(k.first, k.second, coeff_traits<K>::from_rat(v));
    return r;
}

} // namespace offsetshape
