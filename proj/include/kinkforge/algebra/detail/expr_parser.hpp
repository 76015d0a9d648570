#pragma once

#include "kinkforge/algebra/rational.hpp"
#include "kinkforge/errors.hpp"

#include <cctype>
#include <functional>
#include <string>
#include <string_view>

namespace kinkforge::algebra::detail {

/// Recursive-descent parser for + - * / ^ ( ) over rationals and identifiers.
/// `Value` must be constructible from Rational and provide `variable`,
/// arithmetic operators and `pow(unsigned)`; division is delegated to `div`.
template <class Value>
class ExprParser {
public:
    using Fail = std::function<void(const std::string&)>;
    using Div = std::function<Value(const Value&, const Value&, const Fail&)>;

    ExprParser(std::string_view s, Div div) : s_(s), div_(std::move(div)) {}

    Value parse() {
        Value v = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return v;
    }

private:
    std::string_view s_;
    Div div_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " at column " + std::to_string(i_ + 1) + " in '" + std::string(s_) + "'");
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }

    Value expr() {
        Value acc = term();
        while (true) {
            if (eat('+'))
                acc = acc + term();
            else if (eat('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    Value term() {
        Value acc = unary();
        while (true) {
            if (eat('*')) {
                acc = acc * unary();
            } else if (eat('/')) {
                Value d = unary();
                acc = div_(acc, d, [this](const std::string& m) { fail(m); });
            } else {
                return acc;
            }
        }
    }

    Value unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    Value power() {
        Value base = primary();
        if (eat('^')) {
            skip();
            const std::size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (start == i_) fail("expected a non-negative integer exponent");
            return base.pow(static_cast<unsigned>(std::stoul(std::string(s_.substr(start, i_ - start)))));
        }
        return base;
    }

    Value primary() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[i_];
        if (c == '(') {
            ++i_;
            Value v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            std::string digits(s_.substr(start, i_ - start));
            if (i_ < s_.size() && s_[i_] == '.') {
                ++i_;
                const std::size_t fs = i_;
                while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
                std::string frac(s_.substr(fs, i_ - fs));
                mpz_class den = 1;
                for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
                return Value(Rational(mpz_class(digits + frac), den));
            }
            return Value(Rational(mpq_class(mpz_class(digits))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
            return Value::variable(std::string(s_.substr(start, i_ - start)));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

}  // namespace kinkforge::algebra::detail
