// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#include "midpoint/expr.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace midpoint
{

namespace
{

class ExprParser
{
public:
    ExprParser(std::string_view text, const ExprOptions &opt) : text_(text), opt_(opt) {}

    DigitStream parse()
    {
        DigitStream s = expr();
        skip_space();
        if (pos_ < text_.size()) {
            fail("unexpected trailing input");
        }
        return s;
    }

private:
    [[noreturn]] void fail(const std::string &what, std::size_t at) const
    {
        throw ParseError(what, 1, at + 1);
    }
    [[noreturn]] void fail(const std::string &what) const { fail(what, pos_); }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
            ++pos_;
        }
    }

    bool peek(char c)
    {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    void expect(char c)
    {
        if (!peek(c)) {
            fail(std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    DigitStream expr()
    {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("expected an expression");
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '-' || c == '+') {
            return literal();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) == 0) {
            fail(std::string("unexpected character '") + c + "'");
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_])) != 0) {
            ++pos_;
        }
        const std::string name(text_.substr(start, pos_ - start));
        if (name == "bigmid" || name == "limit") {
            return sequence_form(name);
        }
        const std::size_t arity = name == "neg" || name == "tdouble" ? 1
                                  : name == "cc"                     ? 3
                                  : name == "mid" || name == "mul" || name == "tadd" || name == "tsub" ? 2
                                                                                                        : 0;
        if (arity == 0) {
            fail("unknown operation '" + name + "'", start);
        }
        expect('(');
        std::vector<DigitStream> args;
        args.push_back(expr());
        while (peek(',')) {
            ++pos_;
            args.push_back(expr());
        }
        if (args.size() != arity) {
            fail(name + " takes " + std::to_string(arity) + " argument" + (arity == 1 ? "" : "s") + ", got " +
                     std::to_string(args.size()),
                 start);
        }
        expect(')');
        if (name == "neg") {
            return neg(args[0]);
        }
        if (name == "tdouble") {
            return tdouble(args[0]);
        }
        if (name == "mid") {
            return mid(args[0], args[1]);
        }
        if (name == "mul") {
            return mul(args[0], args[1]);
        }
        if (name == "tadd") {
            return tadd(args[0], args[1]);
        }
        if (name == "tsub") {
            return tsub(args[0], args[1]);
        }
        return cc(args[0], args[1], args[2]);
    }

    DigitStream literal()
    {
        const std::size_t start = pos_;
        if (text_[pos_] == '-' || text_[pos_] == '+') {
            ++pos_;
        }
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0 || text_[pos_] == '/')) {
            ++pos_;
        }
        const auto token = text_.substr(start, pos_ - start);
        ExactRational r;
        try {
            r = ExactRational::parse(token);
        } catch (const std::exception &) {
            fail("malformed rational '" + std::string(token) + "'", start);
        }
        if (r < ExactRational(-1) || ExactRational(1) < r) {
            fail("literal " + r.str() + " outside [-1,1]", start);
        }
        return from_rational(r);
    }

    DigitStream sequence_form(const std::string &name)
    {
        const std::size_t start = pos_;
        expect('[');
        std::vector<DigitStream> items;
        items.push_back(expr());
        while (peek(',')) {
            ++pos_;
            items.push_back(expr());
        }
        DigitStream tail;
        if (peek(';')) {
            ++pos_;
            skip_space();
            if (text_.substr(pos_, 4) != "tail") {
                fail("expected 'tail'");
            }
            pos_ += 4;
            tail = expr();
        }
        expect(']');
        if (name == "limit" && opt_.check_modulus) {
            check_modulus(items, tail, start);
        }
        StreamSequence seq = [items, tail](std::size_t i) { return i < items.size() ? items[i] : tail; };
        return name == "bigmid" ? bigmid(std::move(seq)) : limit(std::move(seq));
    }

    void check_modulus(const std::vector<DigitStream> &items, const DigitStream &tail, std::size_t at) const
    {
        std::vector<DigitStream> all = items;
        all.push_back(tail);
        for (std::size_t i = 0; i + 1 < all.size(); ++i) {
            const auto a = approx_value(all[i], opt_.modulus_precision);
            const auto b = approx_value(all[i + 1], opt_.modulus_precision);
            const ExactRational sep = max(a.lo.to_rational() - b.hi.to_rational(), b.lo.to_rational() - a.hi.to_rational());
            if (ExactRational::pow2(static_cast<long>(i) + 1) < sep) {
                fail("limit: elements " + std::to_string(i) + " and " + std::to_string(i + 1) + " are more than 2^-" +
                         std::to_string(i + 1) + " apart",
                     at);
            }
        }
    }

    std::string_view text_;
    const ExprOptions &opt_;
    std::size_t pos_ = 0;
};

} // namespace

DigitStream parse_expression(std::string_view text, const ExprOptions &opt)
{
    return ExprParser(text, opt).parse();
}

} // namespace midpoint
