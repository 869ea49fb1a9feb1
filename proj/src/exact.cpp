// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#include "midpoint/exact.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <ostream>
#include <sstream>

namespace midpoint
{

ParseError::ParseError(const std::string &what, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what), line_(line),
      column_(column)
{
}

ExactRational::ExactRational(long n, long d)
{
    if (d == 0) {
        throw DomainError("rational with zero denominator");
    }
    q_ = mpq_class(n, d);
    q_.canonicalize();
}

ExactRational::ExactRational(const mpz_class &n, const mpz_class &d)
{
    if (sgn(d) == 0) {
        throw DomainError("rational with zero denominator");
    }
    q_ = mpq_class(n, d);
    q_.canonicalize();
}

ExactRational::ExactRational(mpq_class q) : q_(std::move(q))
{
    q_.canonicalize();
}

ExactRational ExactRational::parse(std::string_view text)
{
    auto fail = [&](std::size_t col, const std::string &msg) -> ExactRational {
        throw ParseError(msg + " in rational literal '" + std::string(text) + "'", 1, col + 1);
    };
    if (text.empty()) {
        return fail(0, "empty");
    }
    std::size_t pos = 0;
    bool negative = false;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        pos = 1;
    }
    const auto slash = text.find('/', pos);
    const auto num_s = text.substr(pos, slash == std::string_view::npos ? std::string_view::npos : slash - pos);
    auto all_digits = [](std::string_view s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    if (!all_digits(num_s)) {
        return fail(pos, "expected digits");
    }
    mpz_class num(std::string(num_s), 10);
    mpz_class den(1);
    if (slash != std::string_view::npos) {
        const auto den_s = text.substr(slash + 1);
        if (!all_digits(den_s)) {
            return fail(slash + 1, "expected digits");
        }
        den = mpz_class(std::string(den_s), 10);
        if (sgn(den) == 0) {
            return fail(slash + 1, "zero denominator");
        }
    }
    if (negative) {
        num = -num;
    }
    return ExactRational(num, den);
}

ExactRational ExactRational::pow2(long n)
{
    mpz_class p(1);
    if (n >= 0) {
        mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(n));
        return {mpz_class(1), p};
    }
    mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<mp_bitcnt_t>(-n));
    return {p, mpz_class(1)};
}

std::string ExactRational::str() const
{
    if (q_.get_den() == 1) {
        return q_.get_num().get_str();
    }
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string ExactRational::decimal(unsigned places) const
{
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
    mpz_class num = abs(q_.get_num()) * scale;
    mpz_class scaled;
    mpz_tdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), q_.get_den().get_mpz_t());
    std::string digits = scaled.get_str();
    if (digits.size() <= places) {
        digits.insert(0, places + 1 - digits.size(), '0');
    }
    std::string out = sgn(q_) < 0 ? "-" : "";
    out += digits.substr(0, digits.size() - places);
    if (places > 0) {
        out += "." + digits.substr(digits.size() - places);
    }
    return out;
}

ExactRational operator+(const ExactRational &a, const ExactRational &b)
{
    return ExactRational(mpq_class(a.q_ + b.q_));
}

ExactRational operator-(const ExactRational &a, const ExactRational &b)
{
    return ExactRational(mpq_class(a.q_ - b.q_));
}

ExactRational operator*(const ExactRational &a, const ExactRational &b)
{
    return ExactRational(mpq_class(a.q_ * b.q_));
}

ExactRational operator/(const ExactRational &a, const ExactRational &b)
{
    if (b.is_zero()) {
        throw DomainError("division by zero");
    }
    return ExactRational(mpq_class(a.q_ / b.q_));
}

ExactRational operator-(const ExactRational &a)
{
    return ExactRational(mpq_class(-a.q_));
}

ExactRational &ExactRational::operator+=(const ExactRational &o)
{
    q_ += o.q_;
    return *this;
}

ExactRational &ExactRational::operator-=(const ExactRational &o)
{
    q_ -= o.q_;
    return *this;
}

ExactRational &ExactRational::operator*=(const ExactRational &o)
{
    q_ *= o.q_;
    return *this;
}

std::ostream &operator<<(std::ostream &os, const ExactRational &r)
{
    return os << r.str();
}

ExactRational abs(const ExactRational &r)
{
    return r.sign() < 0 ? -r : r;
}

ExactRational min(const ExactRational &a, const ExactRational &b)
{
    return b < a ? b : a;
}

ExactRational max(const ExactRational &a, const ExactRational &b)
{
    return a < b ? b : a;
}

ExactRational mid(const ExactRational &a, const ExactRational &b)
{
    mpq_class s = a.raw() + b.raw();
    mpq_div_2exp(s.get_mpq_t(), s.get_mpq_t(), 1);
    return ExactRational(std::move(s));
}

ExactRational confine(const ExactRational &x)
{
    return min(ExactRational(1), max(x, ExactRational(-1)));
}

ExactRational rat_arith(const ExactRational &a, const ExactRational &b, RatOp op)
{
    switch (op) {
    case RatOp::add:
        return a + b;
    case RatOp::sub:
        return a - b;
    case RatOp::mul:
        return a * b;
    case RatOp::div:
        return a / b;
    case RatOp::mid:
        return mid(a, b);
    }
    throw DomainError("unknown rational operation");
}

bool is_dyadic(const ExactRational &a)
{
    const mpz_class &d = a.raw().get_den();
    // d > 0, and a power of two iff it has a single set bit.
    return mpz_popcount(d.get_mpz_t()) == 1;
}

Dyadic::Dyadic(mpz_class mantissa, unsigned exponent) : mantissa_(std::move(mantissa)), exponent_(exponent)
{
    if (sgn(mantissa_) == 0) {
        exponent_ = 0;
        return;
    }
    const auto tz = static_cast<unsigned>(mpz_scan1(mantissa_.get_mpz_t(), 0));
    const unsigned shift = std::min(tz, exponent_);
    if (shift > 0) {
        mpz_fdiv_q_2exp(mantissa_.get_mpz_t(), mantissa_.get_mpz_t(), shift);
        exponent_ -= shift;
    }
}

Dyadic Dyadic::from_rational(const ExactRational &r)
{
    if (!is_dyadic(r)) {
        throw DomainError("not a dyadic rational: " + r.str());
    }
    const auto e = static_cast<unsigned>(mpz_scan1(r.raw().get_den().get_mpz_t(), 0));
    return {r.raw().get_num(), e};
}

ExactRational Dyadic::to_rational() const
{
    mpz_class d(1);
    mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), exponent_);
    return {mantissa_, d};
}

DyadicInterval::DyadicInterval(Dyadic lo_, Dyadic hi_) : lo(std::move(lo_)), hi(std::move(hi_))
{
    if (hi < lo) {
        throw DomainError("interval with lo > hi");
    }
}

bool DyadicInterval::contains(const ExactRational &r) const
{
    return lo.to_rational() <= r && r <= hi.to_rational();
}

ExactRational DyadicInterval::width() const
{
    return hi.to_rational() - lo.to_rational();
}

ExactRational DyadicInterval::gap(const ExactRational &r) const
{
    const auto l = lo.to_rational();
    const auto h = hi.to_rational();
    if (r < l) {
        return l - r;
    }
    if (h < r) {
        return r - h;
    }
    return 0;
}

WeightFunction::WeightFunction(std::vector<Entry> entries) : entries_(std::move(entries))
{
    if (entries_.empty()) {
        throw DomainError("weight function with empty support");
    }
    ExactRational total;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto &[g, w] = entries_[i];
        if (w < ExactRational(0) || ExactRational(1) < w) {
            throw DomainError("weight for '" + g + "' outside [0,1]: " + w.str());
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (entries_[j].first == g) {
                throw DomainError("duplicate generator '" + g + "' in weight function");
            }
        }
        total += w;
    }
    if (total != ExactRational(1)) {
        throw DomainError("weights sum to " + total.str() + ", not 1");
    }
}

WeightFunction WeightFunction::dirac(const std::string &gen)
{
    return WeightFunction({{gen, ExactRational(1)}});
}

ExactRational WeightFunction::operator[](std::string_view gen) const
{
    for (const auto &[g, w] : entries_) {
        if (g == gen) {
            return w;
        }
    }
    return 0;
}

bool WeightFunction::contains(std::string_view gen) const
{
    return std::any_of(entries_.begin(), entries_.end(), [&](const Entry &e) { return e.first == gen; });
}

std::string WeightFunction::to_json() const
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto &[g, w] : entries_) {
        j[g] = w.str();
    }
    return j.dump();
}

WeightFunction WeightFunction::from_json(std::string_view text)
{
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 1, e.byte);
    }
    if (!j.is_object()) {
        throw ParseError("weight function must be a JSON object", 1, 1);
    }
    std::vector<Entry> entries;
    for (const auto &[k, v] : j.items()) {
        if (v.is_string()) {
            entries.emplace_back(k, ExactRational::parse(v.get<std::string>()));
        } else if (v.is_number_integer()) {
            entries.emplace_back(k, ExactRational(v.get<long>()));
        } else {
            throw ParseError("weight for '" + k + "' must be a \"p/q\" string", 1, 1);
        }
    }
    return WeightFunction(std::move(entries));
}

bool operator==(const WeightFunction &a, const WeightFunction &b)
{
    for (const auto &[g, w] : a.entries_) {
        if (b[g] != w) {
            return false;
        }
    }
    for (const auto &[g, w] : b.entries_) {
        if (a[g] != w) {
            return false;
        }
    }
    return true;
}

std::ostream &operator<<(std::ostream &os, const WeightFunction &w)
{
    bool first = true;
    for (const auto &[g, x] : w.entries()) {
        os << (first ? "" : " ") << g << ':' << x;
        first = false;
    }
    return os;
}

WeightFunction weight_combine(const WeightFunction &lambda, std::span<const WeightFunction> rows)
{
    if (rows.size() != lambda.size()) {
        throw DomainError("weight_combine: " + std::to_string(rows.size()) + " rows for " +
                          std::to_string(lambda.size()) + " weights");
    }
    std::vector<WeightFunction::Entry> out;
    auto slot = [&](const std::string &g) -> ExactRational & {
        for (auto &e : out) {
            if (e.first == g) {
                return e.second;
            }
        }
        return out.emplace_back(g, ExactRational(0)).second;
    };
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto &li = lambda.entries()[i].second;
        for (const auto &[g, w] : rows[i].entries()) {
            slot(g) += li * w;
        }
    }
    return WeightFunction(std::move(out));
}

} // namespace midpoint
