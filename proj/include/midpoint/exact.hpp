// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace midpoint
{

/// Raised for violated preconditions on exact values (division by zero,
/// weights that do not form a probability vector, out-of-range inputs).
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Raised by every text/JSON reader in the library.  Positions are 1-based.
class ParseError : public std::runtime_error
{
public:
    ParseError(const std::string &what, std::size_t line, std::size_t column);

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Arbitrary precision fraction, always kept in lowest terms with a
/// positive denominator.
class ExactRational
{
public:
    ExactRational() = default;
    ExactRational(long n) : q_(n) {} // NOLINT(google-explicit-constructor)
    ExactRational(long n, long d);
    ExactRational(const mpz_class &n, const mpz_class &d);
    explicit ExactRational(mpq_class q);

    /// Accepts "p", "p/q", optional leading sign.  Whitespace is not skipped.
    static ExactRational parse(std::string_view text);

    /// 2^-n.
    static ExactRational pow2(long n);

    [[nodiscard]] mpz_class numerator() const { return q_.get_num(); }
    [[nodiscard]] mpz_class denominator() const { return q_.get_den(); }
    [[nodiscard]] const mpq_class &raw() const noexcept { return q_; }

    [[nodiscard]] std::string str() const;
    [[nodiscard]] double to_double() const { return q_.get_d(); }
    /// Decimal rendering truncated toward zero after `places` fractional digits.
    [[nodiscard]] std::string decimal(unsigned places) const;

    [[nodiscard]] int sign() const { return sgn(q_); }
    [[nodiscard]] bool is_zero() const { return sgn(q_) == 0; }

    friend ExactRational operator+(const ExactRational &a, const ExactRational &b);
    friend ExactRational operator-(const ExactRational &a, const ExactRational &b);
    friend ExactRational operator*(const ExactRational &a, const ExactRational &b);
    /// Throws DomainError on a zero divisor.
    friend ExactRational operator/(const ExactRational &a, const ExactRational &b);
    friend ExactRational operator-(const ExactRational &a);

    ExactRational &operator+=(const ExactRational &o);
    ExactRational &operator-=(const ExactRational &o);
    ExactRational &operator*=(const ExactRational &o);

    friend bool operator==(const ExactRational &a, const ExactRational &b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const ExactRational &a, const ExactRational &b)
    {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    mpq_class q_;
};

std::ostream &operator<<(std::ostream &os, const ExactRational &r);

ExactRational abs(const ExactRational &r);
ExactRational min(const ExactRational &a, const ExactRational &b);
ExactRational max(const ExactRational &a, const ExactRational &b);
/// (a + b) / 2.
ExactRational mid(const ExactRational &a, const ExactRational &b);
/// Min(1, Max(x, -1)).
ExactRational confine(const ExactRational &x);

enum class RatOp { add, sub, mul, div, mid };

ExactRational rat_arith(const ExactRational &a, const ExactRational &b, RatOp op);

/// True iff the reduced denominator is a power of two.
bool is_dyadic(const ExactRational &a);

/// mantissa / 2^exponent.  Normalized: mantissa odd, or zero with exponent 0.
class Dyadic
{
public:
    Dyadic() = default;
    Dyadic(mpz_class mantissa, unsigned exponent);

    /// Throws DomainError if `r` is not dyadic.
    static Dyadic from_rational(const ExactRational &r);

    [[nodiscard]] const mpz_class &mantissa() const noexcept { return mantissa_; }
    [[nodiscard]] unsigned exponent() const noexcept { return exponent_; }
    [[nodiscard]] ExactRational to_rational() const;
    [[nodiscard]] std::string str() const { return to_rational().str(); }

    friend bool operator==(const Dyadic &a, const Dyadic &b) = default;
    friend std::strong_ordering operator<=>(const Dyadic &a, const Dyadic &b)
    {
        return a.to_rational() <=> b.to_rational();
    }

private:
    mpz_class mantissa_{0};
    unsigned exponent_{0};
};

struct DyadicInterval
{
    Dyadic lo;
    Dyadic hi;

    DyadicInterval(Dyadic lo_, Dyadic hi_);

    [[nodiscard]] bool contains(const ExactRational &r) const;
    [[nodiscard]] ExactRational width() const;
    /// Distance from r to the interval, zero when contained.
    [[nodiscard]] ExactRational gap(const ExactRational &r) const;
};

/// A finite probability vector indexed by generator names, in insertion
/// order.  Generators listed with weight zero are kept in the support.
class WeightFunction
{
public:
    using Entry = std::pair<std::string, ExactRational>;

    WeightFunction() = default;
    /// Validates: distinct generators, each weight in [0,1], exact sum 1.
    explicit WeightFunction(std::vector<Entry> entries);

    static WeightFunction dirac(const std::string &gen);

    [[nodiscard]] const std::vector<Entry> &entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
    /// Zero for generators outside the support.
    [[nodiscard]] ExactRational operator[](std::string_view gen) const;
    [[nodiscard]] bool contains(std::string_view gen) const;

    /// {"gen": "p/q", ...} in support order.
    [[nodiscard]] std::string to_json() const;
    static WeightFunction from_json(std::string_view text);

    /// Equality up to zero-weight generators.
    friend bool operator==(const WeightFunction &a, const WeightFunction &b);

private:
    std::vector<Entry> entries_;
};

std::ostream &operator<<(std::ostream &os, const WeightFunction &w);

/// j |-> sum_i lambda_i * rows_i(j).  Rows pair with lambda's support in
/// order; the result's support is the union of the rows' supports in order
/// of first appearance.
WeightFunction weight_combine(const WeightFunction &lambda, std::span<const WeightFunction> rows);

} // namespace midpoint
