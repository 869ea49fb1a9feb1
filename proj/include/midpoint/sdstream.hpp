// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#pragma once

#include "midpoint/exact.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace midpoint
{

enum class Digit : std::int8_t { minus = -1, zero = 0, plus = 1 };

constexpr int to_int(Digit d) noexcept
{
    return static_cast<int>(d);
}

constexpr Digit digit_from_int(int v) noexcept
{
    return v > 0 ? Digit::plus : (v < 0 ? Digit::minus : Digit::zero);
}

/// Number of digits n; an enclosure at precision n has radius 2^-n.
class Precision
{
public:
    explicit Precision(unsigned digits);
    [[nodiscard]] unsigned digits() const noexcept { return digits_; }

private:
    unsigned digits_;
};

namespace detail
{
struct StreamState;
}

/// A point of [-1,1] given by a lazily produced signed-digit expansion
///
///     val(s) = sum_{i >= 0} 2^-(i+1) * s_i,   s_i in {-1, 0, +1}.
///
/// Copies share one memo table.  Digits are produced sequentially by a
/// Producer and cached; concurrent queries are serialized per stream and
/// always observe the same digits.
class DigitStream
{
public:
    /// Emits digit 0, 1, 2, ... in order, one per call.
    class Producer
    {
    public:
        virtual ~Producer() = default;
        virtual Digit next() = 0;
    };

    /// The zero stream.
    DigitStream();

    static DigitStream from_producer(std::unique_ptr<Producer> producer);
    /// `f` is called once per index, in increasing order.
    static DigitStream from_function(std::function<Digit(std::size_t)> f);
    static DigitStream constant(Digit d);

    [[nodiscard]] Digit at(std::size_t i) const;
    [[nodiscard]] int operator[](std::size_t i) const { return to_int(at(i)); }
    /// How many digits have been computed so far.
    [[nodiscard]] std::size_t computed() const;

    /// Identity of the shared memo table.
    [[nodiscard]] const void *id() const noexcept { return state_.get(); }

private:
    explicit DigitStream(std::shared_ptr<detail::StreamState> state);
    std::shared_ptr<detail::StreamState> state_;
};

/// Element i of an infinite sequence of streams.  Must be deterministic.
using StreamSequence = std::function<DigitStream(std::size_t)>;

/// Sequence prefix[0], ..., prefix[k-1], cycle[0], ..., cycle[m-1], cycle[0], ...
StreamSequence eventually_periodic(std::vector<DigitStream> prefix, std::vector<DigitStream> cycle);

/// Wraps `seq` so each element is built once and shared between callers.
StreamSequence memoize(StreamSequence seq);

/// Canonical expansion: with remainder r emit +1 if r > 1/2, -1 if r < -1/2,
/// else 0, then r <- 2r - d.  Throws DomainError outside [-1,1].
DigitStream from_rational(const ExactRational &r);

/// sum_{i<n} 2^-(i+1) s_i.
Dyadic partial_sum(const DigitStream &s, unsigned n);

/// [t_n - 2^-n, t_n + 2^-n] clipped to [-1,1], t_n = partial_sum(s, n).
DyadicInterval approx_value(const DigitStream &s, Precision p);

enum class Comparison { less, greater, indistinguishable };

/// Never decides equality: overlapping enclosures give `indistinguishable`.
Comparison compare(const DigitStream &x, const DigitStream &y, Precision p);

// Lookahead contracts (digit indices consulted to produce output digit i):
//   neg      : input i
//   mid      : inputs 0..i+1 of both arguments
//   tadd     : inputs 0..i+2 of both arguments
//   tdouble  : input 0..i+2
//   bigmid   : elements 0..i+2, element k read up to index i + 2 - k + L(i)
//              with L(i) = ceil(log2(i+4)) + 2
// The last bound is below 2i + 10 for all i.

DigitStream neg(const DigitStream &x);
/// (x + y) / 2.
DigitStream mid(const DigitStream &x, const DigitStream &y);
/// sum_i 2^-(i+1) * xs(i).
DigitStream bigmid(StreamSequence xs);
/// Confine(x + y).
DigitStream tadd(const DigitStream &x, const DigitStream &y);
/// Confine(x - y).
DigitStream tsub(const DigitStream &x, const DigitStream &y);
/// Confine(2x).
DigitStream tdouble(const DigitStream &x);
/// x * y, as bigmid over y's digits with -1 -> -x, 0 -> 0, +1 -> x.
DigitStream mul(const DigitStream &x, const DigitStream &y);
/// x0 + (lambda + 1)/2 * (x1 - x0).
DigitStream cc(const DigitStream &lambda, const DigitStream &x0, const DigitStream &x1);

/// Limit of a sequence with |a(i+1) - a(i)| <= 2^-(i+1), computed as
///     2 * bigmid(a0, 2(a1 - a0), 4(a2 - a1), ...).
/// The modulus is not checked; violating it still yields a point of [-1,1].
DigitStream limit(StreamSequence alpha);

/// Right-nested fold: m_0(x) = x, m_n(x0..xn) = mid(x0, m_{n-1}(x1..xn)).
/// Throws DomainError for an empty list.
DigitStream m_n(std::span<const DigitStream> xs);

/// Text over '+', '0', '-' (ASCII) or U+2212; digits after the text are 0.
DigitStream parse_digits(std::string_view text);

enum class MinusStyle { ascii, unicode };

std::string print_digits(const DigitStream &s, std::size_t n, MinusStyle style = MinusStyle::ascii);

} // namespace midpoint
