// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#include "midpoint/sdstream.hpp"

#include <algorithm>
#include <bit>
#include <mutex>

namespace midpoint
{

Precision::Precision(unsigned digits) : digits_(digits)
{
    if (digits == 0) {
        throw DomainError("precision must be at least one digit");
    }
}

namespace detail
{

struct StreamState
{
    std::mutex lock;
    std::vector<Digit> digits;
    std::unique_ptr<DigitStream::Producer> producer;
    bool is_constant = false;
    Digit constant = Digit::zero;
};

} // namespace detail

namespace
{

class FunctionProducer final : public DigitStream::Producer
{
public:
    explicit FunctionProducer(std::function<Digit(std::size_t)> f) : f_(std::move(f)) {}
    Digit next() override { return f_(index_++); }

private:
    std::function<Digit(std::size_t)> f_;
    std::size_t index_ = 0;
};

class RationalProducer final : public DigitStream::Producer
{
public:
    explicit RationalProducer(ExactRational r) : rem_(std::move(r)) {}

    Digit next() override
    {
        static const ExactRational half(1, 2);
        static const ExactRational neg_half(-1, 2);
        int d = 0;
        if (half < rem_) {
            d = 1;
        } else if (rem_ < neg_half) {
            d = -1;
        }
        rem_ = rem_ * ExactRational(2) - ExactRational(d);
        return digit_from_int(d);
    }

private:
    ExactRational rem_;
};

class NegProducer final : public DigitStream::Producer
{
public:
    explicit NegProducer(DigitStream x) : x_(std::move(x)) {}
    Digit next() override { return digit_from_int(-x_[index_++]); }

private:
    DigitStream x_;
    std::size_t index_ = 0;
};

// Turns a sequence of wide digits a_j in [-kWide, kWide] with value
// V = sum_j 2^-(j+1) a_j into the signed digits of Confine(V).
//
// With P_n the value of the digits emitted so far, the invariant is
//     Q_n = 2^n (Confine(V) - P_n) in [-1, 1],
// and Q_n = clamp(R_n, lo_n, hi_n) for R_n = 2^n (V - P_n) = carry_n + tail,
// hi_n = 2^n (1 - P_n), lo_n = 2^n (-1 - P_n).  Three wide digits of
// lookahead pin R_n to an interval of radius kWide / 8 = 1/4, enough to
// choose the next digit.  |carry| stays below 4 until the output
// saturates at +-1, after which no more input is read.
class ClampedNormalizer : public DigitStream::Producer
{
public:
    Digit next() final
    {
        if (saturated_ != 0) {
            return digit_from_int(saturated_);
        }
        const std::int64_t est = kScale * carry_ + 4 * wide(index_) + 2 * wide(index_ + 1) + wide(index_ + 2);
        if (hi_ == 1 && est - kWide >= kScale) {
            saturated_ = 1;
            return Digit::plus;
        }
        if (lo_ == -1 && est + kWide <= -kScale) {
            saturated_ = -1;
            return Digit::minus;
        }
        const std::int64_t ql = std::clamp(est - kWide, lo_ * kScale, hi_ * kScale);
        const std::int64_t qh = std::clamp(est + kWide, lo_ * kScale, hi_ * kScale);
        const int z = ql >= 0 ? 1 : (qh <= 0 ? -1 : 0);
        carry_ = 2 * carry_ + wide(index_) - z;
        lo_ = std::max<std::int64_t>(2 * lo_ - z, -kCap);
        hi_ = std::min<std::int64_t>(2 * hi_ - z, kCap);
        ++index_;
        return digit_from_int(z);
    }

protected:
    virtual int wide(std::size_t j) = 0;

private:
    static constexpr std::int64_t kWide = 2;
    static constexpr std::int64_t kScale = 8;
    // Once |lo| or |hi| reaches 2 the clamp on that side is inactive.
    static constexpr std::int64_t kCap = 4;

    std::size_t index_ = 0;
    std::int64_t carry_ = 0;
    std::int64_t lo_ = -1;
    std::int64_t hi_ = 1;
    int saturated_ = 0;
};

class MidProducer final : public ClampedNormalizer
{
public:
    MidProducer(DigitStream x, DigitStream y) : x_(std::move(x)), y_(std::move(y)) {}

protected:
    int wide(std::size_t j) override { return j == 0 ? 0 : x_[j - 1] + y_[j - 1]; }

private:
    DigitStream x_, y_;
};

class AddProducer final : public ClampedNormalizer
{
public:
    AddProducer(DigitStream x, DigitStream y) : x_(std::move(x)), y_(std::move(y)) {}

protected:
    int wide(std::size_t j) override { return x_[j] + y_[j]; }

private:
    DigitStream x_, y_;
};

class DoubleProducer final : public ClampedNormalizer
{
public:
    explicit DoubleProducer(DigitStream x) : x_(std::move(x)) {}

protected:
    int wide(std::size_t j) override { return 2 * x_[j]; }

private:
    DigitStream x_;
};

unsigned ceil_log2(std::uint64_t v)
{
    return v <= 1 ? 0U : static_cast<unsigned>(std::bit_width(v - 1));
}

// Infinitary midpoint sum_k 2^-(k+1) x_k = sum_{k,j} 2^-(k+j+2) x_kj.
//
// Before emitting digit n the producer has read the region
//     k <= N = n + kAhead,   j < D_k = N - k + L,   L = ceil(log2(N+2)) + 2.
// The unread mass is at most sum_{k<=N} 2^-(k+1) 2^-D_k + 2^-(N+1), which
// scaled by 2^n is ((N+1) + 2^L) / 2^F with F = kAhead + L + 1, i.e. at
// most 5/32.  `acc_` holds 2^(n+F) (known - emitted), an integer bounded
// by a few multiples of 2^F.
class BigMidProducer final : public DigitStream::Producer
{
public:
    explicit BigMidProducer(StreamSequence xs) : xs_(std::move(xs))
    {
        levels_ = region_log(kAhead);
        frac_ = kAhead + levels_ + 1;
    }

    Digit next() override
    {
        read_region();
        const std::int64_t horizon = static_cast<std::int64_t>(n_ + kAhead);
        const std::int64_t slack = (horizon + 1) + (std::int64_t{1} << levels_);
        const int z = acc_ - slack >= 0 ? 1 : (acc_ + slack <= 0 ? -1 : 0);

        const unsigned next_levels = region_log(n_ + 1 + kAhead);
        const unsigned next_frac = kAhead + next_levels + 1;
        acc_ = acc_ * (std::int64_t{1} << (1 + next_frac - frac_)) - z * (std::int64_t{1} << next_frac);
        levels_ = next_levels;
        frac_ = next_frac;
        ++n_;
        return digit_from_int(z);
    }

private:
    static constexpr std::size_t kAhead = 2;

    static unsigned region_log(std::size_t horizon) { return ceil_log2(horizon + 2) + 2; }

    void read_region()
    {
        const std::size_t horizon = n_ + kAhead;
        while (elems_.size() <= horizon) {
            elems_.push_back(xs_(elems_.size()));
            read_.push_back(0);
        }
        for (std::size_t k = 0; k <= horizon; ++k) {
            const std::size_t depth = horizon - k + levels_;
            for (std::size_t j = read_[k]; j < depth; ++j) {
                const int d = elems_[k][j];
                if (d != 0) {
                    // weight 2^(n+F-k-j-2), exponent >= 0 by choice of F
                    const auto e = static_cast<unsigned>(n_ + frac_ - k - j - 2);
                    acc_ += d * (std::int64_t{1} << e);
                }
            }
            read_[k] = std::max(read_[k], depth);
        }
    }

    StreamSequence xs_;
    std::vector<DigitStream> elems_;
    std::vector<std::size_t> read_;
    std::size_t n_ = 0;
    unsigned levels_ = 0;
    unsigned frac_ = 0;
    std::int64_t acc_ = 0;
};

} // namespace

DigitStream::DigitStream() : DigitStream(constant(Digit::zero)) {}

DigitStream::DigitStream(std::shared_ptr<detail::StreamState> state) : state_(std::move(state)) {}

DigitStream DigitStream::from_producer(std::unique_ptr<Producer> producer)
{
    auto st = std::make_shared<detail::StreamState>();
    st->producer = std::move(producer);
    return DigitStream(std::move(st));
}

DigitStream DigitStream::from_function(std::function<Digit(std::size_t)> f)
{
    return from_producer(std::make_unique<FunctionProducer>(std::move(f)));
}

DigitStream DigitStream::constant(Digit d)
{
    auto st = std::make_shared<detail::StreamState>();
    st->is_constant = true;
    st->constant = d;
    return DigitStream(std::move(st));
}

Digit DigitStream::at(std::size_t i) const
{
    auto &st = *state_;
    if (st.is_constant) {
        return st.constant;
    }
    std::lock_guard guard(st.lock);
    while (st.digits.size() <= i) {
        st.digits.push_back(st.producer->next());
    }
    return st.digits[i];
}

std::size_t DigitStream::computed() const
{
    auto &st = *state_;
    if (st.is_constant) {
        return 0;
    }
    std::lock_guard guard(st.lock);
    return st.digits.size();
}

StreamSequence eventually_periodic(std::vector<DigitStream> prefix, std::vector<DigitStream> cycle)
{
    if (cycle.empty()) {
        throw DomainError("eventually periodic sequence needs a non-empty cycle");
    }
    return [prefix = std::move(prefix), cycle = std::move(cycle)](std::size_t i) {
        if (i < prefix.size()) {
            return prefix[i];
        }
        return cycle[(i - prefix.size()) % cycle.size()];
    };
}

StreamSequence memoize(StreamSequence seq)
{
    struct Cache
    {
        std::mutex lock;
        std::vector<DigitStream> items;
        StreamSequence source;
    };
    auto cache = std::make_shared<Cache>();
    cache->source = std::move(seq);
    return [cache](std::size_t i) {
        std::lock_guard guard(cache->lock);
        while (cache->items.size() <= i) {
            cache->items.push_back(cache->source(cache->items.size()));
        }
        return cache->items[i];
    };
}

DigitStream from_rational(const ExactRational &r)
{
    if (r < ExactRational(-1) || ExactRational(1) < r) {
        throw DomainError("rational " + r.str() + " outside [-1,1]");
    }
    if (r == ExactRational(1)) {
        return DigitStream::constant(Digit::plus);
    }
    if (r == ExactRational(-1)) {
        return DigitStream::constant(Digit::minus);
    }
    if (r.is_zero()) {
        return DigitStream::constant(Digit::zero);
    }
    return DigitStream::from_producer(std::make_unique<RationalProducer>(r));
}

Dyadic partial_sum(const DigitStream &s, unsigned n)
{
    mpz_class acc(0);
    for (unsigned i = 0; i < n; ++i) {
        acc *= 2;
        acc += s[i];
    }
    return {acc, n};
}

DyadicInterval approx_value(const DigitStream &s, Precision p)
{
    const unsigned n = p.digits();
    // Unnormalized mantissa m of t_n = m / 2^n.
    mpz_class m(0);
    for (unsigned i = 0; i < n; ++i) {
        m = 2 * m + s[i];
    }
    mpz_class one(1);
    mpz_mul_2exp(one.get_mpz_t(), one.get_mpz_t(), n);
    mpz_class lo = m - 1;
    mpz_class hi = m + 1;
    if (lo < -one) {
        lo = -one;
    }
    if (hi > one) {
        hi = one;
    }
    return {Dyadic(lo, n), Dyadic(hi, n)};
}

Comparison compare(const DigitStream &x, const DigitStream &y, Precision p)
{
    const auto ex = approx_value(x, p);
    const auto ey = approx_value(y, p);
    if (ex.hi < ey.lo) {
        return Comparison::less;
    }
    if (ey.hi < ex.lo) {
        return Comparison::greater;
    }
    return Comparison::indistinguishable;
}

DigitStream neg(const DigitStream &x)
{
    return DigitStream::from_producer(std::make_unique<NegProducer>(x));
}

DigitStream mid(const DigitStream &x, const DigitStream &y)
{
    return DigitStream::from_producer(std::make_unique<MidProducer>(x, y));
}

DigitStream bigmid(StreamSequence xs)
{
    return DigitStream::from_producer(std::make_unique<BigMidProducer>(std::move(xs)));
}

DigitStream tadd(const DigitStream &x, const DigitStream &y)
{
    return DigitStream::from_producer(std::make_unique<AddProducer>(x, y));
}

DigitStream tsub(const DigitStream &x, const DigitStream &y)
{
    return tadd(x, neg(y));
}

DigitStream tdouble(const DigitStream &x)
{
    return DigitStream::from_producer(std::make_unique<DoubleProducer>(x));
}

DigitStream mul(const DigitStream &x, const DigitStream &y)
{
    const DigitStream minus_x = neg(x);
    const DigitStream zero;
    return bigmid([x, y, minus_x, zero](std::size_t i) {
        switch (y.at(i)) {
        case Digit::minus:
            return minus_x;
        case Digit::plus:
            return x;
        case Digit::zero:
            break;
        }
        return zero;
    });
}

DigitStream cc(const DigitStream &lambda, const DigitStream &x0, const DigitStream &x1)
{
    const DigitStream half = mid(x0, x1);
    return bigmid([lambda, x0, x1, half](std::size_t i) {
        switch (lambda.at(i)) {
        case Digit::minus:
            return x0;
        case Digit::plus:
            return x1;
        case Digit::zero:
            break;
        }
        return half;
    });
}

DigitStream limit(StreamSequence alpha)
{
    StreamSequence a = memoize(std::move(alpha));
    StreamSequence scaled_steps = [a](std::size_t i) {
        if (i == 0) {
            return a(0);
        }
        DigitStream d = tsub(a(i), a(i - 1));
        for (std::size_t k = 0; k < i; ++k) {
            d = tdouble(d);
        }
        return d;
    };
    return tdouble(bigmid(std::move(scaled_steps)));
}

DigitStream m_n(std::span<const DigitStream> xs)
{
    if (xs.empty()) {
        throw DomainError("m_n needs at least one argument");
    }
    DigitStream acc = xs.back();
    for (std::size_t i = xs.size() - 1; i-- > 0;) {
        acc = mid(xs[i], acc);
    }
    return acc;
}

DigitStream parse_digits(std::string_view text)
{
    std::vector<Digit> digits;
    std::size_t column = 1;
    for (std::size_t i = 0; i < text.size(); ++column) {
        const char c = text[i];
        if (c == '+') {
            digits.push_back(Digit::plus);
            ++i;
        } else if (c == '0') {
            digits.push_back(Digit::zero);
            ++i;
        } else if (c == '-') {
            digits.push_back(Digit::minus);
            ++i;
        } else if (text.substr(i, 3) == "\xE2\x88\x92") {
            digits.push_back(Digit::minus);
            i += 3;
        } else {
            throw ParseError(std::string("invalid digit character '") + c + "'", 1, column);
        }
    }
    return DigitStream::from_function([digits = std::move(digits)](std::size_t i) {
        return i < digits.size() ? digits[i] : Digit::zero;
    });
}

std::string print_digits(const DigitStream &s, std::size_t n, MinusStyle style)
{
    std::string out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        switch (s.at(i)) {
        case Digit::plus:
            out += '+';
            break;
        case Digit::zero:
            out += '0';
            break;
        case Digit::minus:
            out += style == MinusStyle::ascii ? "-" : "\xE2\x88\x92";
            break;
        }
    }
    return out;
}

} // namespace midpoint
