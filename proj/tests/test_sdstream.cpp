// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#include "midpoint/sdstream.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <thread>

using namespace midpoint;
using oracle::q;
using oracle::two_pow_neg;

namespace
{

DigitStream from(long p, long d = 1)
{
    return from_rational(ExactRational(p, d));
}

// Value within 2^-n of r, judged from n digits by the independent oracle.
bool near(const DigitStream &s, const mpq_class &r, unsigned n = 60)
{
    return oracle::within(s, r, n);
}

StreamSequence list_then(std::vector<DigitStream> items, DigitStream tail)
{
    return [items = std::move(items), tail](std::size_t i) { return i < items.size() ? items[i] : tail; };
}

} // namespace

TEST_CASE("from_rational canonical digits")
{
    CHECK(print_digits(from(1, 3), 6) == "0+0+0+");
    CHECK(print_digits(from(0), 4) == "0000");
    CHECK(print_digits(from(1), 3) == "+++");
    CHECK(print_digits(from(-1), 3) == "---");
    // r = -1/2 is not below -1/2, so the first digit is 0 and r becomes -1.
    CHECK(print_digits(from(-1, 2), 4) == "0---");
    CHECK_THROWS_AS(from(3, 2), DomainError);
    CHECK_THROWS_AS(from(-5, 4), DomainError);
}

TEST_CASE("approx_value examples")
{
    const auto z = approx_value(from(0), Precision(4));
    CHECK(z.contains(0));
    CHECK(z.width() <= ExactRational(1, 8));
    const auto third = approx_value(from(1, 3), Precision(4));
    CHECK(third.contains(ExactRational(1, 3)));
    CHECK(third.width() <= ExactRational(1, 8));
    CHECK(approx_value(from(1), Precision(2)).hi.to_rational() == ExactRational(1));
}

TEST_CASE("enclosure soundness on random rationals and random streams")
{
    std::mt19937_64 rng(3);
    for (int k = 0; k < 300; ++k) {
        const auto r = oracle::random_rational(rng, 1000);
        const auto s = from_rational(oracle::er(r));
        for (unsigned n : {1U, 7U, 33U, 64U}) {
            const auto e = approx_value(s, Precision(n));
            CHECK(e.contains(oracle::er(r)));
            CHECK(oracle::of(e.width()) <= two_pow_neg(n - 1));
            CHECK(oracle::of(partial_sum(s, n).to_rational()) == oracle::prefix_value(s, n));
        }
    }
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto s = oracle::random_stream(seed);
        const auto e = approx_value(s, Precision(20));
        // Any completion of the first 20 digits stays inside the enclosure.
        const auto p = oracle::prefix_value(s, 20);
        CHECK(e.contains(oracle::er(p + two_pow_neg(20))));
        CHECK(e.contains(oracle::er(p - two_pow_neg(20))) == (p - two_pow_neg(20) >= -1));
    }
}

TEST_CASE("mid examples and rational oracle")
{
    CHECK(near(mid(from(1), from(-1)), 0));
    CHECK(near(mid(from(1, 3), from(1, 3)), q(1, 3)));
    CHECK(near(mid(from(1, 3), from(1, 2)), q(5, 12)));
    std::mt19937_64 rng(5);
    for (int k = 0; k < 300; ++k) {
        const auto a = oracle::random_rational(rng);
        const auto b = oracle::random_rational(rng);
        CHECK(near(mid(from_rational(oracle::er(a)), from_rational(oracle::er(b))), (a + b) / 2, 64));
    }
}

TEST_CASE("midpoint axioms on random streams at precision 60")
{
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto x = oracle::random_stream(4 * seed);
        const auto y = oracle::random_stream(4 * seed + 1);
        const auto z = oracle::random_stream(4 * seed + 2);
        const auto w = oracle::random_stream(4 * seed + 3);
        const mpq_class tol = two_pow_neg(58);
        auto v = [](const DigitStream &s) { return oracle::prefix_value(s, 60); };
        CHECK(abs(v(mid(x, y)) - v(mid(y, x))) <= tol);
        CHECK(abs(v(mid(x, x)) - v(x)) <= tol);
        CHECK(abs(v(mid(mid(x, y), mid(z, w))) - v(mid(mid(x, z), mid(y, w)))) <= tol);
        CHECK(abs(v(mid(x, y)) - (v(x) + v(y)) / 2) <= tol);
    }
}

TEST_CASE("bigmid examples")
{
    CHECK(near(bigmid([](std::size_t) { return from(1); }), 1));
    CHECK(near(bigmid(list_then({from(1), from(-1)}, from(0))), q(1, 4)));
    const auto x = from(1, 3);
    const auto y = from(-3, 5);
    CHECK(near(bigmid(list_then({x}, y)), (q(1, 3) + q(-3, 5)) / 2));
}

TEST_CASE("bigmid matches the weighted series on periodic rational sequences")
{
    std::mt19937_64 rng(17);
    for (int k = 0; k < 60; ++k) {
        const std::size_t pre = rng() % 3;
        const std::size_t cyc = 1 + rng() % 3;
        std::vector<mpq_class> vals;
        std::vector<DigitStream> pts;
        for (std::size_t i = 0; i < pre + cyc; ++i) {
            vals.push_back(oracle::random_rational(rng));
            pts.push_back(from_rational(oracle::er(vals.back())));
        }
        // Closed form: prefix terms, then the cycle scaled by 1 / (1 - 2^-cyc).
        mpq_class expect = 0;
        for (std::size_t i = 0; i < pre; ++i) {
            expect += two_pow_neg(static_cast<unsigned>(i + 1)) * vals[i];
        }
        mpq_class cycle_sum = 0;
        for (std::size_t j = 0; j < cyc; ++j) {
            cycle_sum += two_pow_neg(static_cast<unsigned>(pre + j + 1)) * vals[pre + j];
        }
        expect += cycle_sum / (1 - two_pow_neg(static_cast<unsigned>(cyc)));
        const StreamSequence seq = [pts, pre, cyc](std::size_t i) {
            return i < pre ? pts[i] : pts[pre + (i - pre) % cyc];
        };
        const auto m = bigmid(seq);
        CHECK(near(m, expect, 60));
        // Unfolding.
        const auto unfolded = mid(seq(0), bigmid([seq](std::size_t i) { return seq(i + 1); }));
        CHECK(abs(oracle::prefix_value(m, 60) - oracle::prefix_value(unfolded, 60)) <= two_pow_neg(58));
    }
}

TEST_CASE("canonicity at finite depth")
{
    std::mt19937_64 rng(23);
    for (int k = 0; k < 20; ++k) {
        std::vector<mpq_class> vals;
        std::vector<DigitStream> pts;
        for (int i = 0; i < 45; ++i) {
            vals.push_back(oracle::random_rational(rng));
            pts.push_back(from_rational(oracle::er(vals.back())));
        }
        const DigitStream tail = from_rational(oracle::er(oracle::random_rational(rng)));
        const auto m = bigmid(list_then(pts, tail));
        for (unsigned n : {10U, 25U, 40U}) {
            // y_n arbitrary, y_i = mid(x_i, y_{i+1}).
            DigitStream y = from_rational(oracle::er(oracle::random_rational(rng)));
            for (unsigned i = n; i-- > 0;) {
                y = mid(pts[i], y);
            }
            CHECK(abs(oracle::prefix_value(y, 64) - oracle::prefix_value(m, 64)) <= two_pow_neg(n - 1) + two_pow_neg(62));
        }
    }
}

TEST_CASE("m_n")
{
    const std::vector<DigitStream> one{from(1, 3)};
    CHECK(print_digits(m_n(one), 10) == print_digits(from(1, 3), 10));
    const std::vector<DigitStream> ones{from(1), from(1), from(1)};
    CHECK(near(m_n(ones), 1));
    const std::vector<DigitStream> xs{from(1), from(-1), from(0)};
    CHECK(near(m_n(xs), q(1, 4)));
    CHECK_THROWS_AS(m_n(std::span<const DigitStream>{}), DomainError);
}

TEST_CASE("negation laws")
{
    CHECK(print_digits(neg(from(0)), 8) == "00000000");
    CHECK(near(neg(from(1)), -1));
    CHECK(near(neg(from(-1)), 1));
    CHECK(near(neg(from(1, 3)), q(-1, 3)));
    std::mt19937_64 rng(29);
    for (int k = 0; k < 200; ++k) {
        const auto a = oracle::random_rational(rng);
        const auto b = oracle::random_rational(rng);
        const auto x = from_rational(oracle::er(a));
        const auto y = from_rational(oracle::er(b));
        CHECK(print_digits(neg(neg(x)), 40) == print_digits(x, 40));
        CHECK(near(neg(mid(x, y)), -(a + b) / 2, 62));
        CHECK(near(mid(neg(x), neg(y)), -(a + b) / 2, 62));
        CHECK(near(mid(x, neg(x)), 0, 62));
    }
}

TEST_CASE("truncated operations against confine")
{
    CHECK(near(tadd(from(1), from(1)), 1));
    CHECK(near(tadd(from(1, 3), from(0)), q(1, 3)));
    CHECK(near(tdouble(from(1, 3)), q(2, 3)));
    CHECK(near(tdouble(from(3, 4)), 1));
    CHECK(near(tsub(from(-1), from(1)), -1));
    std::mt19937_64 rng(31);
    for (int k = 0; k < 300; ++k) {
        const auto a = oracle::random_rational(rng);
        const auto b = oracle::random_rational(rng);
        const auto x = from_rational(oracle::er(a));
        const auto y = from_rational(oracle::er(b));
        CHECK(near(tadd(x, y), oracle::confine(a + b), 52));
        CHECK(near(tsub(x, y), oracle::confine(a - b), 52));
        CHECK(near(tdouble(x), oracle::confine(2 * a), 52));
    }
}

TEST_CASE("multiplication")
{
    CHECK(near(mul(from(1, 3), from(1, 2)), q(1, 6)));
    CHECK(approx_value(mul(from(1, 3), from(1, 2)), Precision(50)).contains(ExactRational(1, 6)));
    std::mt19937_64 rng(37);
    for (int k = 0; k < 150; ++k) {
        const auto a = oracle::random_rational(rng);
        const auto b = oracle::random_rational(rng);
        const auto x = from_rational(oracle::er(a));
        const auto y = from_rational(oracle::er(b));
        CHECK(near(mul(x, from(1)), a, 56));
        CHECK(near(mul(x, from(-1)), -a, 56));
        CHECK(near(mul(x, from(0)), 0, 56));
        CHECK(near(mul(x, y), a * b, 56));
    }
}

TEST_CASE("binary convex combination")
{
    const auto x0 = from(-1, 5);
    const auto x1 = from(3, 7);
    CHECK(near(cc(from(-1), x0, x1), q(-1, 5)));
    CHECK(near(cc(from(1), x0, x1), q(3, 7)));
    CHECK(near(cc(from(0), x0, x1), (q(-1, 5) + q(3, 7)) / 2));
    CHECK(near(cc(from(1, 2), from(0), from(1)), q(3, 4)));
    std::mt19937_64 rng(41);
    for (int k = 0; k < 100; ++k) {
        const auto l = oracle::random_rational(rng);
        const auto a = oracle::random_rational(rng);
        const auto b = oracle::random_rational(rng);
        const auto s = cc(from_rational(oracle::er(l)), from_rational(oracle::er(a)), from_rational(oracle::er(b)));
        CHECK(near(s, a + (l + 1) / 2 * (b - a), 56));
    }
}

TEST_CASE("limit")
{
    const auto x = from(-2, 7);
    CHECK(near(limit([x](std::size_t) { return x; }), q(-2, 7), 50));
    CHECK(near(limit([](std::size_t i) {
                   return from_rational(ExactRational(1) - ExactRational::pow2(static_cast<long>(i) + 1));
               }),
               1, 50));
    // Partial binary sums of 1/3 = 0.010101..., truncated to 2i bits.
    const auto third = limit([](std::size_t i) {
        ExactRational acc;
        for (std::size_t b = 1; b < 2 * i; b += 2) {
            acc += ExactRational::pow2(static_cast<long>(b) + 1);
        }
        return from_rational(acc);
    });
    CHECK(near(third, q(1, 3), 45));
}

TEST_CASE("digit text")
{
    const auto s = parse_digits("+-");
    CHECK(s[0] == 1);
    CHECK(s[1] == -1);
    CHECK(s[2] == 0);
    CHECK(near(s, q(1, 4)));
    CHECK(print_digits(parse_digits(""), 3) == "000");
    CHECK(print_digits(parse_digits("+−0"), 3) == "+-0");
    CHECK(print_digits(parse_digits("+-0"), 3, MinusStyle::unicode) == "+−0");
    for (const std::string t : {"", "+", "-0+", "000-+-+"}) {
        CHECK(print_digits(parse_digits(t), t.size()) == t);
    }
    try {
        (void)parse_digits("+0x");
        FAIL("expected a parse error");
    } catch (const ParseError &e) {
        CHECK(e.column() == 3);
    }
}

TEST_CASE("comparison at a precision")
{
    CHECK(compare(from(1, 3), from(1, 2), Precision(10)) == Comparison::less);
    CHECK(compare(from(1, 2), from(1, 3), Precision(10)) == Comparison::greater);
    CHECK(compare(from(1, 3), parse_digits("+-+-+-+-+-+-+-+-+-+-"), Precision(10)) == Comparison::indistinguishable);
}

TEST_CASE("bounded lookahead")
{
    for (unsigned n : {1U, 5U, 40U, 200U}) {
        {
            oracle::CountingStream a(oracle::random_stream(1));
            oracle::CountingStream b(oracle::random_stream(2));
            (void)print_digits(mid(a.stream, b.stream), n);
            CHECK(a.highest->load() <= static_cast<long>(n));
            CHECK(b.highest->load() <= static_cast<long>(n));
        }
        {
            oracle::CountingStream a(oracle::random_stream(3));
            oracle::CountingStream b(oracle::random_stream(4));
            (void)print_digits(tadd(a.stream, b.stream), n);
            CHECK(a.highest->load() <= static_cast<long>(n) + 1);
            CHECK(b.highest->load() <= static_cast<long>(n) + 1);
        }
        {
            oracle::CountingStream a(oracle::random_stream(5));
            (void)print_digits(tdouble(a.stream), n);
            CHECK(a.highest->load() <= static_cast<long>(n) + 1);
        }
        {
            std::vector<oracle::CountingStream> elems;
            for (unsigned k = 0; k < 2 * n + 20; ++k) {
                elems.emplace_back(oracle::random_stream(100 + k));
            }
            (void)print_digits(bigmid([&](std::size_t k) { return elems.at(k).stream; }), n);
            long used = 0;
            for (std::size_t k = 0; k < elems.size(); ++k) {
                const long h = elems[k].highest->load();
                if (h >= 0) {
                    used = static_cast<long>(k) + 1;
                }
                CHECK(h + 1 <= 2 * static_cast<long>(n) + 10);
            }
            CHECK(used <= static_cast<long>(n) + 2);
        }
        {
            oracle::CountingStream a(oracle::random_stream(6));
            oracle::CountingStream b(oracle::random_stream(7));
            (void)print_digits(mul(a.stream, b.stream), n);
            CHECK(a.highest->load() + 1 <= 2 * static_cast<long>(n) + 10);
            CHECK(b.highest->load() + 1 <= static_cast<long>(n) + 2);
        }
    }
}

TEST_CASE("concurrent digit queries agree")
{
    const auto x = oracle::random_stream(99);
    const auto y = oracle::random_stream(98);
    const auto shared = mul(mid(x, y), tadd(x, neg(y)));
    const std::string reference = print_digits(mul(mid(x, y), tadd(x, neg(y))), 300);
    std::vector<std::string> seen(8);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < seen.size(); ++t) {
        pool.emplace_back([&, t] {
            // Interleave different prefixes to force overlapping computation.
            (void)print_digits(shared, 50 + 30 * t);
            seen[t] = print_digits(shared, 300);
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    for (const auto &s : seen) {
        CHECK(s == reference);
    }
}

TEST_CASE("approximation property on random rational sequences")
{
    std::mt19937_64 rng(43);
    for (int k = 0; k < 40; ++k) {
        const unsigned n = 4 + static_cast<unsigned>(rng() % 20);
        // Agreeing prefixes up to a perturbation of 2^(1-n) in the weighted sum,
        // then unrelated constant tails.
        std::vector<mpq_class> xs;
        std::vector<mpq_class> ys;
        mpq_class gap = 0;
        for (unsigned i = 0; i < n; ++i) {
            xs.push_back(oracle::random_rational(rng));
            ys.push_back(xs.back());
        }
        ys[n - 1] = oracle::confine(ys[n - 1] + (rng() % 2 == 0 ? 1 : -1));
        for (unsigned i = 0; i < n; ++i) {
            gap += two_pow_neg(i + 1) * (xs[i] - ys[i]);
        }
        REQUIRE(abs(gap) <= two_pow_neg(n - 1));
        const auto xt = from_rational(oracle::er(oracle::random_rational(rng)));
        const auto yt = from_rational(oracle::er(oracle::random_rational(rng)));
        std::vector<DigitStream> xp;
        std::vector<DigitStream> yp;
        for (unsigned i = 0; i < n; ++i) {
            xp.push_back(from_rational(oracle::er(xs[i])));
            yp.push_back(from_rational(oracle::er(ys[i])));
        }
        const auto mx = bigmid(list_then(xp, xt));
        const auto my = bigmid(list_then(yp, yt));
        const mpq_class measured = abs(oracle::prefix_value(mx, 60) - oracle::prefix_value(my, 60)) + two_pow_neg(59);
        CHECK(measured <= two_pow_neg(n - 3));
    }
}

TEST_CASE("cancellation at the value level")
{
    std::mt19937_64 rng(47);
    for (int k = 0; k < 300; ++k) {
        const auto a = oracle::random_rational(rng);
        const auto b = oracle::random_rational(rng);
        const auto c = oracle::random_rational(rng);
        // Exact: (a+c)/2 = (b+c)/2 iff a = b.
        CHECK(((a + c) / 2 == (b + c) / 2) == (a == b));
        const auto x = from_rational(oracle::er(a));
        const auto y = from_rational(oracle::er(b));
        const auto z = from_rational(oracle::er(c));
        // The stream midpoints track the oracle, so distinct inputs stay apart.
        const mpq_class dm = abs(oracle::prefix_value(mid(x, z), 62) - oracle::prefix_value(mid(y, z), 62));
        CHECK(abs(dm - abs(a - b) / 2) <= two_pow_neg(61));
    }
}
