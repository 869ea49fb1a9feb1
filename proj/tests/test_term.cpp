// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#include "midpoint/bodies.hpp"
#include "midpoint/checks.hpp"
#include "midpoint/term.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <map>
#include <random>
#include <thread>

using namespace midpoint;
using oracle::q;
using oracle::two_pow_neg;

namespace
{

Term leaf(const char *g)
{
    return Term::leaf(g);
}

// Independent weight oracle: walks the finite description, summing the
// first `depth` elements of infinitary nodes explicitly and bounding the
// remainder by 2^-depth.  Returns exact partial weights.
void weight_walk(const Term &t, const mpq_class &scale, unsigned depth, std::map<std::string, mpq_class> &acc)
{
    switch (t.kind()) {
    case Term::Kind::leaf:
        acc[t.generator()] += scale;
        return;
    case Term::Kind::pair:
        weight_walk(t.left(), scale / 2, depth, acc);
        weight_walk(t.right(), scale / 2, depth, acc);
        return;
    case Term::Kind::omega:
        for (unsigned i = 0; i < depth; ++i) {
            weight_walk(t.seq().at(i), scale * two_pow_neg(i + 1), depth, acc);
        }
        return;
    }
}

std::map<std::string, mpq_class> series_weight(const Term &t, unsigned depth)
{
    std::map<std::string, mpq_class> acc;
    weight_walk(t, 1, depth, acc);
    return acc;
}

} // namespace

TEST_CASE("weight examples")
{
    CHECK(weight(leaf("a")) == WeightFunction::dirac("a"));
    CHECK(weight(Term::pair(leaf("a"), leaf("b"))) ==
          WeightFunction({{"a", ExactRational(1, 2)}, {"b", ExactRational(1, 2)}}));
    CHECK(weight(Term::omega({{}, {leaf("a"), leaf("b")}})) ==
          WeightFunction({{"a", ExactRational(2, 3)}, {"b", ExactRational(1, 3)}}));
    CHECK(weight(Term::omega({{leaf("a")}, {leaf("b")}})) ==
          WeightFunction({{"a", ExactRational(1, 2)}, {"b", ExactRational(1, 2)}}));
}

TEST_CASE("closed-form weight matches the truncated series")
{
    Rng rng(5);
    const std::vector<std::string> gens{"a", "b", "c", "d"};
    for (int k = 0; k < 200; ++k) {
        const Term t = random_term(rng, 2, gens);
        const WeightFunction w = weight(t);
        mpq_class total = 0;
        for (const auto &[g, v] : w.entries()) {
            total += oracle::of(v);
        }
        CHECK(total == 1);
        const unsigned depth = 14;
        const auto approx = series_weight(t, depth);
        // Each nesting level loses at most 2^-depth of mass.
        const mpq_class slack = two_pow_neg(depth) * (omega_depth(t) + 1);
        for (const auto &g : gens) {
            const mpq_class exact = oracle::of(w[g]);
            const mpq_class partial = approx.count(g) != 0 ? approx.at(g) : mpq_class(0);
            CHECK(partial <= exact);
            CHECK(exact - partial <= slack);
        }
    }
}

TEST_CASE("structure queries")
{
    const Term t = parse_term("(mid (seq periodic [b] [(mid a c)]) a)");
    CHECK(generators(t) == std::vector<std::string>{"b", "a", "c"});
    CHECK(omega_depth(t) == 1);
    CHECK_FALSE(is_finite(t));
    CHECK(is_finite(parse_term("(mid a (mid b c))")));
    CHECK(omega_depth(parse_term("(seq periodic [] [(seq periodic [] [a])])")) == 2);
}

TEST_CASE("parse and print")
{
    CHECK(parse_term("a").kind() == Term::Kind::leaf);
    const Term p = parse_term("(mid a b)");
    REQUIRE(p.kind() == Term::Kind::pair);
    CHECK(p.left().generator() == "a");
    CHECK(p.right().generator() == "b");
    const Term o = parse_term("(seq periodic [] [a b])");
    REQUIRE(o.kind() == Term::Kind::omega);
    CHECK(o.seq().prefix.empty());
    CHECK(o.seq().cycle.size() == 2);
    for (const char *text : {"a", "(mid a b)", "(seq periodic [] [a b])", "(seq periodic [x (mid y z)] [(mid z x)])",
                             "(mid λ (seq periodic [] [μ]))"}) {
        CHECK(print_term(parse_term(text)) == text);
    }
    CHECK(print_term(parse_term("  (mid\n a\t  b )  ")) == "(mid a b)");
    Rng rng(9);
    for (int k = 0; k < 100; ++k) {
        const Term t = random_term(rng, 2, {"a", "b", "c"});
        CHECK(print_term(parse_term(print_term(t))) == print_term(t));
    }
}

TEST_CASE("parse errors carry positions")
{
    auto where = [](const char *text) {
        try {
            (void)parse_term(text);
        } catch (const ParseError &e) {
            return std::make_pair(e.line(), e.column());
        }
        return std::make_pair(std::size_t{0}, std::size_t{0});
    };
    CHECK(where("(mid a)").first == 1);
    CHECK(where("(seq periodic [a] [])") != std::make_pair(std::size_t{0}, std::size_t{0}));
    CHECK(where("(foo a b)") == std::make_pair(std::size_t{1}, std::size_t{2}));
    CHECK(where("a b") == std::make_pair(std::size_t{1}, std::size_t{3}));
    CHECK(where("(mid a\n  (mid b") .first == 2);
    CHECK(where("(seq periodic [a] [b]") != std::make_pair(std::size_t{0}, std::size_t{0}));
    CHECK(where("") != std::make_pair(std::size_t{0}, std::size_t{0}));
}

TEST_CASE("substitution")
{
    const Term t = parse_term("(mid a (seq periodic [b] [a]))");
    Substitution id{{"a", leaf("a")}, {"b", leaf("b")}};
    CHECK(print_term(subst(id, t)) == print_term(t));
    Substitution s{{"a", Term::pair(leaf("b"), leaf("c"))}};
    CHECK(print_term(subst(s, leaf("a"))) == "(mid b c)");
    CHECK(weight(subst(s, Term::pair(leaf("a"), leaf("a")))) ==
          WeightFunction({{"b", ExactRational(1, 2)}, {"c", ExactRational(1, 2)}}));
    CHECK_THROWS_AS(subst(s, t), DomainError);
}

TEST_CASE("weight of a substitution is the convolution")
{
    Rng rng(13);
    const std::vector<std::string> gens{"a", "b", "c"};
    const std::vector<std::string> targets{"x", "y", "z"};
    for (int k = 0; k < 100; ++k) {
        const Term t = random_term(rng, 1, gens);
        Substitution sigma;
        for (const auto &g : gens) {
            sigma.emplace(g, random_term(rng, 1, targets));
        }
        const WeightFunction lhs = weight(subst(sigma, t));
        const WeightFunction wt = weight(t);
        for (const auto &j : targets) {
            mpq_class expect = 0;
            for (const auto &i : gens) {
                expect += oracle::of(wt[i]) * oracle::of(weight(sigma.at(i))[j]);
            }
            CHECK(oracle::of(lhs[j]) == expect);
        }
    }
}

TEST_CASE("substitution semantics in the interval body")
{
    Rng rng(17);
    const IntervalBody body;
    const ExactRational tol = ExactRational::pow2(30);
    const std::vector<std::string> gens{"a", "b"};
    const std::vector<std::string> targets{"x", "y", "z"};
    for (int k = 0; k < 40; ++k) {
        const Term t = random_term(rng, 1, gens);
        Substitution sigma;
        for (const auto &g : gens) {
            sigma.emplace(g, random_term(rng, 1, targets));
        }
        Assignment<IntervalBody> y;
        for (const auto &v : targets) {
            y.emplace(v, body.embed(body.sample(rng)));
        }
        Assignment<IntervalBody> composed;
        for (const auto &g : gens) {
            composed.emplace(g, eval(sigma.at(g), y, body, tol));
        }
        const auto lhs = eval(subst(sigma, t), y, body, tol);
        const auto rhs = eval(t, composed, body, tol);
        CHECK(body.distance(lhs, rhs) <= ExactRational(2) * tol + ExactRational::pow2(60));
    }
}

TEST_CASE("normal form levels")
{
    const NormalForm a = normalize(leaf("a"));
    for (std::size_t l = 0; l < 5; ++l) {
        CHECK(print_term(a.level(l)) == "a");
    }
    const NormalForm ab = normalize(parse_term("(mid a b)"));
    for (std::size_t l = 0; l < 5; ++l) {
        CHECK(print_term(ab.level(l)) == "(mid a b)");
    }
    REQUIRE(ab.source().has_value());
    CHECK(print_term(*ab.source()) == "(mid a b)");
    const Term cyc = parse_term("(seq periodic [] [a b])");
    const NormalForm n = normalize(cyc);
    for (std::size_t l = 0; l < 12; ++l) {
        CHECK(is_finite(n.level(l)));
    }
    for (std::size_t L : {1U, 4U, 10U, 16U}) {
        const auto tw = truncated_weight(n, L);
        CHECK(abs(oracle::of(tw.at("a")) - q(2, 3)) <= two_pow_neg(static_cast<unsigned>(L)));
        CHECK(abs(oracle::of(tw.at("b")) - q(1, 3)) <= two_pow_neg(static_cast<unsigned>(L)));
    }
}

TEST_CASE("normalization preserves weight on random terms")
{
    Rng rng(19);
    const std::vector<std::string> gens{"a", "b", "c"};
    for (int k = 0; k < 60; ++k) {
        const Term t = random_term(rng, 2, gens);
        const NormalForm nf = normalize(t);
        const WeightFunction w = weight(t);
        for (std::size_t L : {3U, 9U}) {
            const auto tw = truncated_weight(nf, L);
            for (const auto &g : gens) {
                const mpq_class got = tw.count(g) != 0 ? oracle::of(tw.at(g)) : mpq_class(0);
                CHECK(abs(got - oracle::of(w[g])) <= two_pow_neg(static_cast<unsigned>(L)));
            }
        }
    }
}

TEST_CASE("normal form queries from many threads agree")
{
    const Term t = parse_term("(seq periodic [(seq periodic [] [a b])] [(mid c (seq periodic [b] [a]))])");
    const NormalForm shared = normalize(t);
    const NormalForm fresh = normalize(t);
    std::vector<std::string> expect;
    for (std::size_t l = 0; l < 10; ++l) {
        expect.push_back(print_term(fresh.level(l)));
    }
    std::vector<std::thread> pool;
    std::vector<int> ok(6, 1);
    for (std::size_t th = 0; th < ok.size(); ++th) {
        pool.emplace_back([&, th] {
            for (std::size_t l = 10; l-- > 0;) {
                if (print_term(shared.level((l + th) % 10)) != expect[(l + th) % 10]) {
                    ok[th] = 0;
                }
            }
        });
    }
    for (auto &p : pool) {
        p.join();
    }
    for (int v : ok) {
        CHECK(v == 1);
    }
}

TEST_CASE("evaluation examples")
{
    const IntervalBody body;
    const ExactRational tol = ExactRational::pow2(30);
    Assignment<IntervalBody> a{{"a", from_rational(1)}, {"b", from_rational(-1)}};
    CHECK(print_digits(eval(leaf("a"), a, body, tol), 10) == "++++++++++");
    CHECK(body.gap(eval(parse_term("(mid a b)"), a, body, tol), 0) <= tol);
    const auto third = eval(parse_term("(seq periodic [] [a b])"), a, body, tol);
    CHECK(body.gap(third, ExactRational(1, 3)) <= tol);
    CHECK(body.gap(eval(normalize(parse_term("(seq periodic [] [a b])")), a, body, tol), ExactRational(1, 3)) <= tol);
    CHECK_THROWS_AS(eval(leaf("a"), a, body, ExactRational(0)), DomainError);
    CHECK_THROWS_AS(eval(leaf("zz"), a, body, tol), DomainError);
}

TEST_CASE("term values match the weight oracle in a linear body")
{
    Rng rng(23);
    const EuclideanBody body(2, 1);
    const ExactRational tol = ExactRational::pow2(30);
    const std::vector<std::string> gens{"a", "b", "c"};
    for (int k = 0; k < 80; ++k) {
        const Term t = random_term(rng, 2, gens);
        Assignment<EuclideanBody> as;
        std::map<std::string, Vec> images;
        for (const auto &g : gens) {
            images[g] = body.sample(rng);
            as.emplace(g, images[g]);
        }
        const WeightFunction w = weight(t);
        Vec expect(2);
        for (const auto &g : gens) {
            for (int i = 0; i < 2; ++i) {
                expect[i] += w[g] * images[g][i];
            }
        }
        CHECK(body.distance(eval(t, as, body, tol), expect) <= tol);
        CHECK(body.distance(eval(normalize(t), as, body, tol), expect) <= tol);
    }
}

TEST_CASE("flatten_grid examples in the interval body")
{
    const IntervalBody body;
    const unsigned depth = 44;
    const auto c = from_rational(ExactRational(-2, 3));
    CHECK(body.gap(approx_M_of<IntervalBody>(body, flatten_grid<IntervalBody>([c](std::size_t, std::size_t) { return c; }, body), depth),
                   ExactRational(-2, 3)) <= ExactRational::pow2(42));
    const std::vector<DigitStream> a{from_rational(1), from_rational(-1)};
    std::function<DigitStream(std::size_t, std::size_t)> by_row = [&](std::size_t i, std::size_t) {
        return i < a.size() ? a[i] : from_rational(0);
    };
    CHECK(body.gap(approx_M_of<IntervalBody>(body, flatten_grid<IntervalBody>(by_row, body), depth), ExactRational(1, 4)) <=
          ExactRational::pow2(42));
    std::function<DigitStream(std::size_t, std::size_t)> by_col = [&](std::size_t, std::size_t j) {
        return j < a.size() ? a[j] : from_rational(0);
    };
    CHECK(body.gap(approx_M_of<IntervalBody>(body, flatten_grid<IntervalBody>(by_col, body), depth), ExactRational(1, 4)) <=
          ExactRational::pow2(42));
    // The exact M of the flattened sequence against the nested exact M.
    const auto flat = flatten_grid<IntervalBody>(by_row, body);
    const auto exact = bigmid([flat](std::size_t l) { return flat(l); });
    CHECK(body.gap(exact, ExactRational(1, 4)) <= ExactRational::pow2(60));
}

TEST_CASE("chain_pairs is the m_n fold")
{
    const std::vector<Term> xs{leaf("a"), leaf("b"), leaf("c")};
    CHECK(print_term(chain_pairs(xs)) == "(mid a (mid b c))");
    CHECK(weight(chain_pairs(xs)) ==
          WeightFunction({{"a", ExactRational(1, 2)}, {"b", ExactRational(1, 4)}, {"c", ExactRational(1, 4)}}));
    CHECK_THROWS_AS(chain_pairs(std::span<const Term>{}), DomainError);
}
