// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#pragma once

#include "midpoint/bodies.hpp"
#include "midpoint/convex_body.hpp"
#include "midpoint/free.hpp"
#include "midpoint/term.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace midpoint
{

struct CheckOptions
{
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    ExactRational tol = ExactRational::pow2(40);
    /// Longest prefix used by the approximation suite.
    unsigned max_depth = 12;
};

struct PropertyResult
{
    std::string name;
    ExactRational max_violation;
    ExactRational tolerance;
    std::size_t evaluated = 0;
    [[nodiscard]] bool pass() const { return max_violation <= tolerance; }
};

struct CheckReport
{
    std::string suite;
    std::string body;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    ExactRational tolerance;
    std::vector<PropertyResult> properties;
    /// First sample that broke a property.
    std::optional<nlohmann::ordered_json> counterexample;

    [[nodiscard]] bool pass() const;
    [[nodiscard]] ExactRational max_violation() const;
    [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/// Running maximum of one property's violation, keeping the first witness
/// that exceeds the tolerance.
class PropertyTracker
{
public:
    PropertyTracker(std::string name, ExactRational tol) : result_{std::move(name), {}, std::move(tol), 0} {}

    void record(const ExactRational &violation, const std::function<nlohmann::ordered_json()> &witness)
    {
        ++result_.evaluated;
        if (result_.max_violation < violation) {
            result_.max_violation = violation;
        }
        if (!witness_ && result_.tolerance < violation) {
            witness_ = witness();
            witness_->emplace("property", result_.name);
            witness_->emplace("violation", violation.str());
        }
    }

    [[nodiscard]] const PropertyResult &result() const noexcept { return result_; }
    [[nodiscard]] const std::optional<nlohmann::ordered_json> &witness() const noexcept { return witness_; }

private:
    PropertyResult result_;
    std::optional<nlohmann::ordered_json> witness_;
};

CheckReport make_report(std::string suite, std::string body, const CheckOptions &opt,
                        const std::vector<PropertyTracker> &trackers);

namespace detail
{

template <class B>
nlohmann::ordered_json samples_json(const B &body, std::initializer_list<std::pair<const char *, const typename B::Sample *>> xs)
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto &[k, v] : xs) {
        j[k] = body.format(*v);
    }
    return j;
}

template <class B>
typename B::Sample model_fold(const B &body, std::span<const typename B::Sample> xs)
{
    typename B::Sample acc = xs.back();
    for (std::size_t i = xs.size() - 1; i-- > 0;) {
        acc = body.model_mid(xs[i], acc);
    }
    return acc;
}

} // namespace detail

/// Idempotency, commutativity, transposition and the binary unfolding of
/// approx_M, each measured against the exact model.
template <ConvexBody B>
CheckReport check_midpoint_axioms(const B &body, const CheckOptions &opt)
{
    Rng rng(opt.seed);
    using S = typename B::Sample;
    std::vector<PropertyTracker> t{{"idempotency", opt.tol},
                                   {"commutativity", opt.tol},
                                   {"transposition", opt.tol},
                                   {"unfolding", opt.tol}};
    for (std::size_t k = 0; k < opt.samples; ++k) {
        const S a = body.sample(rng);
        const S b = body.sample(rng);
        const S c = body.sample(rng);
        const S d = body.sample(rng);
        const auto xa = body.embed(a);
        const auto xb = body.embed(b);
        const auto xc = body.embed(c);
        const auto xd = body.embed(d);

        t[0].record(body.gap(body.mid(xa, xa), a), [&] { return detail::samples_json(body, {{"x", &a}}); });

        const S ab = body.model_mid(a, b);
        t[1].record(max(body.gap(body.mid(xa, xb), ab), body.gap(body.mid(xb, xa), ab)),
                    [&] { return detail::samples_json(body, {{"x", &a}, {"y", &b}}); });

        const S abcd = body.model_mid(ab, body.model_mid(c, d));
        const auto lhs = body.mid(body.mid(xa, xb), body.mid(xc, xd));
        const auto rhs = body.mid(body.mid(xa, xc), body.mid(xb, xd));
        t[2].record(max(body.gap(lhs, abcd), body.gap(rhs, abcd)),
                    [&] { return detail::samples_json(body, {{"x", &a}, {"y", &b}, {"z", &c}, {"w", &d}}); });

        const auto n = static_cast<unsigned>(uniform_int(rng, 1, 8));
        std::vector<S> seq;
        std::vector<typename B::Point> pts;
        for (unsigned i = 0; i <= n; ++i) {
            seq.push_back(body.sample(rng));
            pts.push_back(body.embed(seq.back()));
        }
        const S expect = detail::model_fold(body, std::span<const S>(seq));
        const std::span<const typename B::Point> prefix(pts.data(), n);
        const auto whole = body.approx_M(prefix, pts.back(), n);
        const auto unfolded = body.mid(pts[0], body.approx_M(prefix.subspan(1), pts.back(), n - 1));
        t[3].record(max(body.gap(whole, expect), body.gap(unfolded, expect)), [&] {
            nlohmann::ordered_json j;
            for (const auto &s : seq) {
                j["sequence"].push_back(body.format(s));
            }
            return j;
        });
    }
    return make_report("axioms", body.name(), opt, t);
}

/// Looks for x, y, z with m(x,z) within tol of m(y,z) while x and y are
/// more than 2 tol apart.
template <ConvexBody B>
CheckReport check_cancellation_probe(const B &body, const CheckOptions &opt)
{
    Rng rng(opt.seed);
    using S = typename B::Sample;
    std::vector<PropertyTracker> t{{"cancellation", ExactRational(0)}};
    const ExactRational two_tol = ExactRational(2) * opt.tol;
    for (std::size_t k = 0; k < opt.samples; ++k) {
        const S a = body.sample(rng);
        const S b = body.sample(rng);
        const S c = body.sample(rng);
        const auto x = body.embed(a);
        const auto y = body.embed(b);
        const auto z = body.embed(c);
        const auto sep = body.separation(x, y);
        ExactRational violation;
        if (two_tol < sep && body.distance(body.mid(x, z), body.mid(y, z)) <= opt.tol) {
            violation = sep;
        }
        t[0].record(violation, [&] {
            auto j = detail::samples_json(body, {{"x", &a}, {"y", &b}, {"z", &c}});
            j["mid_xz"] = body.format_point(body.mid(x, z));
            j["mid_yz"] = body.format_point(body.mid(y, z));
            return j;
        });
        if (t[0].witness()) {
            break;
        }
    }
    auto report = make_report("cancellation", body.name(), opt, t);
    report.tolerance = opt.tol;
    return report;
}

/// Sequence pairs agreeing on a random prefix: whenever the m_n values are
/// within eps, the M values must be within 4 eps + 2^(2-n) diameter.
/// M is taken at depth N = max_depth + 16 and charged its own truncation
/// error 2^(1-N) diameter.
template <ConvexBody B>
CheckReport check_approximation(const B &body, const CheckOptions &opt)
{
    Rng rng(opt.seed);
    using P = typename B::Point;
    std::vector<PropertyTracker> t{{"approximation", ExactRational(0)}};
    const unsigned deep = opt.max_depth + 16;
    const ExactRational diam = body.diameter();
    const ExactRational deep_err = ExactRational(2) * ExactRational::pow2(deep) * diam;
    for (std::size_t k = 0; k < opt.samples; ++k) {
        const auto agree = static_cast<std::size_t>(uniform_int(rng, 0, opt.max_depth + 1));
        std::vector<P> xs;
        std::vector<P> ys;
        for (unsigned i = 0; i <= deep; ++i) {
            const auto s = body.sample(rng);
            xs.push_back(body.embed(s));
            ys.push_back(i < agree ? xs.back() : body.embed(body.sample(rng)));
        }
        const auto mx = body.approx_M(std::span<const P>(xs), body.center(), deep);
        const auto my = body.approx_M(std::span<const P>(ys), body.center(), deep);
        const ExactRational far = body.distance(mx, my) + deep_err;
        for (unsigned n = 1; n <= opt.max_depth; ++n) {
            const ExactRational eps =
                body.distance(body.approx_M(std::span<const P>(xs), xs[n], n), body.approx_M(std::span<const P>(ys), ys[n], n));
            const ExactRational bound = ExactRational(4) * eps + ExactRational::pow2(static_cast<long>(n) - 2) * diam;
            t[0].record(max(ExactRational(0), far - bound), [&] {
                nlohmann::ordered_json j;
                j["n"] = n;
                j["agreeing_prefix"] = agree;
                j["eps"] = eps.str();
                j["distance"] = far.str();
                return j;
            });
        }
    }
    return make_report("approximation", body.name(), opt, t);
}

/// M_i(M_j x_ij) against M_l of the diagonal flattening, on eventually
/// constant grids.  With an exact linear model both sides are also
/// compared to the double sum.
template <ConvexBody B>
CheckReport check_flatten(const B &body, const CheckOptions &opt)
{
    Rng rng(opt.seed);
    using P = typename B::Point;
    using S = typename B::Sample;
    std::vector<PropertyTracker> t{{"flatten", opt.tol}};
    // Each side is two nested truncations of error tol/4 each.
    const unsigned depth = depth_for(body.diameter(), opt.tol / ExactRational(4));
    for (std::size_t k = 0; k < opt.samples; ++k) {
        const auto rows = static_cast<std::size_t>(uniform_int(rng, 1, 4));
        const auto cols = static_cast<std::size_t>(uniform_int(rng, 1, 4));
        std::vector<std::vector<S>> block(rows);
        for (auto &row : block) {
            for (std::size_t j = 0; j < cols; ++j) {
                row.push_back(body.sample(rng));
            }
        }
        const S fill = body.sample(rng);
        std::vector<std::vector<P>> pblock(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            for (const auto &s : block[i]) {
                pblock[i].push_back(body.embed(s));
            }
        }
        const P pfill = body.embed(fill);
        std::function<P(std::size_t, std::size_t)> grid = [&](std::size_t i, std::size_t j) -> P {
            return i < rows && j < cols ? pblock[i][j] : pfill;
        };
        std::vector<P> inner;
        for (unsigned i = 0; i < depth; ++i) {
            inner.push_back(approx_M_of<B>(
                body, [&](std::size_t j) { return grid(i, j); }, depth));
        }
        const P lhs = body.approx_M(std::span<const P>(inner), body.center(), depth);
        const P rhs = approx_M_of<B>(body, flatten_grid<B>(grid, body), depth);

        ExactRational violation;
        if constexpr (LinearModel<B>) {
            std::vector<ExactRational> w;
            std::vector<S> xs;
            ExactRational rest(1);
            for (std::size_t i = 0; i < rows; ++i) {
                for (std::size_t j = 0; j < cols; ++j) {
                    w.push_back(ExactRational::pow2(static_cast<long>(i + j) + 2));
                    xs.push_back(block[i][j]);
                    rest -= w.back();
                }
            }
            w.push_back(rest);
            xs.push_back(fill);
            const S expect = body.model_combine(w, xs);
            violation = max(body.gap(lhs, expect), body.gap(rhs, expect));
        } else {
            violation = body.distance(lhs, rhs);
        }
        t[0].record(violation, [&] {
            nlohmann::ordered_json j;
            for (const auto &row : block) {
                nlohmann::ordered_json r = nlohmann::ordered_json::array();
                for (const auto &s : row) {
                    r.push_back(body.format(s));
                }
                j["block"].push_back(r);
            }
            j["fill"] = body.format(fill);
            return j;
        });
    }
    return make_report("flatten", body.name(), opt, t);
}

/// Interval homomorphisms and the free extension: endpoint and midpoint
/// laws, m-homomorphism, the affine oracle, and h . eta = f.
template <ConvexBody B>
CheckReport check_universal(const B &body, const CheckOptions &opt)
{
    Rng rng(opt.seed);
    using S = typename B::Sample;
    const ExactRational &tol = opt.tol;
    const ExactRational hom_tol = ExactRational(4) * tol;
    std::vector<PropertyTracker> t{{"endpoints", tol}, {"midpoint", tol},        {"homomorphism", hom_tol},
                                   {"affine", tol},    {"extend_eta", tol},      {"extend_affine", tol}};
    const IntervalBody interval;
    const std::vector<std::string> gens{"g0", "g1", "g2"};
    for (std::size_t k = 0; k < opt.samples; ++k) {
        const S a = body.sample(rng);
        const S b = body.sample(rng);
        const auto pa = body.embed(a);
        const auto pb = body.embed(b);
        const ExactRational q = interval.sample(rng);
        const ExactRational r = interval.sample(rng);
        const auto x = from_rational(q);
        const auto y = from_rational(r);
        auto h = [&](const DigitStream &s) { return hom_from_interval(pa, pb, body, s, tol); };
        auto ab = [&] { return detail::samples_json(body, {{"a", &a}, {"b", &b}}); };

        t[0].record(max(body.gap(h(from_rational(-1)), a), body.gap(h(from_rational(1)), b)), ab);
        t[1].record(body.gap(h(DigitStream{}), body.model_mid(a, b)), ab);
        t[2].record(body.distance(h(mid(x, y)), body.mid(h(x), h(y))), [&] {
            auto j = ab();
            j["x"] = q.str();
            j["y"] = r.str();
            return j;
        });

        Assignment<B> f;
        std::vector<S> images;
        for (const auto &g : gens) {
            images.push_back(body.sample(rng));
            f.emplace(g, body.embed(images.back()));
        }
        const auto which = static_cast<std::size_t>(uniform_int(rng, 0, 2));
        t[4].record(body.gap(extend_h(f, body, eta(gens, gens[which]), tol), images[which]),
                    [&] { return nlohmann::ordered_json{{"generator", gens[which]}}; });

        if constexpr (LinearModel<B>) {
            const ExactRational lo = ExactRational(1, 2) * (ExactRational(1) - q);
            const ExactRational hi = ExactRational(1, 2) * (ExactRational(1) + q);
            const std::vector<ExactRational> w{lo, hi};
            const std::vector<S> ends{a, b};
            t[3].record(body.gap(h(x), body.model_combine(w, ends)), [&] {
                auto j = ab();
                j["x"] = q.str();
                return j;
            });

            const SimplexBody simplex(2);
            const WeightFunction lam = simplex.sample(rng);
            std::vector<WeightFunction::Entry> named;
            std::vector<ExactRational> lw;
            for (std::size_t i = 0; i < gens.size(); ++i) {
                named.emplace_back(gens[i], lam[simplex.vertices()[i]]);
                lw.push_back(named.back().second);
            }
            const WeightFunction lam_g(std::move(named));
            t[5].record(body.gap(extend_h(f, body, lam_g, tol), body.model_combine(lw, images)), [&] {
                nlohmann::ordered_json j;
                j["lambda"] = nlohmann::ordered_json::parse(lam_g.to_json());
                return j;
            });
        }
    }
    return make_report("universal", body.name(), opt, t);
}

/// Random terms over four generators with infinitary nodes of nesting at
/// most `depth`.
Term random_term(Rng &rng, unsigned depth, const std::vector<std::string> &gens);

/// A weight-preserving rewrite of t: swaps, medial exchange, x -> m(x,x),
/// x -> M(x,x,...), unfolding and cycle rotation, applied at random nodes.
Term rewrite_weight_equal(Rng &rng, const Term &t);

/// Weight-equal term pairs (equality verified exactly) evaluated in the
/// body: the two terms, and the normal form of the common weight, agree
/// within 2 tol.  Linear bodies also compare against the weighted sum.
template <ConvexBody B>
CheckReport check_completeness(const B &body, const CheckOptions &opt)
{
    Rng rng(opt.seed);
    using S = typename B::Sample;
    const ExactRational two_tol = ExactRational(2) * opt.tol;
    std::vector<PropertyTracker> t{{"weights_equal", ExactRational(0)},
                                   {"pair_agreement", two_tol},
                                   {"normal_form_agreement", two_tol},
                                   {"weighted_sum", opt.tol}};
    const std::vector<std::string> gens{"a", "b", "c", "d"};
    for (std::size_t k = 0; k < opt.samples; ++k) {
        const Term lhs = random_term(rng, 2, gens);
        const Term rhs = rewrite_weight_equal(rng, lhs);
        const WeightFunction wl = weight(lhs);
        const WeightFunction wr = weight(rhs);
        auto witness = [&] {
            return nlohmann::ordered_json{{"lhs", print_term(lhs)}, {"rhs", print_term(rhs)}};
        };
        t[0].record(ExactRational(wl == wr ? 0 : 1), witness);

        Assignment<B> assign;
        std::vector<S> images;
        for (const auto &g : gens) {
            images.push_back(body.sample(rng));
            assign.emplace(g, body.embed(images.back()));
        }
        const auto vl = eval(lhs, assign, body, opt.tol);
        const auto vr = eval(rhs, assign, body, opt.tol);
        t[1].record(body.distance(vl, vr), witness);
        t[2].record(body.distance(vl, eval(to_term(wl), assign, body, opt.tol)), witness);
        if constexpr (LinearModel<B>) {
            std::vector<ExactRational> w;
            std::vector<S> xs;
            for (std::size_t i = 0; i < gens.size(); ++i) {
                w.push_back(wl[gens[i]]);
                xs.push_back(images[i]);
            }
            t[3].record(body.gap(vl, body.model_combine(w, xs)), witness);
        }
    }
    return make_report("completeness", body.name(), opt, t);
}

/// Suite names accepted by run_check.
const std::vector<std::string> &check_suites();

/// Runs a suite by name on any body.  The L-shape fixture is expected to
/// fail the cancellation probe; `expectation_met` folds that in.
struct CheckOutcome
{
    CheckReport report;
    bool expected_failure = false;
    [[nodiscard]] bool expectation_met() const { return expected_failure ? !report.pass() : report.pass(); }
    [[nodiscard]] nlohmann::ordered_json to_json() const;
};

CheckOutcome run_check(const AnyBody &body, const std::string &suite, const CheckOptions &opt);

} // namespace midpoint
