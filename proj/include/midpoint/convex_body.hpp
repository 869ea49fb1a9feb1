// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#pragma once

#include "midpoint/exact.hpp"

#include <concepts>
#include <cstddef>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace midpoint
{

using Rng = std::mt19937_64;

/// A bounded iterative midpoint structure.
///
/// `approx_M(prefix, tail, n)` is m_n(prefix[0], ..., prefix[n-1], tail) and
/// is within 2^-n * diameter() of the infinitary midpoint of any sequence
/// starting with that prefix (for the cancellative bodies).  `distance`
/// returns an upper bound, `separation` a lower bound; they coincide for
/// bodies with exact points.
///
/// Every body also carries an exact reference model: `Sample` values with
/// their own midpoint, an embedding into points, and `gap(point, sample)`,
/// an upper bound on how far a point lies from the model value.  Checks
/// compute expected results in the model and measure the body against it.
template <class B>
concept ConvexBody = requires(const B &b, const typename B::Point &p, std::span<const typename B::Point> ps,
                              const typename B::Sample &s, Rng &rng, unsigned n) {
    typename B::Point;
    typename B::Sample;
    { b.name() } -> std::convertible_to<std::string>;
    { b.mid(p, p) } -> std::convertible_to<typename B::Point>;
    { b.approx_M(ps, p, n) } -> std::convertible_to<typename B::Point>;
    { b.center() } -> std::convertible_to<typename B::Point>;
    { b.diameter() } -> std::convertible_to<ExactRational>;
    { b.distance(p, p) } -> std::convertible_to<ExactRational>;
    { b.separation(p, p) } -> std::convertible_to<ExactRational>;
    { b.embed(s) } -> std::convertible_to<typename B::Point>;
    { b.model_mid(s, s) } -> std::convertible_to<typename B::Sample>;
    { b.gap(p, s) } -> std::convertible_to<ExactRational>;
    { b.sample(rng) } -> std::convertible_to<typename B::Sample>;
};

/// Bodies whose model is a convex subset of a rational vector space, so
/// that finite convex combinations can be computed exactly.
template <class B>
concept LinearModel = ConvexBody<B> && requires(const B &b, std::span<const ExactRational> w,
                                                std::span<const typename B::Sample> xs) {
    { b.model_combine(w, xs) } -> std::convertible_to<typename B::Sample>;
};

template <class B>
using Assignment = std::map<std::string, typename B::Point, std::less<>>;

/// Smallest n with 2^-n * diameter <= tol.  Throws DomainError if tol <= 0.
unsigned depth_for(const ExactRational &diameter, const ExactRational &tol);

/// Right-nested midpoint fold in any body.
template <ConvexBody B>
typename B::Point body_m_n(const B &body, std::span<const typename B::Point> xs)
{
    if (xs.empty()) {
        throw DomainError("m_n needs at least one argument");
    }
    typename B::Point acc = xs.back();
    for (std::size_t i = xs.size() - 1; i-- > 0;) {
        acc = body.mid(xs[i], acc);
    }
    return acc;
}

/// M applied to the first `depth` elements of `seq`, tail at the center.
template <ConvexBody B>
typename B::Point approx_M_of(const B &body, const std::function<typename B::Point(std::size_t)> &seq, unsigned depth)
{
    std::vector<typename B::Point> prefix;
    prefix.reserve(depth);
    for (unsigned i = 0; i < depth; ++i) {
        prefix.push_back(seq(i));
    }
    return body.approx_M(prefix, body.center(), depth);
}

/// Solution of u(s) = mid(head(s), u(tail(s))), i.e. M_i head(tail^i(s0)),
/// within tol.
template <ConvexBody B, class State>
typename B::Point iterate_coalgebra(const B &body, const std::function<typename B::Point(const State &)> &head,
                                    const std::function<State(const State &)> &tail, State s0,
                                    const ExactRational &tol)
{
    const unsigned depth = depth_for(body.diameter(), tol);
    std::vector<typename B::Point> prefix;
    prefix.reserve(depth);
    for (unsigned i = 0; i < depth; ++i) {
        prefix.push_back(head(s0));
        s0 = tail(s0);
    }
    return body.approx_M(prefix, body.center(), depth);
}

} // namespace midpoint
