// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#pragma once

#include "midpoint/convex_body.hpp"
#include "midpoint/exact.hpp"
#include "midpoint/sdstream.hpp"

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace midpoint
{

/// Uniform integer in [lo, hi] from a 64-bit draw.  Identical on every
/// platform for a given seed, unlike std::uniform_int_distribution.
long uniform_int(Rng &rng, long lo, long hi);

/// p/q with q uniform in [1, max_den] and p uniform among the values that
/// keep the result in [lo, hi].
ExactRational random_rational(Rng &rng, const ExactRational &lo, const ExactRational &hi, long max_den = 64);

/// [-1,1] as signed-digit streams.  Point values are only known through
/// enclosures, so distances are bounds computed at `precision`.
class IntervalBody
{
public:
    using Point = DigitStream;
    using Sample = ExactRational;

    explicit IntervalBody(Precision p = Precision(64)) : precision_(p) {}

    [[nodiscard]] std::string name() const { return "interval"; }
    [[nodiscard]] Precision precision() const noexcept { return precision_; }

    [[nodiscard]] Point mid(const Point &a, const Point &b) const { return midpoint::mid(a, b); }
    [[nodiscard]] Point approx_M(std::span<const Point> prefix, const Point &tail, unsigned n) const;
    /// The exact infinitary midpoint.
    [[nodiscard]] Point exact_M(StreamSequence xs) const { return bigmid(std::move(xs)); }
    [[nodiscard]] Point center() const { return {}; }
    [[nodiscard]] ExactRational diameter() const { return 2; }
    [[nodiscard]] ExactRational distance(const Point &a, const Point &b) const;
    [[nodiscard]] ExactRational separation(const Point &a, const Point &b) const;

    [[nodiscard]] Point embed(const Sample &s) const { return from_rational(s); }
    [[nodiscard]] Sample model_mid(const Sample &a, const Sample &b) const { return midpoint::mid(a, b); }
    [[nodiscard]] Sample model_combine(std::span<const ExactRational> w, std::span<const Sample> xs) const;
    [[nodiscard]] ExactRational gap(const Point &p, const Sample &s) const;
    [[nodiscard]] Sample sample(Rng &rng) const;

    [[nodiscard]] Sample parse_sample(std::string_view text) const;
    [[nodiscard]] std::string format(const Sample &s) const { return s.str(); }
    /// Enclosure "[lo, hi]" at the body's precision.
    [[nodiscard]] std::string format_point(const Point &p) const;

private:
    Precision precision_;
};

/// Exact rational vector in a Euclidean body.
using Vec = std::vector<ExactRational>;

/// The cube {x in Q^k : max_i |x_i| <= R}, a bounded convex set.
class EuclideanBody
{
public:
    using Point = Vec;
    using Sample = Vec;

    EuclideanBody(unsigned dimension, ExactRational radius);

    [[nodiscard]] std::string name() const;
    [[nodiscard]] unsigned dimension() const noexcept { return dim_; }
    [[nodiscard]] const ExactRational &radius() const noexcept { return radius_; }

    /// Throws DomainError for a wrong dimension or a point outside the cube.
    [[nodiscard]] Point point(Vec v) const;

    [[nodiscard]] Point mid(const Point &a, const Point &b) const;
    [[nodiscard]] Point approx_M(std::span<const Point> prefix, const Point &tail, unsigned n) const;
    [[nodiscard]] Point center() const { return Vec(dim_, ExactRational(0)); }
    [[nodiscard]] ExactRational diameter() const { return ExactRational(2) * radius_; }
    /// Max-norm distance, exact.
    [[nodiscard]] ExactRational distance(const Point &a, const Point &b) const;
    [[nodiscard]] ExactRational separation(const Point &a, const Point &b) const { return distance(a, b); }

    [[nodiscard]] Point embed(const Sample &s) const { return point(s); }
    [[nodiscard]] Sample model_mid(const Sample &a, const Sample &b) const { return mid(a, b); }
    [[nodiscard]] Sample model_combine(std::span<const ExactRational> w, std::span<const Sample> xs) const;
    [[nodiscard]] ExactRational gap(const Point &p, const Sample &s) const { return distance(p, s); }
    [[nodiscard]] Sample sample(Rng &rng) const;

    /// Colon separated components, e.g. "1/2:0".
    [[nodiscard]] Sample parse_sample(std::string_view text) const;
    [[nodiscard]] std::string format(const Sample &s) const;
    [[nodiscard]] std::string format_point(const Point &p) const { return format(p); }

private:
    unsigned dim_;
    ExactRational radius_;
};

/// The standard n-simplex: probability vectors over vertices v0..vn.
class SimplexBody
{
public:
    using Point = WeightFunction;
    using Sample = WeightFunction;

    explicit SimplexBody(unsigned n);

    [[nodiscard]] std::string name() const { return "simplex:" + std::to_string(n_); }
    [[nodiscard]] unsigned n() const noexcept { return n_; }
    [[nodiscard]] const std::vector<std::string> &vertices() const noexcept { return vertices_; }
    [[nodiscard]] Point vertex(unsigned i) const;
    /// Rewrites w over exactly the vertex list, in vertex order.
    [[nodiscard]] Point point(const WeightFunction &w) const;

    [[nodiscard]] Point mid(const Point &a, const Point &b) const;
    [[nodiscard]] Point approx_M(std::span<const Point> prefix, const Point &tail, unsigned n) const;
    [[nodiscard]] Point center() const;
    /// In the max norm over barycentric coordinates.
    [[nodiscard]] ExactRational diameter() const { return 1; }
    [[nodiscard]] ExactRational distance(const Point &a, const Point &b) const;
    [[nodiscard]] ExactRational separation(const Point &a, const Point &b) const { return distance(a, b); }

    [[nodiscard]] Point embed(const Sample &s) const { return point(s); }
    [[nodiscard]] Sample model_mid(const Sample &a, const Sample &b) const { return mid(a, b); }
    [[nodiscard]] Sample model_combine(std::span<const ExactRational> w, std::span<const Sample> xs) const;
    [[nodiscard]] ExactRational gap(const Point &p, const Sample &s) const { return distance(p, s); }
    [[nodiscard]] Sample sample(Rng &rng) const;

    /// A vertex name "vK", or colon separated barycentric weights.
    [[nodiscard]] Sample parse_sample(std::string_view text) const;
    [[nodiscard]] std::string format(const Sample &s) const;
    [[nodiscard]] std::string format_point(const Point &p) const { return format(p); }

private:
    unsigned n_;
    std::vector<std::string> vertices_;
};

/// The L-shaped midpoint set {(x,y) in [0,1]^2 : x = 1 or y = 1} with
///     m((x,y),(x',y')) = (1, y (+) y')   if x = x' = 1
///                        (x (+) x', 1)   otherwise.
/// Iterative but not cancellative.  approx_M is the m_n fold; it does
/// not carry the error bound of the cancellative bodies.
class LShapeBody
{
public:
    struct Point
    {
        ExactRational x;
        ExactRational y;
        friend bool operator==(const Point &, const Point &) = default;
    };
    using Sample = Point;

    [[nodiscard]] std::string name() const { return "lshape"; }
    /// Throws DomainError off the L.
    [[nodiscard]] Point point(ExactRational x, ExactRational y) const;

    [[nodiscard]] Point mid(const Point &a, const Point &b) const;
    [[nodiscard]] Point approx_M(std::span<const Point> prefix, const Point &tail, unsigned n) const;
    [[nodiscard]] Point center() const { return {1, 1}; }
    [[nodiscard]] ExactRational diameter() const { return 1; }
    [[nodiscard]] ExactRational distance(const Point &a, const Point &b) const;
    [[nodiscard]] ExactRational separation(const Point &a, const Point &b) const { return distance(a, b); }

    [[nodiscard]] Point embed(const Sample &s) const { return point(s.x, s.y); }
    [[nodiscard]] Sample model_mid(const Sample &a, const Sample &b) const { return mid(a, b); }
    [[nodiscard]] ExactRational gap(const Point &p, const Sample &s) const { return distance(p, s); }
    [[nodiscard]] Sample sample(Rng &rng) const;

    /// "x:y".
    [[nodiscard]] Sample parse_sample(std::string_view text) const;
    [[nodiscard]] std::string format(const Sample &s) const { return s.x.str() + ":" + s.y.str(); }
    [[nodiscard]] std::string format_point(const Point &p) const { return format(p); }
};

static_assert(LinearModel<IntervalBody>);
static_assert(LinearModel<EuclideanBody>);
static_assert(LinearModel<SimplexBody>);
static_assert(ConvexBody<LShapeBody>);

using AnyBody = std::variant<IntervalBody, SimplexBody, EuclideanBody, LShapeBody>;

/// "interval", "simplex:N", "euclid:K:R", "lshape".
AnyBody parse_body(std::string_view spec);

} // namespace midpoint
