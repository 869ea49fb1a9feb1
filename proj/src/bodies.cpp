// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#include "midpoint/bodies.hpp"

#include <algorithm>

namespace midpoint
{

namespace
{

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

// sum_{i<n} 2^-(i+1) for the prefix, 2^-n for the tail.
std::vector<ExactRational> truncation_weights(unsigned n)
{
    std::vector<ExactRational> w;
    w.reserve(n + 1);
    for (unsigned i = 0; i < n; ++i) {
        w.push_back(ExactRational::pow2(static_cast<long>(i) + 1));
    }
    w.push_back(ExactRational::pow2(static_cast<long>(n)));
    return w;
}

template <class P>
void require_prefix(std::span<const P> prefix, unsigned n)
{
    if (prefix.size() < n) {
        throw DomainError("approx_M: prefix of " + std::to_string(prefix.size()) + " points for depth " +
                          std::to_string(n));
    }
}

} // namespace

unsigned depth_for(const ExactRational &diameter, const ExactRational &tol)
{
    if (tol.sign() <= 0) {
        throw DomainError("tolerance must be positive");
    }
    unsigned n = 0;
    ExactRational bound = diameter;
    while (tol < bound) {
        bound = bound * ExactRational(1, 2);
        ++n;
    }
    return n;
}

long uniform_int(Rng &rng, long lo, long hi)
{
    const auto span = static_cast<unsigned long long>(hi - lo) + 1ULL;
    return lo + static_cast<long>(rng() % span);
}

ExactRational random_rational(Rng &rng, const ExactRational &lo, const ExactRational &hi, long max_den)
{
    const long den = uniform_int(rng, 1, max_den);
    // smallest p with p/den >= lo, largest with p/den <= hi
    mpz_class plo = lo.raw().get_num() * den;
    mpz_cdiv_q(plo.get_mpz_t(), plo.get_mpz_t(), lo.raw().get_den().get_mpz_t());
    mpz_class phi = hi.raw().get_num() * den;
    mpz_fdiv_q(phi.get_mpz_t(), phi.get_mpz_t(), hi.raw().get_den().get_mpz_t());
    const long p = uniform_int(rng, plo.get_si(), phi.get_si());
    return {p, den};
}

// ---------------------------------------------------------------------------

IntervalBody::Point IntervalBody::approx_M(std::span<const Point> prefix, const Point &tail, unsigned n) const
{
    require_prefix(prefix, n);
    Point acc = tail;
    for (unsigned i = n; i-- > 0;) {
        acc = midpoint::mid(prefix[i], acc);
    }
    return acc;
}

ExactRational IntervalBody::distance(const Point &a, const Point &b) const
{
    const auto ea = approx_value(a, precision_);
    const auto eb = approx_value(b, precision_);
    return max(ea.hi.to_rational() - eb.lo.to_rational(), eb.hi.to_rational() - ea.lo.to_rational());
}

ExactRational IntervalBody::separation(const Point &a, const Point &b) const
{
    const auto ea = approx_value(a, precision_);
    const auto eb = approx_value(b, precision_);
    return max(ExactRational(0),
               max(ea.lo.to_rational() - eb.hi.to_rational(), eb.lo.to_rational() - ea.hi.to_rational()));
}

IntervalBody::Sample IntervalBody::model_combine(std::span<const ExactRational> w, std::span<const Sample> xs) const
{
    ExactRational acc;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        acc += w[i] * xs[i];
    }
    return acc;
}

ExactRational IntervalBody::gap(const Point &p, const Sample &s) const
{
    return approx_value(p, precision_).gap(s);
}

IntervalBody::Sample IntervalBody::sample(Rng &rng) const
{
    return random_rational(rng, -1, 1);
}

IntervalBody::Sample IntervalBody::parse_sample(std::string_view text) const
{
    auto r = ExactRational::parse(text);
    if (r < ExactRational(-1) || ExactRational(1) < r) {
        throw DomainError("interval point " + r.str() + " outside [-1,1]");
    }
    return r;
}

std::string IntervalBody::format_point(const Point &p) const
{
    const auto e = approx_value(p, precision_);
    return "[" + e.lo.str() + ", " + e.hi.str() + "]";
}

// ---------------------------------------------------------------------------

EuclideanBody::EuclideanBody(unsigned dimension, ExactRational radius) : dim_(dimension), radius_(std::move(radius))
{
    if (dim_ == 0) {
        throw DomainError("Euclidean body needs dimension >= 1");
    }
    if (radius_.sign() <= 0) {
        throw DomainError("Euclidean body needs a positive radius");
    }
}

std::string EuclideanBody::name() const
{
    return "euclid:" + std::to_string(dim_) + ":" + radius_.str();
}

EuclideanBody::Point EuclideanBody::point(Vec v) const
{
    if (v.size() != dim_) {
        throw DomainError("expected " + std::to_string(dim_) + " coordinates, got " + std::to_string(v.size()));
    }
    for (const auto &c : v) {
        if (radius_ < abs(c)) {
            throw DomainError("coordinate " + c.str() + " outside the radius " + radius_.str());
        }
    }
    return v;
}

EuclideanBody::Point EuclideanBody::mid(const Point &a, const Point &b) const
{
    Vec out(dim_);
    for (unsigned i = 0; i < dim_; ++i) {
        out[i] = midpoint::mid(a[i], b[i]);
    }
    return out;
}

EuclideanBody::Point EuclideanBody::approx_M(std::span<const Point> prefix, const Point &tail, unsigned n) const
{
    require_prefix(prefix, n);
    const auto w = truncation_weights(n);
    Vec out(dim_);
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned k = 0; k < dim_; ++k) {
            out[k] += w[i] * prefix[i][k];
        }
    }
    for (unsigned k = 0; k < dim_; ++k) {
        out[k] += w[n] * tail[k];
    }
    return out;
}

ExactRational EuclideanBody::distance(const Point &a, const Point &b) const
{
    ExactRational d;
    for (unsigned i = 0; i < dim_; ++i) {
        d = max(d, abs(a[i] - b[i]));
    }
    return d;
}

EuclideanBody::Sample EuclideanBody::model_combine(std::span<const ExactRational> w, std::span<const Sample> xs) const
{
    Vec out(dim_);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (unsigned k = 0; k < dim_; ++k) {
            out[k] += w[i] * xs[i][k];
        }
    }
    return out;
}

EuclideanBody::Sample EuclideanBody::sample(Rng &rng) const
{
    Vec v;
    v.reserve(dim_);
    for (unsigned i = 0; i < dim_; ++i) {
        v.push_back(random_rational(rng, -radius_, radius_));
    }
    return v;
}

EuclideanBody::Sample EuclideanBody::parse_sample(std::string_view text) const
{
    Vec v;
    for (auto part : split(text, ':')) {
        v.push_back(ExactRational::parse(part));
    }
    return point(std::move(v));
}

std::string EuclideanBody::format(const Sample &s) const
{
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += (i > 0 ? ":" : "") + s[i].str();
    }
    return out;
}

// ---------------------------------------------------------------------------

SimplexBody::SimplexBody(unsigned n) : n_(n)
{
    for (unsigned i = 0; i <= n; ++i) {
        vertices_.push_back("v" + std::to_string(i));
    }
}

SimplexBody::Point SimplexBody::vertex(unsigned i) const
{
    if (i > n_) {
        throw DomainError("simplex vertex index out of range");
    }
    std::vector<WeightFunction::Entry> e;
    for (unsigned k = 0; k <= n_; ++k) {
        e.emplace_back(vertices_[k], ExactRational(k == i ? 1 : 0));
    }
    return WeightFunction(std::move(e));
}

SimplexBody::Point SimplexBody::point(const WeightFunction &w) const
{
    for (const auto &[g, x] : w.entries()) {
        if (std::find(vertices_.begin(), vertices_.end(), g) == vertices_.end() && !x.is_zero()) {
            throw DomainError("'" + g + "' is not a vertex of " + name());
        }
    }
    std::vector<WeightFunction::Entry> e;
    for (const auto &v : vertices_) {
        e.emplace_back(v, w[v]);
    }
    return WeightFunction(std::move(e));
}

SimplexBody::Point SimplexBody::mid(const Point &a, const Point &b) const
{
    std::vector<WeightFunction::Entry> e;
    for (const auto &v : vertices_) {
        e.emplace_back(v, midpoint::mid(a[v], b[v]));
    }
    return WeightFunction(std::move(e));
}

SimplexBody::Point SimplexBody::approx_M(std::span<const Point> prefix, const Point &tail, unsigned n) const
{
    require_prefix(prefix, n);
    std::vector<Point> pts(prefix.begin(), prefix.begin() + n);
    pts.push_back(tail);
    return model_combine(truncation_weights(n), pts);
}

SimplexBody::Point SimplexBody::center() const
{
    std::vector<WeightFunction::Entry> e;
    for (const auto &v : vertices_) {
        e.emplace_back(v, ExactRational(1, static_cast<long>(n_) + 1));
    }
    return WeightFunction(std::move(e));
}

ExactRational SimplexBody::distance(const Point &a, const Point &b) const
{
    ExactRational d;
    for (const auto &v : vertices_) {
        d = max(d, abs(a[v] - b[v]));
    }
    return d;
}

SimplexBody::Sample SimplexBody::model_combine(std::span<const ExactRational> w, std::span<const Sample> xs) const
{
    std::vector<WeightFunction::Entry> e;
    for (const auto &v : vertices_) {
        ExactRational acc;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            acc += w[i] * xs[i][v];
        }
        e.emplace_back(v, acc);
    }
    return WeightFunction(std::move(e));
}

SimplexBody::Sample SimplexBody::sample(Rng &rng) const
{
    std::vector<long> raw;
    long total = 0;
    for (unsigned i = 0; i <= n_; ++i) {
        raw.push_back(uniform_int(rng, 0, 12));
        total += raw.back();
    }
    if (total == 0) {
        raw[static_cast<std::size_t>(uniform_int(rng, 0, n_))] = 1;
        total = 1;
    }
    std::vector<WeightFunction::Entry> e;
    for (unsigned i = 0; i <= n_; ++i) {
        e.emplace_back(vertices_[i], ExactRational(raw[i], total));
    }
    return WeightFunction(std::move(e));
}

SimplexBody::Sample SimplexBody::parse_sample(std::string_view text) const
{
    if (!text.empty() && text[0] == 'v') {
        const std::string idx(text.substr(1));
        for (unsigned i = 0; i <= n_; ++i) {
            if (idx == std::to_string(i)) {
                return vertex(i);
            }
        }
        throw DomainError("unknown vertex '" + std::string(text) + "'");
    }
    const auto parts = split(text, ':');
    if (parts.size() != n_ + 1) {
        throw DomainError("expected " + std::to_string(n_ + 1) + " barycentric weights");
    }
    std::vector<WeightFunction::Entry> e;
    for (unsigned i = 0; i <= n_; ++i) {
        e.emplace_back(vertices_[i], ExactRational::parse(parts[i]));
    }
    return WeightFunction(std::move(e));
}

std::string SimplexBody::format(const Sample &s) const
{
    std::string out;
    for (unsigned i = 0; i <= n_; ++i) {
        out += (i > 0 ? ":" : "") + s[vertices_[i]].str();
    }
    return out;
}

// ---------------------------------------------------------------------------

LShapeBody::Point LShapeBody::point(ExactRational x, ExactRational y) const
{
    const ExactRational zero(0);
    const ExactRational one(1);
    if (x < zero || one < x || y < zero || one < y || (x != one && y != one)) {
        throw DomainError("(" + x.str() + ", " + y.str() + ") is not on the L-shape");
    }
    return {std::move(x), std::move(y)};
}

LShapeBody::Point LShapeBody::mid(const Point &a, const Point &b) const
{
    const ExactRational one(1);
    if (a.x == one && b.x == one) {
        return {one, midpoint::mid(a.y, b.y)};
    }
    return {midpoint::mid(a.x, b.x), one};
}

LShapeBody::Point LShapeBody::approx_M(std::span<const Point> prefix, const Point &tail, unsigned n) const
{
    require_prefix(prefix, n);
    Point acc = tail;
    for (unsigned i = n; i-- > 0;) {
        acc = mid(prefix[i], acc);
    }
    return acc;
}

ExactRational LShapeBody::distance(const Point &a, const Point &b) const
{
    return max(abs(a.x - b.x), abs(a.y - b.y));
}

LShapeBody::Sample LShapeBody::sample(Rng &rng) const
{
    const ExactRational c = random_rational(rng, 0, 1, 16);
    if (uniform_int(rng, 0, 1) == 0) {
        return {1, c};
    }
    return {c, 1};
}

LShapeBody::Sample LShapeBody::parse_sample(std::string_view text) const
{
    const auto parts = split(text, ':');
    if (parts.size() != 2) {
        throw DomainError("L-shape point must be 'x:y'");
    }
    return point(ExactRational::parse(parts[0]), ExactRational::parse(parts[1]));
}

// ---------------------------------------------------------------------------

AnyBody parse_body(std::string_view spec)
{
    const auto parts = split(spec, ':');
    auto parse_count = [&](std::string_view s) -> unsigned {
        const auto r = ExactRational::parse(s);
        if (r.denominator() != 1 || r.sign() <= 0 || r.numerator() > 1024) {
            throw ParseError("expected a positive integer in body spec '" + std::string(spec) + "'", 1, 1);
        }
        return static_cast<unsigned>(r.numerator().get_ui());
    };
    if (parts[0] == "interval" && parts.size() == 1) {
        return IntervalBody{};
    }
    if (parts[0] == "lshape" && parts.size() == 1) {
        return LShapeBody{};
    }
    if (parts[0] == "simplex" && parts.size() == 2) {
        return SimplexBody(parse_count(parts[1]));
    }
    if (parts[0] == "euclid" && (parts.size() == 2 || parts.size() == 3)) {
        const ExactRational radius = parts.size() == 3 ? ExactRational::parse(parts[2]) : ExactRational(1);
        return EuclideanBody(parse_count(parts[1]), radius);
    }
    throw ParseError("unknown body spec '" + std::string(spec) + "' (expected interval, simplex:N, euclid:K:R, lshape)",
                     1, 1);
}

} // namespace midpoint
