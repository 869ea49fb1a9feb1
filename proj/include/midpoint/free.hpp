// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#pragma once

#include "midpoint/convex_body.hpp"
#include "midpoint/exact.hpp"
#include "midpoint/sdstream.hpp"
#include "midpoint/term.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace midpoint
{

/// A point of the free convex body on a set of generators: a finitely
/// supported weight function.
using FreePoint = WeightFunction;

/// The Dirac weight at g.  Throws DomainError if g is not in `universe`.
FreePoint eta(const std::vector<std::string> &universe, const std::string &g);

/// lambda = m(rho, mu) with rho dyadic.
struct Decomposition
{
    FreePoint rho;
    FreePoint mu;
    /// Greedy steps taken.
    std::size_t steps = 0;
};

/// Starting from mu = 2 lambda and rho = 0, repeatedly moves the largest
/// power of two 2^-t <= max mu from the lowest-index generator with
/// mu_g >= 2^-t over to rho, until rho sums to one.
Decomposition decompose(const FreePoint &lambda);

/// lambda^0 = lambda, lambda^(l+1) = mu(lambda^l); rho^l = rho(lambda^l).
/// Thread-safe, memoized.
class LevelSequence
{
public:
    explicit LevelSequence(FreePoint lambda);

    [[nodiscard]] const FreePoint &lambda() const;
    [[nodiscard]] FreePoint lambda_at(std::size_t l) const;
    [[nodiscard]] FreePoint rho_at(std::size_t l) const;
    [[nodiscard]] std::size_t steps_at(std::size_t l) const;

    /// g |-> sum_{l<L} 2^-(l+1) rho^l(g), over the support of lambda.
    [[nodiscard]] std::vector<WeightFunction::Entry> reconstruction(std::size_t levels) const;
    /// max_g |lambda(g) - reconstruction(g)| after `levels` levels.
    [[nodiscard]] ExactRational residual(std::size_t levels) const;

private:
    struct State;
    std::shared_ptr<State> state_;
};

LevelSequence levels(const FreePoint &lambda);

/// Full binary tree of height t whose 2^t leaves realize the dyadic weight
/// rho, generators in support order.  Equal subtrees are shared.
Term dyadic_tree(const FreePoint &rho);

/// Normal form with level l = dyadic_tree(rho^l).
NormalForm to_term(const FreePoint &lambda);

/// h(lambda) for h the extension of f along eta, within tol.
template <ConvexBody B>
typename B::Point extend_h(const Assignment<B> &f, const B &body, const FreePoint &lambda, const ExactRational &tol)
{
    for (const auto &[g, w] : lambda.entries()) {
        if (!w.is_zero() && !f.contains(g)) {
            throw DomainError("no image for generator '" + g + "'");
        }
    }
    return eval(to_term(lambda), f, body, tol);
}

/// The affine map [-1,1] -> body sending -1 to a and +1 to b, applied to x
/// within tol: digits -1, 0, +1 map to a, m(a,b), b.
template <ConvexBody B>
typename B::Point hom_from_interval(const typename B::Point &a, const typename B::Point &b, const B &body,
                                    const DigitStream &x, const ExactRational &tol)
{
    const unsigned depth = depth_for(body.diameter(), tol);
    const typename B::Point ab = body.mid(a, b);
    std::vector<typename B::Point> prefix;
    prefix.reserve(depth);
    for (unsigned i = 0; i < depth; ++i) {
        switch (x.at(i)) {
        case Digit::minus:
            prefix.push_back(a);
            break;
        case Digit::zero:
            prefix.push_back(ab);
            break;
        case Digit::plus:
            prefix.push_back(b);
            break;
        }
    }
    return body.approx_M(prefix, body.center(), depth);
}

} // namespace midpoint
