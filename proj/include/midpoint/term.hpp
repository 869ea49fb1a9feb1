// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#pragma once

#include "midpoint/convex_body.hpp"
#include "midpoint/exact.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace midpoint
{

struct SeqSpec;

namespace detail
{
struct TermNode;
struct NormalFormImpl;
} // namespace detail

/// Immutable tree over generators with a binary midpoint node and an
/// infinitary node whose children form an eventually periodic sequence.
/// Subterms are shared; copying a Term is cheap.
class Term
{
public:
    enum class Kind { leaf, pair, omega };

    static Term leaf(std::string generator);
    static Term pair(Term left, Term right);
    static Term omega(SeqSpec seq);

    [[nodiscard]] Kind kind() const noexcept;
    /// Preconditions: kind() matches.
    [[nodiscard]] const std::string &generator() const;
    [[nodiscard]] const Term &left() const;
    [[nodiscard]] const Term &right() const;
    [[nodiscard]] const SeqSpec &seq() const;

    [[nodiscard]] const void *id() const noexcept { return node_.get(); }

private:
    explicit Term(std::shared_ptr<const detail::TermNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const detail::TermNode> node_;
};

/// prefix[0..k-1] followed by cycle repeated forever.
struct SeqSpec
{
    std::vector<Term> prefix;
    std::vector<Term> cycle;

    [[nodiscard]] const Term &at(std::size_t i) const
    {
        return i < prefix.size() ? prefix[i] : cycle[(i - prefix.size()) % cycle.size()];
    }
    /// Number of distinct positions in the description.
    [[nodiscard]] std::size_t slots() const noexcept { return prefix.size() + cycle.size(); }
    /// Position in the description of element i.
    [[nodiscard]] std::size_t slot_of(std::size_t i) const noexcept
    {
        return i < prefix.size() ? i : prefix.size() + (i - prefix.size()) % cycle.size();
    }
};

/// Generators in order of first appearance (depth first, left to right).
std::vector<std::string> generators(const Term &t);

/// Nesting depth of infinitary nodes; zero for finite binary terms.
unsigned omega_depth(const Term &t);

bool is_finite(const Term &t);

/// Exact weight function: halves at pairs, 2^-(i+1) for element i of an
/// infinitary node, closed form over the periodic part.
WeightFunction weight(const Term &t);

using Substitution = std::map<std::string, Term, std::less<>>;

/// Replaces each leaf g by sigma(g).  Throws DomainError if a generator of
/// t is missing from sigma.
Term subst(const Substitution &sigma, const Term &t);

/// A sequence of finite binary terms, produced on demand and memoized.
class NormalForm
{
public:
    [[nodiscard]] Term level(std::size_t l) const;
    /// The term this normal form was computed from, if any.
    [[nodiscard]] const std::optional<Term> &source() const;

    /// Wraps an arbitrary level function; `source` records provenance.
    static NormalForm from_levels(std::optional<Term> source, std::function<Term(std::size_t)> levels);

private:
    friend struct detail::NormalFormImpl;
    explicit NormalForm(std::shared_ptr<detail::NormalFormImpl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<detail::NormalFormImpl> impl_;
};

/// Leaves become constant sequences, pairs are paired levelwise and
/// infinitary nodes are flattened diagonally:
///     v_l = ((u_{0,l+1}, (u_{1,l+1}, ... (u_{l,l+1}, u_{ll}))),
///            (u_{l+1,0}, (u_{l+1,1}, ... (u_{l+1,l}, u_{ll})))).
NormalForm normalize(const Term &t);

/// g |-> sum_{l<L} 2^-(l+1) weight(level l)(g).
std::map<std::string, ExactRational> truncated_weight(const NormalForm &nf, std::size_t levels);

/// Grammar (whitespace-insensitive):
///     term := ident | "(mid" term term ")"
///           | "(seq" "periodic" "[" term* "]" "[" term+ "]" ")"
Term parse_term(std::string_view text);
std::string print_term(const Term &t);

/// Right-nested pair fold, the term form of m_n.  Requires a non-empty list.
Term chain_pairs(std::span<const Term> xs);

// ---------------------------------------------------------------------------
// Interpretation in a convex body

namespace detail
{

template <ConvexBody B>
class TermEvaluator
{
public:
    using Point = typename B::Point;

    TermEvaluator(const B &body, const Assignment<B> &assign, const ExactRational &tol, unsigned nesting)
        : body_(body), assign_(assign),
          depth_(depth_for(body.diameter(), tol / ExactRational(2 * static_cast<long>(std::max(1U, nesting)))))
    {
    }

    Point operator()(const Term &t)
    {
        if (auto it = memo_.find(t.id()); it != memo_.end()) {
            return it->second;
        }
        Point p = compute(t);
        memo_.emplace(t.id(), p);
        return p;
    }

    [[nodiscard]] unsigned depth() const noexcept { return depth_; }

private:
    Point compute(const Term &t)
    {
        switch (t.kind()) {
        case Term::Kind::leaf: {
            auto it = assign_.find(t.generator());
            if (it == assign_.end()) {
                throw DomainError("no point assigned to generator '" + t.generator() + "'");
            }
            return it->second;
        }
        case Term::Kind::pair:
            return body_.mid((*this)(t.left()), (*this)(t.right()));
        case Term::Kind::omega:
            break;
        }
        const SeqSpec &seq = t.seq();
        std::vector<Point> slot_values;
        slot_values.reserve(seq.slots());
        for (std::size_t s = 0; s < seq.slots(); ++s) {
            slot_values.push_back((*this)(s < seq.prefix.size() ? seq.prefix[s] : seq.cycle[s - seq.prefix.size()]));
        }
        std::vector<Point> prefix;
        prefix.reserve(depth_);
        for (unsigned i = 0; i < depth_; ++i) {
            prefix.push_back(slot_values[seq.slot_of(i)]);
        }
        return body_.approx_M(prefix, body_.center(), depth_);
    }

    const B &body_;
    const Assignment<B> &assign_;
    unsigned depth_;
    std::unordered_map<const void *, Point> memo_;
};

} // namespace detail

/// val(t, assignment) within tol.  Each infinitary node is truncated at the
/// depth n with 2^-n * diameter <= tol / (2 * omega_depth(t)); errors add up
/// along a nesting chain only, so the total stays below tol / 2.
template <ConvexBody B>
typename B::Point eval(const Term &t, const Assignment<B> &assign, const B &body, const ExactRational &tol)
{
    if (tol.sign() <= 0) {
        throw DomainError("tolerance must be positive");
    }
    detail::TermEvaluator<B> ev(body, assign, tol, omega_depth(t));
    return ev(t);
}

/// M over the levels of a normal form, each level evaluated exactly.
template <ConvexBody B>
typename B::Point eval(const NormalForm &nf, const Assignment<B> &assign, const B &body, const ExactRational &tol)
{
    if (tol.sign() <= 0) {
        throw DomainError("tolerance must be positive");
    }
    const unsigned depth = depth_for(body.diameter(), tol / ExactRational(2));
    std::vector<typename B::Point> prefix;
    prefix.reserve(depth);
    // Levels are finite, so the evaluator's truncation depth is unused and
    // its memo can be shared across levels.
    detail::TermEvaluator<B> ev(body, assign, tol, 1);
    for (unsigned l = 0; l < depth; ++l) {
        prefix.push_back(ev(nf.level(l)));
    }
    return body.approx_M(prefix, body.center(), depth);
}

/// The sequence whose M equals M_i(M_j grid(i, j)):
///     l |-> m(m_{l+1}(x_{0,l+1}, ..., x_{l,l+1}, x_{ll}),
///             m_{l+1}(x_{l+1,0}, ..., x_{l+1,l}, x_{ll})).
template <ConvexBody B>
std::function<typename B::Point(std::size_t)>
flatten_grid(std::function<typename B::Point(std::size_t, std::size_t)> grid, const B &body)
{
    return [grid = std::move(grid), &body](std::size_t l) {
        std::vector<typename B::Point> column;
        std::vector<typename B::Point> row;
        column.reserve(l + 2);
        row.reserve(l + 2);
        for (std::size_t k = 0; k <= l; ++k) {
            column.push_back(grid(k, l + 1));
            row.push_back(grid(l + 1, k));
        }
        const auto diag = grid(l, l);
        column.push_back(diag);
        row.push_back(diag);
        return body.mid(body_m_n(body, std::span<const typename B::Point>(column)),
                        body_m_n(body, std::span<const typename B::Point>(row)));
    };
}

} // namespace midpoint
