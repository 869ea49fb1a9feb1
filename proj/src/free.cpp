// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#include "midpoint/free.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace midpoint
{

FreePoint eta(const std::vector<std::string> &universe, const std::string &g)
{
    if (std::find(universe.begin(), universe.end(), g) == universe.end()) {
        throw DomainError("'" + g + "' is not a generator");
    }
    return WeightFunction::dirac(g);
}

namespace
{

FreePoint drop_zeros(const std::vector<WeightFunction::Entry> &entries)
{
    std::vector<WeightFunction::Entry> kept;
    for (const auto &e : entries) {
        if (!e.second.is_zero()) {
            kept.push_back(e);
        }
    }
    return WeightFunction(std::move(kept));
}

} // namespace

Decomposition decompose(const FreePoint &lambda)
{
    std::vector<WeightFunction::Entry> mu;
    std::vector<WeightFunction::Entry> rho;
    for (const auto &[g, w] : lambda.entries()) {
        mu.emplace_back(g, ExactRational(2) * w);
        rho.emplace_back(g, ExactRational(0));
    }
    const ExactRational one(1);
    const ExactRational half(1, 2);
    ExactRational total;
    // The chosen powers never increase, so the search restarts from the last one.
    ExactRational p(1);
    std::size_t steps = 0;
    while (total != one) {
        ExactRational largest;
        for (const auto &e : mu) {
            largest = max(largest, e.second);
        }
        if (largest.is_zero()) {
            throw DomainError("decompose: weights do not sum to one");
        }
        while (largest < p) {
            p *= half;
        }
        std::size_t i = 0;
        while (mu[i].second < p) {
            ++i;
        }
        rho[i].second += p;
        mu[i].second -= p;
        total += p;
        ++steps;
    }
    return {drop_zeros(rho), drop_zeros(mu), steps};
}

struct LevelSequence::State
{
    FreePoint lambda;
    std::mutex lock;
    std::vector<FreePoint> lambdas;
    std::vector<Decomposition> parts;

    const Decomposition &part(std::size_t l)
    {
        std::lock_guard guard(lock);
        while (parts.size() <= l) {
            parts.push_back(decompose(lambdas.back()));
            lambdas.push_back(parts.back().mu);
        }
        return parts[l];
    }
};

LevelSequence::LevelSequence(FreePoint lambda) : state_(std::make_shared<State>())
{
    state_->lambda = lambda;
    state_->lambdas.push_back(std::move(lambda));
}

const FreePoint &LevelSequence::lambda() const
{
    return state_->lambda;
}

FreePoint LevelSequence::lambda_at(std::size_t l) const
{
    if (l == 0) {
        return state_->lambda;
    }
    return state_->part(l - 1).mu;
}

FreePoint LevelSequence::rho_at(std::size_t l) const
{
    return state_->part(l).rho;
}

std::size_t LevelSequence::steps_at(std::size_t l) const
{
    return state_->part(l).steps;
}

std::vector<WeightFunction::Entry> LevelSequence::reconstruction(std::size_t levels) const
{
    std::vector<WeightFunction::Entry> out;
    for (const auto &e : state_->lambda.entries()) {
        out.emplace_back(e.first, ExactRational(0));
    }
    for (std::size_t l = 0; l < levels; ++l) {
        const auto scale = ExactRational::pow2(static_cast<long>(l) + 1);
        const auto rho = rho_at(l);
        for (auto &[g, acc] : out) {
            acc += scale * rho[g];
        }
    }
    return out;
}

ExactRational LevelSequence::residual(std::size_t levels) const
{
    ExactRational worst;
    for (const auto &[g, v] : reconstruction(levels)) {
        worst = max(worst, abs(state_->lambda[g] - v));
    }
    return worst;
}

LevelSequence levels(const FreePoint &lambda)
{
    return LevelSequence(lambda);
}

Term dyadic_tree(const FreePoint &rho)
{
    struct Run
    {
        std::string generator;
        unsigned long long end;
    };
    unsigned height = 0;
    for (const auto &[g, w] : rho.entries()) {
        if (!is_dyadic(w)) {
            throw DomainError("dyadic_tree: weight " + w.str() + " of '" + g + "' is not dyadic");
        }
        const auto den = w.denominator();
        height = std::max(height, static_cast<unsigned>(mpz_sizeinbase(den.get_mpz_t(), 2) - 1));
    }
    if (height > 62) {
        throw DomainError("dyadic_tree: denominators beyond 2^62");
    }
    std::vector<Run> runs;
    unsigned long long end = 0;
    for (const auto &[g, w] : rho.entries()) {
        if (w.is_zero()) {
            continue;
        }
        const mpz_class count = w.numerator() * (mpz_class(static_cast<unsigned long>(1ULL << height)) / w.denominator());
        end += count.get_ui();
        runs.push_back({g, end});
    }
    std::map<std::pair<std::size_t, unsigned>, Term> full;
    auto full_tree = [&](auto &self, std::size_t run, unsigned h) -> Term {
        if (auto it = full.find({run, h}); it != full.end()) {
            return it->second;
        }
        Term t = h == 0 ? Term::leaf(runs[run].generator) : [&] {
            Term sub = self(self, run, h - 1);
            return Term::pair(sub, sub);
        }();
        full.emplace(std::make_pair(run, h), t);
        return t;
    };
    auto build = [&](auto &self, unsigned long long offset, unsigned h) -> Term {
        const unsigned long long size = 1ULL << h;
        const auto run = static_cast<std::size_t>(
            std::upper_bound(runs.begin(), runs.end(), offset, [](unsigned long long o, const Run &r) { return o < r.end; }) -
            runs.begin());
        if (offset + size <= runs[run].end) {
            return full_tree(full_tree, run, h);
        }
        return Term::pair(self(self, offset, h - 1), self(self, offset + size / 2, h - 1));
    };
    return build(build, 0, height);
}

NormalForm to_term(const FreePoint &lambda)
{
    const LevelSequence seq(lambda);
    return NormalForm::from_levels(std::nullopt, [seq](std::size_t l) { return dyadic_tree(seq.rho_at(l)); });
}

} // namespace midpoint
