// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#include "midpoint/term.hpp"

#include <cctype>
#include <mutex>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <variant>

namespace midpoint
{

namespace detail
{

struct TermNode
{
    struct Pair
    {
        Term left;
        Term right;
    };
    std::variant<std::string, Pair, SeqSpec> body;
};

struct NormalFormImpl
{
    explicit NormalFormImpl(std::optional<Term> src) : source(std::move(src)) {}
    virtual ~NormalFormImpl() = default;

    Term level(std::size_t l)
    {
        std::lock_guard guard(lock);
        while (levels.size() <= l) {
            levels.push_back(compute(levels.size()));
        }
        return levels[l];
    }

    virtual Term compute(std::size_t l) = 0;

    static NormalForm make(std::shared_ptr<NormalFormImpl> impl) { return NormalForm(std::move(impl)); }

    std::optional<Term> source;
    std::mutex lock;
    std::vector<Term> levels;
};

} // namespace detail

namespace
{

class ConstantLevels final : public detail::NormalFormImpl
{
public:
    explicit ConstantLevels(Term t) : NormalFormImpl(t), value_(std::move(t)) {}
    Term compute(std::size_t) override { return value_; }

private:
    Term value_;
};

class PairedLevels final : public detail::NormalFormImpl
{
public:
    PairedLevels(Term src, NormalForm a, NormalForm b)
        : NormalFormImpl(std::move(src)), a_(std::move(a)), b_(std::move(b))
    {
    }
    Term compute(std::size_t l) override { return Term::pair(a_.level(l), b_.level(l)); }

private:
    NormalForm a_, b_;
};

class DiagonalLevels final : public detail::NormalFormImpl
{
public:
    DiagonalLevels(Term src, std::vector<NormalForm> slots)
        : NormalFormImpl(std::move(src)), slots_(std::move(slots))
    {
    }

    Term compute(std::size_t l) override
    {
        const SeqSpec &seq = source->seq();
        auto u = [&](std::size_t m, std::size_t n) { return slots_[seq.slot_of(m)].level(n); };
        std::vector<Term> column;
        std::vector<Term> row;
        for (std::size_t k = 0; k <= l; ++k) {
            column.push_back(u(k, l + 1));
            row.push_back(u(l + 1, k));
        }
        const Term diag = u(l, l);
        column.push_back(diag);
        row.push_back(diag);
        return Term::pair(chain_pairs(column), chain_pairs(row));
    }

private:
    std::vector<NormalForm> slots_;
};

class FunctionLevels final : public detail::NormalFormImpl
{
public:
    FunctionLevels(std::optional<Term> src, std::function<Term(std::size_t)> f) : NormalFormImpl(std::move(src)), f_(std::move(f)) {}
    Term compute(std::size_t l) override { return f_(l); }

private:
    std::function<Term(std::size_t)> f_;
};

const Term &slot_term(const SeqSpec &seq, std::size_t s)
{
    return s < seq.prefix.size() ? seq.prefix[s] : seq.cycle[s - seq.prefix.size()];
}

class WeightMemo
{
public:
    WeightFunction operator()(const Term &t)
    {
        if (auto it = memo_.find(t.id()); it != memo_.end()) {
            return it->second;
        }
        WeightFunction w = compute(t);
        memo_.emplace(t.id(), w);
        return w;
    }

private:
    WeightFunction compute(const Term &t)
    {
        switch (t.kind()) {
        case Term::Kind::leaf:
            return WeightFunction::dirac(t.generator());
        case Term::Kind::pair: {
            const WeightFunction half({{"l", ExactRational(1, 2)}, {"r", ExactRational(1, 2)}});
            const std::vector<WeightFunction> rows{(*this)(t.left()), (*this)(t.right())};
            return weight_combine(half, rows);
        }
        case Term::Kind::omega:
            break;
        }
        const SeqSpec &seq = t.seq();
        const auto lead = static_cast<long>(seq.prefix.size());
        const auto period = static_cast<long>(seq.cycle.size());
        // Element i has weight 2^-(i+1).  A cycle slot r collects
        // sum_k 2^-(L + r + k*|c| + 1) = 2^-(L+r+1) / (1 - 2^-|c|).
        const ExactRational cycle_factor = ExactRational(1) / (ExactRational(1) - ExactRational::pow2(period));
        std::vector<WeightFunction::Entry> lambda;
        std::vector<WeightFunction> rows;
        for (std::size_t s = 0; s < seq.slots(); ++s) {
            const auto si = static_cast<long>(s);
            ExactRational w = ExactRational::pow2(si + 1);
            if (si >= lead) {
                w *= cycle_factor;
            }
            lambda.emplace_back("s" + std::to_string(s), w);
            rows.push_back((*this)(slot_term(seq, s)));
        }
        return weight_combine(WeightFunction(std::move(lambda)), rows);
    }

    std::unordered_map<const void *, WeightFunction> memo_;
};

class Substituter
{
public:
    explicit Substituter(const Substitution &sigma) : sigma_(sigma) {}

    Term operator()(const Term &t)
    {
        if (auto it = memo_.find(t.id()); it != memo_.end()) {
            return it->second;
        }
        Term out = compute(t);
        memo_.emplace(t.id(), out);
        return out;
    }

private:
    Term compute(const Term &t)
    {
        switch (t.kind()) {
        case Term::Kind::leaf: {
            auto it = sigma_.find(t.generator());
            if (it == sigma_.end()) {
                throw DomainError("substitution undefined on generator '" + t.generator() + "'");
            }
            return it->second;
        }
        case Term::Kind::pair:
            return Term::pair((*this)(t.left()), (*this)(t.right()));
        case Term::Kind::omega:
            break;
        }
        SeqSpec seq;
        for (const auto &p : t.seq().prefix) {
            seq.prefix.push_back((*this)(p));
        }
        for (const auto &c : t.seq().cycle) {
            seq.cycle.push_back((*this)(c));
        }
        return Term::omega(std::move(seq));
    }

    const Substitution &sigma_;
    std::unordered_map<const void *, Term> memo_;
};

class Normalizer
{
public:
    NormalForm operator()(const Term &t)
    {
        if (auto it = memo_.find(t.id()); it != memo_.end()) {
            return it->second;
        }
        NormalForm nf = compute(t);
        memo_.emplace(t.id(), nf);
        return nf;
    }

    static NormalForm wrap(std::shared_ptr<detail::NormalFormImpl> impl);

private:
    NormalForm compute(const Term &t);

    std::unordered_map<const void *, NormalForm> memo_;
};

// Recursive descent over a token stream with 1-based line/column tracking.
class TermParser
{
public:
    explicit TermParser(std::string_view text) : text_(text) {}

    Term parse_all()
    {
        Term t = parse_one();
        skip_space();
        if (pos_ < text_.size()) {
            fail("unexpected trailing input");
        }
        return t;
    }

private:
    [[noreturn]] void fail(const std::string &msg) const { throw ParseError(msg, line_, column_); }

    void advance()
    {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
            ++column_;
        }
        ++pos_;
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) {
            advance();
        }
    }

    static bool ident_char(char c)
    {
        const auto u = static_cast<unsigned char>(c);
        return u >= 0x80 || std::isalnum(u) != 0 || c == '_' || c == '.' || c == '\'';
    }

    bool peek(char c)
    {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    void expect(char c)
    {
        if (!peek(c)) {
            fail(std::string("expected '") + c + "'");
        }
        advance();
    }

    std::string ident()
    {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) {
            advance();
        }
        if (start == pos_) {
            fail(pos_ < text_.size() ? std::string("unexpected '") + text_[pos_] + "'" : "unexpected end of input");
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    Term parse_one()
    {
        if (!peek('(')) {
            return Term::leaf(ident());
        }
        advance();
        const std::size_t line = line_;
        const std::size_t col = column_;
        const std::string head = ident();
        if (head == "mid") {
            Term a = parse_one();
            Term b = parse_one();
            expect(')');
            return Term::pair(std::move(a), std::move(b));
        }
        if (head == "seq") {
            if (ident() != "periodic") {
                fail("expected 'periodic'");
            }
            SeqSpec seq;
            seq.prefix = parse_list();
            seq.cycle = parse_list();
            if (seq.cycle.empty()) {
                fail("periodic part must be non-empty");
            }
            expect(')');
            return Term::omega(std::move(seq));
        }
        throw ParseError("unknown form '" + head + "'", line, col);
    }

    std::vector<Term> parse_list()
    {
        expect('[');
        std::vector<Term> out;
        while (!peek(']')) {
            if (pos_ >= text_.size()) {
                fail("unterminated list");
            }
            out.push_back(parse_one());
        }
        advance();
        return out;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

void print_into(std::ostream &os, const Term &t)
{
    switch (t.kind()) {
    case Term::Kind::leaf:
        os << t.generator();
        return;
    case Term::Kind::pair:
        os << "(mid ";
        print_into(os, t.left());
        os << ' ';
        print_into(os, t.right());
        os << ')';
        return;
    case Term::Kind::omega:
        break;
    }
    auto list = [&](const std::vector<Term> &xs) {
        os << '[';
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i > 0) {
                os << ' ';
            }
            print_into(os, xs[i]);
        }
        os << ']';
    };
    os << "(seq periodic ";
    list(t.seq().prefix);
    os << ' ';
    list(t.seq().cycle);
    os << ')';
}

} // namespace

Term Term::leaf(std::string generator)
{
    if (generator.empty()) {
        throw DomainError("empty generator name");
    }
    return Term(std::make_shared<const detail::TermNode>(detail::TermNode{std::move(generator)}));
}

Term Term::pair(Term left, Term right)
{
    return Term(std::make_shared<const detail::TermNode>(
        detail::TermNode{detail::TermNode::Pair{std::move(left), std::move(right)}}));
}

Term Term::omega(SeqSpec seq)
{
    if (seq.cycle.empty()) {
        throw DomainError("infinitary node needs a non-empty periodic part");
    }
    return Term(std::make_shared<const detail::TermNode>(detail::TermNode{std::move(seq)}));
}

Term::Kind Term::kind() const noexcept
{
    return static_cast<Kind>(node_->body.index());
}

const std::string &Term::generator() const
{
    return std::get<std::string>(node_->body);
}

const Term &Term::left() const
{
    return std::get<detail::TermNode::Pair>(node_->body).left;
}

const Term &Term::right() const
{
    return std::get<detail::TermNode::Pair>(node_->body).right;
}

const SeqSpec &Term::seq() const
{
    return std::get<SeqSpec>(node_->body);
}

std::vector<std::string> generators(const Term &t)
{
    std::vector<std::string> out;
    std::unordered_map<const void *, bool> seen;
    std::function<void(const Term &)> walk = [&](const Term &u) {
        if (!seen.emplace(u.id(), true).second) {
            return;
        }
        switch (u.kind()) {
        case Term::Kind::leaf:
            if (std::find(out.begin(), out.end(), u.generator()) == out.end()) {
                out.push_back(u.generator());
            }
            return;
        case Term::Kind::pair:
            walk(u.left());
            walk(u.right());
            return;
        case Term::Kind::omega:
            for (const auto &p : u.seq().prefix) {
                walk(p);
            }
            for (const auto &c : u.seq().cycle) {
                walk(c);
            }
            return;
        }
    };
    walk(t);
    return out;
}

unsigned omega_depth(const Term &t)
{
    std::unordered_map<const void *, unsigned> memo;
    std::function<unsigned(const Term &)> depth = [&](const Term &u) -> unsigned {
        if (auto it = memo.find(u.id()); it != memo.end()) {
            return it->second;
        }
        unsigned d = 0;
        switch (u.kind()) {
        case Term::Kind::leaf:
            break;
        case Term::Kind::pair:
            d = std::max(depth(u.left()), depth(u.right()));
            break;
        case Term::Kind::omega:
            for (std::size_t s = 0; s < u.seq().slots(); ++s) {
                d = std::max(d, depth(slot_term(u.seq(), s)));
            }
            ++d;
            break;
        }
        memo.emplace(u.id(), d);
        return d;
    };
    return depth(t);
}

bool is_finite(const Term &t)
{
    return omega_depth(t) == 0;
}

WeightFunction weight(const Term &t)
{
    WeightMemo memo;
    return memo(t);
}

Term subst(const Substitution &sigma, const Term &t)
{
    Substituter s(sigma);
    return s(t);
}

Term NormalForm::level(std::size_t l) const
{
    return impl_->level(l);
}

const std::optional<Term> &NormalForm::source() const
{
    return impl_->source;
}

NormalForm NormalForm::from_levels(std::optional<Term> source, std::function<Term(std::size_t)> levels)
{
    return detail::NormalFormImpl::make(std::make_shared<FunctionLevels>(std::move(source), std::move(levels)));
}

NormalForm Normalizer::wrap(std::shared_ptr<detail::NormalFormImpl> impl)
{
    return detail::NormalFormImpl::make(std::move(impl));
}

NormalForm Normalizer::compute(const Term &t)
{
    switch (t.kind()) {
    case Term::Kind::leaf:
        return wrap(std::make_shared<ConstantLevels>(t));
    case Term::Kind::pair:
        return wrap(std::make_shared<PairedLevels>(t, (*this)(t.left()), (*this)(t.right())));
    case Term::Kind::omega:
        break;
    }
    std::vector<NormalForm> slots;
    for (std::size_t s = 0; s < t.seq().slots(); ++s) {
        slots.push_back((*this)(slot_term(t.seq(), s)));
    }
    return wrap(std::make_shared<DiagonalLevels>(t, std::move(slots)));
}

NormalForm normalize(const Term &t)
{
    Normalizer n;
    return n(t);
}

std::map<std::string, ExactRational> truncated_weight(const NormalForm &nf, std::size_t levels)
{
    std::map<std::string, ExactRational> out;
    for (std::size_t l = 0; l < levels; ++l) {
        const ExactRational scale = ExactRational::pow2(static_cast<long>(l) + 1);
        const WeightFunction level_weight = weight(nf.level(l));
        for (const auto &[g, w] : level_weight.entries()) {
            out[g] += scale * w;
        }
    }
    return out;
}

Term parse_term(std::string_view text)
{
    TermParser p(text);
    return p.parse_all();
}

std::string print_term(const Term &t)
{
    std::ostringstream os;
    print_into(os, t);
    return os.str();
}

Term chain_pairs(std::span<const Term> xs)
{
    if (xs.empty()) {
        throw DomainError("chain_pairs needs at least one term");
    }
    Term acc = xs.back();
    for (std::size_t i = xs.size() - 1; i-- > 0;) {
        acc = Term::pair(xs[i], acc);
    }
    return acc;
}

} // namespace midpoint
