// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#include "midpoint/cli.hpp"

#include "midpoint/bodies.hpp"
#include "midpoint/checks.hpp"
#include "midpoint/expr.hpp"
#include "midpoint/free.hpp"
#include "midpoint/sdstream.hpp"
#include "midpoint/term.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace midpoint::cli
{

using nlohmann::ordered_json;

unsigned parse_tolerance(std::string_view text)
{
    constexpr std::string_view head = "2^-";
    if (text.substr(0, head.size()) != head || text.size() == head.size()) {
        throw ParseError("tolerance must look like 2^-n, got '" + std::string(text) + "'", 1, 1);
    }
    unsigned n = 0;
    for (std::size_t i = head.size(); i < text.size(); ++i) {
        const char c = text[i];
        if (c < '0' || c > '9' || n > 100000) {
            throw ParseError("tolerance must look like 2^-n, got '" + std::string(text) + "'", 1, i + 1);
        }
        n = n * 10 + static_cast<unsigned>(c - '0');
    }
    if (n == 0) {
        throw ParseError("tolerance exponent must be positive", 1, head.size() + 1);
    }
    return n;
}

namespace
{

struct Globals
{
    bool json = false;
    std::uint64_t seed = 1;
    unsigned digits = 32;
    std::string tol = "2^-40";
    bool unicode = false;
};

std::string read_source(const std::string &arg)
{
    std::ostringstream buf;
    if (arg == "-") {
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) {
        std::ifstream in(arg);
        buf << in.rdbuf();
        return buf.str();
    }
    return arg;
}

ordered_json enclosure_json(const DyadicInterval &e)
{
    return {{"lo", e.lo.str()}, {"hi", e.hi.str()}};
}

std::string interval_str(const DyadicInterval &e)
{
    return "[" + e.lo.str() + ", " + e.hi.str() + "]";
}

MinusStyle minus_style(const Globals &g)
{
    return g.unicode ? MinusStyle::unicode : MinusStyle::ascii;
}

void report_stream(std::ostream &out, const Globals &g, const std::string &label, const DigitStream &s, unsigned n)
{
    const auto enc = approx_value(s, Precision(n));
    const auto center = partial_sum(s, n).to_rational();
    const auto digits = print_digits(s, n, minus_style(g));
    const std::string err = "2^-" + std::to_string(n);
    if (g.json) {
        ordered_json j;
        j["input"] = label;
        j["digits"] = digits;
        j["precision"] = n;
        j["enclosure"] = enclosure_json(enc);
        j["value"] = center.str();
        j["error"] = err;
        j["decimal"] = center.decimal(n / 3 + 1);
        out << j.dump(2) << "\n";
        return;
    }
    out << "input:     " << label << "\n"
        << "digits:    " << digits << "\n"
        << "value:     " << center << " ± " << err << "\n"
        << "decimal:   " << center.decimal(n / 3 + 1) << " ± " << err << "\n"
        << "enclosure: " << interval_str(enc) << "\n";
}

int cmd_eval(std::ostream &out, const Globals &g, const std::string &expr, bool check_modulus)
{
    ExprOptions opt;
    opt.check_modulus = check_modulus;
    report_stream(out, g, expr, parse_expression(expr, opt), g.digits);
    return success;
}

int cmd_digits(std::ostream &out, const Globals &g, const std::string &direction, const std::string &payload,
               unsigned n)
{
    if (direction == "to") {
        const auto r = ExactRational::parse(payload);
        const auto s = from_rational(r);
        const auto digits = print_digits(s, n, minus_style(g));
        if (g.json) {
            out << ordered_json{{"rational", r.str()}, {"n", n}, {"digits", digits}}.dump(2) << "\n";
        } else {
            out << digits << "\n";
        }
        return success;
    }
    const auto s = parse_digits(payload);
    // Count code points, not bytes, so a unicode minus is one digit.
    unsigned len = 0;
    for (const unsigned char c : payload) {
        len += (c & 0xC0) != 0x80 ? 1 : 0;
    }
    const unsigned p = std::max(len, 1U);
    const auto enc = approx_value(s, Precision(p));
    const auto value = partial_sum(s, p).to_rational();
    if (g.json) {
        out << ordered_json{{"digits", payload}, {"value", value.str()}, {"enclosure", enclosure_json(enc)}}.dump(2)
            << "\n";
    } else {
        out << "value:     " << value << "\n"
            << "enclosure: " << interval_str(enc) << "\n";
    }
    return success;
}

template <class B>
Assignment<B> parse_assignment(const B &body, const std::string &text)
{
    Assignment<B> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find(',', start);
        if (end == std::string::npos) {
            end = text.size();
        }
        const std::string item = text.substr(start, end - start);
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ParseError("assignment entries look like g=value, got '" + item + "'", 1, start + 1);
        }
        out.insert_or_assign(item.substr(0, eq), body.embed(body.parse_sample(item.substr(eq + 1))));
        start = end + 1;
    }
    return out;
}

int cmd_term_weight(std::ostream &out, const Globals &g, const std::string &source)
{
    const Term t = parse_term(read_source(source));
    const WeightFunction w = weight(t);
    if (g.json) {
        out << ordered_json{{"term", print_term(t)}, {"weight", ordered_json::parse(w.to_json())}}.dump(2) << "\n";
    } else {
        out << w << "\n";
    }
    return success;
}

int cmd_term_flatten(std::ostream &out, const Globals &g, const std::string &source, unsigned levels)
{
    const Term t = parse_term(read_source(source));
    const NormalForm nf = normalize(t);
    ordered_json arr = ordered_json::array();
    for (unsigned l = 0; l < levels; ++l) {
        const Term lv = nf.level(l);
        if (g.json) {
            arr.push_back({{"level", l}, {"term", print_term(lv)}, {"weight", ordered_json::parse(weight(lv).to_json())}});
        } else {
            out << "level " << l << ": " << print_term(lv) << "\n";
        }
    }
    ordered_json truncated = ordered_json::object();
    for (const auto &[k, v] : truncated_weight(nf, levels)) {
        truncated[k] = v.str();
    }
    if (g.json) {
        out << ordered_json{{"term", print_term(t)}, {"levels", arr}, {"truncated_weight", truncated}}.dump(2) << "\n";
    } else {
        out << "truncated weight:";
        for (const auto &[k, v] : truncated_weight(nf, levels)) {
            out << " " << k << ":" << v;
        }
        out << "\n";
    }
    return success;
}

int cmd_term_eval(std::ostream &out, const Globals &g, const std::string &source, const std::string &body_spec,
                  const std::string &assign)
{
    const Term t = parse_term(read_source(source));
    const AnyBody body = parse_body(body_spec);
    const ExactRational tol = ExactRational::pow2(parse_tolerance(g.tol));
    ordered_json j;
    j["term"] = print_term(t);
    j["body"] = body_spec;
    j["tol"] = g.tol;
    std::visit(
        [&](const auto &b) {
            const auto a = parse_assignment(b, assign);
            const auto p = eval(t, a, b, tol);
            j["value"] = b.format_point(p);
            if constexpr (std::is_same_v<std::decay_t<decltype(b)>, IntervalBody>) {
                const auto e = approx_value(p, b.precision());
                j["decimal"] = mid(e.lo.to_rational(), e.hi.to_rational()).decimal(12);
            }
        },
        body);
    if (g.json) {
        out << j.dump(2) << "\n";
    } else {
        out << j["value"].get<std::string>();
        if (j.contains("decimal")) {
            out << "  ~ " << j["decimal"].get<std::string>();
        }
        out << "  (tol " << g.tol << ")\n";
    }
    return success;
}

int cmd_decompose(std::ostream &out, const Globals &g, const std::string &source, unsigned levels_count)
{
    const WeightFunction lambda = WeightFunction::from_json(read_source(source));
    const LevelSequence seq(lambda);
    const ExactRational residual = seq.residual(levels_count);
    const ExactRational bound = ExactRational::pow2(levels_count);
    const bool ok = residual <= bound;
    if (g.json) {
        ordered_json j;
        j["lambda"] = ordered_json::parse(lambda.to_json());
        ordered_json arr = ordered_json::array();
        for (unsigned l = 0; l < levels_count; ++l) {
            arr.push_back({{"level", l},
                           {"rho", ordered_json::parse(seq.rho_at(l).to_json())},
                           {"steps", seq.steps_at(l)}});
        }
        j["levels"] = arr;
        ordered_json recon = ordered_json::object();
        for (const auto &[k, v] : seq.reconstruction(levels_count)) {
            recon[k] = v.str();
        }
        j["reconstruction"] = recon;
        j["residual"] = residual.str();
        j["bound"] = "2^-" + std::to_string(levels_count);
        j["within_bound"] = ok;
        out << j.dump(2) << "\n";
    } else {
        for (unsigned l = 0; l < levels_count; ++l) {
            const std::size_t steps = seq.steps_at(l);
            out << "level " << l << ": " << seq.rho_at(l) << "  (" << steps << (steps == 1 ? " step)\n" : " steps)\n");
        }
        out << "residual: " << residual << (ok ? " <= " : " > ") << "2^-" << levels_count << "\n";
    }
    return ok ? success : check_failed;
}

int cmd_check(std::ostream &out, const Globals &g, std::string suite, const std::string &body_spec,
              std::size_t samples, unsigned max_depth)
{
    if (suite == "approx") {
        suite = "approximation";
    }
    CheckOptions opt;
    opt.samples = samples;
    opt.seed = g.seed;
    opt.tol = ExactRational::pow2(parse_tolerance(g.tol));
    opt.max_depth = max_depth;
    const CheckOutcome outcome = run_check(parse_body(body_spec), suite, opt);
    const CheckReport &r = outcome.report;
    if (g.json) {
        out << outcome.to_json().dump(2) << "\n";
    } else {
        out << r.suite << " on " << r.body << ": " << (r.pass() ? "PASS" : "FAIL");
        if (outcome.expected_failure) {
            out << (outcome.expectation_met() ? " (expected, counterexample found)" : " (expected a counterexample)");
        }
        out << "  seed " << r.seed << ", " << r.samples << " samples, tol " << g.tol << "\n";
        for (const auto &p : r.properties) {
            out << "  " << p.name << ": max violation " << p.max_violation << " over " << p.evaluated
                << " evaluations, " << (p.pass() ? "ok" : "exceeds tolerance") << "\n";
        }
        if (r.counterexample) {
            out << "  counterexample: " << r.counterexample->dump() << "\n";
        }
    }
    return outcome.expectation_met() ? success : check_failed;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app("Exact midpoint algebra: signed-digit streams, convex bodies, term normal forms", "midpoint");
    app.require_subcommand(1);
    Globals g;
    app.add_flag("--json", g.json, "Machine-readable output");
    app.add_option("--seed", g.seed, "Seed for sampled checks")->capture_default_str();
    app.add_option("--digits", g.digits, "Output digits")->capture_default_str()->check(CLI::Range(1U, 100000U));
    app.add_option("--tol", g.tol, "Tolerance as 2^-n")->capture_default_str();
    app.add_flag("--unicode", g.unicode, "Print the minus digit as U+2212");

    int code = success;
    auto guarded = [&](auto fn) {
        return [&code, fn] { code = fn(); };
    };

    auto *eval = app.add_subcommand("eval", "Evaluate an expression to --digits digits")->fallthrough();
    std::string expr;
    bool check_modulus = false;
    eval->add_option("expr", expr, "Expression, e.g. \"mul(1/3, 1/2)\"")->required();
    eval->add_flag("--check-modulus", check_modulus, "Check the limit modulus on listed elements");
    eval->callback(guarded([&] { return cmd_eval(out, g, expr, check_modulus); }));

    auto *digits = app.add_subcommand("digits", "Convert between rationals and digit strings")->fallthrough();
    std::string direction;
    std::string payload;
    unsigned n = 0;
    digits->add_option("direction", direction, "to | from")->required()->check(CLI::IsMember({"to", "from"}));
    digits->add_option("payload", payload, "Rational (to) or digit string (from)")->required();
    digits->add_option("-n,--n,--count", n, "Digits to print (default --digits)");
    digits->callback(guarded([&] { return cmd_digits(out, g, direction, payload, n == 0 ? g.digits : n); }));

    auto *term = app.add_subcommand("term", "Term algebra tools")->fallthrough()->require_subcommand(1);
    std::string source;
    unsigned levels = 4;
    std::string body_spec = "interval";
    std::string assign;
    auto *tweight = term->add_subcommand("weight", "Exact weight of a term")->fallthrough();
    tweight->add_option("source", source, "Term file, '-' for stdin, or term text")->required();
    tweight->callback(guarded([&] { return cmd_term_weight(out, g, source); }));
    auto *tflatten = term->add_subcommand("flatten", "Normal-form levels")->fallthrough();
    tflatten->add_option("source", source, "Term file, '-' for stdin, or term text")->required();
    tflatten->add_option("--levels", levels, "Levels to print")->capture_default_str();
    tflatten->callback(guarded([&] { return cmd_term_flatten(out, g, source, levels); }));
    auto *teval = term->add_subcommand("eval", "Evaluate a term in a body")->fallthrough();
    teval->add_option("source", source, "Term file, '-' for stdin, or term text")->required();
    teval->add_option("--body", body_spec, "interval | simplex:N | euclid:K:R | lshape")->capture_default_str();
    teval->add_option("--assign", assign, "Generator images, e.g. a=1,b=-1")->required();
    teval->callback(guarded([&] { return cmd_term_eval(out, g, source, body_spec, assign); }));

    auto *decomp = app.add_subcommand("decompose", "Greedy dyadic levels of a weight function")->fallthrough();
    unsigned dlevels = 8;
    decomp->add_option("source", source, "Weight JSON file, '-' for stdin, or JSON text")->required();
    decomp->add_option("--levels", dlevels, "Levels L")->capture_default_str();
    decomp->callback(guarded([&] { return cmd_decompose(out, g, source, dlevels); }));

    auto *check = app.add_subcommand("check", "Run a property suite")->fallthrough();
    std::string suite;
    std::size_t samples = 1000;
    unsigned max_depth = 12;
    check->add_option("suite", suite, "axioms | cancellation | approx | flatten | universal | completeness")->required();
    check->add_option("--body", body_spec, "interval | simplex:N | euclid:K:R | lshape")->capture_default_str();
    check->add_option("--samples", samples, "Samples")->capture_default_str();
    check->add_option("--max-depth", max_depth, "Longest prefix for approx")->capture_default_str();
    check->callback(guarded([&] { return cmd_check(out, g, suite, body_spec, samples, max_depth); }));

    try {
        app.parse(argc, argv);
    } catch (const CLI::Error &e) {
        return app.exit(e, out, err) == 0 ? success : usage_error;
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << "\n";
        return usage_error;
    } catch (const DomainError &e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    }
    return code;
}

} // namespace midpoint::cli
