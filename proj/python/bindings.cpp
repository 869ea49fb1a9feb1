// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#include "midpoint/checks.hpp"
#include "midpoint/expr.hpp"
#include "midpoint/free.hpp"
#include "midpoint/sdstream.hpp"
#include "midpoint/term.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace midpoint;

namespace
{

ExactRational rational(const std::string &text)
{
    return ExactRational::parse(text);
}

std::vector<DigitStream> streams(const std::vector<DigitStream> &xs)
{
    if (xs.empty()) {
        throw DomainError("sequence needs at least one element");
    }
    return xs;
}

StreamSequence list_then(std::vector<DigitStream> xs, DigitStream tail)
{
    return [xs = std::move(xs), tail = std::move(tail)](std::size_t i) { return i < xs.size() ? xs[i] : tail; };
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Exact signed-digit arithmetic, midpoint term algebra and convex-body checks.";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    py::class_<DigitStream>(m, "Stream")
        .def(py::init<>())
        .def("digit", [](const DigitStream &s, std::size_t i) { return to_int(s.at(i)); })
        .def("digits", [](const DigitStream &s, std::size_t n, bool unicode) {
                return print_digits(s, n, unicode ? MinusStyle::unicode : MinusStyle::ascii);
            },
            py::arg("n"), py::arg("unicode") = false)
        .def("enclosure", [](const DigitStream &s, unsigned n) {
                const auto iv = approx_value(s, Precision(n));
                return std::make_pair(iv.lo.str(), iv.hi.str());
            },
            py::arg("n"), "(lo, hi) as rational strings; the value lies within.")
        .def("computed", &DigitStream::computed);

    m.def("from_rational", [](const std::string &r) { return from_rational(rational(r)); }, py::arg("r"));
    m.def("parse_digits", &parse_digits, py::arg("text"));
    m.def("parse_expression", [](const std::string &text, bool check_modulus) {
            ExprOptions opt;
            opt.check_modulus = check_modulus;
            return parse_expression(text, opt);
        },
        py::arg("text"), py::arg("check_modulus") = false);

    m.def("neg", &neg);
    m.def("mid", py::overload_cast<const DigitStream &, const DigitStream &>(&mid));
    m.def("tadd", &tadd);
    m.def("tsub", &tsub);
    m.def("tdouble", &tdouble);
    m.def("mul", &mul);
    m.def("cc", &cc);
    m.def("bigmid", [](const std::vector<DigitStream> &xs, const DigitStream &tail) {
            return bigmid(list_then(streams(xs), tail));
        },
        py::arg("xs"), py::arg("tail") = DigitStream());
    m.def("limit", [](const std::vector<DigitStream> &xs, const DigitStream &tail) {
            return limit(list_then(streams(xs), tail));
        },
        py::arg("xs"), py::arg("tail") = DigitStream());

    m.def("term_normalize", [](const std::string &text) { return print_term(parse_term(text)); });
    m.def("term_weight", [](const std::string &text) { return weight(parse_term(text)).to_json(); });

    m.def("decompose", [](const std::string &lambda) {
        const auto d = decompose(WeightFunction::from_json(lambda));
        return py::make_tuple(d.rho.to_json(), d.mu.to_json(), d.steps);
    });
    m.def("levels", [](const std::string &lambda, std::size_t count) {
        const auto seq = levels(WeightFunction::from_json(lambda));
        std::vector<std::string> rho;
        for (std::size_t l = 0; l < count; ++l) {
            rho.push_back(seq.rho_at(l).to_json());
        }
        return py::make_tuple(rho, seq.residual(count).str());
    });

    m.def("check_suites", &check_suites);
    m.def("run_check", [](const std::string &body, const std::string &suite, std::size_t samples,
                          std::uint64_t seed, long tol_exp, unsigned max_depth) {
            const AnyBody b = parse_body(body);
            CheckOptions opt;
            opt.samples = samples;
            opt.seed = seed;
            opt.tol = ExactRational::pow2(tol_exp);
            opt.max_depth = max_depth;
            py::gil_scoped_release release;
            return run_check(b, suite, opt).to_json().dump();
        },
        py::arg("body"), py::arg("suite"), py::arg("samples") = 1000, py::arg("seed") = 1,
        py::arg("tol_exp") = 40, py::arg("max_depth") = 12);
}
