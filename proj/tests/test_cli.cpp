// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#include "midpoint/cli.hpp"
#include "midpoint/exact.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace
{

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "midpoint");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = midpoint::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Result &r)
{
    return nlohmann::json::parse(r.out);
}

} // namespace

TEST_CASE("tolerance syntax")
{
    CHECK(midpoint::cli::parse_tolerance("2^-40") == 40);
    CHECK(midpoint::cli::parse_tolerance("2^-1") == 1);
    CHECK_THROWS_AS(midpoint::cli::parse_tolerance("0.001"), midpoint::ParseError);
    CHECK_THROWS_AS(midpoint::cli::parse_tolerance("2^-"), midpoint::ParseError);
    CHECK_THROWS_AS(midpoint::cli::parse_tolerance("2^-0"), midpoint::ParseError);
}

TEST_CASE("eval")
{
    const auto r = run({"--json", "eval", "mid(1, -1)", "--digits", "8"});
    REQUIRE(r.code == 0);
    const auto j = json_of(r);
    CHECK(j["digits"] == "00000000");
    CHECK(j["value"] == "0");
    CHECK(j["error"] == "2^-8");
    const auto m = json_of(run({"--json", "eval", "mul(1/3, 1/2)", "--digits", "30"}));
    const auto lo = midpoint::ExactRational::parse(m["enclosure"]["lo"].get<std::string>());
    const auto hi = midpoint::ExactRational::parse(m["enclosure"]["hi"].get<std::string>());
    CHECK(lo <= midpoint::ExactRational(1, 6));
    CHECK(midpoint::ExactRational(1, 6) <= hi);
    const auto text = run({"eval", "tdouble(3/4)", "--digits", "8"});
    CHECK(text.code == 0);
    CHECK(text.out.find("tdouble(3/4)") != std::string::npos);
    CHECK(json_of(run({"--json", "eval", "bigmid[1, -1; tail 0]", "--digits", "6"}))["value"] == "1/4");
}

TEST_CASE("eval rejects malformed input with exit code 2")
{
    for (const char *bad : {"mid(1", "3/2", "foo(1)", "mid(1, 2, 3)", ""}) {
        const auto r = run({"eval", bad});
        CHECK(r.code == 2);
        CHECK_FALSE(r.err.empty());
    }
    CHECK(run({"eval", "limit[1, 1/2, 1/4; tail 0]", "--check-modulus"}).code == 2);
    CHECK(run({"eval", "limit[1/2, 1/2; tail 1/2]", "--check-modulus"}).code == 0);
}

TEST_CASE("digits")
{
    CHECK(json_of(run({"--json", "digits", "to", "1/3", "--n", "6"}))["digits"] == "0+0+0+");
    CHECK(run({"digits", "to", "0", "-n", "4"}).out.find("0000") != std::string::npos);
    CHECK(json_of(run({"--json", "digits", "from", "+-"}))["value"] == "1/4");
    CHECK(json_of(run({"--json", "digits", "from", "+−"}))["value"] == "1/4");
    const auto u = run({"--unicode", "digits", "to", "-1", "--n", "2"});
    CHECK(u.out.find("−−") != std::string::npos);
    const auto bad = run({"digits", "from", "+x"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("2") != std::string::npos);
}

TEST_CASE("term commands")
{
    const auto w = json_of(run({"--json", "term", "weight", "(mid a b)"}));
    CHECK(w["weight"]["a"] == "1/2");
    CHECK(w["weight"]["b"] == "1/2");
    const auto e = run({"--json", "term", "eval", "(seq periodic [] [a b])", "--body", "interval", "--assign",
                        "a=1,b=-1", "--tol", "2^-20"});
    REQUIRE(e.code == 0);
    const auto ej = json_of(e);
    CHECK(ej.contains("value"));
    const auto f = run({"term", "flatten", "(seq periodic [(seq periodic [] [a])] [(mid b c)])", "--levels", "3"});
    CHECK(f.code == 0);
    CHECK_FALSE(f.out.empty());
    CHECK(run({"term", "weight", "(mid a"}).code == 2);
    CHECK(run({"term", "eval", "(mid a b)", "--body", "interval", "--assign", "a=1"}).code == 2);

    const auto path = std::filesystem::temp_directory_path() / "midpoint_cli_term.txt";
    {
        std::ofstream os(path);
        os << "(seq periodic [] [a b])\n";
    }
    const auto fromfile = json_of(run({"--json", "term", "weight", path.string()}));
    CHECK(fromfile["weight"]["a"] == "2/3");
    std::filesystem::remove(path);
}

TEST_CASE("decompose")
{
    const auto r = run({"--json", "decompose", R"({"a":"1/3","b":"2/3"})", "--levels", "20"});
    REQUIRE(r.code == 0);
    const auto j = json_of(r);
    CHECK(j["levels"].size() == 20);
    CHECK(j["levels"][0]["rho"]["b"] == "1");
    CHECK(j["within_bound"] == true);
    const auto residual = midpoint::ExactRational::parse(j["residual"].get<std::string>());
    CHECK(residual <= midpoint::ExactRational::pow2(20));
    CHECK(run({"decompose", R"({"a":"1/3"})"}).code == 2);
    CHECK(run({"decompose", "{"}).code == 2);
}

TEST_CASE("check exit codes")
{
    CHECK(run({"check", "axioms", "--body", "simplex:2", "--samples", "20"}).code == 0);
    CHECK(run({"check", "cancellation", "--body", "lshape", "--samples", "50"}).code == 0);
    CHECK(run({"check", "approx", "--body", "euclid:2:1", "--samples", "10"}).code == 0);
    CHECK(run({"check", "nope", "--body", "interval"}).code == 2);
    CHECK(run({"check", "axioms", "--body", "circle"}).code == 2);
    CHECK(run({"check", "axioms", "--samples", "x"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--tol", "0.1", "check", "axioms"}).code == 2);
}

TEST_CASE("reports are deterministic for a fixed seed")
{
    const std::vector<std::string> args{"--json", "--seed", "11", "check", "flatten", "--body", "euclid:2:1",
                                        "--samples", "15", "--tol", "2^-30"};
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(json_of(a)["seed"] == 11);
    auto other = args;
    other[2] = "12";
    CHECK(json_of(run(other))["seed"] == 12);
}
