// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The midpoint authors

#pragma once

#include "midpoint/sdstream.hpp"

#include <string_view>

namespace midpoint
{

struct ExprOptions
{
    /// Verify |a_{i+1} - a_i| <= 2^-(i+1) on the listed part of every
    /// limit sequence by comparing enclosures at `modulus_precision`.
    bool check_modulus = false;
    Precision modulus_precision = Precision(64);
};

/// Grammar (whitespace-insensitive):
///     expr := rational
///           | neg(expr) | tdouble(expr)
///           | mid(expr, expr) | mul(expr, expr) | tadd(expr, expr) | tsub(expr, expr)
///           | cc(expr, expr, expr)
///           | bigmid[expr, ... (; tail expr)?]
///           | limit[expr, ... (; tail expr)?]
/// A bracketed list denotes the sequence of its elements followed by the
/// tail (default 0) repeated.  Literals are "p" or "p/q" in [-1,1].
/// Throws ParseError with the column of the offending token.
DigitStream parse_expression(std::string_view text, const ExprOptions &opt = {});

} // namespace midpoint
