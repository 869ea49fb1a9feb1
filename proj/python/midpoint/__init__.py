# SPDX-License-Identifier: Apache-2.0
# Copyright 2026 The midpoint authors

"""Exact signed-digit arithmetic on [-1, 1], midpoint terms and convex-body checks.

Rationals cross the boundary as :class:`fractions.Fraction`; anything
``Fraction`` accepts (int, str such as ``"1/3"``) is also taken.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Tuple, Union

from . import _core
from ._core import (
    DomainError,
    ParseError,
    Stream,
    bigmid,
    cc,
    check_suites,
    limit,
    mid,
    mul,
    neg,
    parse_digits,
    parse_expression,
    tadd,
    tdouble,
    tsub,
)

RationalLike = Union[Fraction, int, str]

__all__ = [
    "DomainError",
    "ParseError",
    "Stream",
    "bigmid",
    "cc",
    "check",
    "check_suites",
    "decompose",
    "enclosure",
    "from_rational",
    "levels",
    "limit",
    "mid",
    "mul",
    "neg",
    "parse_digits",
    "parse_expression",
    "normalize_term",
    "streams",
    "tadd",
    "tdouble",
    "tsub",
    "weight",
]


def _text(r: RationalLike) -> str:
    f = Fraction(r)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _weights_in(w: Mapping[str, RationalLike]) -> str:
    return json.dumps({k: _text(v) for k, v in w.items()})


def _weights_out(text: str) -> Dict[str, Fraction]:
    return {k: Fraction(v) for k, v in json.loads(text).items()}


def from_rational(r: RationalLike) -> Stream:
    return _core.from_rational(_text(r))


def enclosure(s: Stream, n: int) -> Tuple[Fraction, Fraction]:
    """Bounds on the value of ``s`` from its first ``n`` digits."""
    lo, hi = s.enclosure(n)
    return Fraction(lo), Fraction(hi)


def normalize_term(text: str) -> str:
    return _core.term_normalize(text)


def weight(term: str) -> Dict[str, Fraction]:
    return _weights_out(_core.term_weight(term))


def decompose(lam: Mapping[str, RationalLike]) -> Tuple[Dict[str, Fraction], Dict[str, Fraction], int]:
    """Greedy split lam = (rho + mu) / 2 with rho dyadic."""
    rho, mu, steps = _core.decompose(_weights_in(lam))
    return _weights_out(rho), _weights_out(mu), steps


def levels(lam: Mapping[str, RationalLike], count: int) -> Tuple[List[Dict[str, Fraction]], Fraction]:
    """The first ``count`` dyadic levels of lam and the reconstruction residual."""
    rho, residual = _core.levels(_weights_in(lam), count)
    return [_weights_out(r) for r in rho], Fraction(residual)


def check(
    suite: str,
    body: str = "interval",
    samples: int = 1000,
    seed: int = 1,
    tol_exp: int = 40,
    max_depth: int = 12,
) -> dict:
    """Runs a property suite and returns its JSON report as a dict."""
    return json.loads(_core.run_check(body, suite, samples, seed, tol_exp, max_depth))


def streams(values: Iterable[RationalLike]) -> List[Stream]:
    return [from_rational(v) for v in values]
