"""Worked matrix pairs and random pair generators.

Three named models ship as JSON under ``sqso/models``:

``weak-example``
    A weakly admissible pair whose operator is
    ``(x2^2, x1 (x1 + 2 x2 + 2 x3), x3 (2 x2 + x3))``.
``y-family``
    Template ``y_family_pair(b, y)``: A rows ``(b, y_i, 1 - y_i)``,
    B rows ``(0, 1, 1), (0, 1, 1), (1/(2b), 1/2, 1/2)``; admissible for
    ``b > 0`` and ``y_i in [0, 1]``.  Shipped with ``b = 1``, ``y = (0, 1/2, 1)``.
``b-family``
    Template ``b_family_pair(b)``: fixed A with rows ``(1, 0, 0)``,
    ``(1/3, 1/2, 1/4)``, ``(2/3, 1/4, 1/8)`` and B rows
    ``(1, (8 - 3 b_j)/6, b_j)``; admissible for ``2/3 <= b_j <= 1``.
    Shipped with ``b = (2/3, 5/6, 1)``.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from typing import Sequence

import numpy as np

from .numerics import RationalMatrix, rat_format, rat_parse
from .operators import SqsoPair, validate_pair

F = Fraction

B_FAMILY_A = RationalMatrix.from_rows([[1, 0, 0], ["1/3", "1/2", "1/4"], ["2/3", "1/4", "1/8"]])
WEAK_A = RationalMatrix.from_rows([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
WEAK_B = RationalMatrix.from_rows([[0, 1, 0], [1, 2, 2], [0, 2, 1]])


def b_family_factor(b: Sequence) -> RationalMatrix:
    b = [rat_parse(v) for v in b]
    if len(b) != 3 or any(not F(2, 3) <= v <= 1 for v in b):
        raise ValueError("need three b_j with 2/3 <= b_j <= 1")
    return RationalMatrix(tuple((F(1), (8 - 3 * v) / 6, v) for v in b))


def b_family_pair(b: Sequence = ("2/3", "5/6", "1")) -> SqsoPair:
    return validate_pair(B_FAMILY_A, b_family_factor(b))


def y_family_matrices(b="1", y: Sequence = ("0", "1/2", "1")) -> tuple[RationalMatrix, RationalMatrix]:
    b = rat_parse(b)
    y = [rat_parse(v) for v in y]
    if b <= 0 or len(y) != 3 or any(not 0 <= v <= 1 for v in y):
        raise ValueError("need b > 0 and three y_i in [0, 1]")
    A = RationalMatrix(tuple((b, v, 1 - v) for v in y))
    B = RationalMatrix.from_rows([[0, 1, 1], [0, 1, 1], [1 / (2 * b), F(1, 2), F(1, 2)]])
    return A, B


def y_family_pair(b="1", y: Sequence = ("0", "1/2", "1")) -> SqsoPair:
    return validate_pair(*y_family_matrices(b, y))


def weak_example_pair() -> SqsoPair:
    return validate_pair(WEAK_A, WEAK_B)


def cyclic_permutation_pair() -> SqsoPair:
    """A linear pair: A permutes coordinates cyclically, B is all ones."""
    A = RationalMatrix.from_rows([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    return validate_pair(A, RationalMatrix.ones(3))


def model_dict(A: RationalMatrix, B: RationalMatrix, label: str = "") -> dict:
    d = {"m": A.rows, "A": A.to_strings(), "B": B.to_strings()}
    if label:
        d["label"] = label
    return d


BUILTIN_MODELS = ("weak-example", "y-family", "b-family")


def builtin_model(name: str) -> dict:
    if name not in BUILTIN_MODELS:
        raise KeyError(f"unknown builtin model {name!r}; choose from {', '.join(BUILTIN_MODELS)}")
    text = resources.files("sqso").joinpath("models", f"{name}.json").read_text()
    return json.loads(text)


def _rand_rational(rng: np.random.Generator, lo: int, hi: int, den: int) -> Fraction:
    return F(int(rng.integers(lo, hi + 1)), int(rng.integers(1, den + 1)))


def random_constant_pair(m: int, rng: np.random.Generator, den: int = 7) -> SqsoPair:
    """Both matrices with identical positive rows ``a``, ``b`` and ``a . b = 1``."""
    a = [_rand_rational(rng, 1, den, den) for _ in range(m)]
    b = [_rand_rational(rng, 1, den, den) for _ in range(m)]
    s = sum(x * y for x, y in zip(a, b))
    b = [v / s for v in b]
    return validate_pair(RationalMatrix(tuple(tuple(a) for _ in range(m))),
                         RationalMatrix(tuple(tuple(b) for _ in range(m))))


def random_linear_pair(m: int, rng: np.random.Generator, den: int = 7) -> SqsoPair:
    """Nonsingular nonnegative A with rows scaled so ``a_i . b = 1``; B has identical rows b."""
    b = [_rand_rational(rng, 1, den, den) for _ in range(m)]
    while True:
        rows = []
        for _ in range(m):
            r = [_rand_rational(rng, 0, den, den) for _ in range(m)]
            s = sum(x * y for x, y in zip(r, b))
            if s == 0:
                r[0], s = F(1), b[0]
            rows.append(tuple(v / s for v in r))
        pair = validate_pair(RationalMatrix(tuple(rows)), RationalMatrix(tuple(tuple(b) for _ in range(m))))
        if pair.det_a != 0:
            return pair


def random_nonlinear_pair(m: int, rng: np.random.Generator, den: int = 7) -> SqsoPair:
    """A genuinely quadratic strict pair for ``m >= 3``.

    Rows of A are stochastic with equal first two columns, so A annihilates
    ``w = (1, -1, 0, .., 0)``; rows of B are ``1 + t_j w`` with distinct
    ``t_j in [-1, 1]``.  Then ``A B^T = 1`` and both determinants vanish.
    """
    if m < 3:
        raise ValueError("a nonlinear separable pair needs m >= 3")
    rows = []
    for i in range(m):
        r = [_rand_rational(rng, 0, den, den) for _ in range(m - 1)]
        r = [r[0]] + r
        if i == 0:
            r = [F(0), F(0)] + [F(1)] + [F(0)] * (m - 3)
        s = sum(r)
        if s == 0:
            r[-1], s = F(1), F(1)
        rows.append(tuple(v / s for v in r))
    ts = [F(2 * j, m) - 1 for j in range(m)]
    B = tuple(tuple(F(1) + t * (1 if k == 0 else -1 if k == 1 else 0) for k in range(m)) for t in ts)
    return validate_pair(RationalMatrix(tuple(rows)), RationalMatrix(B))


def format_vector(v) -> list[str]:
    return [rat_format(F(x)) for x in v]
