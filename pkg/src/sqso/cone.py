"""Exact double description method for pointed polyhedral cones.

A cone is given by integer inequality rows ``H`` as ``{x : H x >= 0}``.
Rays are kept as primitive integer vectors together with the bitmask of
constraints they make tight; the adjacency of two rays is decided with
the combinatorial test (no third ray is tight on every constraint the
pair shares).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .numerics import RationalMatrix, mat_inverse, mat_rank, primitive


def _dot(h: Sequence[int], r: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(h, r))


def _normalize_rows(rows: Iterable[Iterable]) -> list[tuple[int, ...]]:
    """Primitive integer rows; zero rows and duplicates removed."""
    out, seen = [], set()
    for row in rows:
        p = primitive(Fraction(v) for v in row)
        if any(p) and p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _initial_basis(H: list[tuple[int, ...]], dim: int) -> list[int]:
    chosen: list[int] = []
    for idx in range(len(H)):
        trial = chosen + [idx]
        if mat_rank(RationalMatrix.from_rows([H[i] for i in trial])) == len(trial):
            chosen = trial
            if len(chosen) == dim:
                break
    return chosen


def extreme_rays(rows: Iterable[Iterable], dim: int) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone ``{x in R^dim : row . x >= 0}``.

    Returns primitive integer vectors, sorted.  An empty list means the
    cone is ``{0}``.  Raises ``ValueError`` if the cone is not pointed.
    """
    H = _normalize_rows(rows)
    basis = _initial_basis(H, dim)
    if len(basis) < dim:
        raise ValueError("constraint rows do not have full column rank: cone is not pointed")

    # the simplicial cone of the basis rows is generated by the columns of its inverse
    inv = mat_inverse(RationalMatrix.from_rows([H[i] for i in basis]))
    order = basis + [i for i in range(len(H)) if i not in basis]
    rays: list[tuple[tuple[int, ...], int]] = []
    for j in range(dim):
        r = primitive(inv.col(j))
        zero = 0
        for pos, i in enumerate(basis):
            if pos != j:
                zero |= 1 << i
        rays.append((r, zero))

    for i in order[dim:]:
        h = H[i]
        bit = 1 << i
        pos_, neg_, kept = [], [], []
        for r, z in rays:
            v = _dot(h, r)
            if v > 0:
                pos_.append((r, z, v))
                kept.append((r, z))
            elif v < 0:
                neg_.append((r, z, v))
            else:
                kept.append((r, z | bit))
        if not neg_:
            rays = kept
            continue
        everyone = [z for _, z in rays]
        new = []
        for rp, zp, vp in pos_:
            for rn, zn, vn in neg_:
                common = zp & zn
                if bin(common).count("1") < dim - 2:
                    continue
                # zp and zn themselves contain common; a third superset breaks adjacency
                if sum(1 for zo in everyone if zo & common == common) > 2:
                    continue
                r = primitive(vp * b - vn * a for a, b in zip(rp, rn))
                new.append((r, common | bit))
        rays = kept + new

    return sorted({r for r, _ in rays})


def facets(rays: Sequence[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """Inward facet normals of the cone generated by ``rays``.

    The normals are the extreme rays of the dual cone ``{h : h . r >= 0}``;
    the rays must span ``R^dim``.
    """
    return extreme_rays(rays, dim)


def tight_rank(rows: Sequence[Sequence[int]], r: Sequence[int]) -> int:
    """Rank of the constraint rows vanishing at ``r`` (``dim - 1`` for an extreme ray)."""
    tight = [row for row in rows if _dot(row, r) == 0]
    if not tight:
        return 0
    return mat_rank(RationalMatrix.from_rows(tight))
