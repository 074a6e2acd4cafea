"""Brute-force reference implementations.

Everything here is deliberately naive and shares no code with the search
kernels, so it can be used to check them.
"""
from __future__ import annotations

import os
from collections import defaultdict
from functools import lru_cache
from itertools import product

from .poly import BiPoly
from .strings import CompositionMultiset, MalformedInput, compose, gap_sum

DEFAULT_MAX_N = 20


def _max_n() -> int:
    return int(os.environ.get("POLYRECON_ORACLE_MAX_N", DEFAULT_MAX_N))


@lru_cache(maxsize=None)
def _classes(n: int) -> dict[CompositionMultiset, frozenset[str]]:
    groups: dict[CompositionMultiset, set[str]] = defaultdict(set)
    for bits in product("01", repeat=n):
        s = "".join(bits)
        groups[compose(s)].add(s)
    return {k: frozenset(v) for k, v in groups.items()}


def build_classes(n: int) -> dict[CompositionMultiset, frozenset[str]]:
    """Group all ``2^n`` strings of length ``n`` by composition multiset."""
    if n < 1:
        raise ValueError("n must be positive")
    limit = _max_n()
    if n > limit:
        raise ValueError(f"oracle enumeration capped at n={limit} (set POLYRECON_ORACLE_MAX_N to raise it)")
    return _classes(n)


def equivalence_class(s: str) -> frozenset[str]:
    return build_classes(len(s))[compose(s)]


def restricted_class(s: str) -> frozenset[str]:
    """Members of the class of ``s`` that start with 1 and end with 0."""
    return frozenset(t for t in equivalence_class(s) if t[0] == "1" and t[-1] == "0")


def oracle_reconstruct(ms: CompositionMultiset, restricted: bool = True) -> frozenset[str]:
    """All strings with multiset ``ms``, found by table lookup."""
    ms.validate()
    members = build_classes(ms.n).get(ms)
    if members is None:
        raise MalformedInput("multiset is consistent but matches no binary string")
    if restricted:
        members = frozenset(t for t in members if t[0] == "1" and t[-1] == "0")
    return members


def _poly_mul(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = defaultdict(int)
    for i, u in a.items():
        for k, v in b.items():
            out[i + k] += u * v
    return out


def _run_poly(start: int, length: int) -> dict[int, int]:
    return {e: 1 for e in range(start, start + length)}


def naive_fj(gaps: tuple[int, ...], F: BiPoly, j: int) -> list[int]:
    """Coefficients (lowest degree first) of the residual ``f_j(y)``.

    ``f_j`` is the x^j slice of ``F`` minus the cross products of the
    already-known gap polynomials, as the search would see it at step ``j``
    on the true branch.  Trailing zeros are stripped.
    """
    d = len(gaps) - 1
    if not 0 < 2 * j < d:
        raise ValueError(f"step j={j} outside 0 < j < d/2 for d={d}")

    def alpha(k):
        return _run_poly(gap_sum(gaps, 0, k - 1), gaps[k] + 1)

    def beta(m):
        if m == 0:
            return _run_poly(0, gaps[d] + 1)
        return _run_poly(gap_sum(gaps, d - m + 1, d), gaps[d - m] + 1)

    acc: dict[int, int] = defaultdict(int)
    for (xd, yd), c in F.terms.items():
        if xd == j:
            acc[yd] += c
    for k in range(1, j):
        for e, c in _poly_mul(alpha(k), beta(j - k)).items():
            acc[e] -= c
    top = max((e for e, c in acc.items() if c), default=-1)
    return [acc.get(e, 0) for e in range(top + 1)]
