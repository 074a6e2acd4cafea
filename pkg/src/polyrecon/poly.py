"""Sparse bivariate integer polynomials and the string/multiset polynomials.

``x`` tracks ones and ``y`` tracks zeros: a substring with ``w`` ones and
``z`` zeros is the monomial ``x**w * y**z``.
"""
from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .strings import CompositionMultiset, MalformedInput, check_bits, compose

Term = tuple[int, int]

# Above this many pairwise products, multiplication goes through numpy.
_DENSE_MUL_THRESHOLD = 4096
_FLOAT_EXACT = 2**52


class BiPoly:
    """Immutable sparse polynomial in ``x, y`` with integer coefficients.

    Terms are stored as ``{(xdeg, ydeg): coef}`` with zero coefficients
    dropped.  Exponents are non-negative.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Term, int] | Iterable[tuple[Term, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Term, int] = {}
        for (i, j), c in items:
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in term ({i}, {j})")
            c = int(c)
            if c:
                clean[int(i), int(j)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, terms: dict[Term, int]) -> "BiPoly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def one(cls) -> "BiPoly":
        return cls._wrap({(0, 0): 1})

    @property
    def terms(self) -> Mapping[Term, int]:
        return self._terms

    @property
    def degx(self) -> int:
        return max((i for i, _ in self._terms), default=0)

    @property
    def degy(self) -> int:
        return max((j for _, j in self._terms), default=0)

    def coef(self, i: int, j: int) -> int:
        return self._terms.get((i, j), 0)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms.items()))

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self._terms == other._terms
        if isinstance(other, int):
            return self._terms == ({(0, 0): other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"BiPoly({self.to_expr()})"

    def to_expr(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self._terms.items(), key=lambda t: (t[0][0] + t[0][1], t[0])):
            mono = "*".join(
                f"{v}^{e}" if e > 1 else v for v, e in (("x", i), ("y", j)) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def __add__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return BiPoly._wrap(out)

    def __neg__(self) -> "BiPoly":
        return BiPoly._wrap({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def scale(self, c: int) -> "BiPoly":
        return BiPoly({k: c * v for k, v in self._terms.items()})

    def shift(self, dx: int, dy: int) -> "BiPoly":
        """Multiply by ``x**dx * y**dy``."""
        return BiPoly({(i + dx, j + dy): c for (i, j), c in self._terms.items()})

    def __mul__(self, other: "BiPoly") -> "BiPoly":
        if not isinstance(other, BiPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return BiPoly._wrap({})
        if len(a) * len(b) >= _DENSE_MUL_THRESHOLD:
            fast = _mul_numpy(a, b)
            if fast is not None:
                return fast
        out: dict[Term, int] = {}
        for (i1, j1), c1 in a.items():
            for (i2, j2), c2 in b.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return BiPoly._wrap({k: v for k, v in out.items() if v})

    def __call__(self, x, y):
        return sum(c * x**i * y**j for (i, j), c in self._terms.items())

    def eval_mod(self, x: int, y: int, q: int) -> int:
        return sum(c * pow(x, i, q) * pow(y, j, q) for (i, j), c in self._terms.items()) % q

    def x_slice(self, i: int) -> dict[int, int]:
        """Coefficient of ``x**i`` as a ``{ydeg: coef}`` polynomial in ``y``."""
        return {j: c for (ii, j), c in self._terms.items() if ii == i}

    def at_y1(self) -> dict[int, int]:
        """F(x, 1) as ``{xdeg: coef}``."""
        out: dict[int, int] = {}
        for (i, _), c in self._terms.items():
            out[i] = out.get(i, 0) + c
        return {i: c for i, c in out.items() if c}

    def to_grid(self) -> np.ndarray:
        """Dense ``int64`` coefficient grid indexed ``[xdeg, ydeg]``."""
        grid = np.zeros((self.degx + 1, self.degy + 1), dtype=np.int64)
        if self._terms:
            keys = np.array(list(self._terms), dtype=np.int64)
            grid[keys[:, 0], keys[:, 1]] = np.array(list(self._terms.values()), dtype=np.int64)
        return grid

    @classmethod
    def from_grid(cls, grid: np.ndarray) -> "BiPoly":
        ii, jj = np.nonzero(grid)
        return cls._wrap(dict(zip(zip(ii.tolist(), jj.tolist()), grid[ii, jj].tolist())))

    def to_text(self) -> str:
        lines = [f"# degx={self.degx} degy={self.degy}"]
        lines += [f"{i} {j} {c}" for (i, j), c in sorted(self._terms.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BiPoly":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("# degx="):
            raise MalformedInput("line 1: expected header '# degx=<a> degy=<b>'")
        try:
            hx, hy = lines[0][2:].split()
            degx, degy = int(hx.split("=")[1]), int(hy.split("=")[1])
        except (ValueError, IndexError):
            raise MalformedInput(f"line 1: bad header {lines[0]!r}") from None
        terms: dict[Term, int] = {}
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            try:
                i, j, c = (int(p) for p in line.split())
            except ValueError:
                raise MalformedInput(f"line {lineno}: expected '<xdeg> <ydeg> <coef>'") from None
            if i < 0 or j < 0:
                raise MalformedInput(f"line {lineno}: negative exponent")
            terms[i, j] = terms.get((i, j), 0) + c
        p = cls(terms)
        if p.degx != degx or p.degy != degy:
            raise MalformedInput("header degrees do not match the listed terms")
        return p


def _mul_numpy(a: Mapping[Term, int], b: Mapping[Term, int]) -> BiPoly | None:
    ca = np.fromiter(a.values(), dtype=object, count=len(a))
    cb = np.fromiter(b.values(), dtype=object, count=len(b))
    bound = int(max(abs(c) for c in ca)) * int(max(abs(c) for c in cb)) * min(len(a), len(b))
    if bound >= _FLOAT_EXACT:
        return None
    ka = np.array(list(a), dtype=np.int64)
    kb = np.array(list(b), dtype=np.int64)
    width = int(ka[:, 1].max() + kb[:, 1].max() + 1)
    xs = (ka[:, 0][:, None] + kb[:, 0][None, :]).ravel()
    ys = (ka[:, 1][:, None] + kb[:, 1][None, :]).ravel()
    ws = (ca.astype(np.float64)[:, None] * cb.astype(np.float64)[None, :]).ravel()
    acc = np.bincount(xs * width + ys, weights=ws)
    nz = np.flatnonzero(acc)
    vals = np.rint(acc[nz]).astype(np.int64)
    return BiPoly._wrap(
        dict(zip(zip((nz // width).tolist(), (nz % width).tolist()), vals.tolist()))
    )


def p_of(s: str) -> BiPoly:
    """Prefix polynomial: one monomial ``x**w y**z`` per prefix of ``s`` (empty prefix included)."""
    check_bits(s)
    w = z = 0
    terms = {(0, 0): 1}
    for c in s:
        if c == "1":
            w += 1
        else:
            z += 1
        terms[w, z] = 1
    return BiPoly._wrap(terms)


def multiset_poly(ms: CompositionMultiset) -> BiPoly:
    """Generating polynomial of a composition multiset."""
    return BiPoly(ms.counts)


def s_of(s: str) -> BiPoly:
    return multiset_poly(compose(s))


def reciprocal(f: BiPoly) -> BiPoly:
    """``x**degx(f) * y**degy(f) * f(1/x, 1/y)``."""
    a, b = f.degx, f.degy
    return BiPoly._wrap({(a - i, b - j): c for (i, j), c in f.terms.items()})


def f_of(s: str) -> BiPoly:
    """``P_s * P_s^*``: the product of the prefix polynomial and its reciprocal."""
    p = p_of(s)
    return p * reciprocal(p)


def _full_term(S: BiPoly, n: int) -> Term:
    full = [k for k in S.terms if k[0] + k[1] == n]
    if len(full) != 1 or S.terms[full[0]] != 1:
        raise MalformedInput(f"polynomial has no unique total-degree-{n} term with coefficient 1")
    return full[0]


def f_from_multiset(S: BiPoly, n: int) -> BiPoly:
    """F computed from the multiset polynomial alone.

    ``F = x^a y^b (n + 1 + S) + S^*`` with ``x^a y^b`` the full-string term of ``S``.
    """
    a, b = _full_term(S, n)
    CompositionMultiset(n, dict(S.terms)).validate()
    return (S + BiPoly({(0, 0): n + 1})).shift(a, b) + reciprocal(S)


def s_from_f(F: BiPoly, n: int) -> BiPoly:
    """Recover the multiset polynomial from F (inverse of :func:`f_from_multiset`)."""
    if F.degx % 2 or F.degy % 2 or F.degx + F.degy != 2 * n:
        raise MalformedInput(f"F has degrees ({F.degx}, {F.degy}), incompatible with n={n}")
    a, b = F.degx // 2, F.degy // 2
    pos: dict[Term, int] = {}
    neg: dict[Term, int] = {}
    const = 0
    for (i, j), c in F.terms.items():
        u, v = i - a, j - b
        if u == 0 and v == 0:
            const = c
        elif u >= 0 and v >= 0:
            pos[u, v] = c
        elif u <= 0 and v <= 0:
            neg[-u, -v] = c
        else:
            raise MalformedInput(f"term x^{i} y^{j} fits neither half of the Laurent expansion")
    if const != n + 1 or pos != neg:
        raise MalformedInput("F is not of the form x^a y^b (n + 1 + S(x,y) + S(1/x,1/y))")
    return BiPoly._wrap(pos)


def laurent_identity_holds(s: str) -> bool:
    """Check ``P(x,y) P(1/x,1/y) = (n+1) + S(x,y) + S(1/x,1/y)`` for ``s``.

    Both sides are multiplied through by ``x^a y^b`` (the full-string
    monomial) so the comparison stays in the polynomial ring.
    """
    n = len(s)
    p = p_of(s)
    a, b = p.degx, p.degy
    lhs = p * reciprocal(p)
    rhs: dict[Term, int] = {(a, b): n + 1}
    for (l, m), c in s_of(s).terms.items():
        for k in ((a + l, b + m), (a - l, b - m)):
            rhs[k] = rhs.get(k, 0) + c
    return lhs == BiPoly(rhs)
