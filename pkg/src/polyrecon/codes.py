"""Reconstruction codebooks built from Catalan-type strings.

``S_R(n)`` words start with 0 and end with 1; every other family here
(``P``, ``Q``, ``R``, ``T``) starts with 1 and ends with 0 so its words can
be fed straight to the decoder.

A Catalan-type string is one where every prefix has at least as many 0s as
1s.  With that convention the first-half mismatch positions of an ``S_R``
word keep every prefix/suffix weight pair apart.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, pi, sqrt
from typing import Iterable, Iterator

from .strings import compose, is_restricted, prefix_suffix_weights_distinct

FAMILIES = ("sr", "p", "q", "r", "t")
# In-memory generation limit; larger codebooks should be streamed with iter_*.
MAX_IN_MEMORY_N = 24


@dataclass(frozen=True)
class Codebook:
    n: int
    family: str
    words: tuple[str, ...]
    params: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, w):
        return w in self._set

    @property
    def _set(self) -> frozenset:
        s = self.__dict__.get("_cached_set")
        if s is None:
            s = frozenset(self.words)
            object.__setattr__(self, "_cached_set", s)
        return s


def _iter_sr_even(n: int) -> Iterator[str]:
    # Level-by-level over first-half positions 2..n/2.  Each state carries the
    # left half, the mirrored right half and the 0-minus-1 balance over the
    # mismatch positions seen so far.
    states = [("", "", 0)]
    for _ in range((n - 2) // 2):
        nxt = []
        for left, right, bal in states:
            nxt.append((left + "0", "0" + right, bal))
            nxt.append((left + "1", "1" + right, bal))
            nxt.append((left + "0", "1" + right, bal + 1))
            if bal > 0:
                nxt.append((left + "1", "0" + right, bal - 1))
        states = nxt
    for left, right, _ in states:
        yield "0" + left + right + "1"


def iter_sr(n: int) -> Iterator[str]:
    """Stream ``S_R(n)`` in generation order (not sorted)."""
    if n < 4:
        raise ValueError(f"S_R(n) needs n >= 4, got {n}")
    if n % 2 == 0:
        yield from _iter_sr_even(n)
        return
    h = (n - 1) // 2
    for w in iter_sr(n - 1):
        yield w[:h] + "0" + w[h:]
        yield w[:h] + "1" + w[h:]


# (bit, same as its mirror?); a mismatched 1 is only legal with positive balance
_SR_MOVES = (("0", True), ("1", True), ("0", False), ("1", False))


def random_sr(n: int, rng) -> str:
    """One word of ``S_R(n)`` drawn with a ``random.Random``-like ``rng``.

    Each first-half position picks uniformly among its allowed
    (bit, mirrored?) options, so the draw is not uniform over the code.
    """
    if n < 4:
        raise ValueError(f"S_R(n) needs n >= 4, got {n}")
    m = n - (n % 2)
    left, right, bal = [], [], 0
    for _ in range((m - 2) // 2):
        c, mirrored = _SR_MOVES[rng.randrange(4 if bal > 0 else 3)]
        left.append(c)
        right.append(c if mirrored else "10"[int(c)])
        if not mirrored:
            bal += 1 if c == "0" else -1
    mid = str(rng.randrange(2)) if n % 2 else ""
    return "0" + "".join(left) + mid + "".join(reversed(right)) + "1"


def _q_ks(n: int) -> range:
    return range(1, (n - 4) // 2 + 1)


def _r_ks(n: int) -> range:
    return range(1, (n - 5) // 2 + 1)


def iter_p(n: int) -> Iterator[str]:
    return (w[::-1] for w in iter_sr(n))


def iter_q(n: int, k: int | None = None) -> Iterator[str]:
    for kk in _q_ks(n) if k is None else [k]:
        head, tail = "1" * kk, "1" * (kk - 1) + "0"
        for core in iter_sr(n - 2 * kk):
            yield head + core + tail


def iter_r(n: int, k: int | None = None) -> Iterator[str]:
    for kk in _r_ks(n) if k is None else [k]:
        head, tail = "1" * kk, "1" * (kk - 1) + "00"
        for core in iter_sr(n - 2 * kk - 1):
            yield head + core + tail


def _book(n: int, family: str, words: Iterable[str], **params) -> Codebook:
    if n > MAX_IN_MEMORY_N:
        raise ValueError(f"n={n} exceeds the in-memory limit {MAX_IN_MEMORY_N}; use the iter_* generators")
    return Codebook(n, family, tuple(sorted(set(words))), params)


def gen_sr(n: int) -> Codebook:
    return _book(n, "sr", iter_sr(n))


def gen_p(n: int) -> Codebook:
    return _book(n, "p", iter_p(n))


def gen_q(n: int, k: int | None = None) -> Codebook:
    """``Q_n`` (union over k), or ``Q_{k,n}`` when ``k`` is given."""
    ks = list(_q_ks(n)) if k is None else [k]
    return _book(n, "q", iter_q(n, k), k=ks)


def gen_r(n: int, k: int | None = None) -> Codebook:
    ks = list(_r_ks(n)) if k is None else [k]
    return _book(n, "r", iter_r(n, k), k=ks)


def gen_t(n: int) -> Codebook:
    """``T(n) = P_n | Q_n | R_n``."""
    if n < 8:
        raise ValueError(f"T(n) is defined here for n >= 8, got {n}")
    words = set(iter_p(n))
    words.update(iter_q(n))
    words.update(iter_r(n))
    return _book(n, "t", words)


GENERATORS = {"sr": gen_sr, "p": gen_p, "q": gen_q, "r": gen_r, "t": gen_t}


def generate(family: str, n: int) -> Codebook:
    try:
        return GENERATORS[family](n)
    except KeyError:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}") from None


# ---- membership predicates ------------------------------------------------

def is_catalan_type(c: str) -> bool:
    bal = 0
    for ch in c:
        bal += 1 if ch == "0" else -1
        if bal < 0:
            return False
    return True


def is_sr(w: str) -> bool:
    n = len(w)
    if n < 4:
        return False
    if n % 2:
        h = (n - 1) // 2
        w = w[:h] + w[h + 1 :]
        n -= 1
    if w[0] != "0" or w[-1] != "1":
        return False
    mism = "".join(w[i] for i in range(1, n // 2) if w[i] != w[n - 1 - i])
    return is_catalan_type(mism)


def q_index(w: str) -> int | None:
    """``k`` with ``w`` in ``Q_{k,n}``, or None."""
    n = len(w)
    k = len(w) - len(w.lstrip("1"))
    if k < 1 or n - 2 * k < 4:
        return None
    if w[n - k - 1 :] != "1" * k + "0" or not is_sr(w[k : n - k]):
        return None
    return k


def r_index(w: str) -> int | None:
    n = len(w)
    k = len(w) - len(w.lstrip("1"))
    if k < 1 or n - 2 * k - 1 < 4:
        return None
    if w[n - k - 2 :] != "1" * k + "00" or not is_sr(w[k : n - k - 1]):
        return None
    return k


def in_family(w: str, family: str) -> bool:
    if family == "sr":
        return is_sr(w)
    if family == "p":
        return is_sr(w[::-1])
    if family == "q":
        return q_index(w) is not None
    if family == "r":
        return r_index(w) is not None
    if family == "t":
        return is_sr(w[::-1]) or q_index(w) is not None or r_index(w) is not None
    raise ValueError(f"unknown family {family!r}")


# ---- size bounds -----------------------------------------------------------

def sr_size_sum(n: int, reading: str = "floor") -> int:
    """``sum_i C(m, i) 2^(m-i) C(i, i/2)`` with ``m = (n-2)/2``.

    ``reading='floor'`` uses ``C(i, floor(i/2))`` for odd ``i`` (the number of
    Catalan-type strings of length i); ``reading='even'`` keeps even ``i`` only.
    """
    if n % 2 or n < 4:
        raise ValueError(f"size sums are defined for even n >= 4, got {n}")
    m = (n - 2) // 2
    if reading == "floor":
        return sum(comb(m, i) * 2 ** (m - i) * comb(i, i // 2) for i in range(m + 1))
    if reading == "even":
        return sum(comb(m, i) * 2 ** (m - i) * comb(i, i // 2) for i in range(0, m + 1, 2))
    raise ValueError(f"unknown reading {reading!r}")


def sr_size_bounds(n: int, reading: str = "floor") -> tuple[Fraction, int]:
    """(lower, upper) bounds on ``|S_R(n)|``; the lower bound is half the upper."""
    upper = sr_size_sum(n, reading)
    return Fraction(upper, 2), upper


def central_binomial_bounds(m: int) -> tuple[float, float]:
    """``4^m / (2 sqrt(pi m)) <= C(2m, m) <= 4^m / sqrt(pi m)``."""
    if m < 1:
        raise ValueError("m must be positive")
    root = sqrt(pi * m)
    return 4.0**m / (2 * root), 4.0**m / root


# ---- verification -----------------------------------------------------------

@dataclass
class CodebookReport:
    """Outcome of :func:`verify_codebook`.

    ``bad_decodes`` lists words a codebook decoder (stop at the first verified
    string) does not return.  ``shared_outside`` lists words whose multiset is
    also produced by some restricted string outside the code; that does not
    break the code, it only means an exhaustive search returns more than one
    string.
    """

    n: int
    family: str | None
    size: int
    distinct_checked: str = ""
    collisions: list[tuple[str, ...]] = field(default_factory=list)
    bad_decodes: list[str] = field(default_factory=list)
    backtracking: list[str] = field(default_factory=list)
    type2: list[str] = field(default_factory=list)
    structural: list[str] = field(default_factory=list)
    shared_outside: list[str] = field(default_factory=list)
    total_backtracks: int = 0
    pause_words: int = 0

    @property
    def passed(self) -> bool:
        return not (self.collisions or self.bad_decodes or self.backtracking or self.type2 or self.structural)

    def summary(self) -> str:
        head = "PASS" if self.passed else "FAIL"
        fam = (self.family or "code").upper()
        return (
            f"{head}: {self.total_backtracks} backtracks, |{fam}|={self.size}, "
            f"collisions={len(self.collisions)} ({self.distinct_checked}), "
            f"misdecoded={len(self.bad_decodes)}, type2={len(self.type2)}, "
            f"structural={len(self.structural)}, shared_outside={len(self.shared_outside)}"
        )


def verify_codebook(cb: Codebook, ctx=None, backend: str | None = None, direct_limit: int = 16) -> CodebookReport:
    """Check distinct multisets, backtrack-free decoding and family structure.

    ``S_R`` words are decoded through their reversal, which starts with 1.
    """
    from .field import make_ctx
    from .reconstruct import decode_words

    n = cb.n
    rep = CodebookReport(n, cb.family, len(cb.words))
    if any(len(w) != n for w in cb.words):
        rep.structural += [w for w in cb.words if len(w) != n]
        return rep
    if cb.family:
        rep.structural += [w for w in cb.words if not in_family(w, cb.family)]
    if cb.family == "sr":
        rep.structural += [w for w in cb.words if not prefix_suffix_weights_distinct(w)]
        decodable = [w[::-1] for w in cb.words]
    else:
        rep.structural += [w for w in cb.words if not is_restricted(w)]
        decodable = list(cb.words)

    if n <= direct_limit:
        rep.distinct_checked = "direct"
        groups = defaultdict(list)
        for w in cb.words:
            groups[compose(w)].append(w)
        rep.collisions = [tuple(g) for g in groups.values() if len(g) > 1]
    else:
        # if every word is the first string its own multiset decodes to, no
        # two words can share a multiset
        rep.distinct_checked = "decode"

    if not decodable or not all(is_restricted(w) for w in decodable):
        return rep
    ctx = ctx or make_ctx(n)
    table = decode_words(decodable, ctx, backend)
    for w, row in zip(cb.words, table):
        nres, _found, back, _dead, _bp, t2, first = (int(v) for v in row)
        if not first:
            rep.bad_decodes.append(w)
        if back:
            rep.backtracking.append(w)
        if t2:
            rep.type2.append(w)
        if nres > 1:
            rep.shared_outside.append(w)
        rep.total_backtracks += back
    rep.pause_words = int((table[:, 4] > 0).sum())
    if rep.distinct_checked == "decode":
        rep.collisions = [(w,) for w in rep.bad_decodes]
    return rep
