"""Binary strings, gap encoding and substring composition multisets.

Bit strings are plain ``str`` objects over ``'0'``/``'1'``.  Positions are
0-indexed everywhere in code; docstrings that talk about ``s_1 ... s_n``
use the usual 1-indexed notation.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

BitString = str
GapString = tuple[int, ...]


class MalformedInput(ValueError):
    """Raised for input that cannot be parsed or violates a format invariant."""


def check_bits(s: str) -> str:
    if any(c not in "01" for c in s):
        raise MalformedInput(f"not a binary string: {s!r}")
    return s


def weight(s: str) -> int:
    return s.count("1")


def reverse(s: str) -> str:
    return s[::-1]


def is_restricted(s: str) -> bool:
    """True for strings that begin with 1 and end with 0 (the decoded class)."""
    return len(s) >= 2 and s[0] == "1" and s[-1] == "0"


def all_strings(n: int) -> Iterator[str]:
    for v in range(1 << n):
        yield format(v, f"0{n}b") if n else ""


def restricted_strings(n: int) -> Iterator[str]:
    """All strings of length n with s_1 = 1 and s_n = 0, in lexicographic order."""
    if n < 2:
        return
    for v in range(1 << (n - 2)):
        yield "1" + (format(v, f"0{n - 2}b") if n > 2 else "") + "0"


def gap_encode(s: str) -> GapString:
    """Zero-run lengths around the ones of ``s``.

    ``a_0`` counts zeros before the first 1, ``a_i`` the zeros between the
    i-th and (i+1)-th 1, and ``a_d`` the zeros after the last 1.

    >>> gap_encode("10011010")
    (0, 2, 0, 1, 1)
    """
    check_bits(s)
    if "1" not in s:
        raise ValueError("gap encoding needs at least one 1")
    return tuple(len(run) for run in s.split("1"))


def gap_decode(a: Iterable[int]) -> str:
    a = tuple(a)
    if not a or any(x < 0 for x in a):
        raise ValueError(f"invalid gap string: {a!r}")
    return "1".join("0" * x for x in a)


def gap_sum(a: GapString, i: int, j: int) -> int:
    """``a_i + ... + a_j`` (inclusive)."""
    if not 0 <= i <= j < len(a):
        raise IndexError(f"gap_sum indices out of range: i={i}, j={j}, d={len(a) - 1}")
    return sum(a[i : j + 1])


def prefix_suffix_weights_distinct(s: str) -> bool:
    """True iff wt(s_1^j) != wt(s_{n+1-j}^n) for every 1 <= j <= n-1."""
    n = len(s)
    pre = suf = 0
    for j in range(1, n):
        pre += s[j - 1] == "1"
        suf += s[n - j] == "1"
        if pre == suf:
            return False
    return True


@dataclass(frozen=True)
class CompositionMultiset:
    """Multiset of (ones, zeros) compositions over all substrings of a length-n string."""

    n: int
    counts: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "counts", {k: v for k, v in self.counts.items() if v})

    def __eq__(self, other):
        if not isinstance(other, CompositionMultiset):
            return NotImplemented
        return self.n == other.n and self.counts == other.counts

    def __hash__(self):
        return hash((self.n, frozenset(self.counts.items())))

    def total(self) -> int:
        return sum(self.counts.values())

    def validate(self) -> None:
        """Check the cardinality invariants of a composition multiset."""
        n = self.n
        if n < 1:
            raise MalformedInput(f"multiset length must be positive, got n={n}")
        per_len = Counter()
        for (w, z), m in self.counts.items():
            if w < 0 or z < 0 or w + z < 1 or w + z > n or m < 0:
                raise MalformedInput(f"invalid entry ({w}, {z}) x{m} for n={n}")
            per_len[w + z] += m
        for length in range(1, n + 1):
            if per_len[length] != n - length + 1:
                raise MalformedInput(
                    f"length-{length} compositions have multiplicity {per_len[length]}, "
                    f"expected {n - length + 1}"
                )

    def full_composition(self) -> tuple[int, int]:
        """The (ones, zeros) composition of the whole string."""
        full = [k for k in self.counts if sum(k) == self.n]
        if len(full) != 1:
            raise MalformedInput("multiset must contain exactly one full-length composition")
        return full[0]

    def sorted_entries(self) -> list[tuple[int, int, int]]:
        return [(w, z, self.counts[w, z]) for (w, z) in sorted(self.counts, key=lambda k: (k[0] + k[1], k[0]))]

    def to_text(self) -> str:
        lines = [f"# n={self.n}"]
        lines += [f"{w} {z} {m}" for w, z, m in self.sorted_entries()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CompositionMultiset":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("# n="):
            raise MalformedInput("line 1: expected header '# n=<n>'")
        try:
            n = int(lines[0][4:])
        except ValueError:
            raise MalformedInput(f"line 1: bad length in header {lines[0]!r}") from None
        counts: dict[tuple[int, int], int] = {}
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 3:
                raise MalformedInput(f"line {lineno}: expected '<ones> <zeros> <multiplicity>'")
            try:
                w, z, m = (int(p) for p in parts)
            except ValueError:
                raise MalformedInput(f"line {lineno}: non-integer field in {line!r}") from None
            if (w, z) in counts:
                raise MalformedInput(f"line {lineno}: duplicate entry ({w}, {z})")
            counts[w, z] = m
        ms = cls(n, counts)
        ms.validate()
        return ms


def compose(s: str) -> CompositionMultiset:
    """Composition multiset of ``s`` by a running prefix-count scan."""
    check_bits(s)
    n = len(s)
    ones = [0] * (n + 1)
    for i, c in enumerate(s):
        ones[i + 1] = ones[i] + (c == "1")
    counts: Counter = Counter()
    for i in range(n):
        oi = ones[i]
        for j in range(i + 1, n + 1):
            w = ones[j] - oi
            counts[w, j - i - w] += 1
    return CompositionMultiset(n, dict(counts))
