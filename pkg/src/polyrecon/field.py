"""Prime-field context for the two-point validity checks."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sympy.ntheory import factorint, isprime, nextprime

POLICIES = ("safe", "min")
# older spelling of "min", kept for command-line compatibility
POLICY_ALIASES = {"paper-min": "min"}


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """Prime ``q``, a primitive root ``lam`` and power tables up to ``size - 1``.

    ``cum[k]`` / ``inv_cum[k]`` hold the prefix sums ``sum_{e<k} lam^e`` and
    ``sum_{e<k} lam^-e`` so that a run of consecutive powers costs O(1).
    """

    q: int
    lam: int
    pow_table: np.ndarray
    inv_pow_table: np.ndarray
    cum: np.ndarray
    inv_cum: np.ndarray

    @property
    def lam_inv(self) -> int:
        return pow(self.lam, -1, self.q)

    @property
    def size(self) -> int:
        return len(self.pow_table)

    def __repr__(self):
        return f"FieldCtx(q={self.q}, lam={self.lam}, size={self.size})"


def smallest_primitive_root(q: int) -> int:
    if q == 2:
        return 1
    factors = list(factorint(q - 1))
    for g in range(2, q):
        if all(pow(g, (q - 1) // p, q) != 1 for p in factors):
            return g
    raise ArithmeticError(f"no primitive root mod {q}")  # unreachable for prime q


def choose_prime(n: int, policy: str = "safe") -> int:
    policy = policy.replace("_", "-")
    policy = POLICY_ALIASES.get(policy, policy)
    if policy == "min":
        return nextprime(n)
    if policy == "safe":
        return nextprime(2 * n + 3)
    raise ValueError(f"unknown field policy {policy!r}; expected one of {POLICIES}")


def ctx_for_prime(q: int, n: int) -> FieldCtx:
    """Context for an explicit prime ``q``.

    Tables cover exponents ``0 .. max(2n+2, q-1)``.
    """
    if not isprime(q):
        raise ValueError(f"field modulus {q} is not prime")
    if q <= n:
        raise ValueError(f"field modulus {q} must exceed the string length {n}")
    lam = smallest_primitive_root(q)
    size = max(2 * n + 3, q)
    pw = np.empty(size, dtype=np.int64)
    ipw = np.empty(size, dtype=np.int64)
    lam_inv = pow(lam, -1, q)
    a = b = 1
    for e in range(size):
        pw[e], ipw[e] = a, b
        a, b = a * lam % q, b * lam_inv % q
    cum = np.zeros(size + 1, dtype=np.int64)
    inv_cum = np.zeros(size + 1, dtype=np.int64)
    cum[1:] = np.cumsum(pw) % q
    inv_cum[1:] = np.cumsum(ipw) % q
    return FieldCtx(q, lam, pw, ipw, cum, inv_cum)


def make_ctx(n: int, policy: str = "safe") -> FieldCtx:
    """Field context for strings of length ``n``.

    ``min`` takes the smallest prime above ``n``; ``safe`` takes the
    smallest prime with ``q - 1 > 2n + 2`` so that exponent differences seen
    by the validity checks never wrap around the multiplicative group.
    """
    if n < 2:
        raise ValueError("field context needs n >= 2")
    return ctx_for_prime(choose_prime(n, policy), n)


def geo_sum(ctx: FieldCtx, start: int, length: int, inverse: bool = False) -> int:
    """``lam^start + ... + lam^(start+length-1)`` in F_q (``lam^-1`` if ``inverse``)."""
    if start < 0 or length < 0 or start + length > ctx.size:
        raise IndexError(f"power table overrun: start={start}, length={length}, size={ctx.size}")
    cum = ctx.inv_cum if inverse else ctx.cum
    return int(cum[start + length] - cum[start]) % ctx.q
