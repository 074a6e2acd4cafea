import numpy as np
import pytest

from polyrecon.field import choose_prime, ctx_for_prime, geo_sum, make_ctx, smallest_primitive_root


def _order(g, q):
    k, x = 1, g % q
    while x != 1:
        x = x * g % q
        k += 1
    return k


@pytest.mark.parametrize("n, policy, q, lam", [(4, "min", 5, 2), (2, "min", 3, 2), (10, "safe", 29, 2)])
def test_prime_choice_examples(n, policy, q, lam):
    ctx = make_ctx(n, policy)
    assert (ctx.q, ctx.lam) == (q, lam)


def test_policy_alias_and_errors():
    assert choose_prime(4, "paper-min") == choose_prime(4, "paper_min") == 5
    with pytest.raises(ValueError):
        choose_prime(4, "fast")
    with pytest.raises(ValueError):
        ctx_for_prime(9, 4)
    with pytest.raises(ValueError):
        ctx_for_prime(5, 5)
    with pytest.raises(ValueError):
        make_ctx(1)


@pytest.mark.parametrize("q", [2, 3, 5, 7, 11, 13, 29, 101, 257, 1009])
def test_smallest_primitive_root_by_order(q):
    lam = smallest_primitive_root(q)
    assert _order(lam, q) == q - 1
    assert all(_order(g, q) < q - 1 for g in range(2, lam))


@pytest.mark.parametrize("n", [2, 5, 10, 33, 100])
def test_safe_policy_bounds(n):
    ctx = make_ctx(n)
    assert ctx.q - 1 > 2 * n + 2
    assert all(not _is_prime(p) for p in range(2 * n + 4, ctx.q))
    assert ctx.size >= 2 * n + 3


def _is_prime(p):
    return p > 1 and all(p % k for k in range(2, int(p**0.5) + 1))


def test_tables():
    ctx = make_ctx(20)
    q = ctx.q
    assert np.all(ctx.pow_table * ctx.inv_pow_table % q == 1)
    for e in (0, 1, 7, ctx.size - 1):
        assert ctx.pow_table[e] == pow(ctx.lam, e, q)
        assert ctx.inv_pow_table[e] == pow(ctx.lam_inv, e, q)
    assert ctx.lam * ctx.lam_inv % q == 1


def test_geo_sum_examples():
    ctx = ctx_for_prime(5, 4)
    assert geo_sum(ctx, 0, 1) == 1
    assert geo_sum(ctx, 1, 2) == (2 + 4) % 5
    for c in (ctx, make_ctx(30)):
        assert geo_sum(c, 0, c.q - 1) == 0
        assert geo_sum(c, 0, c.q - 1, inverse=True) == 0
    with pytest.raises(IndexError):
        geo_sum(ctx, ctx.size, 1)
    with pytest.raises(IndexError):
        geo_sum(ctx, -1, 1)


def test_geo_sum_telescopes():
    ctx = make_ctx(40)
    q, lam = ctx.q, ctx.lam
    for s in range(0, 30):
        for L in range(0, ctx.size - s):
            assert geo_sum(ctx, s, L) * (lam - 1) % q == (pow(lam, s + L, q) - pow(lam, s, q)) % q
            direct = sum(pow(ctx.lam_inv, e, q) for e in range(s, s + L)) % q
            assert geo_sum(ctx, s, L, inverse=True) == direct
