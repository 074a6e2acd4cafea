import subprocess
import sys

import pytest

from polyrecon.field import make_ctx
from polyrecon.oracle import (
    build_classes,
    equivalence_class,
    naive_fj,
    oracle_reconstruct,
    restricted_class,
)
from polyrecon.poly import f_of
from polyrecon.reconstruct import fj_point_values
from polyrecon.strings import CompositionMultiset, MalformedInput, all_strings, compose, gap_encode, restricted_strings


def test_small_classes():
    assert equivalence_class("1001") == {"1001"}
    classes = build_classes(2)
    assert sorted(sorted(v) for v in classes.values()) == [["00"], ["01", "10"], ["11"]]


def test_classes_partition_and_respect_reversal():
    for n in range(1, 11):
        classes = build_classes(n)
        members = [s for v in classes.values() for s in v]
        assert sorted(members) == sorted(all_strings(n))
        for v in classes.values():
            for s in v:
                assert s[::-1] in v


def test_short_restricted_classes_are_singletons():
    for n in range(2, 8):
        for s in restricted_strings(n):
            assert restricted_class(s) == {s}
    assert restricted_class("10010110") == {"10010110", "10110010"}


def test_oracle_reconstruct_examples():
    assert oracle_reconstruct(compose("1010")) == {"1010"}
    assert oracle_reconstruct(compose("0101")) == {"1010"}
    assert oracle_reconstruct(compose("0101"), restricted=False) == {"1010", "0101"}
    bad = CompositionMultiset(4, {**compose("1010").counts, (1, 0): 3})
    with pytest.raises(MalformedInput):
        oracle_reconstruct(bad)


def test_guard_can_be_configured():
    with pytest.raises(ValueError):
        build_classes(21)
    with pytest.raises(ValueError):
        build_classes(0)
    code = "from polyrecon.oracle import build_classes\ntry:\n build_classes(5)\nexcept ValueError:\n print('capped')"
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True,
        env={"POLYRECON_ORACLE_MAX_N": "4", "PATH": ""},
    )
    assert out.stdout.strip() == "capped"


def _base_digits(v, b):
    k = 0
    while v:
        v //= b
        k += 1
    return k


def _run(start, length):
    return {e: 1 for e in range(start, start + length)}


def _mul(a, b):
    out = {}
    for i, u in a.items():
        for k, v in b.items():
            out[i + k] = out.get(i + k, 0) + u * v
    return out


def test_residual_matches_point_values_exhaustive():
    for n in range(4, 13):
        ctx = make_ctx(n)
        for s in restricted_strings(n):
            g = gap_encode(s)
            d = len(g) - 1
            F = f_of(s)
            for j in range(1, (d - 1) // 2 + 1):
                c = naive_fj(g, F, j)
                deg, f1, fl, fli = fj_point_values(F, g, j, ctx)
                assert len(c) - 1 == deg
                assert sum(c) == f1
                assert sum(ci * pow(ctx.lam, e, ctx.q) for e, ci in enumerate(c)) % ctx.q == fl
                assert sum(ci * pow(ctx.lam_inv, e, ctx.q) for e, ci in enumerate(c)) % ctx.q == fli
                # coefficients are digits in base n+1, so the evaluation there
                # has exactly deg + 1 digits
                assert 0 <= min(c) and max(c) <= n
                assert _base_digits(sum(ci * (n + 1) ** e for e, ci in enumerate(c)), n + 1) == deg + 1


def test_residual_is_the_two_unknown_products():
    for n in range(4, 12):
        for s in restricted_strings(n):
            g = gap_encode(s)
            d = len(g) - 1
            F = f_of(s)
            for j in range(1, (d - 1) // 2 + 1):
                alpha_j = _run(sum(g[:j]), g[j] + 1)
                beta_0 = _run(0, g[d] + 1)
                beta_j = _run(sum(g[d - j + 1 :]), g[d - j] + 1)
                want = _mul(alpha_j, beta_0)
                for e, v in beta_j.items():
                    want[e] = want.get(e, 0) + v
                top = max(want)
                assert naive_fj(g, F, j) == [want.get(e, 0) for e in range(top + 1)]


def test_first_residual_is_the_slice():
    s = "110100110"
    g = gap_encode(s)
    F = f_of(s)
    row = F.x_slice(1)
    assert naive_fj(g, F, 1) == [row.get(e, 0) for e in range(max(row) + 1)]
    with pytest.raises(ValueError):
        naive_fj(g, F, 3)
