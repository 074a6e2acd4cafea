import random

import numpy as np
import pytest

from polyrecon.field import make_ctx
from polyrecon.oracle import restricted_class
from polyrecon.poly import BiPoly, f_from_multiset, f_of, s_of
from polyrecon.reconstruct import (
    ReconstructionError,
    candidate_pairs,
    fj_point_values,
    l_s_of,
    pause_profile,
    pauses_on_path,
    probe_path,
    reconstruct,
    reconstruct_grid,
    reconstruct_multiset,
    reconstruct_string,
    recover_params,
    validate_pair,
)
from polyrecon.strings import all_strings, compose, gap_encode, restricted_strings


@pytest.mark.parametrize("s, params", [("1010", (2, 1, 4)), ("10", (1, 1, 2)), ("1001110", (4, 1, 7))])
def test_recover_params(s, params):
    assert recover_params(f_of(s)) == params


def test_recover_params_errors():
    with pytest.raises(ReconstructionError):
        recover_params(BiPoly())
    with pytest.raises(ReconstructionError):
        recover_params(BiPoly({(0, 0): 1, (1, 0): 1}))      # odd x-degree
    with pytest.raises(ReconstructionError):
        recover_params(f_of("1001"))                        # F(0,1) = 1: ends with 1
    with pytest.raises(ReconstructionError):
        recover_params(f_of("1111"))


def test_first_step_values_for_1010():
    s = "1010"
    F = f_of(s)
    ctx = make_ctx(4)
    deg, f1, fl, fli = fj_point_values(F, gap_encode(s), 1, ctx)
    a1, a2 = 1, 1
    assert f1 == (1 + a1) + (a2 + 1) * (a1 + 1) == 6
    assert deg == max(a2, 0 + a1 + a2) == 2
    row = F.x_slice(1)
    assert fl == sum(c * pow(ctx.lam, e, ctx.q) for e, c in row.items()) % ctx.q
    assert fli == sum(c * pow(ctx.lam_inv, e, ctx.q) for e, c in row.items()) % ctx.q


def test_candidates_without_pause():
    ctx = make_ctx(4)
    deg, f1, fl, fli = fj_point_values(f_of("1010"), (0, 1, 1), 1, ctx)
    pairs = [p for p in candidate_pairs(deg, f1, 0, 1, 1) if validate_pair(p, 0, 1, 1, ctx, fl, fli)]
    assert pairs == [(1, 1)]


def test_candidates_at_a_pause():
    s = "1001110"
    gaps = gap_encode(s)
    assert gaps == (0, 2, 0, 0, 1)
    d, a_d = 4, 1
    ctx = make_ctx(len(s))
    deg, f1, fl, fli = fj_point_values(f_of(s), gaps, 1, ctx)
    g_lo, g_hi = 0, a_d
    t = deg - (1 + a_d + g_lo + g_hi)
    expected = [(t + g_hi + 1, t + g_lo), (t + g_hi, t + g_lo + a_d + 1)]
    pairs = candidate_pairs(deg, f1, g_lo, g_hi, a_d)
    assert pairs == expected
    assert (gaps[1], gaps[d - 1]) in pairs
    assert all(validate_pair(p, g_lo, g_hi, a_d, ctx, fl, fli) for p in pairs)
    assert pause_profile(s) == [(1, "type1")]


def test_candidate_pairs_filters():
    assert candidate_pairs(5, 1, 0, 1, 1) == []              # f(1) too small
    assert candidate_pairs(1, 6, 0, 1, 2) == []              # first reading negative, second not divisible


def test_wrong_pairs_rarely_pass_field_checks():
    rng = random.Random(5)
    tried = passed = 0
    for _ in range(600):
        n = rng.randint(8, 60)
        s = "1" + "".join(rng.choice("01") for _ in range(n - 2)) + "0"
        g = gap_encode(s)
        d = len(g) - 1
        if d < 3:
            continue
        ctx = make_ctx(n)
        j = rng.randint(1, (d - 1) // 2)
        deg, f1, fl, fli = fj_point_values(f_of(s), g, j, ctx)
        g_lo, g_hi = sum(g[:j]), sum(g[d - j + 1 :])
        assert validate_pair((g[j], g[d - j]), g_lo, g_hi, g[d], ctx, fl, fli)
        for _ in range(5):
            p = (rng.randint(0, n), rng.randint(0, n))
            if p != (g[j], g[d - j]):
                tried += 1
                passed += validate_pair(p, g_lo, g_hi, g[d], ctx, fl, fli)
    assert tried > 2000
    assert passed / tried < 0.01


def test_pause_profile_and_l_s():
    assert pause_profile("10") == []
    assert l_s_of("10") == 0
    s = "1001110"
    n = len(s)
    direct = sum(
        1 for i in range(1, (n + 1) // 2)
        if 2 * i < n and s[:i].count("1") == s[n - i:].count("1") and s[i] != s[n - 1 - i]
    )
    assert l_s_of(s) == direct
    with pytest.raises(ValueError):
        pause_profile("0110")


def test_reconstruct_small_cases():
    rep = reconstruct(f_of("1010"))
    assert rep.results == ["1010"] and rep.backtracks == 0
    assert reconstruct(f_of("10")).results == ["10"]
    assert reconstruct_multiset(compose("0101")).results == ["1010"]
    assert reconstruct_multiset(compose("10110010")).results == ["10010110", "10110010"]


def test_reconstruct_agrees_with_oracle_exhaustive_small():
    for n in range(2, 12):
        ctx = make_ctx(n)
        for s in restricted_strings(n):
            rep = reconstruct_string(s, ctx)
            assert set(rep.results) == restricted_class(s), s
            assert len(rep.results) == len(set(rep.results))


def test_polynomial_and_string_entry_points_agree():
    rng = random.Random(2)
    for _ in range(40):
        n = rng.randint(3, 40)
        s = "1" + "".join(rng.choice("01") for _ in range(n - 2)) + "0"
        a = reconstruct(f_of(s), trace=True)
        b = reconstruct_string(s, trace=True)
        c = reconstruct(f_from_multiset(s_of(s), n))
        assert a.results == b.results == c.results
        assert (a.nodes, a.branch_points, a.dead_ends, a.backtracks) == (b.nodes, b.branch_points, b.dead_ends, b.backtracks)
        assert a.trace == b.trace
        for t in a.results:
            assert f_of(t) == f_of(s)


def test_field_policy_does_not_change_results():
    for n in range(3, 11):
        tight, safe = make_ctx(n, "min"), make_ctx(n, "safe")
        for s in restricted_strings(n):
            assert reconstruct_string(s, tight).results == reconstruct_string(s, safe).results


def test_no_pause_means_no_backtracking():
    for n in range(2, 13):
        ctx = make_ctx(n)
        for s in restricted_strings(n):
            if pause_profile(s):
                continue
            rep = reconstruct_string(s, ctx)
            assert rep.backtracks == 0 and rep.results == [s], s


def test_pauses_on_true_path_match_profile():
    for n in range(2, 12):
        ctx = make_ctx(n)
        for s in restricted_strings(n):
            prof = [j for j, _ in pause_profile(s)]
            assert pauses_on_path(reconstruct_string(s, ctx, trace=True), s) == prof
            probed = probe_path(s, ctx)
            assert [j for j, v in probed if len(v) == 2] == prof
            assert all(len(v) in (1, 2) for _, v in probed)


def test_first_only_and_trace_format():
    s = "10110010"
    full = reconstruct_string(s, trace=True)
    first = reconstruct_string(s, first_only=True)
    assert len(first.results) == 1 and first.results[0] in full.results
    lines = full.trace_lines()
    assert lines
    for line in lines:
        parts = line.split()
        assert len(parts) >= 3 and all(p.isdigit() for p in parts[:3])
        assert set(parts[3:]) <= {"pause", "backtrack"}
    assert any("backtrack" in line for line in lines)


def test_unrestricted_multisets_give_no_results_or_errors():
    empty = 0
    for n in range(2, 9):
        for s in all_strings(n):
            if restricted_class(s):
                continue
            try:
                rep = reconstruct_multiset(compose(s))
            except ReconstructionError:
                continue
            assert rep.results == [] and rep.exhausted
            empty += 1
    assert empty > 0


def test_grid_entry_point_guards():
    with pytest.raises(ReconstructionError):
        reconstruct_grid(np.zeros((2, 3), dtype=np.int64))
    g = f_of("1100").to_grid()
    g[0, 0] += 5          # claimed trailing zero run is now too long
    with pytest.raises(ReconstructionError):
        reconstruct_grid(g)
    assert reconstruct_grid(f_of("1100").to_grid()).results == ["1100"]


def test_context_too_small_is_rejected():
    with pytest.raises(ValueError):
        reconstruct(f_of("1101001100"), make_ctx(3))


def test_reconstruct_string_requires_restricted_input():
    with pytest.raises(ValueError):
        reconstruct_string("0110")
