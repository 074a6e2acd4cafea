import random
from fractions import Fraction
from math import comb

import pytest

from polyrecon.codes import (
    Codebook,
    central_binomial_bounds,
    gen_p,
    gen_q,
    gen_r,
    gen_sr,
    gen_t,
    generate,
    in_family,
    is_catalan_type,
    is_sr,
    iter_p,
    iter_q,
    iter_r,
    iter_sr,
    q_index,
    r_index,
    random_sr,
    sr_size_bounds,
    sr_size_sum,
    verify_codebook,
)
from polyrecon.poly import f_of
from polyrecon.reconstruct import pause_profile
from polyrecon.strings import all_strings, prefix_suffix_weights_distinct


def _sr_brute(n):
    """Direct reading of the definition over all 2^n strings (even n)."""
    out = []
    for s in all_strings(n):
        if s[0] != "0" or s[-1] != "1":
            continue
        mism = [s[i] for i in range(1, n // 2) if s[i] != s[n - 1 - i]]
        bal, ok = 0, True
        for c in mism:
            bal += 1 if c == "0" else -1
            ok = ok and bal >= 0
        if ok:
            out.append(s)
    return out


@pytest.mark.parametrize("n", [4, 6, 8, 10, 12, 14])
def test_sr_matches_brute_force(n):
    assert list(gen_sr(n).words) == _sr_brute(n)


def test_sr_sizes():
    for n in range(4, 21, 2):
        assert len(gen_sr(n)) == comb(n - 1, n // 2)
        assert len(gen_sr(n + 1)) == 2 * len(gen_sr(n))


def test_sr_odd_extension():
    for n in (5, 7, 9):
        h = (n - 1) // 2
        expect = sorted({w[:h] + c + w[h:] for w in gen_sr(n - 1) for c in "01"})
        assert list(gen_sr(n).words) == expect


def test_sr_words_have_distinct_prefix_suffix_weights():
    for n in range(4, 19):
        assert all(prefix_suffix_weights_distinct(w) for w in gen_sr(n))


def test_family_words_begin_with_one_and_end_with_zero():
    for n in range(8, 17):
        for fam in ("p", "q", "r", "t"):
            for w in generate(fam, n):
                assert w[0] == "1" and w[-1] == "0" and len(w) == n
                assert in_family(w, fam)


def test_family_shapes():
    for w in gen_q(12, k=2):
        assert w.startswith("110") and w.endswith("110") and is_sr(w[2:10])
        assert q_index(w) == 2
    for w in gen_r(13, k=3):
        assert w.startswith("1110") and w.endswith("11100") and is_sr(w[3:9])
        assert r_index(w) == 3
    assert gen_q(8).params["k"] == [1, 2]
    assert len(gen_q(7)) == len(list(iter_q(7)))
    assert len(gen_r(5)) == 0 and len(gen_q(5)) == 0


def test_disjointness():
    for n in range(8, 21):
        P = set(iter_p(n))
        Qk = {k: set(iter_q(n, k)) for k in range(1, (n - 4) // 2 + 1)}
        Rk = {k: set(iter_r(n, k)) for k in range(1, (n - 5) // 2 + 1)}
        Q = set().union(*Qk.values())
        R = set().union(*Rk.values())
        assert not P & Q and not Q & R
        assert sum(map(len, Qk.values())) == len(Q)
        assert sum(map(len, Rk.values())) == len(R)
        assert all(len(P & r) <= 1 for r in Rk.values())
        assert len(gen_t(n)) == len(P | Q | R)


def test_t_is_at_least_p_plus_q():
    for n in range(8, 21):
        assert len(gen_t(n)) >= len(gen_p(n)) + len(gen_q(n))


def test_t_words_have_no_type2_pause():
    for n in range(8, 17):
        for w in gen_t(n):
            assert all(kind == "type1" for _, kind in pause_profile(w)), w


def test_q_words_reveal_k():
    for n in range(8, 15):
        for w in gen_q(n):
            F = f_of(w)
            assert F(1, 0) == q_index(w) + 1


def test_verify_codebook_passes_on_generated_codes():
    assert verify_codebook(gen_t(12)).passed
    rep = verify_codebook(gen_sr(10))
    assert rep.passed and not rep.structural
    assert verify_codebook(gen_t(18)).distinct_checked == "decode"


def test_verify_codebook_catches_problems():
    w = "10010110"
    rep = verify_codebook(Codebook(8, None, (w, w[::-1])))
    assert not rep.passed and rep.collisions
    rep = verify_codebook(Codebook(8, "p", ("10110010",)))
    assert rep.structural == ["10110010"]
    rep = verify_codebook(Codebook(4, "sr", ("0101",)))
    assert not rep.passed


def test_verify_reports_outside_sharing_without_failing():
    rep = verify_codebook(gen_t(8))
    assert rep.passed
    assert rep.shared_outside == ["10010110"]


def test_size_sums():
    for n in range(4, 30, 2):
        lo, hi = sr_size_bounds(n)
        assert hi == sr_size_sum(n) and lo == Fraction(hi, 2)
        assert hi == comb(n - 1, n // 2)
    assert sr_size_sum(6, "even") == 6 < len(gen_sr(6))
    with pytest.raises(ValueError):
        sr_size_sum(7)
    with pytest.raises(ValueError):
        sr_size_sum(6, "odd")


def test_central_binomial_bounds():
    for m in range(1, 21):
        lo, hi = central_binomial_bounds(m)
        assert lo <= comb(2 * m, m) <= hi
    with pytest.raises(ValueError):
        central_binomial_bounds(0)


def test_catalan_type():
    assert is_catalan_type("") and is_catalan_type("0011") and is_catalan_type("010")
    assert not is_catalan_type("1") and not is_catalan_type("0110")


def test_random_sr_and_limits():
    rng = random.Random(3)
    for n in range(4, 64):
        assert is_sr(random_sr(n, rng))
    assert {random_sr(8, rng) for _ in range(3000)} == set(gen_sr(8).words)
    with pytest.raises(ValueError):
        gen_sr(25)
    with pytest.raises(ValueError):
        gen_t(7)
    with pytest.raises(ValueError):
        list(iter_sr(3))
    with pytest.raises(ValueError):
        generate("x", 8)
    assert sum(1 for _ in iter_sr(26)) == comb(25, 13)
