import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import HEIS_AREA, rel
from revhardy.errors import InadmissibleTail, InadmissibleWeights, InvalidExponents
from revhardy.exponents import make_exponents
from revhardy.hardy import (NONMONOTONE_NOTE, HardyOptions, PiecewisePowerFunction,
                            RadialFunction, RadialWeight, WeightPair, admissible_window,
                            conjugate_hardy_ratio, d1_profile, d2_profile, extremal_family,
                            generate_family, hardy_lhs, hardy_ratio, hardy_rhs,
                            monotone_verdict, power_weights, proof_identity_check,
                            reverse_holder_check, verify_hardy)

PPF = PiecewisePowerFunction

# ratio (2 + 1/A) / (1/2 + int_1^inf dr / (A r^2 + 4 - A)) for the canonical
# extremal family with t = 1 and f1 = r, evaluated with mpmath at 30 digits
EXTREMAL_ORACLE = {
    10.0: 3.3165175886078886,
    100.0: 3.8402968955120743,
    1000.0: 3.9744980420846004,
    10000.0: 3.9965184140618884,
    0.001: 39.936971120560627,
}


# -- profiles ----------------------------------------------------------------

def test_direct_profile_flat_for_balanced_powers(line, canonical):
    w, e = canonical
    prof = d1_profile(line, w, e)
    assert prof.spread < 1e-9
    assert rel(prof.infimum, 8.0) < 1e-9
    assert prof.monotone_verdict == "non_decreasing"
    assert not prof.warnings


def test_conjugate_profile_on_line(line):
    prof = d2_profile(line, power_weights(-2, -3), make_exponents(-1, -1))
    assert rel(prof.infimum, 8.0) < 1e-9
    assert prof.expected == "non_increasing"


def test_profile_on_heisenberg(heis):
    prof = d1_profile(heis, power_weights(0, -4), make_exponents(-1, -1))
    assert rel(prof.infimum, HEIS_AREA) < 1e-8


def test_unbalanced_profile_warns_at_edge(line):
    prof = d1_profile(line, power_weights(0, 0), make_exponents(-1, -1))
    assert prof.monotone_verdict == "non_decreasing"
    assert prof.argmin == pytest.approx(1e-3)
    assert prof.warnings and "grid edge" in prof.warnings[0]


def test_profile_refuses_divergent_weights(line):
    e = make_exponents(-1, -1)
    with pytest.raises(InadmissibleWeights):
        d1_profile(line, power_weights(-1, -1), e)
    with pytest.raises(InadmissibleWeights):
        d2_profile(line, power_weights(0, -1), e)


def test_monotone_verdict_cases():
    assert monotone_verdict(np.array([1, 2, 3.0]), "non_increasing") == "non_decreasing"
    assert monotone_verdict(np.array([3, 2, 1.0]), "non_decreasing") == "non_increasing"
    assert monotone_verdict(np.array([1, 3, 2.0]), "non_decreasing") == "neither"
    assert monotone_verdict(np.array([1, 1, 1.0]), "non_increasing") == "non_increasing"


# -- the two sides -----------------------------------------------------------

def test_lhs_rhs_piecewise_oracle(line, canonical):
    # f = r^{-1/2} on (0, 1], r beyond: F = 4 sqrt(r), then r^2 + 3
    w, e = canonical
    f = PPF(-0.5, 1.0, 1.0)
    lhs = 1 / (1 + 2 * math.pi / (3 * math.sqrt(3)))
    assert rel(hardy_lhs(line, f, w.u, e.q), lhs) < 1e-10
    assert rel(hardy_rhs(line, f, w.v, e.p), 1 / 6) < 1e-10
    assert rel(hardy_ratio(line, f, w, e), 6 * lhs) < 1e-10


@given(st.floats(-3.0, 3.0))
def test_ratio_scale_invariant(logc):
    from revhardy.spaces import make_space
    line = make_space("euclidean:1")
    w, e = power_weights(0, -1), make_exponents(-1, -1)
    f = PPF(-0.3, 0.7, 2.0)
    assert rel(hardy_ratio(line, f.scaled(10 ** logc), w, e), hardy_ratio(line, f, w, e)) < 1e-9


def test_conjugate_ratio_bounds(line):
    w, e = power_weights(-2, -3), make_exponents(-1, -1)
    for f in generate_family(1, -2, -3, e, 10, seed=3, conjugate=True):
        r = conjugate_hardy_ratio(line, f, w, e)
        assert 2.0 * (1 - 1e-6) <= r


# -- extremal family ---------------------------------------------------------

@pytest.mark.parametrize("A", sorted(EXTREMAL_ORACLE))
def test_extremal_ratio_oracle(line, canonical, A):
    w, e = canonical
    g = extremal_family(line, w.v, 1.0, A, PPF(1.0, 1.0), e)
    assert rel(hardy_ratio(line, g, w, e), EXTREMAL_ORACLE[A]) < 1e-10


def test_extremal_closed_forms(line, canonical):
    # A = 4 kills the 4 - A term: (2 + 1/4) / (1/2 + 1/4) = 3; A = 1 is r^{-1/2}, r
    w, e = canonical
    ratio = lambda A: hardy_ratio(line, extremal_family(line, w.v, 1.0, A, PPF(1.0, 1.0), e), w, e)  # noqa: E731
    assert rel(ratio(4.0), 3.0) < 1e-12
    assert rel(ratio(1.0), 6 / (1 + 2 * math.pi / (3 * math.sqrt(3)))) < 1e-10
    # large amplitudes approach 2 / (1/2) = 4 from below
    assert 4.0 - ratio(1e6) < 1e-2 and ratio(1e6) < 4.0


def test_extremal_refuses_divergent_tail(line, canonical):
    w, e = canonical
    with pytest.raises(InadmissibleTail):
        extremal_family(line, w.v, 1.0, 10.0, PPF(-1.0, -1.0), e)
    with pytest.raises(ValueError):
        extremal_family(line, w.v, 0.0, 10.0, PPF(1.0, 1.0), e)


# -- proof identity ----------------------------------------------------------

def test_proof_identity_power_weight(line, canonical):
    w, e = canonical
    out = proof_identity_check(line, w.v, e, np.logspace(-2, 2, 10))
    assert out["holds"] and out["max_rel_err"] < 1e-8


def test_proof_identity_indicator_closed_form(line):
    # V = 2 on the ball, so W = 2t and the right side is p' (2t)^{1/p'}
    e = make_exponents(-2, -3)
    out = proof_identity_check(line, RadialWeight.indicator(50.0), e, [0.1, 1.0, 10.0])
    for row in out["rows"]:
        assert rel(row["rhs"], e.p_conj * (2 * row["t"]) ** (1 / e.p_conj)) < 1e-10
        assert row["rel_err"] < 1e-8


def test_proof_identity_on_heisenberg(heis):
    out = proof_identity_check(heis, RadialWeight.power(-4), make_exponents(-1, -2),
                               [0.01, 1.0, 100.0])
    assert out["holds"]


# -- reverse Hoelder ---------------------------------------------------------

def test_reverse_holder_equality_case(line):
    # g = f^{p-1} makes g^{p'} proportional to f^p
    p = -1.5
    f = PPF(-0.3, 2.0, 1.0)
    out = reverse_holder_check(f, f.power(p - 1), p, line)
    assert rel(out["lhs"], out["rhs"]) < 1e-9 and out["holds"]


def test_reverse_holder_truncated_constants(line):
    one = PPF(0.0, 0.0)
    out = reverse_holder_check(one, one, -1.0, line, r_hi=3.0)
    assert rel(out["lhs"], 6.0) < 1e-12 and rel(out["rhs"], 6.0) < 1e-12


@settings(max_examples=40)
@given(st.floats(-4.0, -0.2), st.floats(-0.9, 0.9), st.floats(-4.0, -1.2),
       st.floats(-0.9, 0.9), st.floats(-4.0, -1.2), st.floats(0.2, 5.0))
def test_reverse_holder_random_pairs(p, a0, ai, b0, bi, R):
    from revhardy.spaces import make_space
    line = make_space("euclidean:1")
    pc = p / (p - 1)
    # f^p ~ r^a0, r^ai and g^{p'} ~ r^b0, r^bi are integrable at both ends
    f = PPF(a0 / p, ai / p, R)
    g = PPF(b0 / pc, bi / pc)
    assert reverse_holder_check(f, g, p, line)["holds"]


def test_reverse_holder_needs_negative_p(line):
    with pytest.raises(InvalidExponents):
        reverse_holder_check(PPF(0, 0), PPF(0, 0), 0.5, line)


# -- verification ------------------------------------------------------------

def test_verify_canonical(line, canonical):
    w, e = canonical
    rep = verify_hardy(line, w, e, family_count=20, seed=0)
    assert rep.verdict == "verified"
    assert rel(rep.D, 8.0) < 1e-9 and rel(rep.c_lower, 2.0) < 1e-9
    assert rep.min_ratio >= rep.c_lower
    assert rep.extremal_min <= rep.c_upper * 1.01
    d = rep.to_dict()
    assert d["factor"] == pytest.approx(0.25)


def test_verify_conjugate(line):
    rep = verify_hardy(line, power_weights(-2, -3), make_exponents(-1, -1), conjugate=True,
                       family_count=10)
    assert rep.verdict == "verified"


def test_verify_nonmonotone_inconclusive(line):
    u = RadialWeight(func=lambda r: np.where(r < 1, 1.0, 100.0))
    w = WeightPair(u, RadialWeight.power(-1))
    fam = [PPF(-0.5, 1.0, 1.0)]
    rep = verify_hardy(line, w, make_exponents(-1, -1), family=fam)
    assert rep.verdict == "inconclusive"
    assert NONMONOTONE_NOTE in rep.warnings


def test_verify_unbalanced_inconclusive(line):
    rep = verify_hardy(line, power_weights(0, 0), make_exponents(-1, -1), family_count=5)
    assert rep.verdict == "inconclusive"


def test_verify_rejects_bad_exponents():
    with pytest.raises(InvalidExponents):
        make_exponents(-1, -0.5)


@settings(max_examples=30)
@given(st.integers(0, 10_000))
def test_family_ratios_above_lower_bound(seed):
    from revhardy.spaces import make_space
    line = make_space("euclidean:1")
    w, e = power_weights(0, -1), make_exponents(-1, -1)
    for f in generate_family(1, 0, -1, e, 3, seed=seed):
        assert hardy_ratio(line, f, w, e) >= 2.0 * (1 - 1e-6)


def test_generated_family_inside_window():
    e = make_exponents(-2, -3)
    win = admissible_window(1, 0.5, -1.0, e)
    for f in generate_family(1, 0.5, -1.0, e, 50, seed=9):
        lo, hi = win["s0"]
        assert lo < f.s0 < hi
        assert f.s_inf > win["s_inf"][0]
        assert 0.1 <= f.R <= 10


def test_radial_function_log_paths():
    f = RadialFunction(lambda r: np.exp(-r), 0.0, None)
    assert np.allclose(f.log(np.array([0.5, 2.0])), [-0.5, -2.0])
    assert f.scaled(3.0)(1.0) == pytest.approx(3 * math.exp(-1))
    assert np.isfinite(PPF(2.0, -1.0).log_at_log(np.array([-800.0, 800.0]))).all()


def test_options_carry_tolerances():
    assert HardyOptions().amplitudes == (1e2, 1e3, 1e4)
