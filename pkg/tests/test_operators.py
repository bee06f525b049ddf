import math

import numpy as np
import pytest

from lcdunkl.corpus import bump_profile, gauss_profile, realize_bump
from lcdunkl.errors import ParameterError
from lcdunkl.operators import (
    RealPolynomial,
    apply_poly_op,
    apply_power_spectral,
    heat_semigroup,
    heat_series_terms_required,
    norm_sequence,
)
from lcdunkl.quadrature import SampledFunction, lp_norm
from lcdunkl.specfun import CanonicalMatrix
from lcdunkl.symfun import evaluate, gaussian, iterate_op

M_SHEAR = CanonicalMatrix(1.0, 1.0, 0.0, 1.0)
M_ROT = CanonicalMatrix.rotation(math.pi / 3)
K = 0.5


@pytest.fixture(scope="module")
def prof():
    return gauss_profile(K)


@pytest.fixture(scope="module")
def heat_prof():
    # modest frequency extent: the series mode needs n*(lam_max/b)^2 <= 21
    from lcdunkl.quadrature import build_rule

    return gauss_profile(K), build_rule(K, 2.6, 26, 12)


def test_polynomial_type():
    P = RealPolynomial((0.0, 0.0, 1.0))
    assert P.degree == 2
    assert P(2.0) == 4.0
    with pytest.raises(ParameterError):
        RealPolynomial((3.0,)).require_nonconstant()
    assert RealPolynomial((1.0, 0.0, 0.0)).degree == 0


def test_power_zero_is_round_trip(prof):
    f = gaussian(-0.5)
    out = apply_power_spectral(f, K, M_SHEAR, 0, lam_rule=prof.lam_rule, x_rule=prof.x_rule)
    want = evaluate(f, prof.x_rule.nodes)
    assert np.max(np.abs(out.values - want)) <= 1e-6


def test_power_two_matches_symbolic(prof):
    f = gaussian(-0.5)
    spec_path = apply_power_spectral(f, K, M_SHEAR, 2, lam_rule=prof.lam_rule, x_rule=prof.x_rule)
    sym_path = evaluate(iterate_op(K, M_SHEAR.inverse(), f, 2), prof.x_rule.nodes)
    assert np.max(np.abs(spec_path.values - sym_path)) <= 1e-6


def test_power_norm_on_bump_spectrum():
    # Plancherel: the physical norm of the operator power equals the
    # lam-side norm of the multiplied bump
    profb = bump_profile(K, ((1.0, 2.0),), b=1.0)
    f, spec = realize_bump(K, M_SHEAR, ((1.0, 2.0),), profb)
    for n in (1, 3):
        out = apply_power_spectral(f, K, M_SHEAR, n, lam_rule=profb.lam_rule)
        mu = profb.lam_rule.nodes / M_SHEAR.b
        want = math.sqrt(float(np.sum(profb.lam_rule.weights * np.abs(mu**n * spec.values) ** 2)))
        got = lp_norm(out, 2.0)
        assert got == pytest.approx(want, rel=1e-6)


def test_poly_op_is_negative_laplacian(prof):
    f = gaussian(-0.5)
    P = RealPolynomial((0.0, 0.0, 1.0))
    via_poly = apply_poly_op(f, K, M_SHEAR, P, 1, lam_rule=prof.lam_rule, x_rule=prof.x_rule)
    via_power = apply_power_spectral(f, K, M_SHEAR, 2, lam_rule=prof.lam_rule, x_rule=prof.x_rule)
    assert np.max(np.abs(via_poly.values + via_power.values)) <= 1e-6 * np.max(np.abs(via_power.values))


def test_poly_op_identity_at_zero_power(prof):
    f = gaussian(-0.5)
    P = RealPolynomial((0.0, 0.0, 1.0))
    out = apply_poly_op(f, K, M_SHEAR, P, 0, lam_rule=prof.lam_rule, x_rule=prof.x_rule)
    assert np.max(np.abs(out.values - evaluate(f, prof.x_rule.nodes))) <= 1e-6


def test_poly_op_bounded_multiplier_contracts():
    profb = bump_profile(K, ((1.0, 2.0),), b=1.0)
    f, spec = realize_bump(K, M_SHEAR, ((1.0, 2.0),), profb)
    # |P(lam)| = lam^2/4 <= 1 on the support
    P = RealPolynomial((0.0, 0.0, 0.25))
    base = lp_norm(f, 2.0)
    for n in (1, 2):
        out = apply_poly_op(f, K, M_SHEAR, P, n, lam_rule=profb.lam_rule)
        assert lp_norm(out, 2.0) <= base * (1.0 + 1e-9)


def test_heat_modes_agree(heat_prof):
    prof, lam_small = heat_prof
    f = gaussian(-0.5)
    for n in (1, 2, 3):
        mult = heat_semigroup(f, K, M_SHEAR, n, mode="multiplier", lam_rule=lam_small, x_rule=prof.x_rule)
        ser = heat_semigroup(f, K, M_SHEAR, n, mode="series", lam_rule=lam_small, x_rule=prof.x_rule)
        assert np.max(np.abs(mult.values - ser.values)) <= 1e-6


def test_heat_identity_at_zero(prof):
    # at n = 0 the cancellation guard is inactive, so the identity can be
    # checked on the full-width frequency rule
    f = gaussian(-0.5)
    for mode in ("multiplier", "series"):
        out = heat_semigroup(f, K, M_SHEAR, 0, mode=mode, lam_rule=prof.lam_rule, x_rule=prof.x_rule)
        assert np.max(np.abs(out.values - evaluate(f, prof.x_rule.nodes))) <= 1e-6


def test_heat_series_guards(heat_prof):
    prof, lam_small = heat_prof
    f = gaussian(-0.5)
    required = heat_series_terms_required(3.0 * float(np.max(lam_small.nodes**2)))
    with pytest.raises(ParameterError) as err:
        heat_semigroup(f, K, M_SHEAR, 3, mode="series", series_terms=required - 5,
                       lam_rule=lam_small, x_rule=prof.x_rule)
    assert str(required) in str(err.value)
    with pytest.raises(ParameterError):
        # full-width rule: cancellation guard must trip
        heat_semigroup(f, K, M_SHEAR, 1, mode="series", lam_rule=gauss_profile(K).lam_rule,
                       x_rule=prof.x_rule)


def test_heat_bump_norm_window():
    profb = bump_profile(K, ((1.0, 2.0),), b=1.0)
    f, spec = realize_bump(K, M_SHEAR, ((1.0, 2.0),), profb)
    out = heat_semigroup(f, K, M_SHEAR, 3, mode="multiplier", lam_rule=profb.lam_rule)
    nrm = lp_norm(out, 2.0)
    base = lp_norm(f, 2.0)
    assert math.exp(-12.0) * base <= nrm <= math.exp(-3.0) * base


def test_heat_semigroup_law(heat_prof):
    prof, lam_small = heat_prof
    f = gaussian(-0.5)
    one = heat_semigroup(f, K, M_ROT, 1, lam_rule=lam_small, x_rule=prof.x_rule)
    two_step = heat_semigroup(one, K, M_ROT, 2, lam_rule=lam_small)
    direct = heat_semigroup(f, K, M_ROT, 3, lam_rule=lam_small, x_rule=prof.x_rule)
    assert np.max(np.abs(two_step.values - direct.values)) <= 1e-6


def test_heat_monotone_decay(heat_prof):
    prof, lam_small = heat_prof
    f = gaussian(-0.5)
    norms = [
        lp_norm(heat_semigroup(f, K, M_SHEAR, n, lam_rule=lam_small, x_rule=prof.x_rule), 2.0)
        for n in range(4)
    ]
    assert all(norms[i + 1] <= norms[i] + 1e-12 for i in range(3))


def test_norm_sequence_zero_function(prof):
    f = SampledFunction(prof.x_rule, np.zeros(len(prof.x_rule)))
    seq = norm_sequence(f, K, M_SHEAR, 2.0, 10, lam_rule=prof.lam_rule)
    assert seq.is_zero()
    assert np.all(seq.root[1:] == 0.0)


def test_norm_sequence_bump_ratio_approaches_edge():
    profb = bump_profile(K, ((1.0, 2.0),), b=1.0)
    f, spec = realize_bump(K, M_SHEAR, ((1.0, 2.0),), profb)
    seq = norm_sequence(f, K, M_SHEAR, 2.0, 30, lam_rule=profb.lam_rule)
    assert np.all(np.diff(seq.root[5:]) > 0)
    assert seq.ratio[30] == pytest.approx(2.0, rel=0.08)


def test_norm_sequence_paths_agree(prof):
    f = gaussian(-1.0, m=2)
    spec = norm_sequence(f, K, M_ROT, 2.0, 12, path="spectral", lam_rule=prof.lam_rule, x_rule=prof.x_rule)
    sym = norm_sequence(f, K, M_ROT, 2.0, 12, path="symbolic", x_rule=prof.x_rule)
    for n in range(13):
        a, b = spec.lognorm[n], sym.lognorm[n]
        assert abs(math.exp(a - b) - 1.0) <= 1e-5


def test_norm_sequence_consistency_and_csv(prof):
    f = gaussian(-0.5)
    seq = norm_sequence(f, K, M_SHEAR, 2.0, 8, lam_rule=prof.lam_rule, x_rule=prof.x_rule)
    assert seq.consistency_residual() <= 1e-12
    lines = seq.to_csv_text().strip().splitlines()
    assert lines[0] == "n,lognorm,root,ratio"
    assert len(lines) == 10


def test_norm_sequence_budgets(prof):
    f = gaussian(-0.5)
    with pytest.raises(ParameterError):
        norm_sequence(f, K, M_SHEAR, 2.0, 61, lam_rule=prof.lam_rule, x_rule=prof.x_rule)
    with pytest.raises(ParameterError):
        norm_sequence(f, K, M_SHEAR, 2.0, 31, path="symbolic", x_rule=prof.x_rule)
