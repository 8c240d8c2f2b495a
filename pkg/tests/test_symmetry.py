import math

import numpy as np
import pytest

from rdsym.errors import DomainError, LogDomainError, SingularPointError, TimeSingularError
from rdsym.exact_solutions import CaseTag, ExactSolutionSpec, eval_case1
from rdsym.symmetry import (
    AnsatzPoint,
    Jet,
    LieReductionParams,
    conditional_ansatz,
    conditional_ansatz_eval,
    conditional_operator,
    derived_reduced_residual,
    derived_reduction_closes,
    dilatation_d1,
    dilatation_d2,
    dilatation_d3,
    exp_coupled_residual,
    invariant_surface_residual,
    lie_ansatz,
    lie_ansatz_eval,
    lie_operator,
    lie_similarity_z,
    linear_combination,
    polynomial_profile,
    printed_reduced_residual,
    reduction_consistency_check,
    sd_profile,
    translation_operator,
)


def random_cubic(rng):
    return polynomial_profile(rng.uniform(-1, 1, 4))


def fd_partials(fields, t, x, h=1e-5):
    def vals(tt, xx):
        p = fields(tt, xx)
        return np.array([p.U.value, p.V.value])

    c = vals(t, x)
    return (
        (vals(t + h, x) - vals(t - h, x)) / (2 * h),
        (vals(t, x + h) - vals(t, x - h)) / (2 * h),
        (vals(t, x + h) - 2 * c + vals(t, x - h)) / (h * h),
    )


# -- operators ---------------------------------------------------------------


def test_translation_and_constant_fields():
    op = translation_operator(0.7, -1.3)
    assert op.coefficients(0.1, 0.2, 5.0, 6.0) == (0.7, -1.3, 0.0, 0.0)
    const = AnsatzPoint(0.0, Jet(2.0, 0.0, 0.0, 0.0), Jet(2.0, 0.0, 0.0, 0.0))
    assert invariant_surface_residual(op, const, 0.3, 0.4) == (0.0, 0.0)


def test_d1_variants():
    lit = dilatation_d1(2.0)
    assert lit.coefficients(0.5, 3.0, 4.0, 7.0) == (1.0, 3.0, 0.0, -4.0)
    ans = dilatation_d1(2.0, variant="ansatz")
    assert ans.coefficients(0.5, 3.0, 4.0, 7.0) == (1.0, 3.0, 0.0, -1.0)
    with pytest.raises(DomainError):
        dilatation_d1(1.0, variant="other")


def test_d2_d3_coefficients():
    assert dilatation_d2(2.0, 0.5).coefficients(1.0, 2.0, 3.0, 4.0) == (2.0, 2.0, -1.0, 3.0)
    assert dilatation_d3(4.0, (1.0, -2.0)).coefficients(1.0, 2.0, 3.0, 4.0) == (2.0, 2.0, -0.5, 1.0)


def test_lie_operator_is_coefficientwise_sum(rng):
    for _ in range(20):
        alpha, beta, nu, lam = rng.uniform(-2, 2, 4)
        lam = lam if abs(lam) > 0.1 else 1.0
        direct = lie_operator(alpha, beta, nu, lam, variant="literal")
        summed = translation_operator(alpha, beta) + dilatation_d1(lam).scaled(nu)
        pt = tuple(rng.uniform(-1, 1, 4))
        np.testing.assert_allclose(direct.coefficients(*pt), summed.coefficients(*pt), rtol=1e-15, atol=1e-15)


def test_linear_combination_scales():
    op = linear_combination([(2.0, translation_operator(1.0, 1.0)), (-1.0, translation_operator(0.0, 3.0))])
    assert op.coefficients(0, 0, 0, 0) == (2.0, -1.0, 0.0, 0.0)


def test_conditional_operator_singular_point():
    op = conditional_operator(1.0)
    with pytest.raises(SingularPointError, match="operator-singular-point"):
        op.coefficients(0.2, -1.0, 1.0, 1.0)


# -- ansatz evaluation -------------------------------------------------------


def test_lie_ansatz_examples():
    w1, w2 = polynomial_profile([1.0, 2.0]), polynomial_profile([0.0, 0.0, 1.0])
    for t, x in ((0.0, 0.0), (3.0, -0.5), (1.7, 0.9)):
        p = lie_ansatz_eval(w1, w2, 1.0, 1.0, 0.0, 1.0, t, x)
        assert p.z == 2.0
        assert p.U.value == 5.0 and p.V.value == 4.0
    p = lie_ansatz_eval(w1, w2, 0.0, 0.0, 1.0, 1.0, 0.5, 1.0)
    assert p.z == 2.0


def test_lie_ansatz_errors():
    w = polynomial_profile([1.0])
    with pytest.raises(LogDomainError, match="log-domain"):
        lie_ansatz_eval(w, w, 1.0, -1.0, 0.5, 1.0, 0.2, 1.0)
    with pytest.raises(TimeSingularError, match="time-singular"):
        lie_ansatz_eval(w, w, -1.0, 1.0, 1.0, 1.0, 0.5, 1.0)


def test_z_invariance(rng):
    for _ in range(100):
        alpha, beta = rng.uniform(0.5, 2, 2)
        nu = rng.uniform(-0.2, 1.0)
        t, x = rng.uniform(0, 1, 2)
        z, z_t, z_x, _ = lie_similarity_z(alpha, beta, nu, t, x)
        assert abs((alpha + 2 * nu * t) * z_t + (beta + nu * x) * z_x) < 1e-12 * (1 + abs(z))


def test_conditional_ansatz_examples():
    w1, w2 = polynomial_profile([1.0, -2.0, 0.3]), polynomial_profile([0.4, 0.0, 0.0, 1.0])
    p = conditional_ansatz_eval(w1, w2, 1.0, 0.37, -1.0)
    assert p.U.value == 0.0 and p.V.value == 0.0
    spec = ExactSolutionSpec(CaseTag.EllipticPair, a=1.0, b=-1.0, k1=1.0)
    p = conditional_ansatz_eval(sd_profile(1.0), w2, 1.0, 0.2, 0.5)
    assert p.U.value == pytest.approx(eval_case1(0.5, 0.2, spec)[0], rel=1e-15)


@pytest.mark.parametrize("kind", ["lie", "conditional"])
def test_analytic_derivatives_match_fd(rng, kind):
    for _ in range(100):
        w1, w2 = random_cubic(rng), random_cubic(rng)
        if kind == "lie":
            fields = lie_ansatz(w1, w2, 1.0, 1.0, rng.uniform(0.2, 1), rng.uniform(0.5, 2))
        else:
            fields = conditional_ansatz(w1, w2, rng.uniform(0.5, 2))
        t, x = rng.uniform(0.1, 1), rng.uniform(0.1, 1)
        p = fields(t, x)
        ft, fx, fxx = fd_partials(fields, t, x)
        for got, want in ((p.U.t, ft[0]), (p.V.t, ft[1]), (p.U.x, fx[0]), (p.V.x, fx[1])):
            assert abs(got - want) <= 1e-6 * max(1.0, abs(want))
        # second differences lose about half the digits at h=1e-5
        fd2 = fd_partials(fields, t, x, h=1e-4)[2]
        for got, want in ((p.U.xx, fd2[0]), (p.V.xx, fd2[1])):
            assert abs(got - want) <= 1e-6 * max(1.0, abs(want))


# -- invariant surface ---------------------------------------------------------


def test_conditional_invariance_example():
    w1, w2 = polynomial_profile([0.3, -1.0, 0.2, 0.7]), polynomial_profile([1.0, 0.5])
    q = invariant_surface_residual(conditional_operator(1.0), conditional_ansatz(w1, w2, 1.0), 0.2, 0.5)
    assert max(map(abs, q)) < 1e-10


def test_conditional_invariance_random(rng):
    worst = 0.0
    n = 0
    while n < 1000:
        k1 = rng.uniform(-2, 2)
        t, x = rng.uniform(0, 1), rng.uniform(-3, 3)
        if abs(x + k1) <= 0.1:
            continue
        fields = conditional_ansatz(random_cubic(rng), random_cubic(rng), k1)
        worst = max(worst, *map(abs, invariant_surface_residual(conditional_operator(k1), fields, t, x)))
        n += 1
    assert worst < 1e-10


def test_lie_invariance_ansatz_variant(rng):
    for sign in (-1, 1):
        for _ in range(50):
            alpha, beta, lam = rng.uniform(0.5, 2, 3)
            nu = rng.uniform(0.1, 1)
            fields = lie_ansatz(random_cubic(rng), random_cubic(rng), alpha, beta, nu, lam, ln_sign=sign)
            op = lie_operator(alpha, beta, nu, lam, variant="ansatz", ln_sign=sign)
            q = invariant_surface_residual(op, fields, rng.uniform(0, 1), rng.uniform(0, 1))
            assert max(map(abs, q)) < 1e-10


def test_lie_invariance_literal_variant_fails():
    w1, w2 = polynomial_profile([1.0, 0.5]), polynomial_profile([0.2, 0.1])
    fields = lie_ansatz(w1, w2, 1.0, 1.0, 1.0, 1.0)
    op = lie_operator(1.0, 1.0, 1.0, 1.0, variant="literal")
    q_u, q_v = invariant_surface_residual(op, fields, 0.3, 0.5)
    assert abs(q_u) < 1e-12
    # V channel is off by the difference of the two eta_V choices
    U = fields(0.3, 0.5).U.value
    assert q_v == pytest.approx(-2.0 + 2.0 * U, abs=1e-12)


# -- reduction -----------------------------------------------------------------


def grid_points(n=50):
    rng = np.random.default_rng(7)
    return list(zip(rng.uniform(0.1, 1, n), rng.uniform(0.1, 1, n)))


def test_reduction_example_verdict():
    rng = np.random.default_rng(3)
    w1, w2 = random_cubic(rng), random_cubic(rng)
    p = LieReductionParams(nu=1, alpha=1, beta=1, lam=1, a=1, b=1, phi1=0.5, phi2=1.5)
    report = reduction_consistency_check(w1, w2, p, grid_points())
    assert report.verdict in ("consistent", "inconsistent")
    assert len(report.per_point) == 50
    assert report.derived_max_discrepancy < 1e-8
    assert not report.derived_closes
    assert report.verdict == "inconsistent"
    assert "ln s" in report.derived_system


@pytest.mark.parametrize("sign", [-1, 1])
def test_derived_form_matches_pde_residual(rng, sign):
    for _ in range(20):
        nu, alpha, beta, lam = rng.uniform(0.5, 1.5, 4)
        p = LieReductionParams(nu, alpha, beta, lam, *rng.uniform(-1, 1, 4),
                               lam1=rng.uniform(-0.5, 0.5), lam2=rng.uniform(-0.5, 0.5), ln_sign=sign)
        # modest profiles keep exp(l (w1 - w2)) in range
        w1, w2 = (polynomial_profile(0.3 * rng.uniform(-1, 1, 3)) for _ in range(2))
        report = reduction_consistency_check(w1, w2, p, grid_points(10))
        assert report.derived_max_discrepancy < 1e-8


def test_nu_zero_limit():
    w1, w2 = polynomial_profile([0.3, 1.0]), polynomial_profile([0.2, -1.0])
    p = LieReductionParams(0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.5, 1.5)
    pt = lie_ansatz_eval(w1, w2, 1.0, 1.0, 0.0, 1.0, 0.4, 0.6)
    r_u, r_v = exp_coupled_residual(pt, p)
    e = math.exp(pt.U.value - pt.V.value)
    assert r_u == pytest.approx(-e * 0.5 * pt.U.value)
    assert r_v == pytest.approx(-e * (0.5 * pt.V.value + 1.5))
    # only the reaction survives in either reduced form
    printed = printed_reduced_residual(2.0, w1(2.0), w2(2.0), p)
    derived = derived_reduced_residual(2.0, 1.0, w1(2.0), w2(2.0), p)
    assert printed[0] == pytest.approx(-2 * r_u) and derived[0] == pytest.approx(-2 * r_u)
    assert printed[1] == pytest.approx(-r_v) and derived[1] == pytest.approx(-r_v)
    report = reduction_consistency_check(w1, w2, p, grid_points(5))
    assert report.max_discrepancy < 1e-12 and report.derived_max_discrepancy < 1e-12


def test_reaction_free_case_pins_printed_discrepancy(rng):
    # with a = b = phi = 0 the derived form is exact and the printed form is off by 4 nu^2 z w1'
    w1, w2 = random_cubic(rng), random_cubic(rng)
    p = LieReductionParams(1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0)
    for t, x in grid_points(10):
        pt = lie_ansatz_eval(w1, w2, 1.0, 1.0, 1.0, 1.0, t, x)
        s = x + 1.0
        r_u, r_v = exp_coupled_residual(pt, p)
        printed = printed_reduced_residual(pt.z, w1(pt.z), w2(pt.z), p)
        derived = derived_reduced_residual(pt.z, s, w1(pt.z), w2(pt.z), p)
        assert derived[0] == pytest.approx(-2 * s * s * r_u, abs=1e-12)
        assert derived[1] == pytest.approx(-s * s * r_v, abs=1e-12)
        assert printed[0] - (-2 * s * s * r_u) == pytest.approx(4 * pt.z * w1(pt.z)[1], rel=1e-12)
        assert printed[1] == pytest.approx(-s * s * r_v, abs=1e-12)
    report = reduction_consistency_check(w1, w2, p, grid_points(10))
    assert report.derived_max_discrepancy < 1e-14


def test_derived_reduction_closes():
    base = dict(nu=1.0, alpha=1.0, beta=1.0, lam=1.0, a=1.0, b=1.0)
    assert derived_reduction_closes(LieReductionParams(**base, phi1=0.0, phi2=0.0))
    assert derived_reduction_closes(LieReductionParams(**base, phi1=0.0, phi2=1.5, ln_sign=1))
    assert not derived_reduction_closes(LieReductionParams(**base, phi1=0.0, phi2=1.5, ln_sign=-1))
    assert not derived_reduction_closes(LieReductionParams(**base, phi1=0.5, phi2=1.5, ln_sign=1))
    assert derived_reduction_closes(LieReductionParams(**{**base, "nu": 0.0}, phi1=0.5, phi2=1.5))
