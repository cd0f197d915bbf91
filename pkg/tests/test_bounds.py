import math

import numpy as np
import pytest
from scipy.special import ellipe

from gegenspec.bounds import (
    BoundBreakdown,
    EllipseSpec,
    PoleOnContourError,
    best_bound_over_rho,
    diff_bound_gauss,
    diff_bound_lobatto,
    e_n_metric,
    ellipse_axes,
    ellipse_points,
    interp_bound_gauss,
    interp_bound_lobatto,
    interval_distance,
    perimeter_estimate,
    quad_bound,
    remainder_bound,
    remainder_exact,
    sup_on_ellipse,
)
from gegenspec.poly import normalized_on_ellipse

RUNGE = lambda z: 1.0 / (1.0 + z * z)
RHO_SUP = 1.0 + math.sqrt(2.0)

REMAINDER_LATTICE = [
    (lam, n, rho)
    for lam in (-0.3, 0.5, 1.5, 3.2)
    for n in (3, 10, 50, 200)
    for rho in (1.2, 1.5, 2.5)
]


class TestEllipseGeometry:
    def test_spec_validation(self):
        with pytest.raises(ValueError):
            EllipseSpec(1.0)
        with pytest.raises(ValueError):
            EllipseSpec(1.5, samples=3)

    def test_real_axis_point(self):
        w, z = ellipse_points(EllipseSpec(1.5, 8))
        assert z[0] == pytest.approx((1.5 + 2.0 / 3.0) / 2.0, rel=1e-15)

    def test_imaginary_axis_point(self):
        w, z = ellipse_points(EllipseSpec(1.5, 8))
        assert z[2] == pytest.approx(1j * (1.5 - 2.0 / 3.0) / 2.0, abs=1e-15)

    def test_on_ellipse_equation(self):
        for rho in (1.1, 1.5, 2.5):
            a, b = ellipse_axes(rho)
            _, z = ellipse_points(EllipseSpec(rho, 64))
            resid = (z.real / a) ** 2 + (z.imag / b) ** 2 - 1.0
            assert np.max(np.abs(resid)) < 1e-12

    def test_foci_constraint(self):
        for rho in (1.05, 1.4, 3.0):
            a, b = ellipse_axes(rho)
            assert a * a - b * b == pytest.approx(1.0, rel=1e-13)

    def test_perimeter_overestimate_within_12_percent(self):
        for rho in (1.1, 1.5, 2.5, 5.0):
            a, b = ellipse_axes(rho)
            perim = 4.0 * a * ellipe(1.0 - (b / a) ** 2)
            est = perimeter_estimate(rho)
            assert perim <= est <= 1.12 * perim

    def test_interval_distance(self):
        assert interval_distance(2.0) == pytest.approx(0.25, rel=1e-14)


class TestSupOnEllipse:
    def test_constant(self):
        assert sup_on_ellipse(lambda z: np.ones_like(z), EllipseSpec(1.4, 32)) == 1.0

    def test_identity_max_on_real_axis(self):
        assert sup_on_ellipse(lambda z: z, EllipseSpec(2.0, 64)) == pytest.approx(
            1.25, rel=1e-13
        )

    def test_runge_blows_up_near_critical_radius(self):
        small = sup_on_ellipse(RUNGE, EllipseSpec(1.5, 256))
        close = sup_on_ellipse(RUNGE, EllipseSpec(2.41, 256))
        assert close > 50 * small

    def test_near_pole_large_but_finite(self):
        # rounding keeps the runge pole off the sampled contour, so the sup
        # is huge but finite rather than an error
        val = sup_on_ellipse(RUNGE, EllipseSpec(RHO_SUP, 4))
        assert math.isfinite(val) and val > 1e10

    def test_exact_pole_reported(self):
        rho = 1.7
        spec = EllipseSpec(rho, 8)
        _, z = ellipse_points(spec)
        pole = complex(z[0])  # exactly representable boundary point
        with np.errstate(divide="ignore", invalid="ignore"):
            with pytest.raises(PoleOnContourError):
                sup_on_ellipse(lambda zz: 1.0 / (zz - pole), spec)


class TestRemainderExact:
    def test_lam_one_geometric(self):
        for n, rho in ((4, 1.5), (11, 2.0)):
            expected = rho ** (-2.0 * n) / (rho * rho - 1.0)
            assert remainder_exact(1.0, n, rho) == pytest.approx(expected, rel=1e-13)

    def test_vanishes_for_large_rho(self):
        assert remainder_exact(0.5, 10, 1e6) < 1e-11

    def test_positive(self):
        for lam, n, rho in REMAINDER_LATTICE:
            assert remainder_exact(lam, n, rho) > 0.0


class TestRemainderBound:
    def test_low_branch_dominates_exact(self):
        r = remainder_exact(0.5, 10, 1.5)
        bd = remainder_bound(0.5, 10, 1.5, 3)
        assert bd.theorem_id == "T31ii"
        assert bd.total >= r

    def test_high_branch_dominates_exact(self):
        r = remainder_exact(3.2, 50, 1.5)
        bd = remainder_bound(3.2, 50, 1.5)
        assert bd.theorem_id == "T31i"
        assert bd.total >= r

    @pytest.mark.parametrize("lam,n,rho", REMAINDER_LATTICE)
    def test_dominance_for_every_admissible_m(self, lam, n, rho):
        r = remainder_exact(lam, n, rho)
        for m in range(1, n + 1):
            try:
                bd = remainder_bound(lam, n, rho, m)
            except ValueError:
                continue  # m outside the admissibility condition
            assert r <= bd.total * (1 + 1e-12)

    def test_auto_picks_minimum(self):
        lam, n, rho = 0.5, 30, 1.4
        best = remainder_bound(lam, n, rho).total
        totals = [remainder_bound(lam, n, rho, m).total for m in range(1, n + 1)]
        assert best == pytest.approx(min(totals), rel=1e-14)

    def test_vanishes_with_n_at_sqrt_split(self):
        lam, rho = 0.5, 1.5
        vals = [
            remainder_bound(lam, n, rho, int(math.isqrt(n))).total
            for n in (16, 64, 256, 1024)
        ]
        assert all(b < a for a, b in zip(vals, vals[1:]))
        assert vals[-1] < 0.1 * vals[0]

    def test_condition_violation_named(self):
        # tiny rho makes the admissibility condition demand a large m
        with pytest.raises(ValueError, match="admissibility"):
            remainder_bound(3.2, 50, 1.01, 1)

    def test_lam_one_rejected(self):
        with pytest.raises(ValueError):
            remainder_bound(1.0, 10, 1.5)

    def test_low_branch_needs_n3(self):
        with pytest.raises(ValueError):
            remainder_bound(0.5, 2, 1.5, 1)

    def test_breakdown_consistency(self):
        bd = remainder_bound(0.5, 12, 1.5, 4)
        assert bd.total == pytest.approx(bd.constant_factor * bd.rate_factor, rel=1e-12)
        assert bd.total == pytest.approx(sum(bd.terms.values()), rel=1e-12)


class TestTriangleConsistency:
    @pytest.mark.parametrize("lam,n,rho", REMAINDER_LATTICE)
    def test_normalized_within_remainder(self, lam, n, rho):
        w, _ = ellipse_points(EllipseSpec(rho, 64))
        lim = np.abs((1.0 - w ** -2.0) ** (-lam))
        got = np.abs(normalized_on_ellipse(lam, n, w))
        gap = np.max(np.abs(lim - got))
        r = remainder_exact(lam, n, rho)
        assert gap <= r + 1e-12 * (1.0 + lim.max())

    def test_modulus_window(self):
        for rho in (1.1, 1.5, 2.5):
            w, _ = ellipse_points(EllipseSpec(rho, 128))
            mod = np.abs(1.0 - w ** -2.0)
            assert np.all(mod >= (1.0 - rho ** -2.0) * (1 - 1e-14))
            assert np.all(mod <= (1.0 + rho ** -2.0) * (1 + 1e-14))


class TestEnMetric:
    def test_lam_one_degenerate(self):
        with pytest.raises(ValueError):
            e_n_metric(1.0, 100, EllipseSpec(1.4, 64))

    def test_figure_window_sample(self):
        for n in (1000, 3162, 10000):
            e = e_n_metric(0.5, n, EllipseSpec(1.4))
            assert 0.1 / n <= e <= n ** -0.9

    def test_bounded_by_remainder_over_normalization(self):
        lam, rho, n = 1.5, 2.0, 500
        e = e_n_metric(lam, n, EllipseSpec(rho, 256))
        a_norm = abs(1.0 - lam) * abs((1.0 - rho ** -2.0) ** (-lam) - 1.0)
        assert e <= remainder_exact(lam, n, rho) / a_norm * (1 + 1e-12)


class TestTheoremBounds:
    def test_gauss_interp_ratio_form(self):
        lam, rho = 0.5, 2.2
        b40 = interp_bound_gauss(lam, 40, rho, 1.0)
        b41 = interp_bound_gauss(lam, 41, rho, 1.0)
        assert b40.total > 0
        assert b41.total / b40.total == pytest.approx(
            (41.0 / 40.0) ** lam / rho, rel=1e-12
        )
        assert b40.flags == ["c set to 1"]

    def test_gauss_interp_negative_lam_rate(self):
        bd1 = interp_bound_gauss(-0.3, 60, 1.8, 1.0)
        bd2 = interp_bound_gauss(-0.3, 61, 1.8, 1.0)
        assert "uses calibrated D_lambda" in bd1.flags
        assert bd2.total / bd1.total == pytest.approx(1.0 / 1.8, rel=1e-12)

    def test_gauss_diff_value_and_ratio(self):
        lam, rho, n = 0.5, 2.0, 30
        bd = diff_bound_gauss(lam, n, rho, 1.0)
        lam_const = (
            2.0
            * math.gamma(lam + 1.0)
            / math.gamma(2.0 * lam + 2.0)
            * math.sqrt(rho ** 2 + rho ** -2)
            * (1.0 + rho ** -2) ** lam
            / (rho - 1.0) ** 2
        )
        assert bd.total == pytest.approx(lam_const * 30 ** 2.5 / 2.0 ** 30, rel=1e-12)
        bd2 = diff_bound_gauss(lam, n + 2, rho, 1.0)
        assert bd2.total / bd.total == pytest.approx(
            rho ** -2.0 * (1.0 + 2.0 / n) ** (lam + 2.0), rel=1e-12
        )

    def test_lobatto_interp_assembly(self):
        lam, n, rho = 0.5, 20, 2.0
        bd = interp_bound_lobatto(lam, n, rho, 1.0)
        expected = (
            4.0
            * math.sqrt(rho ** 2 + rho ** -2)
            * (1.0 + rho ** -2) ** (lam + 1.0)
            / ((1.0 - 1.0 / rho) ** 2 * (rho - 1.0 / rho) ** 2)
            * math.gamma(lam + 1.0)
            / math.gamma(2.0 * lam + 2.0)
            * n ** (lam + 1.0)
            / rho ** n
        )
        assert bd.total == pytest.approx(expected, rel=1e-12)

    def test_lobatto_vs_gauss_rate_grows_like_n(self):
        lam, rho = 0.5, 2.0
        r20 = interp_bound_lobatto(lam, 20, rho, 1.0).total / interp_bound_gauss(
            lam, 20, rho, 1.0
        ).total
        r40 = interp_bound_lobatto(lam, 40, rho, 1.0).total / interp_bound_gauss(
            lam, 40, rho, 1.0
        ).total
        assert r40 / r20 == pytest.approx(2.0, rel=1e-12)

    def test_lobatto_diff_exponent(self):
        lam, rho, n = 1.5, 1.9, 24
        bd = diff_bound_lobatto(lam, n, rho, 1.0)
        bd2 = diff_bound_lobatto(lam, 2 * n, rho, 1.0)
        assert bd2.total / bd.total == pytest.approx(
            2.0 ** (lam + 3.0) * rho ** (-n), rel=1e-11
        )

    def test_product_invariant(self):
        for bd in (
            interp_bound_gauss(0.5, 12, 1.7, 2.0),
            interp_bound_gauss(-0.3, 12, 1.7, 2.0),
            diff_bound_gauss(1.5, 12, 1.7, 2.0),
            interp_bound_lobatto(1.5, 12, 1.7, 2.0),
            diff_bound_lobatto(0.5, 12, 1.7, 2.0),
        ):
            assert bd.total == pytest.approx(
                bd.constant_factor * bd.rate_factor, rel=1e-12
            )


class TestQuadBound:
    def test_legendre_factor_two(self):
        bd = interp_bound_gauss(0.5, 10, 2.0, 1.0)
        qb = quad_bound(0.5, bd)
        assert qb.total / bd.total == pytest.approx(2.0, rel=1e-13)
        assert qb.theorem_id == "Quad"

    def test_lam_three_halves_factor(self):
        bd = interp_bound_lobatto(1.5, 10, 2.0, 1.0)
        qb = quad_bound(1.5, bd)
        assert qb.total / bd.total == pytest.approx(4.0 / 3.0, rel=1e-13)

    def test_rejects_non_interp_input(self):
        with pytest.raises(ValueError):
            quad_bound(0.5, diff_bound_gauss(0.5, 10, 2.0, 1.0))


class TestBestBoundOverRho:
    def test_minimizer_near_critical_radius(self):
        rho_star, bd = best_bound_over_rho(
            0.5, 40, RUNGE, 1.0, RHO_SUP, 400, "T42", samples=512
        )
        assert 2.2 < rho_star < RHO_SUP
        assert bd.total > 0

    def test_entire_function_prefers_larger_radius(self):
        _, small = best_bound_over_rho(0.5, 20, np.exp, 1.0, 3.0, 100, "T42", samples=256)
        _, large = best_bound_over_rho(0.5, 20, np.exp, 1.0, 6.0, 100, "T42", samples=256)
        assert large.total < small.total

    def test_grid_avoids_endpoints(self):
        # a pole exactly on the rho_max ellipse is never sampled
        rho_star, bd = best_bound_over_rho(
            0.5, 16, RUNGE, 1.0, RHO_SUP, 100, "T41i", samples=512
        )
        assert rho_star < RHO_SUP

    def test_branch_validation(self):
        with pytest.raises(ValueError):
            best_bound_over_rho(0.5, 10, RUNGE, 1.0, 2.0, 50, "T41ii", samples=64)
        with pytest.raises(ValueError):
            best_bound_over_rho(-0.3, 10, RUNGE, 1.0, 2.0, 50, "T41i", samples=64)
        with pytest.raises(ValueError):
            best_bound_over_rho(0.5, 10, RUNGE, 1.0, 2.0, 50, "T99", samples=64)

    def test_skipped_rho_flagged(self):
        from gegenspec.bounds import rho_scan_grid

        # plant a pole exactly on one scanned boundary sample
        rhos = rho_scan_grid(1.0, 3.0, 200)
        spec = EllipseSpec(float(rhos[120]), 4)
        _, z = ellipse_points(spec)
        pole = complex(z[0])
        with np.errstate(divide="ignore", invalid="ignore"):
            rho_star, bd = best_bound_over_rho(
                0.5, 12, lambda zz: 1.0 / (zz - pole), 1.0, 3.0, 200, "T42",
                samples=4,
            )
        assert "skipped rho values with non-finite max" in bd.flags
        assert rho_star != float(rhos[120])


class TestBreakdownSerialization:
    def test_round_trip_dict(self):
        bd = interp_bound_gauss(0.5, 8, 1.5, 1.0)
        d = bd.as_dict()
        assert set(d) == {
            "theorem_id", "constant_factor", "rate_factor", "total",
            "parameters", "flags",
        }
        rebuilt = BoundBreakdown(**{**d, "parameters": d["parameters"]})
        assert rebuilt.total == bd.total

    def test_terms_included_for_remainder(self):
        d = remainder_bound(0.5, 10, 1.5, 2).as_dict()
        assert "terms" in d and set(d["terms"]) == {"head", "geometric_tail", "endgame"}
