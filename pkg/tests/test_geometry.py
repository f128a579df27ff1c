"""Tests for centers, the spine, annuli, thresholds, and boundary curves.

Frozen reference values come from a 50-digit mpmath evaluation of the same
closed forms and from mpmath.findroot for the threshold equations.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcmullen.geometry import (
    AnnulusBounds,
    BranchError,
    ConvergenceError,
    WBoundarySpec,
    WCurve,
    center_a_k,
    centers,
    ellipse_contains,
    ellipse_spec,
    k_annulus,
    m_annulus,
    outer_boundary_margin,
    outer_boundary_margin_argmin,
    regime_thresholds,
    spine_point,
    spine_polyline,
    u_prime_region,
    v_minus_bound,
    w_boundary_point,
)
from mcmullen.maps import (
    DomainError,
    MapParams,
    eval_map,
    subfamily_v_minus,
)

# mpmath (50 dps) oracles
A7_OF_5 = 0.10406845864954878796j
A6_OF_6 = 0.18946457081379976029
A2_OF_3 = -0.081189881604791111j
Q_3, RHO_3 = 3.6162689720652948706, 4.3738988882834125998
Q_5, RHO_5 = 3.6756551837792450995, 4.3107138715434677634
L_5 = 0.81935607223853890906
SPINE_4_AT_1 = complex(0.052363571664879405327, 0.16086858578525890484)
G_4_AT_1_3 = 205.75730721


class TestCenters:
    def test_exact_real_center(self):
        assert center_a_k(3, 3) == pytest.approx(0.125, abs=1e-15)

    def test_oracle_values(self):
        assert center_a_k(3, 2) == pytest.approx(A2_OF_3, abs=1e-14)
        assert center_a_k(5, 7) == pytest.approx(A7_OF_5, abs=1e-14)
        assert center_a_k(6, 6) == pytest.approx(A6_OF_6, abs=1e-14)

    def test_count_is_2n_minus_1(self):
        for n in (3, 4, 6):
            assert len(centers(n)) == 2 * n - 1

    def test_degenerate_k_rejected(self):
        with pytest.raises(DomainError):
            center_a_k(3, 0)
        with pytest.raises(DomainError):
            center_a_k(3, 6)

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_odd_centers_fix_v_minus(self, n):
        for k in range(1, 2 * n, 2):
            p = MapParams.subfamily(n, center_a_k(n, k))
            image = eval_map(p, p.v_minus)
            assert abs(image - p.v_minus) < 1e-9 * (1 + abs(p.v_minus))

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_even_centers_send_v_minus_to_v_plus(self, n):
        for k in range(2, 2 * n, 2):
            p = MapParams.subfamily(n, center_a_k(n, k))
            image = eval_map(p, p.v_minus)
            assert abs(image - p.v_plus) < 1e-9 * (1 + abs(p.v_plus))

    def test_conjugate_symmetry(self):
        # a_k and a_{2n-k} are complex conjugates
        for n in (3, 5):
            for k in range(1, 2 * n):
                lhs = center_a_k(n, k)
                rhs = center_a_k(n, 2 * n - k)
                assert lhs == pytest.approx(rhs.conjugate(), abs=1e-14)


class TestSpine:
    def test_limit_curve_is_cardioid(self):
        assert spine_point(math.inf, 0.0) == pytest.approx(0.25)
        assert spine_point(math.inf, math.pi) == pytest.approx(0.0)
        assert spine_point(None, math.pi / 2) == pytest.approx((1 + 1j) ** 2 / 16)

    def test_finite_n_oracle(self):
        assert spine_point(4, 1.0) == pytest.approx(SPINE_4_AT_1, abs=1e-11)

    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_defining_property(self, n):
        for theta in (0.0, 0.7, 1.9, 4.5, 5.8):
            a = spine_point(n, theta)
            assert abs(abs(subfamily_v_minus(n, a)) - 1.0) < 1e-9

    def test_cusp_window_raises_branch_error(self):
        # at theta = pi the iteration lands on a spurious squared-equation
        # solution whose principal square root has the wrong sign
        with pytest.raises(BranchError):
            spine_point(3, math.pi)

    def test_polyline_skips_bad_angles_only(self):
        pts = spine_polyline(3, 64)
        assert 40 < len(pts) <= 64
        for theta, a in pts:
            assert abs(abs(subfamily_v_minus(3, a)) - 1.0) < 1e-9

    def test_polyline_full_for_limit_curve(self):
        assert len(spine_polyline(math.inf, 64)) == 64


class TestKAnnulus:
    def test_subfamily_small_a_uses_tight_bound(self):
        p = MapParams.subfamily(3, 0.125)
        ann = k_annulus(p)
        assert ann.outer == 2.0
        assert ann.inner == pytest.approx(0.125 ** (1 / 3) / 2)

    def test_general_bound(self):
        p = MapParams.general(3, 2.0, 5.0)
        ann = k_annulus(p)
        assert ann.outer == 5.0
        assert ann.inner == pytest.approx(2.0 ** (1 / 3) / 5.0)

    def test_contains(self):
        ann = AnnulusBounds(0.5, 2.0)
        assert ann.contains(1.0)
        assert not ann.contains(0.4)
        assert not ann.contains(2.5)

    def test_invalid_bounds_rejected(self):
        with pytest.raises(DomainError):
            AnnulusBounds(2.0, 1.0)


class TestRegimeThresholds:
    def test_oracle_n3(self):
        t = regime_thresholds(3)
        assert t.q_n == pytest.approx(Q_3, abs=1e-9)
        assert t.rho_n == pytest.approx(RHO_3, abs=1e-9)

    def test_oracle_n5(self):
        t = regime_thresholds(5)
        assert t.q_n == pytest.approx(Q_5, abs=1e-9)
        assert t.rho_n == pytest.approx(RHO_5, abs=1e-9)

    def test_monotone_in_n(self):
        rows = [regime_thresholds(n) for n in range(3, 13)]
        for lo, hi in zip(rows, rows[1:]):
            assert hi.q_n > lo.q_n
            assert hi.rho_n < lo.rho_n

    def test_defining_equations(self):
        t = regime_thresholds(7)
        h = lambda x: math.sqrt(4 * x + x ** (1 / 7))  # noqa: E731
        assert h(t.q_n) == pytest.approx(4.0, abs=1e-9)
        assert h(t.rho_n) == pytest.approx(t.rho_n, abs=1e-9)


class TestEllipse:
    def test_focal_consistency(self):
        # semi-axes 2^n +- |a|/2^n give focal distance exactly 2 sqrt|a|
        p = MapParams.subfamily(4, 0.09 + 0.02j)
        e = ellipse_spec(p)
        focal = math.sqrt(e.semi_major ** 2 - e.semi_minor ** 2)
        assert focal == pytest.approx(2 * math.sqrt(abs(p.a)), abs=1e-9)
        assert abs(e.foci[0] - e.foci[1]) == pytest.approx(2 * focal, abs=1e-9)

    def test_foci_are_critical_values(self):
        p = MapParams.subfamily(3, 0.1)
        e = ellipse_spec(p)
        assert e.foci == (p.v_plus, p.v_minus)

    def test_contains_disk_of_radius_two(self):
        p = MapParams.subfamily(3, 0.125)
        for theta in np.linspace(0, 2 * math.pi, 32, endpoint=False):
            assert ellipse_contains(p, 2.0 * np.exp(1j * theta))

    def test_margin_oracle(self):
        assert outer_boundary_margin(1.3, 4) == pytest.approx(G_4_AT_1_3, abs=1e-6)

    def test_argmin_n4_is_one(self):
        # (2^2 / 4)^(1/7) = 1
        assert outer_boundary_margin_argmin(4) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("n", range(3, 10))
    def test_margin_positive_on_working_interval(self, n):
        xs = np.linspace(1e-3, 4.0, 400)
        assert all(outer_boundary_margin(float(x), n) > 0 for x in xs)


class TestPolarRegions:
    def test_critical_point_inside_its_region(self):
        from mcmullen.maps import critical_set

        p = MapParams.subfamily(4, 0.1 + 0.1j)
        cs = critical_set(p)
        for k, w in enumerate(cs.points):
            assert u_prime_region(4, p.a, k).contains(complex(w))

    def test_regions_disjoint_in_angle(self):
        r0 = u_prime_region(3, 0.2, 0)
        r1 = u_prime_region(3, 0.2, 1)
        probe = abs(0.2) ** (1 / 3)  # modulus inside both
        z0 = probe * np.exp(1j * r0.arg_center)
        assert r0.contains(z0) and not r1.contains(z0)


class TestWBoundary:
    def test_tau_curve_property(self):
        # v_- = a^(1/2n) - 4 sqrt(a) points into the left half plane on the
        # principal branch, so sample angles there
        spec = WBoundarySpec(k=1, curve=WCurve.TAU)
        for theta in (2.0, math.pi, 4.2):
            a = w_boundary_point(spec, 4, theta)
            assert abs(abs(subfamily_v_minus(4, a)) - 2.0) < 1e-8

    def test_tau_unattainable_angle_raises(self):
        spec = WBoundarySpec(k=1, curve=WCurve.TAU)
        with pytest.raises(ConvergenceError):
            w_boundary_point(spec, 4, 0.8)

    def test_beta_curve_property(self):
        spec = WBoundarySpec(k=1, curve=WCurve.BETA)
        a = w_boundary_point(spec, 4, 2.5)
        vm = subfamily_v_minus(4, a)
        assert abs(abs(vm) - abs(a) ** (1 / 4) / 2) < 1e-8

    @pytest.mark.parametrize("k", [2, 3, 4, 5])
    def test_radial_curve_property(self, k):
        spec = WBoundarySpec(k=k, curve=WCurve.RHO_PLUS)
        a = w_boundary_point(spec, 4, 1.0)
        vm = subfamily_v_minus(4, a)
        arg_wk = (np.angle(a) + 2 * np.pi * k) / 8
        d = (np.angle(vm) - arg_wk - np.pi / 8) % (2 * np.pi)
        if d > np.pi:
            d -= 2 * np.pi
        assert abs(d) < 1e-8

    def test_radial_curve_on_branch_cut_fails_loudly(self):
        # for k = 1 at this modulus the solution parameter sits on the
        # Arg(a) = pi cut, where the principal-branch parameterization is
        # discontinuous; the solver reports failure instead of a wrong point
        spec = WBoundarySpec(k=1, curve=WCurve.RHO_PLUS)
        with pytest.raises(ConvergenceError):
            w_boundary_point(spec, 4, 1.0)

    def test_domain_validation(self):
        spec = WBoundarySpec(k=1, curve=WCurve.RHO_PLUS)
        with pytest.raises(DomainError):
            w_boundary_point(spec, 4, 0.0)
        with pytest.raises(DomainError):
            w_boundary_point(spec, 4, 3.0)


class TestVMinusBound:
    def test_oracle_n5(self):
        assert v_minus_bound(5) == pytest.approx(L_5, abs=1e-12)

    def test_tabulated_bounds(self):
        table = {3: 0.95, 4: 0.87, 5: 0.82, 6: 0.8, 7: 0.77, 10: 0.73,
                 15: 0.7, 25: 0.66, 50: 0.64, 100: 0.63}
        for n, bound in table.items():
            assert v_minus_bound(n) < bound

    def test_limit(self):
        assert v_minus_bound(math.inf) < 0.62
        assert v_minus_bound(None) == v_minus_bound(math.inf)

    @given(n=st.integers(min_value=3, max_value=200))
    @settings(max_examples=50)
    def test_decreasing(self, n):
        assert v_minus_bound(n) > v_minus_bound(n + 1)


class TestMAnnulus:
    def test_default_bounds(self):
        ann = m_annulus()
        assert ann.center == 0.125
        assert ann.inner == pytest.approx(0.028)
        assert ann.outer == pytest.approx(0.40)

    def test_contains_is_relative_to_center(self):
        ann = m_annulus()
        assert ann.contains(0.125 + 0.1j)
        assert not ann.contains(0.125)
