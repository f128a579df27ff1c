"""Tests for orbit classification, Boettcher coordinates, and internal rays."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcmullen.dynamics import (
    BoettcherValue,
    NotInBasinError,
    Outcome,
    OutsideComponentError,
    SliceKind,
    SliceSpec,
    boettcher_value,
    classify_parameter,
    internal_ray_point,
    iterate_orbit,
    phi_j,
)
from mcmullen.geometry import center_a_k, k_annulus
from mcmullen.maps import DomainError, MapParams, eval_map


class TestIterateOrbit:
    def test_fixed_v_minus_at_real_center(self):
        p = MapParams.subfamily(3, 0.125)
        r = iterate_orbit(p, p.v_minus, 500)
        assert r.outcome is Outcome.FIXED_V_MINUS
        assert r.bounded

    def test_escape_outside_boundedness_locus(self):
        # the n = 3 slice point 0.02 + 0.2i has an escaping free critical orbit
        p = MapParams.subfamily(3, 0.02 + 0.2j)
        r = iterate_orbit(p, p.v_minus, 500)
        assert r.outcome is Outcome.ESCAPED
        assert not r.bounded
        assert r.shade >= 0.0

    def test_attraction_at_even_center(self):
        p = MapParams.subfamily(4, center_a_k(4, 4))
        r = iterate_orbit(p, p.v_minus, 500)
        assert r.outcome is Outcome.ATTRACTED_TO_V_PLUS
        assert r.entry_iter == 1  # r(v_-) = v_+ exactly

    def test_v_plus_attracted_immediately(self):
        p = MapParams.subfamily(5, 0.1 + 0.05j)
        r = iterate_orbit(p, p.v_plus, 100)
        assert r.outcome is Outcome.ATTRACTED_TO_V_PLUS
        assert r.entry_iter == 0

    def test_pole_seed_counts_as_escape(self):
        p = MapParams.subfamily(3, 0.1)
        r = iterate_orbit(p, 0j, 100)
        assert r.outcome is Outcome.ESCAPED
        assert r.pole

    def test_inner_exit_certifies_escape(self):
        # a seed just inside the inner radius must be flagged escaped at once
        p = MapParams.subfamily(3, 0.125)
        ann = k_annulus(p)
        r = iterate_orbit(p, complex(ann.inner * 0.5), 100)
        assert r.outcome is Outcome.ESCAPED
        assert r.iterations == 0

    def test_budget_validation(self):
        p = MapParams.subfamily(3, 0.125)
        with pytest.raises(DomainError):
            iterate_orbit(p, 1.0, 0)

    @given(
        x=st.floats(min_value=-0.3, max_value=0.3),
        y=st.floats(min_value=-0.3, max_value=0.3),
    )
    @settings(max_examples=60, deadline=None)
    def test_escape_iff_orbit_leaves_annulus(self, x, y):
        # cross-check the kernel against a naive scalar iteration
        p = MapParams.subfamily(3, 0.1 + 0.02j)
        z0 = complex(x, y)
        if abs(z0) < 1e-6:
            z0 += 0.01
        r = iterate_orbit(p, z0, 200)
        ann = k_annulus(p)
        z = z0
        left = not (ann.inner < abs(z) < ann.outer)
        for _ in range(200):
            if left:
                break
            try:
                z = eval_map(p, z)
            except Exception:
                left = True
                break
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                left = True
                break
            if not (ann.inner < abs(z) < ann.outer):
                left = True
        if left:
            assert r.outcome is Outcome.ESCAPED
        else:
            assert r.outcome is not Outcome.ESCAPED


class TestClassifyParameter:
    def test_degenerate_point(self):
        slc = SliceSpec(SliceKind.FIXED_CRIT, 3)
        c = classify_parameter(slc, 0j, 100)
        assert c.minus.outcome is Outcome.UNRESOLVED
        assert c.color == (200, 200, 200)

    def test_subfamily_plus_orbit_short_circuits(self):
        slc = SliceSpec(SliceKind.FIXED_CRIT, 3)
        c = classify_parameter(slc, 0.125, 100)
        assert c.plus.outcome is Outcome.ATTRACTED_TO_V_PLUS
        assert c.plus.entry_iter == 0

    def test_general_slice_iterates_both(self):
        slc = SliceSpec(SliceKind.B_SLICE, 3, a=0.1)
        c = classify_parameter(slc, 10.0, 100)
        # far out in the b plane both critical orbits escape
        assert c.plus.outcome is Outcome.ESCAPED
        assert c.minus.outcome is Outcome.ESCAPED

    def test_linear_slice_degenerate_at_origin(self):
        slc = SliceSpec(SliceKind.LINEAR, 3, t=0.5)
        assert slc.params_at(0j) is None
        p = slc.params_at(0.2)
        assert p.b == pytest.approx(0.1)


class TestBoettcher:
    def _center_params(self, n):
        k = n if n % 2 == 0 else n + 1
        return MapParams.subfamily(n, center_a_k(n, k))

    def test_zero_at_fixed_point(self):
        p = self._center_params(4)
        bv = boettcher_value(p, p.v_plus)
        assert bv.value == 0
        assert bv.modulus == 0.0

    def test_functional_equation(self):
        p = self._center_params(4)
        rng = np.random.default_rng(7)
        checked = 0
        while checked < 20:
            z = p.v_plus + complex(rng.normal(), rng.normal()) * 0.03
            try:
                lhs = boettcher_value(p, eval_map(p, z)).value
                rhs = boettcher_value(p, z).value ** 2
            except NotInBasinError:
                continue
            assert abs(lhs - rhs) < 1e-6
            checked += 1

    def test_modulus_consistent_with_value(self):
        p = self._center_params(5)
        z = p.v_plus + 0.02 - 0.01j
        bv = boettcher_value(p, z)
        assert bv.modulus == pytest.approx(abs(bv.value), rel=1e-9)
        assert isinstance(bv, BoettcherValue)

    def test_linearization_near_fixed_point(self):
        from mcmullen.maps import second_derivative_half

        p = self._center_params(4)
        c2 = second_derivative_half(p)
        z = p.v_plus + 1e-6
        bv = boettcher_value(p, z)
        assert bv.value == pytest.approx(c2 * (z - p.v_plus), rel=1e-4)

    def test_not_in_basin_raises(self):
        p = MapParams.subfamily(3, 0.02 + 0.2j)
        with pytest.raises(NotInBasinError):
            boettcher_value(p, p.v_minus)

    def test_general_family_rejected(self):
        p = MapParams.general(3, 0.1, 0.7)
        with pytest.raises(DomainError):
            boettcher_value(p, 1.0)


class TestPhiJ:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_vanishes_at_even_centers(self, n):
        for j in range(1, n):
            assert abs(phi_j(n, j, center_a_k(n, 2 * j))) < 1e-8

    def test_modulus_below_one_inside_component(self):
        a = center_a_k(4, 2) * 1.02
        assert abs(phi_j(4, 1, a)) < 1.0

    def test_outside_component_raises(self):
        with pytest.raises(OutsideComponentError):
            phi_j(3, 1, 0.02 + 0.2j)

    def test_j_range_validated(self):
        with pytest.raises(DomainError):
            phi_j(3, 0, 0.125)
        with pytest.raises(DomainError):
            phi_j(3, 3, 0.125)


class TestInternalRays:
    def _params(self):
        return MapParams.subfamily(4, center_a_k(4, 4))

    def test_point_has_prescribed_boettcher_value(self):
        p = self._params()
        t, rho = 0.2, 0.7
        z = internal_ray_point(p, t, rho, 6)
        bv = boettcher_value(p, z)
        target = rho * np.exp(2j * np.pi * t)
        assert abs(bv.value - target) < 1e-6

    @pytest.mark.parametrize("t", [0.0, 1 / 8, 1 / 3, 0.5, 5 / 7])
    def test_doubling(self, t):
        p = self._params()
        rho, m = 0.9, 8
        z = internal_ray_point(p, t, rho, m)
        z2 = internal_ray_point(p, (2 * t) % 1.0, rho * rho, m - 1)
        assert abs(eval_map(p, z) - z2) < 1e-6

    def test_ray_approaches_fixed_point_as_rho_to_zero(self):
        p = self._params()
        near = internal_ray_point(p, 0.1, 0.05, 2)
        far = internal_ray_point(p, 0.1, 0.9, 8)
        assert abs(near - p.v_plus) < abs(far - p.v_plus)

    def test_input_validation(self):
        p = self._params()
        with pytest.raises(DomainError):
            internal_ray_point(p, 1.2, 0.5, 4)
        with pytest.raises(DomainError):
            internal_ray_point(p, 0.2, 1.5, 4)
        with pytest.raises(DomainError):
            internal_ray_point(p, 0.2, 0.5, 0)
        with pytest.raises(DomainError):
            internal_ray_point(p, 0.2, 0.5, 200)  # rho^(2^m) underflows
