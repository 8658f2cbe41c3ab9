import cmath
import math

import numpy as np
import pytest

from qnf1d import (
    AsymDoubleDelta,
    AsymRectBarrier,
    Delta,
    DoubleDelta,
    Eckart,
    PhysicalConstants,
    RectBarrier,
    SearchRegion,
    Sech2,
    Step,
    Tanh,
    asymptotic_qnfs,
    closed_form_qnfs,
    find_poles,
    fit_offset_gap,
    perturbative_qnfs,
    pole_condition,
    qnf_energy,
    refine_pole,
    transcendental_qnfs,
    transmission_amplitude,
)
from qnf1d.errors import DomainError, UnsupportedPotentialError
from qnf1d.qnf import rect_barrier_k_series, rect_barrier_q_series

C = PhysicalConstants()

W_INV_E = 0.27846454276107379  # W(1/e), the double-delta damped-mode threshold


class TestClosedForms:
    def test_delta_single_damped_mode(self):
        res = closed_form_qnfs(Delta(1.0), (0, 0), C)
        assert len(res) == 1
        assert res[0].k == 1j
        assert res[0].classification == "damped_mode"
        assert qnf_energy(res[0].k, C) == pytest.approx(-C.h2_2m)

    def test_attractive_delta_is_bound(self):
        res = closed_form_qnfs(Delta(-1.0), (0, 0), C)
        assert res[0].k == -1j
        assert res[0].classification == "bound_state"

    def test_step_has_none(self):
        assert closed_form_qnfs(Step(1.0), (0, 3), C) == []

    def test_double_delta_weak_coupling_damped(self):
        # 2 a k0 = 0.2 < W(1/e): the branch-0 minus-sign mode is imaginary
        res = closed_form_qnfs(DoubleDelta(0.1, 1.0), (0, 0), C)
        modes = {r.sign_choice: r for r in res}
        k = modes["minus"].k
        # frozen from an independent high-precision root of w e^w = -0.2 e^0.2
        assert abs(k - 0.27244022007999078j) < 1e-13
        assert modes["minus"].classification == "damped_mode"

    def test_double_delta_residuals_and_conjugacy(self):
        spec = DoubleDelta(0.5, 1.0)
        res = closed_form_qnfs(spec, (-5, 5), C)
        assert all(r.residual < 1e-10 for r in res)
        # each QNF has a mirror partner -conj(k); for the minus-sign family
        # the partner sits on branch -n-1 (a cut-crossing index shift), so
        # hunt for mirrors in a wider branch window
        wide = [r.k for r in closed_form_qnfs(spec, (-7, 7), C)]
        for r in res:
            assert min(abs(-r.k.conjugate() - q) for q in wide) < 1e-9

    def test_tanh_example(self):
        res = closed_form_qnfs(Tanh(0.0, 2.0, 1.0), (1, 1), C)
        assert res[0].k == pytest.approx(2j)  # transmitted-side wavenumber
        assert res[0].k_minus == pytest.approx(0j)

    def test_tanh_rejects_nonpositive_indices(self):
        with pytest.raises(DomainError):
            closed_form_qnfs(Tanh(0.0, 2.0, 1.0), (0, 2), C)

    def test_sech2_example(self):
        res = closed_form_qnfs(Sech2(-1.0, 1.0), (0, 0), C)
        modes = {r.sign_choice: r for r in res}
        assert modes["plus"].k == pytest.approx(2j)
        assert modes["minus"].k == pytest.approx(-1j)
        assert modes["minus"].classification == "bound_state"

    def test_eckart_residual_condition(self):
        spec = Eckart(0.0, 2.0, -1.0, 1.0)
        for r in closed_form_qnfs(spec, (0, 5), C):
            assert r.residual < 1e-10

    def test_barriers_are_transcendental_only(self):
        with pytest.raises(UnsupportedPotentialError):
            closed_form_qnfs(RectBarrier(1.0, 1.0), (0, 1), C)


class TestThreshold:
    def test_imaginary_to_complex_transition_at_w_inv_e(self):
        a = 1.0

        def is_imaginary(g):
            spec = DoubleDelta(g / (2.0 * a), a)  # k0 = g / (2a)
            res = closed_form_qnfs(spec, (0, 0), C)
            k = next(r.k for r in res if r.sign_choice == "minus")
            return abs(k.real) < 1e-10 * max(1.0, abs(k))

        lo, hi = 0.2, 0.35
        assert is_imaginary(lo) and not is_imaginary(hi)
        while hi - lo > 1e-8:
            mid = 0.5 * (lo + hi)
            if is_imaginary(mid):
                lo = mid
            else:
                hi = mid
        assert abs(0.5 * (lo + hi) - W_INV_E) < 1e-6


class TestTranscendental:
    def test_rect_merge_point(self):
        def count(c0a):
            return len(transcendental_qnfs(RectBarrier(c0a**2 / 2.0, 1.0),
                                           "imaginary_axis", C))

        assert count(0.6) == 2
        assert count(0.7) == 0
        lo, hi = 0.6, 0.7
        while hi - lo > 1e-5:
            mid = 0.5 * (lo + hi)
            if count(mid) == 2:
                lo = mid
            else:
                hi = mid
        merge = 0.5 * (lo + hi)
        assert abs(merge - 0.663) <= 0.005
        roots = transcendental_qnfs(RectBarrier(lo**2 / 2.0, 1.0),
                                    "imaginary_axis", C)
        qa = sum(abs(r.aux) for r in roots) / 2.0
        assert abs(qa - 1.2) <= 0.05

    def test_rect_lower_root_matches_series(self):
        spec = RectBarrier(0.005, 1.0)  # k0 = 0.1
        lo = transcendental_qnfs(spec, "imaginary_axis", C)[0]
        assert abs(lo.aux - 0.10050549300503645j) < 1e-12  # frozen root of u = c cosh u
        assert abs(lo.aux - rect_barrier_q_series(0.1, 1.0)) < 1e-7
        assert lo.residual < 1e-10

    def test_attractive_rect_bound_states(self):
        spec = RectBarrier(-2.0, 1.0)
        roots = transcendental_qnfs(spec, "imaginary_axis", C)
        assert roots, "deep well must bind"
        k0_mag = math.sqrt(C.p2 * 2.0)
        for r in roots:
            assert r.classification == "bound_state"
            assert abs(r.aux) <= k0_mag + 1e-12  # always |q| <= |k0|
            assert r.residual < 1e-10

    def test_asym_dd_imaginary_root_exceeds_couplings(self):
        spec = AsymDoubleDelta(0.05, 0.08, 1.0)
        roots = transcendental_qnfs(spec, "imaginary_axis", C)
        assert len(roots) == 2
        for r in roots:
            assert r.k.imag > 0.08
            assert r.residual < 1e-10

    def test_asym_dd_strong_coupling_empty(self):
        # above the damped-mode threshold no imaginary-axis QNF survives
        assert transcendental_qnfs(AsymDoubleDelta(1.0, 2.0, 1.0),
                                   "imaginary_axis", C) == []

    def test_region_search_matches_closed_form(self):
        spec = DoubleDelta(0.5, 1.0)
        region = SearchRegion(0.5, 8.0, 0.05, 2.0, 6.0)
        found = transcendental_qnfs(spec, region, C)
        closed = [r.k for r in closed_form_qnfs(spec, (-3, 3), C)
                  if 0.5 <= r.k.real <= 8.0 and 0.05 <= r.k.imag <= 2.0]
        assert len(found) == len(closed)
        for r in found:
            assert min(abs(r.k - q) for q in closed) < 1e-8

    def test_bad_descriptor(self):
        with pytest.raises(DomainError):
            transcendental_qnfs(RectBarrier(1.0, 1.0), "real_axis", C)


class TestPerturbative:
    def test_symmetric_limit_reproduces_closed_form(self):
        # k+ = k- collapses the order-0 estimate onto the plus-sign tower
        spec = AsymDoubleDelta(0.3, 0.3, 1.0)
        est = perturbative_qnfs(spec, "near_symmetric_order0", 1, C)
        closed = closed_form_qnfs(DoubleDelta(0.3, 1.0), (1, 1), C)
        plus = next(r.k for r in closed if r.sign_choice == "plus")
        assert abs(est.k - plus) < 1e-12

    def test_near_symmetric_order_scaling(self):
        kbar, a, n = 0.3, 1.0, 1
        errs0, errs2 = [], []
        for eps in (0.1, 0.05, 0.025):
            spec = AsymDoubleDelta(kbar + eps / 2.0, kbar - eps / 2.0, a)
            e2 = perturbative_qnfs(spec, "near_symmetric_order2", n, C)
            exact, _ = refine_pole(spec, e2.k, C, amplitude=transmission_amplitude)
            e0 = perturbative_qnfs(spec, "near_symmetric_order0", n, C)
            errs0.append(abs(e0.k - exact))
            errs2.append(abs(e2.k - exact))
        p0 = np.polyfit(np.log([0.1, 0.05, 0.025]), np.log(errs0), 1)[0]
        p2 = np.polyfit(np.log([0.1, 0.05, 0.025]), np.log(errs2), 1)[0]
        assert 1.7 <= p0 <= 2.3
        assert 3.5 <= p2 <= 4.5

    def test_small_separation_first_order(self):
        # k = i(k+ + k-) + 4i k+ k- a + O(a^2); the a-coefficient sign is
        # fixed against the exact pole condition (one display in the
        # literature carries the opposite sign)
        kp, km = 0.3, 0.5
        errs = []
        for a in (0.02, 0.01, 0.005):
            spec = AsymDoubleDelta(kp, km, a)
            est = perturbative_qnfs(spec, "small_separation", 0, C)
            exact = min(transcendental_qnfs(spec, "imaginary_axis", C),
                        key=lambda r: abs(r.k - est.k)).k
            errs.append(abs(est.k - exact))
        # halving a quarters the error (O(a^2) remainder)
        assert 3.0 < errs[0] / errs[1] < 5.0
        assert 3.0 < errs[1] / errs[2] < 5.0

    def test_rect_series_values(self):
        assert rect_barrier_q_series(0.1, 1.0) == pytest.approx(
            1j * 0.1 * (1.0 + 0.005 + (13.0 / 24.0) * 1e-4), abs=1e-15
        )
        est = perturbative_qnfs(RectBarrier(0.005, 1.0), "small_k0a_series", 0, C)
        assert est.k == pytest.approx(rect_barrier_k_series(0.1, 1.0))

    def test_rect_series_sixth_order(self):
        cas = [0.2, 0.1, 0.05]
        errs = []
        for ca in cas:
            spec = RectBarrier(ca**2 / 2.0, 1.0)
            exact = transcendental_qnfs(spec, "imaginary_axis", C)[0]
            errs.append(abs(rect_barrier_q_series(ca, 1.0) - exact.aux) / abs(exact.aux))
        slope = np.polyfit(np.log(cas), np.log(errs), 1)[0]
        assert 5.5 <= slope <= 6.5

    def test_asym_rect_small_a(self):
        # symmetric check: the displayed series reduces to the symmetric
        # barrier series, and the k-space error falls like a^3
        errs = []
        for a, v3 in ((0.08, 0.2), (0.04, 0.05), (0.02, 0.0125)):
            spec = AsymRectBarrier(0.0, 1.0, v3, a)
            est = perturbative_qnfs(spec, "small_a_asym_rect", 0, C)
            exact, _ = refine_pole(spec, est.k, C, amplitude=transmission_amplitude)
            errs.append(abs(est.k - exact))
        assert 6.0 < errs[0] / errs[1] < 11.0
        assert 6.0 < errs[1] / errs[2] < 11.0

    def test_asym_rect_symmetric_value(self):
        # at V1 = V3 the displayed k2^2 series equals the symmetric one
        p2 = C.p2
        a = 0.05
        spec = AsymRectBarrier(0.0, 1.0, 0.0, a)
        est = perturbative_qnfs(spec, "small_a_asym_rect", 0, C)
        k0sq = p2 * 1.0
        expect_k2sq = -k0sq * (1.0 + k0sq * a * a)
        assert est.aux**2 == pytest.approx(expect_k2sq, rel=1e-12)

    def test_regime_validation(self):
        with pytest.raises(DomainError):
            perturbative_qnfs(RectBarrier(1.0, 1.0), "near_symmetric_order0", 0, C)
        with pytest.raises(DomainError):
            perturbative_qnfs(AsymDoubleDelta(0.1, 0.2, 1.0), "small_k0a_series", 0, C)
        with pytest.raises(DomainError):
            perturbative_qnfs(RectBarrier(-1.0, 1.0), "small_k0a_series", 0, C)


class TestAsymptotic:
    def test_double_delta_improves_with_branch(self):
        spec = DoubleDelta(0.5, 1.0)
        errs = {}
        for n in (3, 6):
            approx = asymptotic_qnfs(spec, n, C, sign="plus")
            exact = next(r.k for r in closed_form_qnfs(spec, (n, n), C)
                         if r.sign_choice == "plus")
            errs[n] = abs(approx.k - exact) / abs(exact)
        assert errs[6] < errs[3]

    def test_rect_barrier_improves_with_branch(self):
        spec = RectBarrier(0.5, 1.0)
        errs = {}
        for n in (3, 6):
            approx = asymptotic_qnfs(spec, n, C)
            exact, _ = refine_pole(spec, approx.k, C,
                                   amplitude=transmission_amplitude)
            errs[n] = abs(approx.k - exact) / abs(exact)
        assert errs[6] < errs[3]

    def test_tanh_linear_spacing(self):
        approx = asymptotic_qnfs(Tanh(0.0, 2.0, 1.0), 9, C)
        assert approx.k == 9j
        exact = closed_form_qnfs(Tanh(0.0, 2.0, 1.0), (9, 9), C)[0].k
        assert abs(approx.k - exact) / abs(exact) < 0.02

    def test_sech2_offset(self):
        approx = asymptotic_qnfs(Sech2(-1.0, 1.0), 7, C, sign="plus")
        exact = next(r.k for r in closed_form_qnfs(Sech2(-1.0, 1.0), (7, 7), C)
                     if r.sign_choice == "plus")
        assert abs(approx.k - exact) < 1e-12  # affine tower: exact at all n


class TestEnergies:
    def test_zero(self):
        assert qnf_energy(0.0, C) == 0.0

    def test_delta(self):
        k0 = 2.0
        assert qnf_energy(1j * k0, C) == pytest.approx(-C.h2_2m * k0**2)

    def test_tanh_energy_display(self):
        spec = Tanh(0.0, 2.0, 1.0)
        n = 3
        r = closed_form_qnfs(spec, (n, n), C)[0]
        e = qnf_energy(r.k, C, v_offset=2.0)
        dv = 2.0
        expect = (-C.h2_2m * n**2 / spec.a**2 + 0.5 * dv
                  - dv**2 * spec.a**2 / (16.0 * C.h2_2m * n**2))
        assert complex(e).real == pytest.approx(expect, rel=1e-12)
        # both sides give the same energy
        e_minus = qnf_energy(r.k_minus, C, v_offset=0.0)
        assert abs(e - e_minus) < 1e-12

    def test_relativistic_omega_convention(self):
        c = PhysicalConstants(mode="relativistic")
        assert qnf_energy(1.5j, c) == 1.5j


class TestFits:
    def test_sech2_exact_affine(self):
        tower = [r for r in closed_form_qnfs(Sech2(-1.0, 1.0), (1, 10), C)
                 if r.sign_choice == "plus"]
        fit = fit_offset_gap(tower, "linear")
        assert fit.verdict == "clean_offset_gap"
        assert fit.gap == pytest.approx(1j, abs=1e-12)
        assert fit.offset == pytest.approx(2j, abs=1e-11)

    def test_tanh_inverse_square_residuals(self):
        spec = Tanh(0.0, 2.0, 1.0)
        fits = {}
        for lo in (5, 10, 20):
            tower = closed_form_qnfs(spec, (lo, lo + 10), C)
            fits[lo] = max(fit_offset_gap(tower, "linear").residuals)
        # doubling the window start shrinks residuals roughly fourfold
        assert 2.5 < fits[5] / fits[10] < 6.0
        assert 2.5 < fits[10] / fits[20] < 6.0
        fit = fit_offset_gap(closed_form_qnfs(spec, (5, 15), C), "linear")
        assert abs(fit.gap - 1j) < 0.02

    def test_double_delta_logarithmic(self):
        tower = [r for r in closed_form_qnfs(DoubleDelta(0.5, 1.0), (5, 15), C)
                 if r.sign_choice == "plus"]
        lin = fit_offset_gap(tower, "linear")
        log = fit_offset_gap(tower, "linear_plus_log")
        assert lin.verdict == "logarithmic_subleading"
        assert max(log.residuals) < 0.2 * max(lin.residuals)
        # the real-axis spacing is pi/a and the log coefficient is ~ i/(2a)
        assert lin.gap.real == pytest.approx(math.pi, abs=0.01)
        assert log.log_coeff.imag == pytest.approx(0.5, abs=0.1)

    def test_insufficient_data(self):
        tower = [r for r in closed_form_qnfs(Sech2(-1.0, 1.0), (1, 3), C)
                 if r.sign_choice == "plus"]
        with pytest.raises(DomainError):
            fit_offset_gap(tower, "linear")


class TestEckartLimits:
    def test_reduces_to_tanh_tower(self):
        a = 0.02
        dv = 0.5
        eck = closed_form_qnfs(Eckart(0.0, dv, 1e-8, a), (0, 5), C)
        tanh = closed_form_qnfs(Tanh(0.0, dv, a), (1, 6), C)
        plus = {r.branch: r.k for r in eck if r.sign_choice == "plus"}
        target = {r.branch: r.k for r in tanh}
        for n, k in plus.items():
            assert abs(k - target[n + 1]) < 1e-9

    def test_reduces_to_sech2_tower(self):
        # keep a * p2 / |d| small so the first-order V+- sensitivity sits
        # below the 1e-9 comparison scale
        a = 0.1
        v0 = -100.0
        eck = closed_form_qnfs(Eckart(0.0, 1e-8, v0, a), (0, 5), C)
        sech = closed_form_qnfs(Sech2(v0, a), (0, 5), C)
        for sign in ("plus", "minus"):
            left = {r.branch: r.k for r in eck if r.sign_choice == sign}
            right = {r.branch: r.k for r in sech if r.sign_choice == sign}
            for n in left:
                if n in right:
                    assert abs(left[n] - right[n]) < 1e-9


class TestOracleAgreement:
    def test_double_delta_tower_certified(self):
        spec = DoubleDelta(0.5, 1.0)
        region = SearchRegion(-15.5, 15.5, 0.005, 2.0, 6.0)
        rep = find_poles(spec, region, C)
        closed = [r for r in closed_form_qnfs(spec, (-6, 6), C)
                  if region.re_min <= r.k.real <= region.re_max
                  and region.im_min <= r.k.imag <= region.im_max]
        assert len(rep.poles) == len(closed)
        for r in closed:
            assert min(abs(r.k - k) for k, _, _ in rep.poles) < 1e-8

    def test_pole_condition_consistency(self):
        # the residual functions vanish only at the towers
        spec = DoubleDelta(0.5, 1.0)
        r = closed_form_qnfs(spec, (2, 2), C)[0]
        assert pole_condition(spec, r.k, C) < 1e-12
        assert pole_condition(spec, r.k + 0.1, C) > 1e-3
