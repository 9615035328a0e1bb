"""Oscillator + inverse-square core: coupling window, xi, ladders."""

import math

import mpmath as mp
import numpy as np
import pytest

from singular_sae import oscillator as osc
from singular_sae.errors import CouplingOutOfRange, PoleError
from singular_sae.u2ext import ExtensionSpec, decompose, named_extension, recompose

mp.mp.dps = 30

MODEL = osc.OscillatorModel.from_a(0.75)


class TestModel:
    def test_a_from_spec_value(self):
        # 8 m g / hbar^2 = 1.25  ->  a = sqrt(2.25)/2 = 0.75
        m = osc.OscillatorModel(g=1.25 / 8.0)
        assert osc.a_param(m) == pytest.approx(0.75, rel=1e-15)
        assert m.c1 == pytest.approx(1.75) and m.c2 == pytest.approx(0.25)

    def test_window_lower_limit(self):
        m = osc.OscillatorModel(g=1e-9)
        assert osc.a_param(m) == pytest.approx(0.5, abs=1e-8)

    def test_window_boundaries_rejected(self):
        for g in (0.0, -0.1, 3.0 / 8.0, 0.5):
            with pytest.raises(CouplingOutOfRange):
                osc.OscillatorModel(g=g)

    def test_window_enforced_in_physical_units(self):
        with pytest.raises(CouplingOutOfRange):
            osc.OscillatorModel(g=1.0, hbar=1.0, m=2.0)   # limit 3/16
        osc.OscillatorModel(g=0.18, hbar=1.0, m=2.0)       # inside

    def test_from_a_roundtrip(self):
        for a in (0.55, 0.75, 0.95):
            assert osc.OscillatorModel.from_a(a).a == pytest.approx(a, rel=1e-14)


class TestXi:
    def test_zero_at_c2(self):
        assert osc.xi_bound(MODEL.c2, MODEL) == 0.0

    def test_pole_at_c1(self):
        with pytest.raises(PoleError):
            osc.xi_bound(MODEL.c1, MODEL)
        with pytest.raises(PoleError):
            osc.xi_bound(MODEL.c1 + 4.0, MODEL)

    def test_against_gamma_oracle(self):
        for lam in (0.9, -0.6, 2.3, 3.9, -25.0):
            c1, c2 = MODEL.c1, MODEL.c2
            expected = float(
                (1.0 / (c2 - c1))
                * mp.gamma((c1 - lam) / 2) / mp.gamma((c2 - lam) / 2)
                * mp.gamma(c2) / mp.gamma(c1)
            )
            assert osc.xi_bound(lam, MODEL) == pytest.approx(expected, rel=1e-11)

    def test_deep_lambda_stays_finite(self):
        val = osc.xi_bound(-1e9, MODEL)
        assert math.isfinite(val) and val < 0.0

    def test_pole_zero_alternation(self):
        # sign change across each pole c1 + 2n, zero crossing at c2 + 2n
        for n in range(3):
            p = MODEL.c1 + 2 * n
            assert osc.xi_bound(p - 1e-3, MODEL) > 0 > osc.xi_bound(p + 1e-3, MODEL)
            z = MODEL.c2 + 2 * n
            lo, hi = osc.xi_bound(z - 1e-3, MODEL), osc.xi_bound(z + 1e-3, MODEL)
            assert lo < 0 < hi
            assert abs(lo) < 0.1 and abs(hi) < 0.1


class TestSpectra:
    def test_identity_ladder(self):
        res = osc.bound_spectrum(MODEL, named_extension("I"), 5)
        for n, lv in enumerate(res.levels):
            assert lv.lam == pytest.approx(2 * n + 0.25, abs=1e-12)
            assert lv.degeneracy == 2
            assert lv.E == pytest.approx(lv.lam, rel=1e-15)   # hbar*omega = 1

    def test_friedrichs_ladder(self):
        res = osc.bound_spectrum(MODEL, named_extension("-I"), 5)
        for n, lv in enumerate(res.levels):
            assert lv.lam == pytest.approx(2 * n + 1.75, abs=1e-12)
            assert lv.degeneracy == 2

    def test_ladder_spacing_property(self):
        for name in ("I", "-I"):
            res = osc.bound_spectrum(MODEL, named_extension(name), 6)
            es = res.energies
            for a, b in zip(es, es[1:]):
                assert b - a == pytest.approx(2.0 * MODEL.hbar * MODEL.omega,
                                              abs=1e-9)

    def test_interleaved_separated_case(self):
        res = osc.bound_spectrum(MODEL, named_extension(f"diag:0,{math.pi}"), 4)
        assert [lv.lam for lv in res.levels] == pytest.approx(
            [0.25, 1.75, 2.25, 3.75], abs=1e-12)
        assert all(lv.degeneracy == 1 for lv in res.levels)

    def test_generic_theta_root_condition(self):
        spec = ExtensionSpec(2.1, 2.1, 0.0, 0.0, 1.0)
        res = osc.bound_spectrum(MODEL, spec, 4)
        ell = 1.0 / math.tan(1.05)
        for lv in res.levels:
            assert lv.degeneracy == 2
            xi = osc.xi_bound(lv.lam, MODEL)
            assert abs(xi + 1.0 / ell) < 1e-7 * max(abs(xi), 1.0)

    def test_branch_independence_under_v_conjugation(self):
        # levels depend only on the eigenphases, never on (mu, nu)
        rng = np.random.default_rng(31)
        base = None
        for _ in range(20):
            spec = ExtensionSpec(0.9, 2.6, float(rng.uniform(0, math.pi)),
                                 float(rng.uniform(0, 2 * math.pi)), 1.0)
            u = recompose(spec)
            res = osc.bound_spectrum(MODEL, decompose(u), 4)
            es = res.energies
            if base is None:
                base = es
            else:
                for a, b in zip(es, base):
                    assert abs(a - b) <= 1e-10 * max(abs(b), 1.0)

    def test_swapped_eigenphases_same_levels(self):
        r1 = osc.bound_spectrum(MODEL, ExtensionSpec(0.9, 2.6, 0, 0, 1.0), 5)
        r2 = osc.bound_spectrum(MODEL, ExtensionSpec(2.6, 0.9, 0, 0, 1.0), 5)
        assert r1.energies == pytest.approx(r2.energies, rel=1e-12)


class TestFreeCase:
    def test_harmonic_limit(self):
        model = osc.OscillatorModel.from_a(0.5 + 1e-6)
        res = osc.free_case_spectrum(model, 6)
        for n, lv in enumerate(res.levels):
            assert abs(lv.lam - (n + 0.5)) < 1e-4

    def test_monotone_approach(self):
        devs = []
        for delta in (1e-2, 1e-3, 1e-4):
            model = osc.OscillatorModel.from_a(0.5 + delta)
            res = osc.free_case_spectrum(model, 4)
            devs.append(max(abs(lv.lam - (n + 0.5))
                            for n, lv in enumerate(res.levels)))
        assert devs[0] > devs[1] > devs[2]

    def test_sigma1_is_union_of_ladders(self):
        res = osc.free_case_spectrum(MODEL, 6)
        expected = sorted([2 * n + MODEL.c2 for n in range(3)]
                          + [2 * n + MODEL.c1 for n in range(3)])
        assert [lv.lam for lv in res.levels] == pytest.approx(expected, abs=1e-12)
