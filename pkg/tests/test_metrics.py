import math

import numpy as np
import pytest

from steerdist.assemblage import (
    Assemblage,
    Scenario,
    convex_mix,
    gghz_assemblage_1sdi,
    gghz_assemblage_2sdi,
    ghz_assemblage,
)
from steerdist.errors import DimMismatchError, NotPSDError, ScenarioMismatchError
from steerdist.metrics import (
    COEFF_2SDI_CORRELATOR,
    COEFF_2SDI_MARGINAL,
    COEFF_ZZ,
    assemblage_fidelity,
    root_fidelity,
    witness,
    witness_1sdi,
    witness_2sdi,
    witness_value_from_terms,
)

from conftest import random_psd


def bell_half():
    v = np.zeros(4, dtype=complex)
    v[0] = v[3] = 1 / math.sqrt(2)
    return np.outer(v, v.conj()) / 2


class TestRootFidelity:
    def test_self_fidelity_is_trace(self, rng):
        for _ in range(10):
            m = random_psd(rng, 4)
            assert root_fidelity(m, m) == pytest.approx(np.trace(m).real, rel=1e-10)

    @pytest.mark.parametrize("theta", [0.0, 0.2, math.pi / 8, math.pi / 4])
    def test_rank_one_overlap(self, theta):
        # f(p|phi><phi|, q|psi><psi|) = sqrt(p q) |<phi|psi>|
        v = np.zeros(4, dtype=complex)
        v[0] = math.cos(theta)
        v[3] = math.sin(theta)
        sig = np.outer(v, v.conj()) / 2
        expect = (math.cos(theta) + math.sin(theta)) / (2 * math.sqrt(2))
        assert root_fidelity(bell_half(), sig) == pytest.approx(expect, abs=1e-12)

    def test_commuting_diagonal(self):
        m = np.diag([0.5, 0, 0, 0]).astype(complex)
        assert root_fidelity(m, m) == pytest.approx(0.5, abs=1e-12)

    def test_symmetry(self, rng):
        for _ in range(20):
            a = random_psd(rng, 4)
            b = random_psd(rng, 4)
            assert root_fidelity(a, b) == pytest.approx(root_fidelity(b, a), abs=1e-8)

    def test_upper_bound(self, rng):
        for _ in range(20):
            a = random_psd(rng, 2)
            b = random_psd(rng, 2)
            bound = math.sqrt(np.trace(a).real * np.trace(b).real)
            assert root_fidelity(a, b) <= bound + 1e-9

    def test_zero_matrix(self):
        assert root_fidelity(np.zeros((2, 2)), np.eye(2)) == 0.0

    def test_rejects_indefinite(self):
        with pytest.raises(NotPSDError):
            root_fidelity(np.diag([1.0, -1.0]), np.eye(2))

    def test_rejects_dim_mismatch(self):
        with pytest.raises(DimMismatchError):
            root_fidelity(np.eye(2), np.eye(4))


class TestAssemblageFidelity:
    def test_self_is_one(self):
        target = ghz_assemblage(Scenario.ONE_SIDED)
        assert assemblage_fidelity(target, target) == pytest.approx(1.0, abs=1e-12)
        target2 = ghz_assemblage(Scenario.TWO_SIDED)
        assert assemblage_fidelity(target2, target2) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("theta", np.linspace(0.0, math.pi / 4, 15))
    def test_gghz_vs_ghz_closed_form(self, theta):
        # sum of rank-1 overlaps gives sqrt((1 + sin 2 theta) / 2) for every setting
        f = assemblage_fidelity(gghz_assemblage_1sdi(theta), ghz_assemblage(Scenario.ONE_SIDED))
        assert f == pytest.approx(math.sqrt((1 + math.sin(2 * theta)) / 2), abs=1e-12)

    def test_frozen_values(self):
        target = ghz_assemblage(Scenario.ONE_SIDED)
        f8 = assemblage_fidelity(gghz_assemblage_1sdi(math.pi / 8), target)
        assert f8 == pytest.approx(0.9238795325112867, abs=1e-10)
        f0 = assemblage_fidelity(gghz_assemblage_1sdi(0.0), target)
        assert f0 == pytest.approx(0.7071067811865476, abs=1e-10)

    def test_bounded_by_one(self):
        target = ghz_assemblage(Scenario.TWO_SIDED)
        for theta in np.linspace(0.0, math.pi / 4, 10):
            f = assemblage_fidelity(gghz_assemblage_2sdi(theta), target)
            assert f <= 1 + 1e-9

    def test_scenario_mismatch(self):
        with pytest.raises(ScenarioMismatchError):
            assemblage_fidelity(
                gghz_assemblage_1sdi(0.3), ghz_assemblage(Scenario.TWO_SIDED)
            )


class TestWitnessOneSided:
    def test_ghz_value(self):
        res = witness_1sdi(ghz_assemblage(Scenario.ONE_SIDED))
        assert res.value == pytest.approx(-0.8453, abs=5e-4)
        assert res.violated

    def test_ghz_terms(self):
        terms = witness_1sdi(ghz_assemblage(Scenario.ONE_SIDED)).terms
        assert terms["ZZ"] == pytest.approx(1.0, abs=1e-12)
        assert terms["A1XX"] == pytest.approx(1.0, abs=1e-12)
        assert terms["A1YY"] == pytest.approx(-1.0, abs=1e-12)
        assert terms["A2XY"] == pytest.approx(-1.0, abs=1e-12)

    def test_theta_zero(self):
        # all triple correlators vanish; ZZ and the Z marginals stay 1
        res = witness_1sdi(gghz_assemblage_1sdi(0.0))
        assert res.value == pytest.approx(1.1547 - 2 / 3, abs=1e-12)
        assert not res.violated

    @pytest.mark.parametrize("theta", np.linspace(0.0, math.pi / 4, 15))
    def test_closed_form(self, theta):
        res = witness_1sdi(gghz_assemblage_1sdi(theta))
        expect = 1 + COEFF_ZZ - (2 + 4 * math.sin(2 * theta)) / 3
        assert res.value == pytest.approx(expect, abs=1e-12)

    def test_violation_threshold_bracket(self):
        # root of the closed form sits near 0.1874
        assert witness_1sdi(gghz_assemblage_1sdi(0.18)).value > 0
        assert witness_1sdi(gghz_assemblage_1sdi(0.19)).value < 0

    def test_monotone_in_theta(self):
        values = [
            witness_1sdi(gghz_assemblage_1sdi(t)).value
            for t in np.linspace(0.01, math.pi / 4, 40)
        ]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_value_reconstructs_from_terms(self):
        res = witness_1sdi(gghz_assemblage_1sdi(0.37))
        assert res.value == pytest.approx(
            witness_value_from_terms(Scenario.ONE_SIDED, res.terms), abs=1e-12
        )

    def test_scenario_mismatch(self):
        with pytest.raises(ScenarioMismatchError):
            witness_1sdi(gghz_assemblage_2sdi(0.3))


class TestWitnessTwoSided:
    def test_ghz_value(self):
        res = witness_2sdi(ghz_assemblage(Scenario.TWO_SIDED))
        assert res.value == pytest.approx(-0.5820, abs=5e-4)
        assert res.violated

    def test_theta_zero(self):
        res = witness_2sdi(gghz_assemblage_2sdi(0.0))
        assert res.value == pytest.approx(1 - 3 * COEFF_2SDI_MARGINAL, abs=1e-12)

    @pytest.mark.parametrize("theta", np.linspace(0.0, math.pi / 4, 15))
    def test_closed_form(self, theta):
        res = witness_2sdi(gghz_assemblage_2sdi(theta))
        expect = 1 - 3 * COEFF_2SDI_MARGINAL - 4 * COEFF_2SDI_CORRELATOR * math.sin(2 * theta)
        assert res.value == pytest.approx(expect, abs=1e-12)

    def test_unsteerable_model_never_violates(self):
        # local-hidden-state construction: Charlie holds |l><l| with prob 1/2,
        # Z outcomes track l deterministically, X/Y outcomes are coin flips.
        # Its (2,2) slots coincide with the GHZ-point assemblage.
        p = {0: np.diag([1.0, 0.0]).astype(complex), 1: np.diag([0.0, 1.0]).astype(complex)}
        rho_c = (p[0] + p[1]) / 2
        elements = {}
        for x in range(3):
            for y in range(3):
                for a in (0, 1):
                    for b in (0, 1):
                        total = np.zeros((2, 2), dtype=complex)
                        for lam in (0, 1):
                            pa = (1.0 if a == lam else 0.0) if x == 2 else 0.5
                            pb = (1.0 if b == lam else 0.0) if y == 2 else 0.5
                            total += 0.5 * pa * pb * p[lam]
                        elements[(a, b, x, y)] = total
        asm = Assemblage(Scenario.TWO_SIDED, elements)
        assert np.max(np.abs(sum(elements[(a, b, 0, 0)] for a in (0, 1) for b in (0, 1)) - rho_c)) < 1e-15
        ghz2 = gghz_assemblage_2sdi(math.pi / 4)
        assert np.max(np.abs(asm.element(0, 0, 2, 2) - ghz2.element(0, 0, 2, 2))) < 1e-12
        res = witness_2sdi(asm)
        assert res.value >= 0

    def test_value_reconstructs_from_terms(self):
        res = witness_2sdi(gghz_assemblage_2sdi(0.41))
        assert res.value == pytest.approx(
            witness_value_from_terms(Scenario.TWO_SIDED, res.terms), abs=1e-12
        )

    def test_scenario_mismatch(self):
        with pytest.raises(ScenarioMismatchError):
            witness_2sdi(gghz_assemblage_1sdi(0.3))


class TestWitnessLinearity:
    @pytest.mark.parametrize("lam", [0.0, 0.25, 0.5, 1.0])
    def test_one_sided(self, lam):
        a = gghz_assemblage_1sdi(0.15)
        b = gghz_assemblage_1sdi(0.6)
        mixed = convex_mix([lam, 1 - lam], [a, b])
        expect = lam * witness_1sdi(a).value + (1 - lam) * witness_1sdi(b).value
        assert witness_1sdi(mixed).value == pytest.approx(expect, abs=1e-10)

    @pytest.mark.parametrize("lam", [0.0, 0.25, 0.5, 1.0])
    def test_two_sided(self, lam):
        a = gghz_assemblage_2sdi(0.15)
        b = gghz_assemblage_2sdi(0.6)
        mixed = convex_mix([lam, 1 - lam], [a, b])
        expect = lam * witness_2sdi(a).value + (1 - lam) * witness_2sdi(b).value
        assert witness_2sdi(mixed).value == pytest.approx(expect, abs=1e-10)


def test_witness_dispatch():
    assert witness(gghz_assemblage_1sdi(0.3)).scenario is Scenario.ONE_SIDED
    assert witness(gghz_assemblage_2sdi(0.3)).scenario is Scenario.TWO_SIDED
