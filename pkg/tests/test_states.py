import math

import numpy as np
import pytest

from steerdist.errors import ThetaOutOfRangeError
from steerdist.states import (
    MeasurementSet,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    PureState,
    gghz,
    pauli_xyz,
)


class TestGghz:
    def test_ghz_point(self):
        state = gghz(math.pi / 4)
        amps = state.amplitudes
        assert amps[0] == pytest.approx(1 / math.sqrt(2))
        assert amps[7] == pytest.approx(1 / math.sqrt(2))
        assert np.max(np.abs(amps[1:7])) == 0.0

    def test_product_point(self):
        amps = gghz(0.0).amplitudes
        assert amps[0] == 1.0
        assert np.max(np.abs(amps[1:])) == 0.0

    def test_pi_over_8(self):
        amps = gghz(math.pi / 8).amplitudes
        assert amps[0].real == pytest.approx(0.9238795325112867, abs=1e-12)
        assert amps[7].real == pytest.approx(0.3826834323650898, abs=1e-12)

    def test_norm_on_grid(self):
        for theta in np.linspace(0.0, math.pi / 4, 100):
            amps = gghz(theta).amplitudes
            assert abs(np.linalg.norm(amps) - 1.0) < 1e-12

    def test_theta_metadata(self):
        assert gghz(0.3).theta == pytest.approx(0.3)

    @pytest.mark.parametrize("theta", [-0.1, math.pi / 4 + 0.01, 1.0])
    def test_out_of_range(self, theta):
        with pytest.raises(ThetaOutOfRangeError):
            gghz(theta)


class TestPureState:
    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            PureState(np.array([1.0, 1.0]))

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            PureState(np.array([np.nan, 0.0]))

    def test_density_matrix(self):
        state = PureState(np.array([1.0, 0.0], dtype=complex))
        assert np.allclose(state.density_matrix(), [[1, 0], [0, 0]])


class TestPauliSet:
    def test_setting_order(self):
        ms = pauli_xyz()
        assert np.allclose(ms.observables[0], PAULI_X)
        assert np.allclose(ms.observables[1], PAULI_Y)
        assert np.allclose(ms.observables[2], PAULI_Z)

    def test_x_projector_eigenvectors(self):
        # outcome 0 of X projects onto (|0> + |1>)/sqrt(2)
        plus = np.array([1, 1]) / math.sqrt(2)
        assert np.allclose(pauli_xyz().projector(0, 0), np.outer(plus, plus))

    def test_z_outcome_zero(self):
        assert np.allclose(pauli_xyz().projector(0, 2), [[1, 0], [0, 0]])

    def test_y_projector_is_spectral(self):
        ms = pauli_xyz()
        assert np.allclose(ms.projector(0, 1), (np.eye(2) + PAULI_Y) / 2)

    def test_completeness_per_setting(self):
        ms = pauli_xyz()
        for x in range(ms.n_settings):
            total = ms.projector(0, x) + ms.projector(1, x)
            assert np.max(np.abs(total - np.eye(2))) < 1e-12

    def test_projectors_psd(self):
        ms = pauli_xyz()
        for x in range(3):
            for a in (0, 1):
                w = np.linalg.eigvalsh(ms.projector(a, x))
                assert w.min() > -1e-12

    def test_rejects_non_involutory(self):
        with pytest.raises(ValueError):
            MeasurementSet((np.diag([1.0, 2.0]),))

    def test_rejects_bad_outcome(self):
        with pytest.raises(ValueError):
            pauli_xyz().projector(2, 0)
