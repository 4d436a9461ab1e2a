import numpy as np
import pytest

from ghostbench import (TemporalSpec, analytic_schmidt_number,
                        eval_biphoton_wavepacket, factorability_check)


class TestTemporalSpec:
    def test_grid_symmetric_about_zero(self):
        t = TemporalSpec(1.0, 10.0, n_points=256).time_grid()
        assert np.max(np.abs(t + t[::-1])) == 0.0

    def test_span_follows_wider_envelope(self):
        spec = TemporalSpec(2.0, 10.0, span_coherence_times=4.0)
        assert spec.time_grid().max() == pytest.approx(4.0 / 2.0)

    @pytest.mark.parametrize("kwargs", [dict(sigma_plus_hz=0.0, sigma_minus_hz=1.0),
                                        dict(sigma_plus_hz=1.0, sigma_minus_hz=-2.0),
                                        dict(sigma_plus_hz=1.0, sigma_minus_hz=1.0, n_points=1)])
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            TemporalSpec(**kwargs)


class TestWavepacket:
    def test_origin_value_is_amplitude(self):
        # Odd point count puts t = 0 on the grid; all exponents vanish there.
        spec = TemporalSpec(1.0, 3.0, omega_s_hz=5.0, omega_i_hz=7.0,
                            amplitude_a0=2.5, n_points=257)
        psi = eval_biphoton_wavepacket(spec)
        assert psi[128, 128] == pytest.approx(2.5)

    def test_magnitude_exchange_symmetric(self):
        spec = TemporalSpec(1.0, 4.0, omega_s_hz=5.0, omega_i_hz=7.0, n_points=128)
        psi = eval_biphoton_wavepacket(spec)
        assert np.max(np.abs(np.abs(psi) - np.abs(psi).T)) < 1e-14

    def test_antidiagonal_width_oracle(self):
        # For sigma_minus >> sigma_plus the packet concentrates on the
        # t1 = t2 diagonal; along the anti-diagonal |Psi| = exp(-4 sm^2 t^2)
        # reaches 1/e at t = 1/(2 sm), a radius sqrt(2)/(2 sm) in the
        # (t1, t2) plane.
        sm = 25.0
        spec = TemporalSpec(1.0, sm, n_points=4097, span_coherence_times=4.0)
        psi = eval_biphoton_wavepacket(spec)
        t = spec.time_grid()
        anti = np.abs(psi[np.arange(t.size), t.size - 1 - np.arange(t.size)])
        center = t.size // 2
        sel = slice(center, center + 64)
        crossing = np.interp(1.0, -np.log(anti[sel] / anti[center]), t[sel])
        assert np.sqrt(2.0) * crossing == pytest.approx(np.sqrt(2.0) / (2 * sm), rel=5e-3)


class TestFactorability:
    def test_balanced_envelope_factorizes(self):
        psi = eval_biphoton_wavepacket(TemporalSpec(3.0, 3.0, omega_s_hz=2.0, omega_i_hz=9.0))
        assert factorability_check(psi) == pytest.approx(1.0, abs=1e-9)

    def test_ratio_ten_matches_analytic(self):
        psi = eval_biphoton_wavepacket(TemporalSpec(1.0, 10.0))
        k = factorability_check(psi)
        assert k > 1.0
        assert k == pytest.approx(analytic_schmidt_number(1.0, 10.0), rel=1e-4)
        assert k == pytest.approx(5.05, abs=1e-3)  # frozen regression value

    def test_exchange_symmetry_of_k(self):
        k_a = factorability_check(eval_biphoton_wavepacket(TemporalSpec(1.0, 6.0)))
        k_b = factorability_check(eval_biphoton_wavepacket(TemporalSpec(6.0, 1.0)))
        assert k_a == pytest.approx(k_b, abs=1e-9)

    def test_phase_factors_do_not_change_k(self):
        bare = eval_biphoton_wavepacket(TemporalSpec(1.0, 5.0))
        dressed = eval_biphoton_wavepacket(TemporalSpec(1.0, 5.0, omega_s_hz=40.0, omega_i_hz=17.0))
        assert factorability_check(dressed) == pytest.approx(factorability_check(bare), abs=1e-9)

    def test_monotone_in_envelope_ratio(self):
        ratios = [1.0, 2.0, 4.0, 8.0, 16.0]
        ks = [factorability_check(eval_biphoton_wavepacket(TemporalSpec(1.0, r)))
              for r in ratios]
        assert all(k2 >= k1 - 1e-12 for k1, k2 in zip(ks, ks[1:]))

    def test_zero_matrix_rejected(self):
        with pytest.raises(ValueError):
            factorability_check(np.zeros((8, 8)))
