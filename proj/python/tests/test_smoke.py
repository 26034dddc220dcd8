"""Smoke tests for the _spdclab extension module (plain asserts, no pytest)."""

import math
import os
import tempfile

import _spdclab as m


def test_lineshape():
    assert m.lorentzian_weight(0.0, 226.0) == 1.0
    assert abs(m.lorentzian_weight(113.0, 226.0) - 0.5) < 1e-12
    assert abs(m.coherence_time_ns(159.15) - 2.0) < 1e-3
    assert abs(m.product_line_fwhm(226.0, 274.0) - 159.11) < 0.01
    assert abs(m.irf_convolved_autocorr(0.0, 2.0, 0.7304) - 1.6073) < 1e-3
    assert abs(m.window_averaged_g2(2.0, 0.0, 4.0) - 1.24542) < 1e-4
    assert abs(m.airy_transmission(6400.0, 12.8, 274.0) - 1.1294e-3) < 1e-5
    assert abs(m.gaussian_fwhm_to_sigma(1.72) - 0.73042) < 1e-4


def test_pair_model():
    assert abs(m.heralded_g2_prediction(5e5, 8.0) - 0.007984) < 1e-9
    assert abs(m.bayes_g2c(2.0, 2.0, 4.0) - 1.0) < 1e-12
    assert m.predicted_cross_corr(1.338, 5e5, 8.0) > 200.0
    eff = m.efficiencies_from_rates(6.8e4, 1.7e4, 4.6e3, 0.6, 1.2)
    assert abs(eff["eta_heralded"] - 0.451) < 1e-3


def test_cluster():
    comb = m.CombSpec()
    lines = m.emission_lines(comb, 40.0)
    assert len(lines) == 5
    weights = {round(l.detuning_ghz): l.weight for l in lines}
    assert weights[0] == 1.0
    assert abs(weights[16] - 0.047) < 1e-3
    assert abs(m.cluster_spacing_ghz(16.0, 15.0) - 240.0) < 1e-9
    assert m.strain_detuning_ghz(120.0, 20.0, 0.025) > 2.0
    assert m.drift_detuning_mhz(16.0, 10.0) == 160.0


def test_simulate_and_analyze():
    cfg = m.reference_config()
    cfg.duration_s = 0.5
    cfg.seed = 12345
    run = m.simulate_experiment(cfg)
    assert len(run.channels) == 3
    assert all(len(ch) > 0 for ch in run.channels)
    assert run.channels == m.simulate_experiment(cfg).channels  # deterministic

    res = m.heralded_g2c(run.channels[2], run.channels[0], run.channels[1], 1, 8000)
    assert res.n_heralds == len(run.channels[2])
    assert res.g2c < 0.2

    hist = m.cross_correlation_histogram(
        run.channels[2], run.channels[0], 1, run.duration_s, 162, 20000
    )
    lag_ns, g2, err = m.normalize_g2(hist)
    assert len(lag_ns) == hist.n_bins()
    assert max(g2) > 10.0  # pronounced pair bunching


def test_file_roundtrip():
    cfg = m.reference_config()
    cfg.duration_s = 0.05
    cfg.seed = 6
    run = m.simulate_experiment(cfg)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "run.ptt1")
        m.write_streams(path, run)
        back = m.read_streams(path)
        assert back.channels == run.channels
        assert back.resolution_ps == run.resolution_ps
        assert math.isclose(back.duration_s, run.duration_s)


def main():
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"{name}: ok")
    print("all smoke tests passed")


if __name__ == "__main__":
    main()
