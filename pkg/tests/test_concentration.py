"""Monte-Carlo cells, variance bounds, slope fits, and sweep orchestration."""
import numpy as np
import pytest

from qntksim import (
    ExperimentRecord,
    SweepConfig,
    chebyshev_tail,
    fit_slope,
    kernel_samples,
    run_sweep,
    sample_cell,
    variance_bound,
)
from qntksim.concentration import bound_report


def make_record(n, var_k, mean_k=0.01):
    return ExperimentRecord(
        n=n, d=n, lam=2 * n * n, encoding="global_haar",
        observable="zero_projector", num_pairs=10, mean_k=mean_k,
        se_mean=1.0, var_k=var_k, se_var=1.0, bound_var=1.0, seed=0,
    )


# --- variance_bound / chebyshev_tail ---

def test_variance_bound_global_spot_value():
    assert variance_bound(4, 32, 1.0, "global_haar") == pytest.approx(4096 / 65025)


def test_variance_bound_local_spot_value():
    assert variance_bound(4, 32, 1.0, "local_haar") == pytest.approx(16.0)


def test_variance_bound_scales_with_observable_trace():
    base = variance_bound(4, 32, 1.0, "global_haar")
    assert variance_bound(4, 32, 16.0, "global_haar") == pytest.approx(256 * base)


def test_variance_bound_validation():
    with pytest.raises(ValueError):
        variance_bound(0, 32, 1.0, "global_haar")
    with pytest.raises(ValueError):
        variance_bound(4, 32, 1.0, "nope")


def test_chebyshev_tail_caps_at_one():
    assert chebyshev_tail(0.04, 0.2) == pytest.approx(1.0)
    assert chebyshev_tail(1.0, 0.01) == 1.0


def test_chebyshev_tail_arithmetic():
    assert chebyshev_tail(0.0001, 0.1) == pytest.approx(0.01)


def test_chebyshev_tail_quadruples_when_epsilon_halves():
    a = chebyshev_tail(1e-6, 0.02)
    b = chebyshev_tail(1e-6, 0.01)
    assert b == pytest.approx(4 * a)


def test_chebyshev_tail_rejects_bad_epsilon():
    with pytest.raises(ValueError):
        chebyshev_tail(0.1, 0.0)


def test_bound_report_fields():
    rep = bound_report(4, 32, 1.0, "global_haar", epsilon=1.0)
    assert rep.bound_var == pytest.approx(4096 / 65025)
    assert rep.tail_bound == pytest.approx(rep.bound_var)
    assert bound_report(4, 32, 1.0, "global_haar", epsilon=0.01).tail_bound == 1.0
    assert bound_report(4, 32, 1.0, "local_haar").tail_bound is None


# --- kernel sampling ---

def test_kernel_samples_deterministic():
    a = kernel_samples(3, 2, "global_haar", "zero_projector", 8, 123)
    b = kernel_samples(3, 2, "global_haar", "zero_projector", 8, 123)
    np.testing.assert_array_equal(a, b)


def test_kernel_samples_differ_across_seeds():
    a = kernel_samples(3, 2, "global_haar", "zero_projector", 8, 1)
    b = kernel_samples(3, 2, "global_haar", "zero_projector", 8, 2)
    assert not np.array_equal(a, b)


def test_kernel_samples_diagonal_mode_nonnegative():
    vals = kernel_samples(3, 3, "global_haar", "pauli_y0", 20, 5,
                          identical_pairs=True)
    assert np.all(vals >= 0.0)


def test_kernel_samples_local_encoding_runs():
    vals = kernel_samples(2, 2, "local_haar", "zero_projector", 6, 0)
    assert vals.shape == (6,)


def test_kernel_samples_qubit_guard():
    with pytest.raises(ValueError):
        kernel_samples(13, 1, "global_haar", "zero_projector", 4, 0)


def test_sample_cell_reproducible():
    a = sample_cell(3, 2, "global_haar", "zero_projector", 2, 99)
    b = sample_cell(3, 2, "global_haar", "zero_projector", 2, 99)
    assert a == b


def test_sample_cell_statistics_fields():
    rec = sample_cell(4, 4, "global_haar", "zero_projector", 200, 7)
    assert rec.lam == 32
    assert rec.var_k >= 0.0 and rec.se_mean >= 0.0 and rec.se_var >= 0.0
    assert rec.bound_var == pytest.approx(4096 / 65025)
    assert rec.var_k <= rec.bound_var + 3 * rec.se_var


# --- slope fits ---

def test_fit_slope_exact_line():
    recs = [make_record(4, 2.0**-8), make_record(5, 2.0**-10), make_record(6, 2.0**-12)]
    fit = fit_slope(recs, "var_k")
    assert fit.slope == pytest.approx(-2.0, abs=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
    assert fit.num_excluded == 0


def test_fit_slope_constant_field():
    recs = [make_record(n, 0.25) for n in (4, 5, 6, 7)]
    fit = fit_slope(recs, "var_k")
    assert fit.slope == pytest.approx(0.0, abs=1e-12)


def test_fit_slope_uses_absolute_mean_and_excludes_zeros():
    recs = [
        make_record(4, 1.0, mean_k=-(2.0**-4)),
        make_record(5, 1.0, mean_k=2.0**-6),
        make_record(6, 1.0, mean_k=0.0),  # excluded: log undefined
        make_record(7, 1.0, mean_k=-(2.0**-10)),
    ]
    fit = fit_slope(recs, "mean_k")
    assert fit.num_excluded == 1
    assert fit.num_used == 3
    assert fit.slope == pytest.approx(-2.0, abs=1e-12)


def test_fit_slope_requires_three_distinct_n():
    with pytest.raises(ValueError):
        fit_slope([make_record(4, 1.0), make_record(5, 1.0)], "var_k")


def test_fit_slope_rejects_unknown_field():
    recs = [make_record(n, 1.0) for n in (4, 5, 6)]
    with pytest.raises(ValueError):
        fit_slope(recs, "se_mean")


# --- sweep config and orchestration ---

def test_sweep_config_proportional_rule():
    cfg = SweepConfig(n_values=(4, 5), master_seed=7, num_pairs=4)
    assert cfg.cells() == [(4, 4), (5, 5)]


def test_sweep_config_explicit_depths():
    cfg = SweepConfig(n_values=(4,), d_values=(5, 10), num_pairs=4)
    assert cfg.cells() == [(4, 5), (4, 10)]


def test_sweep_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(n_values=())
    with pytest.raises(ValueError):
        SweepConfig(n_values=(4,), num_pairs=1)
    with pytest.raises(ValueError):
        SweepConfig(n_values=(4,), encoding="banana")
    with pytest.raises(ValueError):
        SweepConfig(n_values=(4,), observable="banana")


def test_run_sweep_produces_one_record_per_cell():
    cfg = SweepConfig(n_values=(4, 5), num_pairs=4, master_seed=3)
    result = run_sweep(cfg, workers=1)
    assert not result.failures
    assert [(r.n, r.d, r.lam) for r in result.records] == [(4, 4, 32), (5, 5, 50)]


def test_run_sweep_deterministic():
    cfg = SweepConfig(n_values=(3,), d_values=(2, 3), num_pairs=4, master_seed=11)
    a = run_sweep(cfg, workers=1)
    b = run_sweep(cfg, workers=1)
    assert a.records == b.records


def test_run_sweep_worker_count_does_not_change_results():
    cfg = SweepConfig(n_values=(2, 3), d_values=(2,), num_pairs=4, master_seed=5)
    serial = run_sweep(cfg, workers=1)
    parallel = run_sweep(cfg, workers=2)
    assert serial.records == parallel.records


def test_run_sweep_isolates_failing_cells():
    cfg = SweepConfig(n_values=(3, 13), d_values=(2,), num_pairs=4, master_seed=5)
    result = run_sweep(cfg, workers=1)
    assert [(r.n, r.d) for r in result.records] == [(3, 2)]
    assert [(f.n, f.d) for f in result.failures] == [(13, 2)]
    assert "13" in result.failures[0].message
