import numpy as np
import pytest

from hybridsched.exceptions import SpecMismatch
from hybridsched.harness import (
    CSV_HEADER,
    ExperimentConfig,
    ResultRow,
    SweepError,
    delay_grid,
    export_csv,
    full_scale,
    parse_csv,
    run_sweep,
    trial_rng,
)

SMALL = {"n": 16, "n_large": 2, "n_small": 4}


def test_config_checks():
    with pytest.raises(SpecMismatch):
        ExperimentConfig("delay", grid=())
    with pytest.raises(SpecMismatch):
        ExperimentConfig("delay", grid=(1,), trials=0)
    with pytest.raises(SpecMismatch):
        ExperimentConfig("temperature", grid=(1,))
    with pytest.raises(SpecMismatch):
        ExperimentConfig("delay", grid=(1,), algorithms=("magic",))


def test_zero_demand_gives_zero():
    cfg = ExperimentConfig("load", grid=(0.0,), trials=1, traffic=SMALL)
    rows = run_sweep(cfg)
    assert [r.mean_throughput for r in rows] == [0.0, 0.0, 0.0]


def test_duplicate_algorithms_agree():
    cfg = ExperimentConfig("delay", grid=(5,), algorithms=("eclipse", "eclipse"), trials=2, traffic=SMALL)
    a, b = run_sweep(cfg)
    assert (a.mean_throughput, a.std_throughput) == (b.mean_throughput, b.std_throughput)


def test_reproducible_csv():
    cfg = ExperimentConfig("skew", grid=(0.1, 0.5), trials=2, traffic=SMALL, seed=11)
    assert export_csv(run_sweep(cfg)) == export_csv(run_sweep(cfg))


def test_parallel_matches_serial():
    cfg = ExperimentConfig("sparsity", grid=(4, 8), trials=2, traffic=SMALL)
    assert export_csv(run_sweep(cfg, n_jobs=2)) == export_csv(run_sweep(cfg))


def test_rows_in_range():
    cfg = ExperimentConfig("delay", grid=delay_grid()[:3], trials=2, traffic=SMALL,
                           algorithms=("eclipse", "eclipse_exact", "solstice", "bvn", "eclipsepp"))
    rows = run_sweep(cfg)
    assert len(rows) == 15
    assert all(0 <= r.mean_throughput <= 1 and r.std_throughput >= 0 for r in rows)


def test_models():
    rows = run_sweep(ExperimentConfig("block_size", grid=(0, 8), model="two_block", trials=1,
                                      traffic={"n": 32}))
    assert len(rows) == 6
    rows = run_sweep(ExperimentConfig("flow_variation", grid=(0, 10), model="flow_variation", trials=1,
                                      traffic={"n_blocks": 2, "block_size": 12, "base_flows": 4}))
    assert len(rows) == 6


def test_wrong_model_for_variable():
    with pytest.raises(SweepError) as info:
        run_sweep(ExperimentConfig("block_size", grid=(3,), trials=1, traffic=SMALL))
    assert info.value.sweep_var == "block_size" and info.value.value == 3
    assert isinstance(info.value.cause, SpecMismatch)


def test_trial_streams_differ():
    a = trial_rng(0, 0, 0).integers(0, 2**31, 4)
    b = trial_rng(0, 0, 1).integers(0, 2**31, 4)
    c = trial_rng(0, 1, 0).integers(0, 2**31, 4)
    assert not np.array_equal(a, b) and not np.array_equal(a, c)


def test_delay_grid_spans_range():
    g = delay_grid(3200)
    assert g[0] == 1 and g[-1] == 128


def test_full_scale():
    cfg = full_scale(ExperimentConfig("delay", grid=(1,)))
    assert cfg.trials == 25 and cfg.traffic["n"] == 200


class TestCsv:
    def test_header_only(self):
        assert export_csv([]) == ",".join(CSV_HEADER) + "\n"

    def test_one_row(self):
        text = export_csv([ResultRow("delay", 10, "eclipse", 0.5, 0.01, 3)])
        assert text.splitlines()[1] == "delay,10.000000,eclipse,0.500000,0.010000,3"

    def test_round_trip(self):
        rows = [ResultRow("load", 0.15, "bvn", 1 / 3, 0.123456789, 10),
                ResultRow("load", 0.2, "eclipse", 0.9, 0.0, 10)]
        back = parse_csv(export_csv(rows))
        for r, b in zip(rows, back):
            assert b.sweep_var == r.sweep_var and b.algorithm == r.algorithm and b.trials == r.trials
            assert abs(b.sweep_value - r.sweep_value) < 1e-6
            assert abs(b.mean_throughput - r.mean_throughput) < 1e-6
            assert abs(b.std_throughput - r.std_throughput) < 1e-6
