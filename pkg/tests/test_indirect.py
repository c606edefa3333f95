import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybridsched.core import Matching, Schedule, ScheduleEntry, SchedulerConfig, direct_throughput, residual_demand
from hybridsched.eclipse import eclipse
from hybridsched.exceptions import DimensionMismatch
from hybridsched.indirect import (
    FULL,
    RESIDUAL,
    EclipseppConfig,
    Path,
    PathAssignment,
    best_path,
    build_layered_graph,
    check_path,
    compute_eta,
    default_log_lambda,
    eclipsepp,
    edge_loads,
    indirect_throughput,
    reachable_set,
)
from hybridsched.oracle import brute_force_indirect, enumerate_paths

from conftest import matchings

CYCLE = Matching(((0, 1), (1, 2), (2, 0)))


def sched(*entries, window=100, delay=0):
    return Schedule(tuple(ScheduleEntry(a, m) for a, m in entries), window=window, delay=delay)


def shift_schedule(n, k):
    """Round j connects every port u to u + 2**j (mod n)."""
    return sched(*[(1, Matching(tuple((u, (u + 2**j) % n) for u in range(n)))) for j in range(k)])


def two_cycles():
    T = np.zeros((3, 3), dtype=np.int64)
    T[0, 2] = 4
    return T, sched((4, CYCLE), (4, CYCLE))


class TestBuild:
    def test_full_cycle(self):
        g = build_layered_graph(sched((4, CYCLE)), FULL, np.zeros((3, 3), int))
        assert g.k == 1
        assert g.matching_edges(0) == [(0, 1, 4), (1, 2, 4), (2, 0, 4)]

    def test_residual_exhausted_edge(self):
        T = np.zeros((3, 3), dtype=np.int64)
        T[0, 1] = 4
        g = build_layered_graph(sched((4, CYCLE)), RESIDUAL, T)
        assert g.capacity[0, 0] == 0 and g.capacity[0, 1] == 4
        assert not g.demand.any()

    def test_residual_replays_direct_delivery(self, rng):
        T = rng.integers(0, 20, (5, 5))
        cfg = SchedulerConfig(delay=2, window=int(max(T.sum(0).max(), T.sum(1).max())))
        s = eclipse(T, cfg)
        g = build_layered_graph(s, RESIDUAL, T)
        R = residual_demand(T, s)
        np.fill_diagonal(R, 0)
        D = g.demand.copy()
        np.fill_diagonal(D, 0)
        np.testing.assert_array_equal(D, R)

    def test_empty_schedule(self):
        g = build_layered_graph(sched(), FULL, np.ones((2, 2), int))
        assert g.k == 0 and reachable_set(g, 0) == set()

    def test_port_mismatch(self):
        with pytest.raises(DimensionMismatch):
            build_layered_graph(sched((1, Matching(((0, 5),)))), FULL, np.zeros((2, 2), int))

    def test_self_loops_dropped(self):
        g = build_layered_graph(sched((3, Matching.identity(2))), FULL, np.ones((2, 2), int))
        assert g.num_capacitated_edges == 0


class TestReachability:
    def test_one_round(self):
        assert reachable_set(build_layered_graph(sched((1, CYCLE)), FULL, np.zeros((3, 3), int)), 0) == {1}

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_doubling(self, k):
        g = build_layered_graph(shift_schedule(16, k), FULL, np.zeros((16, 16), int))
        assert len(reachable_set(g, 0)) == 2**k - 1
        assert all(len(reachable_set(g, s)) == 2**k - 1 for s in range(16))

    def test_zero_capacity_edges_do_not_count(self):
        T = np.zeros((3, 3), dtype=np.int64)
        T[0, 1] = 4
        g = build_layered_graph(sched((4, CYCLE)), RESIDUAL, T)
        assert reachable_set(g, 0) == set()


class TestBestPath:
    def test_direct_edge(self):
        T = np.zeros((3, 3), dtype=np.int64)
        T[1, 2] = 3
        g = build_layered_graph(sched((4, CYCLE)), FULL, T)
        beta, p = best_path(g, np.ones((1, 3)), T)
        assert beta == 3 and p.nodes == ((0, 1), (1, 2))

    def test_unreachable(self):
        T = np.zeros((3, 3), dtype=np.int64)
        T[0, 2] = 3
        g = build_layered_graph(sched((4, CYCLE)), FULL, T)
        assert best_path(g, np.ones((1, 3)), T) is None

    def test_two_hop(self):
        T, s = two_cycles()
        g = build_layered_graph(s, FULL, T)
        beta, p = best_path(g, np.ones((2, 3)), T)
        assert beta == 4 and p.nodes == ((0, 0), (1, 1), (2, 2))
        check_path(g, p)

    def test_lighter_route_wins(self):
        # 0 -> 3 via 1 in rounds 0 and 1, or directly in round 2
        s = sched((4, Matching(((0, 1),))), (4, Matching(((1, 3),))), (4, Matching(((0, 3),))))
        T = np.zeros((4, 4), dtype=np.int64)
        T[0, 3] = 1
        g = build_layered_graph(s, FULL, T)
        w = np.zeros((3, 4))
        w[0, 0], w[1, 1], w[2, 0] = 1.0, 1.0, 5.0
        assert best_path(g, w, T)[1].nodes == ((0, 0), (1, 1), (2, 3), (3, 3))
        w[2, 0] = 1.5
        assert best_path(g, w, T)[1].nodes == ((0, 0), (1, 0), (2, 0), (3, 3))


class TestEclipsepp:
    def test_two_cycles_worked_example(self):
        T, s = two_cycles()
        assert direct_throughput(T, s) == 0
        out = eclipsepp(T, s, EclipseppConfig(mode=FULL))
        assert indirect_throughput(out, T) == 4
        assert brute_force_indirect(build_layered_graph(s, FULL, T)).value == 4
        assert [a.path.nodes for a in out] == [((0, 0), (1, 1), (2, 2))]

    def test_zero_demand(self):
        assert eclipsepp(np.zeros((3, 3), int), sched((4, CYCLE))) == []

    def test_single_round_is_direct(self, rng):
        T = rng.integers(0, 5, (3, 3))
        out = eclipsepp(T, sched((4, CYCLE)), EclipseppConfig(mode=FULL))
        assert all(len(a.path.circuit_hops()) == 1 for a in out)
        assert indirect_throughput(out, T) <= direct_throughput(T, sched((4, CYCLE)))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            EclipseppConfig(lam=1.0)
        with pytest.raises(ValueError):
            EclipseppConfig(mode="both")

    def test_eta_and_lambda(self):
        T, s = two_cycles()
        g = build_layered_graph(s, FULL, T)
        assert compute_eta(g) == 1.0
        assert default_log_lambda(g) == pytest.approx(1 + np.log(3 * 2))

    @given(st.data())
    def test_feasible_and_bounded(self, data):
        n = data.draw(st.integers(2, 5))
        k = data.draw(st.integers(1, 4))
        entries = data.draw(st.lists(st.tuples(st.integers(1, 6), matchings(n)), min_size=k, max_size=k))
        T = np.array(data.draw(st.lists(st.lists(st.integers(0, 6), min_size=n, max_size=n),
                                        min_size=n, max_size=n)))
        s = sched(*entries)
        mode = data.draw(st.sampled_from([FULL, RESIDUAL]))
        unit = data.draw(st.booleans())
        lam = data.draw(st.sampled_from([None, 2.0, 1e6]))
        out = eclipsepp(T, s, EclipseppConfig(lam=lam, mode=mode, unit_increment=unit))
        g = build_layered_graph(s, mode, T)
        assert (edge_loads(g, out) <= g.capacity).all()
        for a in out:
            check_path(g, a.path)
            assert a.path.source != a.path.destination
        got = indirect_throughput(out, g.demand)
        assert 0 <= got <= g.demand.sum()
        if mode == RESIDUAL:
            assert direct_throughput(T, s) + got <= T.sum()


class TestIndirectThroughput:
    def test_examples(self):
        T = np.zeros((3, 3), dtype=np.int64)
        T[0, 2] = 4
        p = Path(((0, 0), (1, 2)))
        assert indirect_throughput([], T) == 0
        assert indirect_throughput([PathAssignment(4, p)], T) == 4
        assert indirect_throughput([PathAssignment(6, p)], T) == 4

    def test_beta_positive(self):
        with pytest.raises(ValueError):
            PathAssignment(0, Path(((0, 0), (1, 1))))

    @given(st.data())
    def test_submodular(self, data):
        n = data.draw(st.integers(2, 3))
        s = sched(*data.draw(st.lists(st.tuples(st.integers(1, 4), matchings(n)), min_size=1, max_size=3)))
        T = np.array(data.draw(st.lists(st.lists(st.integers(0, 5), min_size=n, max_size=n),
                                        min_size=n, max_size=n)))
        paths = enumerate_paths(build_layered_graph(s, FULL, T))
        if not paths:
            return
        ground = st.tuples(st.integers(1, 4), st.sampled_from(paths)).map(lambda t: PathAssignment(*t))
        pool = data.draw(st.lists(ground, min_size=1, max_size=6, unique=True))
        small = data.draw(st.sets(st.integers(0, len(pool) - 1)))
        big = small | data.draw(st.sets(st.integers(0, len(pool) - 1)))
        x = data.draw(ground)
        if x in [pool[i] for i in big]:
            return
        f = lambda idx, extra=(): indirect_throughput([pool[i] for i in idx] + list(extra), T)
        assert f(small) <= f(big)
        assert f(big, [x]) - f(big) <= f(small, [x]) - f(small)
