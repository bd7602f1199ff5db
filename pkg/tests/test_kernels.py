"""The int64 walk kernel against its exact-arithmetic twin."""

import pytest

from erdosmat import kernels
from erdosmat.enumeration import (
    _Collector,
    _pipeline_at,
    _walk_exact,
    get_tables,
)


def _run_kernel(engine, n, max_support=None, node_cap=1 << 60, **kw):
    tables = get_tables(n)
    if max_support is None:
        max_support = (n - 1) ** 2 + 1
    walk = kernels.get_walk(engine)
    return kernels.run_shard(
        walk, tables.pmats, tables.pos, tables.agree, [0], max_support, node_cap, **kw
    )


def _run_exact(n, max_support=None, node_cap=1 << 60):
    tables = get_tables(n)
    if max_support is None:
        max_support = (n - 1) ** 2 + 1
    collector = _Collector(n)
    truncated = _walk_exact(tables, collector, (0,), max_support, node_cap)
    return collector, truncated


def _raws_from_kernel(n, accepted):
    collector = _Collector(n)
    tables = get_tables(n)
    for support, u, s in accepted:
        collector.record_candidate(tables, support, u, s)
    return collector.raws


def test_kernel_matches_exact_n3():
    stats, accepted, deferred, truncated = _run_kernel("numpy", 3)
    assert not deferred and not truncated
    exact, _ = _run_exact(3)
    assert stats == (exact.visited, exact.dep, exact.neg, exact.maxtr)
    assert stats == (31, 0, 0, 0)
    assert _raws_from_kernel(3, accepted) == exact.raws


def test_kernel_matches_exact_n4_small_support():
    # cap support size so the exact twin stays quick; size-4 supports
    # exercise dependent extensions and every rejection reason
    stats, accepted, deferred, truncated = _run_kernel("numpy", 4, max_support=4)
    assert not deferred and not truncated
    exact, _ = _run_exact(4, max_support=4)
    assert stats == (exact.visited, exact.dep, exact.neg, exact.maxtr)
    assert stats[1] > 0 and stats[2] > 0 and stats[3] > 0
    assert _raws_from_kernel(4, accepted) == exact.raws


@pytest.mark.skipif(not kernels.JIT_ENABLED, reason="numba disabled")
def test_jit_matches_numpy():
    for n, cap in ((3, None), (4, 4)):
        r_np = _run_kernel("numpy", n, max_support=cap)
        r_jit = _run_kernel("jit", n, max_support=cap)
        assert r_np[0] == r_jit[0]
        assert sorted(r_np[1]) == sorted(r_jit[1])
        assert r_np[2] == r_jit[2]


def test_guard_deferral_preserves_results(monkeypatch):
    # a tiny guard forces defers; exact reprocessing must reproduce the
    # unguarded outcome bit for bit
    baseline, accepted, deferred, _ = _run_kernel("numpy", 3)
    assert not deferred
    monkeypatch.setattr(kernels, "GUARD", 4)
    stats, accepted_g, deferred_g, truncated = _run_kernel("numpy", 3)
    assert deferred_g, "tiny guard should defer some work"
    assert not truncated
    tables = get_tables(3)
    collector = _Collector(3)
    collector.merge_counters(*stats)
    for support, u, s in accepted_g:
        collector.record_candidate(tables, support, u, s)
    for support, kind in deferred_g:
        if kind == kernels.DEFER_NODE:
            res = _pipeline_at(tables, support)
            collector.record_pipeline(tables, support, res)
        else:
            assert not _walk_exact(tables, collector, support, 5, 1 << 60)
    assert (collector.visited, collector.dep, collector.neg, collector.maxtr) == baseline
    assert collector.raws == _raws_from_kernel(3, accepted)


def test_node_cap_truncates():
    stats, _, _, truncated = _run_kernel("numpy", 3, node_cap=5)
    assert truncated
    assert stats[0] == 5


def test_buffer_growth_on_overflow():
    full, accepted, _, _ = _run_kernel("numpy", 3)
    _, accepted_small, _, _ = _run_kernel("numpy", 3, acc_cap=1, def_cap=1)
    assert sorted(accepted_small) == sorted(accepted)


def test_warmup_runs():
    tables = get_tables(2)
    kernels.warmup(tables.pmats, tables.pos, tables.agree)


def test_env_flag_parsing(monkeypatch):
    monkeypatch.setenv("X_FLAG", "0")
    assert kernels._env_flag("X_FLAG", True) is False
    monkeypatch.setenv("X_FLAG", "false")
    assert kernels._env_flag("X_FLAG", True) is False
    monkeypatch.setenv("X_FLAG", "1")
    assert kernels._env_flag("X_FLAG", False) is True
    monkeypatch.delenv("X_FLAG")
    assert kernels._env_flag("X_FLAG", True) is True


def test_get_walk_validation():
    with pytest.raises(ValueError, match="unknown kernel engine"):
        kernels.get_walk("cuda")
