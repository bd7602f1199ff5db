"""Exhaustive, symmetry-reduced enumeration of Erdos classes.

The search walks subsets of permutation matrices that contain the
identity (fixing it costs no generality up to equivalence), extends only
while the set stays linearly independent (incremental fraction-free rank
tracking carried down the tree), runs the candidate pipeline at every
node, and deduplicates accepted matrices by their canonical form under
row/column permutation equivalence.

Work is sharded at the top two tree levels: each shard is an independent
prefix {I, a, b} whose subtree one worker owns.  Shard results merge by
summing counters and unioning accepted candidates, which is associative
and commutative, so complete runs are deterministic for any worker
count.  Every emitted class is re-verified through the exact rational
pipeline after canonicalization.
"""

from __future__ import annotations

import itertools
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd, lcm
from multiprocessing import get_context

import numpy as np

from . import gram as gram_mod
from . import kernels
from .assignment import frobenius_sq, is_erdos
from .linalg import BistochasticMatrix
from .perms import Permutation
from .rational import format_rational

CANON_CAP = 6
ENGINES = ("auto", "jit", "numpy", "exact")

# conservative nodes/second guesses used to translate a wall-clock budget
# into per-shard node caps; undershooting only truncates a little early
_NODE_RATE_GUESS = {"jit": 200_000, "numpy": 5_000, "exact": 500}


def _node_cap_for(engine: str, deadline: float | None) -> int:
    if deadline is None:
        return 1 << 60
    remaining = deadline - time.time()
    if remaining <= 0:
        return 1
    return max(10_000, int(remaining * _NODE_RATE_GUESS[engine]))


@dataclass(frozen=True)
class ErdosClass:
    """One equivalence class of Erdos matrices with certificate data."""

    canonical: BistochasticMatrix
    support: tuple
    weights: tuple
    common_value: Fraction
    frob_sq: Fraction
    sources: int

    def to_json(self) -> dict:
        return {
            "matrix": [[format_rational(e) for e in row] for row in self.canonical],
            "support": [list(p.one_indexed()) for p in self.support],
            "weights": [format_rational(w) for w in self.weights],
            "value": format_rational(self.common_value),
            "sources": self.sources,
        }


@dataclass(frozen=True)
class EnumerationReport:
    """Classes found plus search statistics for one dimension."""

    n: int
    classes: tuple
    sets_visited: int
    rejected_dependent: int
    rejected_negative: int
    rejected_maxtr: int
    elapsed: float
    complete: bool
    engine: str
    workers: int

    def to_json(self) -> dict:
        return {
            "classes": [c.to_json() for c in self.classes],
            "class_count": len(self.classes),
            "sets_visited": self.sets_visited,
            "rejected_dependent": self.rejected_dependent,
            "rejected_negative": self.rejected_negative,
            "rejected_maxtr": self.rejected_maxtr,
            "elapsed_seconds": round(self.elapsed, 3),
            "complete": self.complete,
            "engine": self.engine,
            "workers": self.workers,
        }


class _Tables:
    """Per-dimension lookup tables shared by the search kernels."""

    def __init__(self, n: int):
        self.n = n
        self.perms = tuple(
            Permutation(p) for p in itertools.permutations(range(n))
        )
        nf = len(self.perms)
        images = np.array([p.images for p in self.perms], np.int64)
        self.pmats = np.zeros((nf, n * n), np.int64)
        self.pos = np.zeros((nf, n), np.int64)
        for g, p in enumerate(self.perms):
            for j, i in enumerate(p.images):
                self.pmats[g, i * n + j] = 1
                self.pos[g, j] = i * n + j
        self.agree = np.zeros((nf, nf), np.int64)
        for g in range(nf):
            self.agree[g] = (images == images[g]).sum(axis=1)
        self.flat_rows = tuple(
            tuple(int(v) for v in self.pmats[g]) for g in range(nf)
        )


_tables_cache: dict = {}


def get_tables(n: int) -> _Tables:
    if n not in _tables_cache:
        _tables_cache[n] = _Tables(n)
    return _tables_cache[n]


def canonical_form(a: BistochasticMatrix) -> BistochasticMatrix:
    """The lexicographically least row-major flattening of PAQ over all P, Q.

    Two matrices are equivalent exactly when their canonical forms are
    equal.  Computed as a minimum over row orders with columns sorted as
    vectors, which realizes the full PAQ minimum without scanning all
    (n!)^2 pairs; entries are compared by exact value via order codes.
    """
    n = a.nrows
    if a.ncols != n:
        raise ValueError("canonical form requires a square matrix")
    if n > CANON_CAP:
        raise ValueError(f"canonical form is capped at n={CANON_CAP}, got {n}")
    values = sorted(set(a.flatten()))
    code = {v: k for k, v in enumerate(values)}
    coded = [[code[e] for e in row] for row in a]
    best_key = None
    best = None
    for rp in itertools.permutations(range(n)):
        colkeys = [tuple(coded[r][c] for r in rp) for c in range(n)]
        cols = sorted(range(n), key=colkeys.__getitem__)
        key = tuple(coded[r][c] for r in rp for c in cols)
        if best_key is None or key < best_key:
            best_key = key
            best = (rp, cols)
    rp, cols = best
    return BistochasticMatrix([[a[r][c] for c in cols] for r in rp])


def set_canonical_key(perms) -> tuple:
    """A key constant on the orbits of family equivalence {P g Q : g in S}.

    Restricted to collections containing the identity; the key is the
    least sorted rank tuple of the translated set over all translations
    that keep the identity inside it.
    """
    perms = list(perms)
    if not perms:
        raise ValueError("need at least one permutation")
    n = perms[0].n
    if n > CANON_CAP:
        raise ValueError(f"set keys are capped at n={CANON_CAP}, got {n}")
    if not any(p.is_identity() for p in perms):
        raise ValueError("collection must contain the identity")
    best = None
    for p in itertools.permutations(range(n)):
        left = Permutation(p)
        linv = left.inverse()
        for h in perms:
            right = h.inverse() * linv
            key = tuple(sorted((left * g * right).rank() for g in perms))
            if best is None or key < best:
                best = key
    return best


class _Collector:
    """Accumulates counters and accepted candidates during the search."""

    def __init__(self, n: int):
        self.n = n
        self.visited = 0
        self.dep = 0
        self.neg = 0
        self.maxtr = 0
        self.raws: dict = {}

    def merge_counters(self, visited, dep, neg, maxtr):
        self.visited += visited
        self.dep += dep
        self.neg += neg
        self.maxtr += maxtr

    def merge_raws(self, raws: dict):
        for key, (count, rep) in raws.items():
            mine = self.raws.get(key)
            if mine is None:
                self.raws[key] = [count, rep]
            else:
                mine[0] += count
                if rep < mine[1]:
                    mine[1] = rep

    def record_candidate(self, tables: _Tables, support_ranks, u, s):
        """File one accepted (support, u, s) candidate under its raw matrix."""
        n = self.n
        anum = [0] * (n * n)
        for k, r in enumerate(support_ranks):
            uk = u[k]
            if uk:
                for j in tables.pos[r]:
                    anum[j] += uk
        g = s
        for v in anum:
            g = gcd(g, v)
        key = (s // g, tuple(v // g for v in anum))
        rep = (len(support_ranks), tuple(support_ranks), tuple(u), s)
        entry = self.raws.get(key)
        if entry is None:
            self.raws[key] = [1, rep]
        else:
            entry[0] += 1
            if rep < entry[1]:
                entry[1] = rep

    def record_pipeline(self, tables: _Tables, support_ranks, result):
        """File a PipelineResult produced on an independent support."""
        if result.status == gram_mod.REJECT_NEGATIVE:
            self.neg += 1
        elif result.status == gram_mod.REJECT_MAXTR:
            self.maxtr += 1
        elif result.status == gram_mod.STATUS_OK:
            x = result.solution.x
            s = lcm(*(v.denominator for v in x))
            u = tuple(int(v * s) for v in x)
            self.record_candidate(tables, support_ranks, u, s)
        else:
            raise RuntimeError(f"unexpected pipeline status {result.status!r}")


def _pipeline_at(tables: _Tables, support_ranks, method: str = "auto"):
    """Exact pipeline on a support known to be linearly independent."""
    perms = [tables.perms[r] for r in support_ranks]
    rows = [
        [int(tables.agree[a, b]) for b in support_ranks] for a in support_ranks
    ]
    return gram_mod._pipeline_known_independent(perms, rows, method)


class _IntBasis:
    """Incremental fraction-free row basis over Python integers (no overflow)."""

    def __init__(self):
        self.rows = []
        self.pivcol = []
        self.pivval = []

    def try_push(self, vec) -> bool:
        """Reduce vec against the basis; push and return True if independent."""
        vec = list(vec)
        prev = 1
        for row, pc, pv in zip(self.rows, self.pivcol, self.pivval):
            c = vec[pc]
            for j in range(len(vec)):
                num = pv * vec[j] - c * row[j]
                q, rem = divmod(num, prev)
                if rem:
                    raise ArithmeticError("non-exact division in basis reduction")
                vec[j] = q
            prev = pv
        for j, v in enumerate(vec):
            if v:
                self.rows.append(vec)
                self.pivcol.append(j)
                self.pivval.append(v)
                return True
        return False

    def pop(self):
        self.rows.pop()
        self.pivcol.pop()
        self.pivval.pop()


def _walk_exact(
    tables: _Tables,
    collector: _Collector,
    prefix_ranks,
    max_support: int,
    node_cap: int,
    filter_seen: set | None = None,
) -> bool:
    """Exact-arithmetic twin of the kernel walk (prefix node included).

    Used for the ``exact`` engine and for subtrees the kernel deferred.
    Returns True when truncated by node_cap.
    """
    nperms = len(tables.perms)
    basis = _IntBasis()
    for r in prefix_ranks[:-1]:
        if not basis.try_push(tables.flat_rows[r]):
            raise RuntimeError("prefix is not linearly independent")
    support = list(prefix_ranks[:-1])
    truncated = False

    def visit(g, depth_start):
        nonlocal truncated
        if truncated:
            return
        if not basis.try_push(tables.flat_rows[g]):
            collector.dep += 1
            return
        support.append(g)
        if collector.visited >= node_cap:
            truncated = True
        else:
            collector.visited += 1
            run = True
            if filter_seen is not None:
                key = set_canonical_key([tables.perms[r] for r in support])
                if key in filter_seen:
                    run = False
                else:
                    filter_seen.add(key)
            if run:
                res = _pipeline_at(tables, support)
                collector.record_pipeline(tables, support, res)
            if len(support) < max_support:
                for h in range(depth_start, nperms):
                    if truncated:
                        break
                    visit(h, h + 1)
        support.pop()
        basis.pop()

    visit(prefix_ranks[-1], prefix_ranks[-1] + 1)
    return truncated


def _resolve_engine(engine: str, n: int) -> str:
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {ENGINES}, got {engine!r}")
    if engine == "auto":
        # tiny dimensions finish instantly interpreted; JIT pays off from n=4
        if n <= 3 or not kernels.JIT_ENABLED:
            return "numpy"
        return "jit"
    return engine


def _shard_batch(args):
    """Worker entry: run a batch of shard prefixes, return mergeable results.

    ``deadline`` is wall-clock (time.time) so it stays meaningful across
    worker processes; it is checked between shards, and inside a shard
    through the node cap.
    """
    n, engine, max_support, deadline, prefixes = args
    tables = get_tables(n)
    collector = _Collector(n)
    deferred = []
    truncated = False
    walk = kernels.get_walk(engine) if engine != "exact" else None
    for prefix in prefixes:
        if deadline is not None and time.time() >= deadline:
            truncated = True
        if truncated:
            break
        node_cap = _node_cap_for(engine, deadline)
        if engine == "exact":
            truncated = _walk_exact(tables, collector, prefix, max_support, node_cap)
            continue
        stats, accepted, defers, trunc = kernels.run_shard(
            walk,
            tables.pmats,
            tables.pos,
            tables.agree,
            prefix,
            max_support,
            node_cap,
        )
        collector.merge_counters(*stats)
        for support_ranks, u, s in accepted:
            collector.record_candidate(tables, support_ranks, u, s)
        deferred.extend(defers)
        truncated = trunc
    counters = (collector.visited, collector.dep, collector.neg, collector.maxtr)
    return counters, collector.raws, deferred, truncated


def enumerate_erdos(
    n: int,
    max_support: int | None = None,
    budget: float | None = None,
    workers: int | None = None,
    engine: str = "auto",
    use_set_filter: bool = False,
    progress=None,
) -> EnumerationReport:
    """Enumerate all Erdos classes in dimension n, up to equivalence.

    A complete run (``complete=True``) certifies that every class whose
    minimal linearly independent support has at most ``max_support``
    elements appears; with the default cap (n-1)^2 + 1 that is every
    class.  ``budget`` is a wall-clock limit in seconds; truncated runs
    report ``complete=False`` with the partial classes still verified.

    ``use_set_filter`` pre-filters equivalent supports by
    ``set_canonical_key`` before solving; it is a pure optimization that
    never changes the class list and forces the exact engine.
    """
    if not 2 <= n <= CANON_CAP:
        raise ValueError(f"enumeration supports 2 <= n <= {CANON_CAP}, got {n}")
    cap = (n - 1) ** 2 + 1
    if max_support is None:
        max_support = cap
    if not 1 <= max_support <= cap:
        raise ValueError(f"max_support must lie in [1, {cap}], got {max_support}")
    if workers is None:
        workers = int(os.environ.get("ERDOSMAT_WORKERS", "1"))
    if workers < 1:
        raise ValueError("workers must be at least 1")
    if use_set_filter:
        engine = "exact"
    engine = _resolve_engine(engine, n)

    t0 = time.perf_counter()
    deadline = time.time() + budget if budget is not None else None
    tables = get_tables(n)
    nperms = factorial(n)
    collector = _Collector(n)
    complete = True
    filter_seen: set | None = set() if use_set_filter else None

    def out_of_time() -> bool:
        return deadline is not None and time.time() >= deadline

    def shallow_node(ranks) -> None:
        collector.visited += 1
        if filter_seen is not None:
            key = set_canonical_key([tables.perms[r] for r in ranks])
            if key in filter_seen:
                return
            filter_seen.add(key)
        res = _pipeline_at(tables, ranks)
        collector.record_pipeline(tables, ranks, res)

    # sizes 1 and 2 run through the exact pipeline in the driver; any two
    # or three distinct permutation matrices are linearly independent
    shallow_node((0,))
    if max_support >= 2:
        for a in range(1, nperms):
            if out_of_time():
                complete = False
                break
            shallow_node((0, a))

    # sizes >= 3 are sharded by the first two non-identity elements
    if max_support >= 3 and complete:
        shards = [(0, a, b) for a in range(1, nperms) for b in range(a + 1, nperms)]
        if engine == "jit":
            kernels.warmup(tables.pmats, tables.pos, tables.agree)
        deferred = []
        done = 0

        def consume(result) -> bool:
            nonlocal complete, done
            counters, raws, defers, truncated = result
            collector.merge_counters(*counters)
            collector.merge_raws(raws)
            deferred.extend(defers)
            done += 1
            if progress is not None:
                progress(done, n_batches)
            if truncated:
                complete = False
            return complete and not out_of_time()

        if use_set_filter:
            # key filtering needs one shared seen-set: run in-process
            n_batches = len(shards)
            for prefix in shards:
                truncated = _walk_exact(
                    tables,
                    collector,
                    prefix,
                    max_support,
                    _node_cap_for(engine, deadline),
                    filter_seen,
                )
                done += 1
                if progress is not None:
                    progress(done, n_batches)
                if truncated:
                    complete = False
                    break
                if out_of_time():
                    break
        elif workers == 1 or engine == "exact":
            n_batches = len(shards)
            for prefix in shards:
                result = _shard_batch((n, engine, max_support, deadline, [prefix]))
                if not consume(result):
                    break
        else:
            batches = [shards[i::workers * 8] for i in range(workers * 8)]
            batches = [b for b in batches if b]
            n_batches = len(batches)
            ctx = get_context("fork")
            with ctx.Pool(workers) as pool:
                jobs = [
                    (n, engine, max_support, deadline, batch) for batch in batches
                ]
                for result in pool.imap(_shard_batch, jobs):
                    if not consume(result):
                        pool.terminate()
                        break
        if out_of_time() and done < n_batches:
            complete = False

        # guarded-out work re-runs through the exact rational path
        for support_ranks, kind in deferred:
            if kind == kernels.DEFER_NODE:
                res = _pipeline_at(tables, support_ranks)
                collector.record_pipeline(tables, support_ranks, res)
            else:
                truncated = _walk_exact(
                    tables, collector, support_ranks, max_support, 1 << 60
                )
                if truncated:
                    complete = False

    classes = _build_classes(tables, collector)
    elapsed = time.perf_counter() - t0
    return EnumerationReport(
        n=n,
        classes=tuple(classes),
        sets_visited=collector.visited,
        rejected_dependent=collector.dep,
        rejected_negative=collector.neg,
        rejected_maxtr=collector.maxtr,
        elapsed=elapsed,
        complete=complete,
        engine=engine,
        workers=workers,
    )


def _build_classes(tables: _Tables, collector: _Collector) -> list:
    """Canonicalize raw accepted matrices, deduplicate, and re-verify."""
    n = tables.n
    grouped: dict = {}
    for (s, anum), (count, rep) in collector.raws.items():
        entries = [
            [Fraction(anum[i * n + j], s) for j in range(n)] for i in range(n)
        ]
        canon = canonical_form(BistochasticMatrix(entries))
        key = canon.flatten()
        entry = grouped.get(key)
        if entry is None:
            grouped[key] = [canon, count, rep]
        else:
            entry[1] += count
            if rep < entry[2]:
                entry[2] = rep

    classes = []
    for canon, sources, rep in grouped.values():
        _, support_ranks, _, _ = rep
        support = tuple(tables.perms[r] for r in support_ranks)
        res = gram_mod.pipeline(list(support))
        if res.status != gram_mod.STATUS_OK:
            raise RuntimeError("class re-verification failed in the exact pipeline")
        if canonical_form(res.matrix) != canon:
            raise RuntimeError("class representative does not match its canonical form")
        verdict, cert = is_erdos(canon)
        frob = frobenius_sq(canon)
        if not verdict or cert.value != frob or frob != res.solution.common_value:
            raise RuntimeError("canonical matrix failed the Erdos re-check")
        classes.append(
            ErdosClass(
                canonical=canon,
                support=support,
                weights=res.solution.x,
                common_value=res.solution.common_value,
                frob_sq=frob,
                sources=sources,
            )
        )
    classes.sort(key=lambda c: (c.frob_sq, c.canonical.flatten()))
    return classes
