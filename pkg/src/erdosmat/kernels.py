"""Integer hot kernel for the enumeration search.

The depth-first walk over linearly independent permutation collections
is one self-contained int64 function over numpy arrays.  It is compiled
with numba's @njit when available and enabled (env ERDOSMAT_JIT, default
on) and runs as the same function interpreted over numpy otherwise, so
both modes share one code path and produce identical results.

Exactness: all arithmetic is integer (fraction-free Bareiss elimination,
Cramer-scaled Gram solves, integer Erdos checks).  Every multiplication
is preceded by a magnitude guard; when a guard trips, the node or whole
subtree is deferred to the caller, which re-runs it through the exact
rational pipeline.  Guards therefore affect speed, never results.
"""

from __future__ import annotations

import os

import numpy as np


def _env_flag(name: str, default: bool) -> bool:
    raw = os.environ.get(name)
    if raw is None:
        return default
    return raw.strip().lower() not in ("0", "false", "no", "off")


try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        return wrap


JIT_ENABLED = HAVE_NUMBA and _env_flag("ERDOSMAT_JIT", True)

# operand magnitude cap: products of two guarded operands stay well inside
# int64, and sums of up to ~30 such products cannot overflow either
GUARD = 1 << 28

# status bits returned by the walk
TRUNCATED = 1
ACCEPT_OVERFLOW = 2
DEFER_OVERFLOW = 4
PREFIX_ERROR = 8

# counter indices
C_VISITED, C_DEP, C_NEG, C_MAX, C_ACC, C_DEFER = 0, 1, 2, 3, 4, 5

# defer kinds
DEFER_SUBTREE = 0
DEFER_NODE = 1


def _walk_impl(
    pmats,
    pos,
    agree,
    prefix,
    max_support,
    node_cap,
    counters,
    acc_sup,
    acc_u,
    acc_s,
    acc_m,
    def_sup,
    def_m,
    def_kind,
):
    """DFS over independent supersets of ``prefix`` along increasing rank.

    The prefix itself is processed as the first node; extensions use
    permutation indices greater than the last prefix element.  Every
    visited node is linearly independent by construction; its Gram system
    is solved in integers and accepted candidates are written to the
    ``acc_*`` buffers as (support, u, s) with weights u/s.
    """
    nperms = pmats.shape[0]
    n2 = pmats.shape[1]
    n = pos.shape[1]
    m0 = prefix.shape[0]
    acc_cap = acc_s.shape[0]
    def_cap = def_m.shape[0]

    support = np.zeros(max_support, np.int64)
    basis = np.zeros((max_support, n2), np.int64)
    pivcol = np.zeros(max_support, np.int64)
    pivval = np.zeros(max_support, np.int64)
    rowmax = np.zeros(max_support, np.int64)
    nextg = np.zeros(max_support + 1, np.int64)
    gwork = np.zeros((max_support, max_support + 1), np.int64)
    u = np.zeros(max_support, np.int64)
    anum = np.zeros(n2, np.int64)

    status = 0
    base = m0 - 1

    # seed the basis with all but the last prefix element
    for k in range(base):
        support[k] = prefix[k]
        for j in range(n2):
            basis[k, j] = pmats[prefix[k], j]
        # fraction-free reduction against earlier rows
        prev = 1
        vmax = 1
        for r in range(k):
            pr = pivval[r]
            c = basis[k, pivcol[r]]
            nmax = 0
            for j in range(n2):
                nv = (pr * basis[k, j] - c * basis[r, j]) // prev
                basis[k, j] = nv
                if nv < 0:
                    nv = -nv
                if nv > nmax:
                    nmax = nv
            vmax = nmax
            prev = pr
        pc = -1
        for j in range(n2):
            if basis[k, j] != 0:
                pc = j
                break
        if pc < 0:
            return PREFIX_ERROR
        pivcol[k] = pc
        pivval[k] = basis[k, pc]
        rowmax[k] = vmax

    depth = base
    nextg[depth] = prefix[base]
    while depth >= base:
        if depth == base:
            stop = prefix[base] + 1
        else:
            stop = nperms
        g = nextg[depth]
        if g >= stop:
            depth -= 1
            continue
        nextg[depth] = g + 1

        # ---- try to extend the basis with permutation g (fraction-free) ----
        for j in range(n2):
            basis[depth, j] = pmats[g, j]
        prev = 1
        vmax = 1
        guard_hit = False
        for r in range(depth):
            pr = pivval[r]
            pa = pr if pr >= 0 else -pr
            c = basis[depth, pivcol[r]]
            ca = c if c >= 0 else -c
            if pa > GUARD or ca > GUARD or vmax > GUARD or rowmax[r] > GUARD:
                guard_hit = True
                break
            nmax = 0
            for j in range(n2):
                nv = (pr * basis[depth, j] - c * basis[r, j]) // prev
                basis[depth, j] = nv
                if nv < 0:
                    nv = -nv
                if nv > nmax:
                    nmax = nv
            vmax = nmax
            prev = pr
        if guard_hit:
            # defer the whole subtree rooted at this extension
            if counters[C_DEFER] >= def_cap:
                return status | DEFER_OVERFLOW
            idx = counters[C_DEFER]
            for k in range(depth):
                def_sup[idx, k] = support[k]
            def_sup[idx, depth] = g
            def_m[idx] = depth + 1
            def_kind[idx] = DEFER_SUBTREE
            counters[C_DEFER] += 1
            continue
        pc = -1
        for j in range(n2):
            if basis[depth, j] != 0:
                pc = j
                break
        if pc < 0:
            counters[C_DEP] += 1
            continue
        pivcol[depth] = pc
        pivval[depth] = basis[depth, pc]
        rowmax[depth] = vmax
        support[depth] = g

        # ---- new independent node: run the integer pipeline ----
        if counters[C_VISITED] >= node_cap:
            return status | TRUNCATED
        counters[C_VISITED] += 1
        m = depth + 1

        # Gram system [G | 1], Bareiss forward elimination; the Gram matrix
        # of an independent support is positive definite, so diagonal
        # pivots are its positive leading principal minors
        for i in range(m):
            for j in range(m):
                gwork[i, j] = agree[support[i], support[j]]
            gwork[i, m] = 1
        ok = True
        prev = 1
        for r in range(m):
            pv = gwork[r, r]
            if pv <= 0 or pv > GUARD:
                ok = False
                break
            for i in range(r + 1, m):
                f = gwork[i, r]
                fa = f if f >= 0 else -f
                if fa > GUARD:
                    ok = False
                    break
                for j in range(r, m + 1):
                    x = gwork[i, j]
                    xa = x if x >= 0 else -x
                    y = gwork[r, j]
                    ya = y if y >= 0 else -y
                    if xa > GUARD or ya > GUARD:
                        ok = False
                        break
                    gwork[i, j] = (pv * x - f * y) // prev
                if not ok:
                    break
            if not ok:
                break
            prev = pv
        s = np.int64(0)
        if ok:
            # back substitution for u = det * y (integral by Cramer)
            detv = gwork[m - 1, m - 1]
            if detv > GUARD:
                ok = False
            else:
                for i in range(m - 1, -1, -1):
                    rhs = gwork[i, m]
                    ra = rhs if rhs >= 0 else -rhs
                    if ra > GUARD:
                        ok = False
                        break
                    acc = detv * rhs
                    for j in range(i + 1, m):
                        x = gwork[i, j]
                        xa = x if x >= 0 else -x
                        uj = u[j]
                        ua = uj if uj >= 0 else -uj
                        if xa > GUARD or ua > GUARD:
                            ok = False
                            break
                    if not ok:
                        break
                    for j in range(i + 1, m):
                        acc -= gwork[i, j] * u[j]
                    u[i] = acc // gwork[i, i]
                    ui = u[i]
                    if (ui if ui >= 0 else -ui) > GUARD:
                        ok = False
                        break
            if ok:
                for i in range(m):
                    s += u[i]
                if s <= 0:
                    ok = False
        if not ok:
            # defer just this node's pipeline to the exact path
            if counters[C_DEFER] >= def_cap:
                return status | DEFER_OVERFLOW
            idx = counters[C_DEFER]
            for k in range(m):
                def_sup[idx, k] = support[k]
            def_m[idx] = m
            def_kind[idx] = DEFER_NODE
            counters[C_DEFER] += 1
        else:
            neg = False
            for i in range(m):
                if u[i] < 0:
                    neg = True
                    break
            if neg:
                counters[C_NEG] += 1
            else:
                # remove the common factor of (u, s); gcd(u) divides s = sum(u)
                gg = np.int64(0)
                for i in range(m):
                    a = u[i]
                    b = gg
                    while b:
                        a, b = b, a % b
                    gg = a
                if gg > 1:
                    for i in range(m):
                        u[i] //= gg
                    s //= gg
                if s > GUARD:
                    if counters[C_DEFER] >= def_cap:
                        return status | DEFER_OVERFLOW
                    idx = counters[C_DEFER]
                    for k in range(m):
                        def_sup[idx, k] = support[k]
                    def_m[idx] = m
                    def_kind[idx] = DEFER_NODE
                    counters[C_DEFER] += 1
                else:
                    # integer Erdos check: frob == s * maxtr on numerators
                    for j in range(n2):
                        acc = np.int64(0)
                        for k in range(m):
                            acc += u[k] * pmats[support[k], j]
                        anum[j] = acc
                    frob = np.int64(0)
                    for j in range(n2):
                        frob += anum[j] * anum[j]
                    best = np.int64(0)
                    for w in range(nperms):
                        t = np.int64(0)
                        for jj in range(n):
                            t += anum[pos[w, jj]]
                        if t > best:
                            best = t
                    if frob == s * best:
                        if counters[C_ACC] >= acc_cap:
                            return status | ACCEPT_OVERFLOW
                        idx = counters[C_ACC]
                        for k in range(m):
                            acc_sup[idx, k] = support[k]
                            acc_u[idx, k] = u[k]
                        acc_s[idx] = s
                        acc_m[idx] = m
                        counters[C_ACC] += 1
                    else:
                        counters[C_MAX] += 1

        # ---- descend ----
        if depth + 1 < max_support:
            depth += 1
            nextg[depth] = g + 1
    return status


if JIT_ENABLED:
    _walk_jit = njit(cache=True)(_walk_impl)
else:  # pragma: no cover - exercised via ERDOSMAT_JIT=0
    _walk_jit = None


def get_walk(engine: str):
    """The walk callable for ``engine`` in {"jit", "numpy"}."""
    if engine == "jit":
        if _walk_jit is None:
            raise ValueError("numba JIT is unavailable or disabled (ERDOSMAT_JIT=0)")
        return _walk_jit
    if engine == "numpy":
        return _walk_impl
    raise ValueError(f"unknown kernel engine {engine!r}")


def run_shard(
    walk,
    pmats,
    pos,
    agree,
    prefix,
    max_support: int,
    node_cap: int,
    acc_cap: int = 4096,
    def_cap: int = 1024,
):
    """Run one walk shard, growing the output buffers on overflow.

    Returns (counters, accepted, deferred, truncated) with ``accepted`` a
    list of (support tuple, u tuple, s) and ``deferred`` a list of
    (support tuple, kind).
    """
    prefix = np.asarray(prefix, np.int64)
    while True:
        counters = np.zeros(6, np.int64)
        acc_sup = np.zeros((acc_cap, max_support), np.int64)
        acc_u = np.zeros((acc_cap, max_support), np.int64)
        acc_s = np.zeros(acc_cap, np.int64)
        acc_m = np.zeros(acc_cap, np.int64)
        def_sup = np.zeros((def_cap, max_support), np.int64)
        def_m = np.zeros(def_cap, np.int64)
        def_kind = np.zeros(def_cap, np.int64)
        status = walk(
            pmats,
            pos,
            agree,
            prefix,
            max_support,
            node_cap,
            counters,
            acc_sup,
            acc_u,
            acc_s,
            acc_m,
            def_sup,
            def_m,
            def_kind,
        )
        status = int(status)
        if status & PREFIX_ERROR:
            raise RuntimeError("shard prefix is not linearly independent")
        if status & ACCEPT_OVERFLOW:
            acc_cap *= 8
            continue
        if status & DEFER_OVERFLOW:
            def_cap *= 8
            continue
        accepted = []
        for i in range(int(counters[C_ACC])):
            m = int(acc_m[i])
            accepted.append(
                (
                    tuple(int(v) for v in acc_sup[i, :m]),
                    tuple(int(v) for v in acc_u[i, :m]),
                    int(acc_s[i]),
                )
            )
        deferred = []
        for i in range(int(counters[C_DEFER])):
            m = int(def_m[i])
            deferred.append(
                (tuple(int(v) for v in def_sup[i, :m]), int(def_kind[i]))
            )
        stats = tuple(int(counters[k]) for k in (C_VISITED, C_DEP, C_NEG, C_MAX))
        return stats, accepted, deferred, bool(status & TRUNCATED)


def warmup(pmats, pos, agree) -> None:
    """Trigger JIT compilation with a trivial shard (no-op when not jitted)."""
    if _walk_jit is None:
        return
    run_shard(
        _walk_jit,
        pmats,
        pos,
        agree,
        [0],
        max_support=1,
        node_cap=4,
        acc_cap=4,
        def_cap=4,
    )
