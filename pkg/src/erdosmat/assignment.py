"""Exact maximal trace over permutations and the Marcus-Ree gap.

The maximal trace of a square matrix A is the largest Frobenius inner
product <A, P> over permutation matrices P, an assignment-problem
optimum.  For bistochastic A it dominates the squared Frobenius norm
(Marcus-Ree); the matrices attaining equality are the Erdos matrices.

Witnesses are reported as the permutations whose matrices attain the
value, i.e. p with sum_j A[p(j), j] equal to the maximal trace.  The
brute-force method enumerates all of S_n and collects every witness;
the Hungarian method returns the value and a single witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import BistochasticMatrix, Matrix
from .perms import Permutation, all_permutations

BRUTE_CAP = 8


@dataclass(frozen=True)
class MaxTraceCertificate:
    """Maximal trace value plus witnessing permutations.

    ``complete`` is True when every witness is listed (brute force only).
    """

    value: Fraction
    witnesses: tuple
    complete: bool

    @property
    def witness(self) -> Permutation:
        return self.witnesses[0]


def frobenius_sq(a: Matrix) -> Fraction:
    """Exact sum of squared entries."""
    return sum((e * e for row in a for e in row), Fraction(0))


def max_trace(a: Matrix, method: str = "auto") -> MaxTraceCertificate:
    """Exact maximal trace of a square matrix.

    method: ``brute`` (all n! permutations, every witness, n <= 8),
    ``hungarian`` (exact Kuhn-Munkres over rationals, one witness), or
    ``auto`` (brute up to the cap, Hungarian beyond).
    """
    n = a.nrows
    if a.ncols != n:
        raise ValueError("maximal trace requires a square matrix")
    if method == "auto":
        method = "brute" if n <= BRUTE_CAP else "hungarian"
    if method == "brute":
        if n > BRUTE_CAP:
            raise ValueError(
                f"brute-force maximal trace is capped at n={BRUTE_CAP}, got {n}"
            )
        value, witnesses = _brute_max(a)
        return MaxTraceCertificate(value, witnesses, complete=True)
    if method == "hungarian":
        value, images = _assignment_max(a)
        return MaxTraceCertificate(value, (Permutation(images),), complete=False)
    raise ValueError(f"unknown method {method!r}")


def delta(a: Matrix, method: str = "auto") -> Fraction:
    """The Marcus-Ree gap maxTr(A) - ||A||_F^2; zero exactly on Erdos matrices."""
    return max_trace(a, method).value - frobenius_sq(a)


def is_erdos(a: Matrix, method: str = "auto"):
    """Whether the maximal trace equals the squared Frobenius norm exactly.

    Returns (verdict, certificate).
    """
    cert = max_trace(a, method)
    return cert.value == frobenius_sq(a), cert


def max_delta_matrix(n: int) -> BistochasticMatrix:
    """The unique (up to equivalence) maximizer of the gap: 1/2 I_n + 1/2 J_n.

    Its gap is (n - 1)/4, the largest possible in dimension n.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    off = Fraction(1, 2 * n)
    diag = Fraction(n + 1, 2 * n)
    return BistochasticMatrix(
        [[diag if i == j else off for j in range(n)] for i in range(n)]
    )


def _brute_max(a: Matrix):
    n = a.nrows
    best = None
    witnesses = []
    for p in all_permutations(n):
        v = sum((a[p.images[j]][j] for j in range(n)), Fraction(0))
        if best is None or v > best:
            best = v
            witnesses = [p]
        elif v == best:
            witnesses.append(p)
    return best, tuple(witnesses)


def _assignment_max(a: Matrix):
    """Exact max assignment; returns (value, images) with images[j] the row of column j.

    Kuhn-Munkres shortest-augmenting-path formulation with rational
    potentials; None plays the role of infinity.
    """
    n = a.nrows
    cost = [[-a[i][j] for j in range(n)] for i in range(n)]
    u = [Fraction(0)] * (n + 1)
    v = [Fraction(0)] * (n + 1)
    p = [0] * (n + 1)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [None] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            best = None
            j1 = -1
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                if minv[j] is None or cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if best is None or minv[j] < best:
                    best = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += best
                    v[j] -= best
                elif minv[j] is not None:
                    minv[j] -= best
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    images = [0] * n
    for j in range(1, n + 1):
        images[j - 1] = p[j] - 1
    value = sum((a[images[j]][j] for j in range(n)), Fraction(0))
    return value, images
