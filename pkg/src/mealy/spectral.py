"""Eigenvalue gaps of Schreier graphs.

The adjacency operator is the sum of the |Q| per-state permutation matrices
(self-loops counted once each), symmetrized as S = (A + A^T)/2 when the
generators are not involutions.  The raw two-sided gap of the |Q|-regular
graph is |Q| - max(lambda_2, -lambda_min); the normalized gap divides by the
degree |Q| so that families of different degree plot on the same [0, 1]
scale, which is the convention used when quoting gap levels for 3-regular
families.  Positive gaps bounded away from zero across a family are what
two-sided expansion means.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .automaton import Automaton
from .schreier import SchreierGraph, build

DENSE_CAP = 1 << 13


@dataclass
class SpectrumReport:
    """Extremal eigenvalues of one level's graph.

    gap is the raw quantity |Q| - max(lambda_2, -lambda_min); gap_normalized
    is gap / |Q|, the value reported by two_sided_gap and emitted in series
    output.
    """

    level: int
    n_vertices: int
    lam_max: float
    lam2: float
    lam_min: float
    gap: float
    gap_normalized: float
    solver: str
    tolerance: float
    disconnected: bool = False

    def csv_row(self) -> str:
        return (
            f"{self.level},{self.n_vertices},{self.lam2:.10f},"
            f"{self.lam_min:.10f},{self.gap_normalized:.10f},{self.solver}"
        )


def adjacency(G: SchreierGraph, symmetrize: bool = True, sparse: bool = False):
    """Adjacency matrix with one unit per state edge, optionally (A+A^T)/2."""
    nv = G.n_vertices
    if sparse:
        import scipy.sparse as sp

        rows = np.concatenate([np.arange(nv)] * len(G.perms))
        cols = np.concatenate([np.asarray(p) for p in G.perms])
        A = sp.coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(nv, nv)).tocsr()
        return (A + A.T) * 0.5 if symmetrize else A
    A = np.zeros((nv, nv))
    for p in G.perms:
        np.add.at(A, (np.arange(nv), np.asarray(p)), 1.0)
    return (A + A.T) * 0.5 if symmetrize else A


def spectrum(G: SchreierGraph, dense_cap: int = DENSE_CAP) -> SpectrumReport:
    """Extremal eigenvalues and the two-sided gap of the symmetrized graph.

    Dense full spectrum up to dense_cap vertices; Lanczos extremal pairs
    beyond.  A disconnected graph shows lambda_2 = lambda_max = |Q| and is
    flagged.
    """
    nq = len(G.perms)
    nv = G.n_vertices
    if nv == 1:
        # single vertex: no lambda_2; the gap is reported as the 2|Q| sentinel
        return SpectrumReport(
            G.n, 1, float(nq), float("nan"), float(nq), 2.0 * nq, 2.0, "dense", 0.0
        )
    if nv <= dense_cap:
        S = adjacency(G, symmetrize=True, sparse=False)
        vals = np.linalg.eigvalsh(S)
        lam_max, lam2, lam_min = float(vals[-1]), float(vals[-2]), float(vals[0])
        solver, tol = "dense", 1e-9
    else:
        import scipy.sparse.linalg as spl

        S = adjacency(G, symmetrize=True, sparse=True)
        top = spl.eigsh(S, k=2, which="LA", tol=1e-6, maxiter=100000, return_eigenvectors=False)
        bot = spl.eigsh(S, k=1, which="SA", tol=1e-6, maxiter=100000, return_eigenvectors=False)
        top = np.sort(top)
        lam_max, lam2, lam_min = float(top[-1]), float(top[-2]), float(bot[0])
        solver, tol = "iterative", 1e-6
    disconnected = (lam_max - lam2) < 1e-8 * nq
    gap = nq - max(lam2, -lam_min)
    return SpectrumReport(
        G.n, nv, lam_max, lam2, lam_min, gap, gap / nq, solver, tol, disconnected
    )


def two_sided_gap(G: SchreierGraph, dense_cap: int = DENSE_CAP) -> float:
    """Degree-normalized two-sided gap, 1 - max(lambda_2, -lambda_min)/|Q|."""
    return spectrum(G, dense_cap=dense_cap).gap_normalized


def gap_series(
    M: Automaton, n_min: int, n_max: int, dense_cap: int = DENSE_CAP
) -> list[SpectrumReport]:
    out = []
    for n in range(n_min, n_max + 1):
        out.append(spectrum(build(M, n), dense_cap=dense_cap))
    return out


CSV_HEADER = "n,vertices,lambda2,lambda_min,gap,solver"


def write_gap_csv(path: str, reports: list[SpectrumReport]) -> None:
    with open(path, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in reports:
            fh.write(r.csv_row() + "\n")


def write_gap_dat(path: str, reports: list[SpectrumReport]) -> None:
    """Two-column n gap rows, gnuplot style; normalized gap."""
    with open(path, "w") as fh:
        for r in reports:
            fh.write(f"{r.level} {r.gap_normalized:.10f}\n")
