"""Eigenmatrices and pseudocyclicity of symmetric association schemes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coherent import CoherentConfiguration, intersection_tensor

__all__ = ["SpectralData", "SpectralError", "spectral", "pseudocyclic_check", "PseudocyclicVerdict",
           "design_check"]


class SpectralError(ValueError):
    """Eigenvalue clustering was ambiguous at the requested tolerance."""


@dataclass
class SpectralData:
    """P[i, j] = eigenvalue of A_j on eigenspace i; Q = |X| P^{-1}."""

    P: np.ndarray
    Q: np.ndarray
    multiplicities: list[int]
    residuals: list[float]
    multiplicity_error: float
    pq_error: float
    notes: list[str] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0

    def rounded_P(self) -> np.ndarray:
        return np.rint(self.P).astype(np.int64)


def _check_scheme(scheme: CoherentConfiguration):
    if len(scheme.fibre_sizes) != 1:
        raise ValueError("spectral analysis needs a one-fibre scheme")
    if not np.array_equal(scheme.ids, scheme.ids.T):
        raise ValueError("spectral analysis needs a symmetric scheme")
    if not scheme.relations[0].is_diagonal:
        raise ValueError("relation 0 must be the diagonal")


def spectral(scheme: CoherentConfiguration, tol: float = 1e-8, seed: int = 0) -> SpectralData:
    """Common eigenspaces of the adjacency matrices in floating point.

    A random positive combination of A_1..A_d is diagonalised; its eigenvalues
    are clustered with relative tolerance ``tol`` and every A_j is evaluated
    on each cluster.  Row 0 of P is the all-ones eigenspace; the remaining
    rows are sorted by decreasing P row for a deterministic layout.
    """
    _check_scheme(scheme)
    n, d1 = scheme.n, scheme.rank
    adj = [scheme.adjacency(j) for j in range(d1)]
    rng = np.random.default_rng(seed)
    coef = rng.uniform(1.0, 2.0, size=d1)
    coef[0] = 0.0
    M = sum(c * A for c, A in zip(coef, adj))
    w, V = np.linalg.eigh(M)
    scale = max(1.0, float(np.abs(w).max()))
    breaks = np.flatnonzero(np.diff(w) > tol * scale) + 1
    groups = np.split(np.arange(n), breaks)
    for g in groups:
        spread = w[g[-1]] - w[g[0]]
        if spread > tol * scale:
            raise SpectralError(f"eigenvalue cluster of width {spread:.3g} is ambiguous")
    if len(groups) != d1:
        raise SpectralError(f"found {len(groups)} eigenspaces, expected {d1}")

    rows, resid, mult = [], [], []
    for g in groups:
        B = V[:, g]
        vals = np.array([np.trace(B.T @ A @ B) / len(g) for A in adj])
        r = max(float(np.linalg.norm(A @ B - val * B)) for A, val in zip(adj, vals))
        rows.append(vals)
        resid.append(r)
        mult.append(len(g))
    P = np.array(rows)
    vals = np.array(scheme.valencies, dtype=float)
    trivial = int(np.argmin(np.abs(P - vals).sum(axis=1)))
    others = [i for i in range(d1) if i != trivial]
    others.sort(key=lambda i: tuple(-np.round(P[i], 6)))
    order = [trivial] + others
    P = P[order]
    mult = [mult[i] for i in order]
    resid = [resid[i] for i in order]
    Q = n * np.linalg.inv(P)
    # an independent Q from orthogonality: Q[j, i] = mu_i P[i, j] / v_j
    Q_orth = (np.array(mult)[None, :] * P.T) / vals[:, None]
    pq_error = float(np.abs(P @ Q_orth - n * np.eye(d1)).max())
    mu_from_Q = Q[0]
    mult_err = float(np.abs(mu_from_Q - np.array(mult)).max())
    return SpectralData(P, Q, mult, resid, mult_err, pq_error)


@dataclass
class PseudocyclicVerdict:
    pseudocyclic: bool
    t: int | None
    valencies: list[int]
    sums: list[int]
    spectral_agrees: bool | None = None
    design: bool | None = None

    def __bool__(self) -> bool:
        return self.pseudocyclic


def pseudocyclic_check(scheme: CoherentConfiguration, spectral_data: SpectralData | None = None,
                       design: bool = False) -> PseudocyclicVerdict:
    """All nontrivial valencies equal t and sum_k p^k_{k j} = t - 1 for every j."""
    _check_scheme(scheme)
    tensor = intersection_tensor(scheme)
    d1 = scheme.rank
    vals = scheme.valencies[1:]
    sums = [int(sum(tensor.p[k, j, k] for k in range(1, d1))) for j in range(1, d1)]
    t = vals[0] if vals and len(set(vals)) == 1 else None
    ok = t is not None and all(s == t - 1 for s in sums)
    verdict = PseudocyclicVerdict(ok, t if ok else None, vals, sums)
    if spectral_data is not None:
        mu = spectral_data.multiplicities[1:]
        verdict.spectral_agrees = (len(set(mu)) == 1) == ok and (not ok or mu[0] == t)
    if design:
        verdict.design = design_check(scheme, t) if t is not None else False
    return verdict


def design_check(scheme: CoherentConfiguration, t: int) -> bool:
    """Blocks R_i(x) over all x and i >= 1 form a 2-(n, t, t-1) design."""
    n = scheme.n
    blocks = []
    for i in range(1, scheme.rank):
        blocks.append(scheme.adjacency(i, np.int64))
    B = np.concatenate(blocks, axis=0)  # one block per (i, x)
    if not np.all(B.sum(axis=1) == t):
        return False
    cover = B.T @ B
    off = cover[~np.eye(n, dtype=bool)]
    return bool(np.all(off == t - 1))
