"""Instance checks for the l1 bound on rank-r projections and the bottom-r theorem.

All margins are signed and unclamped: a negative margin beyond tolerance is a
counterexample, and the same functions serve as the search loop for one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .exact import to_float
from .kernels import f2
from .linalg import Projection, as_symmetric, derive_seed, sym_eigen, uniforms
from .majorant import MajorantCoeffs, beta


@dataclass(frozen=True)
class ProjectionStats:
    n: int
    r: int
    C: float    # sum of row norms
    X: float    # Frobenius norm of sum c_i phi(u_i)
    X2: float
    l1: float   # ||Q||_1


def projection_stats(P: Projection) -> ProjectionStats:
    c = P.norms
    u = P.directions
    t = np.clip(u @ u.T, -1.0, 1.0)
    x2 = float(c @ f2(P.r, t) @ c)
    return ProjectionStats(P.n, P.r, float(c.sum()), float(np.sqrt(max(x2, 0.0))), x2,
                           float(np.abs(P.Q).sum()))


def check_cs_inequality(P: Projection) -> float:
    """``r n - (C^2 + r X^2)``."""
    st = projection_stats(P)
    return P.r * P.n - (st.C ** 2 + P.r * st.X2)


def check_l1_bound(P: Projection) -> float:
    """``beta_r n - ||Q||_1``."""
    if P.r < 2:
        raise ValueError("the l1 bound needs rank r >= 2")
    return to_float(beta(P.r)) * P.n - float(np.abs(P.Q).sum())


@dataclass(frozen=True)
class MajorantChain:
    l1: float
    quadratic: float   # a C^2 + b X^2
    relaxed: float     # a (C^2 + r X^2)
    final: float       # a r n


def check_abstract_majorant(P: Projection, coeffs: MajorantCoeffs) -> MajorantChain:
    if coeffs.gamma.sign() < 0 or coeffs.slack().sign() < 0:
        raise ValueError("coefficients must satisfy gamma >= 0 and b <= r a")
    if coeffs.r != P.r:
        raise ValueError(f"coefficients are for r={coeffs.r}, projection has rank {P.r}")
    a, b, _ = coeffs.floats()
    st = projection_stats(P)
    return MajorantChain(st.l1, a * st.C ** 2 + b * st.X2, a * (st.C ** 2 + P.r * st.X2),
                         a * P.r * P.n)


def sign_split(Q) -> tuple[float, float]:
    """``(sum_{i<j} q_ij, sum_{i<j} |q_ij|)``."""
    q = np.asarray(Q, dtype=float)
    iu = np.triu_indices(q.shape[0], 1)
    return float(q[iu].sum()), float(np.abs(q[iu]).sum())


def negative_part_bound(A, Q) -> float:
    """``tr(AQ) - 2 sum_{i<j} min(q_ij, 0)``; nonnegative for weighted matrices."""
    q = np.asarray(Q, dtype=float)
    iu = np.triu_indices(q.shape[0], 1)
    return float(np.trace(np.asarray(A) @ q) - 2.0 * np.minimum(q[iu], 0.0).sum())


# ---------------------------------------------------------------------------
# weighted matrices and the bottom-r theorem


def weighted_matrix(a) -> np.ndarray:
    """Validate 0 <= a_ij <= 1 off the diagonal and a_ii >= 0."""
    m = as_symmetric(a)
    off = m[~np.eye(m.shape[0], dtype=bool)]
    if off.size and (off.min() < 0 or off.max() > 1):
        raise ValueError("off-diagonal entries must lie in [0, 1]")
    if np.any(np.diag(m) < 0):
        raise ValueError("diagonal entries must be nonnegative")
    return m


def random_weighted_matrix(n: int, seed: int) -> np.ndarray:
    u = uniforms(seed, n * n).reshape(n, n)
    m = np.triu(u, 1)
    m = m + m.T + np.diag(np.diag(u))
    return weighted_matrix(m)


def adversarial_weighted_matrices(n: int, seed: int) -> dict[str, np.ndarray]:
    """Corner cases of the hypothesis box: all-zero, all-one, Bernoulli(p) 0/1 patterns."""
    out = {"zero": np.zeros((n, n)), "ones": np.ones((n, n)),
           "complete": np.ones((n, n)) - np.eye(n)}
    for i, p in enumerate((0.1, 0.5, 0.9)):
        u = uniforms(derive_seed(seed, i), n * n).reshape(n, n)
        b = np.triu((u < p).astype(float), 1)
        out[f"bernoulli_{p}"] = b + b.T
    return {k: weighted_matrix(v) for k, v in out.items()}


@dataclass(frozen=True)
class BottomRMargins:
    n: int
    r: int
    bottom_sum: float
    bottom_eigenvalue: float
    sum_margin: float        # bottom_sum + beta_r n / 2
    eigenvalue_margin: float  # mu_{n-r+1} + beta_r n / (2r)


def check_bottom_r(A, r: int, method: str = "jacobi") -> BottomRMargins:
    m = weighted_matrix(A)
    n = m.shape[0]
    if not 2 <= r <= n:
        raise ValueError(f"need 2 <= r <= n, got r={r}, n={n}")
    w = sym_eigen(m, method).eigenvalues
    b = to_float(beta(r))
    bottom = float(w[n - r:].sum())
    mu = float(w[n - r])
    return BottomRMargins(n, r, bottom, mu, bottom + b * n / 2.0, mu + b * n / (2.0 * r))


def batch_record(check: str, n: int, r: int, seed, margin: float) -> str:
    """One JSON line for batch output."""
    return json.dumps({"check": check, "n": n, "r": r, "seed": seed, "margin": margin},
                      sort_keys=False)

