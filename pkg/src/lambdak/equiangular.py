"""Extremal equiangular line systems and the doubled graphs built from them.

An extremal system has N = r(r+1)/2 lines in R^r with common |cosine| 1/sqrt(r+2).
Doubling it (two vertices per line, edges by the sign of the inner product)
gives a graph on n = 2N vertices whose (r+1)-th eigenvalue is (N - r)/(alpha r),
which equals alpha_{r+1} n - 1: the eigenvalue bound is attained.

Seidel matrices here use S_ij = sign(<u_i, u_j>) so that the Gram matrix is
I + alpha S.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .exact import to_float
from .graphs import Graph
from .linalg import orthonormalize, sym_eigen
from .majorant import alpha as alpha_k

EQUI_TOL = 1e-9
KNOWN_EXTREMAL_R = (2, 3, 7, 23)


class LineSystemError(ValueError):
    pass


def gerzon_bound(r: int) -> int:
    return r * (r + 1) // 2


@dataclass(frozen=True, eq=False)
class LineSystem:
    """Unit representatives (rows of ``vectors``) of N equiangular lines in R^r."""

    vectors: np.ndarray
    alpha: float = field(init=False)

    def __post_init__(self):
        v = np.array(self.vectors, dtype=float)
        if v.ndim != 2 or v.shape[0] < 2:
            raise LineSystemError("need at least two vectors given as rows")
        object.__setattr__(self, "vectors", v)
        norms = np.linalg.norm(v, axis=1)
        bad = np.nonzero(np.abs(norms - 1.0) > EQUI_TOL)[0]
        if bad.size:
            raise LineSystemError(f"vector {int(bad[0])} is not unit length (norm {norms[bad[0]]:.12g})")
        g = np.abs(v @ v.T)
        iu = np.triu_indices(v.shape[0], 1)
        a = float(np.mean(g[iu]))
        dev = np.abs(g - a)
        np.fill_diagonal(dev, 0.0)
        worst = np.unravel_index(np.argmax(dev), dev.shape)
        if dev[worst] > EQUI_TOL:
            i, j = sorted(int(x) for x in worst)
            raise LineSystemError(f"lines {i} and {j} have |cos| {g[i, j]:.12g}, expected {a:.12g}")
        if v.shape[0] > gerzon_bound(v.shape[1]):
            raise LineSystemError(f"{v.shape[0]} lines exceed the Gerzon bound {gerzon_bound(v.shape[1])}")
        if v.shape[0] == gerzon_bound(v.shape[1]) and abs(a - 1 / math.sqrt(v.shape[1] + 2)) > EQUI_TOL:
            raise LineSystemError(f"extremal system must have angle 1/sqrt(r+2), got {a:.12g}")
        object.__setattr__(self, "alpha", a)

    @property
    def N(self) -> int:
        return self.vectors.shape[0]

    @property
    def r(self) -> int:
        return self.vectors.shape[1]

    @property
    def extremal(self) -> bool:
        return self.N == gerzon_bound(self.r)

    def gram(self) -> np.ndarray:
        return self.vectors @ self.vectors.T

    def negate(self, which) -> "LineSystem":
        """Same lines with the representatives in ``which`` replaced by their negatives."""
        v = self.vectors.copy()
        v[list(which)] *= -1.0
        return LineSystem(v)


# ---------------------------------------------------------------------------
# built-in systems


def lines_r2() -> LineSystem:
    h = math.sqrt(3) / 2
    return LineSystem([[1.0, 0.0], [0.5, h], [-0.5, h]])


def lines_r3() -> LineSystem:
    """The six diagonals of the icosahedron."""
    phi = (1 + math.sqrt(5)) / 2
    raw = []
    for sgn in (1, -1):
        raw.append((0.0, sgn * 1.0, phi))
        raw.append((sgn * 1.0, phi, 0.0))
        raw.append((phi, 0.0, sgn * 1.0))
    v = np.array(raw)
    return LineSystem(v / np.linalg.norm(v, axis=1, keepdims=True))


def helmert_basis(m: int) -> np.ndarray:
    """Orthonormal basis (rows) of the sum-zero hyperplane in R^m."""
    h = np.zeros((m - 1, m))
    for k in range(1, m):
        h[k - 1, :k] = 1.0
        h[k - 1, k] = -k
        h[k - 1] /= math.sqrt(k * (k + 1))
    return h


def lines_r7() -> LineSystem:
    """28 lines from the vectors with two entries 3 and six entries -1 in R^8."""
    rows = []
    for i in range(8):
        for j in range(i + 1, 8):
            x = -np.ones(8)
            x[[i, j]] = 3.0
            rows.append(x)
    x = np.array(rows) / math.sqrt(24.0)
    return LineSystem(x @ helmert_basis(8).T)


# Golay code [23, 12, 7] from g(x) = 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11
GOLAY_GENERATOR_POLY = (1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1)
GOLAY_WEIGHTS = {0: 1, 7: 253, 8: 506, 11: 1288, 12: 1288, 15: 506, 16: 253, 23: 1}


def golay_generator_matrix() -> np.ndarray:
    g = np.zeros((12, 23), dtype=np.int64)
    for i in range(12):
        g[i, i:i + 12] = GOLAY_GENERATOR_POLY
    return g


def golay_codewords() -> np.ndarray:
    g = golay_generator_matrix()
    msgs = (np.arange(4096)[:, None] >> np.arange(12)) & 1
    return msgs @ g % 2


def golay_weight_distribution() -> dict[int, int]:
    w = golay_codewords().sum(axis=1)
    vals, counts = np.unique(w, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def witt_blocks() -> np.ndarray:
    """253 x 23 incidence matrix of the Steiner system S(4,7,23) (weight-7 codewords)."""
    dist = golay_weight_distribution()
    if dist != GOLAY_WEIGHTS:
        raise LineSystemError(f"Golay weight distribution mismatch: {dist}")
    words = golay_codewords()
    return words[words.sum(axis=1) == 7]


def seidel_matrix_r23() -> np.ndarray:
    """Seidel matrix of the regular two-graph on the 23 points and 253 blocks of S(4,7,23).

    Graph: points pairwise non-adjacent, point ~ block iff incident,
    block ~ block iff they share exactly one point. S = J - I - 2A.
    """
    blocks = witt_blocks().astype(float)
    meet = blocks @ blocks.T
    n = 23 + 253
    a = np.zeros((n, n))
    a[:23, 23:] = blocks.T
    a[23:, :23] = blocks
    a[23:, 23:] = (meet == 1)
    np.fill_diagonal(a, 0.0)
    return np.ones((n, n)) - np.eye(n) - 2.0 * a


def seidel_matrix(L: LineSystem) -> np.ndarray:
    s = np.sign(L.gram())
    np.fill_diagonal(s, 0.0)
    return s


def lines_from_seidel(S, r: int, method: str = "jacobi") -> LineSystem:
    """Factor I + S/sqrt(r+2) as a rank-r Gram matrix and return its vectors."""
    s = np.asarray(S, dtype=float)
    n = s.shape[0]
    off = s[~np.eye(n, dtype=bool)]
    if s.shape != (n, n) or np.any(np.diag(s) != 0) or not np.all(np.abs(off) == 1) or np.any(s != s.T):
        raise LineSystemError("Seidel matrix must be symmetric with zero diagonal and +-1 elsewhere")
    if not 1 <= r < n:
        raise LineSystemError(f"need 1 <= r < N, got r={r}, N={n}")
    m = np.eye(n) + s / math.sqrt(r + 2)
    spec = sym_eigen(m, method)
    w = spec.eigenvalues
    tail = w[r:]
    if w[r - 1] <= 1e-6 or np.any(np.abs(tail) > 1e-6):
        raise LineSystemError(
            f"I + S/sqrt({r + 2}) is not PSD of rank {r}: top-{r} min {w[r - 1]:.6g}, "
            f"remaining eigenvalues in [{tail.min():.6g}, {tail.max():.6g}]")
    vecs = spec.eigenvectors[:, :r] * np.sqrt(w[:r])
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    return LineSystem(vecs)


# ---------------------------------------------------------------------------
# doubling construction and tightness


def doubling_graph(L: LineSystem) -> Graph:
    """Vertex 2i is (i, +) and 2i+1 is (i, -).

    <u_i, u_j> = +alpha: (i,+)~(j,+) and (i,-)~(j,-);
    <u_i, u_j> = -alpha: (i,+)~(j,-) and (i,-)~(j,+).
    """
    g = L.gram()
    edges = []
    for i in range(L.N):
        for j in range(i + 1, L.N):
            t = g[i, j]
            if abs(t - L.alpha) <= EQUI_TOL:
                edges += [(2 * i, 2 * j), (2 * i + 1, 2 * j + 1)]
            elif abs(t + L.alpha) <= EQUI_TOL:
                edges += [(2 * i, 2 * j + 1), (2 * i + 1, 2 * j)]
            else:
                raise LineSystemError(f"<u_{i}, u_{j}> = {t:.12g} is not +-{L.alpha:.12g}")
    return Graph.from_edges(2 * L.N, edges)


@dataclass(frozen=True)
class TightnessReport:
    r: int
    N: int
    n: int
    k: int
    lambda_k: float
    predicted: float     # (N - r) / (alpha r)
    bound: float         # alpha_k n - 1
    tol: float
    spectrum: np.ndarray = field(repr=False)

    @property
    def slack_predicted(self) -> float:
        return self.lambda_k - self.predicted

    @property
    def slack_bound(self) -> float:
        return self.bound - self.lambda_k

    @property
    def ok(self) -> bool:
        return (abs(self.slack_predicted) <= self.tol and abs(self.slack_bound) <= self.tol
                and abs(self.predicted - self.bound) <= self.tol)

    def to_json(self) -> dict:
        return {"r": self.r, "N": self.N, "n": self.n, "k": self.k, "lambda_k": self.lambda_k,
                "predicted": self.predicted, "bound": self.bound,
                "slack_predicted": self.slack_predicted, "slack_bound": self.slack_bound,
                "tight": self.ok}


def check_tightness(L: LineSystem, method: str = "jacobi") -> TightnessReport:
    """Compare lambda_{r+1} of the doubled graph with (N-r)/(alpha r) and alpha_{r+1} n - 1."""
    if not L.extremal:
        raise LineSystemError(f"{L.N} lines in R^{L.r} is not extremal (need {gerzon_bound(L.r)})")
    g = doubling_graph(L)
    k, n = L.r + 1, 2 * L.N
    w = sym_eigen(g.adjacency_matrix(), method).eigenvalues
    predicted = (L.N - L.r) / (L.alpha * L.r)
    bound = to_float(alpha_k(k)) * n - 1.0
    return TightnessReport(L.r, L.N, n, k, float(w[k - 1]), predicted, bound, 1e-7 * n, w)


@lru_cache(maxsize=1)
def _build_r23() -> tuple[LineSystem, TightnessReport]:
    try:
        L = lines_from_seidel(seidel_matrix_r23(), 23)
    except LineSystemError as exc:
        raise LineSystemError(f"r=23 construction failed validation ({exc}); "
                              "supply the system with load_lines instead") from exc
    if L.N != 276 or abs(L.alpha - 0.2) > EQUI_TOL:
        raise LineSystemError("r=23 construction produced the wrong system; use load_lines")
    rep = check_tightness(L)
    if not rep.ok:
        raise LineSystemError("r=23 construction is not tight; use load_lines")
    return L, rep


def lines_r23() -> LineSystem:
    """276 lines in R^23 from the regular two-graph of the Witt design S(4,7,23)."""
    return _build_r23()[0]


BUILTIN = {2: lines_r2, 3: lines_r3, 7: lines_r7, 23: lines_r23}


def builtin_lines(r: int) -> LineSystem:
    try:
        return BUILTIN[r]()
    except KeyError:
        raise LineSystemError(f"no built-in extremal system for r={r}; "
                              f"available: {sorted(BUILTIN)}") from None


def builtin_tightness(r: int) -> TightnessReport:
    if r == 23:
        return _build_r23()[1]
    return check_tightness(builtin_lines(r))


def l1_witness(L: LineSystem) -> float:
    """||Q||_1 / (beta_r N) for Q the projection onto the range of the Gram matrix."""
    from .majorant import beta

    b = orthonormalize(L.vectors)
    if b is None:
        raise LineSystemError("line vectors do not span R^r")
    q = b @ b.T
    return float(np.abs(q).sum()) / (to_float(beta(L.r)) * L.N)


def extremal_status(r: int) -> str:
    """What is known about N = r(r+1)/2 equiangular lines in R^r."""
    if r in KNOWN_EXTREMAL_R or r == 1:
        return "exists"
    s = math.isqrt(r + 2)
    if s * s != r + 2 or s % 2 == 0:
        return "impossible: r+2 is not an odd perfect square"
    return "open: r+2 is an odd perfect square; nonexistence is known for infinitely many such r"


# ---------------------------------------------------------------------------
# files


def save_lines(L: LineSystem, path) -> None:
    with Path(path).open("w") as fh:
        fh.write(f"{L.r} {L.N}\n")
        for row in L.vectors:
            fh.write(" ".join(f"{x:.17g}" for x in row) + "\n")


def load_lines(path) -> LineSystem:
    p = Path(path)
    with p.open() as fh:
        lines = [ln for ln in fh.read().splitlines()]
    if not lines:
        raise LineSystemError(f"{p}:1: empty file")
    try:
        r, n = (int(x) for x in lines[0].split())
    except ValueError:
        raise LineSystemError(f"{p}:1: header must be 'r N'") from None
    rows = []
    for lineno, text in enumerate(lines[1:], 2):
        if not text.strip():
            continue
        try:
            vals = [float(x) for x in text.split()]
        except ValueError:
            raise LineSystemError(f"{p}:{lineno}: non-numeric coordinate") from None
        if len(vals) != r:
            raise LineSystemError(f"{p}:{lineno}: expected {r} coordinates, found {len(vals)}")
        rows.append(vals)
    if len(rows) != n:
        raise LineSystemError(f"{p}: header declares {n} vectors, found {len(rows)}")
    try:
        return LineSystem(np.array(rows))
    except LineSystemError as exc:
        raise LineSystemError(f"{p}: {exc}") from None


def save_seidel_csv(S, path) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        for row in np.asarray(S, dtype=int):
            w.writerow(row.tolist())


def load_seidel_csv(path) -> np.ndarray:
    with Path(path).open(newline="") as fh:
        return np.array([[int(x) for x in row] for row in csv.reader(fh) if row], dtype=float)
