"""Graphs, graph6 interchange, and the lambda_k <= alpha_k n - 1 certificate.

Eigenvalues are 1-indexed and descending everywhere: ``lambda_k(G, 1)`` is
the largest adjacency eigenvalue.

The certificate records the whole chain behind the bound: from
A(G) + A(complement) = J - I and Weyl's inequality,
lambda_k(G) + lambda_{n-k+2}(complement) <= lambda_2(J - I) = -1, and the
bottom-(k-1) eigenvalue bound gives lambda_{n-k+2}(complement) >= -alpha_k n.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator, Union

import numpy as np

from .exact import to_float
from .linalg import Spectrum, jacobi_eigh, sym_eigen
from .majorant import alpha

log = logging.getLogger(__name__)

GRAPH6_HEADER = ">>graph6<<"
MAX_ENUM_N = 7


def spectral_tol(n: int) -> float:
    return 1e-8 * max(1, n)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; ``rows[i]`` is the neighbour bitmask of vertex i."""

    n: int
    rows: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ValueError("need one row mask per vertex")
        for i, row in enumerate(self.rows):
            if row >> i & 1:
                raise ValueError(f"loop at vertex {i}")
            if row >> self.n:
                raise ValueError(f"row {i} references vertices >= n")
            for j in _bits(row):
                if not self.rows[j] >> i & 1:
                    raise ValueError(f"adjacency not symmetric at ({i}, {j})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for i, j in edges:
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        return cls(n, tuple(rows))

    @classmethod
    def from_adjacency(cls, a) -> "Graph":
        m = np.asarray(a)
        n = m.shape[0]
        return cls.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if m[i, j]])

    @classmethod
    def from_edge_mask(cls, n: int, mask: int) -> "Graph":
        """Bit e of ``mask`` is the e-th pair in graph6 order (0,1), (0,2), (1,2), (0,3), ..."""
        rows = [0] * n
        e = 0
        for j in range(1, n):
            for i in range(j):
                if mask >> e & 1:
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
                e += 1
        return cls(n, tuple(rows))

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in _bits(self.rows[i]) if i < j]

    @property
    def num_edges(self) -> int:
        return sum(bin(r).count("1") for r in self.rows) // 2

    def degrees(self) -> list[int]:
        return [bin(r).count("1") for r in self.rows]

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for i, row in enumerate(self.rows):
            for j in _bits(row):
                a[i, j] = 1.0
        return a

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, tuple(full & ~row & ~(1 << i) for i, row in enumerate(self.rows)))

    def relabel(self, perm) -> "Graph":
        """Graph with vertex ``i`` renamed ``perm[i]``."""
        return Graph.from_edges(self.n, [(perm[i], perm[j]) for i, j in self.edges()])

    def to_graph6(self) -> str:
        return write_graph6(self)


def _bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def disjoint_union(*graphs: Graph) -> Graph:
    edges, off = [], 0
    for g in graphs:
        edges += [(i + off, j + off) for i, j in g.edges()]
        off += g.n
    return Graph.from_edges(off, edges)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


# ---------------------------------------------------------------------------
# graph6


class Graph6Error(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.message = message
        self.offset = offset


def _encode_n(n: int) -> str:
    if n < 0:
        raise ValueError("negative vertex count")
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n < 1 << 36:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise ValueError("graph6 supports at most 2^36 - 1 vertices")


def write_graph6(g: Graph) -> str:
    out = [_encode_n(g.n)]
    acc = nbits = 0
    for j in range(1, g.n):
        rj = g.rows[j]
        for i in range(j):
            acc = (acc << 1) | (rj >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 record (optionally prefixed by the ``>>graph6<<`` header)."""
    s = text.rstrip("\r\n")
    base = 0
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):]
        base = len(GRAPH6_HEADER)
    for pos, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"character {ch!r} outside the graph6 range 63..126", base + pos)
    if not s:
        raise Graph6Error("empty record", base)
    vals = [ord(ch) - 63 for ch in s]
    if vals[0] < 63:
        n, pos = vals[0], 1
    elif len(vals) >= 2 and vals[1] < 63:
        if len(vals) < 4:
            raise Graph6Error("truncated length prefix", base + len(vals))
        n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
        pos = 4
        if n <= 62:
            raise Graph6Error(f"non-minimal length prefix for n={n}", base)
    else:
        if len(vals) < 8:
            raise Graph6Error("truncated length prefix", base + len(vals))
        n = 0
        for v in vals[2:8]:
            n = (n << 6) | v
        pos = 8
        if n <= 258047:
            raise Graph6Error(f"non-minimal length prefix for n={n}", base)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(vals) - pos != nbytes:
        raise Graph6Error(f"expected {nbytes} adjacency bytes for n={n}, found {len(vals) - pos}",
                          base + min(len(vals), pos + nbytes))
    rows = [0] * n
    e = 0
    body = vals[pos:]
    for j in range(1, n):
        for i in range(j):
            if body[e // 6] >> (5 - e % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            e += 1
    pad = nbytes * 6 - nbits
    if pad and body[-1] & ((1 << pad) - 1):
        raise Graph6Error("nonzero padding bits", base + pos + nbytes - 1)
    return Graph(n, tuple(rows))


def iter_graph6(lines: Iterable[str], source: str = "<input>") -> Iterator[tuple[int, str, Graph]]:
    """Yield ``(line_number, record, graph)``; parse errors carry file and line."""
    for lineno, raw in enumerate(lines, 1):
        rec = raw.strip()
        if not rec:
            continue
        if rec.startswith(GRAPH6_HEADER):
            rec = rec[len(GRAPH6_HEADER):]
            if not rec:
                continue
        try:
            g = parse_graph6(rec)
        except Graph6Error as exc:
            raise Graph6Error(f"{source}:{lineno}: {exc.message}", exc.offset) from None
        yield lineno, rec, g


def read_graph6_file(path) -> Iterator[tuple[int, str, Graph]]:
    p = Path(path)
    with p.open("r", encoding="ascii", errors="replace") as fh:
        yield from iter_graph6(fh, str(p))


def write_graph6_file(graphs: Iterable[Graph], path, header: bool = False) -> None:
    with Path(path).open("w", encoding="ascii") as fh:
        if header:
            fh.write(GRAPH6_HEADER)
        for g in graphs:
            fh.write(write_graph6(g) + "\n")


# ---------------------------------------------------------------------------
# enumeration


def edge_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for j in range(1, n) for i in range(j)]


def enumerate_graphs(n: int) -> Iterator[Graph]:
    """All labeled graphs on ``n`` vertices, in edge-mask order."""
    if n > MAX_ENUM_N:
        raise ValueError(f"enumeration is limited to n <= {MAX_ENUM_N}; use a graph6 corpus")
    if n < 0:
        raise ValueError("n must be nonnegative")
    m = n * (n - 1) // 2
    for mask in range(1 << m):
        yield Graph.from_edge_mask(n, mask)


def adjacency_stack(n: int, masks=None) -> np.ndarray:
    """Adjacency matrices for edge masks (default: all of them) as an (M, n, n) array."""
    pairs = edge_pairs(n)
    if masks is None:
        masks = np.arange(1 << len(pairs), dtype=np.int64)
    masks = np.asarray(masks, dtype=np.int64)
    a = np.zeros((masks.size, n, n))
    for e, (i, j) in enumerate(pairs):
        bit = ((masks >> e) & 1).astype(float)
        a[:, i, j] = bit
        a[:, j, i] = bit
    return a


# ---------------------------------------------------------------------------
# spectra and certificates


def graph_spectrum(g: Graph, method: str = "jacobi") -> Spectrum:
    if g.n < 1:
        raise ValueError("graph has no vertices")
    return sym_eigen(g.adjacency_matrix(), method)


def lambda_k(g: Graph, k: int, method: str = "jacobi") -> float:
    if not 1 <= k <= g.n:
        raise ValueError(f"k must satisfy 1 <= k <= n = {g.n}, got {k}")
    return float(graph_spectrum(g, method).eigenvalues[k - 1])


@dataclass(frozen=True)
class BoundCertificate:
    k: int
    n: int
    lambda_k: float
    alpha_k_n_minus_1: float
    lambda_complement: float    # lambda_{n-k+2} of the complement
    weyl_slack: float           # -1 - lambda_k - lambda_complement
    bottom_r_margin: float      # lambda_complement + alpha_k n
    powers_floor: int           # floor(n / k), context only

    @property
    def bound(self) -> float:
        return self.alpha_k_n_minus_1

    @property
    def margin(self) -> float:
        return self.alpha_k_n_minus_1 - self.lambda_k

    @property
    def tight(self) -> bool:
        return abs(self.margin) <= 1e-7 * max(1, self.n)

    def violations(self, tol: float | None = None) -> list[str]:
        tol = spectral_tol(self.n) if tol is None else tol
        out = []
        if self.margin < -tol:
            out.append("bound")
        if self.weyl_slack < -tol:
            out.append("weyl")
        if self.bottom_r_margin < -tol:
            out.append("bottom_r")
        return out

    def to_json(self) -> dict:
        return {"k": self.k, "n": self.n, "lambda_k": self.lambda_k, "bound": self.bound,
                "weyl_slack": self.weyl_slack, "tight": self.tight}

    def as_dict(self) -> dict:
        d = asdict(self)
        d["tight"] = self.tight
        return d


def _certificate(k: int, n: int, lam: float, lam_c: float) -> BoundCertificate:
    a = to_float(alpha(k))
    return BoundCertificate(k, n, lam, a * n - 1.0, lam_c, -1.0 - lam - lam_c, lam_c + a * n, n // k)


def certify_bound(g: Graph, k: int, method: str = "jacobi",
                  spectra: tuple[np.ndarray, np.ndarray] | None = None) -> BoundCertificate:
    """Check lambda_k(G) <= alpha_k n - 1 through the Weyl chain on G and its complement."""
    n = g.n
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    if spectra is None:
        w = graph_spectrum(g, method).eigenvalues
        wc = graph_spectrum(g.complement(), method).eigenvalues
    else:
        w, wc = spectra
    return _certificate(k, n, float(w[k - 1]), float(wc[n - k + 1]))


def ck_ratio(g: Graph, k: int, method: str = "jacobi") -> float:
    return lambda_k(g, k, method) / g.n


@dataclass
class ExhaustiveSummary:
    n: int
    graphs: int
    certificates: int
    violations: list = field(default_factory=list)
    min_margin: dict = field(default_factory=dict)       # k -> min (bound - lambda_k)
    min_weyl_slack: dict = field(default_factory=dict)   # k -> min weyl slack
    max_ratio: dict = field(default_factory=dict)        # k -> max lambda_k / n
    sparse_violations: int = 0
    trace_defect: float = 0.0                            # max |sum spec(G) + sum spec(Gc)|


def exhaustive_check(n: int, chunk: int = 1 << 15) -> ExhaustiveSummary:
    """Certificate invariants for every labeled graph on ``n`` vertices, with batched Jacobi."""
    if not 2 <= n <= MAX_ENUM_N:
        raise ValueError(f"need 2 <= n <= {MAX_ENUM_N}")
    m = n * (n - 1) // 2
    total = 1 << m
    tol = spectral_tol(n)
    summ = ExhaustiveSummary(n, total, 0)
    jminusi = np.ones((n, n)) - np.eye(n)
    for start in range(0, total, chunk):
        masks = np.arange(start, min(total, start + chunk), dtype=np.int64)
        a = adjacency_stack(n, masks)
        w, _, _ = jacobi_eigh(a)
        wc, _, _ = jacobi_eigh(jminusi - a)
        summ.trace_defect = max(summ.trace_defect, float(np.max(np.abs(w.sum(1) + wc.sum(1)))))
        edges = a.sum(axis=(1, 2)) / 2.0
        for k in range(2, n + 1):
            ak = to_float(alpha(k))
            lam = w[:, k - 1]
            lam_c = wc[:, n - k + 1]
            margin = ak * n - 1.0 - lam
            slack = -1.0 - lam - lam_c
            bottom = lam_c + ak * n
            summ.certificates += masks.size
            summ.min_margin[k] = min(summ.min_margin.get(k, np.inf), float(margin.min()))
            summ.min_weyl_slack[k] = min(summ.min_weyl_slack.get(k, np.inf), float(slack.min()))
            summ.max_ratio[k] = max(summ.max_ratio.get(k, -np.inf), float(lam.max() / n))
            bad = np.nonzero((margin < -tol) | (slack < -tol) | (bottom < -tol))[0]
            for idx in bad:
                g = Graph.from_edge_mask(n, int(masks[idx]))
                summ.violations.append(_certificate(k, n, float(lam[idx]), float(lam_c[idx])).as_dict()
                                       | {"graph6": write_graph6(g)})
            nonneg = lam >= 0
            summ.sparse_violations += int(np.sum(nonneg & (k * lam ** 2 > 2 * edges + tol)))
    return summ


@dataclass
class ScanResult:
    k: int
    max_ratio: float
    argmax_graph6: str
    count: int
    skipped: int = 0
    violations: list = field(default_factory=list)


ScanSource = Iterable[Union[Graph, str]]


def scan_corpus(source: ScanSource, k: int, on_record: Callable[[dict], None] | None = None,
                chunk: int = 4096) -> ScanResult:
    """Max of lambda_k / n over a stream of graphs (Graph objects or graph6 strings).

    Graphs with ``n < k`` are skipped. Ties on the ratio (to 1e-10) go to the
    lexicographically smallest graph6 string, so the result does not depend on
    input order or chunking. ``on_record`` receives one dict per scanned graph.
    """
    best: tuple[float, str] | None = None
    count = skipped = 0
    violations = []
    a_k = to_float(alpha(k))

    def flush(batch: list[tuple[str, Graph]]):
        nonlocal best, count
        if not batch:
            return
        n = batch[0][1].n
        w, _, _ = jacobi_eigh(np.stack([g.adjacency_matrix() for _, g in batch]))
        for (code, g), spec in zip(batch, w):
            lam = float(spec[k - 1])
            ratio = lam / n
            margin = a_k * n - 1.0 - lam
            count += 1
            if ratio > a_k - 1.0 / n + 1e-9:
                violations.append({"graph6": code, "n": n, "k": k, "lambda_k": lam, "margin": margin})
            key = (-round(ratio, 10), code)
            if best is None or key < (-round(best[0], 10), best[1]):
                best = (ratio, code)
            if on_record is not None:
                on_record({"graph6": code, "n": n, "k": k, "lambda_k": lam, "ratio": ratio,
                           "margin": margin})

    pending: dict[int, list] = {}
    for item in source:
        if isinstance(item, Graph):
            g, code = item, write_graph6(item)
        else:
            code = item.strip()
            g = parse_graph6(code)
        if g.n < k:
            skipped += 1
            continue
        bucket = pending.setdefault(g.n, [])
        bucket.append((code, g))
        if len(bucket) >= chunk:
            flush(bucket)
            pending[g.n] = []
    for bucket in pending.values():
        flush(bucket)
    if skipped:
        log.warning("skipped %d graphs with fewer than k=%d vertices", skipped, k)
    if best is None:
        raise ValueError("corpus contains no graph with at least k vertices")
    return ScanResult(k, best[0], best[1], count, skipped, violations)


def multiplicity_bound(lambda2: float, n: int, tol: float | None = None) -> int:
    """Largest m with lambda2 + 1 <= alpha_{m+1} n (capped at n)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    tol = spectral_tol(n) if tol is None else tol
    if lambda2 + 1 <= 0:
        return n
    i = 1
    while i < n and to_float(alpha(i + 2)) * n >= lambda2 + 1 - tol:
        i += 1
    return i


def sparse_bound(n: int, e: int, k: int) -> float:
    """sqrt(2e / k): from k lambda_k^2 <= sum of squared eigenvalues = 2e."""
    if k < 1 or e < 0:
        raise ValueError("need k >= 1 and e >= 0")
    return math.sqrt(2.0 * e / k)


def eigenvalue_multiplicity(values, target: float, tol: float = 1e-6) -> int:
    return int(np.sum(np.abs(np.asarray(values) - target) <= tol))

