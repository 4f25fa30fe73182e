"""Random generation: balanced entry laws, matrices, digraphs, sandpiles.

Probabilities are exact rationals.  A draw maps a 64-bit uniform word
against floor-scaled cumulative thresholds (floor(c_i * 2^64)); the final
cumulative mass is exactly 1 so the last threshold is exactly 2^64.  The
floor rule biases each class by less than 2^-64.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction

from .groups import factor
from .intmat import Cokernel, IntMatrix, cokernel
from .randsrc import Rng

__all__ = [
    "EntryDistribution",
    "Digraph",
    "BadParams",
    "NonzeroDiagonal",
    "ColumnsNotZeroSum",
    "balance_parameter",
    "named_distribution",
    "distribution_from_json",
    "distribution_to_json",
    "sample_matrix",
    "sample_digraph",
    "laplacian",
    "total_sandpile",
]

_TWO64 = 1 << 64


class BadParams(ValueError):
    pass


class NonzeroDiagonal(ValueError):
    pass


class ColumnsNotZeroSum(ValueError):
    pass


@dataclass(frozen=True)
class EntryDistribution:
    """Finite-support integer law with exact rational probabilities."""

    support: tuple[int, ...]
    probabilities: tuple[Fraction, ...]
    name: str = ""
    _thresholds: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        support = tuple(int(x) for x in self.support)
        probs = tuple(Fraction(p) for p in self.probabilities)
        if not support:
            raise BadParams("support must be nonempty")
        if len(set(support)) != len(support):
            raise BadParams("support values must be distinct")
        if len(probs) != len(support):
            raise BadParams("probabilities must match support")
        if any(p <= 0 for p in probs):
            raise BadParams("probabilities must be positive")
        if sum(probs) != 1:
            raise BadParams("probabilities must sum to exactly 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probabilities", probs)
        acc = Fraction(0)
        thresholds = []
        for p in probs:
            acc += p
            thresholds.append((acc.numerator << 64) // acc.denominator)
        object.__setattr__(self, "_thresholds", tuple(thresholds))

    @property
    def entry_bound(self) -> int:
        return max(abs(x) for x in self.support)

    @property
    def balance(self) -> float:
        return balance_parameter(self)

    def draw(self, rng: Rng) -> int:
        return self.support[bisect_right(self._thresholds, rng.next_u64())]


def balance_parameter(d: EntryDistribution) -> float:
    """alpha = 1 - sup over primes p of the largest residue-class mass mod p.

    Only primes dividing some pairwise difference of support values can merge
    classes; for every other prime the worst class mass is the largest single
    point mass.  The result is computed from exact rationals.
    """
    worst = max(d.probabilities)
    primes = set()
    vals = d.support
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            diff = abs(vals[i] - vals[j])
            if diff:
                primes.update(factor(diff))
    for p in primes:
        mass: dict[int, Fraction] = {}
        for x, pr in zip(vals, d.probabilities):
            r = x % p
            mass[r] = mass.get(r, Fraction(0)) + pr
        worst = max(worst, max(mass.values()))
    return float(1 - worst)


def _as_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def named_distribution(kind: str, **params) -> EntryDistribution:
    """Construct a standard entry law by name.

    bernoulli(q): {0,1} with P(1)=q.
    uniform_range(a, b): uniform integers on [a, b].
    sparse_bernoulli(n, eps): {0,1} with P(1) = n^(-1+eps).
    paper_example(n): {-17, 0, 6, 7} with P = {2/3, 1/n, 1/6 - 1/n, 1/6}.
    """
    if kind == "bernoulli":
        q = _as_fraction(params["q"])
        if not 0 < q < 1:
            raise BadParams("bernoulli requires 0 < q < 1")
        return EntryDistribution((0, 1), (1 - q, q), name=f"bernoulli({q})")
    if kind == "uniform_range":
        a, b = int(params["a"]), int(params["b"])
        if b < a:
            raise BadParams("uniform_range requires a <= b")
        n = b - a + 1
        return EntryDistribution(tuple(range(a, b + 1)),
                                 tuple(Fraction(1, n) for _ in range(n)),
                                 name=f"uniform_range({a},{b})")
    if kind == "sparse_bernoulli":
        n = int(params["n"])
        eps = float(params["eps"])
        if n < 2 or not 0 < eps <= 1:
            raise BadParams("sparse_bernoulli requires n >= 2 and 0 < eps <= 1")
        q = Fraction(float(n) ** (-1.0 + eps)).limit_denominator(10 ** 15)
        if not 0 < q < 1:
            raise BadParams("sparse_bernoulli rate out of range")
        return EntryDistribution((0, 1), (1 - q, q), name=f"sparse_bernoulli({n},{eps})")
    if kind == "paper_example":
        n = int(params["n"])
        probs = (Fraction(2, 3), Fraction(1, n),
                 Fraction(1, 6) - Fraction(1, n), Fraction(1, 6))
        if any(p <= 0 for p in probs):
            raise BadParams("paper_example requires n > 6")
        return EntryDistribution((-17, 0, 6, 7), probs, name=f"paper_example({n})")
    raise BadParams(f"unknown distribution kind {kind!r}")


def distribution_to_json(d: EntryDistribution) -> dict:
    return {"support": list(d.support),
            "probs": [str(p) for p in d.probabilities]}


def distribution_from_json(obj) -> EntryDistribution:
    """Parse {"kind":..., "params":{...}} or {"support":[...], "probs":[...]}."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    if "kind" in obj:
        return named_distribution(obj["kind"], **obj.get("params", {}))
    if "support" in obj and "probs" in obj:
        return EntryDistribution(tuple(obj["support"]),
                                 tuple(Fraction(p) for p in obj["probs"]))
    raise BadParams("distribution spec needs 'kind' or 'support'/'probs'")


def sample_matrix(n: int, m: int, d: EntryDistribution, rng: Rng) -> IntMatrix:
    """n x m matrix of i.i.d. draws; consumes exactly n*m words of the stream."""
    return IntMatrix(n, m, tuple(d.draw(rng) for _ in range(n * m)))


@dataclass(frozen=True)
class Digraph:
    """Simple digraph on n vertices; adjacency[i][j] = 1 iff edge i -> j."""

    n: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise BadParams("digraph needs at least one vertex")
        adj = tuple(tuple(int(x) for x in row) for row in self.adjacency)
        if len(adj) != self.n or any(len(r) != self.n for r in adj):
            raise BadParams("adjacency must be n x n")
        if any(adj[i][i] for i in range(self.n)):
            raise NonzeroDiagonal("adjacency diagonal must be zero")
        object.__setattr__(self, "adjacency", adj)

    def adjacency_matrix(self) -> IntMatrix:
        return IntMatrix.from_rows(self.adjacency)


def sample_digraph(n: int, q, rng: Rng) -> Digraph:
    """Erdos-Renyi digraph: each off-diagonal edge present with probability q."""
    qf = _as_fraction(q)
    if not 0 <= qf <= 1:
        raise BadParams("edge probability must lie in [0, 1]")
    threshold = (qf.numerator << 64) // qf.denominator
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(0)
            else:
                row.append(1 if rng.next_u64() < threshold else 0)
        rows.append(tuple(row))
    return Digraph(n, tuple(rows))


def laplacian(m: IntMatrix) -> IntMatrix:
    """L with off-diagonal -x_ij and diagonal sum_k x_ki; columns sum to 0."""
    if m.rows != m.cols:
        raise NonzeroDiagonal("laplacian requires a square matrix")
    n = m.rows
    rows = m.row_lists()
    if any(rows[i][i] for i in range(n)):
        raise NonzeroDiagonal("laplacian requires a zero diagonal")
    colsum = [sum(rows[k][i] for k in range(n)) for i in range(n)]
    out = [[(colsum[i] if i == j else -rows[i][j]) for j in range(n)] for i in range(n)]
    return IntMatrix.from_rows(out)


def total_sandpile(l: IntMatrix) -> Cokernel:
    """Cokernel of the Laplacian acting into the zero-sum lattice.

    In the basis {e_i - e_n : i < n} of the zero-sum lattice, the columns of
    a zero-column-sum matrix are expressed by exactly its first n-1 rows, so
    the group is the cokernel of that (n-1) x n block.
    """
    if l.rows != l.cols:
        raise ColumnsNotZeroSum("laplacian must be square")
    rows = l.row_lists()
    n = l.rows
    for j in range(n):
        if sum(rows[i][j] for i in range(n)) != 0:
            raise ColumnsNotZeroSum(f"column {j} does not sum to zero")
    if n == 1:
        from .groups import FiniteAbelianGroup
        return Cokernel(0, FiniteAbelianGroup(()))
    return cokernel(IntMatrix.from_rows(rows[: n - 1]))
