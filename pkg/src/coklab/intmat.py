"""Exact linear algebra over Z and over prime fields.

Dense arbitrary-precision integer matrices with Smith normal form,
determinants (Bareiss), ranks over Q and mod p, and cokernel extraction.

Two routes produce invariant factors:

* ``smith_normal_form(..., want_transforms=True)`` runs classic integer
  elimination with a minimal-|pivot| rule, carrying unimodular transforms.
* The default route first finds the rank r and an annihilating modulus d
  (gcd of one or two nonzero r x r minors from fraction-free elimination),
  then diagonalizes with every entry kept reduced mod d.  Reducing mod d is
  a legal column operation on the augmented matrix [A | d*I], whose cokernel
  is cok(A)/d = (Z/d)^(rows-r) + torsion(A), so the factors are recovered
  exactly.  Both routes are deterministic and agree (tested).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .groups import FiniteAbelianGroup, is_prime

__all__ = [
    "IntMatrix",
    "SNFResult",
    "Cokernel",
    "NotSquare",
    "NonPrimeModulus",
    "MatrixParseError",
    "smith_normal_form",
    "cokernel",
    "det",
    "rank_over_Q",
    "rank_mod_p",
    "parse_matrix",
    "format_matrix",
]


class NotSquare(ValueError):
    """Operation requires a square matrix."""


class NonPrimeModulus(ValueError):
    """rank_mod_p called with a composite small modulus."""


class MatrixParseError(ValueError):
    """Matrix text did not parse; carries line/column context."""

    def __init__(self, message: str, line: int, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class IntMatrix:
    """Dense row-major integer matrix; 0-row/0-column shapes are rejected."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix must have at least one row and one column")
        entries = tuple(int(x) for x in self.entries)
        if len(entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows * cols")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        ncol = len(rows[0])
        if any(len(r) != ncol for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncol, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row_lists(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        a, b = self.row_lists(), other.row_lists()
        bt = list(zip(*b))
        return IntMatrix.from_rows(
            [[sum(x * y for x, y in zip(ra, cb)) for cb in bt] for ra in a]
        )


@dataclass(frozen=True)
class SNFResult:
    """Invariant factors d_1 | ... | d_r (1s retained, length == rank)."""

    invariant_factors: tuple[int, ...]
    rank: int
    left_transform: Optional[IntMatrix] = None
    right_transform: Optional[IntMatrix] = None


@dataclass(frozen=True)
class Cokernel:
    """Z^free_rank + torsion, the target lattice modulo the column span."""

    free_rank: int
    torsion: FiniteAbelianGroup

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion.invariant_factors)
        return " x ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# text format: first line "rows cols", then rows of signed decimal entries


def parse_matrix(text: str) -> IntMatrix:
    lines = text.splitlines()
    if not lines or not lines[0].split():
        raise MatrixParseError("missing header 'rows cols'", 1)
    head = lines[0].split()
    if len(head) != 2:
        raise MatrixParseError("header must be 'rows cols'", 1)
    try:
        rows, cols = int(head[0]), int(head[1])
    except ValueError:
        raise MatrixParseError("header must hold two integers", 1) from None
    if rows < 1 or cols < 1:
        raise MatrixParseError("rows and cols must be positive", 1)
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != rows:
        raise MatrixParseError(f"expected {rows} rows, found {len(body)}", len(lines))
    data = []
    for i, ln in enumerate(body):
        toks = ln.split()
        if len(toks) != cols:
            raise MatrixParseError(f"expected {cols} entries, found {len(toks)}", i + 2)
        row = []
        for j, tok in enumerate(toks):
            try:
                row.append(int(tok))
            except ValueError:
                raise MatrixParseError(f"bad integer {tok!r}", i + 2, j + 1) from None
        data.append(row)
    return IntMatrix.from_rows(data)


def format_matrix(m: IntMatrix) -> str:
    lines = [f"{m.rows} {m.cols}"]
    lines += [" ".join(str(x) for x in row) for row in m.row_lists()]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# fraction-free elimination (Bareiss)


def det(m: IntMatrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    if m.rows != m.cols:
        raise NotSquare(f"det of a {m.rows} x {m.cols} matrix")
    a = m.row_lists()
    n = m.rows
    prev = 1
    sign = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ai = a[i]
            ak = a[k]
            for j in range(k + 1, n):
                ai[j] = (piv * ai[j] - aik * ak[j]) // prev
            ai[k] = 0
        prev = piv
    return sign * a[n - 1][n - 1]


def _bareiss_rank_minor(m: IntMatrix, reverse_cols: bool = False) -> tuple[int, int]:
    """(rank, |nonzero r x r minor|) via fraction-free full pivoting.

    The final pivot of Bareiss elimination is the determinant of the r x r
    submatrix selected by the row/column swaps, hence a nonzero maximal minor.
    """
    a = m.row_lists()
    if reverse_cols:
        a = [row[::-1] for row in a]
    n, mm = m.rows, m.cols
    prev = 1
    r = 0
    for k in range(min(n, mm)):
        pi = -1
        pj = -1
        for i in range(k, n):
            for j in range(k, mm):
                if a[i][j]:
                    pi, pj = i, j
                    break
            if pi >= 0:
                break
        if pi < 0:
            break
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
        if pj != k:
            for row in a:
                row[k], row[pj] = row[pj], row[k]
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ai = a[i]
            ak = a[k]
            for j in range(k + 1, mm):
                ai[j] = (piv * ai[j] - aik * ak[j]) // prev
            ai[k] = 0
        prev = piv
        r += 1
    return r, abs(prev) if r else 0


def rank_over_Q(m: IntMatrix) -> int:
    """Rank over the rationals (= number of invariant factors)."""
    return _bareiss_rank_minor(m)[0]


# ---------------------------------------------------------------------------
# invariant factors, fast route


def _chain_fix(f: list[int]) -> list[int]:
    """Repair a diagonal into a divisibility chain by gcd/lcm exchanges."""
    for i in range(len(f)):
        for j in range(i + 1, len(f)):
            if f[i] and f[j] % f[i]:
                g = math.gcd(f[i], f[j])
                f[j] = f[i] * f[j] // g
                f[i] = g
    return f


def _diagonalize_mod(m: IntMatrix, d: int) -> list[int]:
    """Invariant factors of [m | d*I_rows]: min-|pivot| elimination mod d."""
    n, cols = m.rows, m.cols
    h = d // 2
    a = []
    for row in m.row_lists():
        red = []
        for x in row:
            v = x % d
            red.append(v - d if v > h else v)
        a.append(red)
    factors: list[int] = []
    t = 0
    while t < min(n, cols):
        pv = None
        pi = pj = -1
        for i in range(t, n):
            ai = a[i]
            for j in range(t, cols):
                v = ai[j]
                if v:
                    av = -v if v < 0 else v
                    if pv is None or av < pv:
                        pv = av
                        pi, pj = i, j
                        if av == 1:
                            break
            if pv == 1:
                break
        if pv is None:
            break
        if pi != t:
            a[t], a[pi] = a[pi], a[t]
        if pj != t:
            for row in a:
                row[t], row[pj] = row[pj], row[t]
        if pv == 1:
            s = a[t][t]  # +-1: one clearing pass settles the column
            at = a[t]
            for i in range(t + 1, n):
                ai = a[i]
                q = ai[t] * s
                if q:
                    for j in range(t, cols):
                        v = (ai[j] - q * at[j]) % d
                        ai[j] = v - d if v > h else v
            factors.append(1)
            t += 1
            continue
        while True:
            again = False
            for i in range(t + 1, n):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    ai = a[i]
                    at = a[t]
                    if q:
                        for j in range(t, cols):
                            v = (ai[j] - q * at[j]) % d
                            ai[j] = v - d if v > h else v
                    if ai[t]:
                        a[t], a[i] = a[i], a[t]
                        again = True
            if again:
                continue
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    if q:
                        for i in range(t, n):
                            v = (a[i][j] - q * a[i][t]) % d
                            a[i][j] = v - d if v > h else v
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        again = True
            if not again:
                break
        factors.append(abs(a[t][t]))
        t += 1
    while len(factors) < n:
        factors.append(0)  # rows annihilated mod d: factor gcd(0, d) = d
    return _chain_fix([math.gcd(x, d) for x in factors])


def _invariant_factors(m: IntMatrix) -> tuple[int, list[int]]:
    """(rank, invariant factors incl. 1s) by the modulus route."""
    r, minor = _bareiss_rank_minor(m)
    if r == 0:
        return 0, []
    d = minor
    if r == m.rows and m.cols > m.rows:
        # a second maximal minor over (mostly) different columns; the gcd is
        # typically tiny, making the mod-d diagonalization near-free
        _, minor2 = _bareiss_rank_minor(m, reverse_cols=True)
        d = math.gcd(d, minor2)
    if d == 1:
        return r, [1] * r
    f = _diagonalize_mod(m, d)
    # f describes (Z/d)^(rows - r) + torsion; strip the rows - r copies of d
    for _ in range(m.rows - r):
        top = f.pop()
        if top != d:
            raise AssertionError("modulus route lost a free-rank factor")
    return r, f


# ---------------------------------------------------------------------------
# transform-carrying elimination


def _snf_with_transforms(m: IntMatrix) -> tuple[list[int], int, IntMatrix, IntMatrix]:
    n, cols = m.rows, m.cols
    a = m.row_lists()
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, q):  # row_dst += q * row_src
        for j in range(cols):
            a[dst][j] += q * a[src][j]
        for j in range(n):
            u[dst][j] += q * u[src][j]

    def addmul_col(dst, src, q):  # col_dst += q * col_src
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    t = 0
    while True:
        pv = None
        pi = pj = -1
        for i in range(t, n):
            for j in range(t, cols):
                x = a[i][j]
                if x:
                    ax = -x if x < 0 else x
                    if pv is None or ax < pv:
                        pv = ax
                        pi, pj = i, j
        if pv is None:
            break
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        while True:
            dirty = False
            for i in range(t + 1, n):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    if q:
                        addmul_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        dirty = True
            if dirty:
                continue
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    if q:
                        addmul_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            # pivot must divide the remaining block for a canonical chain
            piv = a[t][t]
            found = False
            for i in range(t + 1, n):
                for j in range(t + 1, cols):
                    if a[i][j] % piv:
                        addmul_row(t, i, 1)
                        found = True
                        break
                if found:
                    break
            if not found:
                break
        if a[t][t] < 0:
            for j in range(cols):
                a[t][j] = -a[t][j]
            for j in range(n):
                u[t][j] = -u[t][j]
        t += 1
        if t >= min(n, cols):
            break
    factors = [a[i][i] for i in range(min(n, cols)) if a[i][i]]
    return factors, len(factors), IntMatrix.from_rows(u), IntMatrix.from_rows(v)


def smith_normal_form(m: IntMatrix, want_transforms: bool = False) -> SNFResult:
    """Canonical invariant factors of m, optionally with unimodular U, V.

    With transforms, U @ m @ V is the rank-r diagonal of the factors and
    both transforms have determinant +-1.
    """
    if want_transforms:
        factors, rank, u, v = _snf_with_transforms(m)
        return SNFResult(tuple(factors), rank, u, v)
    rank, factors = _invariant_factors(m)
    return SNFResult(tuple(factors), rank)


def cokernel(m: IntMatrix) -> Cokernel:
    """Z^rows modulo the column span of m."""
    rank, factors = _invariant_factors(m)
    torsion = FiniteAbelianGroup(tuple(d for d in factors if d > 1))
    return Cokernel(free_rank=m.rows - rank, torsion=torsion)


# ---------------------------------------------------------------------------
# rank over a prime field

_SMALL_PRIME_LIMIT = 1 << 31


def rank_mod_p(m: IntMatrix, p: int) -> int:
    """Rank of m over the field with p elements.

    Primality is checked for p < 2^31; larger moduli are accepted on the
    caller's assertion.  Entries are reduced once, then eliminated with
    machine words (numpy) for small p and big integers otherwise.
    """
    if p < 2 or (p < _SMALL_PRIME_LIMIT and not is_prime(p)):
        raise NonPrimeModulus(f"{p} is not prime")
    if p < _SMALL_PRIME_LIMIT:
        a = np.array([[x % p for x in row] for row in m.row_lists()], dtype=np.int64)
        n, cols = a.shape
        r = 0
        for j in range(cols):
            if r == n:
                break
            nz = np.nonzero(a[r:, j])[0]
            if len(nz) == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                a[[r, i]] = a[[i, r]]
            inv = pow(int(a[r, j]), p - 2, p)
            below = a[r + 1:, j]
            mask = below != 0
            if mask.any():
                f = below[mask] * inv % p
                a[r + 1:, :][mask] = (a[r + 1:, :][mask] - f[:, None] * a[r, :]) % p
            r += 1
        return r
    a = [[x % p for x in row] for row in m.row_lists()]
    n, cols = m.rows, m.cols
    r = 0
    for j in range(cols):
        if r == n:
            break
        piv = next((i for i in range(r, n) if a[i][j]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][j], p - 2, p)
        for i in range(r + 1, n):
            if a[i][j]:
                f = a[i][j] * inv % p
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return r
