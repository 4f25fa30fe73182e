"""Finite abelian groups in canonical invariant-factor form.

A group is a chain of invariant factors d_1 | d_2 | ... (each >= 2); the
empty chain is the trivial group.  Two groups are isomorphic iff their
chains are equal, so structural equality is isomorphism testing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct

__all__ = [
    "FiniteAbelianGroup",
    "GroupTooLarge",
    "K0TooSmall",
    "canonicalize",
    "primary_decomposition",
    "from_primary",
    "sylow",
    "aut_order",
    "count_homs",
    "count_surjections",
    "count_surjections_from_cokernel",
    "is_cyclic",
    "matches_B_times_cyclic",
    "factor",
    "is_prime",
    "is_squarefree",
    "parse_group",
]

SUBGROUP_ORDER_BOUND = 256


class GroupTooLarge(ValueError):
    """Subgroup enumeration requested beyond the supported order bound."""


class K0TooSmall(ValueError):
    """k0 does not exceed every prime divisor of |B|."""


# ---------------------------------------------------------------------------
# integer factorization


_TRIAL_LIMIT = 10 ** 6

# Sufficient Miller-Rabin witnesses for n < 3.3 * 10^24 (Sorenson-Webster).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_BOUND = 3317044064679887385961981


def is_prime(n: int) -> bool:
    """Miller-Rabin primality test, deterministic below ~3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    if n < _MR_DETERMINISTIC_BOUND:
        witnesses = _MR_WITNESSES
    else:
        # beyond the deterministic range add a fixed batch of extra witnesses
        witnesses = _MR_WITNESSES + tuple(range(43, 200, 2))
    for a in witnesses:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of composite odd n (Brent's variant)."""
    if n % 2 == 0:
        return 2
    # deterministic sweep over polynomial offsets
    for c in range(1, 100):
        y, m = 2, 128
        g = q = r = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"pollard rho failed on {n}")


def factor(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as a {prime: exponent} map."""
    if n < 1:
        raise ValueError("factor requires n >= 1")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 7
    # wheel over residues coprime to 30
    incs = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while d <= _TRIAL_LIMIT and d * d <= n:
        if n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        else:
            d += incs[i]
            i = (i + 1) % 8
    if n == 1:
        return out
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        g = _pollard_rho(m)
        stack.append(g)
        stack.append(m // g)
    return out


def is_squarefree(n: int) -> bool:
    """True iff no prime divides n twice."""
    if n < 1:
        raise ValueError("is_squarefree requires n >= 1")
    return all(e == 1 for e in factor(n).values())


# ---------------------------------------------------------------------------
# the group value


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Canonical invariant-factor form; () is the trivial group."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        f = tuple(self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        for d in f:
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
        for a, b in zip(f, f[1:]):
            if b % a:
                raise ValueError(f"broken divisibility chain: {a} does not divide {b}")

    @classmethod
    def trivial(cls) -> "FiniteAbelianGroup":
        return cls(())

    @classmethod
    def cyclic(cls, n: int) -> "FiniteAbelianGroup":
        if n < 1:
            raise ValueError("cyclic order must be >= 1")
        return cls(()) if n == 1 else cls((n,))

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


def parse_group(text: str) -> FiniteAbelianGroup:
    """Inverse of str(): "Z/2 x Z/4" or "0"."""
    text = text.strip()
    if text == "0":
        return FiniteAbelianGroup(())
    factors = []
    for part in text.split("x"):
        part = part.strip()
        if not part.startswith("Z/"):
            raise ValueError(f"bad group token {part!r}")
        factors.append(int(part[2:]))
    return FiniteAbelianGroup(tuple(factors))


def canonicalize(cyclic_orders) -> FiniteAbelianGroup:
    """Invariant-factor form of the direct sum of Z/order_i."""
    primary: dict[int, list[int]] = {}
    for d in cyclic_orders:
        if d < 1:
            raise ValueError("cyclic orders must be >= 1")
        for p, e in factor(d).items():
            primary.setdefault(p, []).append(e)
    return from_primary({p: tuple(es) for p, es in primary.items()})


def primary_decomposition(g: FiniteAbelianGroup) -> dict[int, tuple[int, ...]]:
    """Map prime -> non-increasing exponent partition of the Sylow part."""
    primary: dict[int, list[int]] = {}
    for d in g.invariant_factors:
        for p, e in factor(d).items():
            primary.setdefault(p, []).append(e)
    return {p: tuple(sorted(es, reverse=True)) for p, es in primary.items()}


def from_primary(primary: dict[int, tuple[int, ...]]) -> FiniteAbelianGroup:
    """Rebuild a group from prime -> exponent partition (CRT round-trip)."""
    parts = {p: sorted((e for e in es if e > 0), reverse=True) for p, es in primary.items()}
    parts = {p: es for p, es in parts.items() if es}
    if not parts:
        return FiniteAbelianGroup(())
    width = max(len(es) for es in parts.values())
    factors = []
    for i in range(width):  # i = 0 builds the largest invariant factor
        d = 1
        for p, es in parts.items():
            if i < len(es):
                d *= p ** es[i]
        factors.append(d)
    return FiniteAbelianGroup(tuple(reversed(factors)))


def sylow(g: FiniteAbelianGroup, primes) -> FiniteAbelianGroup:
    """Direct product of the Sylow parts of g at the given primes."""
    ps = set(primes)
    for p in ps:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
    primary = primary_decomposition(g)
    return from_primary({p: es for p, es in primary.items() if p in ps})


def is_cyclic(g: FiniteAbelianGroup) -> bool:
    return len(g.invariant_factors) <= 1


def matches_B_times_cyclic(g: FiniteAbelianGroup, b: FiniteAbelianGroup, k0: int) -> bool:
    """True iff g = b x C with C cyclic of order coprime to primes < k0."""
    gb = primary_decomposition(b)
    if any(p >= k0 for p in gb):
        raise K0TooSmall(f"k0={k0} must exceed every prime divisor of |B|={b.order}")
    gp = primary_decomposition(g)
    small = {p: es for p, es in gp.items() if p < k0}
    if small != gb:
        return False
    return all(len(es) <= 1 for p, es in gp.items() if p >= k0)


# ---------------------------------------------------------------------------
# automorphism count (Hillar-Rhea closed form per p-part)


def _aut_order_p(p: int, partition: tuple[int, ...]) -> int:
    """|Aut| of the abelian p-group with the given exponent partition."""
    e = sorted(partition)  # non-decreasing e_1 <= ... <= e_n
    n = len(e)
    d = [max(l for l in range(n) if e[l] == e[k]) + 1 for k in range(n)]
    c = [min(l for l in range(n) if e[l] == e[k]) + 1 for k in range(n)]
    out = 1
    for k in range(n):
        out *= p ** d[k] - p ** k
    for j in range(n):
        out *= p ** (e[j] * (n - d[j]))
    for i in range(n):
        out *= p ** ((e[i] - 1) * (n - c[i] + 1))
    return out


def aut_order(g: FiniteAbelianGroup) -> int:
    """|Aut(g)|, multiplicative over the Sylow decomposition."""
    out = 1
    for p, es in primary_decomposition(g).items():
        out *= _aut_order_p(p, es)
    return out


# ---------------------------------------------------------------------------
# hom and surjection counts


def count_homs(a: FiniteAbelianGroup, g: FiniteAbelianGroup) -> int:
    """#Hom(a, g) = prod gcd(a_i, g_j) over invariant factors."""
    out = 1
    for ai in a.invariant_factors:
        for gj in g.invariant_factors:
            out *= math.gcd(ai, gj)
    return out


def _elements(g: FiniteAbelianGroup) -> list[tuple[int, ...]]:
    return list(iproduct(*[range(d) for d in g.invariant_factors]))


def _closure(g: FiniteAbelianGroup, base: frozenset, x: tuple[int, ...]) -> frozenset:
    """Subgroup generated by `base` (already a subgroup) and element x."""
    mods = g.invariant_factors
    out = set(base)
    y = x
    while y not in out:
        out.update(tuple((h[i] + y[i]) % mods[i] for i in range(len(mods))) for h in base)
        y = tuple((y[i] + x[i]) % mods[i] for i in range(len(mods)))
    return frozenset(out)


@lru_cache(maxsize=None)
def _subgroups(g: FiniteAbelianGroup) -> tuple[frozenset, ...]:
    """All subgroups of g as element sets, via closure under added generators."""
    if g.order > SUBGROUP_ORDER_BOUND:
        raise GroupTooLarge(f"|g|={g.order} exceeds bound {SUBGROUP_ORDER_BOUND}")
    zero = tuple(0 for _ in g.invariant_factors)
    elems = _elements(g)
    seen = {frozenset([zero])}
    frontier = list(seen)
    while frontier:
        nxt = []
        for sub in frontier:
            for x in elems:
                if x in sub:
                    continue
                grown = _closure(g, sub, x)
                if grown not in seen:
                    seen.add(grown)
                    nxt.append(grown)
        frontier = nxt
    return tuple(sorted(seen, key=lambda s: (len(s), sorted(s))))


def _hom_count_into_subset(a: FiniteAbelianGroup, g: FiniteAbelianGroup,
                           sub: frozenset, free_rank: int = 0) -> int:
    """#Hom(Z^free_rank + a, H) for the subgroup H of g given as an element set."""
    mods = g.invariant_factors
    out = len(sub) ** free_rank
    for ai in a.invariant_factors:
        out *= sum(1 for x in sub if all(ai * xi % m == 0 for xi, m in zip(x, mods)))
    return out


def _surjection_count(a: FiniteAbelianGroup, g: FiniteAbelianGroup, free_rank: int) -> int:
    """#Sur(Z^free_rank + a, g) by inversion over the subgroup lattice of g."""
    subs = _subgroups(g)  # sorted by size
    sur: dict[frozenset, int] = {}
    for k, K in enumerate(subs):
        total = _hom_count_into_subset(a, g, K, free_rank)
        for H in subs[:k]:
            if len(K) % len(H) == 0 and H <= K:
                total -= sur[H]
        sur[K] = total
    return sur[subs[-1]]


def count_surjections(a: FiniteAbelianGroup, g: FiniteAbelianGroup) -> int:
    """#Sur(a, g); every hom lands onto a subgroup, inverted over the lattice."""
    if g.order > SUBGROUP_ORDER_BOUND:
        raise GroupTooLarge(f"|g|={g.order} exceeds bound {SUBGROUP_ORDER_BOUND}")
    return _surjection_count(a, g, 0)


def count_surjections_from_cokernel(free_rank: int, torsion: FiniteAbelianGroup,
                                    g: FiniteAbelianGroup) -> int:
    """#Sur(Z^free_rank + torsion, g); a free summand hits all of any finite H."""
    if g.order > SUBGROUP_ORDER_BOUND:
        raise GroupTooLarge(f"|g|={g.order} exceeds bound {SUBGROUP_ORDER_BOUND}")
    return _surjection_count(torsion, g, free_rank)
