"""Numerical evaluation of the limiting probabilities.

Every value is returned as a TolerancedReal carrying an explicit bound on
the truncation error: zeta tails via the integral bound, Euler products
over primes via the majorant sum_{m>P} c*m^(-s) <= c*P^(1-s)/(s-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .groups import FiniteAbelianGroup, aut_order, factor, primary_decomposition

__all__ = [
    "TolerancedReal",
    "BadArgument",
    "zeta",
    "zeta_tail_product",
    "cohen_lenstra_prob",
    "cyclic_prob",
    "squarefree_det_prob",
    "sandpile_prob",
    "sandpile_cyclic_prob",
    "prodcyc_prob",
    "sylow_restricted_prob",
    "uniform_fullrank_prob",
    "heuristic_surjective_mod_p",
    "primes_up_to",
]

DEFAULT_TOL = 1e-10


class BadArgument(ValueError):
    pass


@dataclass(frozen=True)
class TolerancedReal:
    value: float
    abs_error_bound: float
    degenerate: bool = False

    def __float__(self) -> float:
        return self.value


def primes_up_to(n: int) -> list[int]:
    """Primes <= n by an Eratosthenes sieve."""
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(sieve[p * p::p]))
    return [i for i in range(2, n + 1) if sieve[i]]


def zeta(k: int, tol: float = 1e-12) -> TolerancedReal:
    """zeta(k) by direct series with an Euler-Maclaurin-corrected tail.

    The remainder after the B_4 correction term is bounded by the magnitude
    of the first omitted (B_6) term.
    """
    if k < 2:
        raise BadArgument("zeta requires k >= 2")
    if tol <= 0:
        raise BadArgument("tol must be positive")
    if k >= 60:
        # 1 < zeta(k) < 1 + 2^(1-k); 2^-59 is below double resolution here
        return TolerancedReal(1.0, 2.0 ** (1 - k))

    def remainder_bound(n: float) -> float:
        return (k * (k + 1) * (k + 2) * (k + 3) * (k + 4) / 15120.0
                * n ** (-(k + 5.0)))

    n = 16
    while remainder_bound(n) > tol and n < 10 ** 7:
        n *= 2
    s = sum(float(j) ** -k for j in range(n - 1, 0, -1))
    # tail over j >= n: integral + 1/2 f(n) - B2/2! f'(n) - B4/4! f'''(n)
    fn = float(n) ** -k
    s += n ** (1.0 - k) / (k - 1) + fn / 2 + k * fn / (12.0 * n)
    s -= k * (k + 1) * (k + 2) * fn / (720.0 * n ** 3)
    return TolerancedReal(s, remainder_bound(n) + n * 1e-17)


def zeta_tail_product(u: int, tol: float = DEFAULT_TOL) -> TolerancedReal:
    """prod_{k=u+1}^inf zeta(k)^(-1); exactly 0 for u = 0 since zeta(1) diverges."""
    if u < 0:
        raise BadArgument("u must be >= 0")
    if tol <= 0:
        raise BadArgument("tol must be positive")
    if u == 0:
        return TolerancedReal(0.0, 0.0)
    # omitted factors: 1 >= prod_{k>K} zeta(k)^-1 >= 1 - sum_{k>K} 2^(1-k) = 1 - 2^(1-K)
    kmax = max(u + 1, int(1 - math.log2(tol / 4)))
    value = 1.0
    err = 0.0
    for k in range(u + 1, kmax + 1):
        z = zeta(k, tol / (4 * (kmax - u)))
        value /= z.value
        err += z.abs_error_bound  # relative, since zeta >= 1 and value <= 1
    err += 2.0 ** (1 - kmax)
    return TolerancedReal(value, err * value + 1e-15)


_PRIME_CACHE: dict[int, list[int]] = {}


def _primes_cached(n: int) -> list[int]:
    if n not in _PRIME_CACHE:
        _PRIME_CACHE[n] = primes_up_to(n)
    return _PRIME_CACHE[n]


def _mobius(n: int) -> int:
    mu = 1
    for p, e in factor(n).items() if n > 1 else []:
        if e > 1:
            return 0
        mu = -mu
    return mu


def prime_zeta(s: int) -> float:
    """sum over primes of p^-s, via sum_n mu(n)/n * log zeta(n*s)."""
    if s < 2:
        raise BadArgument("prime_zeta requires s >= 2")
    total = 0.0
    n = 1
    while n * s < 70:  # log zeta(ns) ~ 2^-ns is below double resolution past here
        mu = _mobius(n)
        if mu:
            total += mu / n * math.log(zeta(n * s, 1e-15).value)
        n += 1
    return total


_EULER_CUTOFF = 100_000


def _euler_product_geom(s: int, tol: float, start_prime: int = 2) -> TolerancedReal:
    """prod_{p >= start_prime} (1 + sum_{j>=s} p^-j), s >= 2.

    The factor for each prime is 1 + p^(1-s)/(p-1).  Primes up to a cutoff P
    are multiplied directly; the log of the omitted factor,
    sum_{p>P} log(1 + t_p) with t_p = sum_{j>=s} p^-j, is recovered from
    prime zeta values: sum_{p>P} t_p = sum_{j>=s} (P(j) - sum_{p<=P} p^-j).
    The j-sum decays geometrically in 1/P and the quadratic log correction
    is below P^(2-2s) * P(s); both enter the error bound.
    """
    if tol <= 0:
        raise BadArgument("tol must be positive")
    cutoff = max(_EULER_CUTOFF, 2 * start_prime)
    primes = _primes_cached(cutoff)
    value = 1.0
    for p in primes:
        if p >= start_prime:
            fp = float(p)
            value *= 1.0 + fp ** (1 - s) / (fp - 1.0)
    tail_log = 0.0
    for j in range(s, s + 5):
        partial = sum(float(p) ** -j for p in primes)
        tail_log += prime_zeta(j) - partial
    # omitted j >= s+5 terms and the log quadratic correction
    err_log = 2.0 * cutoff ** (-(s + 4)) + cutoff ** (2 - 2 * s)
    value *= math.exp(tail_log)
    err = value * (math.expm1(err_log) + len(primes) * 1e-16 + 1e-13)
    return TolerancedReal(value, err)


def cohen_lenstra_prob(b: FiniteAbelianGroup, u: int,
                       tol: float = DEFAULT_TOL) -> TolerancedReal:
    """Limiting mass of cokernel == b for n x (n+u) matrices.

    For u = 0 the mass of every fixed finite group is 0; returned as an
    exact 0 flagged degenerate rather than an error.
    """
    if u < 0:
        raise BadArgument("u must be >= 0")
    if u == 0:
        return TolerancedReal(0.0, 0.0, degenerate=True)
    ztp = zeta_tail_product(u, tol)
    scale = 1.0 / (b.order ** u * aut_order(b))
    return TolerancedReal(ztp.value * scale, ztp.abs_error_bound * scale)


def cyclic_prob(u: int, tol: float = DEFAULT_TOL) -> TolerancedReal:
    """Limiting probability that the cokernel of an n x (n+u) matrix is cyclic."""
    if u < 0:
        raise BadArgument("u must be >= 0")
    ep = _euler_product_geom(s=u + 2, tol=tol / 2)
    ztp = zeta_tail_product(u + 1, tol / 2)
    return TolerancedReal(ep.value * ztp.value,
                          ep.value * ztp.abs_error_bound + ztp.value * ep.abs_error_bound + 1e-15)


def squarefree_det_prob(u: int, tol: float = DEFAULT_TOL) -> TolerancedReal:
    """Limiting probability of a square-free determinant, u >= 1."""
    if u < 1:
        raise BadArgument("u must be >= 1")
    ep = _euler_product_geom(s=u + 1, tol=tol / 2)
    ztp = zeta_tail_product(u, tol / 2)
    return TolerancedReal(ep.value * ztp.value,
                          ep.value * ztp.abs_error_bound + ztp.value * ep.abs_error_bound + 1e-15)


def sandpile_prob(b: FiniteAbelianGroup, tol: float = DEFAULT_TOL) -> TolerancedReal:
    """Limiting mass of total sandpile group == b for random digraphs."""
    ztp = zeta_tail_product(1, tol)
    scale = 1.0 / (b.order * aut_order(b))
    return TolerancedReal(ztp.value * scale, ztp.abs_error_bound * scale)


def sandpile_cyclic_prob(tol: float = DEFAULT_TOL) -> TolerancedReal:
    """Limiting probability that the total sandpile group is cyclic."""
    ep = _euler_product_geom(s=3, tol=tol / 2)
    ztp = zeta_tail_product(2, tol / 2)
    return TolerancedReal(ep.value * ztp.value,
                          ep.value * ztp.abs_error_bound + ztp.value * ep.abs_error_bound + 1e-15)


def prodcyc_prob(b: FiniteAbelianGroup, k0: int,
                 tol: float = DEFAULT_TOL) -> TolerancedReal:
    """Limiting mass of cokernels equal to b times a cyclic group (square case).

    The cyclic complement may only involve primes >= k0; k0 must exceed every
    prime divisor of |b|.
    """
    from .groups import K0TooSmall

    if any(p >= k0 for p in primary_decomposition(b)):
        raise K0TooSmall(f"k0={k0} must exceed every prime divisor of |B|={b.order}")
    small = 1.0
    for p in primes_up_to(k0 - 1):
        small *= 1.0 - 1.0 / p
    big = _euler_product_geom(s=2, tol=tol / 2, start_prime=k0)
    ztp = zeta_tail_product(1, tol / 2)
    scale = small / aut_order(b)
    value = scale * big.value * ztp.value
    err = scale * (big.value * ztp.abs_error_bound + ztp.value * big.abs_error_bound)
    return TolerancedReal(value, err + 1e-15)


def sylow_restricted_prob(b: FiniteAbelianGroup, u: int, primes,
                          tol: float = DEFAULT_TOL) -> TolerancedReal:
    """Limiting mass of the Sylow-P part of the cokernel being b, u >= 0."""
    ps = sorted(set(primes))
    need = set(primary_decomposition(b))
    if not need <= set(ps):
        raise BadArgument(f"prime set {ps} must contain all primes dividing |b|={b.order}")
    value = 1.0 / (b.order ** u * aut_order(b))
    err_log = 0.0
    for p in ps:
        # truncate prod_{k>=1} (1 - p^(-k-u)) when the remaining log-tail is tiny
        k = 1
        while True:
            t = float(p) ** (-(k + u))
            if t < tol / (4 * len(ps)) and k > 4:
                break
            value *= 1.0 - t
            k += 1
        err_log += float(p) ** (-(k + u)) / (1.0 - 1.0 / p)
    return TolerancedReal(value, value * math.expm1(err_log) + 1e-15)


def uniform_fullrank_prob(n: int, u: int, p: int) -> float:
    """prod_{j=1}^n (1 - p^(-j-u)): exact full-rank-mod-p chance, uniform entries."""
    out = 1.0
    for j in range(1, n + 1):
        out *= 1.0 - float(p) ** (-(j + u))
    return out


def heuristic_surjective_mod_p(n: int, p: int) -> float:
    """prod_{j=2}^n (1 - p^-j) * (1 - p^-(n+1)): mod-p surjectivity heuristic."""
    out = 1.0 - float(p) ** (-(n + 1))
    for j in range(2, n + 1):
        out *= 1.0 - float(p) ** (-j)
    return out
