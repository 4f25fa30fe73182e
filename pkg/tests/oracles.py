"""Independent brute-force oracles used by the unit and acceptance tests.

Everything here is deliberately naive and shares no code with the package:
minors are enumerated combinatorially, determinants are cofactor
expansions, groups are element tuples, and surjection counts come from
Mobius inversion over an explicitly built subgroup lattice.
"""

import math
from itertools import combinations, product


# ---------------------------------------------------------------------------
# Smith normal form via determinantal divisors


def cofactor_det(rows):
    """Determinant by cofactor expansion along the first row."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * cofactor_det(minor)
    return total


def snf_by_determinantal_divisors(rows):
    """Invariant factors d_k = D_k / D_{k-1}, D_k = gcd of all k x k minors."""
    n, m = len(rows), len(rows[0])
    divisors = [1]
    for k in range(1, min(n, m) + 1):
        g = 0
        for ri in combinations(range(n), k):
            for ci in combinations(range(m), k):
                sub = [[rows[i][j] for j in ci] for i in ri]
                g = math.gcd(g, cofactor_det(sub))
        if g == 0:
            break
        divisors.append(g)
    return tuple(divisors[k] // divisors[k - 1] for k in range(1, len(divisors)))


# ---------------------------------------------------------------------------
# abelian groups as element tuples


def all_abelian_groups(max_order):
    """Every abelian group of order <= max_order as an invariant-factor tuple."""

    def partitions(n, cap=None):
        if n == 0:
            yield ()
            return
        cap = n if cap is None else cap
        for first in range(min(n, cap), 0, -1):
            for rest in partitions(n - first, first):
                yield (first,) + rest

    out = []
    for order in range(1, max_order + 1):
        # prime-power partitions per prime, combined by CRT into chains
        fac = {}
        n = order
        p = 2
        while p * p <= n:
            while n % p == 0:
                fac[p] = fac.get(p, 0) + 1
                n //= p
            p += 1
        if n > 1:
            fac[n] = fac.get(n, 0) + 1
        choices = [[(p, part) for part in partitions(e)] for p, e in fac.items()]
        for combo in product(*choices):
            width = max((len(part) for _, part in combo), default=0)
            chain = []
            for i in range(width):
                d = 1
                for p, part in combo:
                    if i < len(part):
                        d *= p ** part[i]
                chain.append(d)
            out.append(tuple(reversed(chain)))  # ascending divisibility chain
    return out


def elements_of(chain):
    return list(product(*[range(d) for d in chain]))


def _tables(chain):
    """(elements, addition table add[i][j] -> index, cyclic masks <x>)."""
    elems = elements_of(chain)
    index = {x: i for i, x in enumerate(elems)}
    add = [[index[tuple((a + b) % d for a, b, d in zip(x, y, chain))]
            for y in elems] for x in elems]
    cyc = []
    for i, x in enumerate(elems):
        mask = 1
        j = 0  # index of the zero element
        while True:
            j = add[j][i]
            mask |= 1 << j
            if j == 0:
                break
        cyc.append(mask)
    return elems, add, cyc


_LATTICE_CACHE = {}


def subgroup_lattice(chain):
    """All subgroups as bitmasks over the element list, plus the tables.

    A subgroup joined with a cyclic group is the union of its translates by
    the cyclic generator's multiples, which closes the set in one sweep.
    """
    if chain in _LATTICE_CACHE:
        return _LATTICE_CACHE[chain]
    elems, add, cyc = _tables(chain)
    nel = len(elems)
    lattice = {1}  # the zero subgroup: bit 0 only
    frontier = [1]
    while frontier:
        new = []
        for sub in frontier:
            members = [i for i in range(nel) if sub >> i & 1]
            for x in range(1, nel):
                if sub >> x & 1:
                    continue
                gen = cyc[x]
                grown = 0
                for y in range(nel):
                    if gen >> y & 1:
                        row = add[y]
                        for h in members:
                            grown |= 1 << row[h]
                if grown not in lattice:
                    lattice.add(grown)
                    new.append(grown)
        frontier = new
    out = (elems, sorted(lattice, key=lambda m: -bin(m).count("1")))
    _LATTICE_CACHE[chain] = out
    return out


def surjections_oracle(a_chain, b_chain):
    """#Sur(A, B) by Mobius inversion over the subgroup lattice of B.

    #Hom(A, H) is counted element by element: a hom is a choice, for each
    generator of A of order a_i, of an element of H killed by a_i.
    """
    elems, subs = subgroup_lattice(b_chain)
    nel = len(elems)
    killed = []  # killed[k] = mask of elements annihilated by a_k
    for ai in a_chain:
        m = 0
        for i, x in enumerate(elems):
            if all(ai * xi % d == 0 for xi, d in zip(x, b_chain)):
                m |= 1 << i
        killed.append(m)

    def hom_count(sub):
        total = 1
        for m in killed:
            total *= bin(sub & m).count("1")
        return total

    # mu[i] = Mobius mu(subs[i], B); subs[0] is B itself
    mu = [0] * len(subs)
    mu[0] = 1
    for i in range(1, len(subs)):
        acc = 0
        mi = subs[i]
        for j in range(i):
            if mi & subs[j] == mi:
                acc += mu[j]
        mu[i] = -acc
    return sum(m * hom_count(s) for m, s in zip(mu, subs))


def aut_order_oracle(chain):
    """|Aut| = number of surjective endomorphisms of a finite group."""
    return surjections_oracle(chain, chain)


def aut_order_by_enumeration(chain):
    """|Aut| by checking every endomorphism for bijectivity (small groups)."""
    elems = elements_of(chain)
    candidates = []
    for ai in chain:
        candidates.append([x for x in elems
                           if all(ai * xi % d == 0 for xi, d in zip(x, chain))])
    count = 0
    for images in product(*candidates):
        seen = set()
        for coeffs in elems:
            y = tuple(0 for _ in chain)
            for c, img in zip(coeffs, images):
                y = tuple((a + c * b) % d for a, b, d in zip(y, img, chain))
            seen.add(y)
        if len(seen) == len(elems):
            count += 1
    return count
