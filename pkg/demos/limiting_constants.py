"""Tour of the closed-form limiting probabilities.

Prints the constants the Monte-Carlo experiments converge to, with their
truncation error bounds: surjectivity, Cohen-Lenstra masses, cyclicity,
square-free cokernel order, and total-sandpile masses.
"""

from coklab import (FiniteAbelianGroup, cohen_lenstra_prob, cyclic_prob,
                    sandpile_cyclic_prob, sandpile_prob, squarefree_det_prob,
                    sylow_restricted_prob, zeta_tail_product)

G = FiniteAbelianGroup


def show(label, t):
    print(f"{label:<44} {t.value:.10f} +- {t.abs_error_bound:.1e}")


def main():
    show("P(surjective), u=1  (prod zeta^-1)", zeta_tail_product(1))
    for chain in [(), (2,), (3,), (4,), (2, 2)]:
        g = G(chain)
        show(f"P(cok = {g}), u=1", cohen_lenstra_prob(g, 1))
    for u in (0, 1, 2):
        show(f"P(cok cyclic), u={u}", cyclic_prob(u))
    show("P(|cok| square-free), u=1", squarefree_det_prob(1))
    show("P(cok_2 trivial), u=1, P={2}", sylow_restricted_prob(G(()), 1, {2}))
    for chain in [(), (2,), (3,)]:
        g = G(chain)
        show(f"P(sandpile = {g})", sandpile_prob(g))
    show("P(sandpile cyclic)", sandpile_cyclic_prob())
    print()
    print("identities worth noticing:")
    print("  cyclic(u=1) == sandpile-cyclic "
          f"({cyclic_prob(1).value:.12f} == {sandpile_cyclic_prob().value:.12f})")
    print("  cyclic(u=0) == squarefree(u=1) "
          f"({cyclic_prob(0).value:.12f} == {squarefree_det_prob(1).value:.12f})")


if __name__ == "__main__":
    main()
