"""Total sandpile groups of Erdos-Renyi random digraphs.

Samples digraphs, forms their Laplacians, and tabulates the total sandpile
group S = Z_0^n / L Z^n.  The trivial group appears with limiting
probability ~ 0.4358 (the digraph is then called co-Eulerian), and the
distribution is insensitive to the edge probability q.
"""

from collections import Counter
from fractions import Fraction

from coklab import (Rng, laplacian, sample_digraph, sandpile_prob,
                    total_sandpile, parse_group)


def main():
    n, trials = 25, 1500
    for q in (Fraction(3, 10), Fraction(7, 10)):
        counts = Counter()
        base = Rng(99)
        for t in range(trials):
            g = sample_digraph(n, q, base.substream(t))
            counts[str(total_sandpile(laplacian(g.adjacency_matrix())))] += 1
        print(f"q = {q}:")
        for label, c in counts.most_common(6):
            line = f"  {label:<14} {c / trials:.4f}"
            if label not in ("infinite",) and "Z^" not in label and label != "Z":
                theory = sandpile_prob(parse_group(label))
                line += f"   (limit {theory.value:.4f})"
            print(line)
        print()


if __name__ == "__main__":
    main()
