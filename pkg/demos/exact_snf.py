"""Exact Smith normal form and cokernels, entirely in integer arithmetic.

Shows the two computation routes (fast invariant factors vs. transform-
carrying elimination), the unimodular identity U M V = D, and a cokernel
of a matrix whose entries dwarf machine words.
"""

from coklab import IntMatrix, cokernel, det, format_matrix, smith_normal_form


def main():
    m = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
    print("M =")
    print(format_matrix(m))
    res = smith_normal_form(m, want_transforms=True)
    print("invariant factors:", res.invariant_factors)
    print("det(M) =", det(m), " product of factors =",
          res.invariant_factors[0] * res.invariant_factors[1] * res.invariant_factors[2])
    print("U =")
    print(format_matrix(res.left_transform))
    print("V =")
    print(format_matrix(res.right_transform))
    print("U M V =")
    print(format_matrix(res.left_transform @ m @ res.right_transform))
    print("cok(M) =", cokernel(m))

    big = IntMatrix.from_rows([[10 ** 40 + 1, 10 ** 20], [3, 10 ** 40 - 1]])
    print("\na matrix with 40-digit entries:")
    print("cok =", cokernel(big))


if __name__ == "__main__":
    main()
