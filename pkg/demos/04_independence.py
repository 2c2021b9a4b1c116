"""Functional independence of the integrals.

At the slice point xi = epsilon (all negative simple root coordinates 1) the
derivative matrix of the leading coefficients F_kj is block lower-triangular,
and the determinant of block j is, up to a constant, the product of alpha(p)
over roots of height > j.  We print the proportionality constants across
random regular p, the ranks of the A_j matrices, and the Jacobian rank of the
whole family of integrals compared with sum m_k + N.

    python3 demos/04_independence.py
"""

import numpy as np

from spincm import LaxFamily, build_root_system, realize
from spincm.independence import (a_matrix, build_D, jacobian_rank, liouville_count, matrix_rank,
                                 sample_regular_p, verify_det_formula)
from spincm.lax import sample_phase_point


def main():
    for letter, rank in [("A", 2), ("B", 2), ("A", 3)]:
        R = realize(build_root_system(letter, rank))
        rng = np.random.default_rng(5)
        ps = [sample_regular_p(R, rng) for _ in range(5)]
        D = build_D(R, ps[0])
        dr = verify_det_formula(R, ps)
        print(f"\n== {R.name}: blocks {[B.shape[0] for B in D.blocks]}, off-block mass {D.off_block_mass():.1e}")
        for j, (c, s) in enumerate(zip(dr.constants, dr.ratio_rel_std)):
            print(f"  |D_{j}| / prod(alpha, ht > {j}) = {c.real:+.6f}{c.imag:+.6f}i   (rel. std {s:.1e})")
        ranks = [matrix_rank(a_matrix(R, j))[0] for j in range(2, R.exponents.coxeter_number)]
        print(f"  rank A_j = {ranks}, b_j = {list(R.exponents.b[1:])}")
        fam = LaxFamily.trigonometric(R)
        rr = jacobian_rank(fam, R, sample_phase_point(fam, R, rng, on_shell=True, regular_p=True))
        lc = liouville_count(R)
        print(f"  Jacobian rank {rr.rank} (expected {rr.expected}, margin {rr.margin:.1e}); "
              f"leaf dimension {lc.leaf_dimension}, integrals needed {lc.required}")


if __name__ == "__main__":
    main()
