"""Exponents, degrees and the height partition of a root system.

The number of positive roots of each height, read as a partition, is
conjugate to the partition formed by the exponents.  This script prints both
sides for every type the package knows about.

    python3 demos/01_exponents.py
"""

from spincm.rootdata import (build_root_system, conjugate_partition, exponent_data,
                             verify_shephard_todd)

TYPES = [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3), ("C", 2), ("C", 3),
         ("D", 4), ("D", 5), ("G", 2), ("F", 4), ("E", 6)]


def main():
    print(f"{'type':<5} {'exponents':<22} {'b_j (roots per height)':<34} {'conjugate?':<10} sum m = |R+|")
    for letter, rank in TYPES:
        rs = build_root_system(letter, rank)
        ed = exponent_data(rs)
        st = verify_shephard_todd(ed, rs)
        conj = conjugate_partition(sorted(ed.exponents, reverse=True)) == tuple(ed.b)
        print(f"{rs.name:<5} {str(list(ed.exponents)):<22} {str(list(ed.b)):<34} {str(conj):<10} "
              f"{st.sum_exponents} = {st.n_positive_roots}")


if __name__ == "__main__":
    main()
