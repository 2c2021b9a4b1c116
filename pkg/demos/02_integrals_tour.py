"""A tour of the three Lax families on sl(3).

For one on-shell phase point (Cartan part of the spin set to zero) we expand
each primitive invariant of L(z) in the spectral basis of the family and
print the table of integrals I_kj.  Things to notice:

* the top coefficient I_k,d_k equals I_k(xi) in every family;
* in the rational family I_k1 vanishes on shell;
* in the trigonometric family the odd coefficients satisfy
  sum_{j odd} I_kj i^j = 0;
* in the elliptic family there is no zeta term (I_k1 = 0).

    python3 demos/02_integrals_tour.py
"""

import numpy as np

from spincm import LaxFamily, build_root_system, extract_integrals, primitive_invariants, realize
from spincm.harness import trig_odd_residual
from spincm.lax import hamiltonian_consistency, sample_phase_point
from spincm.weierstrass import Lattice


def main():
    R = realize(build_root_system("A", 2))
    invs = primitive_invariants(R)
    rng = np.random.default_rng(2024)
    families = [LaxFamily.rational(R), LaxFamily.trigonometric(R),
                LaxFamily.elliptic(R, Lattice(0.5, 0.65j))]
    for fam in families:
        pt = sample_phase_point(fam, R, rng, on_shell=True)
        tb = extract_integrals(fam, pt, invs)
        print(f"\n== {fam.kind} family, basis {tb.basis_tag}")
        for k, inv in enumerate(invs, start=1):
            row = tb.row(k)
            cells = "  ".join(f"{abs(v):9.3e}" for v in row)
            print(f"  k={k} {inv.label:<9} |I_kj|: {cells}")
            print(f"        top vs I_k(xi): {abs(row[-1] - inv(pt.xi)):.1e}", end="")
            if fam.kind == "trigonometric":
                print(f"   odd relation: {trig_odd_residual(row):.1e}", end="")
            else:
                print(f"   |I_k1|: {abs(row[1]):.1e}", end="")
            print()
        hc = hamiltonian_consistency(fam, pt)
        print(f"  Hamiltonian: explicit {hc.explicit:.6f}, from integrals {hc.from_integrals:.6f}")


if __name__ == "__main__":
    main()
