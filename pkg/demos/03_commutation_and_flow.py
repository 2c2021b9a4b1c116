"""Poisson commutation on the zero level of the momentum map, and conservation.

On J^-1(0) all the integrals I_kj commute.  We measure the largest
normalized bracket (finite-difference gradients, with an h versus h/2 check
of the second-order stencil; once the h residual is at rounding level the
observed order is meaningless and the check passes on the floor) and contrast it with a generic off-shell point,
where they do not commute.  Then we integrate the Hamiltonian flow for unit
time and report how much every integral drifts.

    python3 demos/03_commutation_and_flow.py
"""

import numpy as np

from spincm import LaxFamily, build_root_system, realize
from spincm.lax import sample_phase_point
from spincm.poisson import commutation_report, flow
from spincm.weierstrass import Lattice


def main():
    for name, fam_of in [("A2", LaxFamily.rational), ("A2", LaxFamily.trigonometric),
                         ("A1", lambda R: LaxFamily.elliptic(R, Lattice(0.5, 0.65j)))]:
        R = realize(build_root_system(name[0], int(name[1])))
        fam = fam_of(R)
        rng = np.random.default_rng(11)
        cr = commutation_report(fam, R, n_samples=3, rng=rng)
        print(f"{R.name} {fam.kind:<13} on-shell bracket {cr.residual:.1e}  "
              f"(stencil order {cr.convergence_order:.2f}, "
              f"{'converged' if cr.convergence_ok else 'NOT converged'})  off-shell witness {cr.off_shell_witness:.1e}")
        start = sample_phase_point(fam, R, rng, on_shell=True)
        fr = flow(fam, start, T=1.0, tol=1e-10)
        print(f"{'':<17} flow T=1: {fr.message}; integral drift {fr.integral_drift:.1e}, "
              f"J drift {fr.momentum_drift:.1e}, H drift {fr.hamiltonian_drift:.1e}")


if __name__ == "__main__":
    main()
