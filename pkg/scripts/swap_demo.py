#!/usr/bin/env python3
"""Swap-propagator demonstration: the friendly end of the spectrum.

Product states with one fixed environment state have an empty traceless
kernel, so the linearity check passes trivially, and swapping the factors
makes the reduced map constant: everything lands on the environment state.
Constant maps are completely positive, and the probe table shows trace
distances only ever shrinking.
"""

import numpy as np

import rdl


def main():
    omega = 0.5 * (np.eye(2, dtype=complex) + 0.3 * rdl.SIGMA_X + 0.2 * rdl.SIGMA_Z)
    states = list(rdl.pauli_eigenstates())
    exp = rdl.swap_experiment(states, omega)

    sub = exp.subspace
    print("six Pauli eigenstates (x) fixed environment state, swap propagator")
    print(f"span {sub.span_dim} = reduced {sub.reduced_dim} + kernel {sub.kernel_dim}")
    print(f"kernel test: consistent={exp.consistency.consistent} "
          f"(empty kernel, nothing to violate)")
    v = exp.map_verdicts
    print(f"verdicts: hermitian={v.hermitian_preserving} trace={v.trace_preserving} "
          f"completely_positive={v.completely_positive} "
          f"min Choi eigenvalue {v.choi_min_eigenvalue:+.2e}")
    print(f"every input maps to the environment state: max deviation "
          f"{exp.constant_output_deviation:.2e}")
    print(f"operator-sum terms: {len(exp.kraus.terms)}, all weights "
          f"{sorted(set(e for e, _ in exp.kraus.terms))}")

    print("\nprobe pairs (trace distance before -> after):")
    labels = ["+x", "-x", "+y", "-y", "+z", "-z"]
    idx = 0
    for i in range(len(states)):
        for j in range(i + 1, len(states)):
            p = exp.pairs[idx]
            idx += 1
            grew = "  GREW" if p.increased else ""
            print(f"  {labels[i]:>2} vs {labels[j]:>2}: {p.before:.4f} -> {p.after:.4f}{grew}")


if __name__ == "__main__":
    main()
