#!/usr/bin/env python3
"""Channel constants from first principles vs the measured reference values.

Builds the Stark maps for the five states of the 41d + 49s -> 42p + 49p
transfer, fits the quadratic shifts, and prints the resulting (W0, alpha,
F_res) per channel next to the reference constants.
"""

import time

import ryddrive as rd


def main():
    t0 = time.perf_counter()
    computed = rd.compute_channels()
    elapsed = time.perf_counter() - t0
    reference = rd.reference_channels()
    print(f"computed in {elapsed:.1f} s\n")
    print(f"{'channel':8} {'W0 (MHz)':>10} {'alpha (MHz/(V/cm)^2)':>22} {'F_res (V/cm)':>14}")
    for comp, ref in zip(computed, reference):
        print(
            f"{comp.label + ' calc':8} {comp.W0:10.3f} {comp.alpha:22.2f} "
            f"{rd.resonance_field(comp):14.4f}"
        )
        print(
            f"{ref.label + ' ref':8} {ref.W0:10.3f} {ref.alpha:22.2f} "
            f"{rd.resonance_field(ref):14.4f}"
        )


if __name__ == "__main__":
    main()
