"""Double-delta well: the Lambert-W tower of quasi-normal wavenumbers.

Walks through the signature result of the catalog: the QNFs of
V = alpha (delta(x-a) + delta(x+a)) in closed form, their certification
against the formula-free pole finder, and the damped-mode threshold
2 a k0 = W(1/e).
"""

import math

from qnf1d import (
    DoubleDelta,
    PhysicalConstants,
    SearchRegion,
    closed_form_qnfs,
    find_poles,
    lambert_w,
    qnf_energy,
)

c = PhysicalConstants()  # hbar = m = 1


def tower():
    spec = DoubleDelta(1.0, 1.0)  # k0 = m alpha / hbar^2 = 1, spacing 2a = 2
    print("closed-form tower (k0 = 1, a = 1), branches -3..3:")
    for r in sorted(closed_form_qnfs(spec, (-3, 3), c), key=lambda r: r.k.real):
        e = qnf_energy(r.k, c)
        print(
            f"  n={r.branch:+d} {r.sign_choice:5s}  k = {r.k.real:+.6f}{r.k.imag:+.6f}i"
            f"   E = {e.real:+.4f}{e.imag:+.4f}i   residual {r.residual:.1e}"
        )
    print()
    print("certifying against the transfer-matrix pole scan ...")
    rep = find_poles(spec, SearchRegion(-12.0, 12.0, 0.01, 2.0, 6.0), c)
    closed = [r.k for r in closed_form_qnfs(spec, (-5, 5), c)
              if -12 <= r.k.real <= 12 and 0.01 <= r.k.imag <= 2.0]
    worst = max(min(abs(k - q) for q in closed) for k, _, _ in rep.poles)
    print(f"  {len(rep.poles)} poles found, {len(closed)} expected, "
          f"largest mismatch {worst:.2e}")


def threshold():
    w = lambert_w(0, math.exp(-1.0)).real
    print()
    print(f"damped-mode threshold: the lowest QNF is purely imaginary while")
    print(f"2 a k0 < W(1/e) = {w:.6f}")
    for g in (0.2, 0.27, 0.29, 0.4):
        spec = DoubleDelta(g / 2.0, 1.0)
        r = next(r for r in closed_form_qnfs(spec, (0, 0), c)
                 if r.sign_choice == "minus")
        print(f"  2 a k0 = {g:.2f}: k = {r.k.real:+.6f}{r.k.imag:+.6f}i "
              f"({r.classification})")


if __name__ == "__main__":
    tower()
    threshold()
