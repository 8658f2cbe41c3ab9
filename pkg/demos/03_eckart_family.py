"""The Eckart family: one potential under many names.

Shows the squared-Moebius canonical form tying together Eckart,
Rosen-Morse, Morse-Feshbach, Tietz and Hua, and the exact QNF towers of
the tanh / sech^2 / full Eckart wells.
"""

import math

import numpy as np

from qnf1d import (
    Eckart,
    Hua,
    Hulthen,
    ManningRosen,
    MorseFeshbach,
    PhysicalConstants,
    RosenMorse,
    Sech2,
    Tietz,
    canonicalize,
    closed_form_qnfs,
    evaluate,
)
from qnf1d.errors import CanonicalizationError

c = PhysicalConstants()


def family_table():
    print("canonical (Mobius)^2 forms, A0 + overall ((E1 + F1 u)/(E2 + F2 u))^2:")
    demos = [
        ("Eckart", Eckart(0.0, 2.0, -1.0, 1.0), np.linspace(-6, 6, 201)),
        ("Rosen-Morse", RosenMorse(1.0, 1.0, -1.0, 1.0), np.linspace(-6, 6, 201)),
        ("Morse-Feshbach", MorseFeshbach(0.8, 0.7, 1.1), np.linspace(-6, 6, 201)),
        ("Manning-Rosen", ManningRosen(1.3, -0.6, 0.8), np.linspace(0.05, 8, 201)),
        ("Tietz (cosh)", Tietz(1.1, 0.3, 0.9, "cosh"), np.linspace(-6, 6, 201)),
        ("Hua (q = -2)", Hua(1.2, -2.0, 1.0), np.linspace(-6, 6, 201)),
        ("Hulthen", Hulthen(1.0, 1.0), np.linspace(0.05, 8, 201)),
    ]
    for name, spec, grid in demos:
        try:
            cf = canonicalize(spec)
        except CanonicalizationError as exc:
            print(f"  {name:15s} -> no exact form: {exc}")
            continue
        dev = np.max(np.abs(evaluate(spec, grid) - cf.evaluate(grid)))
        f = cf.form
        tag = "scattering" if cf.scattering else "non-scattering"
        print(f"  {name:15s} -> A0={f.A0:+.4f} E1={f.E1:+.4f} F1={f.F1:+.4f} "
              f"E2={f.E2:+.4f} F2={f.F2:+.4f} overall={f.overall:+.4f} "
              f"shift={cf.shift:+.3f}  dev={dev:.1e} ({tag})")


def qnf_towers():
    print()
    print("exact QNF towers (transmitted-side wavenumbers):")
    spec = Eckart(0.0, 2.0, -1.0, 1.0)
    for r in closed_form_qnfs(spec, (0, 3), c):
        print(f"  Eckart n={r.branch} {r.sign_choice:5s}: k = {r.k.imag:+.6f}i "
              f"({r.classification})")
    print()
    print("reflectionless couplings of the sech^2 well: V0 = -n(n+1)/2 (a = 1):")
    for n in (1, 2, 3):
        v0 = -n * (n + 1) * c.h2_2m
        spec = Sech2(v0, 1.0)
        from qnf1d import transmission_probability

        t = transmission_probability(spec, 1.37, c)
        print(f"  n={n}: V0 = {v0:+.1f}, T(E=1.37) - 1 = {t - 1.0:+.1e}")


if __name__ == "__main__":
    family_table()
    qnf_towers()
