#!/usr/bin/env python3
"""Four independent routes to the Airy functions, cross-checked.

The turning-point machinery leans on Ai/Bi, so the package evaluates them
several unrelated ways: a Maclaurin series (primary), the large-|z|
asymptotic expansions, the modified-Bessel representation of order 1/3,
and direct quadrature of the real oscillatory integral.  This script
prints how well the routes agree.
"""

import numpy as np

from semiclassic import (
    airy,
    airy_asymptotic,
    airy_bessel_form,
    airy_laplace_contour,
)

print("series values and the Wronskian Ai Bi' - Ai' Bi (should be 1/pi):")
for z in (-5.0, -1.0, 0.0, 1.0, 5.0):
    pair = airy(z)
    print(
        f"  z = {z:5.1f}   Ai = {pair.ai: .12e}   Bi = {pair.bi: .12e}"
        f"   W - 1/pi = {pair.wronskian - 1 / np.pi: .2e}"
    )

print("\nBessel-form route (valid on z > 0) vs the series:")
for z in (0.5, 2.0, 4.0, 8.0):
    a, b = airy(z), airy_bessel_form(z)
    print(f"  z = {z:4.1f}   relative difference in Ai: {abs(b.ai / a.ai - 1):.2e}")

print("\nLaplace-integral route (validation range |z| <= 2) vs the series:")
for z in (-2.0, -1.0, 0.0, 1.0, 2.0):
    print(f"  z = {z:5.1f}   difference: {airy_laplace_contour(z) - airy(z).ai: .2e}")

print("\nasymptotic forms approach the series as |z| grows:")
for z in (4.0, 8.0, 16.0):
    err_pos = abs(airy_asymptotic(z).ai / airy(z).ai - 1.0)
    err_neg = abs(airy_asymptotic(-z).ai - airy(-z).ai)
    print(f"  |z| = {z:4.1f}   rel err at +z: {err_pos:.1e}   abs err at -z: {err_neg:.1e}")
