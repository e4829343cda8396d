#!/usr/bin/env python3
"""Tunneling through a sech^2 barrier: WKB flavors against the exact oracle.

Sweeps the energy below the barrier top and tabulates the opacity integral
sigma*, the bare e^{-2 sigma*}, the interference-corrected value (identical
to the patched-wavefunction current ratio), and the exact Numerov result.
Writes eckart_transmission.csv next to this script.
"""

import csv
import dataclasses
import pathlib

import numpy as np

from semiclassic import (
    EckartBarrier,
    ScatteringProblem,
    barrier_integral,
    solve_scattering_exact,
    transmission_from_currents,
    transmission_leading,
)

base = ScatteringProblem(
    potential=EckartBarrier(height=1.0, width=1.0),
    energy=0.5,
    domain=(-14.0, 14.0),
)

rows = []
print("  E      sigma*    T_bare      T_corrected  T_connection  T_exact")
for e in np.linspace(0.05, 0.75, 15):
    problem = dataclasses.replace(base, energy=float(e))
    sigma = barrier_integral(problem)
    bare = transmission_leading(problem, corrected=False).transmission
    corr = transmission_leading(problem).transmission
    conn = transmission_from_currents(problem).transmission
    exact = solve_scattering_exact(problem).transmission
    rows.append((e, sigma, bare, corr, conn, exact))
    print(
        f"  {e:4.2f}   {sigma:6.3f}   {bare:.4e}  {corr:.4e}   {conn:.4e}    {exact:.4e}"
    )

out = pathlib.Path(__file__).with_name("eckart_transmission.csv")
with out.open("w", newline="\n") as fh:
    writer = csv.writer(fh)
    writer.writerow(["E", "sigma_star", "T_bare", "T_corrected", "T_connection", "T_exact"])
    writer.writerows(rows)
print(f"\nwrote {out}")
print("note: T_connection equals T_corrected to machine precision -- the")
print("patched-wavefunction current ratio and the closed form are the same algebra.")
