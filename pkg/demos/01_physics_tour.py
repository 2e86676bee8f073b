"""
Tour of the simulator physics
=============================

A quick pass over the building blocks: a resonant pi pulse, the two
analytic noise benchmarks, and the footprint a weak pointer measurement
leaves on the qubit.  Everything here is closed-form checkable, so each
section prints the simulated number next to the exact one.
"""

import math

import numpy as np

from streamqc.core import (
    RHO_EXCITED,
    RHO_GROUND,
    RHO_PLUS,
    SIGMA_Z,
    expectation,
    uhlmann_fidelity,
)
from streamqc.dynamics import OMEGA_FLIP, DriveSpec, NoiseModel, evolve_interval
from streamqc.measurement import make_gaussian_pointer, nonselective_map

DT = 0.01
SUBSTEPS = 10


def evolve(rho, drive, noise, steps=100):
    for _ in range(steps):
        rho = evolve_interval(rho, drive, noise, DT, SUBSTEPS)
    return rho


# A resonant drive at Omega = pi/2 for unit time rotates |0> onto |1>.
rho = evolve(RHO_GROUND.copy(), DriveSpec(OMEGA_FLIP), NoiseModel())
print("pi pulse")
print(f"  fidelity with |1>        {uhlmann_fidelity(rho, RHO_EXCITED):.12f}")
print(f"  exact                    1.0")

# Pure dephasing shrinks the off-diagonal of |+> as exp(-gamma t) while
# leaving the populations alone.
gamma = 0.05
rho = evolve(RHO_PLUS.copy(), DriveSpec(0.0), NoiseModel(dephasing_rate=gamma))
print("dephasing, gamma = 0.05")
print(f"  |rho12| at t = 1         {abs(rho[0, 1]):.12f}")
print(f"  exact 0.5 exp(-gamma)    {0.5 * math.exp(-gamma):.12f}")

# The relaxation channel mixes toward the maximally mixed state, so the
# <sigma_z> polarization of the ground state decays as exp(-2 gamma t).
rho = evolve(RHO_GROUND.copy(), DriveSpec(0.0), NoiseModel(relaxation_rate=gamma))
print("relaxation, gamma = 0.05")
print(f"  <sigma_z> at t = 1       {expectation(rho, SIGMA_Z):.12f}")
print(f"  exact exp(-2 gamma)      {math.exp(-2.0 * gamma):.12f}")

# A single non-selective pointer measurement multiplies the coherence by
# roughly exp(-1/(2 sigma^2)): wide pointers barely disturb the qubit,
# narrow ones wipe the off-diagonal out.
print("measurement backaction on |+> (single non-selective readout)")
print(f"  {'sigma':>6}  {'coherence kept':>14}  {'exp(-1/2s^2)':>13}")
for sigma in (0.5, 1.0, 2.0, 10.0):
    pointer = make_gaussian_pointer(sigma)
    rho = nonselective_map(RHO_PLUS, pointer)
    kept = abs(rho[0, 1]) / 0.5
    print(f"  {sigma:6.1f}  {kept:14.8f}  {math.exp(-1.0 / (2.0 * sigma**2)):13.8f}")

# The same factor compounded over a full driven episode is why the control
# problem is interesting: the agent must flip the qubit while 100 of these
# kicks are landing.
pointer = make_gaussian_pointer(10.0)
rho = RHO_GROUND.copy()
for _ in range(100):
    rho = evolve_interval(rho, DriveSpec(OMEGA_FLIP), NoiseModel(), DT, SUBSTEPS)
    rho = nonselective_map(rho, pointer)
print("pi pulse with a sigma = 10 readout after every step")
print(f"  fidelity with |1>        {uhlmann_fidelity(rho, RHO_EXCITED):.6f}")
print(f"  population rho22         {rho[1, 1].real:.6f}")
