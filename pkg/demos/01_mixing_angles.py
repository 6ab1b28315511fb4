"""
Mixing angles from atom and cavity parameters
=============================================

Derived cavity parameters, the free-space van der Waals estimate and the
cavity-assisted angle, computed both from the vacuum Rabi frequency and from
the dimensionless detuning ``eta``.
"""

# %%
import math

import numpy as np

from cavity_collision import analytic
from cavity_collision.model import PhysicalSetup, v0_effective

setup = PhysicalSetup()
print(f"E0        = {setup.E0:.4e} V/m")
print(f"Omega/2pi = {setup.Omega / 2 / math.pi / 1e3:.2f} kHz")
print(f"b_c       = {setup.b_c * 100:.3f} cm")

# %%
# Free space: an impact parameter of about 13 um is needed for a quarter-turn
# at v/c = 1e-6. At the 0.5 mm beam diameter the angle is tiny.
c = setup.constants.c
print(analytic.free_space_angle(51, 1e-6 * c, 13.3e-6) / (math.pi / 4))
print(analytic.free_space_angle(51, 273.0, 0.5e-3))

# %%
# In the cavity both forms of the angle coincide.
v0 = v0_effective(300.0, 243.0)
for f_hz in (100e3, 470e3, 2e6):
    point = analytic.eta_from_delta(2 * math.pi * f_hz, setup)
    a = analytic.cavity_angle(setup, point.delta_a, v0)
    b = analytic.cavity_angle_from_eta(setup, point.eta, v0)
    print(f"delta_a/2pi = {f_hz:9.0f} Hz  eta = {point.eta:.3e}  theta = {a:.5f}  rel diff = {abs(a - b) / b:.1e}")

# %%
# eta for maximal entanglement, and the detuning it corresponds to
eta_q = analytic.eta_for_angle(setup, math.pi / 4, v0)
print(eta_q, analytic.delta_from_eta(eta_q, setup).delta_a / 2 / math.pi)

# %%
# Second-order populations with the 0.89 detection factor
for eta in np.linspace(0, 6e5, 7):
    theta = analytic.cavity_angle_from_eta(setup, eta, v0)
    print(f"{eta:9.3g}", analytic.perturbative_probabilities(theta, 0.89))
