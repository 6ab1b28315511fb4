"""
Bell signal after analysis pulses
=================================

At the maximally entangling ``eta`` the atom pair is close to an EPR pair,
so the transverse correlator swings between -1 and +1 as the analysis phase
of the second atom is scanned. Thermal photons and state misassignment
reduce the contrast.
"""

# %%
import math

import numpy as np

from cavity_collision import analytic
from cavity_collision.dynamics import collide_thermal
from cavity_collision.measurement import DetectionModel, bell_scan
from cavity_collision.model import CollisionScenario, PhysicalSetup, v0_effective

setup = PhysicalSetup()
v1, v2 = 500.0, 319.0
eta = analytic.eta_for_angle(setup, math.pi / 4, v0_effective(v1, v2))
delta_a = analytic.delta_from_eta(eta, setup).delta_a
phases = np.linspace(0, 4 * math.pi, 81)

# %%
ideal = bell_scan(collide_thermal(CollisionScenario(v1, v2, delta_a, nbar=0.0), setup), phases)
print(f"vacuum, perfect detection: contrast {ideal.contrast:.4f}")

# %%
rho = collide_thermal(CollisionScenario(v1, v2, delta_a, nbar=0.25), setup)
for label, det in [("thermal, perfect detection", DetectionModel.identity()),
                   ("thermal, 5% misassignment", DetectionModel.confusion(0.05))]:
    print(f"{label}: contrast {bell_scan(rho, phases, det).contrast:.4f}")

# %%
# A few points of the curve
curve = bell_scan(rho, phases, DetectionModel.confusion(0.05))
for phi, value in list(zip(curve.phases, curve.values))[::10]:
    print(f"{phi:6.3f}  {value:+.4f}")
