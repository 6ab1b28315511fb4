"""
Thermal photons
===============

The emission-first and absorption-first virtual paths cancel to first
order, so a few thermal photons hardly change the exchange at small
``eta``. At large ``eta`` the Fock-state dependence shows up.
"""

# %%
import numpy as np

from cavity_collision import analytic
from cavity_collision.dynamics import collide, run_thermal_collision, thermal_weight
from cavity_collision.model import CollisionScenario, PhysicalSetup, joint_probabilities

setup = PhysicalSetup()
print([round(thermal_weight(n, 0.25), 5) for n in range(5)])

# %%
for eta in (1e5, 3.4e5, 1e6):
    sc = CollisionScenario(delta_a=analytic.delta_from_eta(eta, setup).delta_a)
    fock = [joint_probabilities(collide(sc, setup, (n, 0))).p_ge for n in range(3)]
    run = run_thermal_collision(sc, setup)
    print(f"eta = {eta:.2g}: p_ge for N = 0, 1, 2 -> {np.round(fock, 4)}, thermal -> "
          f"{joint_probabilities(run.rho).p_ge:.4f}")

# %%
# Truncation check: a larger dynamical Fock space changes nothing visible
sc = CollisionScenario(delta_a=analytic.delta_from_eta(1e6, setup).delta_a)
a = joint_probabilities(run_thermal_collision(sc, setup).rho)
b = joint_probabilities(run_thermal_collision(CollisionScenario(**{**sc.__dict__, "n_fock_dyn": 10}), setup).rho)
print(np.abs(np.subtract(a, b)).max())
