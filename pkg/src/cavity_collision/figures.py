"""Parameter report, detuning sweep and Bell scan as plain tables."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from . import analytic
from .config import TWO_PI, RunConfig
from .dynamics import IntegrationAccuracyError, run_thermal_collision
from .measurement import BellCurve, apply_detection, bell_scan
from .model import joint_probabilities, v0_effective


def angle_report(config: RunConfig) -> dict[str, float]:
    """Derived parameters and mixing angles for the configured crossing."""
    setup = config.setup()
    v0 = v0_effective(config.v1, config.v2)
    point = analytic.eta_from_delta(TWO_PI * config.delta_a_hz, setup)
    theta_rabi = analytic.cavity_angle(setup, point.delta_a, v0)
    theta_eta = analytic.cavity_angle_from_eta(setup, point.eta, v0)
    k = setup.constants
    return {
        "alpha": k.alpha,
        "D_eg_Cm": setup.D_eg,
        "E0_V_per_m": setup.E0,
        "Omega_over_2pi_hz": setup.Omega / TWO_PI,
        "b_c_m": setup.b_c,
        "v0_m_per_s": v0,
        "delta_a_hz": config.delta_a_hz,
        "delta_b_hz": point.delta_b / TWO_PI,
        "eta": point.eta,
        "theta_c_from_rabi": theta_rabi,
        "theta_c_from_eta": theta_eta,
        "theta_c_relative_difference": abs(theta_rabi - theta_eta) / theta_eta,
        "theta_0_beam_diameter": analytic.free_space_angle(setup.n_principal, v0, 0.5e-3, k),
        "eta_quarter_pi": analytic.eta_for_angle(setup, math.pi / 4, v0),
        "delta_a_over_Omega": point.delta_a / setup.Omega,
    }


class SweepRow(NamedTuple):
    eta: float
    delta_a_hz: float
    theta_c_analytic: float
    p_eg_analytic: float
    p_ge_analytic: float
    p_ee_num: float
    p_eg_num: float
    p_ge_num: float
    p_gg_num: float
    norm_drift: float
    status: str = "ok"


SWEEP_UNITS = {
    "eta": "1",
    "delta_a_hz": "Hz",
    "theta_c_analytic": "rad",
    "norm_drift": "1",
}


def eta_grid(config: RunConfig) -> np.ndarray:
    grid = np.geomspace(config.eta_min, config.eta_max, config.n_points)
    if config.include_eta_zero_reference:
        grid = np.concatenate([[0.0], grid])
    return grid


def sweep_point(config: RunConfig, eta: float) -> SweepRow:
    """One detuning point: second-order prediction and thermal-averaged numerics.

    ``eta = 0`` is the zero-collision reference: coupling switched off, mode
    detuning taken from ``delta_a_hz``.
    """
    setup = config.setup()
    v0 = v0_effective(config.v1, config.v2)
    detection = config.detection()
    if eta == 0:
        delta_a = TWO_PI * config.delta_a_hz
        scenario = config.scenario(coupled=False)
    else:
        delta_a = analytic.delta_from_eta(eta, setup).delta_a
        scenario = config.scenario(delta_a=delta_a)
    theta = analytic.cavity_angle_from_eta(setup, eta, v0)
    ideal = analytic.perturbative_probabilities(theta, config.detection_scale)
    try:
        run = run_thermal_collision(scenario, setup)
    except IntegrationAccuracyError as exc:
        nan = float("nan")
        return SweepRow(eta, delta_a / TWO_PI, theta, ideal.p_eg, ideal.p_ge, nan, nan, nan, nan, exc.norm_drift,
                        "accuracy-error")
    num = apply_detection(joint_probabilities(run.rho), detection)
    return SweepRow(eta, delta_a / TWO_PI, theta, ideal.p_eg, ideal.p_ge, *num, run.norm_drift)


def fig2_sweep(config: RunConfig, threads: int = 1) -> list[SweepRow]:
    """Joint probabilities along the eta grid, rows in grid order."""
    grid = eta_grid(config)
    if threads <= 1:
        return [sweep_point(config, eta) for eta in grid]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda eta: sweep_point(config, eta), grid))


def crossing_eta(rows: list[SweepRow]) -> float | None:
    """Smallest eta where ``p_eg_num - p_ge_num`` changes sign (linear interpolation in log eta)."""
    pts = [(r.eta, r.p_eg_num - r.p_ge_num) for r in rows if r.eta > 0 and r.status == "ok"]
    for (e0, d0), (e1, d1) in zip(pts, pts[1:]):
        if d0 == 0:
            return e0
        if d0 * d1 < 0:
            x = math.log(e0) + (math.log(e1) - math.log(e0)) * d0 / (d0 - d1)
            return math.exp(x)
    return None


class BellScan(NamedTuple):
    curve: BellCurve
    eta: float
    delta_a_hz: float
    theta_c: float
    norm_drift: float


def fig3_scan(config: RunConfig) -> BellScan:
    """Bell signal over two periods of the analysis phase at the maximally entangling eta."""
    setup = config.setup()
    v0 = v0_effective(config.v1, config.v2)
    eta = config.bell_eta if config.bell_eta is not None else analytic.eta_for_angle(setup, math.pi / 4, v0)
    delta_a = analytic.delta_from_eta(eta, setup).delta_a
    run = run_thermal_collision(config.scenario(delta_a=delta_a), setup)
    phases = np.linspace(0.0, 4 * math.pi, config.n_phases)
    curve = bell_scan(run.rho, phases, config.detection())
    theta = analytic.cavity_angle_from_eta(setup, eta, v0)
    return BellScan(curve, eta, delta_a / TWO_PI, theta, run.norm_drift)


# -- CSV output ---------------------------------------------------------------


def _fmt(x) -> str:
    return x if isinstance(x, str) else repr(float(x))


def _header(config: RunConfig, title: str, extra: dict[str, str] | None = None) -> str:
    lines = [f"# {title}", f"# config_hash = {config.hash}"]
    for key, value in (extra or {}).items():
        lines.append(f"# {key} = {value}")
    lines += [f"# config: {line}" for line in config.serialize().splitlines()]
    return "\n".join(lines) + "\n"


def fig2_csv(config: RunConfig, rows: list[SweepRow]) -> str:
    out = io.StringIO()
    units = "; ".join(f"{k} [{SWEEP_UNITS.get(k, 'probability')}]" for k in SweepRow._fields if k != "status")
    out.write(_header(config, "joint detection probabilities versus eta", {"units": units}))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([*SweepRow._fields, "config_hash"])
    for row in rows:
        writer.writerow([_fmt(x) for x in row] + [config.hash])
    return out.getvalue()


def fig3_csv(config: RunConfig, scan: BellScan) -> str:
    c = scan.curve
    out = io.StringIO()
    out.write(_header(config, "Bell signal versus analysis phase", {
        "units": "phi [rad]; correlator [1]; fitted [1]",
        "eta": _fmt(scan.eta),
        "delta_a_hz": _fmt(scan.delta_a_hz),
        "theta_c": _fmt(scan.theta_c),
        "contrast": _fmt(c.contrast),
        "offset_phase": _fmt(c.offset_phase),
        "degenerate": str(c.degenerate).lower(),
        "norm_drift": _fmt(scan.norm_drift),
    }))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["phi", "correlator", "fitted", "config_hash"])
    for phi, value, fit in zip(c.phases, c.values, c.fitted()):
        writer.writerow([_fmt(phi), _fmt(value), _fmt(fit), config.hash])
    return out.getvalue()


def angle_text(config: RunConfig, report: dict[str, float]) -> str:
    lines = [f"# config_hash = {config.hash}"]
    lines += [f"{key} = {_fmt(value)}" for key, value in report.items()]
    return "\n".join(lines) + "\n"
