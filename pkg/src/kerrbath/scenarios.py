"""Scenario presets and the CSV/JSON writers behind the CLI."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import liouville, oracles, quantum, timescales
from .model import ModelParams
from .newton import newton_trajectory

SCENARIOS = (
    "fig1a",
    "fig1b",
    "fig2a",
    "fig2b",
    "fig3a",
    "fig3b",
    "fig3c",
    "timescales",
    "hbar-limit",
    "oracle-check",
    "sweep",
)

# R0^T R0 / hbar = 8, g_s / Omega = 5 on the open presets.
CLOSED = ModelParams(hbar=1.0, omega_s=1.0, g_s=0.5, omega_bath=1.0, capital_omega=0.0, n_modes=0, beta_hbar_omega=0.1, r0=(2.0, 2.0))
OPEN_HOT = CLOSED.replace(capital_omega=0.1, n_modes=50, beta_hbar_omega=0.1)
OPEN_COLD = OPEN_HOT.replace(beta_hbar_omega=1.0)
ORACLE = OPEN_HOT.replace(n_modes=2, beta_hbar_omega=1.0)

FIG_GRID = (0.0, 4.0 * math.pi, 2000)
FIG3_GRID = (0.0, 4.0 * math.pi, 4000)

PRESETS: dict[str, tuple[ModelParams, tuple[float, float, int]]] = {
    "fig1a": (CLOSED, FIG_GRID),
    "fig1b": (OPEN_HOT, FIG_GRID),
    "fig2a": (CLOSED, FIG_GRID),
    "fig2b": (OPEN_HOT, FIG_GRID),
    "fig3a": (CLOSED, FIG3_GRID),
    "fig3b": (OPEN_COLD, FIG3_GRID),
    "fig3c": (OPEN_HOT, FIG3_GRID),
    "timescales": (OPEN_HOT, FIG_GRID),
    "hbar-limit": (OPEN_HOT, (0.0, 1.0, 2)),
    "oracle-check": (ORACLE, (0.0, 1.0, 10)),
    "sweep": (OPEN_HOT, (0.05, 3.0, 20)),
}

DELTA_S_OVER_HBAR = 1.0
DEFAULT_RESOLUTION_M = 2.0


@dataclass(frozen=True)
class Scenario:
    name: str
    params: ModelParams
    tau_grid: tuple[float, float, int]
    out_dir: Path = Path(".")
    seed: int = oracles.MonteCarloConfig.rng_seed
    samples: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.name!r}; choose from {', '.join(SCENARIOS)}")
        start, stop, count = self.tau_grid
        if int(count) != count or count < 2:
            raise ValueError(f"grid count must be an integer >= 2, got {count}")
        if not stop > start >= 0:
            raise ValueError(f"grid needs stop > start >= 0, got {start}:{stop}")

    @property
    def grid(self) -> np.ndarray:
        start, stop, count = self.tau_grid
        return np.linspace(start, stop, int(count))

    @classmethod
    def preset(cls, name: str, **overrides) -> "Scenario":
        if name not in PRESETS:
            raise ValueError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}")
        params, grid = PRESETS[name]
        overrides.setdefault("params", params)
        overrides.setdefault("tau_grid", grid)
        if overrides["params"] is None:
            overrides["params"] = params
        if overrides["tau_grid"] is None:
            overrides["tau_grid"] = grid
        return cls(name=name, **overrides)


def parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must look like start:stop:count, got {text!r}")
    count = float(parts[2])
    if not count.is_integer():
        raise ValueError(f"grid count must be an integer, got {parts[2]!r}")
    return float(parts[0]), float(parts[1]), int(count)


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def derived_constants(params: ModelParams) -> dict:
    tau_dq, tau_dl = timescales.decoherence_times(params)
    bound = None
    if not params.is_closed:
        bound = timescales.temperature_bound(params).__dict__.copy()
    return {
        "g1": params.spectral.g1_sum,
        "g2": params.spectral.g2_norm,
        "z": params.z,
        "tau_dq": tau_dq,
        "tau_dl": tau_dl,
        "tau_r": timescales.REVIVAL_TIME,
        "temperature_bound": bound,
    }


# -- per-scenario tables -----------------------------------------------------------


def _fig1(sc: Scenario):
    p, tau = sc.params, sc.grid
    h = p.hbar
    rn = newton_trajectory(p, tau=tau)
    rq = quantum.quantum_centroid(p, tau)
    rl = liouville.liouville_centroid(p, tau)
    cols = [tau, (rn**2).sum(-1) / h, (rq**2).sum(-1) / h, (rl**2).sum(-1) / h]
    return ["tau", "rn_sq_over_hbar", "rq_sq_over_hbar", "rl_sq_over_hbar"], zip(*cols), {}


def _fig2(sc: Scenario):
    p, tau = sc.params, sc.grid
    h = p.hbar
    vq = quantum.quantum_variances(p, tau) / h
    vl = liouville.liouville_variances(p, tau) / h
    cols = [tau, vq[:, 0], vq[:, 1], vq.mean(-1), vl[:, 0], vl[:, 1], vl.mean(-1)]
    header = ["tau", "var_q_quantum", "var_p_quantum", "mean_var_quantum", "var_q_liouville", "var_p_liouville", "mean_var_liouville"]
    return header, zip(*cols), {}


def _fig3(sc: Scenario):
    p, tau = sc.params, sc.grid
    comp = timescales.divergence_components(p, tau)
    d = comp.reduced / p.hbar
    cols = [tau, d, np.full_like(tau, DELTA_S_OVER_HBAR)]
    info = {
        "max_d_over_hbar": float(d.max()),
        "delta_s_over_hbar": DELTA_S_OVER_HBAR,
        "below_resolution": bool(d.max() < DELTA_S_OVER_HBAR),
        "d_route_max_disagreement": comp.max_disagreement(),
    }
    return ["tau", "d_over_hbar", "delta_s_over_hbar"], zip(*cols), {"divergence": info}


def _timescales(sc: Scenario):
    rep = timescales.timescale_report(sc.params, sc.extra.get("resolution_m", DEFAULT_RESOLUTION_M)).to_dict()
    header = list(rep)
    return header, [[rep[k] for k in header]], {}


def _hbar_limit(sc: Scenario):
    p = sc.params
    t = float(sc.extra.get("t", 1.0))
    closed = quantum.hbar_limit_check(p.replace(capital_omega=0.0, n_modes=0), t)
    rows = [[h, closed.gap_over_r0[i]] for i, h in enumerate(closed.hbars)]
    info = {"closed": closed.to_dict()}
    header = ["hbar", "gap_closed_over_r0"]
    if not p.is_closed:
        opened = quantum.hbar_limit_check(p, t)
        header += ["gap_open_over_r0", "c_modulus_open"]
        for i, row in enumerate(rows):
            row += [opened.gap_over_r0[i], opened.c_modulus[i]]
        info["open"] = opened.to_dict()
    return header, rows, {"hbar_limit": info}


def _oracle_check(sc: Scenario):
    p, tau = sc.params, sc.grid
    rows = []
    worst = {"centroid": 0.0, "quadratic": 0.0, "variances": 0.0, "density_matrix": 0.0}
    for x in tau:
        closed = quantum.quantum_moments(p, x)
        rho_fock = oracles.fock_oracle_density(p, x)
        ref = rho_fock.moments()
        rho = quantum.reduced_density_matrix(p, x, rho_fock.n_max)
        errs = {
            "centroid": float(np.max(np.abs(closed.centroid - ref.centroid))),
            "quadratic": float(np.max(np.abs(closed.quadratic - ref.quadratic))),
            "variances": float(np.max(np.abs(closed.variances - ref.variances))),
            "density_matrix": float(np.max(np.abs(rho.entries - rho_fock.entries))),
        }
        for k, v in errs.items():
            worst[k] = max(worst[k], v)
        rows.append([x, *errs.values()])
    report = {"fock": {"max_abs_error": worst, "max_overall": max(worst.values()), "n_modes": p.n_modes}}
    if sc.samples:
        cfg = oracles.MonteCarloConfig(n_samples=sc.samples, rng_seed=sc.seed, antithetic=True)
        mc = oracles.montecarlo_liouville_moments(p, tau, cfg)
        lm = liouville.liouville_moments(p, tau)
        zmax = {}
        for name in ("centroid", "quadratic", "variances"):
            diff = np.abs(getattr(lm, name) - getattr(mc, name))
            se = getattr(mc, name + "_stderr")
            with np.errstate(divide="ignore", invalid="ignore"):
                z = np.where(se > 0, diff / se, 0.0)
            zmax[name] = float(z.max())
        report["montecarlo"] = {"n_samples": sc.samples, "seed": sc.seed, "max_abs_z": zmax}
    header = ["tau", "err_centroid", "err_quadratic", "err_variances", "err_density_matrix"]
    return header, rows, {"oracle": report}


def _sweep(sc: Scenario):
    p = sc.params
    m = sc.extra.get("resolution_m", DEFAULT_RESOLUTION_M)
    rows, header = [], None
    for bho in sc.grid:
        q = p.replace(beta_hbar_omega=float(bho))
        rep = timescales.timescale_report(q, m).to_dict()
        if header is None:
            header = ["beta_hbar_omega", "capital_omega", "g_s", "n_modes", *rep]
        rows.append([q.beta_hbar_omega, q.capital_omega, q.g_s, q.n_modes, *rep.values()])
    return header, rows, {}


_TABLES = {
    "fig1a": _fig1,
    "fig1b": _fig1,
    "fig2a": _fig2,
    "fig2b": _fig2,
    "fig3a": _fig3,
    "fig3b": _fig3,
    "fig3c": _fig3,
    "timescales": _timescales,
    "hbar-limit": _hbar_limit,
    "oracle-check": _oracle_check,
    "sweep": _sweep,
}


def run_scenario(sc: Scenario) -> list[Path]:
    """Write ``<name>.csv`` and ``<name>.json`` into ``sc.out_dir``."""
    out = Path(sc.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    header, rows, info = _TABLES[sc.name](sc)
    csv_path = out / f"{sc.name}.csv"
    write_csv(csv_path, header, rows)
    doc = {
        "scenario": sc.name,
        "params": sc.params.to_dict(),
        "tau_grid": list(sc.tau_grid),
        "derived": derived_constants(sc.params),
        "oracle": info.pop("oracle", {}),
        **info,
        "csv_files": [csv_path.name],
    }
    try:
        doc["timescales"] = timescales.timescale_report(sc.params, sc.extra.get("resolution_m", DEFAULT_RESOLUTION_M)).to_dict()
    except ValueError as exc:
        doc["timescales"] = {"error": str(exc)}
    json_path = out / f"{sc.name}.json"
    json_path.write_text(json.dumps(_json_safe(doc), indent=2, sort_keys=False) + "\n")
    return [csv_path, json_path]
