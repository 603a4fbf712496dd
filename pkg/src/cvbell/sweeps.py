"""Parameter sweeps over the squeezing parameter, maximization, figure presets and output."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from functools import partial

import numpy as np

from .bell import BellResult
from .errors import ConfigError, DomainError, NoClickError
from .gaussian import ChannelParams, twb_wigner
from .homodyne import HdSettings, bell_hd
from .ips import ips_coefficients, ips_from_coefficients, twin_beam_form
from .parity import DEFAULT_J, DpGeometry, bell_dp
from .pseudospin import PsAngles, bell_ps, e_ips, e_twb

TESTS = ("dp", "hd", "ps")
STATES = ("twb", "ips")

DEFAULT_ANGLES = {
    "hd": (0.0, math.pi / 2, -math.pi / 4, math.pi / 4),
    "ps": (0.0, math.pi / 2, math.pi / 4, -math.pi / 4),
}


@dataclass(frozen=True)
class SweepConfig:
    test: str
    state: str = "twb"
    r_min: float = 0.0
    r_max: float = 2.0
    r_step: float = 0.01
    gamma_t: float = 0.0
    n_th: float = 0.0
    tau: float = 0.9999
    J: float = DEFAULT_J
    eta_h: float = 1.0
    angles: tuple[float, ...] | None = None  # hd: (theta1, theta2, phi1, phi2); ps: (a1, a2, b1, b2)
    label: str = ""

    def validate(self) -> "SweepConfig":
        if self.test not in TESTS:
            raise ConfigError("test", f"must be one of {TESTS}, got {self.test!r}")
        if self.state not in STATES:
            raise ConfigError("state", f"must be one of {STATES}, got {self.state!r}")
        if not self.r_step > 0:
            raise ConfigError("r_step", f"must be > 0, got {self.r_step}")
        if not self.r_min >= 0:
            raise ConfigError("r_min", f"must be >= 0, got {self.r_min}")
        if not self.r_max >= self.r_min:
            raise ConfigError("r_max", f"empty grid: r_max={self.r_max} < r_min={self.r_min}")
        for name in ("gamma_t", "n_th"):
            if not getattr(self, name) >= 0:
                raise ConfigError(name, f"must be >= 0, got {getattr(self, name)}")
        if not 0 < self.tau <= 1:
            raise ConfigError("tau", f"must lie in (0, 1], got {self.tau}")
        if not self.J > 0:
            raise ConfigError("J", f"must be > 0, got {self.J}")
        if not 0 < self.eta_h <= 1:
            raise ConfigError("eta_h", f"must lie in (0, 1], got {self.eta_h}")
        if self.angles is not None and len(self.angles) != 4:
            raise ConfigError("angles", f"expected 4 angles, got {len(self.angles)}")
        return self

    def r_grid(self) -> np.ndarray:
        self.validate()
        n = int(math.floor((self.r_max - self.r_min) / self.r_step + 1e-9)) + 1
        return np.round(self.r_min + self.r_step * np.arange(n), 12)

    def echo(self) -> dict:
        d = asdict(self)
        d["angles"] = list(self.resolved_angles()) if self.test != "dp" else None
        return d

    def resolved_angles(self) -> tuple[float, ...]:
        return tuple(self.angles) if self.angles is not None else DEFAULT_ANGLES.get(self.test, ())


def evaluate(config: SweepConfig, r: float) -> BellResult:
    """Bell parameter of ``config``'s test on its state at squeezing ``r``."""
    ch = ChannelParams.symmetric(config.gamma_t, config.n_th)
    W = twb_wigner(r, ch)
    coeffs = p11 = None
    if config.state == "ips":
        coeffs = ips_coefficients(*twin_beam_form(W), config.tau)
        W, p11 = ips_from_coefficients(coeffs)
    if config.test == "dp":
        res = bell_dp(W, DpGeometry.from_j(config.J))
    elif config.test == "hd":
        t1, t2, p1, p2 = config.resolved_angles()
        res = bell_hd(W, HdSettings(t1, t2, p1, p2, config.eta_h))
    else:
        angles = PsAngles(*config.resolved_angles())
        if coeffs is not None:
            res = bell_ps(partial(e_ips, coeffs, p11), angles)
        elif config.gamma_t == 0:
            # channel is the identity whatever n_th; the closed form stays exact at large r
            res = bell_ps(partial(e_twb, r), angles)
        else:
            res = bell_ps(W, angles)
    params = {**config.echo(), "r": float(r)}
    if p11 is not None:
        params["p11"] = p11
    return BellResult(config.test, res.value, params)


def oracle_value(config: SweepConfig, r: float, spec=None) -> float:
    """The same Bell parameter from the Fock-truncation oracle."""
    from .oracle.fock import FockSpec, FockState, converged

    spec = spec or FockSpec()

    def value(cutoff: int) -> float:
        s = FockState.twin_beam(r, config.gamma_t, config.n_th, None, cutoff, spec.pad)
        if config.state == "ips":
            s = s.subtract(config.tau)[0]
        if config.test == "dp":
            g = DpGeometry.from_j(config.J)
            P = s.parity
            return P(g.alpha1, g.beta1) + P(g.alpha2, g.beta1) + P(g.alpha1, g.beta2) - P(g.alpha2, g.beta2)
        t1, t2, p1, p2 = config.resolved_angles()
        if config.test == "hd":
            if config.eta_h < 1:
                s = s.attenuate(config.eta_h)
            E = s.sign
        else:
            zz, xx = s.zz(), s.xx()
            E = lambda a, b: math.cos(a) * math.cos(b) * zz + math.sin(a) * math.sin(b) * xx  # noqa: E731
        return E(t1, p1) + E(t1, p2) + E(t2, p1) - E(t2, p2)

    return converged(value, spec)


def _row(config: SweepConfig, r: float, oracle: bool) -> BellResult:
    res = evaluate(config, r)
    if oracle:
        res.parameters["oracle_value"] = oracle_value(config, r)
    return res


def sweep(config: SweepConfig, *, workers: int = 1, oracle: bool = False) -> list[BellResult]:
    """One :class:`BellResult` per grid point, in grid order regardless of ``workers``."""
    grid = config.r_grid()
    f = partial(_row, config, oracle=oracle)
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(f, grid, chunksize=max(1, len(grid) // (4 * workers))))
    return [f(r) for r in grid]


INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section_max(f, a: float, b: float, tol: float = 1e-6) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


def maximize_over_r(config: SweepConfig, tol: float = 1e-6) -> tuple[float, BellResult]:
    """Grid scan on ``config.r_grid()`` followed by golden-section refinement around the best point."""

    def objective(r: float) -> float:
        try:
            return evaluate(config, r).value
        except NoClickError:
            return -math.inf

    grid = config.r_grid()
    values = np.array([objective(r) for r in grid])
    if not np.isfinite(values).any():
        raise DomainError("no grid point admits a double click")
    i = int(np.argmax(values))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    r_star, v_star = (grid[i], values[i]) if hi == lo else golden_section_max(objective, lo, hi, tol)
    if v_star < values[i]:
        r_star = grid[i]
    return float(r_star), evaluate(config, r_star)


# -- presets -------------------------------------------------------------------

def _curves(base: SweepConfig, **variants) -> list[SweepConfig]:
    (key, values), = variants.items()
    return [replace(base, **{key: v}, label=f"{base.state} {key}={v}") for v in values]


def _preset_table() -> dict[str, tuple[str, list[SweepConfig]]]:
    dp = SweepConfig("dp", r_min=0.05, r_max=2.0, J=1.6e-3, tau=0.9999)
    dp_curves = []
    for state in STATES:
        base = replace(dp, state=state)
        dp_curves.append(replace(base, label=f"{state} ideal"))
        dp_curves += _curves(replace(base, gamma_t=0.01), n_th=(0.0, 0.05, 0.1, 0.2))

    def hd(eta):
        base = SweepConfig("hd", "ips", r_min=0.05, r_max=2.0, tau=0.99, eta_h=eta)
        return [replace(base, label="ips ideal")] + _curves(replace(base, gamma_t=0.05), n_th=(0.0, 0.05, 0.1, 0.2))

    taus = (0.9999, 0.99, 0.9, 0.8)
    ps = SweepConfig("ps", r_min=0.05, r_max=5.0)

    def ps_tau(gamma_t):
        base = replace(ps, gamma_t=gamma_t)
        return [replace(base, label="twb")] + _curves(replace(base, state="ips"), tau=taus)

    ps_gamma = [c for st in STATES for c in _curves(replace(ps, state=st), gamma_t=(0.0, 0.01, 0.05, 0.1))]
    ps_thermal = [
        c for st in STATES for c in _curves(replace(ps, state=st, gamma_t=0.01), n_th=(0.0, 0.01, 0.1, 0.2))
    ]
    return {
        "fig-dp": ("displaced parity, J=1.6e-3, tau=0.9999; ideal and gamma_t=0.01 with N=0..0.2", dp_curves),
        "fig-hd-eta1": ("homodyne, tau=0.99, eta_H=1; ideal and gamma_t=0.05 with N=0..0.2", hd(1.0)),
        "fig-hd-eta09": ("homodyne, tau=0.99, eta_H=0.9; ideal and gamma_t=0.05 with N=0..0.2", hd(0.9)),
        "fig-ps-ideal": ("pseudospin, no noise; TWB and IPS for tau=0.9999..0.8", ps_tau(0.0)),
        "fig-ps-tau": ("pseudospin, gamma_t=0.01, N=0; TWB and IPS for tau=0.9999..0.8", ps_tau(0.01)),
        "fig-ps-gamma": ("pseudospin, N=0, tau=0.9999; gamma_t=0..0.1", ps_gamma),
        "fig-ps-thermal": ("pseudospin, gamma_t=0.01, tau=0.9999; N=0..0.2", ps_thermal),
    }


PRESETS = _preset_table()


def run_preset(name: str, *, workers: int = 1, oracle: bool = False) -> list[tuple[SweepConfig, list[BellResult]]]:
    if name not in PRESETS:
        raise ConfigError("preset", f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return [(cfg, sweep(cfg, workers=workers, oracle=oracle)) for cfg in PRESETS[name][1]]


# -- serialization ---------------------------------------------------------------

CSV_FIELDS = ("label", "test", "state", "gamma_t", "n_th", "tau", "J", "eta_h", "r", "value", "violated")


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def _rounded(x: float) -> float:
    return float(fmt(x))


def to_csv(curves: list[tuple[SweepConfig, list[BellResult]]]) -> str:
    with_oracle = any("oracle_value" in r.parameters for _, rows in curves for r in rows)
    fields = CSV_FIELDS + (("oracle_value",) if with_oracle else ())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for cfg, rows in curves:
        for res in rows:
            line = [cfg.label, cfg.test, cfg.state, fmt(cfg.gamma_t), fmt(cfg.n_th), fmt(cfg.tau),
                    fmt(cfg.J), fmt(cfg.eta_h), fmt(res.parameters["r"]), fmt(res.value), int(res.violated)]
            if with_oracle:
                line.append(fmt(res.parameters["oracle_value"]))
            w.writerow(line)
    return buf.getvalue()


def sweep_json(cfg: SweepConfig, rows: list[BellResult]) -> dict:
    out_rows = []
    for res in rows:
        row = {"r": _rounded(res.parameters["r"]), "value": _rounded(res.value), "violated": res.violated}
        if "oracle_value" in res.parameters:
            row["oracle_value"] = _rounded(res.parameters["oracle_value"])
        out_rows.append(row)
    return {"test": cfg.test, "parameters": cfg.echo(), "rows": out_rows}


def to_json(curves: list[tuple[SweepConfig, list[BellResult]]], preset: str | None = None) -> str:
    if preset is None and len(curves) == 1:
        doc = sweep_json(*curves[0])
    else:
        doc = {"preset": preset, "curves": [sweep_json(c, rows) for c, rows in curves]}
    return json.dumps(doc, indent=2) + "\n"
