"""Parameter sweeps over (p, mu, r), CSV output, table validation and figure presets."""
from __future__ import annotations

import csv
import enum
import io
import json
import logging
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .channels import ChannelKind, apply_sequential, kraus_set
from .discord import (
    DISCREPANT_ROWS,
    TABLES,
    gqd_closed_form,
    gqd_entropic,
    gqd_hs,
    gqd_hs_at,
    global_qd,
    sigma_z_profile,
)
from .errors import ArgumentError, ConfigError
from .optimize import OptimizerConfig
from .states import R_MAX, StateFamily, StateKind

log = logging.getLogger(__name__)

CSV_HEADER = ["family", "channel", "p", "mu", "r", "measure", "value", "converged", "evaluations"]
TABLE_TOLERANCE = 1e-6


class Measure(str, enum.Enum):
    QD = "qd"
    GQD_HS = "gqd-hs"
    GQD_ENTROPIC = "gqd-entropic"
    GQD_CLOSED = "gqd-closed"

    @classmethod
    def parse(cls, name: str) -> "Measure":
        key = name.strip().lower().replace("_", "-")
        try:
            return cls(key)
        except ValueError:
            raise ConfigError(f"unknown measure {name!r}") from None


@dataclass(frozen=True)
class SweepConfig:
    family: StateKind = StateKind.WERNER_GHZ
    n_qubits: int = 3
    mu: float | None = 0.5
    channels: tuple[ChannelKind, ...] = tuple(ChannelKind)
    p_grid: tuple[float, ...] = tuple(np.linspace(0.0, 1.0, 11).tolist())
    r_grid: tuple[float, ...] | None = None
    measures: tuple[Measure, ...] = (Measure.QD,)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    out: str | None = None
    workers: int = 1

    def validate(self) -> "SweepConfig":
        try:
            kind = StateKind(self.family)
        except ValueError:
            raise ConfigError(f"unknown state family {self.family!r}") from None
        if not self.channels:
            raise ConfigError("at least one channel is required")
        if not self.measures:
            raise ConfigError("at least one measure is required")
        if not self.p_grid:
            raise ConfigError("p grid is empty")
        if any(not 0.0 <= p <= 1.0 for p in self.p_grid):
            raise ConfigError("p grid values must lie in [0, 1]")
        if self.workers < 1:
            raise ConfigError("workers must be positive")
        if kind is StateKind.RINDLER_GHZ:
            if not self.r_grid:
                raise ConfigError("r grid is required for the Rindler family")
            if any(not 0.0 <= r <= R_MAX + 1e-12 for r in self.r_grid):
                raise ConfigError("r grid values must lie in [0, pi/4]")
            if self.n_qubits != 3:
                raise ConfigError("the Rindler family has 3 qubits")
        else:
            if self.mu is None or not 0.0 <= self.mu <= 1.0:
                raise ConfigError("mu in [0, 1] is required for the Werner-GHZ family")
            if not 2 <= self.n_qubits <= 8:
                raise ConfigError("n must be between 2 and 8")
        return replace(self, family=kind)

    @property
    def is_rindler(self) -> bool:
        return StateKind(self.family) is StateKind.RINDLER_GHZ

    def state_points(self) -> list[StateFamily]:
        if self.is_rindler:
            return [StateFamily(StateKind.RINDLER_GHZ, 3, r=r) for r in self.r_grid]
        return [StateFamily(StateKind.WERNER_GHZ, self.n_qubits, mu=self.mu)]


@dataclass(frozen=True)
class SweepRow:
    family: str
    channel: str
    p: float
    mu: float | None
    r: float | None
    measure: str
    value: float
    converged: bool
    evaluations: int


def _task(args) -> list[SweepRow]:
    state, kind, p, measures, optimizer = args
    rho = apply_sequential(kraus_set(kind, p), state.build())
    rows = []
    for m in measures:
        if m is Measure.GQD_CLOSED:
            value, conv, evals = gqd_closed_form(state, kind, p), True, 0
        else:
            fn = {Measure.QD: global_qd, Measure.GQD_HS: gqd_hs, Measure.GQD_ENTROPIC: gqd_entropic}[m]
            res = fn(rho, optimizer)
            value, conv, evals = res.value, res.converged, res.evaluations
        rows.append(
            SweepRow(state.label, kind.value, p, state.mu, state.r, m.value, value, conv, evals)
        )
    return rows


def _closed_supported(state: StateFamily, kind: ChannelKind) -> bool:
    table = TABLES.get(state.label)
    return table is not None and kind in table[1]


def run_sweep(config: SweepConfig, warnings: list[str] | None = None) -> list[SweepRow]:
    """One row per (channel, grid point, measure), in that order.

    Closed-form rows without a table entry are skipped; a message is appended
    to ``warnings`` (and logged) for each skipped row.
    """
    config = config.validate()
    tasks = []
    for kind in config.channels:
        for state in config.state_points():
            for p in config.p_grid:
                measures = []
                for m in config.measures:
                    if m is Measure.GQD_CLOSED and not _closed_supported(state, kind):
                        msg = f"no closed form for {state.label}/{kind.value}; row omitted (p={p:g})"
                        log.warning(msg)
                        if warnings is not None:
                            warnings.append(msg)
                        continue
                    measures.append(m)
                tasks.append((state, kind, float(p), tuple(measures), config.optimizer))
    if config.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            # map() preserves submission order, which fixes the row order
            chunks = list(pool.map(_task, tasks))
    else:
        chunks = [_task(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


def _fmt(x: float | None) -> str:
    if x is None:
        return ""
    return format(float(x) + 0.0, ".12g")


def _fmt_value(x: float) -> str:
    return format(float(x) + 0.0, ".12f")


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(
            [
                r.family,
                r.channel,
                _fmt(r.p),
                _fmt(r.mu),
                _fmt(r.r),
                r.measure,
                _fmt_value(r.value),
                "true" if r.converged else "false",
                r.evaluations,
            ]
        )
    return buf.getvalue()


def emit_csv(rows: Sequence[SweepRow], path) -> Path:
    path = Path(path)
    path.write_text(rows_to_csv(rows), encoding="utf-8")
    return path


def read_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


# ---------------------------------------------------------------------------
# closed-form table validation

VALIDATION_P = tuple(np.round(np.linspace(0.0, 1.0, 11), 12).tolist())
VALIDATION_MU = (0.25, 0.5, 1.0)
VALIDATION_R = tuple(k * math.pi / 16 for k in range(5))


@dataclass(frozen=True)
class ValidationRow:
    table: str
    family: str
    channel: str
    p: float
    mu: float | None
    r: float | None
    closed: float
    numerical: float
    sigma_z: float
    difference: float
    status: str


def _validation_states(label: str) -> list[StateFamily]:
    if label == "rindler":
        return [StateFamily(StateKind.RINDLER_GHZ, 3, r=r) for r in VALIDATION_R]
    n = int(label.rsplit("-", 1)[1])
    return [StateFamily(StateKind.WERNER_GHZ, n, mu=mu) for mu in VALIDATION_MU]


def validate_tables(
    families: Sequence[str] = ("werner-ghz-3", "werner-ghz-6", "rindler"),
    p_grid: Sequence[float] = VALIDATION_P,
    optimizer: OptimizerConfig | None = None,
) -> list[ValidationRow]:
    """Compare every closed-form table row with the numerically minimized distance.

    The sigma_z column is the distance at the all-sigma_z measurement, which
    helps tell an optimizer miss from a closed form that is not a minimum.
    """
    out = []
    for label in families:
        if label not in TABLES:
            raise ConfigError(f"no closed-form table for {label}")
        name, table = TABLES[label]
        for kind in table:
            for state in _validation_states(label):
                base = state.build()
                for p in p_grid:
                    rho = apply_sequential(kraus_set(kind, p), base)
                    closed = gqd_closed_form(state, kind, p)
                    num = gqd_hs(rho, optimizer).value
                    zval = gqd_hs_at(rho, sigma_z_profile(rho.n_qubits))
                    diff = abs(closed - num)
                    if (label, kind) in DISCREPANT_ROWS:
                        status = "DISCREPANT-BY-DESIGN"
                    else:
                        status = "PASS" if diff <= TABLE_TOLERANCE else "FAIL"
                    out.append(
                        ValidationRow(
                            name, label, kind.value, float(p), state.mu, state.r,
                            closed, num, zval, diff, status,
                        )
                    )
    return out


def validation_text(rows: Sequence[ValidationRow]) -> str:
    head = f"{'table':<30} {'channel':<18} {'p':>5} {'mu':>5} {'r':>7} " \
           f"{'closed':>15} {'numerical':>15} {'sigma_z':>15} {'|diff|':>10}  status"
    lines = [head, "-" * len(head)]
    for v in rows:
        lines.append(
            f"{v.table:<30} {v.channel:<18} {v.p:>5.2f} "
            f"{'' if v.mu is None else format(v.mu, '.2f'):>5} "
            f"{'' if v.r is None else format(v.r, '.4f'):>7} "
            f"{v.closed:>15.10f} {v.numerical:>15.10f} {v.sigma_z:>15.10f} "
            f"{v.difference:>10.2e}  {v.status}"
        )
    counts = {s: sum(v.status == s for v in rows) for s in ("PASS", "FAIL", "DISCREPANT-BY-DESIGN")}
    lines.append("")
    lines.append(", ".join(f"{k}: {n}" for k, n in counts.items()) + f"  (tolerance {TABLE_TOLERANCE:g})")
    return "\n".join(lines) + "\n"


def emit_validation(rows: Sequence[ValidationRow], path) -> tuple[Path, Path]:
    """Write the plain-text report and its CSV twin (same stem, ``.csv``)."""
    path = Path(path)
    path.write_text(validation_text(rows), encoding="utf-8")
    twin = path.with_suffix(".csv")
    if twin == path:
        twin = path.with_name(path.name + ".csv")
    with open(twin, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["table", "family", "channel", "p", "mu", "r", "closed", "numerical",
                    "sigma_z", "difference", "status"])
        for v in rows:
            w.writerow([v.table, v.family, v.channel, _fmt(v.p), _fmt(v.mu), _fmt(v.r),
                        _fmt(v.closed), _fmt(v.numerical), _fmt(v.sigma_z),
                        _fmt(v.difference), v.status])
    return path, twin


# ---------------------------------------------------------------------------
# config parsing and figure presets

_PI_TERM = re.compile(r"^(?:([0-9.]+)\s*\*?\s*)?pi(?:\s*/\s*([0-9.]+))?$")


def parse_number(text) -> float:
    """Parse a float, also accepting ``pi``, ``pi/4``, ``3*pi/16``."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip().lower()
    try:
        return float(s)
    except ValueError:
        pass
    m = _PI_TERM.match(s)
    if not m:
        raise ConfigError(f"cannot parse number {text!r}")
    num = float(m.group(1)) if m.group(1) else 1.0
    den = float(m.group(2)) if m.group(2) else 1.0
    return num * math.pi / den


def parse_grid(spec) -> tuple[float, ...]:
    """``start:stop:count`` (inclusive linspace), a comma list, or a list of numbers."""
    if isinstance(spec, (list, tuple)):
        return tuple(parse_number(x) for x in spec)
    s = str(spec).strip()
    if ":" in s:
        parts = s.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid {spec!r} is not start:stop:count")
        start, stop = parse_number(parts[0]), parse_number(parts[1])
        try:
            count = int(parts[2])
        except ValueError:
            raise ConfigError(f"grid count in {spec!r} is not an integer") from None
        if count < 1:
            raise ConfigError("grid count must be positive")
        grid = np.linspace(start, stop, count)
        # 0.1*k style values print cleanly and compare exactly with user input
        return tuple(float(x) for x in np.round(grid, 14))
    return tuple(parse_number(x) for x in s.split(",") if x.strip())


def parse_list(spec, parse) -> tuple:
    items = spec if isinstance(spec, (list, tuple)) else str(spec).split(",")
    return tuple(parse(str(x)) for x in items if str(x).strip())


def config_from_mapping(data: dict, base: SweepConfig | None = None) -> SweepConfig:
    """Build a SweepConfig from a flat mapping (config file or parsed flags)."""
    cfg = base or SweepConfig()
    updates = {}
    aliases = {"n": "n_qubits", "p-grid": "p_grid", "r-grid": "r_grid"}
    for key, value in data.items():
        if value is None:
            continue
        key = aliases.get(key, key)
        if key == "family":
            try:
                updates["family"] = StateKind(str(value).strip().lower())
            except ValueError:
                raise ConfigError(f"unknown family {value!r}") from None
        elif key == "n_qubits":
            updates[key] = int(value)
        elif key == "mu":
            updates[key] = parse_number(value)
        elif key == "channels":
            try:
                updates[key] = parse_list(value, ChannelKind.parse)
            except ArgumentError as exc:
                raise ConfigError(str(exc)) from None
        elif key in ("p_grid", "r_grid"):
            updates[key] = parse_grid(value)
        elif key == "measures":
            updates[key] = parse_list(value, Measure.parse)
        elif key == "optimizer":
            opts = dict(value)
            if "grid_points_per_angle" in opts:
                opts["grid_points_per_angle"] = tuple(opts["grid_points_per_angle"])
            try:
                updates[key] = replace(cfg.optimizer, **opts)
            except (TypeError, ArgumentError) as exc:
                raise ConfigError(f"bad optimizer settings: {exc}") from None
        elif key in ("out", "workers"):
            updates[key] = value if key == "out" else int(value)
        else:
            raise ConfigError(f"unknown config key {key!r}")
    return replace(cfg, **updates)


def load_config_file(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return data


def config_to_mapping(cfg: SweepConfig) -> dict:
    d = asdict(cfg)
    d["family"] = StateKind(cfg.family).value
    d["channels"] = [c.value for c in cfg.channels]
    d["measures"] = [m.value for m in cfg.measures]
    d["optimizer"]["grid_points_per_angle"] = list(cfg.optimizer.grid_points_per_angle)
    return d


P_FINE = tuple(np.round(np.linspace(0.0, 1.0, 101), 12).tolist())
P_COARSE = tuple(np.round(np.linspace(0.0, 1.0, 21), 12).tolist())
R_33 = tuple(np.linspace(0.0, R_MAX, 33).tolist())
R_FIVE = VALIDATION_R
WERNER = StateKind.WERNER_GHZ
RINDLER = StateKind.RINDLER_GHZ
ALL = tuple(ChannelKind)

FIGURES = {
    "fig1a": SweepConfig(WERNER, 3, 0.5, ALL, P_FINE, None, (Measure.QD,)),
    "fig1b": SweepConfig(WERNER, 6, 0.5, ALL, P_FINE, None, (Measure.QD,)),
    "fig2a": SweepConfig(WERNER, 3, 0.5, ALL, P_FINE, None, (Measure.GQD_HS, Measure.GQD_CLOSED)),
    "fig2b": SweepConfig(WERNER, 6, 0.5, ALL, P_FINE, None, (Measure.GQD_HS, Measure.GQD_CLOSED)),
    "fig3a": SweepConfig(RINDLER, 3, None, (ChannelKind.AMPLITUDE_DAMPING,), P_COARSE, R_FIVE,
                         (Measure.GQD_HS, Measure.GQD_CLOSED)),
    "fig3b": SweepConfig(RINDLER, 3, None, (ChannelKind.BIT_PHASE_FLIP,), P_COARSE, R_FIVE,
                         (Measure.GQD_HS, Measure.GQD_CLOSED)),
    "fig4": SweepConfig(RINDLER, 3, None, ALL, (0.5,), R_33, (Measure.QD, Measure.GQD_HS)),
}
