"""Grid sweeps, border tables, oracle verification and CSV/JSON export.

Sweeps evaluate every (r, d) point of a row-major grid (r outer, d inner),
optionally in a process pool. Records come back in grid order whatever the
worker count, so the written files are byte-identical across runs.
"""
import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields

import numpy as np

from .amplitude import AmplitudePoint, amplitude_density, is_separable, separability_border, upper_bound_er
from .errors import NoFiniteBorderError, NumericalError
from .oracle import AMPLITUDE, PHASE, integrate_rk4
from .phase import PhasePoint, build_phase_matrix, relative_entropy_exact
from .tmsv import pure_entanglement_bits

PURE = "pure"
MODELS = (PURE, PHASE, AMPLITUDE)
FORMATS = ("csv", "json")
CSV_COLUMNS = ("r", "d", "nbar", "value", "kind", "separable", "trace_deficit", "min_eig", "k_cutoff")
VERIFY_TOLERANCE = {PHASE: 1e-8, AMPLITUDE: 1e-6}


class SweepPointError(NumericalError):
    """A grid point failed; the whole sweep is abandoned."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


def grid(spec):
    """Points of a (min, max, count) grid; rounded to 12 decimals so that
    e.g. 0.3 is printed as 0.3."""
    lo, hi, count = spec
    return [float(x) for x in np.round(np.linspace(lo, hi, int(count)), 12)]


def _check_grid(name, spec):
    lo, hi, count = spec
    if int(count) != count or count < 1:
        raise ValueError(f"{name} count must be a positive integer, got {count!r}")
    if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
        raise ValueError(f"{name} needs finite min <= max, got ({lo}, {hi})")
    if lo < 0:
        raise ValueError(f"{name} must be nonnegative")


@dataclass(frozen=True)
class SweepConfig:
    model: str = PHASE
    r_grid: tuple = (0.0, 1.5, 16)
    d_grid: tuple = (0.0, 2.0, 21)
    nbar: float = 0.01
    trunc: int = 100
    eps_block: float = 1e-12
    tail_ceiling: float = 1e-8
    workers: int = 1
    format: str = "csv"
    output: str = "-"

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")
        _check_grid("r grid", self.r_grid)
        _check_grid("d grid", self.d_grid)
        if int(self.trunc) != self.trunc or self.trunc < 1:
            raise ValueError("trunc must be a positive integer")
        if not (self.eps_block > 0 and self.tail_ceiling > 0):
            raise ValueError("tolerances must be positive")
        if not (math.isfinite(self.nbar) and self.nbar >= 0):
            raise ValueError("nbar must be finite and >= 0")
        if int(self.workers) != self.workers or self.workers < 1:
            raise ValueError("workers must be a positive integer")

    def describe(self):
        """Settings that determine the output; excludes workers and paths."""
        out = {
            "model": self.model,
            "r_grid": list(self.r_grid),
            "d_grid": list(self.d_grid),
            "trunc": self.trunc,
            "tail_ceiling": self.tail_ceiling,
        }
        if self.model == AMPLITUDE:
            out["nbar"] = self.nbar
            out["eps_block"] = self.eps_block
        return out


@dataclass(frozen=True)
class SweepRecord:
    r: float
    d: float
    nbar: float | None
    value: float
    kind: str
    separable: bool | None = None
    trace_deficit: float | None = None
    min_eig: float | None = None
    k_cutoff: int | None = None


@dataclass
class SweepTable:
    config: SweepConfig
    records: list


def _evaluate(task):
    model, r, d, nbar, trunc, eps_block, tail_ceiling = task
    try:
        if model == PURE:
            return SweepRecord(r=r, d=0.0, nbar=None, value=pure_entanglement_bits(r), kind="exact")
        if model == PHASE:
            res = relative_entropy_exact(build_phase_matrix(PhasePoint(r, d), trunc, tail_ceiling))
            return SweepRecord(r, d, None, res.value, res.kind, None, res.trace_deficit, res.min_eigenvalue)
        point = AmplitudePoint(r, d, nbar)
        res = upper_bound_er(point, trunc, eps_block, deficit_ceiling=tail_ceiling)
        return SweepRecord(
            r, d, nbar, res.value, res.kind, is_separable(point),
            res.trace_deficit, res.min_eigenvalue, res.k_cutoff,
        )
    except Exception as exc:  # reported in grid order by the caller
        return _Failure(f"{type(exc).__name__}: {exc}", (r, d, nbar))


@dataclass(frozen=True)
class _Failure:
    message: str
    point: tuple


def run_sweep(config):
    """Evaluate the configured model on every grid point.

    Raises:
        SweepPointError: the first failing point in grid order.
    """
    rs = grid(config.r_grid)
    ds = [0.0] if config.model == PURE else grid(config.d_grid)
    tasks = [
        (config.model, r, d, config.nbar, config.trunc, config.eps_block, config.tail_ceiling)
        for r in rs
        for d in ds
    ]
    if config.workers == 1 or len(tasks) == 1:
        results = [_evaluate(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (4 * config.workers))
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_evaluate, tasks, chunksize=chunk))
    for res in results:
        if isinstance(res, _Failure):
            r, d, nbar = res.point
            raise SweepPointError(f"sweep failed at r={r}, d={d}, nbar={nbar}: {res.message}", res.point)
    return SweepTable(config, results)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _parse(name, text):
    if text == "":
        return None
    if name == "kind":
        return text
    if name == "separable":
        return text == "true"
    if name == "k_cutoff":
        return int(text)
    return float(text)


def write_csv(records, fh, columns=CSV_COLUMNS):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([_fmt(getattr(rec, c)) for c in columns])


def read_csv(fh):
    """Parse a sweep CSV back into :class:`SweepRecord` objects."""
    reader = csv.reader(fh)
    header = next(reader)
    if tuple(header) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {header}")
    return [SweepRecord(**{c: _parse(c, v) for c, v in zip(header, row)}) for row in reader]


def render(table):
    """Serialize a sweep table in its configured format."""
    if table.config.format == "json":
        payload = {"config": table.config.describe(), "records": [asdict(r) for r in table.records]}
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    write_csv(table.records, buf)
    return buf.getvalue()


@dataclass(frozen=True)
class BorderRow:
    r: float
    nbar: float
    d_star: float


def emit_border(r_grid, nbar):
    """Separability border d*(r) along an r grid.

    Raises:
        NoFiniteBorderError: nbar = 0.
    """
    _check_grid("r grid", r_grid)
    if nbar == 0:
        raise NoFiniteBorderError("nbar = 0: zero-temperature damping has no finite separability border")
    return [BorderRow(r, nbar, separability_border(r, nbar)) for r in grid(r_grid)]


def render_border(rows, fmt="csv"):
    if fmt == "json":
        return json.dumps({"nbar": rows[0].nbar if rows else None,
                           "rows": [asdict(r) for r in rows]}, indent=2) + "\n"
    buf = io.StringIO()
    write_csv(rows, buf, columns=("r", "nbar", "d_star"))
    return buf.getvalue()


@dataclass(frozen=True)
class VerifyReport:
    model: str
    r: float
    d: float
    nbar: float
    trunc: int
    steps: int
    max_deviation: float
    trace_drift: float
    tolerance: float

    @property
    def passed(self):
        return self.max_deviation < self.tolerance

    def as_dict(self):
        out = asdict(self)
        out["status"] = "PASS" if self.passed else "FAIL"
        return out

    def render(self, fmt="text"):
        if fmt == "json":
            return json.dumps(self.as_dict(), indent=2) + "\n"
        d = self.as_dict()
        width = max(len(f.name) for f in fields(self))
        return "".join(f"{k:<{width}}  {v}\n" for k, v in d.items())


def run_verify(model, r, d, nbar=0.0, m=12, steps=None):
    """Compare the closed-form damped state with the RK4 integration.

    The analytic matrix is restricted to photon numbers <= m in each mode.
    """
    if model == PHASE:
        nbar = 0.0
        analytic = build_phase_matrix(PhasePoint(r, d), m, tail_ceiling=1.0).two_mode_density()
    elif model == AMPLITUDE:
        analytic = amplitude_density(AmplitudePoint(r, d, nbar), m)
    else:
        raise ValueError(f"verify model must be {PHASE!r} or {AMPLITUDE!r}")
    numeric = integrate_rk4(model, r, d, nbar, m, steps)
    return VerifyReport(
        model=model,
        r=r,
        d=d,
        nbar=nbar,
        trunc=m,
        steps=numeric.steps,
        max_deviation=float(np.max(np.abs(analytic - numeric.entries))),
        trace_drift=numeric.trace_drift,
        tolerance=VERIFY_TOLERANCE[model],
    )
