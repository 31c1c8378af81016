"""Random instances, tightness ratios and benchmark tables.

Instances follow the usual recipe for this kind of study: midpoints of ``A``
and ``b`` uniform on ``[-10, 10]``, every entry of ``A`` with radius
``delta``, ``b`` a point vector.  Each instance draws from its own PCG64
stream seeded by ``(seed, index, attempt)``.
"""

from __future__ import annotations

import csv
import io
import statistics
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import oracle
from .classic import StoppingRule, gs_iterative, krawczyk_limit, ning_kearfott_hull
from .errors import DegenerateHullError, GenerationExhaustedError, IntervalError
from .interval import IntervalMatrix, IntervalVector
from .linsys import IntervalLinearSystem, certify_regular, precondition_relax
from .magnitude import magnitude_enclosure, magnitude_enclosure_gamma0
from .verified import UDMode, assemble_ud

METHODS = ("krawczyk_limit", "gs_iterative", "gs_limit", "magnitude", "nk_hull")
MAX_RETRIES = 100


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    delta: float
    seed: int = 0
    count: int = 1

    def __post_init__(self):
        if int(self.n) < 1:
            raise ValueError(f"n must be at least 1, got {self.n}")
        if not float(self.delta) > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if int(self.count) < 0:
            raise ValueError(f"count must be nonnegative, got {self.count}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 bits")


def _rng(seed: int, index: int, attempt: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), index, attempt])))


def _draw(cfg: GeneratorConfig, rng: np.random.Generator) -> IntervalLinearSystem:
    n, delta = int(cfg.n), float(cfg.delta)
    mid_a = rng.uniform(-10.0, 10.0, size=(n, n))
    mid_b = rng.uniform(-10.0, 10.0, size=n)
    a = IntervalMatrix(mid_a - delta, mid_a + delta)
    return IntervalLinearSystem(a, IntervalVector(mid_b))


def generate_instance(cfg: GeneratorConfig, index: int = 0) -> IntervalLinearSystem:
    """Raw system number ``index`` of the stream; redrawn until it certifies."""
    for attempt in range(MAX_RETRIES):
        sys = _draw(cfg, _rng(cfg.seed, index, attempt))
        try:
            if certify_regular(precondition_relax(sys)).verified:
                return sys
        except IntervalError:
            pass
    raise GenerationExhaustedError(f"no certifiable instance after {MAX_RETRIES} draws (n={cfg.n}, delta={cfg.delta})")


def tightness_ratio(x: IntervalVector, hull: IntervalVector) -> float:
    """Sum of radii of ``x`` over the sum of radii of ``hull``."""
    if len(x) != len(hull):
        raise ValueError("dimension mismatch")
    denom = float(np.sum((hull.hi - hull.lo) / 2))
    if denom == 0:
        raise DegenerateHullError("hull has zero total radius")
    return float(np.sum((x.hi - x.lo) / 2)) / denom


@dataclass
class EnclosureReport:
    method: str
    enclosure: Optional[IntervalVector]
    tightness: Optional[float]
    wall_time: float
    iterations: int = 0
    error: Optional[str] = None


@dataclass
class SuiteOptions:
    mode: UDMode = UDMode.CHEAP
    stop: StoppingRule = field(default_factory=StoppingRule)
    repeats: int = 3
    spot_checks: int = 5


def run_method(name: str, sys: IntervalLinearSystem, opts: SuiteOptions) -> tuple[IntervalVector, int]:
    """Run one method on a preconditioned system; return (enclosure, iterations)."""
    if name == "krawczyk_limit":
        return krawczyk_limit(sys, assemble_ud(sys, UDMode.CHEAP)), 0
    if name == "gs_iterative":
        res = gs_iterative(sys, stop=opts.stop)
        return res.enclosure, res.iterations
    if name == "gs_limit":
        return magnitude_enclosure_gamma0(sys), 0
    if name == "magnitude":
        return magnitude_enclosure(sys, opts.mode), 0
    if name == "nk_hull":
        return ning_kearfott_hull(sys, assemble_ud(sys, UDMode.EXACT)), 0
    raise ValueError(f"unknown method {name!r}; choose from {', '.join(METHODS)}")


def _timed(fn: Callable, repeats: int):
    times = []
    out = None
    for _ in range(max(1, repeats)):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return out, statistics.median(times)


EXACT_CHECK_MAX_N = 12


def spot_check(raw: IntervalLinearSystem, enclosure: IntervalVector, samples: int, rng: np.random.Generator) -> bool:
    """Solve ``samples`` random point systems and test containment.

    Up to ``EXACT_CHECK_MAX_N`` unknowns the solves are exact rational ones;
    beyond that a float solve is compared with a relative slack of 1e-9.
    """
    for _ in range(samples):
        a, b = raw.sample(rng)
        if raw.n <= EXACT_CHECK_MAX_N:
            try:
                x = oracle.solve_exact(a, b)
            except ZeroDivisionError:
                continue
            ok = oracle.inside(enclosure.lo, enclosure.hi, x)
        else:
            try:
                xf = np.linalg.solve(a, b)
            except np.linalg.LinAlgError:
                continue
            slack = 1e-9 * (1 + np.abs(xf))
            ok = bool(np.all(enclosure.lo - slack <= xf) and np.all(xf <= enclosure.hi + slack))
        if not ok:
            return False
    return True


def solve_instance(
    raw: IntervalLinearSystem,
    methods: Sequence[str],
    opts: SuiteOptions,
    check_rng: Optional[np.random.Generator] = None,
) -> list[EnclosureReport]:
    """Precondition once, run every method (timed), and score against the hull."""
    sys = precondition_relax(raw)
    hull = ning_kearfott_hull(sys, assemble_ud(sys, UDMode.EXACT))
    reports = []
    for name in methods:
        try:
            (enc, iters), dt = _timed(lambda: run_method(name, sys, opts), opts.repeats)
        except IntervalError as exc:
            reports.append(EnclosureReport(name, None, None, 0.0, 0, f"{type(exc).__name__}: {exc}"))
            continue
        try:
            tight = tightness_ratio(enc, hull)
        except DegenerateHullError:
            tight = None
        rep = EnclosureReport(name, enc, tight, dt, iters)
        if check_rng is not None and opts.spot_checks and not spot_check(raw, enc, opts.spot_checks, check_rng):
            rep.error = "spot check: sampled solution escaped the enclosure"
        reports.append(rep)
    return reports


@dataclass
class SuiteRow:
    n: int
    delta: float
    method: str
    mean_time_s: float
    mean_tightness: float
    failures: int
    instances: int


def run_suite(
    configs: Iterable[GeneratorConfig],
    methods: Sequence[str] = METHODS,
    opts: Optional[SuiteOptions] = None,
    sink: Optional[Callable[[int, list[EnclosureReport]], None]] = None,
) -> list[SuiteRow]:
    """One row per (n, delta, method) with mean time and mean tightness."""
    opts = opts or SuiteOptions()
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; choose from {', '.join(METHODS)}")
    rows = []
    for cfg in configs:
        times = {m: [] for m in methods}
        tights = {m: [] for m in methods}
        fails = {m: 0 for m in methods}
        for i in range(int(cfg.count)):
            check_rng = _rng(cfg.seed, i, 2**32) if opts.spot_checks else None
            try:
                raw = generate_instance(cfg, i)
                reports = solve_instance(raw, methods, opts, check_rng)
            except IntervalError:
                for m in methods:
                    fails[m] += 1
                continue
            if sink is not None:
                sink(i, reports)
            for rep in reports:
                if rep.error is not None:
                    fails[rep.method] += 1
                    continue
                times[rep.method].append(rep.wall_time)
                if rep.tightness is not None:
                    tights[rep.method].append(rep.tightness)
        for m in methods:
            rows.append(
                SuiteRow(
                    n=int(cfg.n),
                    delta=float(cfg.delta),
                    method=m,
                    mean_time_s=float(np.mean(times[m])) if times[m] else float("nan"),
                    mean_tightness=float(np.mean(tights[m])) if tights[m] else float("nan"),
                    failures=fails[m],
                    instances=int(cfg.count),
                )
            )
    return rows


CSV_COLUMNS = ("n", "delta", "method", "mean_time_s", "mean_tightness", "failures")


def rows_to_csv(rows: Sequence[SuiteRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([r.n, repr(r.delta), r.method, f"{r.mean_time_s:.6g}", f"{r.mean_tightness:.8g}", r.failures])
    return buf.getvalue()


def rows_to_table(rows: Sequence[SuiteRow], value: str = "mean_tightness") -> str:
    """Pivot rows into the n / delta / one-column-per-method layout."""
    methods: list[str] = []
    keyed: dict[tuple, dict[str, SuiteRow]] = {}
    for r in rows:
        if r.method not in methods:
            methods.append(r.method)
        keyed.setdefault((r.n, r.delta), {})[r.method] = r
    header = ["n", "delta", *methods]
    body = []
    for (n, delta), by_method in keyed.items():
        cells = [str(n), f"{delta:g}"]
        for m in methods:
            r = by_method.get(m)
            cells.append("-" if r is None else f"{getattr(r, value):.6g}")
        body.append(cells)
    widths = [max(len(h), *(len(row[k]) for row in body)) if body else len(h) for k, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in body:
        lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)))
    return "\n".join(lines)
