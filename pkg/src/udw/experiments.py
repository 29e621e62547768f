"""Configuration files, parameter sweeps, figure presets and convergence reports.

Config files are flat ``key = value`` text; ``#`` starts a comment.  Numeric
values accept arithmetic with ``pi``, ``e``, ``sqrt``, ``log``, ``log10`` and
``exp``.  ``detector.omega`` may also call ``omega(n)``, the static-cavity
frequency ``sqrt((n pi / L)^2 + m^2)`` at the current sweep point, so a gap
tied to a mode frequency follows the field mass along an ``m`` sweep.

Grids (``sweep.grid``) are either a comma-separated list or one of
``linspace(lo, hi, n)``, ``geomspace(lo, hi, n)`` and ``logspace(lo, hi, n)``.
"""

from __future__ import annotations

import ast
import csv
import io
import json
import math
import operator
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, PerturbativeWarning, UDWError
from .kinematics import Anchor, ScenarioConfig, ScenarioKind
from .quadrature import QuadratureSpec
from .response import DetectorParams, transition_probability, transition_rate
from .states import MASSLESS_BASES, Coherent, Fock, Vacuum

AXES = ("a", "Omega", "m", "tau", "N")
OUTPUTS = ("P", "P_excess", "dP_scenarios", "dP_excess", "rate", "per_mode")
KIND_TAGS = {ScenarioKind.ACCELERATING_DETECTOR: "D", ScenarioKind.ACCELERATING_CAVITY: "C"}

DEFAULTS = {
    "scenario.kind": "both",
    "scenario.anchor": "full",
    "scenario.a": "1",
    "cavity.L": "1",
    "field.m": "0",
    "state.kind": "vacuum",
    "state.k": "1",
    "state.n_k": "1",
    "state.alpha_re": "1",
    "state.alpha_im": "0",
    "detector.omega": "pi",
    "detector.lambda": "1",
    "detector.tau0": "",
    "detector.tau1": "",
    "detector.rate_tau": "",
    "modes.N": "15",
    "modes.basis": "conformal",
    "quad.rel_tol": "1e-8",
    "quad.abs_tol": "1e-12",
    "quad.max_subdivisions": "2000",
    "sweep.axis": "a",
    "sweep.grid": "",
    "sweep.outputs": "P",
    "sweep.threads": "1",
    "sweep.label": "",
}

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}
_FUNCS = {"sqrt": math.sqrt, "log": math.log, "log10": math.log10, "exp": math.exp}
_NAMES = {"pi": math.pi, "e": math.e}


def evaluate_expression(text, names=None, funcs=None):
    """Evaluate a restricted arithmetic expression (no attribute access, no calls
    beyond the whitelisted functions)."""
    names = {**_NAMES, **(names or {})}
    funcs = {**_FUNCS, **(funcs or {})}

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return node.value
        if isinstance(node, ast.Name) and node.id in names:
            return names[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](ev(node.operand))
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in funcs and not node.keywords):
            return funcs[node.func.id](*[ev(arg) for arg in node.args])
        raise ValueError(f"unsupported expression element {ast.dump(node)[:40]}")

    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, TypeError, ZeroDivisionError, OverflowError) as exc:
        raise ValueError(f"cannot evaluate {text!r}: {exc}") from None
    return float(value)


def parse_grid(text):
    text = text.strip()
    for name, fn in (("linspace", np.linspace), ("geomspace", np.geomspace),
                     ("logspace", np.logspace)):
        if text.startswith(name + "(") and text.endswith(")"):
            args = [a for a in text[len(name) + 1:-1].split(",")]
            if len(args) != 3:
                raise ValueError(f"{name} needs (lo, hi, n)")
            lo, hi = evaluate_expression(args[0]), evaluate_expression(args[1])
            n = evaluate_expression(args[2])
            if n != int(n) or n < 1:
                raise ValueError("grid size must be a positive integer")
            return np.asarray(fn(lo, hi, int(n)), dtype=float)
    if not text:
        raise ValueError("empty grid")
    return np.array([evaluate_expression(part) for part in text.split(",")])


def parse_config_text(text):
    """Parse flat ``key = value`` lines into ``{key: (value, line_number)}``."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in DEFAULTS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in entries:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        entries[key] = (value, lineno)
    return entries


@dataclass(frozen=True)
class SweepSpec:
    """A fully validated sweep: one axis, a grid, and everything held fixed."""

    axis: str
    grid: tuple
    kinds: tuple
    anchor: Anchor
    a: float
    L: float
    m: float
    state: object
    omega_expr: str
    lam: float
    window: tuple | None
    rate_tau: float | None
    N: int
    basis: str
    quad: QuadratureSpec
    outputs: tuple
    threads: int = 1
    label: str = ""
    source: dict = field(default_factory=dict, compare=False)

    def config_text(self):
        """Config file text that reproduces this spec."""
        return "".join(f"{k} = {v}\n" for k, v in self.source.items())

    def scenario(self, kind, **over):
        values = dict(kind=kind, a=self.a, L=self.L, m=self.m, anchor=self.anchor)
        values.update(over)
        return ScenarioConfig(**values)

    def omega_at(self, L, m):
        def omega(n):
            return math.sqrt((n * math.pi / L) ** 2 + m * m)

        return evaluate_expression(self.omega_expr, {"L": L, "m": m}, {"omega": omega})


def _get(entries, key):
    if key in entries:
        return entries[key]
    return DEFAULTS[key], None


def _number(entries, key, integer=False):
    value, line = _get(entries, key)
    try:
        x = evaluate_expression(value)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}", line) from None
    if integer:
        if x != int(x):
            raise ConfigError(f"{key} must be an integer, got {value!r}", line)
        return int(x)
    return x


def spec_from_entries(entries) -> SweepSpec:
    """Validate parsed config entries; every error names the offending line."""
    source = {key: _get(entries, key)[0] for key in DEFAULTS}

    kind_text, kind_line = _get(entries, "scenario.kind")
    if kind_text == "both":
        kinds = (ScenarioKind.ACCELERATING_DETECTOR, ScenarioKind.ACCELERATING_CAVITY)
    else:
        try:
            kinds = (ScenarioKind(kind_text),)
        except ValueError:
            raise ConfigError(f"scenario.kind must be accelerating_detector, "
                              f"accelerating_cavity or both, got {kind_text!r}", kind_line) from None
    anchor_text, anchor_line = _get(entries, "scenario.anchor")
    try:
        anchor = Anchor(anchor_text)
    except ValueError:
        raise ConfigError(f"scenario.anchor must be full or midpoint, got {anchor_text!r}",
                          anchor_line) from None

    a, L, m = _number(entries, "scenario.a"), _number(entries, "cavity.L"), _number(entries, "field.m")

    state_kind, state_line = _get(entries, "state.kind")
    try:
        if state_kind == "vacuum":
            state = Vacuum()
        elif state_kind == "fock":
            state = Fock(_number(entries, "state.k", True), _number(entries, "state.n_k", True))
        elif state_kind == "coherent":
            alpha = complex(_number(entries, "state.alpha_re"), _number(entries, "state.alpha_im"))
            state = Coherent(_number(entries, "state.k", True), alpha)
        else:
            raise ConfigError(f"state.kind must be vacuum, fock or coherent, got {state_kind!r}",
                              state_line)
    except UDWError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc), state_line) from None

    omega_expr, omega_line = _get(entries, "detector.omega")
    lam = _number(entries, "detector.lambda")
    tau0_text, tau0_line = _get(entries, "detector.tau0")
    tau1_text, _ = _get(entries, "detector.tau1")
    window = None
    if tau0_text or tau1_text:
        if not (tau0_text and tau1_text):
            raise ConfigError("detector.tau0 and detector.tau1 must be given together", tau0_line)
        window = (_number(entries, "detector.tau0"), _number(entries, "detector.tau1"))
    rate_tau = _number(entries, "detector.rate_tau") if _get(entries, "detector.rate_tau")[0] else None

    N = _number(entries, "modes.N", True)
    if N < 1:
        raise ConfigError("modes.N must be >= 1", _get(entries, "modes.N")[1])
    basis, basis_line = _get(entries, "modes.basis")
    if basis not in MASSLESS_BASES:
        raise ConfigError(f"modes.basis must be one of {MASSLESS_BASES}", basis_line)
    try:
        quad = QuadratureSpec(_number(entries, "quad.rel_tol"), _number(entries, "quad.abs_tol"),
                              _number(entries, "quad.max_subdivisions", True))
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc), _get(entries, "quad.rel_tol")[1]) from None

    axis, axis_line = _get(entries, "sweep.axis")
    if axis not in AXES:
        raise ConfigError(f"sweep.axis must be one of {AXES}, got {axis!r}", axis_line)
    grid_text, grid_line = _get(entries, "sweep.grid")
    try:
        grid = parse_grid(grid_text)
    except ValueError as exc:
        raise ConfigError(f"sweep.grid: {exc}", grid_line) from None
    diffs = np.diff(grid)
    if grid.size == 0 or not (np.all(diffs > 0) or np.all(diffs < 0)):
        raise ConfigError("sweep.grid must be nonempty and strictly monotone", grid_line)
    if axis == "N" and np.any(grid != np.round(grid)):
        raise ConfigError("an N grid must hold integers", grid_line)

    out_text, out_line = _get(entries, "sweep.outputs")
    outputs = tuple(o.strip() for o in out_text.split(",") if o.strip())
    for o in outputs:
        if o not in OUTPUTS:
            raise ConfigError(f"unknown output {o!r}; choose from {OUTPUTS}", out_line)
    if not outputs:
        raise ConfigError("sweep.outputs is empty", out_line)
    if any(o.startswith("dP") for o in outputs) and len(kinds) != 2:
        raise ConfigError("scenario differences need scenario.kind = both", out_line)
    if "rate" in outputs and axis != "tau" and rate_tau is None:
        raise ConfigError("the rate output needs sweep.axis = tau or detector.rate_tau", out_line)
    threads = _number(entries, "sweep.threads", True)

    spec = SweepSpec(axis, tuple(float(g) for g in grid), kinds, anchor, a, L, m, state,
                     omega_expr, lam, window, rate_tau, N, basis, quad, outputs,
                     max(1, threads), _get(entries, "sweep.label")[0], source)
    _validate_points(spec, entries)
    try:
        spec.omega_at(L, m)
    except ValueError as exc:
        raise ConfigError(f"detector.omega: {exc}", omega_line) from None
    return spec


def _validate_points(spec, entries):
    """Build every scenario of the sweep once so geometry errors surface at parse time."""
    swept = spec.axis in ("a", "m")
    line = _get(entries, "sweep.grid" if swept else "scenario.a")[1]
    for value in spec.grid if swept else spec.grid[:1]:
        over = {spec.axis: value} if swept else {}
        for kind in spec.kinds:
            try:
                spec.scenario(kind, **over)
            except UDWError as exc:
                raise ConfigError(str(exc), line) from None


def load_spec(path) -> SweepSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    if path.suffix == ".json":
        try:
            manifest = json.loads(text)
            text = "".join(f"{k} = {v}\n" for k, v in manifest["config"].items())
        except (ValueError, KeyError, AttributeError) as exc:
            raise ConfigError(f"{path} is not a sweep manifest: {exc}") from None
    return spec_from_entries(parse_config_text(text))


def build_spec(**settings) -> SweepSpec:
    """Spec from keyword settings, keys written with ``__`` for ``.``
    (``scenario__a="0.5"``)."""
    text = "".join(f"{k.replace('__', '.')} = {v}\n" for k, v in settings.items())
    return spec_from_entries(parse_config_text(text))


@dataclass
class SweepResult:
    columns: list
    rows: list
    wall_clock: list
    failures: dict
    spec: SweepSpec


def _columns(spec):
    cols = [spec.axis]
    tags = [KIND_TAGS[k] for k in spec.kinds]
    for o in spec.outputs:
        if o in ("P", "P_excess", "rate"):
            cols += [f"{o}_{t}" for t in tags]
        elif o == "dP_scenarios":
            cols.append("dP")
        elif o == "dP_excess":
            cols.append("dP_excess")
        elif o == "per_mode":
            n_modes = int(max(spec.grid)) if spec.axis == "N" else spec.N
            cols += [f"p{n}_{t}" for t in tags for n in range(1, n_modes + 1)]
    if "rate" in spec.outputs and len(tags) == 2:
        cols.append("dRate")
    cols += ["err_est", "N_used"]
    return cols


def _point(spec: SweepSpec, value):
    """One sweep row (without the axis value)."""
    over = {}
    N = spec.N
    omega_override = None
    rate_tau = spec.rate_tau
    if spec.axis in ("a", "m"):
        over[spec.axis] = value
    elif spec.axis == "N":
        N = int(value)
    elif spec.axis == "Omega":
        omega_override = value
    elif spec.axis == "tau":
        rate_tau = value
    results, rates = {}, {}
    err = 0.0
    for kind in spec.kinds:
        cfg = spec.scenario(kind, **over)
        omega = omega_override if omega_override is not None else spec.omega_at(cfg.L, cfg.m)
        det = DetectorParams(omega, spec.lam, spec.window)
        need_P = any(o != "rate" for o in spec.outputs)
        if need_P:
            res = transition_probability(cfg, spec.state, det, N, spec.quad, spec.basis)
            results[kind] = res
            err += res.err_est
        if "rate" in spec.outputs:
            r = transition_rate(cfg, spec.state, det, [rate_tau], N, spec.quad,
                                massless_basis=spec.basis)
            rates[kind] = float(r.rate[0])
            err += r.err_est
    row = []
    for o in spec.outputs:
        if o == "P":
            row += [results[k].probability_over_lambda2 for k in spec.kinds]
        elif o == "P_excess":
            row += [results[k].excess for k in spec.kinds]
        elif o == "rate":
            row += [rates[k] for k in spec.kinds]
        elif o == "dP_scenarios":
            d, c = (results[k].probability_over_lambda2 for k in spec.kinds)
            row.append(abs(c - d))
        elif o == "dP_excess":
            d, c = (results[k].excess for k in spec.kinds)
            row.append(abs(c - d))
        elif o == "per_mode":
            width = int(max(spec.grid)) if spec.axis == "N" else spec.N
            for k in spec.kinds:
                pm = list(results[k].per_mode) + [float("nan")] * (width - N)
                row += pm
    if "rate" in spec.outputs and len(spec.kinds) == 2:
        d, c = (rates[k] for k in spec.kinds)
        row.append(d - c)
    return row + [err, N]


def run_sweep(spec: SweepSpec, threads=None) -> SweepResult:
    """Evaluate every grid point; rows come back in grid order whatever the thread count."""
    columns = _columns(spec)
    n_values = len(columns) - 1

    def task(value):
        start = time.perf_counter()
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", PerturbativeWarning)
                row = _point(spec, value)
            failure = None
        except UDWError as exc:
            row = [float("nan")] * n_values
            failure = f"{type(exc).__name__}: {exc}"
        return [value] + row, time.perf_counter() - start, failure

    workers = max(1, threads or spec.threads)
    if workers == 1:
        outcomes = [task(v) for v in spec.grid]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(task, spec.grid))
    rows = [o[0] for o in outcomes]
    failures = {i: o[2] for i, o in enumerate(outcomes) if o[2] is not None}
    return SweepResult(columns, rows, [o[1] for o in outcomes], failures, spec)


def format_value(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def csv_body(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def write_result(result: SweepResult, out_dir, name):
    """Write ``<name>.csv`` and ``<name>.manifest.json``; returns the two paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    header = [f"# udw {__version__} sweep '{name}'", f"# timestamp: {stamp}"]
    header += [f"# {k} = {v}" for k, v in result.spec.source.items()]
    csv_path = out_dir / f"{name}.csv"
    csv_path.write_text("\n".join(header) + "\n" + csv_body(result))
    manifest = {
        "name": name,
        "version": __version__,
        "timestamp": stamp,
        "config": result.spec.source,
        "csv": csv_path.name,
        "rows": len(result.rows),
        "wall_clock_s": [round(t, 6) for t in result.wall_clock],
        "failures": {str(k): v for k, v in result.failures.items()},
        "complete": not result.failures,
    }
    man_path = out_dir / f"{name}.manifest.json"
    man_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return csv_path, man_path


def read_csv_body(path):
    """CSV text with the ``#`` header stripped (for reproducibility checks)."""
    return "".join(line for line in Path(path).read_text().splitlines(keepends=True)
                   if not line.startswith("#"))


@dataclass
class ConvergenceReport:
    N: list
    P: list
    deltas: list
    recommended: int | None
    excess_note: str

    def table(self):
        lines = [f"{'N':>6}  {'P/lambda^2':>24}  {'delta':>10}"]
        for n, p, d in zip(self.N, self.P, self.deltas):
            ds = "-" if d is None else f"{d:.3e}"
            lines.append(f"{n:>6}  {p:>24.17g}  {ds:>10}")
        lines.append(f"recommended N: {self.recommended if self.recommended else 'none in list'}")
        if self.excess_note:
            lines.append(self.excess_note)
        return "\n".join(lines)


def convergence_report(config: ScenarioConfig, state, detector: DetectorParams, N_list,
                       quad: QuadratureSpec = QuadratureSpec(), massless_basis="conformal",
                       threshold=1e-3) -> ConvergenceReport:
    """P(N) over ``N_list`` with forward relative deltas.

    ``delta`` in the row for ``N_i`` is ``|P(N_{i+1}) - P(N_i)| / P(N_{i+1})``:
    how much the next truncation in the list would still change the result.
    The recommended N is the first whose delta is below ``threshold``.
    """
    N_list = [int(n) for n in N_list]
    if not N_list or any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise UDWError("N_list must be nonempty and strictly ascending")
    # the vacuum part is needed at every N; compute the largest once and take partial sums
    res = transition_probability(config, state, detector, N_list[-1], quad, massless_basis)
    cums = np.cumsum(res.per_mode)
    P = [float(cums[n - 1]) + res.excess for n in N_list]
    deltas = [abs(P[i + 1] - P[i]) / abs(P[i + 1]) if P[i + 1] else 0.0
              for i in range(len(P) - 1)] + [None]
    recommended = next((n for n, d in zip(N_list, deltas) if d is not None and d < threshold), None)
    note = ""
    if not isinstance(state, Vacuum):
        note = "excess part: exact, no truncation"
    return ConvergenceReport(N_list, P, deltas, recommended, note)


# presets ------------------------------------------------------------------

A_GRID = "geomspace(0.01, 2, 25)"


def _preset(**kw):
    base = {"scenario__kind": "both", "modes__N": "15", "cavity__L": "1"}
    base.update(kw)
    return base


PRESETS = {
    "plotdiff1": {"vacuum_m0": _preset(sweep__grid=A_GRID, sweep__outputs="P, dP_scenarios")},
    "plotdiff2": {"vacuum_m0": _preset(sweep__grid=A_GRID, detector__omega="2*pi",
                                       sweep__outputs="P, dP_scenarios")},
    "plotdiff3": {
        "vacuum_m0": _preset(sweep__grid=A_GRID, sweep__outputs="P, dP_scenarios"),
        "vacuum_m1": _preset(sweep__grid=A_GRID, field__m="1", sweep__outputs="P, dP_scenarios"),
    },
    "masslesslimit": {
        "m0": _preset(scenario__kind="accelerating_cavity", modes__N="100",
                      sweep__grid="geomspace(0.01, 1, 9)", quad__rel_tol="1e-10",
                      quad__abs_tol="1e-16"),
        "m1e-4": _preset(scenario__kind="accelerating_cavity", modes__N="100", field__m="1e-4",
                         sweep__grid="geomspace(0.01, 1, 9)", quad__rel_tol="1e-10",
                         quad__abs_tol="1e-16"),
    },
    "plotexcited1": {
        f"omega{tag}_m{m}": _preset(sweep__grid=A_GRID, state__kind="fock", state__k="3",
                                    state__n_k="3", detector__omega=om, field__m=m,
                                    sweep__outputs="P, dP_scenarios")
        for tag, om in (("2.5pi", "2.5*pi"), ("3.5pi", "3.5*pi")) for m in ("0", "1")
    },
    # two inconsistent parameter sets are quoted for this curve; both are run
    "plotexcited2": {
        f"{label}_{tag}_m{m}": _preset(sweep__grid=A_GRID, state__kind="fock", state__k=k,
                                       state__n_k=n, detector__omega=om, field__m=m,
                                       sweep__outputs="P, dP_scenarios")
        for label, k, n in (("k3n3", "3", "3"), ("k1n1000", "1", "1000"))
        # the shifted gap is referenced to the massive (m = 1) mode frequency for both masses
        for tag, om in (("omega4pi", "4*pi"), ("shift8.84", f"sqrt(({k}*pi)**2 + 1) + 8.84"),
                        ("ratio3.37", f"3.37*omega({k})"))
        for m in ("0", "1")
    },
    "plotsinglecoherent1": {
        f"m{m}": _preset(sweep__grid=A_GRID, state__kind="coherent", state__k="2",
                         state__alpha_re="1", detector__omega="1.9*omega(2)", field__m=m,
                         sweep__outputs="P_excess, dP_excess")
        for m in ("0", "1")
    },
    "plotsinglecoherent2": {
        f"m{m}": _preset(sweep__grid=A_GRID, state__kind="coherent", state__k="2",
                         state__alpha_re="1", detector__omega="1.9*omega(2)", field__m=m,
                         sweep__outputs="P_excess, dP_excess")
        for m in ("0", "1")
    },
    "plotresonance1": {
        f"a{a}": _preset(scenario__a=a, sweep__axis="Omega",
                         sweep__grid="linspace(0.05, 5*pi, 200)", state__kind="fock",
                         state__k="3", state__n_k="3")
        for a in ("1.0", "0.5", "0.1")
    },
    "plotrate1": {
        f"m{m}": _preset(scenario__a="0.02", field__m=m, sweep__axis="tau",
                         sweep__grid="linspace(0, 10, 41)", sweep__outputs="rate")
        for m in ("0", "1")
    },
    "plotrate2": {
        f"m{m}": _preset(scenario__a="0.1", field__m=m, sweep__axis="tau", state__kind="fock",
                         state__k="1", state__n_k="100", sweep__grid="linspace(0, 4.4, 45)",
                         sweep__outputs="rate")
        for m in ("0", "1")
    },
    "plotrate3": {
        f"m{m}": _preset(scenario__a="0.1", field__m=m, sweep__axis="tau", state__kind="fock",
                         state__k="1", state__n_k="100", detector__omega="1.012*omega(1)",
                         sweep__grid="linspace(0, 4.4, 45)", sweep__outputs="rate")
        for m in ("0", "1")
    },
    "cavconvergence1": {
        f"a{a}": _preset(scenario__kind="accelerating_cavity", scenario__a=a, sweep__axis="N",
                         sweep__grid="5, 10, 15, 20, 30, 50, 75, 100, 150, 200")
        for a in ("0.01", "1.0")
    },
}

PRESET_NOTES = {
    "plotexcited2": "two quoted (k, n_k) sets disagree, (3, 3) and (1, 1000); both are run",
    "plotsinglecoherent2": "a ratio file compares massless and massive excess probabilities",
}


def preset_specs(name):
    if name not in PRESETS:
        raise KeyError(name)
    return {curve: build_spec(**settings) for curve, settings in PRESETS[name].items()}


def run_preset(name, out_dir, threads=1):
    """Run every curve of a preset; returns ``(paths, ok)``."""
    specs = preset_specs(name)
    paths, ok = [], True
    results = {}
    for curve, spec in specs.items():
        result = run_sweep(spec, threads)
        results[curve] = result
        paths += write_result(result, out_dir, f"{name}_{curve}")
        ok = ok and not result.failures
    if name == "plotsinglecoherent2":
        paths.append(_write_ratio(results, out_dir, name))
    summary = {"preset": name, "curves": list(specs), "note": PRESET_NOTES.get(name, ""),
               "complete": ok, "files": [p.name for p in paths]}
    man = Path(out_dir) / f"{name}.manifest.json"
    man.write_text(json.dumps(summary, indent=2) + "\n")
    return paths + [man], ok


def _write_ratio(results, out_dir, name):
    m0, m1 = results["m0"], results["m1"]
    i0 = m0.columns.index("P_excess_D")
    lines = ["# massless / massive excess probability", "a,ratio_D,ratio_C"]
    for r0, r1 in zip(m0.rows, m1.rows):
        lines.append(",".join(format_value(v) for v in
                              (r0[0], r0[i0] / r1[i0], r0[i0 + 1] / r1[i0 + 1])))
    path = Path(out_dir) / f"{name}_ratio.csv"
    path.write_text("\n".join(lines) + "\n")
    return path
