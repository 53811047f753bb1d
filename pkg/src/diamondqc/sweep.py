"""Parameter sweeps over coupling/temperature grids with deterministic CSV output.

A sweep is described by a SweepSpec: values for the five reduced
parameters (J0_over_J, T_over_J, h_over_J, gamma, Jz_over_J), one or
two of them promoted to grid axes. Grids are evaluated in fixed-size
chunks so the output is bit-identical for any worker count, and rows
are always emitted in row-major axis order.
"""
from __future__ import annotations

import configparser
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.signal import find_peaks

from .measures import x_state_measures
from .model import thermal_entries_grid
from .params import DimerDensityMatrix

PARAM_NAMES = ("J0_over_J", "T_over_J", "h_over_J", "gamma", "Jz_over_J")
MEASURE_NAMES = ("qd", "tdd", "concurrence", "mutual_info", "entropy_ab")
CSV_COLUMNS = PARAM_NAMES + MEASURE_NAMES + ("rho_eig_min", "psd_flag")
PRESET_NAMES = ("fig2a", "fig2b", "fig2c", "fig2d",
                "fig3a", "fig3b", "fig4a", "fig4b", "fig5")
DEFAULT_PROMINENCE = 0.005
T_AXIS_FLOOR = 0.02

_CHUNK_SIZE = 512
_TABLE_KEYS = ("qd", "tdd", "concurrence", "mutual_info", "entropy_ab",
               "eig_min", "psd_flag")


class SweepConfigError(ValueError):
    """Raised when a sweep specification or config file is invalid."""


def _fmt(value: float) -> str:
    return "%.12g" % float(value)


@dataclass(frozen=True)
class Axis:
    """One swept parameter: an evenly spaced range or an explicit value list."""
    name: str
    start: float
    stop: float
    n_points: int
    spacing: str = "linear"
    values: tuple = None

    @classmethod
    def from_values(cls, name: str, values) -> "Axis":
        vals = tuple(float(v) for v in values)
        if len(vals) < 2:
            raise SweepConfigError(f"axis {name}: need at least 2 values, got {len(vals)}")
        return cls(name=name, start=min(vals), stop=max(vals),
                   n_points=len(vals), spacing="values", values=vals)

    def check(self) -> None:
        if self.name not in PARAM_NAMES:
            raise SweepConfigError(f"unknown parameter name on axis: {self.name!r}")
        if self.spacing not in ("linear", "log", "values"):
            raise SweepConfigError(f"axis {self.name}: unknown spacing {self.spacing!r}")
        if self.n_points < 2:
            raise SweepConfigError(f"axis {self.name}: n_points must be >= 2, got {self.n_points}")
        if self.spacing == "values":
            if self.values is None or len(self.values) != self.n_points:
                raise SweepConfigError(f"axis {self.name}: values list does not match n_points")
            if not all(np.isfinite(v) for v in self.values):
                raise SweepConfigError(f"axis {self.name}: non-finite value in list")
        else:
            if not (np.isfinite(self.start) and np.isfinite(self.stop)):
                raise SweepConfigError(f"axis {self.name}: start/stop must be finite")
            if self.spacing == "log" and (self.start <= 0 or self.stop <= 0):
                raise SweepConfigError(f"axis {self.name}: log spacing needs positive bounds")

    def grid(self) -> np.ndarray:
        if self.spacing == "values":
            return np.asarray(self.values, dtype=float)
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.n_points)
        return np.linspace(self.start, self.stop, self.n_points)

    def describe(self) -> str:
        if self.spacing == "values":
            return " ".join([self.name, "values"] + [_fmt(v) for v in self.values])
        return " ".join([self.name, self.spacing, _fmt(self.start),
                         _fmt(self.stop), str(self.n_points)])


@dataclass
class SweepSpec:
    """Full description of one sweep: fixed parameters plus one or two axes."""
    fixed: dict
    axes: tuple
    measures: tuple = MEASURE_NAMES
    oracle_check: int = None

    def validate(self) -> "SweepSpec":
        if not (1 <= len(self.axes) <= 2):
            raise SweepConfigError(f"need 1 or 2 axes, got {len(self.axes)}")
        axis_names = [ax.name for ax in self.axes]
        if len(set(axis_names)) != len(axis_names):
            raise SweepConfigError(f"duplicate axis parameter: {axis_names}")
        for ax in self.axes:
            ax.check()
        for name, value in self.fixed.items():
            if name not in PARAM_NAMES:
                raise SweepConfigError(f"unknown parameter name in fixed block: {name!r}")
            if name in axis_names:
                raise SweepConfigError(f"parameter {name!r} is both fixed and an axis")
            if not np.isfinite(float(value)):
                raise SweepConfigError(f"fixed {name} must be finite, got {value!r}")
        for name in PARAM_NAMES:
            if name not in self.fixed and name not in axis_names:
                raise SweepConfigError(f"parameter {name!r} is neither fixed nor an axis")
        if not self.measures:
            raise SweepConfigError("measures must not be empty")
        for m in self.measures:
            if m not in MEASURE_NAMES:
                raise SweepConfigError(f"unknown measure: {m!r}")
        if self.oracle_check is not None and int(self.oracle_check) < 1:
            raise SweepConfigError(f"oracle_check must be >= 1, got {self.oracle_check}")
        t_grid = self.parameter_grid("T_over_J")
        if np.min(t_grid) <= 0.0:
            raise SweepConfigError("T_over_J <= 0 in grid")
        return self

    def parameter_grid(self, name: str) -> np.ndarray:
        for ax in self.axes:
            if ax.name == name:
                return ax.grid()
        if name in self.fixed:
            return np.array([float(self.fixed[name])])
        raise SweepConfigError(f"parameter {name!r} is neither fixed nor an axis")

    def n_rows(self) -> int:
        n = 1
        for ax in self.axes:
            n *= ax.n_points
        return n


@dataclass
class SweepResult:
    """Evaluated sweep: coordinates, measure table, header metadata, diagnostics."""
    spec: SweepSpec
    coords: np.ndarray          # shape (n, 5), columns in PARAM_NAMES order
    table: np.ndarray           # shape (n, 7), columns qd..entropy_ab, eig_min, psd_flag
    header: dict
    diagnostics: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        if name in PARAM_NAMES:
            return self.coords[:, PARAM_NAMES.index(name)]
        lookup = MEASURE_NAMES + ("rho_eig_min", "psd_flag")
        if name in lookup:
            return self.table[:, lookup.index(name)]
        raise KeyError(name)

    def line(self, axis_name: str, **fixed_coords):
        """Extract (x, y-dict) along one axis with the other coordinates pinned."""
        mask = np.ones(self.coords.shape[0], dtype=bool)
        for name, value in fixed_coords.items():
            mask &= np.isclose(self.column(name), value, rtol=0.0, atol=1e-9)
        x = self.column(axis_name)[mask]
        order = np.argsort(x, kind="stable")
        ys = {m: self.column(m)[mask][order] for m in MEASURE_NAMES}
        return x[order], ys


def grid_coords(spec: SweepSpec) -> np.ndarray:
    """Flattened row-major coordinates, one column per parameter name."""
    grids = [ax.grid() for ax in spec.axes]
    mesh = np.meshgrid(*grids, indexing="ij")
    flat = [m.ravel(order="C") for m in mesh]
    n = flat[0].size
    coords = np.empty((n, len(PARAM_NAMES)))
    axis_index = {ax.name: k for k, ax in enumerate(spec.axes)}
    for j, name in enumerate(PARAM_NAMES):
        if name in axis_index:
            coords[:, j] = flat[axis_index[name]]
        else:
            coords[:, j] = float(spec.fixed[name])
    return coords


def _chunk_measures(coords_chunk: np.ndarray) -> np.ndarray:
    j0, t, h, gamma, jz = (coords_chunk[:, k] for k in range(5))
    entries = thermal_entries_grid(j0, t, h, gamma, jz)
    vals = x_state_measures(*entries)
    out = np.empty((coords_chunk.shape[0], len(_TABLE_KEYS)))
    for k, key in enumerate(_TABLE_KEYS):
        out[:, k] = np.asarray(vals[key], dtype=float)
    return out


def _build_header(spec: SweepSpec, seed: int, n_rows: int,
                  diagnostics: dict, label: str = None) -> dict:
    from . import __version__
    header = {"format": "diamondqc-sweep-v1", "version": __version__}
    if label:
        header["preset"] = label
    header["seed"] = str(int(seed))
    header["measures"] = ",".join(spec.measures)
    for i, ax in enumerate(spec.axes, start=1):
        header[f"axis{i}"] = ax.describe()
    for name in PARAM_NAMES:
        if name in spec.fixed:
            header[f"fixed_{name}"] = _fmt(spec.fixed[name])
    if spec.oracle_check is not None:
        header["oracle_every"] = str(int(spec.oracle_check))
        checks = diagnostics.get("oracle", [])
        header["oracle_points"] = str(len(checks))
        header["oracle_max_qd_residual"] = "%.6e" % max(
            (c[1] for c in checks), default=0.0)
        header["oracle_max_tdd_residual"] = "%.6e" % max(
            (c[2] for c in checks), default=0.0)
    header["n_rows"] = str(n_rows)
    header["psd_violations"] = str(diagnostics.get("psd_violations", 0))
    return header


def run_sweep(spec: SweepSpec, workers: int = 1, seed: int = 0,
              label: str = None) -> SweepResult:
    """Evaluate every grid point of a validated spec.

    Chunking is fixed-size and independent of the worker count, so the
    result (and any CSV emitted from it) is identical for any value of
    `workers`. Each PSD violation is recorded in the diagnostics but the
    offending row is still reported.
    """
    spec.validate()
    coords = grid_coords(spec)
    n = coords.shape[0]
    chunks = [coords[i:i + _CHUNK_SIZE] for i in range(0, n, _CHUNK_SIZE)]
    if workers is None or workers <= 1 or len(chunks) == 1:
        parts = [_chunk_measures(c) for c in chunks]
    else:
        with ProcessPoolExecutor(max_workers=int(workers)) as pool:
            parts = list(pool.map(_chunk_measures, chunks))
    table = np.vstack(parts)

    diagnostics = {"psd_violations": int(np.sum(table[:, 6] < 0.5))}
    if spec.oracle_check is not None:
        from .oracle import qd_bruteforce, tdd_bruteforce
        checks = []
        for idx in range(0, n, int(spec.oracle_check)):
            entries = thermal_entries_grid(*(coords[idx, k] for k in range(5)))
            state = DimerDensityMatrix(*(float(e) for e in entries))
            qd_res = abs(table[idx, 0] - qd_bruteforce(state, n_grid=24, n_refine=6))
            tdd_res = abs(table[idx, 1] - tdd_bruteforce(state, n_starts=8, seed=seed))
            checks.append((idx, float(qd_res), float(tdd_res)))
        diagnostics["oracle"] = checks

    header = _build_header(spec, seed, n, diagnostics, label=label)
    return SweepResult(spec=spec, coords=coords, table=table,
                       header=header, diagnostics=diagnostics)


def emit_csv(result: SweepResult, path) -> None:
    """Write a sweep as `# key = value` header lines plus one CSV row per point.

    Floats use 12 significant digits; rows follow row-major axis order;
    the file is newline-terminated and carries no timestamp, so a rerun
    of the same spec and seed is byte-identical.
    """
    n = result.coords.shape[0]
    data = np.empty((n, len(CSV_COLUMNS)))
    data[:, :5] = result.coords
    data[:, 5:12] = result.table
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for key, value in result.header.items():
                fh.write(f"# {key} = {value}\n")
            fh.write(",".join(CSV_COLUMNS) + "\n")
            np.savetxt(fh, data, fmt="%.12g", delimiter=",", newline="\n")
    except OSError as exc:
        raise OSError(f"failed to write sweep CSV to {path}: {exc}") from exc


def count_peaks(series, prominence: float) -> int:
    """Count strict local maxima that rise at least `prominence` above the
    neighboring minima on both sides (topographic prominence)."""
    if prominence <= 0:
        raise ValueError(f"prominence must be positive, got {prominence}")
    pts = [(float(x), float(y)) for x, y in series]
    if len(pts) < 3:
        raise ValueError(f"need at least 3 points to count peaks, got {len(pts)}")
    xs = np.array([p[0] for p in pts])
    if np.any(np.diff(xs) < 0):
        raise ValueError("series must be sorted by x")
    ys = np.array([p[1] for p in pts])
    idx, _ = find_peaks(ys, prominence=prominence)
    return int(idx.size)


def figure_preset(name: str, n_points: int = 201) -> SweepSpec:
    """Named sweep presets for the reproduced datasets.

    The 'a'/'b' suffix pairs (and the 'c'/'d' pair) share one dataset
    and differ only in which measure a downstream plot would draw, so
    they map to identical specs.
    """
    if name not in PRESET_NAMES:
        raise SweepConfigError(f"unknown preset name: {name!r}")
    if n_points < 2:
        raise SweepConfigError(f"n_points must be >= 2, got {n_points}")
    if name in ("fig2a", "fig2b", "fig2c", "fig2d"):
        if name in ("fig2a", "fig2b"):
            fixed = {"Jz_over_J": 0.0, "gamma": 0.95, "h_over_J": 0.27}
        else:
            fixed = {"Jz_over_J": 0.3, "gamma": 0.6, "h_over_J": 0.35}
        axes = (Axis("J0_over_J", -2.0, 2.0, n_points),
                Axis("T_over_J", T_AXIS_FLOOR, 2.0, n_points))
    elif name in ("fig3a", "fig3b", "fig4a", "fig4b"):
        fixed = {"gamma": 0.5, "J0_over_J": -0.3, "Jz_over_J": 0.3}
        t_values = (0.2, 0.5, 0.7, 1.5) if name.startswith("fig3") else (0.5, 1.0)
        axes = (Axis("h_over_J", -2.0, 2.0, n_points),
                Axis.from_values("T_over_J", t_values))
    else:  # fig5
        fixed = {"J0_over_J": -0.3, "Jz_over_J": 0.3, "h_over_J": 0.5}
        axes = (Axis("gamma", -8.0, 8.0, n_points),
                Axis("T_over_J", T_AXIS_FLOOR, 2.0, n_points))
    return SweepSpec(fixed=fixed, axes=axes).validate()


def with_oracle_check(spec: SweepSpec, every: int) -> SweepSpec:
    return replace(spec, oracle_check=int(every))


_SWEEP_KEYS = ("measures", "oracle_every")
_AXIS_KEYS = ("name", "start", "stop", "n_points", "spacing", "values")


def read_sweep_config(path) -> SweepSpec:
    """Parse a flat key-value config file with [sweep]/[fixed]/[axis1]/[axis2]
    sections into a validated SweepSpec."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise OSError(f"cannot read sweep config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise SweepConfigError(f"malformed sweep config {path}: {exc}") from exc

    known_sections = {"sweep", "fixed", "axis1", "axis2"}
    for section in parser.sections():
        if section not in known_sections:
            raise SweepConfigError(f"unknown config section: [{section}]")
    if not parser.has_section("axis1"):
        raise SweepConfigError("config must define an [axis1] section")
    if parser.has_section("axis2") and not parser.has_section("axis1"):
        raise SweepConfigError("[axis2] given without [axis1]")

    def parse_axis(section: str) -> Axis:
        items = dict(parser.items(section))
        for key in items:
            if key not in _AXIS_KEYS:
                raise SweepConfigError(f"unknown key {key!r} in [{section}]")
        if "name" not in items:
            raise SweepConfigError(f"[{section}] is missing the 'name' key")
        name = items["name"].strip()
        try:
            if "values" in items:
                for key in ("start", "stop", "n_points", "spacing"):
                    if key in items:
                        raise SweepConfigError(
                            f"[{section}] mixes 'values' with {key!r}")
                vals = [float(v) for v in items["values"].replace(",", " ").split()]
                return Axis.from_values(name, vals)
            return Axis(name=name,
                        start=float(items["start"]),
                        stop=float(items["stop"]),
                        n_points=int(items["n_points"]),
                        spacing=items.get("spacing", "linear").strip())
        except KeyError as exc:
            raise SweepConfigError(f"[{section}] is missing the {exc.args[0]!r} key") from exc
        except ValueError as exc:
            raise SweepConfigError(f"[{section}]: {exc}") from exc

    axes = [parse_axis("axis1")]
    if parser.has_section("axis2"):
        axes.append(parse_axis("axis2"))

    fixed = {}
    if parser.has_section("fixed"):
        for key, raw in parser.items("fixed"):
            try:
                fixed[key] = float(raw)
            except ValueError as exc:
                raise SweepConfigError(f"fixed {key}: {exc}") from exc

    measures = MEASURE_NAMES
    oracle_check = None
    if parser.has_section("sweep"):
        for key, raw in parser.items("sweep"):
            if key not in _SWEEP_KEYS:
                raise SweepConfigError(f"unknown key {key!r} in [sweep]")
        if parser.has_option("sweep", "measures"):
            raw = parser.get("sweep", "measures")
            measures = tuple(m.strip() for m in raw.replace(",", " ").split())
        if parser.has_option("sweep", "oracle_every"):
            try:
                oracle_check = int(parser.get("sweep", "oracle_every"))
            except ValueError as exc:
                raise SweepConfigError(f"oracle_every: {exc}") from exc

    return SweepSpec(fixed=fixed, axes=tuple(axes), measures=measures,
                     oracle_check=oracle_check).validate()
