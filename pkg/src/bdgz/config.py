"""Run configuration: TOML sections -> grid, trap, parameters, options."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import ConfigurationError
from .gp import PhysicalParams, SolverOptions
from .grid import SCHEMES, Grid, TrapPotential


@dataclass(frozen=True)
class RunConfig:
    grid: Grid
    trap: TrapPotential
    params: PhysicalParams
    solver: SolverOptions
    f: int
    zero_tol_factor: float = 1e-7
    pattern_tol: float = 1e-6
    n_max: int = 60
    state_path: str = "state.bdgz"

    def __post_init__(self):
        if self.f < 1:
            raise ConfigurationError("truncation f must be at least 1")
        for name in ("zero_tol_factor", "pattern_tol"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"{name} must be positive")
        if self.n_max < 2:
            raise ConfigurationError("vacuum n_max must be at least 2")


def _section(doc: dict, name: str, required=True) -> dict:
    sec = doc.get(name)
    if sec is None:
        if required:
            raise ConfigurationError(f"missing [{name}] section")
        return {}
    if not isinstance(sec, dict):
        raise ConfigurationError(f"[{name}] must be a table")
    return sec


def _build_trap(sec: dict) -> TrapPotential:
    kind = sec.get("kind", "zero")
    if kind == "zero":
        return TrapPotential.zero()
    if kind == "harmonic":
        freqs = sec.get("frequencies")
        if not freqs:
            raise ConfigurationError("harmonic trap needs [trap].frequencies")
        return TrapPotential.harmonic(*freqs)
    if kind == "tabulated":
        if "values" in sec:
            return TrapPotential.tabulated(np.asarray(sec["values"], dtype=float))
        path = sec.get("values_file")
        if not path:
            raise ConfigurationError("tabulated trap needs values or values_file")
        return TrapPotential.tabulated(np.loadtxt(path).reshape(-1))
    raise ConfigurationError(f"unknown trap kind {kind!r}")


def config_from_dict(doc: dict) -> RunConfig:
    gsec = _section(doc, "grid")
    try:
        grid = Grid(
            points_per_axis=tuple(gsec["points"]),
            box_lengths=tuple(gsec["lengths"]),
            boundary=gsec.get("boundary", "periodic"),
        )
    except KeyError as exc:
        raise ConfigurationError(f"[grid] is missing {exc.args[0]!r}") from exc
    scheme = gsec.get("laplacian")
    if scheme is not None and scheme not in SCHEMES:
        raise ConfigurationError(f"unknown [grid].laplacian {scheme!r}")

    trap = _build_trap(_section(doc, "trap", required=False))

    psec = _section(doc, "params")
    if "n0" not in psec:
        raise ConfigurationError("[params] needs n0")
    if "g" in psec:
        params = PhysicalParams(g=float(psec["g"]), n0=float(psec["n0"]), trap=trap)
    elif "a_s" in psec:
        params = PhysicalParams.from_scattering_length(psec["a_s"], psec["n0"], trap)
    else:
        raise ConfigurationError("[params] needs g or a_s")

    ssec = _section(doc, "solver", required=False)
    solver = SolverOptions(
        step=float(ssec.get("step", 1.0)),
        tolerance=float(ssec.get("tolerance", 1e-10)),
        max_iterations=int(ssec.get("max_iterations", 1_000_000)),
        scheme=scheme,
    )

    spsec = _section(doc, "spectrum", required=False)
    vsec = _section(doc, "vacuum", required=False)
    osec = _section(doc, "output", required=False)
    return RunConfig(
        grid=grid,
        trap=trap,
        params=params,
        solver=solver,
        f=int(spsec.get("f", min(grid.size, 16))),
        zero_tol_factor=float(spsec.get("zero_tol_factor", 1e-7)),
        pattern_tol=float(spsec.get("pattern_tol", 1e-6)),
        n_max=int(vsec.get("n_max", 60)),
        state_path=str(osec.get("state", "state.bdgz")),
    )


def load_config(path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigurationError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigurationError(f"malformed config {path}: {exc}") from exc
    return config_from_dict(doc)
