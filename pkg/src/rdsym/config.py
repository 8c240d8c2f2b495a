"""Plain-text run configuration.

Format: ``[section]`` headers followed by ``key = value`` lines; ``#`` and
``;`` start comments. Unknown sections or keys are rejected with the line
number. A shipped config can be referred to by bare name (e.g.
``paper_eq8``) instead of a path.
"""
from __future__ import annotations

import csv
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigError, DomainError
from .exact_solutions import CaseTag, ExactSolutionSpec
from .pde_solver import (
    Dirichlet,
    Exact,
    Grid1D,
    NeumannZero,
    Scheme,
    SimulationConfig,
    cubic_system,
    exp_coupled_system,
    exact_ic,
    general_system,
)

SCHEMA = {
    "meta": {"name", "note"},
    "system": {
        "form", "a", "b", "lam1", "lam2", "phi1", "phi2",
        "a11", "a12", "a21", "a22", "f_u", "f_v", "g_u", "g_v",
    },
    "grid": {"x_min", "x_max", "nx"},
    "time": {"t0", "t_end", "dt", "stride", "scheme"},
    "initial": {"kind", "U", "V", "file"},
    "boundary": {"kind", "left_U", "left_V", "right_U", "right_V"},
    "exact": {"case", "a", "b", "k1", "C1", "C2"},
    "output": {"csv"},
}


class RawConfig:
    """Parsed sections with the source line of every key."""

    def __init__(self, source="<string>"):
        self.source = source
        self.values = {}
        self.lines = {}

    def has(self, section, key=None):
        if key is None:
            return section in self.values
        return key in self.values.get(section, {})

    def get(self, section, key, default=None):
        return self.values.get(section, {}).get(key, default)

    def line(self, section, key):
        return self.lines.get((section, key))

    def number(self, section, key, default=None, kind=float):
        raw = self.get(section, key)
        if raw is None:
            if default is None:
                raise ConfigError("missing required value", field=f"{section}.{key}")
            return default
        try:
            return kind(raw)
        except ValueError:
            raise ConfigError(
                f"expected {kind.__name__}, got {raw!r}",
                field=f"{section}.{key}",
                line=self.line(section, key),
            ) from None


def parse_config_text(text, source="<string>"):
    cfg = RawConfig(source)
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in SCHEMA:
                raise ConfigError(f"unknown section [{section}]", line=lineno)
            if section in cfg.values:
                raise ConfigError(f"duplicate section [{section}]", line=lineno)
            cfg.values[section] = {}
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", line=lineno)
        if section is None:
            raise ConfigError("key outside of any section", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in SCHEMA[section]:
            raise ConfigError("unknown key", field=f"{section}.{key}", line=lineno)
        if key in cfg.values[section]:
            raise ConfigError("duplicate key", field=f"{section}.{key}", line=lineno)
        cfg.values[section][key] = value
        cfg.lines[(section, key)] = lineno
    return cfg


def builtin_config_names():
    root = resources.files("rdsym") / "configs"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".cfg"))


def load_config(path_or_name):
    """Read a config file, or a shipped config by bare name."""
    p = Path(path_or_name)
    if p.is_file():
        return parse_config_text(p.read_text(), str(p))
    name = str(path_or_name)
    if name.endswith(".cfg"):
        name = name[:-4]
    resource = resources.files("rdsym") / "configs" / f"{name}.cfg"
    if resource.is_file():
        return parse_config_text(resource.read_text(), f"builtin:{name}")
    raise ConfigError(f"no such config file or builtin config: {path_or_name!r}")


def exact_spec_from(cfg: RawConfig) -> ExactSolutionSpec:
    case = cfg.get("exact", "case", "1")
    tags = {"1": CaseTag.EllipticPair, "2": CaseTag.EllipticPlusLinear}
    tags.update({t.value: t for t in CaseTag})
    if case not in tags:
        raise ConfigError(f"unknown case {case!r}", field="exact.case", line=cfg.line("exact", "case"))
    try:
        return ExactSolutionSpec(
            tags[case],
            a=cfg.number("exact", "a", 1.0),
            b=cfg.number("exact", "b", -1.0 if tags[case] is CaseTag.EllipticPair else 0.0),
            k1=cfg.number("exact", "k1", 1.0),
            C1=cfg.number("exact", "C1", 0.0),
            C2=cfg.number("exact", "C2", 0.0),
        )
    except DomainError as exc:
        raise ConfigError(str(exc), field="exact") from None


def _system_from(cfg):
    form = cfg.get("system", "form")
    num = cfg.number
    if form == "exp-coupled":
        return exp_coupled_system(
            num("system", "a"), num("system", "b"), num("system", "lam1"),
            num("system", "lam2"), num("system", "phi1"), num("system", "phi2"),
        )
    if form == "cubic":
        return cubic_system(num("system", "phi1"), num("system", "phi2", 0.0))
    if form == "general":
        A = [[num("system", "a11"), num("system", "a12", 0.0)],
             [num("system", "a21", 0.0), num("system", "a22")]]
        fu, fv = num("system", "f_u", 0.0), num("system", "f_v", 0.0)
        gu, gv = num("system", "g_u", 0.0), num("system", "g_v", 0.0)
        return general_system(A, lambda U, V: fu * U + fv * V, lambda U, V: gu * U + gv * V)
    raise ConfigError(
        f"form must be exp-coupled, cubic or general, got {form!r}",
        field="system.form",
        line=cfg.line("system", "form"),
    )


def _table_ic(path, cfg):
    p = Path(path)
    if not p.is_file() and cfg.source not in ("<string>",) and not cfg.source.startswith("builtin:"):
        p = Path(cfg.source).parent / path
    try:
        with open(p, newline="") as fh:
            rows = [r for r in csv.DictReader(line for line in fh if not line.startswith("#"))]
        xs = np.array([float(r["x"]) for r in rows])
        us = np.array([float(r["U"]) for r in rows])
        vs = np.array([float(r["V"]) for r in rows])
    except (OSError, KeyError, ValueError) as exc:
        raise ConfigError(f"cannot read table {path!r}: {exc}", field="initial.file") from None
    order = np.argsort(xs)
    xs, us, vs = xs[order], us[order], vs[order]

    def ic(x):
        return np.interp(x, xs, us), np.interp(x, xs, vs)

    return ic


def simulation_from(cfg: RawConfig) -> SimulationConfig:
    """Build a :class:`SimulationConfig`; every failure is a :class:`ConfigError`."""
    for section in ("system", "grid", "time"):
        if not cfg.has(section):
            raise ConfigError(f"missing section [{section}]", field=section)
    system = _system_from(cfg)
    grid = Grid1D(
        cfg.number("grid", "x_min", 0.0),
        cfg.number("grid", "x_max", 1.0),
        cfg.number("grid", "nx", kind=int),
    )
    t0 = cfg.number("time", "t0", 0.0)

    ic_kind = cfg.get("initial", "kind", "constants")
    if ic_kind == "constants":
        ic = (cfg.number("initial", "U", 0.0), cfg.number("initial", "V", 0.0))
    elif ic_kind == "exact":
        ic = exact_ic(exact_spec_from(cfg), t0)
    elif ic_kind == "table":
        ic = _table_ic(cfg.get("initial", "file", ""), cfg)
    else:
        raise ConfigError(f"unknown initial kind {ic_kind!r}", field="initial.kind",
                          line=cfg.line("initial", "kind"))

    bc_kind = cfg.get("boundary", "kind", "neumann-zero")
    if bc_kind == "neumann-zero":
        bc = NeumannZero()
    elif bc_kind == "dirichlet":
        bc = Dirichlet(*(cfg.number("boundary", k, 0.0) for k in ("left_U", "left_V", "right_U", "right_V")))
    elif bc_kind == "exact":
        bc = Exact(exact_spec_from(cfg))
    else:
        raise ConfigError(f"unknown boundary kind {bc_kind!r}", field="boundary.kind",
                          line=cfg.line("boundary", "kind"))

    scheme_name = cfg.get("time", "scheme", "IMEX")
    try:
        scheme = Scheme(scheme_name)
    except ValueError:
        raise ConfigError(f"unknown scheme {scheme_name!r}", field="time.scheme",
                          line=cfg.line("time", "scheme")) from None

    sim = SimulationConfig(
        system=system,
        grid=grid,
        bc=bc,
        ic=ic,
        t0=t0,
        t_end=cfg.number("time", "t_end"),
        dt=cfg.number("time", "dt", 1e-4),
        stride=cfg.number("time", "stride", 1, kind=int),
        scheme=scheme,
        metadata={
            "name": cfg.get("meta", "name", ""),
            "note": cfg.get("meta", "note", ""),
            "csv": cfg.get("output", "csv", "simulate.csv"),
        },
    )
    sim.n_steps()
    return sim
