"""Run configuration (key=value text) and machine-readable reports."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, fields
from typing import Sequence

from .field import FIELDS
from .moments import MomentReport, MomentRequest

# documented defaults; an empty config file yields exactly these
DEFAULTS = {
    "fields": "-1",
    "mode": "first",
    "alpha": "0.25",
    "beta": "0.3",
    "r": "0.25",
    "X": "1000",
    "X_grid": "250,500,1000,2000,4000",
    "weight": "bump",
    "eps": "1e-9",
    "rel_eps": "1e-10",
    "workers": "1",
    "convention": "printed",
    "format": "json",
    "out": "",
}
ALIASES = {"field": "fields", "x": "X", "x_grid": "X_grid", "X-grid": "X_grid"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    fields: tuple[int, ...] = (-1,)
    mode: str = "first"
    alpha: complex = 0.25
    beta: complex = 0.3
    r: complex = 0.25
    X: float = 1000.0
    X_grid: tuple[float, ...] = (250.0, 500.0, 1000.0, 2000.0, 4000.0)
    weight: str = "bump"
    eps: float = 1e-9
    rel_eps: float = 1e-10
    workers: int = 1
    convention: str = "printed"
    format: str = "json"
    out: str = ""


def _num(key: str, text: str, kind):
    try:
        return kind(text.replace(" ", ""))
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {text!r}") from None


def build_config(values: dict[str, str]) -> RunConfig:
    v = dict(DEFAULTS)
    for k, val in values.items():
        k = ALIASES.get(k, k)
        if k not in DEFAULTS:
            raise ConfigError(f"unknown key {k!r}")
        v[k] = val
    fields_ = tuple(_num("fields", x, int) for x in v["fields"].split(",") if x.strip())
    for d in fields_:
        if d not in FIELDS:
            raise ConfigError(f"fields: {d} is not one of the class-number-one fields {FIELDS}")
    cfg = RunConfig(
        fields=fields_,
        mode=v["mode"].strip(),
        alpha=_num("alpha", v["alpha"], complex),
        beta=_num("beta", v["beta"], complex),
        r=_num("r", v["r"], complex),
        X=_num("X", v["X"], float),
        X_grid=tuple(_num("X_grid", x, float) for x in v["X_grid"].split(",") if x.strip()),
        weight=v["weight"].strip(),
        eps=_num("eps", v["eps"], float),
        rel_eps=_num("rel_eps", v["rel_eps"], float),
        workers=_num("workers", v["workers"], int),
        convention=v["convention"].strip(),
        format=v["format"].strip(),
        out=v["out"].strip(),
    )
    validate_config(cfg)
    return cfg


def validate_config(cfg: RunConfig) -> None:
    """Range checks happen here, before any computation starts."""
    if not cfg.fields:
        raise ConfigError("fields: at least one field is required")
    for d in cfg.fields:
        for X in (cfg.X,) + cfg.X_grid:
            request_for(cfg, d, X).validate()
    if not (0 < cfg.eps < 1 and 0 < cfg.rel_eps < 1):
        raise ConfigError("eps and rel_eps must lie in (0, 1)")
    if cfg.workers < 1:
        raise ConfigError("workers must be at least 1")
    if cfg.format not in ("json", "csv"):
        raise ConfigError("format must be json or csv")


def request_for(cfg: RunConfig, d: int, X: float | None = None) -> MomentRequest:
    return MomentRequest(d, cfg.X if X is None else X, cfg.mode, cfg.alpha, cfg.beta, cfg.r,
                         cfg.weight, cfg.eps, cfg.rel_eps, cfg.convention)


def parse_config(text: str) -> RunConfig:
    """key=value lines; '#' starts a comment; unknown keys are rejected."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        k, val = (s.strip() for s in line.split("=", 1))
        values[k] = val
    return build_config(values)


# -- reports ---------------------------------------------------------------------------

REPORT_FIELDS = tuple(f.name for f in fields(MomentReport))
_COMPLEX = {f.name for f in fields(MomentReport) if f.type in ("complex", complex)}
_FLOAT = {f.name for f in fields(MomentReport) if f.type in ("float", float)}
_INT = {f.name for f in fields(MomentReport) if f.type in ("int", int)}


def _columns() -> list[str]:
    cols = []
    for name in REPORT_FIELDS:
        cols += [f"{name}_re", f"{name}_im"] if name in _COMPLEX else [name]
    return cols


CSV_COLUMNS = tuple(_columns()) + ("fitted_exponent_so_far",)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _flatten(rep: MomentReport) -> list[tuple[str, object]]:
    out = []
    for name in REPORT_FIELDS:
        v = getattr(rep, name)
        if name in _COMPLEX:
            v = complex(v)
            out += [(f"{name}_re", v.real), (f"{name}_im", v.imag)]
        else:
            out.append((name, v))
    return out


def _json_value(v) -> str:
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return _fmt(v)
    return json.dumps(v)


def emit_report(reports: MomentReport | Sequence[MomentReport], format: str = "json",
                fitted: Sequence[float | None] | None = None) -> bytes:
    """Stable field order, floats at 17 significant digits."""
    single = isinstance(reports, MomentReport)
    reps = [reports] if single else list(reports)
    fitted = list(fitted) if fitted is not None else [None] * len(reps)
    if format == "json":
        objs = []
        for rep, fe in zip(reps, fitted):
            items = _flatten(rep) + [("fitted_exponent_so_far", fe)]
            objs.append("{" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in items) + "}")
        body = objs[0] if single else "[\n" + ",\n".join(objs) + "\n]"
        return (body + "\n").encode()
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for rep, fe in zip(reps, fitted):
            row = [_fmt(v) if isinstance(v, float) else v for _, v in _flatten(rep)]
            row.append("" if fe is None else _fmt(fe))
            w.writerow(row)
        return buf.getvalue().encode()
    raise ValueError("format must be json or csv")


def _rebuild(flat: dict) -> MomentReport:
    kw = {}
    for name in REPORT_FIELDS:
        if name in _COMPLEX:
            kw[name] = complex(float(flat[f"{name}_re"]), float(flat[f"{name}_im"]))
        elif name in _FLOAT:
            kw[name] = float(flat[name])
        elif name in _INT:
            kw[name] = int(flat[name])
        else:
            kw[name] = flat[name]
    return MomentReport(**kw)


def parse_report(data: bytes, format: str = "json") -> list[MomentReport]:
    text = data.decode()
    if format == "json":
        obj = json.loads(text)
        return [_rebuild(o) for o in (obj if isinstance(obj, list) else [obj])]
    rows = list(csv.DictReader(io.StringIO(text)))
    return [_rebuild(r) for r in rows]
