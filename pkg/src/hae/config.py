"""Geometry config files (JSON content, ``.cfg`` suffix) and their validation."""

import hashlib
import json
from importlib import resources
from pathlib import Path

from .picard_fuchs import OperatorError, PFOperator, _mum_order
from .ratfunc import RationalFunction, parse_rational, poly_mul
from .special_geometry import Gauge, GeometryData

BUNDLED = ("quintic", "local-p2")


class ConfigError(ValueError):
    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


def bundled_path(name):
    return resources.files("hae").joinpath("data").joinpath(f"{name}.cfg")


def read_config(path):
    """Parse a config from a path or a bundled geometry name."""
    if str(path) in BUNDLED:
        text = bundled_path(str(path)).read_text()
    else:
        text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"not valid JSON: {exc}") from exc


def config_hash(raw):
    canon = json.dumps(raw, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(canon.encode()).hexdigest()


def _field(raw, key, conv, default=...):
    if key not in raw:
        if default is ...:
            raise ConfigError(key, "missing")
        return default
    try:
        return conv(raw[key])
    except ConfigError:
        raise
    except (TypeError, ValueError, KeyError, ZeroDivisionError) as exc:
        raise ConfigError(key, str(exc)) from exc


def _poly(v):
    if not isinstance(v, list):
        raise ValueError("expected a list of 'p/q' strings")
    return tuple(parse_rational(c) for c in v)


def _int(v):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValueError(f"expected an integer, got {v!r}")
    return v


def _constraint(c):
    if c == "constant":
        return c
    if isinstance(c, str) and c.startswith("n2(") and c.endswith(")"):
        return ("n2", int(c[3:-1]))
    raise ValueError(f"unknown constraint {c!r}; use 'constant' or 'n2(d)'")


def geometry_from_config(raw):
    name = _field(raw, "name", str)
    factors = _field(raw, "discriminant_factors", lambda v: tuple(_poly(f) for f in v))
    disc = [1]
    for f in factors:
        disc = poly_mul(disc, list(f))
    try:
        op = PFOperator.from_records(raw["operator"], disc)
        op.validate()
        _mum_order(op)
    except KeyError as exc:
        raise ConfigError("operator", f"record missing {exc}") from exc
    except (OperatorError, TypeError, ValueError) as exc:
        raise ConfigError("operator", str(exc)) from exc
    kappa = _field(raw, "kappa", parse_rational)
    if not kappa:
        raise ConfigError("kappa", "yukawa normalization impossible (kappa = 0)")
    yuk = raw.get("yukawa", {})
    z_exp = _field(yuk, "z_exponent", _int, 3)
    if z_exp != 3:
        raise ConfigError("yukawa.z_exponent", "only 3 is supported")
    exps = _field(yuk, "disc_exponents", lambda v: tuple(_int(e) for e in v), (1,) * len(factors))
    if len(exps) != len(factors):
        raise ConfigError("yukawa.disc_exponents", "need one exponent per discriminant factor")
    compact = _field(raw, "compact", bool, True)
    chi = _field(raw, "chi", _int)
    c2H = _field(raw, "c2H", _int, None)
    if compact and c2H is None:
        raise ConfigError("c2H", "required for compact geometries")
    con_a = _field(raw, "conifold_a", lambda v: tuple(parse_rational(a) for a in v), ())
    if con_a and len(con_a) != len(factors):
        raise ConfigError("conifold_a", "need one value per discriminant factor")
    q_sign = _field(raw, "q_sign", _int, 1)
    if q_sign not in (1, -1):
        raise ConfigError("q_sign", "must be 1 or -1")
    g = raw.get("gauge", {})
    gauge = Gauge(*(_field(g, k, RationalFunction.from_config, RationalFunction([]))
                    for k in ("s", "h_z", "h")))
    ansatz = _field(raw, "ansatz_basis",
                    lambda v: tuple(RationalFunction.from_config(f) for f in v), ())
    constraints = _field(raw, "constraints", lambda v: tuple(_constraint(c) for c in v),
                         ("constant", ("n2", 1), ("n2", 2)))
    return GeometryData(name, op, kappa, chi, c2H, factors, 3, exps, con_a, compact, q_sign,
                        gauge, ansatz, constraints)


def load_geometry(path):
    """Read and validate a geometry; returns ``(GeometryData, raw config)``."""
    raw = read_config(path)
    if not isinstance(raw, dict):
        raise ConfigError("<file>", "top level must be an object")
    return geometry_from_config(raw), raw


def expected_vanishing(raw):
    return {int(g): [int(d) for d in ds] for g, ds in raw.get("expected_vanishing", {}).items()}
