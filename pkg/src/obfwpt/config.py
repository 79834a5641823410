"""System parameters and the flat YAML configuration format.

Every key is optional except ``pt_dbm``. ``pt_dbm`` and ``ph_dbm`` may be
lists (the sweep axis); ``N``, ``L`` and ``e_dc`` may be lists to describe a
family of curves, which :func:`expand_curves` splits into single curves.
"""
import dataclasses
import itertools
from dataclasses import dataclass, field

import yaml

from .analytic import AnalyticInputs
from .energy import HarvestParams, derived_constants
from .geometry import AnnulusRegion
from .sim import SimMode


class ConfigError(ValueError):
    pass


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def dbm_to_watts(dbm):
    return 10.0 ** ((dbm - 30.0) / 10.0)


DEFAULT_MODES = (
    "one_bit/dc/decoupled",
    "one_bit/rf/decoupled",
    "one_bit/dc/coupled",
    "one_bit/rf/coupled",
    "random_assignment",
    "full_feedback",
)

_CURVE_KEYS = ("N", "L", "e_dc")
_SWEEP_KEYS = ("pt_dbm", "ph_dbm")
REQUIRED_KEYS = ("pt_dbm",)
SINR_SAMPLERS = ("direct", "constructive")


@dataclass(frozen=True)
class SystemParams:
    pt_dbm: float | tuple = (10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0)
    ph_dbm: float | tuple | None = None
    M: int = 2
    N: int | tuple = 2
    L: int | tuple = 4
    alpha: float = 3.0
    rho_m: float = 10.0
    xi_m: float = 2.0
    lambda_per_m2: float = 0.1
    delta_db: float = 10.0
    sigma2_dbm: float = -10.0
    i_s_amps: float = 1e-3
    mu: float = 2.0
    v_t_volts: float = 28.85e-3
    zeta_dc: float = 0.9
    zeta_rf: float = 0.9
    e_dc: float | tuple = 1.0
    e_rf: float = 1.0
    trials: int = 100_000
    seed: int = 0
    modes: tuple = field(default_factory=lambda: tuple(SimMode.parse(m) for m in DEFAULT_MODES))
    sinr_sampler: str = "direct"

    def __post_init__(self):
        _validate(self)

    # linear-unit views; only defined once the sweep and curve keys are scalars
    @property
    def delta(self) -> float:
        return db_to_linear(self.delta_db)

    @property
    def sigma2(self) -> float:
        return dbm_to_watts(self.sigma2_dbm)

    @property
    def p_t(self) -> float:
        return dbm_to_watts(_scalar(self, "pt_dbm"))

    @property
    def p_h(self) -> float:
        ph = self.ph_dbm if self.ph_dbm is not None else self.pt_dbm
        if isinstance(ph, tuple):
            raise ConfigError("ph_dbm is a sweep list; select a sweep point first")
        return dbm_to_watts(ph)

    @property
    def region(self) -> AnnulusRegion:
        return AnnulusRegion(self.xi_m, self.rho_m)

    def harvest_params(self) -> HarvestParams:
        return HarvestParams(
            i_s=self.i_s_amps, mu=self.mu, v_t=self.v_t_volts,
            zeta_d=self.zeta_dc, zeta_r=self.zeta_rf,
            e_d=_scalar(self, "e_dc"), e_r=self.e_rf,
            p_h=self.p_h, L=_scalar(self, "L"),
        )

    def analytic_inputs(self) -> AnalyticInputs:
        k = derived_constants(self.harvest_params(), self.sigma2)
        return AnalyticInputs(
            region=self.region, M=self.M, N=_scalar(self, "N"), L=_scalar(self, "L"),
            alpha=self.alpha, lam=self.lambda_per_m2, delta=self.delta,
            p_t=self.p_t, G=k.G, Y=k.Y,
        )

    def sweep_points(self) -> list:
        """(pt_dbm, ph_dbm) pairs; ph follows pt when not given."""
        pts = _as_tuple(self.pt_dbm)
        if self.ph_dbm is None:
            return [(p, p) for p in pts]
        phs = _as_tuple(self.ph_dbm)
        if len(phs) == 1:
            return [(p, phs[0]) for p in pts]
        if len(pts) == 1:
            return [(pts[0], h) for h in phs]
        return list(zip(pts, phs))

    def at(self, pt_dbm: float, ph_dbm: float | None = None) -> "SystemParams":
        return dataclasses.replace(self, pt_dbm=float(pt_dbm),
                                   ph_dbm=None if ph_dbm is None else float(ph_dbm))


def _as_tuple(v):
    return v if isinstance(v, tuple) else (v,)


def _scalar(p, name):
    v = getattr(p, name)
    if isinstance(v, tuple):
        raise ConfigError(f"{name} is a list; expand the curve family first")
    return v


def _validate(p: SystemParams):
    def bad(name, why):
        raise ConfigError(f"invalid {name}: {why}")

    if not p.alpha > 2:
        bad("alpha", f"path-loss exponent must exceed 2, got {p.alpha}")
    if not 0 <= p.xi_m < p.rho_m:
        bad("xi_m", f"need 0 <= xi_m < rho_m, got xi_m={p.xi_m}, rho_m={p.rho_m}")
    if p.M < 1:
        bad("M", "must be >= 1")
    for name in ("N", "L"):
        if any(int(v) != v or v < 1 for v in _as_tuple(getattr(p, name))):
            bad(name, "must be integers >= 1")
    if p.lambda_per_m2 < 0:
        bad("lambda_per_m2", "must be non-negative")
    for name in ("i_s_amps", "v_t_volts"):
        if not getattr(p, name) > 0:
            bad(name, "must be positive")
    if not 1 <= p.mu <= 2:
        bad("mu", f"ideality factor must lie in [1, 2], got {p.mu}")
    for name in ("zeta_dc", "zeta_rf", "e_dc", "e_rf"):
        if any(not 0 < v <= 1 for v in _as_tuple(getattr(p, name))):
            bad(name, "efficiencies must lie in (0, 1]")
    if not _as_tuple(p.pt_dbm):
        bad("pt_dbm", "sweep list is empty")
    if p.ph_dbm is not None:
        n_pt, n_ph = len(_as_tuple(p.pt_dbm)), len(_as_tuple(p.ph_dbm))
        if n_ph == 0 or (n_pt > 1 and n_ph > 1 and n_pt != n_ph):
            bad("ph_dbm", "must be a scalar or a list matching pt_dbm")
    if p.trials < 1:
        bad("trials", "must be >= 1")
    if not p.modes:
        bad("modes", "at least one mode is required")
    if p.sinr_sampler not in SINR_SAMPLERS:
        bad("sinr_sampler", f"must be one of {SINR_SAMPLERS}")


_INT_KEYS = {"M", "N", "L", "trials", "seed"}
_FIELDS = {f.name for f in dataclasses.fields(SystemParams)}


def _coerce(key, value):
    if key == "modes":
        if isinstance(value, str):
            value = [value]
        try:
            return tuple(SimMode.parse(str(m)) for m in value)
        except ValueError as exc:
            raise ConfigError(f"invalid modes: {exc}") from None
    if key == "sinr_sampler":
        return str(value)
    if key == "ph_dbm" and value is None:
        return None
    listable = key in _SWEEP_KEYS or key in _CURVE_KEYS
    kind = int if key in _INT_KEYS else float
    try:
        if isinstance(value, list):
            if not listable:
                raise ConfigError(f"invalid {key}: lists are only allowed for "
                                  f"{', '.join(_SWEEP_KEYS + _CURVE_KEYS)}")
            vals = tuple(_number(v, kind) for v in value)
            return vals[0] if len(vals) == 1 and key in _CURVE_KEYS else vals
        return _number(value, kind)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid {key}: {exc}") from None


def _number(v, kind):
    if isinstance(v, bool):
        raise ValueError(f"expected a number, got {v!r}")
    if kind is int:
        if float(v) != int(float(v)):
            raise ValueError(f"expected an integer, got {v!r}")
        return int(float(v))
    return float(v)


def parse_config(text: str) -> SystemParams:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("config must be a flat key: value mapping")
    for key in REQUIRED_KEYS:
        if key not in raw:
            raise ConfigError(f"missing required key: {key}")
    unknown = sorted(set(raw) - _FIELDS)
    if unknown:
        raise ConfigError(f"unknown key: {unknown[0]}")
    return SystemParams(**{k: _coerce(k, v) for k, v in raw.items()})


def dump_config(p: SystemParams) -> str:
    """Serialize to the same flat format :func:`parse_config` reads."""
    out = {}
    for f in dataclasses.fields(SystemParams):
        v = getattr(p, f.name)
        if f.name == "modes":
            v = [str(m) for m in v]
        elif isinstance(v, tuple):
            v = list(v)
        out[f.name] = v
    return yaml.safe_dump(out, sort_keys=False, default_flow_style=None)


def load_config(path) -> SystemParams:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def expand_curves(p: SystemParams) -> list:
    """Split list-valued N, L and e_dc into ``(label, params)`` single curves."""
    combos = itertools.product(*(_as_tuple(getattr(p, k)) for k in _CURVE_KEYS))
    out = []
    for n, l, ed in combos:
        label = f"N{n}_L{l}_edc{ed:g}"
        out.append((label, dataclasses.replace(p, N=n, L=l, e_dc=ed)))
    return out
