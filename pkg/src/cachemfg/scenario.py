"""Experiment description: file catalog, popularity model, and all solver/simulator knobs.

A scenario is a flat UTF-8 key-value text file with ``[section]`` headers and
``key = value`` lines (``#`` starts a comment).  Every key is optional except
``[meta] schema_version``; omitted keys take the defaults listed below.

Schema (defaults in parentheses)::

    [meta]       schema_version (1), id ("scenario"), variability ("none"; LVP|SVP|none)
    [files]      count (1), sizes ("1.0"; one float, broadcast, or one per file)
    [popularity] kind ("static-zipf"; static-zipf|piecewise-linear|sinusoidal)
                 zipf_beta (0.8), partial_catalog (false),
                 keyframes ("" ; "t: p1 p2 ..." entries separated by "|" or newlines),
                 sinus_amplitude (0.3), sinus_period (horizon)
    [horizon]    hours (24.0)
    [channel]    alpha (2.0), mu_h (1.0), sigma_h (0.5), static (true)
    [storage]    capacity (0.4), sigma_s (0.1), removal_beta (1.0),
                 init_mean (0.2), init_std (0.1)
    [backhaul]   budget ("1.0"; one float or one per file),
                 keyframes ("" ; optional budget trajectory, same syntax as popularity)
    [cost]       rho1 (4.0), rho2 (0.2), nu (0.0), omega (12.0),
                 terminal_ct (0.0), terminal_lambda_min (0.0),
                 hinge_penalties (false), redundancy_basis ("own"; own|population)
    [radio]      power (1.0), noise (1e-11)
    [grid]       num_s_points (32), num_h_points (16), num_time_steps (1440)
    [solver]     damping (0.5), max_iters (100), tol (1e-4),
                 control_form ("standard"; standard|alt), epsilon_b_rel (1e-6)
    [sim]        num_agents (25), inter_sbs_distance_units (1.0), coverage_radius (2.0),
                 seed (1), arrival_rate_per_sbs (0.7), num_steps (2048),
                 zeta_window_hours (1.0)

Sinusoidal popularity closed form, for file k of V (then renormalised across k)::

    p_k(t) = zipf(k) * max(0, 1 + amplitude * sin(2*pi*t/period + 2*pi*(k-1)/V))

Piecewise-linear schedules interpolate the keyframe vectors in t.  A
full-catalog schedule (``partial_catalog = false``) requires every keyframe to
sum to 1 and renormalises after interpolation.  A partial-catalog schedule
models only a slice of a larger catalog: entries must sum to <= 1 and the
remaining probability mass is implicitly "other content" that is never cached.
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np

__all__ = [
    "ScenarioError",
    "FileSpec",
    "PopularitySchedule",
    "ChannelParams",
    "StorageParams",
    "BackhaulParams",
    "CostParams",
    "RadioParams",
    "GridParams",
    "SolverParams",
    "SimParams",
    "Scenario",
    "zipf_popularity",
    "popularity_vector",
    "popularity_at",
    "load_scenario",
    "parse_scenario_text",
    "save_scenario",
    "apply_overrides",
    "bundled_scenario_path",
]

SCHEMA_VERSION = 1

POPULARITY_KINDS = ("static-zipf", "piecewise-linear", "sinusoidal")
REDUNDANCY_BASES = ("own", "population")
CONTROL_FORMS = ("standard", "alt")
VARIABILITY_LABELS = ("none", "LVP", "SVP")


class ScenarioError(ValueError):
    """Raised for scenario parse errors and invariant violations."""


@dataclass(frozen=True)
class FileSpec:
    """One content item: 1-based id and size in bits (1.0 = normalised unit file)."""

    id: int
    size_bits: float


@dataclass(frozen=True)
class PopularitySchedule:
    kind: str
    catalog_size: int
    horizon: float
    zipf_beta: float = 0.8
    keyframes: tuple[tuple[float, tuple[float, ...]], ...] = ()
    partial_catalog: bool = False
    sinus_amplitude: float = 0.3
    sinus_period: float | None = None
    variability: str = "none"


@dataclass(frozen=True)
class ChannelParams:
    alpha: float = 2.0
    mu_h: float = 1.0
    sigma_h: float = 0.5
    static: bool = True


@dataclass(frozen=True)
class StorageParams:
    capacity: float = 0.4
    sigma_s: float = 0.1
    removal_beta: float = 1.0
    init_mean: float = 0.2
    init_std: float = 0.1


@dataclass(frozen=True)
class BackhaulParams:
    """Per-file budget B_k(t) in bits per hour; constant unless keyframed."""

    budgets: tuple[float, ...] = (1.0,)
    keyframes: tuple[tuple[float, tuple[float, ...]], ...] = ()

    def at(self, t: float, k: int) -> float:
        """Budget for 1-based file k at time t (linear interpolation between keyframes)."""
        if not self.keyframes:
            return self.budgets[k - 1]
        times = [kf[0] for kf in self.keyframes]
        vals = [kf[1][k - 1] for kf in self.keyframes]
        return float(np.interp(t, times, vals))


@dataclass(frozen=True)
class CostParams:
    rho1: float = 4.0
    rho2: float = 0.2
    nu: float = 0.0
    omega: float = 12.0
    terminal_ct: float = 0.0
    terminal_lambda_min: float = 0.0
    hinge_penalties: bool = False
    redundancy_basis: str = "own"


@dataclass(frozen=True)
class RadioParams:
    power: float = 1.0
    noise: float = 1e-11


@dataclass(frozen=True)
class GridParams:
    num_s_points: int = 32
    num_h_points: int = 16
    num_time_steps: int = 1440


@dataclass(frozen=True)
class SolverParams:
    damping: float = 0.5
    max_iters: int = 100
    tol: float = 1e-4
    control_form: str = "standard"
    epsilon_b_rel: float = 1e-6


@dataclass(frozen=True)
class SimParams:
    num_agents: int = 25
    inter_sbs_distance_units: float = 1.0
    coverage_radius: float = 2.0
    seed: int = 1
    arrival_rate_per_sbs: float = 0.7
    num_steps: int = 2048
    zeta_window_hours: float = 1.0


@dataclass(frozen=True)
class Scenario:
    """Fully validated, immutable experiment description."""

    scenario_id: str = "scenario"
    files: tuple[FileSpec, ...] = (FileSpec(1, 1.0),)
    popularity: PopularitySchedule = field(
        default_factory=lambda: PopularitySchedule("static-zipf", 1, 24.0)
    )
    horizon: float = 24.0
    channel: ChannelParams = ChannelParams()
    storage: StorageParams = StorageParams()
    backhaul: BackhaulParams = BackhaulParams()
    cost: CostParams = CostParams()
    radio: RadioParams = RadioParams()
    grid: GridParams = GridParams()
    solver: SolverParams = SolverParams()
    sim: SimParams = SimParams()

    @property
    def num_files(self) -> int:
        return len(self.files)

    def file_size(self, k: int) -> float:
        """Size q_k of 1-based file k."""
        return self.files[k - 1].size_bits

    def with_sim(self, **kwargs) -> "Scenario":
        return replace(self, sim=replace(self.sim, **kwargs))


# ---------------------------------------------------------------------------
# popularity model


def zipf_popularity(k: int, catalog_size: int, beta: float) -> float:
    """Zipf request probability for rank k in a catalog of V items.

    Returns k^(-beta) / sum_{i=1..V} i^(-beta).
    """
    if not 1 <= k <= catalog_size:
        raise ScenarioError(f"file index k={k} outside catalog 1..{catalog_size}")
    if beta < 0:
        raise ScenarioError(f"zipf_beta must be >= 0, got {beta}")
    ranks = np.arange(1, catalog_size + 1, dtype=float)
    weights = ranks ** (-beta)
    return float(k ** (-beta) / weights.sum())


def _check_time(schedule: PopularitySchedule, t: float) -> None:
    if not 0.0 <= t <= schedule.horizon + 1e-12:
        raise ScenarioError(
            f"time t={t} outside horizon [0, {schedule.horizon}]"
        )


def popularity_vector(schedule: PopularitySchedule, t: float) -> np.ndarray:
    """Per-file request probabilities at time t, shape (V,).

    Full-catalog schedules sum to 1; partial-catalog schedules may sum to
    less (remaining mass belongs to unmodelled content).
    """
    _check_time(schedule, t)
    V = schedule.catalog_size
    if schedule.kind == "static-zipf":
        ranks = np.arange(1, V + 1, dtype=float)
        w = ranks ** (-schedule.zipf_beta)
        return w / w.sum()
    if schedule.kind == "piecewise-linear":
        times = np.array([kf[0] for kf in schedule.keyframes])
        table = np.array([kf[1] for kf in schedule.keyframes])  # (K, V)
        out = np.empty(V)
        for j in range(V):
            out[j] = np.interp(t, times, table[:, j])
        total = out.sum()
        if not schedule.partial_catalog and total > 0:
            out = out / total
        elif total > 1.0:
            out = out / total
        return out
    if schedule.kind == "sinusoidal":
        period = schedule.sinus_period or schedule.horizon
        ranks = np.arange(1, V + 1, dtype=float)
        base = ranks ** (-schedule.zipf_beta)
        base = base / base.sum()
        phase = 2.0 * math.pi * (ranks - 1.0) / V
        mod = 1.0 + schedule.sinus_amplitude * np.sin(2.0 * math.pi * t / period + phase)
        out = base * np.maximum(mod, 0.0)
        return out / out.sum()
    raise ScenarioError(f"unknown popularity kind {schedule.kind!r}")


def popularity_at(schedule: PopularitySchedule, t: float, k: int) -> float:
    """Request probability p_{k,t} of 1-based file k at time t."""
    if not 1 <= k <= schedule.catalog_size:
        raise ScenarioError(
            f"file index k={k} outside catalog 1..{schedule.catalog_size}"
        )
    return float(popularity_vector(schedule, t)[k - 1])


# ---------------------------------------------------------------------------
# parsing


def _parse_bool(raw: str, where: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ScenarioError(f"{where}: expected boolean, got {raw!r}")


def _parse_float(raw: str, where: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ScenarioError(f"{where}: expected number, got {raw!r}") from exc


def _parse_int(raw: str, where: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ScenarioError(f"{where}: expected integer, got {raw!r}") from exc


def _parse_floats(raw: str, where: str) -> list[float]:
    parts = raw.replace(",", " ").split()
    if not parts:
        raise ScenarioError(f"{where}: expected at least one number")
    return [_parse_float(p, where) for p in parts]


def _parse_keyframes(raw: str, count: int, where: str):
    """Parse 't: v1 v2 ...' entries separated by '|' or newlines."""
    frames = []
    for chunk in re.split(r"[|\n]", raw):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" not in chunk:
            raise ScenarioError(f"{where}: keyframe {chunk!r} missing ':' separator")
        t_str, vals_str = chunk.split(":", 1)
        t = _parse_float(t_str, where)
        vals = _parse_floats(vals_str, where)
        if len(vals) == 1 and count > 1:
            vals = vals * count
        if len(vals) != count:
            raise ScenarioError(
                f"{where}: keyframe at t={t} has {len(vals)} values, expected {count}"
            )
        frames.append((t, tuple(vals)))
    if not frames:
        raise ScenarioError(f"{where}: no keyframes given")
    times = [f[0] for f in frames]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ScenarioError(f"{where}: keyframe times must be strictly increasing")
    return tuple(frames)


_KNOWN_KEYS = {
    "meta": {"schema_version", "id", "variability"},
    "files": {"count", "sizes"},
    "popularity": {
        "kind",
        "zipf_beta",
        "partial_catalog",
        "keyframes",
        "sinus_amplitude",
        "sinus_period",
    },
    "horizon": {"hours"},
    "channel": {"alpha", "mu_h", "sigma_h", "static"},
    "storage": {"capacity", "sigma_s", "removal_beta", "init_mean", "init_std"},
    "backhaul": {"budget", "keyframes"},
    "cost": {
        "rho1",
        "rho2",
        "nu",
        "omega",
        "terminal_ct",
        "terminal_lambda_min",
        "hinge_penalties",
        "redundancy_basis",
    },
    "radio": {"power", "noise"},
    "grid": {"num_s_points", "num_h_points", "num_time_steps"},
    "solver": {"damping", "max_iters", "tol", "control_form", "epsilon_b_rel"},
    "sim": {
        "num_agents",
        "inter_sbs_distance_units",
        "coverage_radius",
        "seed",
        "arrival_rate_per_sbs",
        "num_steps",
        "zeta_window_hours",
    },
}


def _raw_map(text: str, origin: str) -> dict[str, dict[str, str]]:
    cp = configparser.ConfigParser(
        interpolation=None, delimiters=("=",), inline_comment_prefixes=("#",)
    )
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ScenarioError(f"{origin}: parse error: {exc}") from exc
    if not cp.sections():
        raise ScenarioError(f"{origin}: empty scenario (no sections found)")
    raw: dict[str, dict[str, str]] = {}
    for sec in cp.sections():
        if sec not in _KNOWN_KEYS:
            raise ScenarioError(f"{origin}: unknown section [{sec}]")
        raw[sec] = {}
        for key, val in cp.items(sec):
            if key not in _KNOWN_KEYS[sec]:
                raise ScenarioError(f"{origin}: unknown key {sec}.{key}")
            raw[sec][key] = val
    return raw


def apply_overrides(raw: dict[str, dict[str, str]], overrides: list[str]):
    """Apply ``section.key=value`` override strings to a raw scenario map."""
    for item in overrides:
        if "=" not in item:
            raise ScenarioError(f"override {item!r} is not of the form section.key=value")
        path, value = item.split("=", 1)
        path = path.strip()
        if "." not in path:
            raise ScenarioError(f"override key {path!r} must be section.key")
        sec, key = path.split(".", 1)
        if sec not in _KNOWN_KEYS or key not in _KNOWN_KEYS[sec]:
            raise ScenarioError(f"override references unknown key {path!r}")
        raw.setdefault(sec, {})[key] = value.strip()
    return raw


def _build_scenario(raw: dict[str, dict[str, str]], origin: str) -> Scenario:
    def get(sec: str, key: str, default: str) -> str:
        return raw.get(sec, {}).get(key, default)

    version = _parse_int(get("meta", "schema_version", str(SCHEMA_VERSION)), "meta.schema_version")
    if version != SCHEMA_VERSION:
        raise ScenarioError(f"{origin}: unsupported schema_version {version}")
    scenario_id = get("meta", "id", "scenario")
    variability = get("meta", "variability", "none")
    if variability not in VARIABILITY_LABELS:
        raise ScenarioError(f"meta.variability must be one of {VARIABILITY_LABELS}")

    count = _parse_int(get("files", "count", "1"), "files.count")
    if count < 1:
        raise ScenarioError("files.count must be >= 1")
    sizes = _parse_floats(get("files", "sizes", "1.0"), "files.sizes")
    if len(sizes) == 1:
        sizes = sizes * count
    if len(sizes) != count:
        raise ScenarioError(f"files.sizes has {len(sizes)} entries, expected {count}")
    if any(q <= 0 for q in sizes):
        raise ScenarioError("files.sizes entries must be > 0")
    files = tuple(FileSpec(i + 1, sizes[i]) for i in range(count))

    horizon = _parse_float(get("horizon", "hours", "24.0"), "horizon.hours")
    if horizon <= 0:
        raise ScenarioError("horizon.hours must be > 0")

    kind = get("popularity", "kind", "static-zipf")
    if kind not in POPULARITY_KINDS:
        raise ScenarioError(f"popularity.kind must be one of {POPULARITY_KINDS}")
    zipf_beta = _parse_float(get("popularity", "zipf_beta", "0.8"), "popularity.zipf_beta")
    if zipf_beta < 0:
        raise ScenarioError("popularity.zipf_beta must be >= 0")
    partial = _parse_bool(
        get("popularity", "partial_catalog", "false"), "popularity.partial_catalog"
    )
    keyframes = ()
    if kind == "piecewise-linear":
        kf_raw = get("popularity", "keyframes", "")
        if not kf_raw.strip():
            raise ScenarioError("popularity.keyframes required for piecewise-linear kind")
        keyframes = _parse_keyframes(kf_raw, count, "popularity.keyframes")
        if abs(keyframes[0][0]) > 1e-12 or abs(keyframes[-1][0] - horizon) > 1e-9:
            raise ScenarioError(
                "popularity.keyframes must start at t=0 and end at the horizon"
            )
        for t, vec in keyframes:
            if any(not 0.0 <= v <= 1.0 for v in vec):
                raise ScenarioError(
                    f"popularity.keyframes: entries at t={t} must lie in [0,1]"
                )
            total = sum(vec)
            if partial:
                if total > 1.0 + 1e-9:
                    raise ScenarioError(
                        f"popularity.keyframes: partial-catalog mass {total} > 1 at t={t}"
                    )
            elif abs(total - 1.0) > 1e-6:
                raise ScenarioError(
                    f"popularity.keyframes: vector at t={t} sums to {total}, expected 1"
                )
    sinus_amp = _parse_float(
        get("popularity", "sinus_amplitude", "0.3"), "popularity.sinus_amplitude"
    )
    if not 0.0 <= sinus_amp < 1.0:
        raise ScenarioError("popularity.sinus_amplitude must lie in [0, 1)")
    sinus_period_raw = get("popularity", "sinus_period", "")
    sinus_period = (
        _parse_float(sinus_period_raw, "popularity.sinus_period")
        if sinus_period_raw.strip()
        else None
    )
    popularity = PopularitySchedule(
        kind=kind,
        catalog_size=count,
        horizon=horizon,
        zipf_beta=zipf_beta,
        keyframes=keyframes,
        partial_catalog=partial,
        sinus_amplitude=sinus_amp,
        sinus_period=sinus_period,
        variability=variability,
    )

    channel = ChannelParams(
        alpha=_parse_float(get("channel", "alpha", "2.0"), "channel.alpha"),
        mu_h=_parse_float(get("channel", "mu_h", "1.0"), "channel.mu_h"),
        sigma_h=_parse_float(get("channel", "sigma_h", "0.5"), "channel.sigma_h"),
        static=_parse_bool(get("channel", "static", "true"), "channel.static"),
    )
    if channel.alpha <= 0:
        raise ScenarioError("channel.alpha must be > 0")
    if channel.mu_h <= 0:
        raise ScenarioError("channel.mu_h must be > 0")
    if channel.sigma_h < 0:
        raise ScenarioError("channel.sigma_h must be >= 0")

    storage = StorageParams(
        capacity=_parse_float(get("storage", "capacity", "0.4"), "storage.capacity"),
        sigma_s=_parse_float(get("storage", "sigma_s", "0.1"), "storage.sigma_s"),
        removal_beta=_parse_float(
            get("storage", "removal_beta", "1.0"), "storage.removal_beta"
        ),
        init_mean=_parse_float(get("storage", "init_mean", "0.2"), "storage.init_mean"),
        init_std=_parse_float(get("storage", "init_std", "0.1"), "storage.init_std"),
    )
    if storage.capacity <= 0:
        raise ScenarioError("storage.capacity must be > 0")
    if storage.sigma_s < 0:
        raise ScenarioError("storage.sigma_s must be >= 0")
    if storage.removal_beta <= 0:
        raise ScenarioError("storage.removal_beta must be > 0")
    if storage.init_std < 0:
        raise ScenarioError("storage.init_std must be >= 0")

    budgets = _parse_floats(get("backhaul", "budget", "1.0"), "backhaul.budget")
    if len(budgets) == 1:
        budgets = budgets * count
    if len(budgets) != count:
        raise ScenarioError(f"backhaul.budget has {len(budgets)} entries, expected {count}")
    if any(b < 0 for b in budgets):
        raise ScenarioError("backhaul.budget entries must be >= 0")
    bh_frames = ()
    bh_raw = get("backhaul", "keyframes", "")
    if bh_raw.strip():
        bh_frames = _parse_keyframes(bh_raw, count, "backhaul.keyframes")
        for t, vec in bh_frames:
            if any(v < 0 for v in vec):
                raise ScenarioError(f"backhaul.keyframes: negative budget at t={t}")
    backhaul = BackhaulParams(budgets=tuple(budgets), keyframes=bh_frames)

    cost = CostParams(
        rho1=_parse_float(get("cost", "rho1", "4.0"), "cost.rho1"),
        rho2=_parse_float(get("cost", "rho2", "0.2"), "cost.rho2"),
        nu=_parse_float(get("cost", "nu", "0.0"), "cost.nu"),
        omega=_parse_float(get("cost", "omega", "12.0"), "cost.omega"),
        terminal_ct=_parse_float(get("cost", "terminal_ct", "0.0"), "cost.terminal_ct"),
        terminal_lambda_min=_parse_float(
            get("cost", "terminal_lambda_min", "0.0"), "cost.terminal_lambda_min"
        ),
        hinge_penalties=_parse_bool(
            get("cost", "hinge_penalties", "false"), "cost.hinge_penalties"
        ),
        redundancy_basis=get("cost", "redundancy_basis", "own"),
    )
    if cost.rho1 <= 0 or cost.rho2 <= 0:
        raise ScenarioError("cost.rho1 and cost.rho2 must be > 0")
    if cost.nu < 0 or cost.omega < 0 or cost.terminal_ct < 0:
        raise ScenarioError("cost.nu, cost.omega, cost.terminal_ct must be >= 0")
    if not 0.0 <= cost.terminal_lambda_min <= 1.0:
        raise ScenarioError("cost.terminal_lambda_min must lie in [0, 1]")
    if cost.redundancy_basis not in REDUNDANCY_BASES:
        raise ScenarioError(f"cost.redundancy_basis must be one of {REDUNDANCY_BASES}")

    radio = RadioParams(
        power=_parse_float(get("radio", "power", "1.0"), "radio.power"),
        noise=_parse_float(get("radio", "noise", "1e-11"), "radio.noise"),
    )
    if radio.power <= 0 or radio.noise <= 0:
        raise ScenarioError("radio.power and radio.noise must be > 0")

    grid = GridParams(
        num_s_points=_parse_int(get("grid", "num_s_points", "32"), "grid.num_s_points"),
        num_h_points=_parse_int(get("grid", "num_h_points", "16"), "grid.num_h_points"),
        num_time_steps=_parse_int(
            get("grid", "num_time_steps", "1440"), "grid.num_time_steps"
        ),
    )
    if grid.num_s_points < 16:
        raise ScenarioError("grid.num_s_points must be >= 16")
    if grid.num_h_points < 4:
        raise ScenarioError("grid.num_h_points must be >= 4")
    if grid.num_time_steps < 1:
        raise ScenarioError("grid.num_time_steps must be >= 1")

    solver = SolverParams(
        damping=_parse_float(get("solver", "damping", "0.5"), "solver.damping"),
        max_iters=_parse_int(get("solver", "max_iters", "100"), "solver.max_iters"),
        tol=_parse_float(get("solver", "tol", "1e-4"), "solver.tol"),
        control_form=get("solver", "control_form", "standard"),
        epsilon_b_rel=_parse_float(
            get("solver", "epsilon_b_rel", "1e-6"), "solver.epsilon_b_rel"
        ),
    )
    if not 0.0 < solver.damping <= 1.0:
        raise ScenarioError("solver.damping must lie in (0, 1]")
    if solver.max_iters < 1:
        raise ScenarioError("solver.max_iters must be >= 1")
    if not solver.tol > 0:
        raise ScenarioError("solver.tol must be > 0 (inf allowed)")
    if solver.control_form not in CONTROL_FORMS:
        raise ScenarioError(f"solver.control_form must be one of {CONTROL_FORMS}")
    if not 0.0 < solver.epsilon_b_rel <= 1e-2:
        raise ScenarioError("solver.epsilon_b_rel must lie in (0, 1e-2]")

    sim = SimParams(
        num_agents=_parse_int(get("sim", "num_agents", "25"), "sim.num_agents"),
        inter_sbs_distance_units=_parse_float(
            get("sim", "inter_sbs_distance_units", "1.0"), "sim.inter_sbs_distance_units"
        ),
        coverage_radius=_parse_float(
            get("sim", "coverage_radius", "2.0"), "sim.coverage_radius"
        ),
        seed=_parse_int(get("sim", "seed", "1"), "sim.seed"),
        arrival_rate_per_sbs=_parse_float(
            get("sim", "arrival_rate_per_sbs", "0.7"), "sim.arrival_rate_per_sbs"
        ),
        num_steps=_parse_int(get("sim", "num_steps", "2048"), "sim.num_steps"),
        zeta_window_hours=_parse_float(
            get("sim", "zeta_window_hours", "1.0"), "sim.zeta_window_hours"
        ),
    )
    if sim.num_agents < 1:
        raise ScenarioError("sim.num_agents must be >= 1")
    if sim.inter_sbs_distance_units <= 0:
        raise ScenarioError("sim.inter_sbs_distance_units must be > 0")
    if sim.coverage_radius <= 0:
        raise ScenarioError("sim.coverage_radius must be > 0")
    if sim.seed < 0:
        raise ScenarioError("sim.seed must be >= 0")
    if sim.arrival_rate_per_sbs < 0:
        raise ScenarioError("sim.arrival_rate_per_sbs must be >= 0")
    if sim.num_steps < 1:
        raise ScenarioError("sim.num_steps must be >= 1")
    if sim.zeta_window_hours <= 0:
        raise ScenarioError("sim.zeta_window_hours must be > 0")

    return Scenario(
        scenario_id=scenario_id,
        files=files,
        popularity=popularity,
        horizon=horizon,
        channel=channel,
        storage=storage,
        backhaul=backhaul,
        cost=cost,
        radio=radio,
        grid=grid,
        solver=solver,
        sim=sim,
    )


def parse_scenario_text(text: str, origin: str = "<string>", overrides=None) -> Scenario:
    raw = _raw_map(text, origin)
    if overrides:
        apply_overrides(raw, list(overrides))
    return _build_scenario(raw, origin)


def load_scenario(path: str | Path, overrides=None) -> Scenario:
    """Load and validate a scenario file; raises ScenarioError on any problem."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
    return parse_scenario_text(text, origin=str(path), overrides=overrides)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _fmt_keyframes(frames) -> str:
    return " | ".join(
        f"{_fmt(t)}: " + " ".join(_fmt(v) for v in vec) for t, vec in frames
    )


def save_scenario(sc: Scenario, path: str | Path) -> None:
    """Write a scenario in canonical form; load_scenario(save_scenario(sc)) == sc."""
    lines = [
        "[meta]",
        f"schema_version = {SCHEMA_VERSION}",
        f"id = {sc.scenario_id}",
        f"variability = {sc.popularity.variability}",
        "",
        "[files]",
        f"count = {sc.num_files}",
        "sizes = " + " ".join(_fmt(f.size_bits) for f in sc.files),
        "",
        "[popularity]",
        f"kind = {sc.popularity.kind}",
        f"zipf_beta = {_fmt(sc.popularity.zipf_beta)}",
        f"partial_catalog = {_fmt(sc.popularity.partial_catalog)}",
    ]
    if sc.popularity.keyframes:
        lines.append(f"keyframes = {_fmt_keyframes(sc.popularity.keyframes)}")
    lines += [
        f"sinus_amplitude = {_fmt(sc.popularity.sinus_amplitude)}",
    ]
    if sc.popularity.sinus_period is not None:
        lines.append(f"sinus_period = {_fmt(sc.popularity.sinus_period)}")
    lines += [
        "",
        "[horizon]",
        f"hours = {_fmt(sc.horizon)}",
        "",
        "[channel]",
        f"alpha = {_fmt(sc.channel.alpha)}",
        f"mu_h = {_fmt(sc.channel.mu_h)}",
        f"sigma_h = {_fmt(sc.channel.sigma_h)}",
        f"static = {_fmt(sc.channel.static)}",
        "",
        "[storage]",
        f"capacity = {_fmt(sc.storage.capacity)}",
        f"sigma_s = {_fmt(sc.storage.sigma_s)}",
        f"removal_beta = {_fmt(sc.storage.removal_beta)}",
        f"init_mean = {_fmt(sc.storage.init_mean)}",
        f"init_std = {_fmt(sc.storage.init_std)}",
        "",
        "[backhaul]",
        "budget = " + " ".join(_fmt(b) for b in sc.backhaul.budgets),
    ]
    if sc.backhaul.keyframes:
        lines.append(f"keyframes = {_fmt_keyframes(sc.backhaul.keyframes)}")
    lines += [
        "",
        "[cost]",
        f"rho1 = {_fmt(sc.cost.rho1)}",
        f"rho2 = {_fmt(sc.cost.rho2)}",
        f"nu = {_fmt(sc.cost.nu)}",
        f"omega = {_fmt(sc.cost.omega)}",
        f"terminal_ct = {_fmt(sc.cost.terminal_ct)}",
        f"terminal_lambda_min = {_fmt(sc.cost.terminal_lambda_min)}",
        f"hinge_penalties = {_fmt(sc.cost.hinge_penalties)}",
        f"redundancy_basis = {sc.cost.redundancy_basis}",
        "",
        "[radio]",
        f"power = {_fmt(sc.radio.power)}",
        f"noise = {_fmt(sc.radio.noise)}",
        "",
        "[grid]",
        f"num_s_points = {sc.grid.num_s_points}",
        f"num_h_points = {sc.grid.num_h_points}",
        f"num_time_steps = {sc.grid.num_time_steps}",
        "",
        "[solver]",
        f"damping = {_fmt(sc.solver.damping)}",
        f"max_iters = {sc.solver.max_iters}",
        f"tol = {_fmt(sc.solver.tol)}",
        f"control_form = {sc.solver.control_form}",
        f"epsilon_b_rel = {_fmt(sc.solver.epsilon_b_rel)}",
        "",
        "[sim]",
        f"num_agents = {sc.sim.num_agents}",
        f"inter_sbs_distance_units = {_fmt(sc.sim.inter_sbs_distance_units)}",
        f"coverage_radius = {_fmt(sc.sim.coverage_radius)}",
        f"seed = {sc.sim.seed}",
        f"arrival_rate_per_sbs = {_fmt(sc.sim.arrival_rate_per_sbs)}",
        f"num_steps = {sc.sim.num_steps}",
        f"zeta_window_hours = {_fmt(sc.sim.zeta_window_hours)}",
        "",
    ]
    Path(path).write_text("\n".join(lines), encoding="utf-8")


def bundled_scenario_path(name: str) -> Path:
    """Path to a scenario shipped with the package (e.g. 'fig2.scenario')."""
    ref = resources.files("cachemfg") / "scenarios" / name
    with resources.as_file(ref) as p:
        return Path(p)
