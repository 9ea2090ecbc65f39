"""Moving-platform trajectories and the stochastic wind process.

Four benchmark scenarios:

  SPL   static pad
  LMPL  piecewise-linear XY motion, heading re-drawn every period
  CMPL  circular-arc XY motion, arc direction flipping every period
  CTL   CMPL motion plus a vertical sinusoid

Platform positions are exact time integrals of the reported velocities and
pure functions of (spec, t). Wind is a two-level Bernoulli process: one draw
decides whether an episode is windy at all, then each step of a windy episode
draws whether a force is applied, with components uniform in +-bound N.
"""

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

PLATFORM_SPEED_LIMIT = 0.46  # m/s per component


class ScenarioKind(enum.Enum):
    SPL = "SPL"
    LMPL = "LMPL"
    CMPL = "CMPL"
    CTL = "CTL"


@dataclass(frozen=True)
class PlatformState:
    position: np.ndarray  # m, pad center, top surface
    velocity: np.ndarray  # m/s
    half_extent: float = 0.25  # m, half side of the 0.5 m pad


@dataclass(frozen=True)
class ScenarioSpec:
    kind: ScenarioKind
    seed: int = 0
    direction_change_period: float = 3.0  # s
    curve_radius: float = 0.5  # m
    vertical_amplitude: float = 0.2  # m, CTL only
    speed: float = 0.3  # m/s
    initial_heading: float = 0.0  # rad, first LMPL segment

    def __post_init__(self):
        if not 0.0 <= self.speed <= PLATFORM_SPEED_LIMIT:
            raise ValueError(f"platform speed must be in [0, {PLATFORM_SPEED_LIMIT}], got {self.speed}")
        if self.direction_change_period <= 0 or self.curve_radius <= 0:
            raise ValueError("direction_change_period and curve_radius must be positive")


@dataclass(frozen=True)
class WindState:
    episode_windy: bool
    force: np.ndarray  # N, currently applied
    p_episode: float = 0.2
    p_step: float = 0.2
    component_bound: float = 0.005  # N


def init_wind(
    rng: np.random.Generator,
    p_episode: float = 0.2,
    p_step: float = 0.2,
    bound: float = 0.005,
) -> WindState:
    """Draw the episode-level wind coin; force starts at zero."""
    if not (0.0 <= p_episode <= 1.0 and 0.0 <= p_step <= 1.0):
        raise ValueError("wind probabilities must be in [0, 1]")
    if bound < 0:
        raise ValueError("force bound must be non-negative")
    windy = bool(rng.uniform() < p_episode)
    return WindState(windy, np.zeros(3), p_episode, p_step, bound)


def sample_wind_step(state: WindState, rng: np.random.Generator) -> WindState:
    """Resample the applied force for one control step of the episode."""
    if not state.episode_windy:
        return replace(state, force=np.zeros(3))
    if rng.uniform() < state.p_step:
        force = rng.uniform(-state.component_bound, state.component_bound, size=3)
    else:
        force = np.zeros(3)
    return replace(state, force=force)


def _segment_heading(spec: ScenarioSpec, k: int) -> float:
    if k == 0:
        return spec.initial_heading
    rng = np.random.default_rng(np.random.SeedSequence([spec.seed, k]))
    return float(rng.uniform(0.0, 2.0 * math.pi))


def _lmpl(spec: ScenarioSpec, t: float):
    period = spec.direction_change_period
    k = int(t // period)
    pos = np.zeros(3)
    for j in range(k):
        phi = _segment_heading(spec, j)
        pos += spec.speed * period * np.array([math.cos(phi), math.sin(phi), 0.0])
    phi = _segment_heading(spec, k)
    direction = np.array([math.cos(phi), math.sin(phi), 0.0])
    pos += spec.speed * (t - k * period) * direction
    vel = spec.speed * direction
    return pos, vel


def _arc_angle(spec: ScenarioSpec, t: float):
    """Arc-length angle and its sign for CMPL's alternating arcs."""
    period = spec.direction_change_period
    omega = spec.speed / spec.curve_radius
    k = int(t // period)
    # Full segments alternate +omega, -omega starting positive.
    theta = 0.0
    for j in range(k):
        theta += ((-1) ** j) * omega * period
    sign = (-1) ** k
    theta += sign * omega * (t - k * period)
    return theta, sign * omega


def _cmpl(spec: ScenarioSpec, t: float):
    r = spec.curve_radius
    theta, dtheta = _arc_angle(spec, t)
    center = np.array([-r, 0.0, 0.0])  # circle through the origin at t = 0
    pos = center + r * np.array([math.cos(theta), math.sin(theta), 0.0])
    vel = r * dtheta * np.array([-math.sin(theta), math.cos(theta), 0.0])
    return pos, vel


def _ctl(spec: ScenarioSpec, t: float):
    pos, vel = _cmpl(spec, t)
    # Vertical period is twice the heading period so the peak vertical speed
    # stays well inside the platform envelope at the default amplitude.
    omega_z = 2.0 * math.pi / (2.0 * spec.direction_change_period)
    pos = pos + np.array([0.0, 0.0, spec.vertical_amplitude * math.sin(omega_z * t)])
    vel = vel + np.array([0.0, 0.0, spec.vertical_amplitude * omega_z * math.cos(omega_z * t)])
    return pos, vel


def platform_at(spec: ScenarioSpec, t: float, half_extent: float = 0.25) -> PlatformState:
    """Platform state at time t; pure in (spec, t)."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    if spec.kind is ScenarioKind.SPL:
        pos, vel = np.zeros(3), np.zeros(3)
    elif spec.kind is ScenarioKind.LMPL:
        pos, vel = _lmpl(spec, t)
    elif spec.kind is ScenarioKind.CMPL:
        pos, vel = _cmpl(spec, t)
    elif spec.kind is ScenarioKind.CTL:
        pos, vel = _ctl(spec, t)
    else:  # pragma: no cover
        raise ValueError(f"unknown scenario kind {spec.kind}")
    vel = np.clip(vel, -PLATFORM_SPEED_LIMIT, PLATFORM_SPEED_LIMIT)
    return PlatformState(pos, vel, half_extent)
