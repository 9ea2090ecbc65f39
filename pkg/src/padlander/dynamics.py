"""Point-mass quadrotor with an inner position-setpoint tracking loop.

The vehicle is a double integrator with first-order velocity tracking:
the setpoint error maps to a velocity command (clamped to the flight
envelope), the velocity error maps to an acceleration (clamped in norm),
and external forces enter as F/m. Roll/pitch are synthesized from the
commanded lateral acceleration so observation consumers see plausible
attitude signals; yaw is held at zero.

Envelope: |vx|, |vy| <= 3 m/s, |vz| <= 2 m/s after every step.

The integration core runs on python scalars: the environment substeps
this at 240 Hz inside a 30 Hz control loop, and scalar math is an order
of magnitude faster than 3-vector numpy ops at that size.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

VEL_ENVELOPE = np.array([3.0, 3.0, 2.0])  # m/s, per component
SETPOINT_DELTA_BOUND = 0.1  # m, max |delta| per axis per command


class StateCorruptionError(ValueError):
    """A non-finite quantity reached the dynamics."""


class ActionBoundError(ValueError):
    """A setpoint delta exceeded the post-scaling bound."""


def _vec3(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected 3-vector, got shape {v.shape}")
    return v


@dataclass(frozen=True)
class DroneState:
    position: np.ndarray  # m, world frame
    velocity: np.ndarray  # m/s
    attitude: np.ndarray  # rad (roll, pitch, yaw)
    angular_velocity: np.ndarray  # rad/s
    setpoint: np.ndarray  # m, commanded position

    @staticmethod
    def at_rest(position) -> "DroneState":
        p = _vec3(position)
        z = np.zeros(3)
        return DroneState(p, z.copy(), z.copy(), z.copy(), p.copy())

    def is_finite(self) -> bool:
        return all(
            np.all(np.isfinite(v))
            for v in (self.position, self.velocity, self.attitude, self.angular_velocity, self.setpoint)
        )


@dataclass(frozen=True)
class DroneParams:
    mass: float = 0.027  # kg, Crazyflie-class airframe
    kp_pos: float = 4.0  # 1/s, setpoint -> velocity-command gain
    tau_v: float = 0.25  # s, velocity tracking time constant
    a_max: float = 10.0  # m/s^2, acceleration norm clamp
    physics_dt: float = 1.0 / 240.0  # s
    gravity: float = 9.81  # m/s^2
    vel_envelope: np.ndarray = field(default_factory=lambda: VEL_ENVELOPE.copy())

    def __post_init__(self):
        if self.mass <= 0 or self.tau_v <= 0 or self.physics_dt <= 0:
            raise ValueError("mass, tau_v and physics_dt must be positive")


def clamp_envelope(v: np.ndarray, envelope: np.ndarray = VEL_ENVELOPE) -> np.ndarray:
    return np.clip(v, -envelope, envelope)


def step_drone_many(
    state: DroneState,
    params: DroneParams,
    external_force: np.ndarray,
    dt: float,
    n_substeps: int = 1,
) -> DroneState:
    """Advance the drone n substeps of dt each (semi-implicit Euler).

    Per substep: velocity is updated first, clamped to the envelope, then
    position integrates the new velocity. Roll/pitch come from the commanded
    tracking acceleration (pitch = atan2(ax, g), roll = atan2(-ay, g));
    angular velocity is the attitude finite difference over dt.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if n_substeps < 1:
        raise ValueError(f"n_substeps must be >= 1, got {n_substeps}")
    force = _vec3(external_force)

    px, py, pz = (float(c) for c in state.position)
    vx, vy, vz = (float(c) for c in state.velocity)
    roll, pitch = float(state.attitude[0]), float(state.attitude[1])
    spx, spy, spz = (float(c) for c in state.setpoint)
    ex, ey, ez = (float(c) for c in params.vel_envelope)
    fax, fay, faz = (float(c) / params.mass for c in force)
    # one fused scalar check: any nan/inf in the inputs poisons the sum
    probe = px + py + pz + vx + vy + vz + spx + spy + spz + roll + pitch
    if not math.isfinite(probe) or not math.isfinite(fax + fay + faz):
        if not state.is_finite():
            raise StateCorruptionError("non-finite drone state")
        raise StateCorruptionError("non-finite external force")
    kp, inv_tau, a_max, g = params.kp_pos, 1.0 / params.tau_v, params.a_max, params.gravity

    for _ in range(n_substeps):
        vcx = min(max(kp * (spx - px), -ex), ex)
        vcy = min(max(kp * (spy - py), -ey), ey)
        vcz = min(max(kp * (spz - pz), -ez), ez)
        ax = (vcx - vx) * inv_tau
        ay = (vcy - vy) * inv_tau
        az = (vcz - vz) * inv_tau
        norm = math.sqrt(ax * ax + ay * ay + az * az)
        if norm > a_max:
            scale = a_max / norm
            ax *= scale
            ay *= scale
            az *= scale
        prev_roll, prev_pitch = roll, pitch
        pitch = math.atan2(ax, g)
        roll = math.atan2(-ay, g)
        vx = min(max(vx + (ax + fax) * dt, -ex), ex)
        vy = min(max(vy + (ay + fay) * dt, -ey), ey)
        vz = min(max(vz + (az + faz) * dt, -ez), ez)
        px += vx * dt
        py += vy * dt
        pz += vz * dt

    return DroneState(
        np.array([px, py, pz]),
        np.array([vx, vy, vz]),
        np.array([roll, pitch, 0.0]),
        np.array([(roll - prev_roll) / dt, (pitch - prev_pitch) / dt, 0.0]),
        state.setpoint.copy(),
    )


def step_drone(
    state: DroneState,
    params: DroneParams,
    external_force: np.ndarray,
    dt: float,
) -> DroneState:
    """One physics substep; see step_drone_many."""
    return step_drone_many(state, params, external_force, dt, 1)


def apply_setpoint_delta(state: DroneState, delta: np.ndarray) -> DroneState:
    """Re-anchor the setpoint at position + delta (the agent's actuation channel).

    delta must already be scaled: |component| <= 0.1 m. Anything larger means
    an unscaled action leaked through and is rejected.
    """
    d = _vec3(delta)
    if not np.all(np.isfinite(d)):
        raise StateCorruptionError("non-finite setpoint delta")
    if np.max(np.abs(d)) > SETPOINT_DELTA_BOUND + 1e-12:
        raise ActionBoundError(
            f"setpoint delta {d} exceeds per-axis bound {SETPOINT_DELTA_BOUND} m"
        )
    return replace(state, setpoint=state.position + d)
