"""Continuous-time traffic generator for a one-way road of sensing cells.

Mobile users enter a road of equal-length cells as a Poisson process, cross
at a uniformly drawn constant speed, and while on the road start data
sessions as a per-user Poisson process with exponentially distributed
durations (overlapping sessions allowed).  Each cell's base station reads 1
at a sampling instant iff some user inside the cell has an active session.
Randomness comes from a single PCG64 generator, so equal (config, seed)
pairs reproduce streams bit-identically across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, SessionBoundsError
from .observations import ObservationStream

KMH_TO_MS = 1.0 / 3.6


@dataclass(frozen=True)
class SimulationConfig:
    duration_slots: int
    road_length: float = 600.0
    num_cells: int = 3
    arrival_rate: float = 1.0  # users per second
    speed_range: tuple[float, float] = (28.0, 44.0)  # m/s, uniform
    traffic_rate: float = 0.002  # session starts per second per user
    service_mean: float = 2.0  # seconds, exponential
    sense_interval: float = 1.0  # seconds
    seed: int = 0

    def __post_init__(self):
        v_min, v_max = self.speed_range
        if not 0 < v_min <= v_max:
            raise ConfigError(f"bad speed range {self.speed_range}")
        if self.duration_slots < 1:
            raise ConfigError("duration_slots must be positive")
        if self.num_cells < 1 or self.road_length <= 0:
            raise ConfigError("need a positive road length and cell count")
        if min(self.arrival_rate, self.traffic_rate) < 0:
            raise ConfigError("rates must be nonnegative")
        if self.service_mean <= 0 or self.sense_interval <= 0:
            raise ConfigError("service_mean and sense_interval must be positive")


@dataclass(frozen=True)
class UserState:
    entry_time: float
    speed: float
    #: absolute (start, end) second intervals; may overlap each other
    active_sessions: tuple[tuple[float, float], ...]

    def exit_time(self, road_length: float) -> float:
        return self.entry_time + road_length / self.speed


class Simulation:
    """One seeded realization of the scenario; build, optionally inject, run."""

    def __init__(self, config: SimulationConfig):
        self.config = config
        self._scripted: list[UserState] = []

    def inject_user(self, entry_time: float, speed: float, sessions) -> "Simulation":
        """Add a fully scripted user (test hook bypassing all random draws)."""
        cfg = self.config
        if speed <= 0:
            raise ConfigError(f"scripted speed must be positive, got {speed}")
        transit = cfg.road_length / speed
        for start, end in sessions:
            if not (entry_time <= start <= end <= entry_time + transit):
                raise SessionBoundsError(
                    f"session ({start}, {end}) outside traversal "
                    f"[{entry_time}, {entry_time + transit}]"
                )
        self._scripted.append(
            UserState(
                entry_time=float(entry_time),
                speed=float(speed),
                active_sessions=tuple((float(s), float(e)) for s, e in sessions),
            )
        )
        return self

    def _draw_users(self, rng: np.random.Generator, horizon: float):
        """Poisson arrivals on [0, horizon); sessions drawn per user in entry order."""
        cfg = self.config
        users = []
        if cfg.arrival_rate <= 0:
            return users
        t = 0.0
        while True:
            t += rng.exponential(1.0 / cfg.arrival_rate)
            if t >= horizon:
                break
            speed = rng.uniform(cfg.speed_range[0], cfg.speed_range[1])
            transit = cfg.road_length / speed
            sessions = []
            if cfg.traffic_rate > 0:
                s = 0.0
                while True:
                    s += rng.exponential(1.0 / cfg.traffic_rate)
                    if s >= transit:
                        break
                    length = rng.exponential(cfg.service_mean)
                    # the session cannot outlive the user's time on the road
                    sessions.append((t + s, t + min(s + length, transit)))
            users.append(
                UserState(entry_time=t, speed=speed, active_sessions=tuple(sessions))
            )
        return users

    def run(self) -> ObservationStream:
        cfg = self.config
        rng = np.random.Generator(np.random.PCG64(cfg.seed))
        n = cfg.duration_slots
        m = cfg.num_cells
        horizon = n * cfg.sense_interval
        cell_len = cfg.road_length / m

        values = np.zeros((m, n), dtype=np.int8)
        for user in self._draw_users(rng, horizon) + self._scripted:
            for start, end in user.active_sessions:
                # sampling instants n*sense_interval inside [start, end]
                first = int(np.ceil(start / cfg.sense_interval))
                last = int(np.floor(end / cfg.sense_interval))
                for slot in range(max(first, 1), min(last, n) + 1):
                    tau = slot * cfg.sense_interval
                    pos = user.speed * (tau - user.entry_time)
                    if 0 <= pos < cfg.road_length:
                        values[int(pos // cell_len), slot - 1] = 1
        return ObservationStream(values, slot_duration=cfg.sense_interval)


def run(config: SimulationConfig) -> ObservationStream:
    """Convenience wrapper: simulate one stream from a config."""
    return Simulation(config).run()
