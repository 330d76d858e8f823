from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field


@dataclass(frozen=True)
class BoundConstants:
    """Implicit constants that the asymptotic bounds leave unspecified.

    O-term constants default to 0, so every calculator evaluates its main
    term only.  ``c_M`` seeds the degree search and ``c_add`` stands in for
    the additive O(1) next to ``log ||f||``.
    """

    c_sqrt: float = 0.0          # p^(1/2) term in the local valuation bound
    c_lin: float = 0.0           # linear-in-s term in the local valuation bound
    c_sal2: float = 0.0          # O(1) inside the global determinant bound
    kappa_V: float = 1.0         # |c_f| >= kappa_V ||f|| threshold (display only)
    c_M: float = 1.2             # multiplier in the degree bound
    c_add: float = 1.0           # additive constant next to log ||f||
    c_count: float = 1.0         # multiplier in the point-count bound
    c_count_add: float = 0.0     # additive O(1) in the point-count bound
    box_radius_schedule: tuple[int, ...] = (1, 2, 4, 8)

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if f.name == "box_radius_schedule":
                continue
            if getattr(self, f.name) < 0:
                raise ValueError(f"{f.name} must be nonnegative")
        sched = tuple(int(r) for r in self.box_radius_schedule)
        if not sched or any(r < 0 for r in sched) or any(b <= a for a, b in zip(sched, sched[1:])):
            raise ValueError("box_radius_schedule must be nonnegative and strictly increasing")
        object.__setattr__(self, "box_radius_schedule", sched)

    def replace(self, **changes) -> "BoundConstants":
        return dataclasses.replace(self, **changes)

    def to_json(self) -> dict:
        d = dataclasses.asdict(self)
        d["box_radius_schedule"] = list(self.box_radius_schedule)
        return d

