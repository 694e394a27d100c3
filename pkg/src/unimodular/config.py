from __future__ import annotations

from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class MethodConfig:
    """Tolerances and resolutions shared by every method.

    ``tau`` is the half-width of the band around |z| = 1 inside which a root
    counts as unimodular.  ``cap_r``/``cap_n`` are the radius and exponent of
    the argument-principle double integral; ``cap_s_points=None`` picks the
    inner resolution from ``cap_r**cap_n``.  ``mahler_points`` is the outer
    sample count of the default (Jensen) bivariate Mahler measure and
    ``mahler_grid`` the side of the plain torus grid.
    """

    root_tol: float = 1e-12
    max_iter: int = 200
    tau: float = 1e-9
    quad_points: int = 4096
    cap_r: float = 0.99999
    cap_n: int = 300
    cap_t_points: int = 16384
    cap_s_points: int | None = None
    cap_quad_tol: float = 1e-3
    bisect_tol: float = 1e-12
    grid_n: int = 256
    degenerate_floor: float = 1e-12
    mahler_points: int = 16384
    mahler_grid: int = 512
    mahler_tol: float = 1e-4
    exact_tau: float = 1e-10
    disc_cost_limit: int = 10**7

    def __post_init__(self):
        for name in ("root_tol", "max_iter", "tau", "quad_points", "cap_r", "cap_n",
                     "cap_t_points", "bisect_tol", "grid_n", "mahler_points", "mahler_grid", "mahler_tol",
                     "exact_tau"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not self.cap_r < 1:
            raise ValueError("cap_r must be < 1")
        if not self.tau < 0.5:
            raise ValueError("tau must be < 0.5")
        if self.cap_s_points is not None and self.cap_s_points < 2:
            raise ValueError("cap_s_points must be >= 2")

    def with_(self, **changes) -> MethodConfig:
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT = MethodConfig()
