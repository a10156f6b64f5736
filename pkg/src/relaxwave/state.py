"""Uniform 1D finite-volume grid and the evolving simulation state."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .weight_shift import ShiftState

N_GHOST = 2


@dataclass(frozen=True)
class Grid1D:
    """Uniform cell-centered grid on [xi_min, xi_max] with two ghost cells."""

    xi_min: float
    xi_max: float
    n_cells: int
    ghost: int = N_GHOST

    def __post_init__(self):
        if self.n_cells < 8:
            raise ValueError("need at least 8 cells")
        if not self.xi_max > self.xi_min:
            raise ValueError("xi_max must exceed xi_min")

    @property
    def dx(self) -> float:
        return (self.xi_max - self.xi_min) / self.n_cells

    def centers(self) -> np.ndarray:
        """Interior cell centers."""
        return self.xi_min + (np.arange(self.n_cells) + 0.5) * self.dx

    def centers_padded(self) -> np.ndarray:
        """Cell centers including ghost cells on both sides."""
        idx = np.arange(-self.ghost, self.n_cells + self.ghost)
        return self.xi_min + (idx + 0.5) * self.dx

    @classmethod
    def from_bounds(cls, xi_min: float, xi_max: float, dx: float) -> "Grid1D":
        n = int(round((xi_max - xi_min) / dx))
        if abs(n * dx - (xi_max - xi_min)) > 1e-9 * max(1.0, abs(xi_max - xi_min)):
            raise ValueError(f"dx={dx} does not tile [{xi_min}, {xi_max}]")
        return cls(xi_min=xi_min, xi_max=xi_max, n_cells=n)


@dataclass
class SimState:
    """Cell-averaged fields (with ghosts), current time, and shift state."""

    u: np.ndarray
    q: np.ndarray
    t: float = 0.0
    shift: ShiftState = field(default_factory=ShiftState)

    def interior(self, grid: Grid1D):
        g = grid.ghost
        return self.u[g:-g], self.q[g:-g]

    def copy(self) -> "SimState":
        return SimState(
            u=self.u.copy(), q=self.q.copy(), t=self.t,
            shift=ShiftState(
                x=self.shift.x, xdot=self.shift.xdot,
                history_t=list(self.shift.history_t),
                history_x=list(self.shift.history_x),
                history_xdot=list(self.shift.history_xdot),
            ),
        )


def save_checkpoint(path, state: SimState, grid: Grid1D):
    """Write the interior state as a versioned CSV checkpoint."""
    u, q = state.interior(grid)
    xi = grid.centers()
    with open(path, "w") as fh:
        fh.write("# relaxwave-checkpoint v1\n")
        fh.write(f"# t={state.t:.17g} X={state.shift.x:.17g} "
                 f"Xdot={state.shift.xdot:.17g}\n")
        fh.write("xi,u,q\n")
        for row in zip(xi, u, q):
            fh.write(f"{row[0]:.17g},{row[1]:.17g},{row[2]:.17g}\n")


def load_checkpoint(path):
    """Read a checkpoint; returns (xi, u, q, t, X, Xdot)."""
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "# relaxwave-checkpoint v1":
            raise ValueError(f"unrecognized checkpoint header: {header!r}")
        meta = fh.readline().strip().lstrip("# ").split()
        kv = dict(item.split("=") for item in meta)
        data = np.loadtxt(fh, delimiter=",", skiprows=1).reshape(-1, 3)
    return (data[:, 0], data[:, 1], data[:, 2],
            float(kv["t"]), float(kv["X"]), float(kv["Xdot"]))
