"""Scan rasters: 2-D arrangements of A-lines and their projections."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .wavelets import Signal

__all__ = ["ScanGrid", "map_project"]


@dataclass(frozen=True)
class ScanGrid:
    """An ny x nx raster of equally sampled A-lines.

    ``data`` has shape (ny, nx, nt); ``spacing`` is optional display
    metadata (meters between scan positions) and plays no computational
    role.
    """

    data: np.ndarray
    sample_rate_hz: float
    spacing: tuple | None = None

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 3 or data.size == 0:
            raise ValueError(f"grid data must be a non-empty (ny, nx, nt) array, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("grid contains NaN or Inf samples")
        if not self.sample_rate_hz > 0:
            raise ValueError(f"sample_rate_hz must be positive, got {self.sample_rate_hz}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))

    @property
    def shape(self) -> tuple:
        return self.data.shape

    def a_line(self, iy: int, ix: int) -> Signal:
        return Signal(self.data[iy, ix], self.sample_rate_hz)

    def signals(self):
        """Iterate A-lines in raster order as ((iy, ix), Signal)."""
        ny, nx, _ = self.data.shape
        for iy in range(ny):
            for ix in range(nx):
                yield (iy, ix), self.a_line(iy, ix)


def map_project(grid: ScanGrid) -> np.ndarray:
    """Maximum amplitude projection: per-pixel max of |A-line| over time."""
    return np.max(np.abs(grid.data), axis=2)
