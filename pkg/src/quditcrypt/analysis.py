"""Cipher-quality statistics: entropy, adjacency correlation, NPCR, UACI.

Metrics run over a value array at a chosen granularity: the grid's native
digits (quarts or octits) or the reconstructed raster bytes. Entropy is the
plug-in frequency estimate; correlations are Pearson coefficients over
sampled adjacent pairs of a 2-D arrangement of the values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class AnalysisReport:
    entropy_bits: float
    entropy_max: float
    correlation_h: float
    correlation_v: float
    correlation_d: float
    npcr: float | None = None
    uaci: float | None = None

    def rows(self) -> list[tuple[str, float | None]]:
        return [
            ("entropy_bits", self.entropy_bits),
            ("entropy_max", self.entropy_max),
            ("correlation_horizontal", self.correlation_h),
            ("correlation_vertical", self.correlation_v),
            ("correlation_diagonal", self.correlation_d),
            ("npcr", self.npcr),
            ("uaci", self.uaci),
        ]


def entropy_bits(values: np.ndarray, levels: int) -> float:
    """Plug-in Shannon entropy of the value histogram, in bits."""
    counts = np.bincount(values.reshape(-1).astype(np.int64), minlength=levels)
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(-(p * np.log2(p)).sum())


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    a = a.astype(np.float64)
    b = b.astype(np.float64)
    da, db = a - a.mean(), b - b.mean()
    denom = math.sqrt(float((da * da).sum()) * float((db * db).sum()))
    if denom == 0.0:
        return 0.0  # constant input carries no correlation signal
    return float((da * db).sum() / denom)


def as_grid(values: np.ndarray) -> np.ndarray:
    """Arrange a flat value array as a near-square 2-D grid for adjacency."""
    flat = values.reshape(-1)
    rows = 2 ** (int(flat.size).bit_length() // 2)
    while flat.size % rows:
        rows //= 2
    return flat.reshape(rows, flat.size // rows)


def adjacent_correlations(values: np.ndarray, samples: int = 10**4, seed: int = 0) -> tuple[float, float, float]:
    """(horizontal, vertical, diagonal) correlations over sampled pairs."""
    grid = values if values.ndim == 2 else as_grid(values)
    h, w = grid.shape
    rng = np.random.default_rng(seed)
    out = []
    for dr, dc in ((0, 1), (1, 0), (1, 1)):
        rows = rng.integers(0, h - dr, size=samples)
        cols = rng.integers(0, w - dc, size=samples)
        out.append(_pearson(grid[rows, cols], grid[rows + dr, cols + dc]))
    return out[0], out[1], out[2]


def npcr(a: np.ndarray, b: np.ndarray) -> float:
    """Fraction of positions whose values differ."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.mean(a != b))


def uaci(a: np.ndarray, b: np.ndarray, max_value: int) -> float:
    """Mean absolute difference, normalized by the value range."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    diff = np.abs(a.astype(np.int64) - b.astype(np.int64))
    return float(diff.mean() / max_value)


def analyze_values(
    values: np.ndarray,
    levels: int,
    other: np.ndarray | None = None,
    samples: int = 10**4,
    seed: int = 0,
) -> AnalysisReport:
    ch, cv, cd = adjacent_correlations(values, samples=samples, seed=seed)
    report_npcr = report_uaci = None
    if other is not None:
        report_npcr = npcr(values, other)
        report_uaci = uaci(values, other, levels - 1)
    return AnalysisReport(
        entropy_bits=entropy_bits(values, levels),
        entropy_max=math.log2(levels),
        correlation_h=ch,
        correlation_v=cv,
        correlation_d=cd,
        npcr=report_npcr,
        uaci=report_uaci,
    )
