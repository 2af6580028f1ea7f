"""Entropic and Hilbert-Schmidt distances between density matrices.

All entropies are in bits.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import BadParameter, DimensionMismatch
from .qlinalg import hermitian_eigenvalues, hermitian_eigh

ENTROPY_CLIP = 1e-12


class Metric(enum.Enum):
    QJSD = "qjsd"
    QJSD_SQRT = "qjsd-sqrt"
    HS_SQUARED = "hs2"
    HS_NORM = "hs"


def parse_metric(name) -> Metric:
    if isinstance(name, Metric):
        return name
    try:
        return Metric(str(name).lower())
    except ValueError:
        raise BadParameter(f"unknown metric {name!r}") from None


def _same_shape(rho, sigma):
    if rho.shape != sigma.shape:
        raise DimensionMismatch(f"shapes {rho.shape} and {sigma.shape} differ")


def _xlog2x(lam: np.ndarray) -> float:
    lam = lam[lam > ENTROPY_CLIP]
    return float(np.sum(lam * np.log2(lam)))


def von_neumann_entropy(rho: np.ndarray) -> float:
    return max(0.0, -_xlog2x(hermitian_eigenvalues(rho)))


def qjsd(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Quantum Jensen-Shannon divergence, ``S(mid) - S(rho)/2 - S(sigma)/2``."""
    _same_shape(rho, sigma)
    mid = 0.5 * (rho + sigma)
    val = von_neumann_entropy(mid) - 0.5 * von_neumann_entropy(rho) - 0.5 * von_neumann_entropy(sigma)
    return max(0.0, val)


def qjsd_sqrt(rho: np.ndarray, sigma: np.ndarray) -> float:
    return float(np.sqrt(qjsd(rho, sigma)))


def relative_entropy(rho: np.ndarray, sigma: np.ndarray) -> float:
    """``Tr rho (log2 rho - log2 sigma)``; requires supp(rho) within supp(sigma)."""
    _same_shape(rho, sigma)
    lam_r, v_r = hermitian_eigh(rho)
    lam_s, v_s = hermitian_eigh(sigma)
    if np.any(lam_s <= ENTROPY_CLIP):
        # only the eigenvectors of sigma that rho overlaps matter
        overlap = np.abs(v_s.conj().T @ v_r) ** 2 @ np.clip(lam_r, 0, None)
        if np.any(overlap[lam_s <= ENTROPY_CLIP] > ENTROPY_CLIP):
            return float("inf")
    log_s = np.where(lam_s > ENTROPY_CLIP, np.log2(np.clip(lam_s, ENTROPY_CLIP, None)), 0.0)
    # Tr rho log sigma = sum_ij lam_r_i |<s_j|r_i>|^2 log lam_s_j
    weights = np.abs(v_s.conj().T @ v_r) ** 2
    cross = float(log_s @ weights @ np.clip(lam_r, 0, None))
    return _xlog2x(lam_r) - cross


def qjsd_relative_entropy_form(rho: np.ndarray, sigma: np.ndarray) -> float:
    """QJSD as the mean relative entropy of each argument to their midpoint."""
    mid = 0.5 * (rho + sigma)
    return 0.5 * (relative_entropy(rho, mid) + relative_entropy(sigma, mid))


def hs_distance_squared(rho: np.ndarray, sigma: np.ndarray) -> float:
    """``Tr[(rho - sigma)^2]``."""
    _same_shape(rho, sigma)
    diff = rho - sigma
    return float(np.vdot(diff, diff).real)


def hs_norm(rho: np.ndarray, sigma: np.ndarray) -> float:
    return float(np.sqrt(hs_distance_squared(rho, sigma)))


_METRICS = {
    Metric.QJSD: qjsd,
    Metric.QJSD_SQRT: qjsd_sqrt,
    Metric.HS_SQUARED: hs_distance_squared,
    Metric.HS_NORM: hs_norm,
}


def distance(rho: np.ndarray, sigma: np.ndarray, metric=Metric.QJSD) -> float:
    return _METRICS[parse_metric(metric)](rho, sigma)
