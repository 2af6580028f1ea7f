"""Bipartition-averaged negativity and linear entropy."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import BadSubset
from .qlinalg import hermitian_eigenvalues, n_qubits_of, partial_transpose, purity

NEGATIVE_EIGENVALUE_TOL = 1e-12


@dataclass(frozen=True)
class Bipartition:
    """Unordered split of ``n`` qubits; ``subset_a`` is the canonical side."""

    subset_a: tuple[int, ...]
    n_qubits: int

    def __post_init__(self):
        if not self.subset_a or len(self.subset_a) >= self.n_qubits:
            raise BadSubset("bipartition side must be a non-empty proper subset")

    @property
    def m(self) -> int:
        k = len(self.subset_a)
        return min(k, self.n_qubits - k)

    @property
    def complement(self) -> tuple[int, ...]:
        return tuple(q for q in range(self.n_qubits) if q not in self.subset_a)


@dataclass(frozen=True)
class NegativityResult:
    bipartition: Bipartition
    negative_spectrum: tuple[float, ...]
    value: float


@dataclass(frozen=True)
class EntanglementReport:
    per_bipartition: tuple[NegativityResult, ...]
    per_m: tuple[float, ...]
    total: float

    def to_dict(self) -> dict:
        return {
            "bipartitions": [
                {"subset": list(r.bipartition.subset_a), "m": r.bipartition.m, "value": r.value}
                for r in self.per_bipartition
            ],
            "per_m": list(self.per_m),
            "total": self.total,
        }


def enumerate_bipartitions(n_qubits: int) -> list[Bipartition]:
    """All inequivalent splits, grouped by smaller-side size ``m``.

    For an even register the ``m = n/2`` splits are listed once each, as the
    subsets that contain qubit 0.
    """
    if n_qubits < 2:
        raise BadSubset("need at least two qubits to bipartition")
    out = []
    for m in range(1, n_qubits // 2 + 1):
        for sub in itertools.combinations(range(n_qubits), m):
            if 2 * m == n_qubits and 0 not in sub:
                continue
            out.append(Bipartition(sub, n_qubits))
    return out


def negativity(rho: np.ndarray, bip: Bipartition) -> NegativityResult:
    """Normalized negativity ``2/(2**m - 1) * sum |alpha_i|`` of one split.

    ``alpha_i`` are the eigenvalues of the partial transpose below
    ``-NEGATIVE_EIGENVALUE_TOL``. The normalization makes a maximally
    entangled pure state across the split score 1.
    """
    evals = hermitian_eigenvalues(partial_transpose(rho, bip.subset_a))
    neg = evals[evals < -NEGATIVE_EIGENVALUE_TOL]
    value = 2.0 / (2**bip.m - 1) * float(np.sum(np.abs(neg)))
    return NegativityResult(bip, tuple(float(a) for a in neg), value)


def multipartite_entanglement(rho: np.ndarray) -> EntanglementReport:
    n = n_qubits_of(rho)
    results = tuple(negativity(rho, b) for b in enumerate_bipartitions(n))
    per_m = []
    for m in range(1, n // 2 + 1):
        vals = [r.value for r in results if r.bipartition.m == m]
        per_m.append(float(np.mean(vals)))
    return EntanglementReport(results, tuple(per_m), float(np.mean(per_m)))


def entanglement(rho: np.ndarray) -> float:
    """Shorthand for ``multipartite_entanglement(rho).total``."""
    return multipartite_entanglement(rho).total


def linear_entropy(rho: np.ndarray) -> float:
    d = rho.shape[0]
    return min(1.0, max(0.0, d / (d - 1) * (1.0 - purity(rho))))


def schmidt_negativity(psi: np.ndarray, subset_a) -> float:
    """Normalized negativity of a pure state from its Schmidt coefficients.

    Independent of the partial-transpose route: uses the identity
    ``sum |alpha| = ((sum_k sqrt(lambda_k))**2 - 1) / 2``.
    """
    n = n_qubits_of(psi)
    bip = Bipartition(tuple(sorted(subset_a)), n)
    rest = bip.complement
    t = psi.reshape((2,) * n).transpose(list(bip.subset_a) + list(rest))
    s = np.linalg.svd(t.reshape(1 << len(bip.subset_a), -1), compute_uv=False)
    neg_sum = (np.sum(s) ** 2 - 1.0) / 2.0
    return 2.0 / (2**bip.m - 1) * float(neg_sum)
