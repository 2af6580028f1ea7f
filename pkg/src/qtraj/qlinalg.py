"""Dense linear algebra on n-qubit operators.

States are plain numpy arrays: kets are 1-D of length ``2**n`` and density
matrices are ``(2**n, 2**n)``. Qubit ``0`` is the most significant bit of the
computational-basis index, so ``basis_state("0011")`` reads left to right.
"""

from __future__ import annotations

import json
from typing import Iterable, Sequence

import numpy as np

from .errors import BadSubset, DimensionMismatch, NotHermitian

SPECTRAL_TOL = 1e-10
ALGEBRAIC_TOL = 1e-12

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}

OMEGA = -0.5 + 0.5j * np.sqrt(3.0)


def n_qubits_of(a: np.ndarray) -> int:
    """Number of qubits for a ket or square operator."""
    dim = a.shape[0]
    n = dim.bit_length() - 1
    if dim < 1 or 1 << n != dim or (a.ndim == 2 and a.shape[1] != dim):
        raise DimensionMismatch(f"shape {a.shape} is not a qubit register")
    return n


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def kron(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of any number of operators, left to right."""
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def is_hermitian(m: np.ndarray, atol: float = SPECTRAL_TOL) -> bool:
    return bool(np.max(np.abs(m - dagger(m)), initial=0.0) <= atol)


def hermitian_eigh(m: np.ndarray, atol: float = SPECTRAL_TOL):
    """Ascending eigenvalues and eigenvectors of a Hermitian matrix.

    Raises
    ------
    NotHermitian
        If ``max |m - m^dagger| > atol``.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    if not is_hermitian(m, atol):
        raise NotHermitian("matrix is not Hermitian within %g" % atol)
    # symmetrize so LAPACK sees an exactly Hermitian input
    return np.linalg.eigh(0.5 * (m + dagger(m)))


def hermitian_eigenvalues(m: np.ndarray, atol: float = SPECTRAL_TOL) -> np.ndarray:
    """Real spectrum of a Hermitian matrix in ascending order."""
    return hermitian_eigh(m, atol)[0]


def _normalize_subset(subset: Iterable[int], n: int) -> tuple[int, ...]:
    idx = tuple(sorted(set(int(q) for q in subset)))
    if any(q < 0 or q >= n for q in idx):
        raise BadSubset(f"qubit indices {idx} out of range for {n} qubits")
    return idx


def partial_trace(rho: np.ndarray, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix on the qubits in ``keep`` (others traced out).

    ``keep`` must be a non-empty proper subset of ``range(n)``; the kept
    qubits retain their relative order.
    """
    n = n_qubits_of(rho)
    keep = _normalize_subset(keep, n)
    if not keep or len(keep) == n:
        raise BadSubset("keep must be a non-empty proper subset of the qubits")
    traced = [q for q in range(n) if q not in keep]
    dk, dt = 1 << len(keep), 1 << len(traced)
    order = list(keep) + traced
    t = rho.reshape((2,) * (2 * n))
    t = t.transpose(order + [n + q for q in order]).reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def partial_transpose(rho: np.ndarray, subset: Iterable[int]) -> np.ndarray:
    """Transpose the row/column indices of the qubits in ``subset`` only."""
    n = n_qubits_of(rho)
    subset = _normalize_subset(subset, n)
    if not subset:
        return np.array(rho, copy=True)
    axes = list(range(2 * n))
    for q in subset:
        axes[q], axes[n + q] = axes[n + q], axes[q]
    d = 1 << n
    return rho.reshape((2,) * (2 * n)).transpose(axes).reshape(d, d)


def ket_to_dm(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def maximally_mixed(n_qubits: int) -> np.ndarray:
    d = 1 << n_qubits
    return np.eye(d, dtype=complex) / d


def basis_state(bits: str) -> np.ndarray:
    """Computational basis ket ``|bits>`` with the first character as qubit 0."""
    psi = np.zeros(1 << len(bits), dtype=complex)
    psi[int(bits, 2)] = 1.0
    return psi


def _superpose(terms: Sequence[tuple[str, complex]]) -> np.ndarray:
    psi = sum(a * basis_state(bits) for bits, a in terms)
    return psi / np.linalg.norm(psi)


def ghz_state(n_qubits: int = 4) -> np.ndarray:
    return _superpose([("0" * n_qubits, 1), ("1" * n_qubits, 1)])


def w_state(n_qubits: int = 4) -> np.ndarray:
    return _superpose(
        [("0" * k + "1" + "0" * (n_qubits - k - 1), 1) for k in range(n_qubits)]
    )


def hs_state() -> np.ndarray:
    """Higuchi-Sudbery four-qubit state; every one-qubit marginal is I/2."""
    w = OMEGA
    return _superpose(
        [
            ("1100", 1), ("0011", 1),
            ("1001", w), ("0110", w),
            ("1010", w * w), ("0101", w * w),
        ]
    )


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def haar_random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar unitary via QR of a complex Ginibre matrix with phase fix."""
    rng = _rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def haar_random_pure_state(n_qubits: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    d = 1 << n_qubits
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def haar_random_local_unitary(n_qubits: int, seed=None) -> np.ndarray:
    """``U_0 x ... x U_{n-1}`` with independent Haar single-qubit factors."""
    rng = _rng(seed)
    return kron(*(haar_random_unitary(2, rng) for _ in range(n_qubits)))


def random_density_matrix(n_qubits: int, seed=None, rank: int | None = None) -> np.ndarray:
    """Random mixed state from the induced (Ginibre) measure."""
    rng = _rng(seed)
    d = 1 << n_qubits
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def check_density_matrix(
    rho: np.ndarray,
    herm_tol: float = ALGEBRAIC_TOL,
    trace_tol: float = ALGEBRAIC_TOL,
    psd_tol: float = SPECTRAL_TOL,
) -> None:
    """Raise ``ValueError`` unless ``rho`` is Hermitian, unit-trace and PSD."""
    n_qubits_of(rho)
    if not is_hermitian(rho, herm_tol):
        raise NotHermitian("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1) > trace_tol:
        raise ValueError(f"trace {tr} differs from 1")
    lo = hermitian_eigenvalues(rho)[0]
    if lo < -psd_tol:
        raise ValueError(f"negative eigenvalue {lo}")


def purity(rho: np.ndarray) -> float:
    # Tr(rho^2) for Hermitian rho is the squared Frobenius norm
    return float(np.vdot(rho, rho).real)


def to_json(a: np.ndarray) -> str:
    """Serialize a ket or operator as ``{n_qubits, entries: [[re, im], ...]}``.

    Entries are stored row-major; Python floats round-trip exactly through
    ``json``.
    """
    a = np.asarray(a, dtype=complex)
    return json.dumps(
        {
            "n_qubits": n_qubits_of(a),
            "shape": list(a.shape),
            "entries": [[z.real, z.imag] for z in a.ravel()],
        }
    )


def from_json(text: str) -> np.ndarray:
    obj = json.loads(text)
    n = int(obj["n_qubits"])
    d = 1 << n
    flat = np.array([complex(re, im) for re, im in obj["entries"]])
    if "shape" in obj:
        shape = tuple(obj["shape"])
    else:
        shape = (d,) if flat.size == d else (d, d)
    if flat.size != int(np.prod(shape)) or shape[0] != d:
        raise DimensionMismatch(f"{flat.size} entries do not fit {n} qubits")
    return flat.reshape(shape)
