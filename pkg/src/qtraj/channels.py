"""Local decoherence channels in Kraus form and their action on n-qubit states."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import BadParameter, BadQubitIndex, WrongChannelKind
from .qlinalg import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, dagger, kron, n_qubits_of


class ChannelKind(enum.Enum):
    BIT_FLIP = "bf"
    PHASE_FLIP = "pf"
    BIT_PHASE_FLIP = "bpf"
    DEPOLARIZING_LOCAL = "dep-local"
    DEPOLARIZING_GLOBAL = "dep-global"

    @property
    def is_flip(self) -> bool:
        return self in FLIP_KINDS

    @property
    def is_depolarizing(self) -> bool:
        return self in (ChannelKind.DEPOLARIZING_LOCAL, ChannelKind.DEPOLARIZING_GLOBAL)


FLIP_KINDS = (ChannelKind.BIT_FLIP, ChannelKind.PHASE_FLIP, ChannelKind.BIT_PHASE_FLIP)

_FLIP_PAULI = {
    ChannelKind.BIT_FLIP: SIGMA_X,
    ChannelKind.PHASE_FLIP: SIGMA_Z,
    ChannelKind.BIT_PHASE_FLIP: SIGMA_Y,
}


def parse_kind(name) -> ChannelKind:
    """Accept a ``ChannelKind`` or its CLI string (``bf``, ``dep-local`` ...)."""
    if isinstance(name, ChannelKind):
        return name
    try:
        return ChannelKind(str(name).lower())
    except ValueError:
        raise BadParameter(f"unknown channel {name!r}") from None


@dataclass(frozen=True)
class KrausChannel:
    kind: ChannelKind
    p: float
    operators: tuple = field(repr=False)
    p_prime: float | None = None

    def completeness_error(self) -> float:
        if not self.operators:
            return 0.0
        s = sum(dagger(e) @ e for e in self.operators)
        return float(np.max(np.abs(s - I2)))


def depolarizing_p_prime(p: float) -> float:
    # 3p/4 makes the four-operator Kraus set equal (1-p) rho + (p/2) I on a qubit
    return 0.75 * p


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise BadParameter(f"noise parameter p={p} outside [0, 1]")
    return p


def make_channel(kind, p: float) -> KrausChannel:
    """Build the single-qubit Kraus set for ``kind`` at noise level ``p``.

    Flip channels use ``{sqrt(1 - p/2) I, sqrt(p/2) sigma}`` so that ``p = 1``
    is an equal mixture. The local depolarizing channel uses
    ``{sqrt(1 - p') I, sqrt(p'/3) sigma_{x,y,z}}`` with ``p' = 3p/4``. The
    global depolarizing channel has no per-qubit Kraus set; use
    :func:`depolarize_global`.
    """
    kind = parse_kind(kind)
    p = _check_p(p)
    if kind.is_flip:
        ops = (np.sqrt(1 - p / 2) * I2, np.sqrt(p / 2) * _FLIP_PAULI[kind])
        return KrausChannel(kind, p, ops)
    if kind is ChannelKind.DEPOLARIZING_LOCAL:
        pp = depolarizing_p_prime(p)
        ops = (np.sqrt(1 - pp) * I2,) + tuple(
            np.sqrt(pp / 3) * s for s in (SIGMA_X, SIGMA_Y, SIGMA_Z)
        )
        return KrausChannel(kind, p, ops, p_prime=pp)
    return KrausChannel(kind, p, ())


def apply_single_qubit_channel(rho: np.ndarray, ch: KrausChannel, qubit: int) -> np.ndarray:
    """Apply ``sum_j E_j rho E_j^dagger`` on one qubit (0-based, MSB first)."""
    n = n_qubits_of(rho)
    if not 0 <= qubit < n:
        raise BadQubitIndex(f"qubit {qubit} out of range for {n} qubits")
    if not ch.operators:
        raise WrongChannelKind(f"{ch.kind.name} has no single-qubit Kraus set")
    left, right = 1 << qubit, 1 << (n - qubit - 1)
    t = rho.reshape(left, 2, right, left, 2, right)
    ks = np.stack(ch.operators)
    out = np.einsum("kab,ibjlcm,kdc->iajldm", ks, t, ks.conj(), optimize=True)
    return out.reshape(rho.shape)


def apply_product_channel(rho: np.ndarray, ch: KrausChannel) -> np.ndarray:
    """Apply the same local channel to every qubit, in order 0..n-1."""
    if ch.kind is ChannelKind.DEPOLARIZING_GLOBAL:
        raise WrongChannelKind("use depolarize_global for the whole-register map")
    for q in range(n_qubits_of(rho)):
        rho = apply_single_qubit_channel(rho, ch, q)
    return rho


def apply_product_channel_bruteforce(rho: np.ndarray, ch: KrausChannel) -> np.ndarray:
    """Explicit sum over all ``M**n`` tensor products of Kraus operators.

    Exponential cost; kept as an independent check of the sequential path.
    """
    n = n_qubits_of(rho)
    out = np.zeros_like(rho, dtype=complex)
    for ops in itertools.product(ch.operators, repeat=n):
        k = kron(*ops)
        out += k @ rho @ dagger(k)
    return out


def depolarize_global(rho: np.ndarray, p: float) -> np.ndarray:
    """``(p/d) I + (1-p) rho`` on the whole ``d = 2**n`` register."""
    p = _check_p(p)
    d = rho.shape[0]
    return (p / d) * np.eye(d, dtype=complex) + (1 - p) * rho


def evolve(rho: np.ndarray, kind, p: float) -> np.ndarray:
    """State after one application of channel ``kind`` at parameter ``p``."""
    kind = parse_kind(kind)
    if kind is ChannelKind.DEPOLARIZING_GLOBAL:
        return depolarize_global(rho, p)
    return apply_product_channel(rho, make_channel(kind, p))


def final_state(rho0: np.ndarray, kind) -> np.ndarray:
    """End point ``p = 1`` of a flip-channel trajectory."""
    kind = parse_kind(kind)
    if not kind.is_flip:
        raise WrongChannelKind(f"final_state is defined for flip channels, not {kind.name}")
    return apply_product_channel(rho0, make_channel(kind, 1.0))
