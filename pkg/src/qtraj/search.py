"""Simulated-annealing search for initial states with robust entanglement."""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .channels import FLIP_KINDS, ChannelKind, evolve, parse_kind
from .entanglement import enumerate_bipartitions, entanglement
from .errors import ConfigError
from .qlinalg import (
    I2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    haar_random_local_unitary,
    haar_random_pure_state,
    ket_to_dm,
    kron,
    n_qubits_of,
    partial_transpose,
)

_PAULI = {
    ChannelKind.BIT_FLIP: SIGMA_X,
    ChannelKind.PHASE_FLIP: SIGMA_Z,
    ChannelKind.BIT_PHASE_FLIP: SIGMA_Y,
}


def default_objective_grid() -> list[float]:
    return [round(0.05 * k, 2) for k in range(1, 20)]


@dataclass
class AnnealConfig:
    n_qubits: int = 4
    p_grid_objective: list = field(default_factory=default_objective_grid)
    channel_set: list = field(default_factory=lambda: list(FLIP_KINDS))
    initial_temperature: float = 0.005
    cooling_factor: float = 0.9
    steps_per_temperature: int = 50
    min_temperature: float = 1e-5
    move_scale: float = 20.0
    restarts: int = 3
    quench_steps: int = 1500
    seed: int = 2009

    def __post_init__(self):
        self.channel_set = [parse_kind(k) for k in self.channel_set]
        self.p_grid_objective = [float(p) for p in self.p_grid_objective]
        self.validate()

    def validate(self) -> None:
        if not 0 < self.cooling_factor < 1:
            raise ConfigError("cooling_factor must lie in (0, 1)")
        if self.initial_temperature <= 0 or self.min_temperature <= 0:
            raise ConfigError("temperatures must be positive")
        if self.steps_per_temperature < 0 or self.restarts < 1 or self.quench_steps < 0:
            raise ConfigError("need steps >= 0 and restarts >= 1")
        if self.move_scale <= 0:
            raise ConfigError("move_scale must be positive")
        if self.n_qubits < 2:
            raise ConfigError("need at least two qubits")
        if not self.channel_set:
            raise ConfigError("channel_set is empty")
        if any(k is ChannelKind.DEPOLARIZING_GLOBAL for k in self.channel_set):
            raise ConfigError("global depolarizing is not a local channel")
        if not self.p_grid_objective or any(not 0 < p < 1 for p in self.p_grid_objective):
            raise ConfigError("objective grid must be non-empty and inside (0, 1)")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["channel_set"] = [k.value for k in self.channel_set]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "AnnealConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        return cls(**d)


@dataclass
class RobustnessScore:
    per_channel_mean_E: dict
    objective: float

    def to_dict(self) -> dict:
        return {
            "per_channel_mean_E": {k.value: v for k, v in self.per_channel_mean_E.items()},
            "objective": self.objective,
        }


class _Evaluator:
    """Batched E(p) for local Pauli-type channels on pure inputs.

    For a channel with Kraus set ``{sqrt(1 - q) I, sqrt(q_a) P_a}`` applied to
    every qubit, the output is a polynomial in the weights whose coefficients
    are the pattern-resolved terms ``P_S rho P_S``. Partial transposes are
    linear, so they are taken once per pattern class and recombined per p.
    """

    def __init__(self, n_qubits: int, kinds, grid):
        self.n = n_qubits
        self.kinds = [parse_kind(k) for k in kinds]
        self.grid = np.asarray(grid, dtype=float)
        self.bips = enumerate_bipartitions(n_qubits)
        m = np.array([b.m for b in self.bips])
        self.bip_norm = 2.0 / (2.0**m - 1)
        self.m_groups = [np.nonzero(m == k)[0] for k in range(1, n_qubits // 2 + 1)]
        self._setup = {k: self._pattern_setup(k) for k in self.kinds}

    def _pattern_setup(self, kind: ChannelKind):
        if kind is ChannelKind.DEPOLARIZING_LOCAL:
            letters = [I2, SIGMA_X, SIGMA_Y, SIGMA_Z]
            pp = 0.75 * self.grid
            w = np.stack([1 - pp, pp / 3, pp / 3, pp / 3], axis=1)
        else:
            letters = [I2, _PAULI[kind]]
            w = np.stack([1 - self.grid / 2, self.grid / 2], axis=1)
        # group patterns by their letter counts, which fix the p-dependent weight
        groups: dict[tuple, list] = {}
        for pat in itertools.product(range(len(letters)), repeat=self.n):
            counts = tuple(pat.count(a) for a in range(len(letters)))
            groups.setdefault(counts, []).append(kron(*(letters[a] for a in pat)))
        keys = list(groups)
        ops = [np.stack(groups[c]) for c in keys]
        weights = np.stack(
            [np.prod(w ** np.array(c)[None, :], axis=1) for c in keys], axis=1
        )  # (n_p, n_classes)
        return ops, weights

    def entanglement_curves(self, psi: np.ndarray) -> dict:
        """Map each channel to E(p) on the grid."""
        out = {}
        for kind in self.kinds:
            ops, weights = self._setup[kind]
            terms = []
            for group in ops:
                phis = group @ psi  # (g, d)
                terms.append(np.einsum("ga,gb->ab", phis, phis.conj()))
            pts = np.stack(
                [np.stack([partial_transpose(t, b.subset_a) for b in self.bips]) for t in terms]
            )  # (classes, bips, d, d)
            mats = np.einsum("pc,cbij->pbij", weights, pts)
            mats = 0.5 * (mats + mats.conj().swapaxes(-1, -2))
            ev = np.linalg.eigvalsh(mats)
            neg = np.where(ev < -1e-12, -ev, 0.0).sum(axis=-1) * self.bip_norm
            e = np.mean([neg[:, g].mean(axis=1) for g in self.m_groups], axis=0)
            out[kind] = e
        return out

    def score(self, psi: np.ndarray) -> RobustnessScore:
        curves = self.entanglement_curves(psi)
        per = {k: float(np.mean(v)) for k, v in curves.items()}
        return RobustnessScore(per, min(per.values()))


def entanglement_curve(psi: np.ndarray, kind, grid) -> np.ndarray:
    """E(p) of ``channel_p(|psi><psi|)`` on ``grid`` via the generic pipeline."""
    rho0 = ket_to_dm(psi)
    return np.array([entanglement(evolve(rho0, kind, float(p))) for p in grid])


def robustness_objective(psi: np.ndarray, cfg: AnnealConfig | None = None) -> RobustnessScore:
    """Worst-channel mean entanglement over the objective grid."""
    cfg = AnnealConfig() if cfg is None else cfg
    ev = _Evaluator(n_qubits_of(psi), cfg.channel_set, cfg.p_grid_objective)
    return ev.score(psi)


def _neighbor(psi: np.ndarray, scale: float, rng: np.random.Generator) -> np.ndarray:
    d = psi.size
    step = (rng.standard_normal(d) + 1j * rng.standard_normal(d)) * (scale / math.sqrt(2))
    out = psi + step
    return out / np.linalg.norm(out)


def _anneal_once(ev: _Evaluator, cfg: AnnealConfig, rng: np.random.Generator):
    psi = haar_random_pure_state(cfg.n_qubits, rng)
    cur = ev.score(psi).objective
    best_psi, best = psi, cur
    t = cfg.initial_temperature
    while t >= cfg.min_temperature and cfg.steps_per_temperature > 0:
        for _ in range(cfg.steps_per_temperature):
            cand = _neighbor(psi, cfg.move_scale * t, rng)
            val = ev.score(cand).objective
            delta = val - cur
            if delta >= 0 or rng.random() < math.exp(delta / t):
                psi, cur = cand, val
                if cur > best:
                    best_psi, best = psi, cur
        t *= cfg.cooling_factor
    return best_psi


def _quench(ev: _Evaluator, psi: np.ndarray, cfg: AnnealConfig, rng: np.random.Generator):
    """Zero-temperature polish with a step size that grows on success."""
    cur = ev.score(psi).objective
    step = 10 * cfg.move_scale * cfg.min_temperature
    for _ in range(cfg.quench_steps):
        cand = _neighbor(psi, step, rng)
        val = ev.score(cand).objective
        if val > cur:
            psi, cur = cand, val
            step *= 1.5
        else:
            step *= 0.9
        step = min(max(step, 1e-6), 0.1)
    return psi


def anneal_robust_state(cfg: AnnealConfig | None = None, progress=None):
    """Metropolis annealing on the unit sphere of ``2**n`` complex amplitudes.

    The cooled chains end on the Metropolis scale ``min_temperature``, which
    is coarser than the pointwise gaps between competing E(p) curves at large
    p, so the best chain end is polished by ``quench_steps`` greedy moves.
    Returns ``(psi, score)``. Each restart draws from its own child of
    ``cfg.seed``, so the result is reproducible.
    """
    cfg = AnnealConfig() if cfg is None else cfg
    cfg.validate()
    ev = _Evaluator(cfg.n_qubits, cfg.channel_set, cfg.p_grid_objective)
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts + 1)
    best_psi, best_score = None, None
    for r, ss in enumerate(seeds[:-1]):
        psi = _anneal_once(ev, cfg, np.random.default_rng(ss))
        score = ev.score(psi)
        if progress is not None:
            progress(r, score)
        if best_score is None or score.objective > best_score.objective:
            best_psi, best_score = psi, score
    if cfg.quench_steps:
        best_psi = _quench(ev, best_psi, cfg, np.random.default_rng(seeds[-1]))
        best_score = ev.score(best_psi)
    return best_psi, best_score


def lu_orbit(psi: np.ndarray, count: int, seed=None) -> list[np.ndarray]:
    """``count`` images of ``psi`` under independent Haar local unitaries."""
    if count < 1:
        raise ConfigError("count must be positive")
    n = n_qubits_of(psi)
    rng = np.random.default_rng(seed)
    return [haar_random_local_unitary(n, rng) @ psi for _ in range(count)]


def dominance_report(psi: np.ndarray, references: dict, cfg: AnnealConfig | None = None) -> dict:
    """Pointwise comparison of E(p) curves of ``psi`` against reference kets."""
    cfg = AnnealConfig() if cfg is None else cfg
    ev = _Evaluator(n_qubits_of(psi), cfg.channel_set, cfg.p_grid_objective)
    mine = ev.entanglement_curves(psi)
    report = {}
    for name, ref in references.items():
        theirs = ev.entanglement_curves(ref)
        per = {}
        for kind in cfg.channel_set:
            margin = mine[kind] - theirs[kind]
            per[kind.value] = {
                "min_margin": float(margin.min()),
                "dominates": bool(np.all(margin >= -1e-10)),
            }
        report[name] = per
    return report
