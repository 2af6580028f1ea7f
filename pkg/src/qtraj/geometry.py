"""Decoherence trajectories, their distance curves, and final-state geometry."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal

import numpy as np

from .channels import FLIP_KINDS, ChannelKind, evolve, final_state, parse_kind
from .distances import Metric, distance, hs_norm, parse_metric, qjsd
from .entanglement import entanglement, linear_entropy
from .errors import BadParameter, NoDeath
from .qlinalg import maximally_mixed, n_qubits_of

DEATH_TOL = 1e-10


def p_grid(start: float = 0.0, stop: float = 1.0, step: float = 0.01) -> np.ndarray:
    """Uniform grid from ``start`` to ``stop`` inclusive."""
    if step <= 0 or stop < start:
        raise BadParameter(f"bad grid {start}:{stop}:{step}")
    k = int(round((stop - start) / step))
    grid = start + step * np.arange(k + 1)
    grid[-1] = stop
    return np.clip(grid, 0.0, 1.0)


def parse_grid(spec: str) -> np.ndarray:
    """Parse ``start:stop:step``."""
    try:
        a, b, s = (float(x) for x in spec.split(":"))
    except ValueError:
        raise BadParameter(f"grid must look like start:stop:step, got {spec!r}") from None
    return p_grid(a, b, s)


@dataclass
class TrajectoryPoint:
    p: float
    state: np.ndarray = field(repr=False)
    entanglement: float
    linear_entropy: float
    dist_to_initial: float
    dist_to_final: float
    dist_to_mm: float


def reference_final(rho0: np.ndarray, kind) -> np.ndarray:
    kind = parse_kind(kind)
    if kind.is_flip:
        return final_state(rho0, kind)
    return maximally_mixed(n_qubits_of(rho0))


def trajectory(rho0: np.ndarray, kind, grid=None, metric=Metric.QJSD) -> list[TrajectoryPoint]:
    """Evaluate ``rho(p) = channel_p(rho0)`` at every grid point.

    Each point is a single application of the channel with parameter ``p``,
    not a composition of steps.
    """
    kind = parse_kind(kind)
    metric = parse_metric(metric)
    grid = p_grid() if grid is None else np.asarray(grid, dtype=float)
    final = reference_final(rho0, kind)
    mm = maximally_mixed(n_qubits_of(rho0))
    points = []
    for p in grid:
        rho = evolve(rho0, kind, float(p))
        points.append(
            TrajectoryPoint(
                p=float(p),
                state=rho,
                entanglement=entanglement(rho),
                linear_entropy=linear_entropy(rho),
                dist_to_initial=distance(rho, rho0, metric),
                dist_to_final=distance(rho, final, metric),
                dist_to_mm=distance(rho, mm, metric),
            )
        )
    return points


CURVE_FIELDS = ("entanglement", "linear_entropy", "dist_to_initial", "dist_to_final", "dist_to_mm")


def curves(points: list[TrajectoryPoint]) -> dict[str, np.ndarray]:
    out = {"p": np.array([pt.p for pt in points])}
    for name in CURVE_FIELDS:
        out[name] = np.array([getattr(pt, name) for pt in points])
    return out


def coincidence_check(rho0: np.ndarray, kinds, grid=None, metric=Metric.QJSD) -> dict[str, float]:
    """Largest across-channel spread of each trajectory curve over the grid."""
    kinds = [parse_kind(k) for k in kinds]
    if len(kinds) < 2:
        raise BadParameter("coincidence_check needs at least two channels")
    stacked = [curves(trajectory(rho0, k, grid, metric)) for k in kinds]
    report = {}
    for name in CURVE_FIELDS:
        arr = np.stack([c[name] for c in stacked])
        report[name] = float(np.max(arr.max(axis=0) - arr.min(axis=0)))
    return report


def entanglement_vs_mixedness(points: list[TrajectoryPoint], step: float = 0.001):
    """Resample E as a function of S_L on a regular abscissa.

    Returns ``(s_grid, e_values)``; assumes S_L is non-decreasing along the
    trajectory.
    """
    c = curves(points)
    s, e = c["linear_entropy"], c["entanglement"]
    order = np.argsort(s, kind="stable")
    s, e = s[order], e[order]
    s_grid = np.arange(s[0], s[-1] + 0.5 * step, step)
    s_grid = s_grid[s_grid <= s[-1]]
    return s_grid, np.interp(s_grid, s, e)


def mixedness_curve_spread(rho0: np.ndarray, kinds, grid=None, step: float = 0.001) -> float:
    """Max cross-channel deviation of E(S_L) on the common S_L range."""
    per = [curves(trajectory(rho0, k, grid)) for k in kinds]
    lo = max(c["linear_entropy"].min() for c in per)
    hi = min(c["linear_entropy"].max() for c in per)
    if hi < lo:
        return float("inf")
    s_grid = np.arange(lo, hi + 0.5 * step, step)
    s_grid = s_grid[s_grid <= hi]
    vals = []
    for c in per:
        order = np.argsort(c["linear_entropy"], kind="stable")
        vals.append(np.interp(s_grid, c["linear_entropy"][order], c["entanglement"][order]))
    vals = np.stack(vals)
    return float(np.max(vals.max(axis=0) - vals.min(axis=0)))


TABLE_ROWS = ("initial-final", "initial-MM", "final-MM", "final-final")


@dataclass
class GeometrySummary:
    """Pairwise distances among initial, the three flip finals, and MM."""

    labels: tuple[str, ...]
    qjsd: np.ndarray
    hs_norm: np.ndarray

    def _idx(self, label: str) -> int:
        return self.labels.index(label)

    def _groups(self):
        finals = [lab for lab in self.labels if lab.startswith("final_")]
        return {
            "initial-final": [("initial", f) for f in finals],
            "initial-MM": [("initial", "MM")],
            "final-MM": [(f, "MM") for f in finals],
            "final-final": list(itertools.combinations(finals, 2)),
        }

    def row_values(self, row: str, metric: str = "qjsd") -> np.ndarray:
        mat = self.qjsd if metric == "qjsd" else self.hs_norm
        return np.array([mat[self._idx(a), self._idx(b)] for a, b in self._groups()[row]])

    def table(self) -> dict[str, tuple[float, float]]:
        """Row name to (mean d_JS, mean HS norm) over the equivalent pairs."""
        return {
            r: (float(self.row_values(r, "qjsd").mean()), float(self.row_values(r, "hs").mean()))
            for r in TABLE_ROWS
        }

    def spreads(self) -> dict[str, tuple[float, float]]:
        out = {}
        for r in TABLE_ROWS:
            q, h = self.row_values(r, "qjsd"), self.row_values(r, "hs")
            out[r] = (float(np.ptp(q)), float(np.ptp(h)))
        return out

    def render(self) -> str:
        lines = [f"{'states':<14} {'d_JS':>8} {'d_HS':>8}"]
        for row, (js, hs) in self.table().items():
            lines.append(f"{row:<14} {round4(js):>8} {round4(hs):>8}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "qjsd": self.qjsd.tolist(),
            "hs_norm": self.hs_norm.tolist(),
            "table": {r: {"d_JS": js, "d_HS": hs} for r, (js, hs) in self.table().items()},
        }


def round4(x: float) -> str:
    return str(Decimal(repr(float(x))).quantize(Decimal("0.0001"), rounding=ROUND_HALF_EVEN))


def final_state_geometry(rho0: np.ndarray) -> GeometrySummary:
    states = {"initial": rho0}
    for kind in FLIP_KINDS:
        states[f"final_{kind.value.upper()}"] = final_state(rho0, kind)
    states["MM"] = maximally_mixed(n_qubits_of(rho0))
    labels = tuple(states)
    k = len(labels)
    js, hs = np.zeros((k, k)), np.zeros((k, k))
    for i, j in itertools.combinations(range(k), 2):
        a, b = states[labels[i]], states[labels[j]]
        js[i, j] = js[j, i] = qjsd(a, b)
        hs[i, j] = hs[j, i] = hs_norm(a, b)
    return GeometrySummary(labels, js, hs)


@dataclass(frozen=True)
class SuddenDeathRecord:
    p_star: float
    s_l_at_death: float


def sudden_death(
    rho0: np.ndarray,
    kind=ChannelKind.DEPOLARIZING_LOCAL,
    tol: float = DEATH_TOL,
    grid=None,
    p_tol: float = 1e-8,
) -> SuddenDeathRecord:
    """Locate the smallest ``p`` past which the entanglement stays below ``tol``.

    The grid scan brackets the crossing and checks that E is non-increasing;
    bisection then narrows the bracket to ``p_tol``.
    """
    kind = parse_kind(kind)
    if not kind.is_depolarizing:
        raise BadParameter("sudden death is only tracked for depolarizing channels")
    if entanglement(rho0) <= tol:
        raise BadParameter("initial state carries no entanglement")
    grid = p_grid() if grid is None else np.asarray(grid, dtype=float)
    e = np.array([entanglement(evolve(rho0, kind, float(p))) for p in grid])
    if np.any(np.diff(e) > tol):
        raise NoDeath("entanglement is not monotone on the grid")
    dead = np.nonzero(e <= tol)[0]
    if dead.size == 0:
        raise NoDeath(f"entanglement {e[-1]:.3g} still above {tol} at p={grid[-1]}")
    j = dead[0]
    lo, hi = float(grid[j - 1]), float(grid[j])
    while hi - lo > p_tol:
        mid = 0.5 * (lo + hi)
        if entanglement(evolve(rho0, kind, mid)) <= tol:
            hi = mid
        else:
            lo = mid
    return SuddenDeathRecord(hi, linear_entropy(evolve(rho0, kind, hi)))
