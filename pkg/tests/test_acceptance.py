"""Acceptance criteria; one PASS/FAIL line per criterion in the terminal summary."""

import numpy as np
import pytest

from qtraj import qlinalg as ql
from qtraj.channels import FLIP_KINDS, ChannelKind, evolve, make_channel
from qtraj.distances import (
    hs_distance_squared,
    hs_norm,
    qjsd,
    qjsd_relative_entropy_form,
    qjsd_sqrt,
)
from qtraj.entanglement import (
    entanglement,
    linear_entropy,
    multipartite_entanglement,
    schmidt_negativity,
)
from qtraj.geometry import (
    coincidence_check,
    curves,
    final_state_geometry,
    p_grid,
    sudden_death,
    trajectory,
)
from qtraj.search import AnnealConfig, anneal_robust_state, dominance_report, lu_orbit, robustness_objective

RESULTS: list[tuple[str, bool, str]] = []


def record(name: str, ok: bool, detail: str = "") -> None:
    RESULTS.append((name, bool(ok), detail))
    assert ok, f"{name}: {detail}"


GRID = p_grid(0, 1, 0.01)

# published distance table (d_JS, d_HS norm) for the HS initial state
PUBLISHED = {
    "initial-final": (0.6548, 0.9129),
    "initial-MM": (0.8285, 0.9682),
    "final-MM": (0.4188, 0.3227),
    "final-final": (0.6352, 0.4546),
}


@pytest.fixture(scope="module")
def hs_dm():
    return ql.ket_to_dm(ql.hs_state())


@pytest.fixture(scope="module")
def geometry(hs_dm):
    return final_state_geometry(hs_dm)


@pytest.mark.parametrize("row", list(PUBLISHED))
@pytest.mark.parametrize("col", [0, 1], ids=["d_JS", "d_HS"])
def test_c1_distance_table(geometry, row, col):
    got = geometry.table()[row][col]
    want = PUBLISHED[row][col]
    record(f"C1 table {row} {['d_JS', 'd_HS'][col]}", abs(got - want) <= 5e-4,
           f"computed {got:.6f}, published {want}")


def test_c2_analytic_cross_checks(hs_dm):
    mm = ql.maximally_mixed(4)
    closed = (17 / 32) * np.log2(32 / 17) + (15 / 32) * 5 - 2
    js = qjsd(hs_dm, mm)
    hs2 = hs_distance_squared(hs_dm, mm)
    hsn = hs_norm(hs_dm, mm)
    ok = abs(js - 0.82854) <= 1e-4 and abs(js - closed) <= 1e-4
    ok &= abs(hs2 - 0.9375) <= 1e-12 and abs(hsn - 0.96825) <= 1e-4
    record("C2 analytic cross-checks", ok, f"qjsd={js:.6f} hs2={hs2:.15f} hs={hsn:.6f}")


def test_c3_entanglement_oracles():
    hs_m2 = (2 / 3) * (((np.sqrt(0.5) + 3 * np.sqrt(1 / 6)) ** 2 - 1) / 2)
    targets = {
        "GHZ": (ql.ghz_state(), 2 / 3),
        "W": (ql.w_state(), (np.sqrt(3) / 2 + 1 / 3) / 2),
        "HS": (ql.hs_state(), (1 + hs_m2) / 2),
    }
    # rounded targets; the W closed form evaluates to 0.5996794, so its
    # printed 0.599675 only agrees to ~5e-6
    pub = {"GHZ": 2 / 3, "W": 0.599675, "HS": 0.9553418}
    details, ok = [], True
    for name, (psi, exact) in targets.items():
        rep = multipartite_entanglement(ql.ket_to_dm(psi))
        ok &= abs(rep.total - exact) <= 1e-9 and abs(exact - pub[name]) <= 1e-5
        for r in rep.per_bipartition:
            ok &= abs(r.value - schmidt_negativity(psi, r.bipartition.subset_a)) <= 1e-9
        details.append(f"{name}={rep.total:.9f}")
    record("C3 entanglement oracles", ok, " ".join(details))


def test_c4_ghz_dephasing_closed_form():
    c = curves(trajectory(ql.ket_to_dm(ql.ghz_state()), "pf", GRID))
    dev = float(np.max(np.abs(c["entanglement"] - (2 / 3) * (1 - c["p"]) ** 4)))
    record("C4 GHZ under PF closed form", dev <= 1e-10, f"max dev {dev:.2e}")


def test_c5_coincidence(hs_dm):
    ghz = ql.ket_to_dm(ql.ghz_state())
    hs_spread = coincidence_check(hs_dm, FLIP_KINDS, GRID)
    ghz_same = coincidence_check(ghz, ["bf", "bpf"], GRID)
    ghz_diff = coincidence_check(ghz, ["bf", "pf"], GRID)
    ok = max(hs_spread.values()) <= 1e-10 and max(ghz_same.values()) <= 1e-10
    ok &= ghz_diff["entanglement"] > 0.01
    record("C5 trajectory coincidence", ok,
           f"HS max spread {max(hs_spread.values()):.1e}, GHZ bf/bpf {max(ghz_same.values()):.1e}, "
           f"GHZ bf/pf E spread {ghz_diff['entanglement']:.3f}")


def test_c6_equidistant_geometry(geometry):
    spreads = geometry.spreads()
    worst = max(max(v) for v in spreads.values())
    record("C6 equidistant final states", worst <= 1e-10, f"max spread {worst:.1e}")


@pytest.mark.parametrize("variant", [ChannelKind.DEPOLARIZING_LOCAL, ChannelKind.DEPOLARIZING_GLOBAL],
                         ids=["local", "global"])
def test_c7_depolarizing_lu_orbit(variant):
    states = lu_orbit(ql.hs_state(), 100, seed=2009)
    e_all, s_all, s_death = [], [], []
    for psi in states:
        rho0 = ql.ket_to_dm(psi)
        evolved = [evolve(rho0, variant, p) for p in GRID]
        e_all.append([entanglement(r) for r in evolved])
        s_all.append([linear_entropy(r) for r in evolved])
        s_death.append(sudden_death(rho0, variant, grid=GRID).s_l_at_death)
    e_all, s_all = np.array(e_all), np.array(s_all)
    e_spread = float(np.max(np.ptp(e_all, axis=0)))
    d_spread = float(np.ptp(s_death))
    ends = float(max(np.max(np.abs(e_all[:, -1])), np.max(np.abs(s_all[:, -1] - 1))))
    ok = e_spread <= 1e-6 and d_spread <= 1e-6 and ends <= 1e-12
    record(f"C7 depolarizing LU orbit ({variant.value})", ok,
           f"E spread {e_spread:.1e}, S_L@death spread {d_spread:.1e} "
           f"(S_L*={np.mean(s_death):.6f}), endpoint err {ends:.1e}")


def test_c8_property_suites():
    rng = np.random.default_rng(8)
    notes, ok = [], True

    kraus = max(make_channel(k, p).completeness_error()
                for k in (*FLIP_KINDS, ChannelKind.DEPOLARIZING_LOCAL) for p in GRID)
    ok &= kraus <= 1e-12
    notes.append(f"kraus {kraus:.1e}")

    worst_inv = 0.0
    for _ in range(100):
        rho = ql.random_density_matrix(4, rng, rank=int(rng.integers(1, 17)))
        p = float(rng.random())
        for kind in ChannelKind:
            out = evolve(rho, kind, p)
            herm = np.max(np.abs(out - out.conj().T))
            tr = abs(np.trace(out) - 1)
            neg = -min(0.0, np.linalg.eigvalsh(out)[0])
            ok &= herm <= 1e-12 and tr <= 1e-12 and neg <= 1e-10
            worst_inv = max(worst_inv, herm, tr, neg)
    notes.append(f"dm invariants {worst_inv:.1e}")

    worst_tri = np.inf
    for n in (2, 4):
        d = 1 << n
        for _ in range(10_000):
            a, b, c = (ql.random_density_matrix(n, rng, rank=int(rng.integers(1, d + 1))) for _ in range(3))
            ab, bc, ac = qjsd_sqrt(a, b), qjsd_sqrt(b, c), qjsd_sqrt(a, c)
            worst_tri = min(worst_tri, ab + bc - ac, ab + ac - bc, ac + bc - ab)
    ok &= worst_tri >= -1e-12
    notes.append(f"triangle slack {worst_tri:.3e}")

    worst_mono = -np.inf
    for _ in range(100):
        rho0 = ql.ket_to_dm(ql.haar_random_pure_state(4, rng))
        for kind in FLIP_KINDS:
            e = np.array([entanglement(evolve(rho0, kind, p)) for p in GRID])
            worst_mono = max(worst_mono, float(np.max(np.diff(e))))
    ok &= worst_mono <= 1e-10
    notes.append(f"monotone max increase {worst_mono:.1e}")

    worst_form = 0.0
    for _ in range(100):
        a, b = ql.random_density_matrix(4, rng), ql.random_density_matrix(4, rng)
        worst_form = max(worst_form, abs(qjsd_relative_entropy_form(a, b) - qjsd(a, b)))
    ok &= worst_form <= 1e-10
    notes.append(f"qjsd forms {worst_form:.1e}")

    record("C8 property suites", ok, ", ".join(notes))


@pytest.mark.slow
def test_c9_search_regression():
    cfg = AnnealConfig()
    psi, score = anneal_robust_state(cfg)
    ghz_obj = robustness_objective(ql.ghz_state(), cfg).objective
    hs_obj = robustness_objective(ql.hs_state(), cfg).objective
    dom = dominance_report(psi, {"GHZ": ql.ghz_state(), "W": ql.w_state()}, cfg)
    dominates = all(v["dominates"] for per in dom.values() for v in per.values())
    ratio = score.objective / hs_obj
    target = "met" if ratio >= 0.98 else "missed"
    record("C9 search regression", score.objective >= ghz_obj and dominates,
           f"objective {score.objective:.6f} (GHZ {ghz_obj:.6f}), dominates GHZ/W: {dominates}; "
           f"target 0.98 x HS {target} (ratio {ratio:.6f})")
