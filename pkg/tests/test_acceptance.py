"""Acceptance gate: one PASS/FAIL line per criterion, each at its stated tolerance."""
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from contactforge.cli import COMMANDS, run
from contactforge.geometry import conformal_factor_check, SamplingGrid
from contactforge.index import (
    AdmissibilityError, EllipsoidSpec, ProfileFunction, SymplecticPath, ball_inclusion_iso,
    catenate, ch_ellipsoid, cz_index, ellipsoid_degree, ellipsoid_degree_by_flow,
    F_parameters, maslov_index, profile_F, profile_transform,
)
from contactforge.maps import (make_loop_embedding, make_planck_map, make_squeeze_pair,
                               planck_target_form, rotation_path)
from contactforge.olshanskii import build_c0, contact_cone, orderability_verdict, root_system, \
    su21_structure
from contactforge.squeeze import iteration_plan, squeezing_verdict

from conftest import record_criterion
from test_squeeze import brute_force_plan, brute_force_verdict, verdict_battery

# one default-configuration invocation per command; criterion 10 reruns them all
DEFAULT_ARGV = {
    "verify-map": ["verify-map"],
    "verify-loop": ["verify-loop"],
    "s3-loop": ["s3-loop"],
    "mu": ["mu"],
    "fundamental": ["fundamental", "--n", "2"],
    "squeeze-verdict": ["squeeze-verdict", "--n", "2", "--R1", "0.9", "--R2", "0.5"],
    "squeeze-plan": ["squeeze-plan", "--R1", "0.9", "--R2", "0.1"],
    "pipeline": ["pipeline"],
    "cz": ["cz", "--rates", "0.3,1.7"],
    "ch-ellipsoid": ["ch-ellipsoid", "--n", "2", "--N", "1", "--R", "0.9"],
    "spectrum": ["spectrum", "--n", "2", "--N", "1", "--R", "0.9"],
    "profile": ["profile", "--a", "1/4", "--b", "1/2", "--c", "3"],
    "olshanskii": ["olshanskii"],
    "main-loop": ["main-loop"],
}
FIRST_TEXT = {}


def cli(argv):
    doc, code, text = run(argv)
    FIRST_TEXT.setdefault(tuple(argv), text)
    return doc, code


def timed(func):
    start = time.perf_counter()
    out = func()
    return out, time.perf_counter() - start


def test_criterion_01_contactness():
    def body():
        doc, code = cli(DEFAULT_ARGV["verify-map"])
        checks = doc["checks"]
        ok = code == 0 and all(c["passed"] for c in checks.values())
        ok &= all(c["details"]["points"] >= 10_000 for c in checks.values())
        ok &= all(c["tolerance"] == 1e-8 for k, c in checks.items() if not k.endswith("_fd"))
        ok &= checks["planck"]["details"]["factor_error"] < 1e-10
        # second route for the maps the CLI checks in closed form only
        g = SamplingGrid(shells=4, r_min=0.1, r_max=2.0, sphere_points=256, time_samples=16)
        fd = [conformal_factor_check(make_planck_map(1.0, 2), g, 1e-5,
                                     target_form=planck_target_form, use_fd=True)]
        for N in (1, 2, 3, 4):
            h = rotation_path(np.full(2, float(N)))
            fd.append(conformal_factor_check(make_loop_embedding(h, h.hamiltonian), g, 1e-5,
                                             use_fd=True))
        fd += [conformal_factor_check(m, g, 1e-5, use_fd=True) for m in make_squeeze_pair(2)]
        ok &= all(r.passed and r.details["points"] >= 10_000 for r in fd)
        worst = max(c["details"]["max_residual"] for c in checks.values())
        worst_fd = max(r.details["max_residual"] for r in fd)
        return ok, worst, worst_fd, len(checks) + len(fd)

    (ok, worst, worst_fd, count), dt = timed(body)
    ok &= dt < 30
    assert record_criterion(1, ok, f"{count} reports, closed-form residual <= {worst:.1e}, "
                                   f"fd residual <= {worst_fd:.1e}, {dt:.1f}s")


def test_criterion_02_fundamental_inequality():
    def body():
        out = []
        for n in (2, 3):
            doc, code = cli(DEFAULT_ARGV["fundamental"][:2] + [str(n)])
            rep = doc["checks"]["inequality"]
            out.append((code == 0 and rep["passed"] and rep["details"]["points"] >= 100_000
                        and rep["tolerance"] == 1e-6, rep["min_value"], rep["details"]["points"]))
        return out

    out, dt = timed(body)
    ok = all(o[0] for o in out) and dt < 60
    mins = ", ".join(f"n={n}: min {o[1]:.3g} on {o[2]}" for n, o in zip((2, 3), out))
    assert record_criterion(2, ok, f"{mins}, {dt:.1f}s")


def test_criterion_03_s3_loop():
    (doc, code), dt = timed(lambda: cli(DEFAULT_ARGV["s3-loop"]))
    pos, table = doc["checks"]["positivity"], doc["checks"]["threshold_table"]
    alphas = [row["alpha"] for row in table["rows"]]
    ok = (code == 0 and pos["passed"] and pos["min_value"] > 0
          and pos["details"]["points"] >= 100_000 and alphas[0] == 0.02 and alphas[-1] == 0.5
          and dt < 120)
    assert record_criterion(3, ok, f"alpha=0.05 min {pos['min_value']:.4f} on "
                                   f"{pos['details']['points']} samples, threshold "
                                   f"{table['threshold']:.3f}, {dt:.1f}s")


def test_criterion_04_main_loop():
    (doc, code), dt = timed(lambda: cli(DEFAULT_ARGV["main-loop"]))
    checks = doc["checks"]
    needed = ["inclusion_W", "first_integral", "positivity", "closure", "mu_hat"]
    ok = code == 0 and all(checks[k]["passed"] for k in needed) and dt < 600
    ok &= checks["first_integral"]["tolerance"] <= 1e-5
    ok &= checks["closure"]["tolerance"] <= 1e-5
    mu = checks["mu_hat"]["mu_hat"]
    ok &= 0.8 <= mu <= 1.05
    assert record_criterion(4, ok, f"all {len(checks)} checks passed={doc['passed']}, "
                                   f"mu_hat={mu:.4f}, {dt:.1f}s")


def test_criterion_05_index_suite():
    rng = np.random.default_rng(5)
    ok = maslov_index(SymplecticPath.rotation([1])) == 2
    # Morse calibration against the count of negative eigenvalues
    for _ in range(20):
        n = int(rng.integers(1, 4))
        Q = np.linalg.qr(rng.normal(size=(2 * n, 2 * n)))[0]
        d = rng.uniform(0.2, 1.0, 2 * n) * rng.choice([-1, 1], 2 * n)
        ok &= cz_index(SymplecticPath.from_generator(0.3 * Q @ np.diag(d) @ Q.T)) == (d < 0).sum()
    # catenation with a loop against the crossing count of rotations
    pairs = 0
    while pairs < 50:
        n = int(rng.integers(1, 3))
        rates = rng.uniform(-3, 3, n)
        if np.any(np.abs(rates - np.round(rates)) < 0.05):
            continue
        ks = rng.integers(-3, 4, n)
        path = catenate(SymplecticPath.rotation(rates), SymplecticPath.rotation(ks))
        ok &= cz_index(path) == sum(-2 * math.floor(a) for a in rates) - 2 * int(ks.sum())
        pairs += 1
    flows = 0
    while flows < 50:
        spec = EllipsoidSpec(int(rng.integers(1, 4)), int(rng.integers(1, 5)),
                             float(rng.uniform(0.05, 2.0)))
        if spec.resonances():
            continue
        ok &= ellipsoid_degree(spec) == ellipsoid_degree_by_flow(spec, rng)
        flows += 1
    for n in (2, 3):
        ok &= ellipsoid_degree(EllipsoidSpec(n, 1, 1.7)) == 0
        for k in range(2, 7):
            R = 0.5 * (1 / k + 1 / (k - 1))
            ok &= ellipsoid_degree(EllipsoidSpec(n, 1, R)) == -2 * n * (k - 1)
    assert record_criterion(5, bool(ok), "Maslov=2, 20 Morse, 50 catenation, "
                                         "50 formula/flow, anchored degrees")


def ball_degree_by_count(n, R):
    """``-2n`` times the number of iterates of the Reeb orbit with action below 1."""
    return -2 * n * sum(1 for m in range(1, 10_000) if m * R < 1)


def test_criterion_06_contact_homology():
    rng = np.random.default_rng(6)
    ok = True
    for _ in range(30):
        spec = EllipsoidSpec(int(rng.integers(1, 4)), int(rng.integers(1, 5)),
                             float(rng.uniform(0.05, 2.0)))
        if spec.resonances():
            continue
        ok &= ch_ellipsoid(spec).ranks == {ellipsoid_degree_by_flow(spec, rng): 1}
    cases = 0
    while cases < 100:
        n = int(rng.integers(1, 5))
        R1 = float(rng.uniform(0.05, 2.5))
        R2 = R1 + float(rng.exponential(0.3))
        if EllipsoidSpec(n, 1, R1).resonances() or EllipsoidSpec(n, 1, R2).resonances():
            continue
        iso = ball_inclusion_iso(n, R1, R2).isomorphism
        ok &= iso == (ball_degree_by_count(n, R1) == ball_degree_by_count(n, R2))
        cases += 1
    assert record_criterion(6, bool(ok), "single Z2 in the flow degree, 100 inclusion cases")


def test_criterion_07_olshanskii():
    def body():
        su21_structure.cache_clear()
        st = su21_structure()
        c = build_c0()
        v = orderability_verdict(contact_cone())
        return st, c, v

    (st, c, v), dt = timed(body)
    doc, code = cli(DEFAULT_ARGV["olshanskii"])
    F = Fraction
    ok = {r.vector for r in root_system()} == {(1, -1), (-1, 1), (1, 0), (-1, 0), (0, 1), (0, -1)}
    s = st.killing_scale
    ok &= tuple(tuple(-x / s for x in row) for row in st.killing_h) == ((2, 1), (1, 2))
    ok &= c.H1 == (1, 0) and c.Z == (F(2, 3), F(2, 3)) and c.H0 == (F(-1, 3), F(2, 3))
    ok &= c.c0.same_as(c.c_min)
    ok &= v.verdict == "non-orderable" and code == 0
    ok &= doc["checks"]["verdict"]["verdict"] == "non-orderable"
    ok &= dt < 1.0
    assert record_criterion(7, bool(ok), f"exact roots, Killing, c0 and verdict, {dt * 1e3:.0f}ms")


def test_criterion_08_squeeze_logic():
    ok = True
    for n, R1, R2, R3 in verdict_battery():
        ok &= squeezing_verdict(n, R1, R2, R3=R3).verdict == brute_force_verdict(n, R1, R2, R3)
    rng = np.random.default_rng(8)
    plans = 0
    while plans < 100:
        R1 = float(rng.uniform(0.01, 50))
        ratio = float(rng.uniform(0.001, 0.99))
        gamma = float(rng.uniform(0.05, 5))
        if (1 / ratio - 1) / (gamma * R1) >= 2000:
            continue
        N, traj = iteration_plan(R1, R1 * ratio, gamma)
        Nb, vb = brute_force_plan(R1, R1 * ratio, gamma)
        ok &= N == Nb and traj[-1] == float(vb)
        plans += 1
    doc, _ = cli(DEFAULT_ARGV["squeeze-plan"])
    ok &= iteration_plan(0.9, 0.1, 1.0)[0] == 9 and doc["checks"]["plan"]["N"] == 9
    assert record_criterion(8, bool(ok), "30 verdicts, 100 exact plans, N=9")


def random_admissible_pair(rng):
    """Two admissible rational profiles on common nodes with ``H1 <= H2``."""
    while True:
        k = int(rng.integers(2, 6))
        us = sorted({Fraction(int(rng.integers(1, 100)), int(rng.integers(1, 20)))
                     for _ in range(k)})
        if len(us) < 2:
            continue
        h1 = [Fraction(int(rng.integers(1, 100)), int(rng.integers(1, 20))) for _ in us]
        d = [Fraction(int(rng.integers(0, 40)), int(rng.integers(1, 20))) for _ in us]
        pair = (ProfileFunction(tuple(zip(us, h1))),
                ProfileFunction(tuple((u, a + b) for u, a, b in zip(us, h1, d))))
        try:
            for H in pair:
                H.check_admissible()
        except AdmissibilityError:
            continue
        return pair


def test_criterion_09_profile_transform():
    a, b, c = Fraction(1, 4), Fraction(1, 2), Fraction(3)
    ok = F_parameters(profile_transform(profile_F(a, b, c))) == (a / c, b, 1 / c)
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(100):
        H1, H2 = random_admissible_pair(rng)
        for H in (H1, H2):
            ok &= profile_transform(profile_transform(H)).nodes == H.nodes
        B1, B2 = profile_transform(H1), profile_transform(H2)
        lo = min(B1.nodes[0][0], B2.nodes[0][0]) / 2
        hi = max(B1.nodes[-1][0], B2.nodes[-1][0]) * 2
        v = np.linspace(float(lo), float(hi), 400)
        worst = max(worst, float(np.max(B2(v) - B1(v))))
    ok &= worst <= 1e-10
    assert record_criterion(9, bool(ok), f"parameters exact, 100 pairs, max(B2-B1)={worst:.2e}")


def test_criterion_10_determinism():
    assert set(DEFAULT_ARGV) == set(COMMANDS)
    differing = []
    for name, argv in DEFAULT_ARGV.items():
        first = FIRST_TEXT.get(tuple(argv))
        if first is None:
            first = run(argv)[2]
        if run(argv)[2] != first:
            differing.append(name)
    ok = not differing
    assert record_criterion(10, ok, f"{len(DEFAULT_ARGV)} commands byte-identical"
                                    + (f", differing: {differing}" if differing else ""))
