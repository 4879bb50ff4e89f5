"""Acceptance gate.

One test per shipped guarantee. Each prints a single pass/fail line; the
tolerances and runtime caps are pinned here and must not be loosened.
"""

import json
import random
import time
from fractions import Fraction

import numpy as np

from dtlab.brown_hs import Region, check_lattice, check_similarity, hs_projection
from dtlab.cli import main as cli_main
from dtlab.cumulants import (
    CoeffWord,
    check_coeff_bound,
    check_positivity,
    is_balanced,
    scalar_moment,
)
from dtlab.experiments import (
    AngleExperimentConfig,
    ConcentrationFamilyConfig,
    all_words,
    compression_angle_check,
    power_trace_floor_check,
    run_angle_experiment,
    run_concentration_ladder,
    run_power_trace_floor,
    semicircle_trace_mc,
    word_trace_mc,
)
from dtlab.matrix_lab import RadialMeasure, build_dt, op_norm
from dtlab.pairings import pairing_oracle
from util import separated_matrix

MC_REL_TOL = 0.05
INVARIANCE_TOL = 1e-8
LATTICE_TOL = 1e-8
SIMILARITY_TOL = 1e-6
COMPRESSION_SLACK = 1e-6
EQUALITY_TOL = 1e-10
LADDER_SLACK = 1e-12

MU_TWO = RadialMeasure(((1.0, 0.5), (2.0, 0.5)))


def _gate(num: int, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def _balanced(max_len: int) -> list[str]:
    return [w for w in all_words(max_len) if is_balanced(w)]


def test_criterion_01_exact_trace_values():
    t0 = time.perf_counter()
    targets = {"*1": Fraction(1, 2), "**11": Fraction(1, 6), "*1*1": Fraction(2, 3)}
    ok = all(
        scalar_moment(w) == v and pairing_oracle(w) == v for w, v in targets.items()
    )
    dt = time.perf_counter() - t0
    _gate(1, ok and dt < 1.0, f"traces 1/2, 1/6, 2/3 exact vs oracle ({dt:.3f}s)")


def test_criterion_02_engine_matches_oracle_len8():
    t0 = time.perf_counter()
    words = [""] + _balanced(8)
    ok = all(scalar_moment(w) == pairing_oracle(w) for w in words)
    dt = time.perf_counter() - t0
    _gate(
        2,
        ok and dt < 30.0,
        f"engine == oracle on {len(words)} balanced words <= 8 ({dt:.2f}s)",
    )


def test_criterion_03_moment_positivity_len8():
    words = _balanced(8)
    ok = all(check_positivity(w) for w in words)
    _gate(3, ok, f"pointwise positivity on 101-grid for {len(words)} words")


def test_criterion_04_coeff_bound_random_words():
    rng = random.Random(987654321)
    checked = 0
    ok = True
    for _ in range(500):
        n = rng.randint(1, 6)
        word = "".join(rng.choice("1*") for _ in range(n))
        coeffs = [
            [
                Fraction(rng.randint(-9, 9), rng.randint(1, 9))
                for _ in range(rng.randint(0, 3) + 1)
            ]
            for _ in range(n)
        ]
        ok = ok and check_coeff_bound(CoeffWord(word, coeffs))
        checked += 1
    _gate(4, ok and checked == 500, f"coefficient bound on {checked} random words")


def test_criterion_05_matrix_vs_engine():
    t0 = time.perf_counter()
    rep = word_trace_mc(_balanced(4), N=512, trials=40, seed=0)
    dt = time.perf_counter() - t0
    worst = max(rep.rel_errors)
    ok = rep.passed and worst <= MC_REL_TOL
    _gate(
        5,
        ok and dt < 300.0,
        f"N=512 x40 traces within 5% of engine, worst {worst:.4f} ({dt:.1f}s)",
    )


def test_criterion_06_semicircle_catalan():
    gue = semicircle_trace_mc(512, 40, 0)
    mix = semicircle_trace_mc(512, 40, 0, mix_weights=[0.5, 0.5])
    worst = max(max(gue.rel_errors), max(mix.rel_errors))
    ok = gue.passed and mix.passed
    _gate(6, ok, f"GUE and block mixture vs Catalan 1,2,5,14, worst {worst:.4f}")


def test_criterion_07_hs_laws_at_matrix_scale():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    n = 20
    bands = (Region.annulus(0.0, 1.0), Region.annulus(1.0, 2.0), Region.annulus(2.0, 4.0))
    low, high = Region.annulus(0.0, 2.0), Region.annulus(1.0, 4.0)
    ok = True
    for _ in range(200):
        Z, counts = separated_matrix(rng, n)
        while min(counts) == 0:
            Z, counts = separated_matrix(rng, n)
        scale = op_norm(Z)
        for region, count in zip(bands, counts):
            p = hs_projection(Z, region)
            ok = ok and p.rank == count
            resid = op_norm((np.eye(n) - p.P) @ Z @ p.P)
            ok = ok and resid < INVARIANCE_TOL * scale
        lat = check_lattice(Z, low, high)
        ok = ok and lat.passed and lat.rank_union == n
        ok = ok and lat.rank_intersect == counts[1]
        ok = ok and max(lat.union_distance, lat.intersect_distance) < LATTICE_TOL
        A = np.eye(n) + 0.2 * (
            rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        ) / np.sqrt(2.0)
        sim = check_similarity(Z, A, bands[1])
        ok = ok and sim.passed and max(sim.eig_hausdorff, sim.subspace_dist) < SIMILARITY_TOL
        comp = compression_angle_check(Z, high, low)
        ok = ok and comp.passed
        ok = ok and comp.cos_compressed <= comp.cos_full + COMPRESSION_SLACK
    dt = time.perf_counter() - t0
    _gate(7, ok and dt < 60.0, f"trace/invariance/lattice/similarity/compression on 200 spectra ({dt:.1f}s)")


def test_criterion_08_power_trace_floors():
    rep = run_power_trace_floor(MU_TWO, c=1.0, N=256, r=1.0, s=2.0, k_max=5, trials=40, seed=0)
    ok = rep.passed
    # c = 0: the model is exactly diagonal, so both traces are exact mixture
    # moments of the two circle radii.
    chk = power_trace_floor_check(build_dt(MU_TWO, 0.0, 256, np.random.SeedSequence(7)), 1.0, 2.0, 5)
    for k in range(1, 6):
        ok = ok and abs(chk.forward[k - 1] - 0.5 * (1.0 + 4.0**k)) <= EQUALITY_TOL
        ok = ok and abs(chk.inverse[k - 1] - 0.5 * (1.0 + 4.0**-k)) <= EQUALITY_TOL
    # c = 0 on a single circle attains both floors exactly.
    one = RadialMeasure(((1.0, 1.0),))
    single = power_trace_floor_check(build_dt(one, 0.0, 64, np.random.SeedSequence(8)), 1.0, 1.0, 5)
    ok = ok and all(abs(v - 1.0) <= EQUALITY_TOL for v in single.forward + single.inverse)
    _gate(8, ok, "power trace floors at N=256 x40 and exact c=0 equalities")


def test_criterion_09_two_cluster_reference_run():
    t0 = time.perf_counter()
    rep = run_angle_experiment(AngleExperimentConfig())
    dt = time.perf_counter() - t0
    ok = abs(rep.bound_main - 7.0**-0.5) < 1e-15
    ok = ok and rep.cos_subspace_mean >= 0.9 * rep.bound_main
    ok = ok and rep.ynorm_sq_mean >= 0.9 * (1.0 / 12.0)
    ok = ok and all(
        t.sim_identity_residual <= t.truncation_residual for t in rep.trial_records
    )
    _gate(
        9,
        ok and dt < 600.0,
        f"bound 7^-1/2, cos_sub {rep.cos_subspace_mean:.4f}, "
        f"ynorm_sq {rep.ynorm_sq_mean:.4f} ({dt:.1f}s)",
    )


def test_criterion_10_concentration_ladder():
    t0 = time.perf_counter()
    rep = run_concentration_ladder(ConcentrationFamilyConfig())
    dt = time.perf_counter() - t0
    ok = rep.nondecreasing and rep.final_bound > 0.8
    ok = ok and all(r.rhs_ok for r in rep.rungs)
    ok = ok and all(r.bound_main >= r.rhs_floor - LADDER_SLACK for r in rep.rungs)
    _gate(
        10,
        ok and dt < 60.0,
        f"ladder nondecreasing, final {rep.final_bound:.4f} > 0.8 ({dt:.2f}s)",
    )


def test_criterion_11_manifest_replay(tmp_path, capsys):
    ok = True
    for name, argv in (
        ("simulate", ["simulate", "--n", "64", "--trials", "8", "--seed", "3"]),
        ("concentration", ["concentration", "--n-max", "8"]),
        ("moment", ["moment", "*1*1"]),
    ):
        out = tmp_path / name
        cli_main(argv + ["--out", str(out)])
        capsys.readouterr()
        code = cli_main(["replay", str(out / "manifest.json")])
        reply = json.loads(capsys.readouterr().out)
        ok = ok and code == 0 and reply["replay_match"] is True
    _gate(11, ok, "replay from manifest is byte-identical for 3 commands")
