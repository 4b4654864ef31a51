"""Acceptance criteria, one test and one PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py -v`` (the lines appear in the terminal
summary) or ``python3 tests/test_acceptance.py`` to print them directly.
Tolerances and runtime limits are the contract values; nothing is loosened.
"""

from fractions import Fraction as Fr
import itertools
import time

import numpy as np
import pytest
import scipy.fft

from conftest import ACCEPTANCE_LINES
from strichartz import atoms, verify, whitney
from strichartz import estimator as S
from strichartz import exponents as E
from strichartz._validation import rationals_up_to
from strichartz.exponents import Quad
from strichartz.propagator import Field, SpaceTimeField, SpatialGrid, duhamel_retarded

SIGMAS = [Fr(1, 2), Fr(1), Fr(3, 2), Fr(2), Fr(5, 2)]
LATTICE = [Fr(k, 12) for k in range(13)]
FAREY_SAMPLE = 60000


def report(number: int, passed: bool, detail: str) -> None:
    line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def quad_grid(seed: int = 12):
    """Every quad on the k/12 lattice, then a seeded sample of Farey quads."""
    yield from itertools.product(LATTICE, repeat=4)
    farey = rationals_up_to(12)
    rng = np.random.default_rng(seed)
    for idx in rng.integers(0, len(farey), size=(FAREY_SAMPLE, 4)):
        yield tuple(farey[i] for i in idx)


# -- 1 -----------------------------------------------------------------------------


def test_criterion_1_oracle_equivalence():
    start = time.perf_counter()
    count = bad = 0
    for x in quad_grid():
        quad = Quad(*x)
        for s in SIGMAS:
            count += 1
            bad += E.satisfies_local(quad, s).member != E.local_region_oracle(quad, s)
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 60
    report(1, ok, f"{bad} disagreements on {count} (quad, sigma) cases in {elapsed:.1f} s (limit 60 s)")
    assert ok


# -- 2 -----------------------------------------------------------------------------


def test_criterion_2_region_inclusions():
    sharp_bad = global_bad = sharp_cases = global_cases = 0
    for x in quad_grid():
        quad = Quad(*x)
        for s in SIGMAS:
            if E.is_sharp_admissible(quad.qr, s) and E.is_sharp_admissible(quad.qtrt, s):
                sharp_cases += 1
                sharp_bad += not E.satisfies_local(quad, s).member
        for n in (1, 2, 3, 4):
            if E.satisfies_global(quad, Fr(n, 2)).member:
                global_cases += 1
                global_bad += not E.schrodinger_global_necessary(quad, n).member
    ok = sharp_bad == 0 and global_bad == 0
    report(
        2,
        ok,
        f"sharp=>local {sharp_bad} violations in {sharp_cases} cases; global=>necessary {global_bad} violations in {global_cases} cases",
    )
    assert ok


# -- 3 -----------------------------------------------------------------------------


def test_criterion_3_energy():
    start = time.perf_counter()
    checks = verify.energy(1, 256, 100, rng=3) + verify.energy(2, 128, 100, rng=3)
    elapsed = time.perf_counter() - start
    ok = all(c.passed for c in checks) and elapsed < 10
    report(3, ok, "; ".join(c.detail for c in checks) + f"; {elapsed:.1f} s (limit 10 s)")
    assert ok


# -- 4 -----------------------------------------------------------------------------


def test_criterion_4_dispersion():
    start = time.perf_counter()
    checks = verify.dispersion(1) + verify.dispersion(2)
    elapsed = time.perf_counter() - start
    slopes = [c for c in checks if "slope" in c.name]
    ok = all(c.passed for c in slopes) and elapsed < 60
    report(4, ok, "; ".join(c.detail for c in slopes) + f"; {elapsed:.1f} s (limit 60 s)")
    assert ok


# -- 5 -----------------------------------------------------------------------------


def test_criterion_5_whitney():
    start = time.perf_counter()
    checks = verify.whitney_suite(0, 8, -4, 3, 20, rng=5)
    elapsed = time.perf_counter() - start
    ok = all(c.passed for c in checks) and elapsed < 30
    report(5, ok, "; ".join(c.detail for c in checks) + f"; {elapsed:.1f} s (limit 30 s)")
    assert ok


# -- 6 -----------------------------------------------------------------------------


def test_criterion_6_atoms():
    start = time.perf_counter()
    rng = np.random.default_rng(6)
    recon = support = sup = eq36 = True
    lo, hi = np.inf, 0.0
    qs = [Fr(0), Fr(1, 4), Fr(1, 2), Fr(3, 4), Fr(1)]
    for a in range(200):
        p = [Fr(1), Fr(3, 4), Fr(1, 2), Fr(1, 4)][a % 4]  # p = 1, 4/3, 2, 4
        size = int(rng.integers(8, 200))
        f = atoms.SampledFunction(rng.standard_cauchy(size) * rng.uniform(0.1, 10), Fr(int(rng.integers(1, 9)), int(rng.integers(1, 9))))
        dec = atoms.decompose(f, p)
        recon &= bool(np.allclose(dec.reconstruct(size, 1), f.values, rtol=1e-13, atol=0))
        for k, atom in dec.atoms.items():
            support &= atom.measure <= atom.size
            sup &= atom.norm(0) <= 2.0 ** (-k * float(p)) * (1 + 1e-12)
            for q in qs:
                if q <= p:
                    eq36 &= atoms.atom_norm_bound(atom, q).holds
        ratio = f.norm(p) / dec.coefficient_norm(p)
        lo, hi = min(lo, ratio), max(hi, ratio)
    elapsed = time.perf_counter() - start
    ok = recon and support and sup and eq36 and 0.25 <= lo and hi <= 4 and elapsed < 10
    report(
        6,
        ok,
        f"reconstruction {recon}, measure<=lam {support}, sup bound {sup}, norm bound (constant 1) {eq36}, "
        f"||f||_p/||a||_lp in [{lo:.3f}, {hi:.3f}]; {elapsed:.1f} s (limit 10 s)",
    )
    assert ok


# -- 7 -----------------------------------------------------------------------------


def test_criterion_7_sequence_lemmas():
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    sum_ok = young_ok = 0
    sum_cases = young_cases = 0
    while sum_cases < 1000:
        p, pt = (Fr(int(a), 12) for a in rng.integers(0, 13, 2))
        if p + pt < 1:
            continue
        f, g = rng.exponential(size=(2, int(rng.integers(2, 24))))
        sum_ok += whitney.sum_inequality(f, g, int(rng.integers(-3, 4)), p, pt, offset=int(rng.integers(-6, 6))).holds
        sum_cases += 1
    while young_cases < 1000:
        p, q, r = (Fr(int(a), 8) for a in rng.integers(0, 9, 3))
        if p + q + r < 2:
            continue
        A, B, C = rng.exponential(size=(3, int(rng.integers(2, 24))))
        young_ok += atoms.young_sequences(A, B, C, p, q, r, c_offset=int(rng.integers(-12, 12))).holds
        young_cases += 1
    sum_violation = whitney.find_sum_violation(Fr(1, 4), Fr(1, 4), rng=7)
    young_violation = atoms.find_young_violation(Fr(1, 2), Fr(1, 2), Fr(1, 2), rng=7)
    elapsed = time.perf_counter() - start
    ok = sum_ok == 1000 and young_ok == 1000 and sum_violation is not None and young_violation is not None and elapsed < 10
    report(
        7,
        ok,
        f"summation inequality {sum_ok}/1000, Young {young_ok}/1000; violation found without hypothesis: "
        f"summation {sum_violation is not None}, Young {young_violation is not None}; {elapsed:.1f} s (limit 10 s)",
    )
    assert ok


# -- 8 -----------------------------------------------------------------------------

SWEEPS = [
    ("flash", Quad(0, Fr(1, 2), 0, 0), 1, [Fr(1, 2**k) for k in range(2, 7)]),
    ("flash", Quad(Fr(1, 4), Fr(1, 4), Fr(1, 4), Fr(1, 4)), 1, [Fr(1, 2**k) for k in range(2, 7)]),
    ("bump", Quad(0, 0, 0, 0), 1, None),
    ("bump", Quad(0, Fr(1, 4), 0, 0), 1, None),
    ("bump", Quad(0, 0, 0, 0), 2, None),
    ("focusing", Quad(0, Fr(1, 4), 0, 0), 2, None),
    ("focusing", Quad(Fr(1, 4), Fr(1, 2), Fr(1, 4), Fr(1, 4)), 2, None),
    ("oscillatory", Quad(0, 0, 0, 0), 1, [8, 16, 32, 64]),
    ("oscillatory", Quad(0, 0, 0, 1), 1, [8, 16, 32, 64]),
]


def test_criterion_8_counterexample_slopes():
    parts, ok = [], True
    for family, quad, n, params in SWEEPS:
        start = time.perf_counter()
        rep = S.sweep(family, quad, n, params)
        elapsed = time.perf_counter() - start
        good = rep.verdict and elapsed < 300
        ok &= good
        label = ",".join(str(v) for v in quad)
        parts.append(
            f"{family} n={n} ({label}) slope {rep.fitted_slope:.4f} vs {rep.predicted_slope} +- {rep.tolerance:.3f}"
            f" [{elapsed:.0f} s]{'' if good else ' FAILED'}"
        )
    report(8, ok, "; ".join(parts))
    assert ok


# -- 9 -----------------------------------------------------------------------------


def static_forcing_error(steps: int, T: float = 1.0) -> float:
    # F(s) = f for all s: the exact solution is int_0^t U(tau) f dtau,
    # in Fourier (1 - exp(-i t xi^2)) / (i xi^2) f^ (and t f^ at xi = 0)
    grid = SpatialGrid(1, 256, 32.0)
    f = np.exp(-grid.axis() ** 2)
    dt = T / steps
    F = SpaceTimeField(grid, 0.0, dt, np.tile(f, (steps + 1, 1)))
    v = duhamel_retarded(F).values[-1]
    k2 = grid.frequencies_sq()
    with np.errstate(divide="ignore", invalid="ignore"):
        mult = np.where(k2 > 0, (1 - np.exp(-1j * T * k2)) / (1j * k2), T)
    exact = scipy.fft.ifft(mult * scipy.fft.fft(f))
    return float(Field(grid, v - exact).l2_norm())


def test_criterion_9_duhamel():
    start = time.perf_counter()
    errs = [static_forcing_error(m) for m in (16, 32, 64)]
    ratios = [errs[0] / errs[1], errs[1] / errs[2]]
    dual = verify.duality(20, rng=9)
    elapsed = time.perf_counter() - start
    ok = all(1.7 <= r <= 2.3 for r in ratios) and all(c.passed for c in dual) and elapsed < 30
    report(
        9,
        ok,
        f"static forcing convergence ratios {ratios[0]:.3f}, {ratios[1]:.3f} (need [1.7, 2.3]); "
        + "; ".join(c.detail for c in dual)
        + f"; {elapsed:.1f} s (limit 30 s)",
    )
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
