"""Named invariant suites behind ``strichartz verify``.

Each suite returns a list of :class:`Check` results; a suite passes when all
of its checks pass. Randomized suites draw from ``numpy.random.default_rng``
seeded by the caller, so a given seed always produces the same report.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import atoms, whitney
from .estimator import bilinear_form, pairing, whitney_sum_check
from .propagator import (
    Field,
    SpaceTimeField,
    SpatialGrid,
    adjoint_propagate,
    default_dispersion_grid,
    dispersive_constant,
    duhamel_advanced,
    duhamel_retarded,
    propagate,
)

SUITES = ("energy", "dispersion", "group", "whitney", "atoms", "duality")

DISPERSION_TOL = {1: 0.03, 2: 0.05}


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _random_field(grid: SpatialGrid, rng) -> Field:
    return Field(grid, rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape))


def _grid(n: int, N: int) -> SpatialGrid:
    return SpatialGrid(n, N, float(N) / 8)


def energy(n: int = 1, N: int = 256, trials: int = 100, rng=None) -> list[Check]:
    rng = np.random.default_rng(rng)
    grid = _grid(n, N)
    worst = 0.0
    for _ in range(trials):
        f = _random_field(grid, rng)
        t = rng.uniform(-50, 50)
        worst = max(worst, abs(propagate(f, t).l2_norm() / f.l2_norm() - 1))
    return [Check(f"energy n={n}", worst <= 1e-10, f"max relative L2 drift {worst:.3e} over {trials} fields")]


def group(n: int = 1, N: int = 256, trials: int = 20, rng=None) -> list[Check]:
    rng = np.random.default_rng(rng)
    grid = _grid(n, N)
    w_comp = w_adj = w_inv = 0.0
    for _ in range(trials):
        f = _random_field(grid, rng)
        t, s = rng.uniform(-10, 10, 2)
        ref = propagate(f, t + s).values
        w_comp = max(w_comp, np.linalg.norm(propagate(propagate(f, s), t).values - ref) / np.linalg.norm(ref))
        ref = propagate(f, t - s).values
        w_adj = max(w_adj, np.linalg.norm(propagate(adjoint_propagate(f, s), t).values - ref) / np.linalg.norm(ref))
        back = adjoint_propagate(propagate(f, s), s).values
        w_inv = max(w_inv, np.linalg.norm(back - f.values) / np.linalg.norm(f.values))
    return [
        Check(f"U(t)U(s)=U(t+s) n={n}", w_comp <= 1e-10, f"max relative error {w_comp:.3e}"),
        Check(f"U(t)U*(s)=U(t-s) n={n}", w_adj <= 1e-10, f"max relative error {w_adj:.3e}"),
        Check(f"U*(s)U(s)=I n={n}", w_inv <= 1e-10, f"max relative error {w_inv:.3e}"),
    ]


def dispersion(n: int = 1, N: int | None = None) -> list[Check]:
    grid = default_dispersion_grid(n) if N is None else SpatialGrid(n, N, N * default_dispersion_grid(n).spacing)
    fit = dispersive_constant("spectral", n, grid=grid)
    target = -n / 2
    ref = (4 * np.pi) ** (-n / 2)
    return [
        Check(f"dispersive slope n={n}", abs(fit.slope - target) <= DISPERSION_TOL[n], f"slope {fit.slope:.4f}, expected {target} +- {DISPERSION_TOL[n]}"),
        Check(f"dispersive constant n={n}", ref / 2 <= fit.constant <= 2 * ref, f"constant {fit.constant:.4f}, kernel modulus {ref:.4f}"),
    ]


def whitney_suite(lo=0, hi=8, k_min: int = -4, k_max: int = 3, instances: int = 20, rng=None) -> list[Check]:
    rng = np.random.default_rng(rng)
    window = whitney.Window(lo, hi)
    squares = whitney.decompose(window, k_min, k_max)
    lam_min = Fraction(2) ** k_min
    cells = int((window.hi - window.lo) / lam_min) * 2
    counts, s, t = whitney.coverage_multiplicity(squares, window, cells)
    S, T = np.meshgrid(s, t, indexing="ij")
    # every point at distance >= 3 lam_min from the diagonal has a square at some scale in range
    resolvable = (T - S) >= 3 * float(lam_min)
    mult_ok = bool(np.all(counts[resolvable] == 1) and np.all(counts <= 1))
    gaps = sorted({sq.gap() / sq.scale for sq in squares})
    worst = 0.0
    grid = SpatialGrid(1, 32, 8.0)
    for _ in range(instances):
        F = SpaceTimeField(grid, 0.0, 0.25, rng.normal(size=(8, 32)) + 1j * rng.normal(size=(8, 32)))
        G = SpaceTimeField(grid, 0.0, 0.25, rng.normal(size=(8, 32)) + 1j * rng.normal(size=(8, 32)))
        worst = max(worst, whitney_sum_check(F, G).relative_error)
    return [
        Check("whitney multiplicity", mult_ok, f"{len(squares)} squares, multiplicity 1 on {int(resolvable.sum())} resolvable cells of {cells}x{cells}"),
        Check("whitney gap ratio", set(gaps) <= {1, 2}, f"dist(I,J)/lam in {[str(g) for g in gaps]}"),
        Check("whitney sum identity", worst <= 1e-10, f"max relative error {worst:.3e} over {instances} instances"),
    ]


def atoms_suite(trials: int = 200, rng=None) -> list[Check]:
    rng = np.random.default_rng(rng)
    recon = support = sup = bound = True
    lo, hi = np.inf, 0.0
    for a in range(trials):
        p = [Fraction(1), Fraction(3, 4), Fraction(1, 2), Fraction(1, 4)][a % 4]
        size = int(rng.integers(8, 200))
        vals = rng.standard_cauchy(size) * rng.uniform(0.1, 10)
        weight = Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 9)))
        f = atoms.SampledFunction(vals, weight)
        dec = atoms.decompose(f, p)
        recon &= bool(np.allclose(dec.reconstruct(size, 1), f.values, rtol=1e-13, atol=0))
        for k, atom in dec.atoms.items():
            support &= atom.measure <= atom.size
            sup &= atom.norm(0) <= 2.0 ** (-k * float(p)) * (1 + 1e-12)
            for q in (Fraction(1), Fraction(1, 2), Fraction(0)):
                bound &= atoms.atom_norm_bound(atom, q).holds
        ratio = f.norm(p) / dec.coefficient_norm(p)
        lo, hi = min(lo, ratio), max(hi, ratio)
    return [
        Check("atoms reconstruction", recon, f"{trials} random inputs"),
        Check("atoms support measure", support, "measure(support) <= lam"),
        Check("atoms sup bound", sup, "||phi||_inf <= lam^(-1/p)"),
        Check("atoms norm bound", bound, "||phi||_q <= lam^(1/q - 1/p) for q in {1, 2, inf}"),
        Check("atoms coefficient ratio", 0.25 <= lo and hi <= 4, f"||f||_p / ||a||_lp in [{lo:.3f}, {hi:.3f}]"),
    ]


def duality(instances: int = 20, rng=None) -> list[Check]:
    rng = np.random.default_rng(rng)
    grid = SpatialGrid(1, 32, 8.0)
    w_ret = w_adv = 0.0
    for _ in range(instances):
        T = int(rng.integers(3, 12))
        F = SpaceTimeField(grid, rng.uniform(0, 1), 0.25, rng.normal(size=(T, 32)) + 1j * rng.normal(size=(T, 32)))
        G = SpaceTimeField(grid, F.t0, 0.25, rng.normal(size=(T, 32)) + 1j * rng.normal(size=(T, 32)))
        B = bilinear_form(F, G)
        P = pairing(duhamel_retarded(F), G)
        w_ret = max(w_ret, abs(abs(P) - abs(B)) / abs(B))
        A = pairing(F, duhamel_advanced(G))
        w_adv = max(w_adv, abs(A - P) / abs(P))
    return [
        Check("duality |<(TT*)_R F, G>| = |B(F,G)|", w_ret <= 1e-10, f"max relative error {w_ret:.3e}"),
        Check("retarded adjoint is advanced", w_adv <= 1e-10, f"max relative error {w_adv:.3e}"),
    ]
