"""Mixed norms, the retarded bilinear form and counterexample sweeps.

The sweeps drive the retarded Duhamel operator with the four explicit
forcing families (flash, bump, focusing, oscillatory), measure
``||v|| / ||F||`` on the region where each family concentrates, and fit the
log-log slope against the exponent predicted exactly from the quadruple.
All sweeps run on the free-space Kernel backend.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from . import whitney
from ._validation import as_fraction, as_recip, check_dimension, float_ratio, lp_norm
from .exceptions import DegenerateFitError, GridMismatchError, ScaleRangeError, UnderResolvedError
from .exponents import (
    ACCEPTABLE_QR,
    DIFF_R_LE_1_N,
    FLASH_QT,
    FOCUSING_RT_R,
    Quad,
    Verdict,
    schrodinger_global_necessary,
    schrodinger_local_necessary,
)
from .propagator import (
    Backend,
    NodeSet,
    SpaceTimeField,
    _points,
    _weights,
    adjoint_propagate,
    as_backend,
    kernel_apply,
    retarded_eval,
)


class NormOrder(str, enum.Enum):
    TIME_OUTER = "time-outer"  # L^q_t L^r_x
    SPACE_OUTER = "space-outer"  # L^r_x L^q_t


@dataclass(frozen=True)
class MixedNormSpec:
    time_exp: Fraction
    space_exp: Fraction
    order: NormOrder = NormOrder.TIME_OUTER

    def __post_init__(self):
        object.__setattr__(self, "time_exp", as_recip(self.time_exp))
        object.__setattr__(self, "space_exp", as_recip(self.space_exp))
        object.__setattr__(self, "order", NormOrder(self.order))

    def dual(self) -> "MixedNormSpec":
        """Norm with conjugate exponents ``1 - 1/q`` and ``1 - 1/r``."""
        return MixedNormSpec(1 - self.time_exp, 1 - self.space_exp, self.order)


def mixed_norm_array(values: np.ndarray, dt: float, weights: np.ndarray, spec: MixedNormSpec) -> float:
    """Iterated discrete norm of ``values`` with shape ``(frames, points)``."""
    a = np.abs(np.asarray(values)).reshape(len(values), -1)
    w = np.asarray(weights, dtype=float).ravel()
    keep = w > 0
    a, w = a[:, keep], w[keep]
    q, r = float_ratio(spec.time_exp), float_ratio(spec.space_exp)
    if spec.order is NormOrder.TIME_OUTER:
        inner = lp_norm(a, r, w[None, :], axis=1)
        return float(lp_norm(inner, q, dt))
    inner = lp_norm(a, q, dt, axis=0)
    return float(lp_norm(inner, r, w))


def mixed_norm(u: SpaceTimeField, spec: MixedNormSpec, time_window=None, space_weight=None) -> float:
    """Discrete ``L^q_t L^r_x`` (or reversed) norm of ``u``.

    ``time_window = (lo, hi)`` keeps the frames with ``lo <= t <= hi``;
    ``space_weight`` replaces the grid's quadrature weights (points with
    weight 0 are ignored, which doubles as a spatial mask).
    """
    vals = u.flat()
    if time_window is not None:
        lo, hi = time_window
        t = u.times
        vals = vals[(t >= lo) & (t <= hi)]
    w = _weights(u.grid) if space_weight is None else np.asarray(space_weight, dtype=float).ravel()
    if w.shape != (vals.shape[1],):
        raise GridMismatchError("space_weight must have one entry per spatial point")
    if len(vals) == 0:
        return 0.0
    return mixed_norm_array(vals, u.dt, w, spec)


def pairing(a: SpaceTimeField, b: SpaceTimeField) -> complex:
    """``sum_k dt sum_m w_m a(t_k, x_m) conj(b(t_k, x_m))``."""
    _check_pair(a, b)
    w = _weights(a.grid)
    return complex(a.dt * np.sum(a.flat() * np.conj(b.flat()) * w[None, :]))


def _check_pair(a: SpaceTimeField, b: SpaceTimeField) -> None:
    if a.grid != b.grid:
        raise GridMismatchError("fields live on different spatial grids")
    if a.values.shape != b.values.shape or not np.isclose(a.t0, b.t0) or not np.isclose(a.dt, b.dt):
        raise GridMismatchError("fields live on different time grids")


def retarded_gram(F: SpaceTimeField, G: SpaceTimeField, backend=Backend.SPECTRAL) -> np.ndarray:
    """``M[j, k] = dt^2 <U(s_j)^* F_j, U(t_k)^* G_k>`` for ``j < k``, zero elsewhere."""
    _check_pair(F, G)
    backend = as_backend(backend)
    T = F.values.shape[0]
    w = _weights(F.grid)
    M = np.zeros((T, T), dtype=complex)
    if backend is Backend.SPECTRAL:
        A = np.stack([adjoint_propagate(f, s).values.ravel() for f, s in zip(F.frames, F.times)])
        B = np.stack([adjoint_propagate(g, t).values.ravel() for g, t in zip(G.frames, G.times)])
        M = (A * w[None, :]) @ np.conj(B).T
    else:
        # <U(s)^* F, U(t)^* G> = <U(t - s) F, G>; t - s > 0 off the diagonal
        pts = _points(F.grid)
        Ff, Gf = F.flat(), G.flat()
        for j in range(T):
            if not np.any(Ff[j]):
                continue
            for k in range(j + 1, T):
                Uf = kernel_apply(Ff[j], pts, w, pts, (k - j) * F.dt)
                M[j, k] = np.sum(Uf * np.conj(Gf[k]) * w)
    return np.triu(M, 1) * F.dt**2


def bilinear_form(F: SpaceTimeField, G: SpaceTimeField, backend=Backend.SPECTRAL) -> complex:
    """Quadrature of ``iint_{s<t} <U(s)^* F(s), U(t)^* G(t)> ds dt`` (pairs j < k)."""
    return complex(retarded_gram(F, G, backend).sum())


@dataclass(frozen=True)
class WhitneyCheck:
    direct: complex
    decomposed: complex
    squares: int
    uncovered: int

    @property
    def relative_error(self) -> float:
        scale = abs(self.direct)
        return abs(self.direct - self.decomposed) / scale if scale else abs(self.decomposed)


def whitney_sum_check(F: SpaceTimeField, G: SpaceTimeField, scales: tuple[int, int] | None = None, backend=Backend.SPECTRAL) -> WhitneyCheck:
    """Compare ``B(F, G)`` with the sum of ``B_Q`` over Whitney squares.

    Time is measured in index units: the pair ``(j, k)`` sits at the point
    ``(j + 1/2, k + 1/2)`` of the window ``[0, T)^2``. Adjacent pairs need the
    scale ``2**-1``, so ``scales = (k_min, k_max)`` defaults to
    ``(-1, ceil(log2 T))``. Pairs that no square covers raise
    :class:`ScaleRangeError` rather than being dropped.
    """
    M = retarded_gram(F, G, backend)
    T = M.shape[0]
    k_min, k_max = scales if scales is not None else (-1, max(0, math.ceil(math.log2(T))))
    squares = whitney.decompose(whitney.Window(0, T), k_min, k_max)
    cover = np.zeros((T, T), dtype=np.int64)
    decomposed = 0j
    half = Fraction(1, 2)

    def index_range(lo: Fraction, hi: Fraction) -> tuple[int, int]:
        # indices m with lo <= m + 1/2 < hi
        return max(0, math.ceil(lo - half)), min(T, math.ceil(hi - half))

    for sq in squares:
        j0, j1 = index_range(*sq.s_interval)
        k0, k1 = index_range(*sq.t_interval)
        if j0 < j1 and k0 < k1:
            decomposed += M[j0:j1, k0:k1].sum()
            cover[j0:j1, k0:k1] += 1
    upper = np.triu(np.ones((T, T), dtype=bool), 1)
    uncovered = int(np.sum(upper & (cover == 0)))
    if uncovered:
        raise ScaleRangeError(f"{uncovered} retarded index pairs lie in no Whitney square of scales 2^{k_min}..2^{k_max}")
    if np.any(cover > 1):
        raise AssertionError("Whitney squares overlap")
    return WhitneyCheck(complex(M.sum()), complex(decomposed), len(squares), uncovered)


# -- counterexample families ---------------------------------------------------


class Family(str, enum.Enum):
    FLASH = "flash"
    BUMP = "bump"
    FOCUSING = "focusing"
    OSCILLATORY = "oscillatory"


DEFAULT_ETA = {
    Family.FLASH: Fraction(1, 8),
    Family.BUMP: Fraction(1, 8),
    Family.FOCUSING: Fraction(1, 8),
    Family.OSCILLATORY: Fraction(1, 16),
}

DEFAULT_PARAMS = {
    Family.FLASH: [Fraction(1, 2**k) for k in range(2, 7)],
    Family.BUMP: [Fraction(2**k) for k in range(2, 7)],
    Family.FOCUSING: [Fraction(1, 2**k) for k in range(2, 7)],
    Family.OSCILLATORY: [Fraction(2**k) for k in range(3, 7)],
}

DEFAULT_TOLERANCE = {
    Family.FLASH: 0.10,
    Family.BUMP: 0.10,
    Family.FOCUSING: 0.10,
    Family.OSCILLATORY: 0.15,
}

PARAM_NAME = {Family.FLASH: "eps", Family.BUMP: "t", Family.FOCUSING: "eps", Family.OSCILLATORY: "R"}

MIN_SAMPLES = 4


@dataclass(frozen=True)
class CounterexampleSpec:
    """One forcing term. ``param`` is eps (flash, focusing), R (oscillatory)
    or the output time t (bump, whose forcing does not depend on it)."""

    family: Family
    n: int
    param: Fraction
    eta: Fraction | None = None

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "n", check_dimension(self.n, max_dim=2))
        object.__setattr__(self, "param", as_fraction(self.param))
        eta = DEFAULT_ETA[fam] if self.eta is None else as_fraction(self.eta)
        object.__setattr__(self, "eta", eta)
        p = self.param
        if fam in (Family.FLASH, Family.FOCUSING) and not 0 < p * p < eta < 1:
            raise ValueError(f"need 0 < eps^2 < eta < 1, got eps={p}, eta={eta}")
        if fam is Family.OSCILLATORY:
            if not (p > 1 and 0 < eta < 1):
                raise ValueError(f"need R > 1 and 0 < eta < 1, got R={p}, eta={eta}")
            if self.n != 1:
                raise ValueError("the oscillatory family is implemented for n = 1")
        if fam is Family.BUMP and not p > 2:
            raise ValueError(f"bump output time must exceed 2, got {p}")


@dataclass(frozen=True)
class Resolution:
    """Samples across the finest spatial feature and across the forcing time support."""

    space: int = 8
    time: int = 4
    out_space: int = 32
    out_time: int = 8
    angular: int = 64


def _check_resolution(res: Resolution) -> None:
    if res.space < MIN_SAMPLES or res.time < MIN_SAMPLES:
        raise UnderResolvedError(f"at least {MIN_SAMPLES} samples per feature are required, got space={res.space}, time={res.time}")


def _box_nodes(n: int, radius: float, count: int) -> NodeSet:
    if n == 1:
        return NodeSet.interval(-radius, radius, count)
    return NodeSet.disk(radius, count)


def make_forcing(spec: CounterexampleSpec, res: Resolution = Resolution()) -> SpaceTimeField:
    """Sample the forcing term of ``spec`` with midpoint rules in ``s`` and ``y``.

    Flash: ``chi(0<s<eps^2, |y|<eps)``. Bump: ``chi(0<s<1, |y|<1)``.
    Focusing: ``chi(0<s<eps^2, ||y| - eta/eps| < eps)``. Oscillatory:
    ``exp(-2i R^2 s^2) chi(0<s<1, |y| <= eta/R)``; the phase sign matches the
    ``exp(+i|x-y|^2/4t)`` kernel so that the stationary point exists.
    """
    _check_resolution(res)
    fam, n = spec.family, spec.n
    p = float_ratio(spec.param)
    eta = float_ratio(spec.eta)
    if fam is Family.FLASH:
        T, nodes, frames = p * p, _box_nodes(n, p, res.space), res.time
    elif fam is Family.BUMP:
        T, nodes, frames = 1.0, _box_nodes(n, 1.0, res.space), res.time
    elif fam is Family.FOCUSING:
        c = eta / p
        T, frames = p * p, res.time
        if n == 1:
            half = NodeSet.interval(c - p, c + p, res.space)
            nodes = NodeSet(np.concatenate([-half.points[::-1], half.points]), np.concatenate([half.weights, half.weights]))
        else:
            nodes = NodeSet.annulus(c - p, c + p, res.space, res.angular)
    else:
        R = p
        width = eta / R
        nodes = NodeSet.interval(-width, width, 2 * res.space)
        # phase 2 R^2 s^2 changes by at most 4 R^2 ds per step; res.time steps per 1/R^2
        frames = int(res.time * 4 * R * R)
        T = 1.0
    dt = T / frames
    s = (np.arange(frames) + 0.5) * dt
    vals = np.ones((frames, nodes.shape[0]), dtype=complex)
    if fam is Family.OSCILLATORY:
        vals *= np.exp(-2j * p * p * s**2)[:, None]
    return SpaceTimeField(nodes, dt / 2, dt, vals)


def measurement_region(spec: CounterexampleSpec, res: Resolution = Resolution()) -> tuple[np.ndarray, float, NodeSet]:
    """Output times (uniform midpoints), their step, and output nodes."""
    fam, n = spec.family, spec.n
    p = float_ratio(spec.param)
    eta = float_ratio(spec.eta)
    if fam is Family.BUMP:
        return np.array([p]), 1.0, _box_nodes(n, eta * p, res.out_space)
    dt = 1.0 / res.out_time
    times = 2 + (np.arange(res.out_time) + 0.5) * dt
    if fam is Family.FLASH:
        return times, dt, _box_nodes(n, eta / p, res.out_space)
    if fam is Family.FOCUSING:
        return times, dt, _box_nodes(n, p / 2, res.out_space)
    R = p
    lo, hi = R + eta / R, 2 * R - eta / R
    return times, dt, NodeSet.interval(lo, hi, res.out_space)


def _norm_specs(family: Family, quad: Quad) -> tuple[MixedNormSpec, MixedNormSpec]:
    """Norm for ``v`` and dual norm for ``F``."""
    order = NormOrder.SPACE_OUTER if family is Family.OSCILLATORY else NormOrder.TIME_OUTER
    return MixedNormSpec(quad.q, quad.r, order), MixedNormSpec(1 - quad.qt, 1 - quad.rt, order)


def predicted_slope(family, quad: Quad, n: int) -> Fraction:
    """Exact log-log slope of the measured ratio against the family parameter.

    Flash ``2/qt + n/rt - n/r``; bump ``-n(1/2 - 1/r)``; focusing
    ``n/r + 2/qt - (n-2)/rt``; oscillatory ``n(1/r - 1/rt) - 1``.
    """
    family = Family(family)
    n = check_dimension(n, max_dim=2)
    if family is Family.FLASH:
        return 2 * quad.qt + n * quad.rt - n * quad.r
    if family is Family.BUMP:
        return -n * (Fraction(1, 2) - quad.r)
    if family is Family.FOCUSING:
        return n * quad.r + 2 * quad.qt - (n - 2) * quad.rt
    return n * (quad.r - quad.rt) - 1


def blowup(family, quad: Quad, n: int) -> bool:
    """Whether the family forces the estimate to fail for ``quad``.

    Flash and focusing blow up as eps -> 0 for a negative slope, the
    oscillatory family as R -> infinity for a positive one, and the bump
    solution fails to be ``L^q`` in time unless ``(q, r)`` is acceptable.
    """
    family = Family(family)
    slope = predicted_slope(family, quad, n)
    if family is Family.OSCILLATORY:
        return slope > 0
    if family is Family.BUMP:
        return not (quad.q == 0 and quad.r == Fraction(1, 2)) and quad.q >= -slope
    return slope < 0


EXPECTED_TAG = {Family.FLASH: FLASH_QT, Family.BUMP: ACCEPTABLE_QR, Family.FOCUSING: FOCUSING_RT_R, Family.OSCILLATORY: DIFF_R_LE_1_N}


def necessary_verdict(family, quad: Quad, n: int) -> Verdict:
    """The necessary-condition verdict that a blow-up of ``family`` refutes."""
    if Family(family) is Family.BUMP:
        return schrodinger_global_necessary(quad, n)
    return schrodinger_local_necessary(quad, n)


class LogLogSlopeRegressor(RegressorMixin, BaseEstimator):
    """Ordinary least squares of ``log y`` on ``log x``.

    With ``drop_transient`` the first (coarsest) point is discarded when its
    residual against the line through the remaining points exceeds both
    ``transient_factor`` times their largest residual and ``min_residual``
    (in natural-log units). At least three points always remain.

    Attributes: ``coef_`` (the slope), ``intercept_``, ``dropped_`` (number of
    leading points discarded), ``n_points_``.
    """

    def __init__(self, drop_transient: bool = True, transient_factor: float = 3.0, min_residual: float = 0.01):
        self.drop_transient = drop_transient
        self.transient_factor = transient_factor
        self.min_residual = min_residual

    @staticmethod
    def _logs(X, y=None):
        x = np.asarray(X, dtype=float).ravel()
        if np.any(x <= 0):
            raise ValueError("log-log fit needs positive abscissae")
        if y is None:
            return np.log(x), None
        yy = np.asarray(y, dtype=float).ravel()
        if yy.shape != x.shape:
            raise ValueError("X and y lengths differ")
        return np.log(x), yy

    def fit(self, X, y):
        lx, yy = self._logs(X, y)
        ok = np.isfinite(yy) & (yy > 0)
        lx, ly = lx[ok], np.log(yy[ok])
        if len(lx) < 3:
            raise DegenerateFitError(f"need at least 3 usable points, got {len(lx)}")
        dropped = 0
        if self.drop_transient and len(lx) >= 4:
            slope, icpt = np.polyfit(lx[1:], ly[1:], 1)
            rest = np.max(np.abs(ly[1:] - (slope * lx[1:] + icpt)))
            first = abs(ly[0] - (slope * lx[0] + icpt))
            if first > max(self.transient_factor * rest, self.min_residual):
                lx, ly = lx[1:], ly[1:]
                dropped = 1
        slope, icpt = np.polyfit(lx, ly, 1)
        self.coef_ = float(slope)
        self.intercept_ = float(icpt)
        self.dropped_ = dropped
        self.n_points_ = len(lx)
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        lx, _ = self._logs(X)
        return np.exp(self.intercept_ + self.coef_ * lx)


def _fraction_text(x: Fraction) -> str:
    return str(x)


@dataclass(frozen=True)
class SweepReport:
    family: Family
    quad: Quad
    n: int
    params: list[Fraction]
    ratios: list[float]
    fitted_slope: float
    predicted_slope: Fraction
    tolerance: float
    verdict: bool
    blowup: bool = False
    expected_tag: str = ""
    dropped: int = 0

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "quad": [_fraction_text(v) for v in self.quad],
            "n": self.n,
            "params": [_fraction_text(p) for p in self.params],
            "ratios": [float(r) for r in self.ratios],
            "fitted_slope": self.fitted_slope,
            "predicted_slope": _fraction_text(self.predicted_slope),
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "blowup": self.blowup,
            "expected_tag": self.expected_tag,
            "dropped": self.dropped,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        lines = ["param,ratio"]
        lines += [f"{float(p):.12g},{r:.12g}" for p, r in zip(self.params, self.ratios)]
        return "\n".join(lines) + "\n"


def slope_tolerance(predicted: Fraction, rel: float, floor: float = 0.02) -> float:
    """``rel * |predicted|``; ``floor`` stands in when the prediction is 0."""
    return rel * abs(float_ratio(predicted)) if predicted != 0 else floor


def measure_ratio(spec: CounterexampleSpec, quad: Quad, res: Resolution = Resolution()) -> float:
    """``||v|| / ||F||`` on the family's region (for the bump: ``||v(t)||_r``)."""
    F = make_forcing(spec, res)
    times, dt, out = measurement_region(spec, res)
    v = retarded_eval(F, times, out)
    v_spec, f_spec = _norm_specs(spec.family, quad)
    if spec.family is Family.BUMP:
        return mixed_norm_array(v, 1.0, out.weights, MixedNormSpec(0, quad.r))
    num = mixed_norm_array(v, dt, out.weights, v_spec)
    den = mixed_norm_array(F.flat(), F.dt, F.grid.weights, f_spec)
    return num / den


def sweep(
    family,
    quad: Quad,
    n: int,
    params=None,
    backend=Backend.KERNEL,
    *,
    eta=None,
    tolerance: float | None = None,
    resolution: Resolution = Resolution(),
) -> SweepReport:
    """Measure the ratio over a parameter ladder and fit its log-log slope."""
    family = Family(family)
    if as_backend(backend) is not Backend.KERNEL:
        raise ValueError("counterexample sweeps run on the kernel backend")
    params = [as_fraction(p) for p in (params if params is not None else DEFAULT_PARAMS[family])]
    if len(params) < 4:
        raise DegenerateFitError("a sweep needs at least 4 parameter values")
    if max(params) / min(params) < 4:
        raise DegenerateFitError("the parameter ladder must span at least two octaves")
    specs = [CounterexampleSpec(family, n, p, eta) for p in params]
    ratios = [measure_ratio(s, quad, resolution) for s in specs]
    reg = LogLogSlopeRegressor().fit([float_ratio(p) for p in params], ratios)
    pred = predicted_slope(family, quad, n)
    rel = DEFAULT_TOLERANCE[family] if tolerance is None else float(tolerance)
    tol = slope_tolerance(pred, rel)
    return SweepReport(
        family=family,
        quad=quad,
        n=specs[0].n,
        params=params,
        ratios=ratios,
        fitted_slope=reg.coef_,
        predicted_slope=pred,
        tolerance=tol,
        verdict=abs(reg.coef_ - float_ratio(pred)) <= tol,
        blowup=blowup(family, quad, n),
        expected_tag=EXPECTED_TAG[family],
        dropped=reg.dropped_,
    )


# -- boundedness probe ---------------------------------------------------------


def local_estimate_probe(quad: Quad, n: int = 1, trials: int = 12, resolution: int = 256, seed=0) -> float:
    """Largest ``||v||_{L^q L^r([2,3] x box)} / ||F||`` over random forcings on ``[0,1]``.

    The forcings are random boxes, random smooth bumps, and flash and bump
    terms at moderate parameters, sampled on ``[-4, 4]`` with ``resolution``
    points and ``resolution // 16`` time steps. A bounded estimate shows up
    as a maximum that settles as ``resolution`` doubles.
    """
    if check_dimension(n, max_dim=2) != 1:
        raise ValueError("the probe is implemented for n = 1")
    if resolution < 64:
        raise UnderResolvedError("the probe needs resolution >= 64")
    rng = np.random.default_rng(seed)
    src = NodeSet.interval(-4.0, 4.0, resolution)
    y = src.points[:, 0]
    frames = resolution // 16
    dt = 1.0 / frames
    s = (np.arange(frames) + 0.5) * dt
    out_t = 2 + (np.arange(8) + 0.5) / 8
    out = NodeSet.interval(-8.0, 8.0, resolution)
    v_spec = MixedNormSpec(quad.q, quad.r)
    f_spec = MixedNormSpec(1 - quad.qt, 1 - quad.rt)

    forcings = [
        np.outer(s < 0.25, np.abs(y) < 0.5).astype(complex),  # flash at eps = 1/2
        np.outer(s < 1.0, np.abs(y) < 1.0).astype(complex),  # bump
    ]
    for a in range(trials):
        if a % 2 == 0:
            s0, s1 = np.sort(rng.uniform(0, 1, 2))
            y0, y1 = np.sort(rng.uniform(-3, 3, 2))
            forcings.append(np.outer((s >= s0) & (s <= s1), (y >= y0) & (y <= y1)).astype(complex))
        else:
            c, wid, k = rng.uniform(-2, 2), rng.uniform(0.3, 1.0), rng.uniform(-3, 3)
            prof = np.exp(-((y - c) ** 2) / (2 * wid**2) + 1j * k * y)
            forcings.append(np.outer(np.sin(np.pi * s) ** 2, prof))
    best = 0.0
    for vals in forcings:
        if not np.any(vals):
            continue
        F = SpaceTimeField(src, dt / 2, dt, vals)
        den = mixed_norm_array(vals, dt, src.weights, f_spec)
        v = retarded_eval(F, out_t, out)
        best = max(best, mixed_norm_array(v, 1 / 8, out.weights, v_spec) / den)
    return best
