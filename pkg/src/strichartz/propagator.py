"""Free Schrodinger evolution ``i u_t + Laplacian u = 0`` on sampled fields.

Two backends are provided. ``Spectral`` works on the periodic box of a
:class:`SpatialGrid` and multiplies the discrete Fourier coefficients by
``exp(-i t |xi|^2)``. ``Kernel`` evaluates the free-space integral

    U(t) f (x) = (4 pi i t)^(-n/2) sum_y w_y exp(i |x - y|^2 / (4 t)) f(y)

by direct quadrature over the sample points of the input, at any requested
output points. Both conventions agree: ``U(t) = exp(i t Laplacian)``.

The periodic box only emulates free space while the fastest resolved wave
packet has not wrapped around; see :func:`validity_horizon`.
"""

from __future__ import annotations

import enum
import json
import math
import struct
from dataclasses import dataclass, field
from typing import BinaryIO

import numpy as np
import scipy.fft

from .exceptions import GridMismatchError, HorizonError

# complex entries per kernel block, bounds peak memory of the direct sums
_BLOCK = 1 << 22


class Backend(str, enum.Enum):
    SPECTRAL = "spectral"
    KERNEL = "kernel"


def as_backend(value) -> Backend:
    if isinstance(value, Backend):
        return value
    try:
        return Backend(str(value).lower())
    except ValueError:
        raise ValueError(f"unknown backend {value!r}; choose spectral or kernel") from None


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform cell-centred grid on ``[-L/2, L/2)^n``.

    Coordinates along each axis are ``x_m = (m - N/2 + 1/2) * spacing``.
    """

    n: int
    N: int
    L: float

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.n}")
        if self.N < 8 or self.N & (self.N - 1):
            raise ValueError(f"N must be a power of two >= 8, got {self.N}")
        if not self.L > 0:
            raise ValueError(f"L must be positive, got {self.L}")
        object.__setattr__(self, "L", float(self.L))

    @property
    def spacing(self) -> float:
        return self.L / self.N

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.N,) * self.n

    @property
    def cell_measure(self) -> float:
        return self.spacing**self.n

    def axis(self) -> np.ndarray:
        return (np.arange(self.N) - self.N / 2 + 0.5) * self.spacing

    def coords(self) -> tuple[np.ndarray, ...]:
        ax = self.axis()
        return tuple(np.meshgrid(*([ax] * self.n), indexing="ij"))

    def points(self) -> np.ndarray:
        """Sample points as an array of shape ``(N**n, n)``, row-major."""
        return np.stack([c.ravel() for c in self.coords()], axis=1)

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.shape, self.cell_measure)

    def frequencies_sq(self) -> np.ndarray:
        """``|xi|^2`` on the discrete frequency lattice ``(2 pi / L) Z^n``."""
        k = 2 * np.pi * scipy.fft.fftfreq(self.N, d=self.spacing)
        ks = np.meshgrid(*([k] * self.n), indexing="ij")
        return sum(kk**2 for kk in ks)

    def header(self) -> dict:
        return {"type": "grid", "n": self.n, "N": self.N, "L": self.L}


@dataclass(frozen=True, eq=False)
class NodeSet:
    """Arbitrary quadrature nodes ``points`` (shape ``(M, n)``) with ``weights``."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        w = np.asarray(self.weights, dtype=float)
        if pts.ndim != 2 or pts.shape[1] not in (1, 2):
            raise ValueError("points must have shape (M, n) with n in {1, 2}")
        if w.shape != (pts.shape[0],):
            raise ValueError("one weight per node is required")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(w))):
            raise ValueError("non-finite nodes or weights")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.points.shape[1]

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points.shape[0],)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NodeSet)
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None

    def header(self) -> dict:
        return {"type": "nodes", "points": self.points.tolist(), "weights": self.weights.tolist()}

    @classmethod
    def from_grid(cls, grid: SpatialGrid, mask=None) -> "NodeSet":
        pts = grid.points()
        w = grid.weights.ravel()
        if mask is not None:
            keep = np.asarray(mask).ravel()
            pts, w = pts[keep], w[keep]
        return cls(pts, w)

    @classmethod
    def interval(cls, lo: float, hi: float, count: int) -> "NodeSet":
        """Midpoint rule on ``(lo, hi)``."""
        h = (hi - lo) / count
        x = lo + (np.arange(count) + 0.5) * h
        return cls(x[:, None], np.full(count, h))

    @classmethod
    def disk(cls, radius: float, per_axis: int) -> "NodeSet":
        """Cartesian midpoints of ``[-radius, radius]^2`` that fall in the disk."""
        h = 2 * radius / per_axis
        ax = -radius + (np.arange(per_axis) + 0.5) * h
        X, Y = np.meshgrid(ax, ax, indexing="ij")
        keep = (X**2 + Y**2 < radius**2).ravel()
        pts = np.stack([X.ravel(), Y.ravel()], axis=1)[keep]
        return cls(pts, np.full(len(pts), h * h))

    @classmethod
    def annulus(cls, r_lo: float, r_hi: float, radial: int, angular: int) -> "NodeSet":
        """Polar midpoint rule on ``r_lo < |y| < r_hi``."""
        dr = (r_hi - r_lo) / radial
        dth = 2 * np.pi / angular
        rho = r_lo + (np.arange(radial) + 0.5) * dr
        th = (np.arange(angular) + 0.5) * dth
        P, T = np.meshgrid(rho, th, indexing="ij")
        pts = np.stack([(P * np.cos(T)).ravel(), (P * np.sin(T)).ravel()], axis=1)
        return cls(pts, (P * dr * dth).ravel())


Support = SpatialGrid | NodeSet


def _weights(grid: Support) -> np.ndarray:
    return grid.weights.ravel() if isinstance(grid, NodeSet) else np.full(math.prod(grid.shape), grid.cell_measure)


def _points(grid: Support) -> np.ndarray:
    return grid.points if isinstance(grid, NodeSet) else grid.points()


@dataclass(frozen=True)
class Field:
    grid: Support
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != self.grid.shape:
            v = v.reshape(self.grid.shape)
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", v)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values.ravel()) ** 2 * _weights(self.grid))))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class SpaceTimeField:
    """Frames ``values[k]`` at the uniform times ``t0 + k * dt``."""

    grid: Support
    t0: float
    dt: float
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim < 1 or v.shape[1:] != self.grid.shape:
            raise GridMismatchError(f"frames of shape {v.shape[1:]} do not match grid shape {self.grid.shape}")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "dt", float(self.dt))

    @classmethod
    def from_frames(cls, frames: list[Field], t0: float, dt: float) -> "SpaceTimeField":
        if not frames:
            raise ValueError("at least one frame is required")
        grid = frames[0].grid
        for f in frames[1:]:
            if f.grid != grid:
                raise GridMismatchError("all frames must share one grid")
        return cls(grid, t0, dt, np.stack([f.values for f in frames]))

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.values.shape[0])

    @property
    def frames(self) -> list[Field]:
        return [Field(self.grid, v) for v in self.values]

    def flat(self) -> np.ndarray:
        return self.values.reshape(self.values.shape[0], -1)

    def with_values(self, values: np.ndarray) -> "SpaceTimeField":
        return SpaceTimeField(self.grid, self.t0, self.dt, values)


def _check_same(a: SpaceTimeField, b: SpaceTimeField) -> None:
    if a.grid != b.grid:
        raise GridMismatchError("fields live on different spatial grids")
    if a.values.shape[0] != b.values.shape[0] or not np.isclose(a.t0, b.t0) or not np.isclose(a.dt, b.dt):
        raise GridMismatchError("fields live on different time grids")


# -- evolution ---------------------------------------------------------------


def _spectral(values: np.ndarray, grid: SpatialGrid, t: float) -> np.ndarray:
    if t == 0:
        return values.copy()
    axes = tuple(range(-grid.n, 0))
    mult = np.exp(-1j * t * grid.frequencies_sq())
    return scipy.fft.ifftn(mult * scipy.fft.fftn(values, axes=axes), axes=axes)


def kernel_prefactor(t: float, n: int) -> complex:
    """``(4 pi i t)^(-n/2)`` on the principal branch."""
    return complex(4j * np.pi * t) ** (-n / 2)


def kernel_apply(values: np.ndarray, src: np.ndarray, weights: np.ndarray, dst: np.ndarray, t: float) -> np.ndarray:
    """Direct quadrature of the free kernel from points ``src`` to ``dst``."""
    if t == 0:
        raise ValueError("the free-space kernel is singular at t = 0")
    n = src.shape[1]
    wf = weights * values
    live = wf != 0
    src, wf = src[live], wf[live]
    out = np.zeros(dst.shape[0], dtype=complex)
    if len(wf) == 0:
        return out
    step = max(1, _BLOCK // len(wf))
    c = 1 / (4 * t)
    for a in range(0, dst.shape[0], step):
        d = dst[a : a + step]
        r2 = np.zeros((d.shape[0], src.shape[0]))
        for ax in range(n):
            r2 += (d[:, ax, None] - src[None, :, ax]) ** 2
        out[a : a + step] = np.exp(1j * c * r2) @ wf
    return kernel_prefactor(t, n) * out


def propagate(f: Field, t: float, backend=Backend.SPECTRAL, *, out: Support | None = None) -> Field:
    """``U(t) f``.

    The Spectral backend requires ``f`` on a :class:`SpatialGrid` and returns
    a field on the same grid. The Kernel backend returns the quadrature on
    ``out`` (default: the input sample points) and rejects ``t = 0``.
    """
    backend = as_backend(backend)
    t = float(t)
    if backend is Backend.SPECTRAL:
        if not isinstance(f.grid, SpatialGrid):
            raise GridMismatchError("the spectral backend needs a SpatialGrid")
        if out is not None and out != f.grid:
            raise GridMismatchError("the spectral backend evaluates on the input grid only")
        return Field(f.grid, _spectral(f.values, f.grid, t))
    if t == 0:
        raise ValueError("the kernel backend is undefined at t = 0")
    dst = out if out is not None else f.grid
    vals = kernel_apply(f.values.ravel(), _points(f.grid), _weights(f.grid), _points(dst), t)
    return Field(dst, vals.reshape(dst.shape))


def adjoint_propagate(f: Field, s: float, backend=Backend.SPECTRAL, *, out: Support | None = None) -> Field:
    """``U(s)^* f = U(-s) f``."""
    return propagate(f, -float(s), backend, out=out)


def duhamel_retarded(F: SpaceTimeField, backend=Backend.SPECTRAL) -> SpaceTimeField:
    """``v(t_k) = dt * sum_{j<k} U(t_k - s_j) F(s_j)``, so ``v(t_0) = 0``.

    Strict left-endpoint rule: the term ``j = k`` is never formed.
    """
    backend = as_backend(backend)
    T = F.values.shape[0]
    out = np.zeros_like(F.values)
    if backend is Backend.SPECTRAL:
        if not isinstance(F.grid, SpatialGrid):
            raise GridMismatchError("the spectral backend needs a SpatialGrid")
        axes = tuple(range(1, F.grid.n + 1))
        step = np.exp(-1j * F.dt * F.grid.frequencies_sq())
        Fh = scipy.fft.fftn(F.values, axes=axes)
        acc = np.zeros(F.grid.shape, dtype=complex)
        vh = np.zeros_like(Fh)
        for k in range(1, T):
            acc = step * (acc + F.dt * Fh[k - 1])
            vh[k] = acc
        return F.with_values(scipy.fft.ifftn(vh, axes=axes))
    pts, w = _points(F.grid), _weights(F.grid)
    flat = F.flat()
    live = [j for j in range(T) if np.any(flat[j])]
    res = out.reshape(T, -1)
    for k in range(1, T):
        for j in live:
            if j >= k:
                break
            res[k] += F.dt * kernel_apply(flat[j], pts, w, pts, (k - j) * F.dt)
    return F.with_values(out)


def duhamel_advanced(F: SpaceTimeField, backend=Backend.SPECTRAL) -> SpaceTimeField:
    """``dt * sum_{j>k} U(t_k - s_j) F(s_j)``: the adjoint of the retarded sum."""
    backend = as_backend(backend)
    T = F.values.shape[0]
    if backend is Backend.SPECTRAL:
        if not isinstance(F.grid, SpatialGrid):
            raise GridMismatchError("the spectral backend needs a SpatialGrid")
        axes = tuple(range(1, F.grid.n + 1))
        step = np.exp(1j * F.dt * F.grid.frequencies_sq())
        Fh = scipy.fft.fftn(F.values, axes=axes)
        acc = np.zeros(F.grid.shape, dtype=complex)
        vh = np.zeros_like(Fh)
        for k in range(T - 2, -1, -1):
            acc = step * (acc + F.dt * Fh[k + 1])
            vh[k] = acc
        return F.with_values(scipy.fft.ifftn(vh, axes=axes))
    pts, w = _points(F.grid), _weights(F.grid)
    flat = F.flat()
    out = np.zeros_like(flat)
    live = [j for j in range(T) if np.any(flat[j])]
    for k in range(T - 1):
        for j in live:
            if j > k:
                out[k] += F.dt * kernel_apply(flat[j], pts, w, pts, (k - j) * F.dt)
    return F.with_values(out.reshape(F.values.shape))


def time_reverse(F: SpaceTimeField) -> SpaceTimeField:
    """``F(t_k) -> conj(F(t_{T-1-k}))``; conjugates the retarded and advanced sums."""
    return F.with_values(np.conj(F.values[::-1]))


def retarded_eval(F: SpaceTimeField, out_times: np.ndarray, out: Support) -> np.ndarray:
    """Kernel-backend retarded sum at arbitrary times and points.

    Returns ``v[a, m] = dt * sum_{s_j < t_a} U(t_a - s_j) F(s_j) (x_m)`` with
    shape ``(len(out_times), M)``. Forcing frames that vanish are skipped, so
    a forcing supported on a short time interval costs only its support.
    """
    out_times = np.asarray(out_times, dtype=float)
    src, w = _points(F.grid), _weights(F.grid)
    dst = _points(out)
    n = src.shape[1]
    flat = F.flat()
    live = np.array([j for j in range(flat.shape[0]) if np.any(flat[j])], dtype=np.intp)
    s = F.times[live]
    wf = flat[live] * w  # (J, M_in)
    res = np.zeros((len(out_times), dst.shape[0]), dtype=complex)
    if len(live) == 0:
        return res
    r2 = np.zeros((dst.shape[0], src.shape[0]))
    for ax in range(n):
        r2 += (dst[:, ax, None] - src[None, :, ax]) ** 2
    step = max(1, _BLOCK // r2.size)
    for a, t in enumerate(out_times):
        idx = np.nonzero(s < t)[0]
        for b in range(0, len(idx), step):
            sel = idx[b : b + step]
            tau = t - s[sel]  # (J,)
            pref = (4j * np.pi * tau.astype(complex)) ** (-n / 2)
            ker = np.exp(1j * r2[None] / (4 * tau[:, None, None]))  # (J, M_out, M_in)
            res[a] += np.einsum("j,jmy,jy->m", pref, ker, wf[sel])
    return F.dt * res


# -- horizon and dispersion --------------------------------------------------


def validity_horizon(grid: SpatialGrid) -> float:
    """``t_max = L * spacing / (4 pi)``.

    The fastest resolved frequency ``pi / spacing`` travels at group velocity
    ``2 pi / spacing`` and reaches the far side of the box, a distance
    ``L / 2`` away, at this time.
    """
    return grid.L * grid.spacing / (4 * np.pi)


def default_dispersion_grid(n: int) -> SpatialGrid:
    if n == 1:
        return SpatialGrid(1, 65536, 65536 * 0.1)
    if n == 2:
        return SpatialGrid(2, 2048, 2048 * 0.35)
    raise ValueError(f"dimension must be 1 or 2, got {n}")


def default_dispersion_range(n: int) -> tuple[float, float]:
    return (1.0, 32.0) if n == 1 else (2.0, 16.0)


def dispersion_battery(grid: SpatialGrid) -> list[Field]:
    """L^1-normalized inputs: a grid spike and two centred Gaussians."""
    h = grid.spacing
    out = []
    spike = np.zeros(grid.shape)
    spike[(grid.N // 2,) * grid.n] = 1 / grid.cell_measure
    out.append(Field(grid, spike))
    r2 = sum(c**2 for c in grid.coords())
    for width in (2 * h, 8 * h):
        g = np.exp(-r2 / (2 * width**2))
        out.append(Field(grid, g / (g.sum() * grid.cell_measure)))
    return out


@dataclass(frozen=True)
class DispersionFit:
    slope: float
    constant: float
    times: np.ndarray = field(repr=False)
    sup_norms: np.ndarray = field(repr=False)


def dispersive_constant(
    backend=Backend.SPECTRAL,
    n: int = 1,
    t_range: tuple[float, float] | None = None,
    *,
    grid: SpatialGrid | None = None,
    samples: int = 9,
    battery: list[Field] | None = None,
) -> DispersionFit:
    """Fit ``log sup|U(t) f|`` against ``log t`` for a battery of inputs.

    At each of ``samples`` log-spaced times the sup norm is maximized over
    the battery; the slope is the least-squares fit and ``constant`` is the
    largest ``t^(n/2) * sup``. Spectral fits beyond :func:`validity_horizon`
    raise :class:`HorizonError`.
    """
    backend = as_backend(backend)
    grid = grid or default_dispersion_grid(n)
    if grid.n != n:
        raise GridMismatchError("grid dimension differs from n")
    lo, hi = t_range or default_dispersion_range(n)
    if not 0 < lo < hi:
        raise ValueError("t_range must satisfy 0 < lo < hi")
    if backend is Backend.SPECTRAL and hi > validity_horizon(grid):
        raise HorizonError(f"t = {hi} exceeds the validity horizon {validity_horizon(grid):.4g} of this box")
    battery = battery or dispersion_battery(grid)
    times = np.geomspace(lo, hi, samples)
    sups = np.zeros(samples)
    for f in battery:
        if backend is Backend.SPECTRAL:
            axes = tuple(range(-n, 0))
            fh = scipy.fft.fftn(f.values, axes=axes)
            k2 = grid.frequencies_sq()
            for a, t in enumerate(times):
                u = scipy.fft.ifftn(np.exp(-1j * t * k2) * fh, axes=axes)
                sups[a] = max(sups[a], float(np.max(np.abs(u))))
        else:
            for a, t in enumerate(times):
                sups[a] = max(sups[a], propagate(f, t, backend).sup_norm())
    slope = float(np.polyfit(np.log(times), np.log(sups), 1)[0])
    return DispersionFit(slope, float(np.max(sups * times ** (n / 2))), times, sups)


# -- serialization -----------------------------------------------------------

MAGIC = b"STRZ"
FORMAT_VERSION = 1


def _grid_from_header(h: dict) -> Support:
    if h["type"] == "grid":
        return SpatialGrid(int(h["n"]), int(h["N"]), float(h["L"]))
    if h["type"] == "nodes":
        return NodeSet(np.array(h["points"], dtype=float), np.array(h["weights"], dtype=float))
    raise ValueError(f"unknown grid type {h['type']!r}")


def _header(obj: Field | SpaceTimeField) -> dict:
    if isinstance(obj, SpaceTimeField):
        return {"kind": "SpaceTimeField", "grid": obj.grid.header(), "t0": obj.t0, "dt": obj.dt, "frames": obj.values.shape[0]}
    return {"kind": "Field", "grid": obj.grid.header()}


def _from_header(h: dict, values: np.ndarray) -> Field | SpaceTimeField:
    grid = _grid_from_header(h["grid"])
    if h["kind"] == "SpaceTimeField":
        return SpaceTimeField(grid, h["t0"], h["dt"], values.reshape((int(h["frames"]),) + grid.shape))
    if h["kind"] == "Field":
        return Field(grid, values.reshape(grid.shape))
    raise ValueError(f"unknown kind {h['kind']!r}")


def to_json(obj: Field | SpaceTimeField) -> str:
    """Header fields plus ``values``: row-major ``[re, im]`` pairs."""
    flat = obj.values.ravel()
    data = _header(obj)
    data["values"] = np.stack([flat.real, flat.imag], axis=1).tolist()
    return json.dumps(data)


def from_json(text: str) -> Field | SpaceTimeField:
    data = json.loads(text)
    pairs = np.asarray(data.pop("values"), dtype=float).reshape(-1, 2)
    return _from_header(data, pairs[:, 0] + 1j * pairs[:, 1])


def write_binary(obj: Field | SpaceTimeField, fh: BinaryIO) -> None:
    """``MAGIC``, uint32 version, uint32 header length, JSON header, complex128 LE values."""
    header = json.dumps(_header(obj)).encode("utf-8")
    fh.write(MAGIC)
    fh.write(struct.pack("<II", FORMAT_VERSION, len(header)))
    fh.write(header)
    fh.write(np.ascontiguousarray(obj.values, dtype="<c16").tobytes())


def read_binary(fh: BinaryIO) -> Field | SpaceTimeField:
    if fh.read(4) != MAGIC:
        raise ValueError("not a field file (bad magic)")
    version, length = struct.unpack("<II", fh.read(8))
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {version}")
    header = json.loads(fh.read(length).decode("utf-8"))
    values = np.frombuffer(fh.read(), dtype="<c16").astype(complex)
    return _from_header(header, values)
