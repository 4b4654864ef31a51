"""Dyadic atomic decomposition of sampled functions and sequence lemmas.

A sampled function is a finite list of values (scalars or vectors, whose
norm is the magnitude) each carrying the same rational measure ``weight``.
Samples are ranked by decreasing magnitude; the sample whose cumulative
measure lies in ``(lam/2, lam]`` goes to the band of scale ``lam``. Each band
becomes one atom, normalized so that its sup norm is ``lam**(-1/p)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_fraction, as_recip, check_nonnegative_sequence, check_samples, float_ratio


def row_magnitudes(values: np.ndarray) -> np.ndarray:
    """Euclidean norm of each row, scaled so tiny entries do not underflow."""
    scale = np.max(np.abs(values), axis=1)
    safe = np.where(scale > 0, scale, 1.0)
    return scale * np.sqrt(np.sum((np.abs(values) / safe[:, None]) ** 2, axis=1))


def ceil_log2(c: Fraction) -> int:
    """Smallest integer ``k`` with ``c <= 2**k`` (exact, ``c > 0``)."""
    if c <= 0:
        raise ValueError("ceil_log2 needs a positive argument")
    k = c.numerator.bit_length() - c.denominator.bit_length()
    while Fraction(2) ** k < c:
        k += 1
    while Fraction(2) ** (k - 1) >= c:
        k -= 1
    return k


@dataclass(frozen=True)
class SampledFunction:
    values: np.ndarray
    weight: Fraction

    def __post_init__(self):
        object.__setattr__(self, "values", check_samples(self.values))
        w = as_fraction(self.weight)
        if w <= 0:
            raise ValueError("sample weight must be positive")
        object.__setattr__(self, "weight", w)

    @property
    def magnitudes(self) -> np.ndarray:
        return row_magnitudes(self.values)

    def norm(self, recip) -> float:
        recip = float_ratio(as_recip(recip))
        mags = self.magnitudes
        if recip == 0:
            return float(np.max(mags, initial=0.0))
        return float(np.sum(mags ** (1 / recip)) * float_ratio(self.weight)) ** recip


@dataclass
class Atom:
    p: Fraction
    k: int
    support: np.ndarray
    values: np.ndarray
    weight: Fraction

    @property
    def size(self) -> Fraction:
        return Fraction(2) ** self.k

    @property
    def measure(self) -> Fraction:
        return len(self.support) * self.weight

    def norm(self, recip) -> float:
        recip = float_ratio(as_recip(recip))
        mags = row_magnitudes(self.values)
        if recip == 0:
            return float(np.max(mags, initial=0.0))
        return float(np.sum(mags ** (1 / recip)) * float_ratio(self.weight)) ** recip


@dataclass
class AtomicDecomposition:
    atoms: dict[int, Atom] = field(default_factory=dict)
    coeffs: dict[int, float] = field(default_factory=dict)

    def coefficient_norm(self, recip) -> float:
        """l^p norm of the coefficient sequence ``a_lam``."""
        a = np.array([self.coeffs[k] for k in sorted(self.coeffs)])
        recip = float_ratio(as_recip(recip))
        if recip == 0:
            return float(np.max(a, initial=0.0))
        return float(np.sum(a ** (1 / recip)) ** recip)

    def reconstruct(self, n_samples: int, n_features: int) -> np.ndarray:
        out = np.zeros((n_samples, n_features), dtype=np.result_type(*(a.values for a in self.atoms.values()), float))
        for k, atom in self.atoms.items():
            out[atom.support] += self.coeffs[k] * atom.values
        return out


def decompose(f: SampledFunction, p) -> AtomicDecomposition:
    """Split ``f`` into disjointly supported ``p``-atoms, one per dyadic band."""
    p = as_recip(p)
    if p == 0:
        raise ValueError("1/p must lie in (0, 1]")
    mags = f.magnitudes
    if not np.all(np.isfinite(mags)):
        raise ValueError("non-finite sample magnitudes")
    # descending magnitude, ties by index
    order = np.lexsort((np.arange(len(mags)), -mags))
    order = order[mags[order] > 0]

    bands: dict[int, list[int]] = {}
    for rank, idx in enumerate(order):
        k = ceil_log2((rank + 1) * f.weight)
        bands.setdefault(k, []).append(int(idx))

    out = AtomicDecomposition()
    pf = float_ratio(p)
    for k, members in sorted(bands.items()):
        support = np.array(members, dtype=np.intp)
        peak = float(mags[support[0]])
        a = (2.0**k) ** pf * peak
        out.coeffs[k] = a
        out.atoms[k] = Atom(p=p, k=k, support=support, values=f.values[support] / a, weight=f.weight)
    return out


@dataclass(frozen=True)
class BoundWitness:
    value: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.value <= self.bound * (1 + 1e-12)


def atom_norm_bound(atom: Atom, q) -> BoundWitness:
    """``||phi||_q`` next to ``lam**(1/q - 1/p)``."""
    q = as_recip(q)
    exponent = float_ratio(q) - float_ratio(atom.p)
    return BoundWitness(value=atom.norm(q), bound=float(2.0 ** (atom.k * exponent)))


def bracket(value) -> Fraction:
    """``max(l, 1/l)`` for ``l > 0``: the multiplicative absolute value."""
    x = as_fraction(value)
    if x <= 0:
        raise ValueError("bracket needs a positive argument")
    return max(x, 1 / x)


def c_lambda_tail(eps, k_max: int) -> float:
    """Partial sum of ``(1 + log[2**k]) * [2**k]**(-eps)`` over ``|k| <= k_max``."""
    eps = float(as_fraction(eps)) if not isinstance(eps, float) else eps
    if eps <= 0:
        raise ValueError("eps must be positive")
    ks = np.arange(-k_max, k_max + 1)
    return float(np.sum((1 + np.abs(ks) * math.log(2)) * 2.0 ** (-eps * np.abs(ks))))


@dataclass(frozen=True)
class YoungWitness:
    lhs: float
    rhs: float
    hypothesis: bool

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs * (1 + 1e-12)


def _lp(a: np.ndarray, recip: Fraction) -> float:
    if recip == 0:
        return float(np.max(a, initial=0.0))
    return float(np.sum(a ** (1 / float_ratio(recip))) ** float_ratio(recip))


def young_sequences(A, B, C, p, q, r, *, c_offset: int = 0) -> YoungWitness:
    """Both sides of ``sum_{n,k} A_n B_k C_{n-k} <= ||A||_p ||B||_q ||C||_r``.

    ``A`` and ``B`` are indexed from 0; ``C[m]`` is the term of index
    ``c_offset + m``.
    """
    A = check_nonnegative_sequence(A, "A")
    B = check_nonnegative_sequence(B, "B")
    C = check_nonnegative_sequence(C, "C")
    p, q, r = as_recip(p), as_recip(q), as_recip(r)
    conv = np.convolve(B, C)  # conv[m] = sum_k B_k C_{m-k}, at index n = m + c_offset
    lhs = 0.0
    for m, val in enumerate(conv):
        n = m + c_offset
        if 0 <= n < len(A):
            lhs += A[n] * val
    rhs = _lp(A, p) * _lp(B, q) * _lp(C, r)
    return YoungWitness(lhs=float(lhs), rhs=rhs, hypothesis=p + q + r >= 2)


def find_young_violation(p, q, r, *, trials: int = 200, length: int = 16, rng=None) -> YoungWitness | None:
    """Random search for data breaking Young's inequality; ``None`` if none found."""
    rng = np.random.default_rng(rng)
    for _ in range(trials):
        width = rng.uniform(0.2, 1.0)
        A, B, C = (rng.uniform(1 - width, 1.0, size=length) for _ in range(3))
        w = young_sequences(A, B, C, p, q, r, c_offset=-(length // 2))
        if not w.holds:
            return w
    return None


class DyadicAtomDecomposer(TransformerMixin, BaseEstimator):
    """sklearn-style wrapper around :func:`decompose`.

    ``fit`` decomposes the samples of ``X`` (rows are vector values);
    ``transform`` returns the atom values ``phi_lam`` at each sample, i.e. each
    row divided by its band coefficient, and ``inverse_transform`` multiplies
    back, reconstructing ``X`` exactly.

    Parameters
    ----------
    p : reciprocal exponent ``1/p`` in (0, 1], exact rational or string.
    weight : measure carried by each sample.
    """

    def __init__(self, p="1/2", weight=1):
        self.p = p
        self.weight = weight

    def fit(self, X, y=None):
        f = SampledFunction(np.asarray(X), self.weight)
        self.decomposition_ = decompose(f, self.p)
        n = f.values.shape[0]
        band = np.full(n, np.iinfo(np.int64).min, dtype=np.int64)
        coef = np.zeros(n)
        for k, atom in self.decomposition_.atoms.items():
            band[atom.support] = k
            coef[atom.support] = self.decomposition_.coeffs[k]
        self.band_ = band
        self.sample_coef_ = coef
        self.scales_ = np.array(sorted(self.decomposition_.coeffs), dtype=np.int64)
        self.coef_ = np.array([self.decomposition_.coeffs[k] for k in self.scales_])
        self.n_features_in_ = f.values.shape[1]
        return self

    def _check(self, X) -> np.ndarray:
        check_is_fitted(self, "decomposition_")
        arr = check_samples(X)
        if arr.shape[0] != self.sample_coef_.shape[0]:
            raise ValueError("transform expects the samples the decomposer was fitted on")
        return arr

    def transform(self, X):
        arr = self._check(X)
        scale = np.where(self.sample_coef_ > 0, self.sample_coef_, 1.0)
        out = arr / scale[:, None]
        return out[:, 0] if np.ndim(X) == 1 else out

    def inverse_transform(self, Phi):
        arr = self._check(Phi)
        out = arr * self.sample_coef_[:, None]
        return out[:, 0] if np.ndim(Phi) == 1 else out
