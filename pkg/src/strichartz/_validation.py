"""Input validation helpers shared by the estimators and the CLI.

Exponents are always handled as exact reciprocals: ``"inf"`` maps to 0,
``"2"`` maps to 1/2 only when passed through :func:`exponent_to_recip`;
:func:`as_recip` takes the reciprocal value itself.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from .exceptions import ParseError

_INF_TOKENS = {"inf", "infinity", "oo", "∞"}


def as_fraction(value) -> Fraction:
    """Convert ``value`` to an exact :class:`Fraction`.

    Accepts ints, Fractions, other exact rationals and strings such as
    ``"3/2"`` or ``"0.25"``. Floats are rejected so that exactness is never
    silently lost.
    """
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ParseError("empty rational")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {value!r}") from exc
    if isinstance(value, (np.integer,)):
        return Fraction(int(value))
    raise ParseError(f"not an exact rational: {value!r} ({type(value).__name__})")


def as_recip(value) -> Fraction:
    """Return a reciprocal exponent in [0, 1].

    The string ``"inf"`` is accepted as a shorthand for the reciprocal of an
    infinite exponent, i.e. 0.
    """
    if isinstance(value, str) and value.strip().lower() in _INF_TOKENS:
        return Fraction(0)
    x = as_fraction(value)
    if not 0 <= x <= 1:
        raise ParseError(f"reciprocal exponent {x} outside [0, 1]")
    return x


def exponent_to_recip(value) -> Fraction:
    """Map an exponent ``p`` in [1, inf] to its reciprocal ``1/p``."""
    if isinstance(value, str) and value.strip().lower() in _INF_TOKENS:
        return Fraction(0)
    p = as_fraction(value)
    if p < 1:
        raise ParseError(f"exponent {p} below 1")
    return 1 / p


def as_sigma(value) -> Fraction:
    s = as_fraction(value)
    if s <= 0:
        raise ParseError(f"sigma must be positive, got {s}")
    return s


def check_dimension(n, *, max_dim: int | None = None) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        try:
            n = as_fraction(n)
        except ParseError:
            raise ParseError(f"dimension must be a positive integer, got {n!r}") from None
        if n.denominator != 1:
            raise ParseError(f"dimension must be a positive integer, got {n}")
        n = n.numerator
    n = int(n)
    if n < 1:
        raise ParseError(f"dimension must be >= 1, got {n}")
    if max_dim is not None and n > max_dim:
        raise ParseError(f"dimension {n} exceeds supported maximum {max_dim}")
    return n


def parse_rational_list(text: str, *, recip: bool = False) -> list[Fraction]:
    """Parse ``"1/2,1/6,0"`` into Fractions (``inf`` allowed when ``recip``)."""
    parts = [p for p in text.split(",")]
    if any(not p.strip() for p in parts):
        raise ParseError(f"malformed list: {text!r}")
    conv = as_recip if recip else as_fraction
    return [conv(p) for p in parts]


def check_quads(X) -> list:
    """Coerce an array-like of shape (m, 4) into a list of :class:`Quad`."""
    from .exponents import Quad

    if isinstance(X, Quad):
        return [X]
    rows = list(X)
    quads = []
    for row in rows:
        if isinstance(row, Quad):
            quads.append(row)
            continue
        items = list(row)
        if len(items) != 4:
            raise ParseError(f"expected 4 reciprocals per row, got {len(items)}")
        quads.append(Quad(*(as_recip(v) for v in items)))
    return quads


def check_nonnegative_sequence(values: Iterable[float], name: str = "sequence") -> np.ndarray:
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    if np.any(arr < 0):
        raise ValueError(f"{name} must be non-negative")
    return arr


def check_samples(X) -> np.ndarray:
    """Validate sample values for the atomic decomposition.

    Scalars become a column; rows are treated as vectors in a Banach space
    whose norm is the Euclidean one.
    """
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValueError("samples must have shape (n_samples,) or (n_samples, n_features)")
    if not np.all(np.isfinite(arr)):
        raise ValueError("samples contain non-finite values")
    return arr


def lp_norm(values: np.ndarray, recip: float, weights=1.0, axis=None) -> np.ndarray:
    """Weighted discrete L^p norm, with ``recip = 1/p`` and 0 meaning sup."""
    a = np.abs(values)
    if recip == 0:
        return np.max(a, axis=axis, initial=0.0)
    p = 1.0 / recip
    return np.sum(weights * a**p, axis=axis) ** recip


def float_ratio(x: Fraction) -> float:
    return x.numerator / x.denominator


def rationals_up_to(max_den: int) -> list[Fraction]:
    """All rationals in [0, 1] with denominator at most ``max_den`` (Farey order)."""
    return sorted({Fraction(a, b) for b in range(1, max_den + 1) for a in range(b + 1)})


def lattice(den: int) -> list[Fraction]:
    """The uniform lattice {k/den : 0 <= k <= den}."""
    return [Fraction(k, den) for k in range(den + 1)]


def ensure_sequence(x) -> Sequence:
    if isinstance(x, (str, bytes)):
        return [x]
    try:
        return list(x)
    except TypeError:
        return [x]
