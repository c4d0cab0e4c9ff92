"""Input validation helpers.

Every public entry point funnels user input through these so the error
messages (and the ``field`` attribute on :class:`ValidationError`) stay
consistent between the library, the estimators and the CLI.
"""

from __future__ import annotations

import math
from numbers import Integral, Real

import numpy as np

from .exceptions import LengthMismatchError, ValidationError


def check_real(field, value):
    if isinstance(value, bool) or not isinstance(value, Real):
        raise ValidationError(field, f"expected a real number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(field, f"must be finite, got {value!r}")
    return value


def check_interval(field, value, low=None, high=None, *, closed=(False, False)):
    """Check ``low < value < high`` with optionally closed ends; return float."""
    value = check_real(field, value)
    lo_closed, hi_closed = closed
    if low is not None:
        bad = value < low if lo_closed else value <= low
        if bad:
            op = ">=" if lo_closed else ">"
            raise ValidationError(field, f"must be {op} {low}, got {value!r}")
    if high is not None:
        bad = value > high if hi_closed else value >= high
        if bad:
            op = "<=" if hi_closed else "<"
            raise ValidationError(field, f"must be {op} {high}, got {value!r}")
    return value


def check_int(field, value, minimum=None):
    if isinstance(value, bool) or not isinstance(value, Integral):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        else:
            raise ValidationError(field, f"expected an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise ValidationError(field, f"must be >= {minimum}, got {value}")
    return value


def check_population(field, value):
    return check_interval(field, value, 0.0, None, closed=(True, False))


def check_schedule(h, T, upper=1.0, field="h"):
    """Validate a control schedule and return it as a tuple of floats.

    Entries must lie in ``[0, upper]`` and there must be exactly ``T`` of them.
    """
    values = tuple(float(x) for x in np.asarray(h, dtype=float).ravel())
    if len(values) != T:
        raise LengthMismatchError(
            f"{field}: expected {T} controls, got {len(values)}"
        )
    for t, x in enumerate(values):
        if not math.isfinite(x) or x < 0.0 or x > upper:
            raise ValidationError(
                f"{field}[{t}]", f"must lie in [0, {upper}], got {x!r}"
            )
    return values


def check_initial_state(X):
    """Coerce estimator input to a single ``(u, v, w)`` row.

    Accepts shape ``(3,)`` or ``(1, 3)``.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != 3:
        raise ValueError(
            f"expected initial states of shape (n_samples, 3), got {X.shape}"
        )
    if not np.all(np.isfinite(X)):
        raise ValueError("initial states must be finite")
    if np.any(X < 0):
        raise ValueError("initial populations must be nonnegative")
    return X
