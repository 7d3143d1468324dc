"""Leading-order characteristic function of the level degeneracy.

With the scaled energy ``q = E/n`` (|q| <= 1) the log-degeneracy is, to
leading order in n, ``dhat(n, q) = -n * sum_s f_s(q) ln f_s(q)`` where the
three *elementary functions* f_{-1}, f_0, f_{+1} are the single-spin
occupation fractions that maximize the multinomial at fixed q.

All functions accept scalars or numpy arrays for ``q``.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.special import xlogy

from .exceptions import DomainError, SingularityError
from .spectrum import _check_n

# derivatives refuse |q| beyond this
EDGE_EPS = 1e-12


class ElementaryTriple(NamedTuple):
    f_minus: object
    f_zero: object
    f_plus: object


def _as_q(q, limit=1.0):
    arr = np.asarray(q, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(np.abs(arr) > limit):
        raise DomainError(f"scaled energy q must satisfy |q| <= {limit}, got {q!r}")
    return arr


def _out(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


def _alpha(q: np.ndarray) -> np.ndarray:
    # (sqrt(4 - 3q^2) - 1)/3 rationalized; stays accurate as q -> +-1
    return (1.0 - q) * (1.0 + q) / (np.sqrt(4.0 - 3.0 * q * q) + 1.0)


def alpha(q):
    """Location of the multinomial maximum over q0 at fixed q; in [0, 1/3]."""
    return _out(_alpha(_as_q(q)))


def _triple(q: np.ndarray):
    a = _alpha(q)
    aq = np.abs(q)
    big = (1.0 - a + aq) / 2.0
    # small = (1 - a - |q|)/2 rewritten through f_0^2 = f_-1 f_+1 to avoid cancellation
    small = np.where(aq == 0, big, a * a / big)
    f_minus = np.where(q >= 0, small, big)
    f_plus = np.where(q >= 0, big, small)
    return f_minus, a, f_plus


def elementary_f(q) -> ElementaryTriple:
    """Asymptotic occupation fractions (f_{-1}, f_0, f_{+1}) at scaled energy q."""
    f_minus, f_zero, f_plus = _triple(_as_q(q))
    return ElementaryTriple(_out(f_minus), _out(f_zero), _out(f_plus))


def _neg_entropy_sum(fs) -> np.ndarray:
    # fixed summation order, so that dhat(n, q) == dhat(n, -q) bitwise
    terms = np.sort(np.stack([xlogy(f, f) for f in np.broadcast_arrays(*fs)]), axis=0)
    return terms[0] + terms[1] + terms[2]


def dhat(n: int, q):
    """Leading-order ln D(n, nq); 0 ln 0 is taken as 0 at the band edges."""
    _check_n(n)
    return _out(-n * _neg_entropy_sum(_triple(_as_q(q))))


def dhat_deficit(n: int, q):
    """dhat(n, q) - n ln 3, written as -n sum_s f_s ln(3 f_s).

    Exactly zero at q = 0 and free of the cancellation between two O(n)
    terms near the band centre.
    """
    _check_n(n)
    fs = _triple(_as_q(q))
    terms = np.sort(np.stack([xlogy(f, 3.0 * f) for f in np.broadcast_arrays(*fs)]), axis=0)
    return _out(-n * (terms[0] + terms[1] + terms[2]))


def dhat_log_ratio_form(n: int, q):
    """Same as :func:`dhat`, written as -ln f_0 - (q/2) ln(f_+1/f_-1).

    Only defined strictly inside the band.
    """
    _check_n(n)
    q = _as_q(q, 1.0 - EDGE_EPS)
    f_minus, f_zero, f_plus = _triple(q)
    return _out(n * (-np.log(f_zero) - 0.5 * q * (np.log(f_plus) - np.log(f_minus))))


def _interior(q):
    arr = np.asarray(q, dtype=float)
    if np.any(np.abs(arr) > 1.0):
        raise DomainError(f"scaled energy q must satisfy |q| <= 1, got {q!r}")
    if np.any(np.abs(arr) > 1.0 - EDGE_EPS):
        raise SingularityError(f"derivative of dhat diverges at |q| = 1 (q={q!r})")
    return arr


def dhat_prime(n: int, q):
    """First derivative -(n/2) ln(f_+1/f_-1); this is n times the inverse temperature."""
    _check_n(n)
    f_minus, _, f_plus = _triple(_interior(q))
    return _out(-0.5 * n * (np.log(f_plus) - np.log(f_minus)))


def alpha_prime(q):
    q = _as_q(q)
    return _out(-q / np.sqrt(4.0 - 3.0 * q * q))


def dhat_second(n: int, q):
    """Second derivative of dhat, via the analytic alpha'(q)."""
    _check_n(n)
    q = _interior(q)
    f_minus, _, f_plus = _triple(q)
    da = -q / np.sqrt(4.0 - 3.0 * q * q)
    return _out(-0.5 * n * ((1.0 - da) / (2.0 * f_plus) + (1.0 + da) / (2.0 * f_minus)))


def d_full(n: int, q, q0):
    """Leading-order log-multinomial at scaled (i, i_0) = (nq, n q0)."""
    _check_n(n)
    q = _as_q(q)
    q0 = np.asarray(q0, dtype=float)
    upper = np.minimum(1.0 + q, 1.0 - q)
    if np.any(q0 < 0) or np.any(q0 > upper + 1e-15):
        raise DomainError(f"q0={q0!r} outside [0, min(1+q, 1-q)] for q={q!r}")
    fs = ((1.0 - q0 - q) / 2.0, q0, (1.0 - q0 + q) / 2.0)
    fs = tuple(np.clip(f, 0.0, None) for f in fs)
    return _out(-n * _neg_entropy_sum(fs))


def curvature_K(n: int, q):
    """Second derivative of :func:`d_full` with respect to q0 at its maximum.

    Equal to ``-n (1 + 3 alpha) / (4 alpha^2)``, i.e. ``-9n/2`` at q = 0.
    """
    _check_n(n)
    q = _as_q(q)
    if np.any(np.abs(q) >= 1.0):
        raise SingularityError(f"curvature diverges at |q| = 1 (q={q!r})")
    a = _alpha(q)
    return _out(-n * (1.0 + 3.0 * a) / (4.0 * a * a))


def dhat_saddle(n: int, q):
    """dhat plus the Gaussian-width term -0.5 ln|K/2pi|; diagnostic only."""
    return _out(np.asarray(dhat(n, q)) - 0.5 * np.log(np.abs(np.asarray(curvature_K(n, q))) / (2 * math.pi)))


def dos_charfun(n: int, energy):
    """ln g(E) = ln n + dhat(n, E/n): density of states per unit energy."""
    _check_n(n)
    e = np.asarray(energy, dtype=float)
    if np.any(np.abs(e) > n):
        raise DomainError(f"energy {energy!r} beyond the band edges +-{n}")
    return _out(math.log(n) + np.asarray(dhat(n, e / n)))
