"""Adaptive quadrature over the whole real line.

The frequency integrals here have Lorentzian (1/nu^2) tails, so instead of
truncating we substitute ``nu = s tan(theta)`` and integrate over
``theta in [-pi/2, pi/2]``, where those tails become bounded.  The mapped
integrand is handled by composite Simpson with interval bisection, all
active intervals being refined together so the integrand is called on
arrays.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import QuadratureError
from .model import QuadratureSettings

__all__ = ["adaptive_simpson", "integrate_real_line"]

_HALF_PI = 0.5 * math.pi


def adaptive_simpson(f, a, b, settings: QuadratureSettings = QuadratureSettings(),
                     breakpoints=(), initial_panels=4):
    """Integrate the vectorised ``f`` over ``[a, b]``.

    Returns ``(value, error_estimate)``.  An interval is accepted once the
    difference between its one-panel and two-panel Simpson estimates is
    below its share (by length) of ``max(abs_tolerance, rel_tolerance *
    |total|)``.  Raises :class:`QuadratureError` when some interval still
    fails at ``max_refinement_depth`` bisections.
    """
    value, error = _simpson_pass(f, a, b, settings, breakpoints, initial_panels, None)
    if error > max(settings.abs_tolerance, settings.rel_tolerance * abs(value)):
        # the running total overshot while a peak was unresolved; redo the
        # refinement against the now-known magnitude
        value, error = _simpson_pass(f, a, b, settings, breakpoints, initial_panels, abs(value))
    return value, error


def _simpson_pass(f, a, b, settings, breakpoints, initial_panels, magnitude):
    edges = sorted({a, b, *[x for x in breakpoints if a < x < b]})
    lo = np.concatenate([np.linspace(p, q, initial_panels + 1)[:-1] for p, q in zip(edges, edges[1:])])
    hi = np.concatenate([np.linspace(p, q, initial_panels + 1)[1:] for p, q in zip(edges, edges[1:])])
    mid = 0.5 * (lo + hi)
    fx = f(np.concatenate([lo, mid, hi]))
    n = lo.size
    f_lo, f_mid, f_hi = fx[:n], fx[n:2 * n], fx[2 * n:]
    whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)
    depth = np.zeros(n, dtype=int)

    length = b - a
    accepted = 0.0
    error = 0.0
    failed = False
    while lo.size:
        h = hi - lo
        q1 = 0.5 * (lo + mid)
        q3 = 0.5 * (mid + hi)
        fq = f(np.concatenate([q1, q3]))
        f_q1, f_q3 = fq[: lo.size], fq[lo.size:]
        left = h / 12.0 * (f_lo + 4.0 * f_q1 + f_mid)
        right = h / 12.0 * (f_mid + 4.0 * f_q3 + f_hi)
        diff = (left + right - whole) / 15.0

        if magnitude is None:
            estimate = abs(accepted + np.sum(left + right + diff))
        else:
            estimate = magnitude
        target = max(settings.abs_tolerance, settings.rel_tolerance * estimate) * (h / length)
        done = np.abs(diff) <= target
        exhausted = ~done & (depth + 1 >= settings.max_refinement_depth)
        if np.any(exhausted):
            failed = True
            done = done | exhausted
        accepted += float(np.sum((left + right + diff)[done]))
        error += float(np.sum(np.abs(diff[done])))

        keep = ~done
        lo, mid, hi = lo[keep], mid[keep], hi[keep]
        f_lo, f_mid, f_hi = f_lo[keep], f_mid[keep], f_hi[keep]
        f_q1, f_q3 = f_q1[keep], f_q3[keep]
        depth = depth[keep] + 1
        lo, mid, hi = (
            np.concatenate([lo, mid]),
            np.concatenate([q1[keep], q3[keep]]),
            np.concatenate([mid, hi]),
        )
        f_lo, f_mid, f_hi = (
            np.concatenate([f_lo, f_mid]),
            np.concatenate([f_q1, f_q3]),
            np.concatenate([f_mid, f_hi]),
        )
        # recomputed rather than inherited from left/right: after many
        # bisections the rounded midpoint makes the halves unequal
        whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)
        depth = np.concatenate([depth, depth])

    if failed:
        raise QuadratureError(
            "adaptive Simpson did not converge at the maximum refinement depth",
            accepted, error,
        )
    return accepted, error


def integrate_real_line(f, scale, settings: QuadratureSettings = QuadratureSettings(),
                        features=(0.0,)):
    """Integrate ``f(nu)`` over the real line via ``nu = scale * tan(theta)``.

    ``features`` are frequencies where the integrand is sharply peaked; the
    mapped interval is split there so no peak can hide between samples.
    A peak narrower than about 1e-5 of its distance from zero cannot be
    certified to 1e-8: forming ``nu - centre`` in double precision already
    leaves the samples that noisy, and the refinement runs out of depth.
    """
    scale = float(scale)

    def mapped(theta):
        t = np.tan(theta)
        return f(scale * t) * scale * (1.0 + t * t)

    # the endpoints map to nu = +-inf; stay just inside so tan() stays finite
    edge = _HALF_PI * (1.0 - 1e-15)
    breaks = [math.atan(x / scale) for x in features]
    return adaptive_simpson(mapped, -edge, edge, settings, breakpoints=breaks)
