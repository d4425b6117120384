"""Small-vector helpers for the CPU reference semantics.

Values are plain tuples of floats with 1 to 4 components.  Out-of-domain
operations (division by zero, pow of a negative base, normalizing a zero
vector) return IEEE infinities/NaNs here; the interpreter substitutes its
documented finite sentinel and raises the non-finite flag.
"""

from __future__ import annotations

import math

Vec = tuple


def dim(v):
    return len(v)


def broadcast(v, n):
    """Expand a 1-component value to n components; pass others through."""
    if len(v) == n:
        return v
    if len(v) == 1:
        return v * n
    raise ValueError(f"cannot broadcast dim {len(v)} to {n}")


def coerce(v, n):
    """Coerce v to dimension n: broadcast scalars up, truncate larger vectors."""
    if len(v) == n:
        return v
    if len(v) == 1:
        return v * n
    if len(v) > n:
        return v[:n]
    raise ValueError(f"cannot coerce dim {len(v)} to {n}")


def map1(f, a):
    return tuple(f(x) for x in a)


def map2(f, a, b):
    return tuple(f(x, y) for x, y in zip(a, b))


def map3(f, a, b, c):
    return tuple(f(x, y, z) for x, y, z in zip(a, b, c))


def sdiv(a, b):
    if b == 0.0:
        return math.inf if a >= 0.0 else -math.inf
    return a / b


def spow(a, b):
    try:
        r = math.pow(a, b)
    except (ValueError, OverflowError):
        return math.nan
    return r


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def length(a):
    return math.sqrt(dot(a, a))


def distance(a, b):
    return length(map2(lambda x, y: x - y, a, b))


def normalize(a):
    n = length(a)
    return tuple(sdiv(x, n) for x in a)


def cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def clamp(x, lo, hi):
    return min(max(x, lo), hi)


def saturate(x):
    return clamp(x, 0.0, 1.0)


def lerp(a, b, t):
    return a + t * (b - a)


def fract(x):
    return x - math.floor(x)


def is_finite(v):
    return all(math.isfinite(x) for x in v)
