"""
topology/windows.py  –  Elementary-window formulas and the brute-force oracles
that pin their conventions.

Inside a window, a curve with entry (m, t) on the window's pants curve has
slope (p, q): (t, m) in the one-holed torus and (t, m/2) in the four-holed
sphere. Left twists increment t.
"""

from math import gcd
from typing import Optional, Tuple

from topology.errors import UnsupportedError
from topology.models import Curve, Window
from topology.realize import SurfaceModel

Slope = Tuple[int, int]

# generic base point (1/1009, 1/2003) for the second geodesic, over the common denominator
_DENOM = 1009 * 2003
_OFFSET = (2003, 1009)


def normalize(p: int, q: int) -> Slope:
    if q < 0 or (q == 0 and p < 0):
        return -p, -q
    return p, q


def _scale(window: Window) -> int:
    return 1 if window.kind == "torus" else 2


def slope_of(entry: Tuple[int, int], window: Window) -> Slope:
    m, t = entry
    if m % _scale(window):
        raise UnsupportedError(f"odd m={m} cannot cross {window.core} inside a four-holed window")
    return normalize(t, m // _scale(window))


def coord_of(slope: Slope, window: Window) -> Tuple[int, int]:
    p, q = normalize(*slope)
    return q * _scale(window), p


def window_intersection(a: Slope, v: Slope, window: Window) -> int:
    p, q = a
    r, s = v
    return _scale(window) * abs(p * s - q * r)


def window_twist(a: Slope, v: Slope, k: int, window: Window) -> Slope:
    """t_a^k(v) = v + k·scale·det(a, v)·a."""
    p, q = a
    r, s = v
    step = k * _scale(window) * (p * s - q * r)
    return normalize(r + step * p, s + step * q)


def pants_twist(m: int, t: int, k: int) -> Tuple[int, int]:
    return m, t + k * m


# ── Coordinates for named window curves ───────────────────────────────────

def window_coords(model: SurfaceModel, name: str, window: Window) -> Optional[Curve]:
    """Coord form of the window's core or transversal, else None."""
    pants = model.pants_name(name)
    if pants == window.core:
        return Curve.coord({window.core: (0, 1)})
    if model.path(name) == model.path(window.transversal):
        return Curve.coord({window.core: (_scale(window), 0)})
    return None


def single_window(model: SurfaceModel, curve: Curve) -> Optional[Window]:
    """The window of a one-entry Coord curve, when its pants curve has one."""
    if curve.kind != "coords" or len(curve.coords) != 1:
        return None
    return model.window_of(curve.coords[0][0])


# ── Oracles ───────────────────────────────────────────────────────────────

def slope_oracle(p: int, q: int, r: int, s: int) -> int:
    """Crossings of the closed geodesics of slopes (p,q) and (r,s) on R²/Z²."""
    det = -p * s + r * q
    if det == 0:
        return 0
    sign = 1 if det > 0 else -1
    bound = abs(det) * _DENOM
    ox, oy = _OFFSET
    reach = abs(p) + abs(q) + abs(r) + abs(s) + 1
    count = 0
    for a in range(-reach, reach + 1):
        x = a * _DENOM + ox
        for b in range(-reach, reach + 1):
            y = b * _DENOM + oy
            # parameters of the crossing along each geodesic, scaled by det·_DENOM
            t = sign * (-s * x + r * y)
            u = sign * (p * y - q * x)
            if 0 <= t < bound and 0 <= u < bound:
                count += 1
    return count


def annulus_routing_oracle(m: int, t: int, k: int) -> Tuple[int, int]:
    """
    Route m strands through an annulus and count signed passes over a
    reference arc: first the t slot moves encoding the current twist, then
    k full turns of m slot moves each.
    """
    if m == 0:
        return 0, t
    slots = list(range(m))
    crossings = 0

    def shift(direction: int):
        nonlocal crossings
        for i, s in enumerate(slots):
            nxt = s + direction
            if nxt == m:
                crossings += 1
                nxt = 0
            elif nxt < 0:
                crossings -= 1
                nxt = m - 1
            slots[i] = nxt

    step = 1 if t >= 0 else -1
    for _ in range(abs(t)):
        shift(step)
    step = 1 if k >= 0 else -1
    for _ in range(abs(k) * m):
        shift(step)
    return m, crossings


def primitive(p: int, q: int) -> bool:
    return gcd(p, q) == 1
