"""Arbitrary-precision evaluation of the straightness diagnostics.

At large base coordinates the straightness deficit pi - zeta-angle decays
like e^{-c t} while the orbit data spans e^{+c' t} scales; once the
deficit falls under the double-precision noise floor the fast factored
path can only report noise.  This module recomputes the local midpoint
triples with mpmath at a precision chosen from the coordinate scale, so
monotone trends in the deficit remain measurable.  It also serves as an
independent oracle for the fast path at moderate coordinates.
"""

from __future__ import annotations

from mpmath import mp

from .modgroup import F2Word, f2_inverse, f2_mul, f2_to_mod


def _rotation(theta):
    c, s = mp.cos(theta), mp.sin(theta)
    return mp.matrix([[1, 0, 0], [0, c, -s], [0, s, c]])


def _x_pair(s, t, theta):
    """Closed-form x = S W S and its inverse for the gauge-fixed point."""
    s, t = mp.mpf(s), mp.mpf(t)
    alpha = mp.mpf(theta) / 2
    S = mp.diag([1, mp.e ** (t / 2), mp.e ** (-t / 2)])
    Si = mp.diag([1, mp.e ** (-t / 2), mp.e ** (t / 2)])
    wt = mp.matrix(3, 3)
    wt[0, 1] = wt[1, 0] = mp.cos(alpha)
    wt[0, 2] = wt[2, 0] = mp.sin(alpha)
    wt2 = wt * wt
    eye = mp.eye(3)

    def expw(factor):
        return eye + mp.sinh(factor * s) * wt + (mp.cosh(factor * s) - 1) * wt2

    return S * expw(2) * S, Si * expw(-2) * Si


def _word_matrix(w, x, xinv, rot, rot2):
    """Left fold with the contragredient substitution rule; returns the
    matrix of an even word."""
    table = {"a": (x, xinv), "b": (rot, rot), "B": (rot2, rot2)}
    out = mp.eye(3)
    reversed_state = False
    for syll in w.syllables:
        plain, starred = table[syll]
        out = out * (starred if reversed_state else plain)
        if syll == "a":
            reversed_state = not reversed_state
    if reversed_state:
        raise ValueError("odd word has no matrix")
    return out


def _sym_eig_desc(m):
    e, q = mp.eigsy(m)
    pairs = sorted(((e[i], i) for i in range(3)), key=lambda p: -p[0])
    vals = [p[0] for p in pairs]
    cols = mp.matrix(3, 3)
    for j, (_, i) in enumerate(pairs):
        for r in range(3):
            cols[r, j] = q[r, i]
    return vals, cols


def _spd_pow(m, exponent):
    vals, q = _sym_eig_desc(m)
    d = mp.diag([v**exponent for v in vals])
    return q * d * q.T


def _midpoint(p, q):
    pis = _spd_pow(p, mp.mpf(-0.5))
    ps = _spd_pow(p, mp.mpf(0.5))
    return ps * _spd_pow(pis * q * pis, mp.mpf(0.5)) * ps


def _rel_frame(p, q):
    """Descending log-eigenvalues and frame of log(p^{-1/2} q p^{-1/2})."""
    pis = _spd_pow(p, mp.mpf(-0.5))
    vals, u = _sym_eig_desc(pis * q * pis)
    lam = [mp.log(v) for v in vals]
    mean = sum(lam) / 3
    return [v - mean for v in lam], u


def _zeta_dir(p, q):
    _, u = _rel_frame(p, q)
    d = mp.matrix(3, 3)
    for i in range(3):
        for j in range(3):
            d[i, j] = u[i, 0] * u[j, 0] - u[i, 2] * u[j, 2]
    return d


def _angle_between(d1, d2):
    c = sum(d1[i, j] * d2[i, j] for i in range(3) for j in range(3)) / 2
    c = max(min(c, mp.mpf(1)), mp.mpf(-1))
    return mp.acos(c)


def _chamber_angle(lam):
    e1 = (lam[0] - lam[2]) / mp.sqrt(2)
    e2 = (lam[0] - 2 * lam[1] + lam[2]) / mp.sqrt(6)
    return mp.atan2(e2, e1) + mp.pi / 6


def default_dps(s: float, t: float) -> int:
    """Working precision scaled to the orbit displacement at (s, t)."""
    return int(6.0 * (s + t)) + 80


def straightness_stats(s, t, theta, window: list[F2Word], dps: int | None = None):
    """Deficits pi - zeta-angle, spacings and types of the midpoint
    sequence along the window, via local midpoint triples in mpmath.

    Returns a dict of float lists: deficits, spacings, types.
    """
    if dps is None:
        dps = default_dps(s, t)
    with mp.workdps(dps):
        x, xinv = _x_pair(s, t, theta)
        rot = _rotation(2 * mp.pi / 3)
        rot2 = rot.T

        def rho(w: F2Word):
            return _word_matrix(f2_to_mod(w), x, xinv, rot, rot2)

        steps = [None]
        for w_prev, w_next in zip(window, window[1:]):
            steps.append(rho(f2_mul(f2_inverse(w_prev), w_next)))
        mids = [None]
        for k in range(1, len(window)):
            mids.append(_midpoint(x, steps[k] * x * steps[k].T))

        n_mid = len(window) - 1
        spacings = []
        types = []
        for n in range(n_mid - 1):
            p = mids[n + 1]
            q = steps[n + 1] * mids[n + 2] * steps[n + 1].T
            lam, _ = _rel_frame(p, q)
            spacings.append(float(mp.sqrt(sum(v**2 for v in lam))))
            types.append(float(_chamber_angle(lam)))
        deficits = []
        for n in range(1, n_mid - 1):
            inv_step = steps[n] ** -1
            prev = inv_step * mids[n] * inv_step.T
            center = mids[n + 1]
            nxt = steps[n + 1] * mids[n + 2] * steps[n + 1].T
            ang = _angle_between(_zeta_dir(center, prev), _zeta_dir(center, nxt))
            deficits.append(float(mp.pi - ang))
    return {"deficits": deficits, "spacings": spacings, "types": types}


def min_zeta_deficit(s, t, theta, window: list[F2Word], dps: int | None = None) -> float:
    """max over interior vertices of pi - zeta-angle (the straightness
    deficit of the worst vertex)."""
    return max(straightness_stats(s, t, theta, window, dps)["deficits"])


def triangle_angle(s, t, theta, dps: int | None = None) -> float:
    """Vertex angle at x of the orbit triangle (x, bx, b^2 x)."""
    if dps is None:
        dps = default_dps(s, t)
    with mp.workdps(dps):
        x, _ = _x_pair(s, t, theta)
        rot = _rotation(2 * mp.pi / 3)
        y = rot * x * rot.T
        z = rot * y * rot.T
        lam_y, uy = _rel_frame(x, y)
        lam_z, uz = _rel_frame(x, z)
        vy = uy * mp.diag(lam_y) * uy.T
        vz = uz * mp.diag(lam_z) * uz.T
        ny = mp.sqrt(sum(vy[i, j] ** 2 for i in range(3) for j in range(3)))
        nz = mp.sqrt(sum(vz[i, j] ** 2 for i in range(3) for j in range(3)))
        c = sum(vy[i, j] * vz[i, j] for i in range(3) for j in range(3)) / (ny * nz)
        c = max(min(c, mp.mpf(1)), mp.mpf(-1))
        return float(mp.acos(c))
