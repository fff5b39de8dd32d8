"""Empirical Anosov diagnostics: orbit triangles, midpoint sequences along
discrete geodesics of the rank-two free subgroup, straightness and spacing
reports, singular-value-gap growth scans, peripheral growth classification,
and distance-to-flat checks.

Everything here is a deterministic function of (coordinates, window or
seed, budget).  Orbit geometry runs on factored points, so the reports
stay meaningful at coordinate scales far beyond what explicit SPD
matrices can hold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .charvar import (
    ABAB,
    BABA,
    Coordinates,
    Representation,
    f2_fisometry,
    matrix_of,
    rep_from_coords,
)
from .errors import (
    DegenerateTriangleError,
    DomainError,
    PreconditionError,
    RegularityError,
)
from .factored import (
    FIsometry,
    FPoint,
    chart_point,
    fact,
    fangle,
    fcompose,
    fdistance,
    fflag_of_sector,
    fflag_of_sector_opposite,
    fflat_project,
    finverse,
    fmidpoint,
    fzeta_angle,
    seg_type,
)
from .flats import Flat, ModelInterval, chamber_angle, flat_from_flags
from .modgroup import (
    F2Word,
    G1,
    G1_INV,
    G2,
    G2_INV,
    F2_LETTER_NAMES,
    random_f2_geodesic,
)

_LETTERS = (G1, G1_INV, G2, G2_INV)
# allowed continuations (ascending) after each last letter
_ALLOWED = np.array([[k for k in _LETTERS if k != p ^ 1] for p in _LETTERS])


# -- orbit triangle ----------------------------------------------------------


@dataclass(frozen=True)
class TriangleReport:
    """Angles and side lengths of the orbit triangle (x, bx, b^2 x)."""

    sides: tuple[float, float, float]     # (xy, yz, zx)
    angles: tuple[float, float, float]    # at x, y, z

    @property
    def max_angle(self) -> float:
        return max(self.angles)


def triangle_report(rep: Representation) -> TriangleReport:
    x = rep.fx
    b = rep.letter("b")
    y = fact(b, x)
    z = fact(b, y)
    d_xy = fdistance(x, y)
    d_yz = fdistance(y, z)
    d_zx = fdistance(z, x)
    if min(d_xy, d_yz, d_zx) < 1e-8:
        raise DegenerateTriangleError(
            "orbit triangle collapses: the rotation fixes the inversion center"
        )
    return TriangleReport(
        sides=(d_xy, d_yz, d_zx),
        angles=(fangle(x, y, z), fangle(y, z, x), fangle(z, x, y)),
    )


# -- midpoint sequences ------------------------------------------------------


@dataclass(frozen=True)
class MidpointSequence:
    """Orbit points x_n = rho(g_n) x and midpoints m_n = mid(x_n, x_{n+1}).

    The midpoints are stored twice: globally (``midpoints``) and in local
    form (``local_mids[k]`` is mid(x, rho(step_k) x), so that
    m_n = rho(g_n) local_mids[n + 1]).  Everything measured between
    nearby midpoints is computed in the chart of the common orbit prefix:
    a product mat @ matinv of one large word never appears, which keeps
    the small relative eigenvalues meaningful at any scale.
    """

    words: tuple[F2Word, ...]
    orbit: tuple[FPoint, ...]
    midpoints: tuple[FPoint, ...]
    steps: tuple[FIsometry, ...]        # steps[k] = rho(g_{k-1}^{-1} g_k)
    local_mids: tuple[FPoint, ...]      # local_mids[k] = mid(x, steps[k] x)
    prefixes: tuple[FIsometry, ...]     # prefixes[n] = rho(g_n)
    equidistance_defect: float

    def neighbor_triple(self, n: int):
        """(m_{n-1}, m_n, m_{n+1}) translated to the chart of g_n: the
        center becomes local_mids[n+1], the neighbors involve only one
        step isometry each."""
        prev = fact(finverse(self.steps[n]), self.local_mids[n])
        center = self.local_mids[n + 1]
        nxt = fact(self.steps[n + 1], self.local_mids[n + 2])
        return prev, center, nxt

    def segment_pair(self, n: int):
        """(m_n, m_{n+1}) in the chart of g_n."""
        return self.local_mids[n + 1], fact(self.steps[n + 1], self.local_mids[n + 2])


def midpoint_sequence(rep: Representation, window: Sequence[F2Word]) -> MidpointSequence:
    words = tuple(window)
    if len(words) < 3:
        raise ValueError("geodesic window must contain at least 3 words")
    from .modgroup import f2_inverse, f2_mul

    steps = [FIsometry.identity()]
    for w_prev, w_next in zip(words, words[1:]):
        steps.append(f2_fisometry(rep, f2_mul(f2_inverse(w_prev), w_next)))
    prefixes = [f2_fisometry(rep, w) for w in words]
    local_mids = [rep.fx]
    for k in range(1, len(words)):
        local_mids.append(fmidpoint(rep.fx, fact(steps[k], rep.fx)))
    orbit = tuple(fact(g, rep.fx) for g in prefixes)
    midpoints = tuple(
        fact(prefixes[n], local_mids[n + 1]) for n in range(len(words) - 1)
    )
    defect = 0.0
    for k in range(1, len(words)):
        dp = fdistance(local_mids[k], rep.fx)
        dq = fdistance(local_mids[k], fact(steps[k], rep.fx))
        defect = max(defect, abs(dp - dq) / max(1.0, dp))
    return MidpointSequence(
        words=words,
        orbit=orbit,
        midpoints=midpoints,
        steps=tuple(steps),
        local_mids=tuple(local_mids),
        prefixes=tuple(prefixes),
        equidistance_defect=defect,
    )


@dataclass(frozen=True)
class StraightnessReport:
    """Quantitative discrete-geodesic data of a midpoint sequence."""

    min_zeta_angle: float
    min_spacing: float
    type_min: float
    type_max: float
    theta_interval: ModelInterval
    all_types_within: bool
    zeta_angles: tuple[float, ...]
    spacings: tuple[float, ...]


def straightness_report(seq: MidpointSequence, theta: ModelInterval) -> StraightnessReport:
    n_mid = len(seq.midpoints)
    if n_mid < 3:
        raise ValueError("straightness needs at least 3 midpoints")
    spacings = []
    types = []
    for n in range(n_mid - 1):
        p, q = seq.segment_pair(n)
        spacings.append(fdistance(p, q))
        try:
            types.append(seg_type(p, q))
        except (RegularityError, DomainError) as exc:
            raise RegularityError(f"midpoint segment {n}: {exc}") from exc
    zeta_angles = []
    for n in range(1, n_mid - 1):
        prev, center, nxt = seq.neighbor_triple(n)
        try:
            zeta_angles.append(fzeta_angle(center, prev, nxt))
        except (RegularityError, DomainError) as exc:
            raise RegularityError(f"midpoint vertex {n}: {exc}") from exc
    return StraightnessReport(
        min_zeta_angle=min(zeta_angles),
        min_spacing=min(spacings),
        type_min=min(types),
        type_max=max(types),
        theta_interval=theta,
        all_types_within=all(theta.contains(t) for t in types),
        zeta_angles=tuple(zeta_angles),
        spacings=tuple(spacings),
    )


# -- Cartan gap scan ---------------------------------------------------------


@dataclass(frozen=True)
class GapReport:
    """Per-word singular-value gaps and the fitted linear lower bound
    gap >= c n - C (lower convex minorant of the per-length minima)."""

    words: tuple[str, ...]
    lengths: np.ndarray
    gap12: np.ndarray
    gap23: np.ndarray
    per_length_min: tuple[tuple[int, float], ...]
    slope_c: float
    intercept_C: float
    min_residual: float
    enumerated: bool
    seed: int


def _rescale_batch(mats: np.ndarray, logs: np.ndarray):
    s = np.max(np.abs(mats), axis=(1, 2))
    return mats / s[:, None, None], logs + np.log(s)


def _batch_gaps(mats, invs, lm, lmi):
    s1 = np.linalg.svd(mats, compute_uv=False)[:, 0]
    s1i = np.linalg.svd(invs, compute_uv=False)[:, 0]
    l1 = np.log(s1) + lm
    l3 = -(np.log(s1i) + lmi)
    l2 = -l1 - l3
    return l1 - l2, l2 - l3


def _lower_hull_fit(points: list[tuple[int, float]]):
    """Lower convex minorant; returns (c, C, hull) with the fitted line
    c n - C through the final hull edge."""
    pts = sorted(points)
    hull: list[tuple[float, float]] = []
    for x, y in pts:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            if (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0) <= 0.0:
                hull.pop()
            else:
                break
        hull.append((float(x), float(y)))
    if len(hull) >= 2:
        (x0, y0), (x1, y1) = hull[-2], hull[-1]
        c = (y1 - y0) / (x1 - x0)
    else:
        c = 0.0
        x1, y1 = hull[-1]
    big_c = c * x1 - y1
    return c, big_c, hull


def cartan_gap_scan(
    rep: Representation,
    max_len: int,
    sample_budget: int | None = None,
    seed: int = 0,
) -> GapReport:
    """Gap growth over reduced words of the free subgroup up to max_len.

    Enumerates exhaustively when the full count 2 (3^max_len - 1) fits in
    the budget, otherwise draws a seeded uniform sample per length.  The
    linear lower bound is fitted to the per-length minima of
    min(gap12, gap23).
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    budget = sample_budget if sample_budget is not None else 50_000
    total = 2 * (3**max_len - 1)
    enumerate_all = total <= budget

    gens = rep.f2_generators()
    gmat = np.stack([gens[k].mat * np.exp(gens[k].lm) for k in _LETTERS])
    gmatinv = np.stack([gens[k].matinv * np.exp(gens[k].lmi) for k in _LETTERS])

    words: list[str] = []
    lengths: list[np.ndarray] = []
    gap12: list[np.ndarray] = []
    gap23: list[np.ndarray] = []

    if enumerate_all:
        mats = gmat.copy()
        invs = gmatinv.copy()
        lm = np.zeros(4)
        lmi = np.zeros(4)
        last = np.array(_LETTERS)
        level_words = [F2_LETTER_NAMES[k] for k in _LETTERS]
        for n in range(1, max_len + 1):
            mats, lm = _rescale_batch(mats, lm)
            invs, lmi = _rescale_batch(invs, lmi)
            g12, g23 = _batch_gaps(mats, invs, lm, lmi)
            words.extend(level_words)
            lengths.append(np.full(len(level_words), n))
            gap12.append(g12)
            gap23.append(g23)
            if n == max_len:
                break
            child_letters = _ALLOWED[last].reshape(-1)
            level_words = [
                w + F2_LETTER_NAMES[k]
                for w, row in zip(level_words, _ALLOWED[last])
                for k in row
            ]
            mats = np.repeat(mats, 3, axis=0) @ gmat[child_letters]
            invs = gmatinv[child_letters] @ np.repeat(invs, 3, axis=0)
            lm = np.repeat(lm, 3)
            lmi = np.repeat(lmi, 3)
            last = child_letters
    else:
        from .modgroup import f2_count

        rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
        per_length = max(1, budget // max_len)
        for n in range(1, max_len + 1):
            m = min(per_length, f2_count(n))
            letters = np.empty((m, n), dtype=np.int64)
            letters[:, 0] = rng.integers(4, size=m)
            for col in range(1, n):
                pick = rng.integers(3, size=m)
                letters[:, col] = _ALLOWED[letters[:, col - 1], pick]
            mats = gmat[letters[:, 0]]
            invs = gmatinv[letters[:, 0]]
            lm = np.zeros(m)
            lmi = np.zeros(m)
            for col in range(1, n):
                mats = mats @ gmat[letters[:, col]]
                invs = gmatinv[letters[:, col]] @ invs
                mats, lm = _rescale_batch(mats, lm)
                invs, lmi = _rescale_batch(invs, lmi)
            g12, g23 = _batch_gaps(mats, invs, lm, lmi)
            words.extend("".join(F2_LETTER_NAMES[k] for k in row) for row in letters)
            lengths.append(np.full(m, n))
            gap12.append(g12)
            gap23.append(g23)

    lengths_arr = np.concatenate(lengths)
    g12_arr = np.concatenate(gap12)
    g23_arr = np.concatenate(gap23)
    min_gap = np.minimum(g12_arr, g23_arr)
    per_len = []
    for n in range(1, max_len + 1):
        sel = lengths_arr == n
        if np.any(sel):
            per_len.append((n, float(min_gap[sel].min())))
    c, big_c, _ = _lower_hull_fit(per_len)
    residual = max(0.0, min(y - (c * n - big_c) for n, y in per_len))
    return GapReport(
        words=tuple(words),
        lengths=lengths_arr,
        gap12=g12_arr,
        gap23=g23_arr,
        per_length_min=tuple(per_len),
        slope_c=float(c),
        intercept_C=float(big_c),
        min_residual=float(residual),
        enumerated=enumerate_all,
        seed=seed,
    )


def word_cartan(rep: Representation, w: F2Word) -> np.ndarray:
    """Cartan vector of one reduced word, by the forward/inverse duality
    (accurate for all three entries at any word length)."""
    from .modgroup import f2_inverse

    g = f2_fisometry(rep, w)
    gi = f2_fisometry(rep, f2_inverse(w))
    l1 = float(np.log(np.linalg.svd(g.mat, compute_uv=False)[0])) + g.lm
    l3 = -(float(np.log(np.linalg.svd(gi.mat, compute_uv=False)[0])) + gi.lm)
    return np.array([l1, -l1 - l3, l3])


# -- peripheral growth -------------------------------------------------------


@dataclass(frozen=True)
class PeripheralGrowthReport:
    """Growth of the full Cartan spread of powers of the peripheral
    element, classified as logarithmic or linear by affine least squares."""

    ns: np.ndarray
    gaps: np.ndarray
    model: str            # "log" or "linear"
    kappa: float
    rss_log: float
    rss_linear: float


def _affine_fit(x: np.ndarray, y: np.ndarray):
    a = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(a, y, rcond=None)
    rss = float(np.sum((a @ coef - y) ** 2))
    return float(coef[0]), rss


def peripheral_growth(rep: Representation, n_max: int) -> PeripheralGrowthReport:
    """Cartan spread lambda_1 - lambda_3 of rho(baba)^n for n <= n_max.

    On the tr = -1 surface the peripheral powers grow polynomially and
    the spread is ~ 2 log n + const; at hyperbolic peripherals it is
    linear in n.
    """
    if n_max < 4:
        raise PreconditionError("peripheral growth needs n_max >= 4")
    p = np.asarray(matrix_of(rep, BABA), dtype=float)
    pinv = np.asarray(matrix_of(rep, ABAB), dtype=float)
    gaps = np.empty(n_max)
    mat, inv = np.eye(3), np.eye(3)
    lm = lmi = 0.0
    for n in range(1, n_max + 1):
        mat = mat @ p
        inv = pinv @ inv
        s = float(np.max(np.abs(mat)))
        mat, lm = mat / s, lm + np.log(s)
        si = float(np.max(np.abs(inv)))
        inv, lmi = inv / si, lmi + np.log(si)
        l1 = np.log(np.linalg.svd(mat, compute_uv=False)[0]) + lm
        l3 = -(np.log(np.linalg.svd(inv, compute_uv=False)[0]) + lmi)
        gaps[n - 1] = l1 - l3
    ns = np.arange(1, n_max + 1, dtype=float)
    kappa_log, rss_log = _affine_fit(np.log(ns), gaps)
    kappa_lin, rss_lin = _affine_fit(ns, gaps)
    if rss_log <= rss_lin:
        model, kappa = "log", kappa_log
    else:
        model, kappa = "linear", kappa_lin
    return PeripheralGrowthReport(
        ns=ns, gaps=gaps, model=model, kappa=kappa,
        rss_log=rss_log, rss_linear=rss_lin,
    )


# -- local Morse flat check --------------------------------------------------


@dataclass(frozen=True)
class MorseFlatReport:
    """Distances of the midpoints to the flat spanned by the endpoint
    sector flags, and whether their projections advance monotonically."""

    max_distance: float
    distances: tuple[float, ...]
    projections: tuple[tuple[float, float], ...]
    monotone: bool
    violations: int
    flat: Flat


def morse_flat_check(
    rep: Representation,
    window: Sequence[F2Word],
    theta_prime: ModelInterval,
) -> MorseFlatReport:
    """Distance of each midpoint to the flat spanned by the window-end
    sector flags, plus a monotone-advance check of the projections.

    Pulling one global frame backwards through a long orbit word is
    numerically hopeless (the flag directions contract through the
    inverse), so the flat is re-anchored at every midpoint from forward
    and backward flag proxies; these agree with the window-end flags to
    within e^{-gap * k}, far below the reported digits.  Monotonicity is
    checked on consecutive projection steps; since the type-restricted
    Weyl sector is a convex cone, consecutive steps inside the cone imply
    the same for all forward pairs.  Raises OppositionError when flags
    fail to be in general position.
    """
    seq = midpoint_sequence(rep, window)
    n_mid = len(seq.midpoints)
    if n_mid < 2:
        raise ValueError("morse check needs at least 2 midpoints")
    # forward[n] = rho(g_n^{-1} g_{last mid}): fold of steps n+1 .. n_mid-1
    forward = [FIsometry.identity() for _ in range(n_mid)]
    for n in range(n_mid - 2, -1, -1):
        forward[n] = fcompose(seq.steps[n + 1], forward[n + 1])
    # backward[n] = rho(g_n^{-1} g_0) = steps[n]^{-1} backward[n-1]
    backward = [FIsometry.identity() for _ in range(n_mid)]
    for n in range(1, n_mid):
        backward[n] = fcompose(finverse(seq.steps[n]), backward[n - 1])

    dists = []
    proj_pairs = []
    flat0 = None
    origin = FPoint.identity()
    for n in range(n_mid):
        center = seq.local_mids[n + 1]
        # everything is measured in the factor chart of the midpoint,
        # where the center is the identity and both flag directions stay
        # O(1)-separated no matter how deep in the orbit the window sits
        fwd = back = None
        if n < n_mid - 1:
            fwd = chart_point(center, fact(forward[n], seq.local_mids[n_mid]))
        if n > 0:
            back = chart_point(center, fact(backward[n], seq.local_mids[1]))
        if fwd is not None:
            f_plus = fflag_of_sector(origin, fwd)
        else:
            f_plus = fflag_of_sector_opposite(origin, back)
        if back is not None:
            f_minus = fflag_of_sector(origin, back)
        else:
            f_minus = fflag_of_sector_opposite(origin, fwd)
        flat = flat_from_flags(f_minus, f_plus)
        if flat0 is None:
            flat0 = flat
        a, b, d = fflat_project(origin, flat)
        dists.append(d)
        if n < n_mid - 1:
            # coordinate-grade projection of the next midpoint in this
            # chart: only the chart coordinates (order ~ spacing) matter
            nxt = chart_point(center, fact(seq.steps[n + 1], seq.local_mids[n + 2]))
            a2, b2, _ = fflat_project(nxt, flat, noise_cap=1.0)
            proj_pairs.append(((a, b), (a2, b2)))

    violations = 0
    deltas = []
    for (a, b), (a2, b2) in proj_pairs:
        da, db = a2 - a, b2 - b
        dc = -da - db
        deltas.append((da, db))
        slack = 1e-9 * max(1.0, abs(da) + abs(db))
        if not (da >= db - slack and db >= dc - slack):
            violations += 1
            continue
        phi = chamber_angle(np.sort([da, db, dc])[::-1])
        if not theta_prime.contains(phi):
            violations += 1
    proj = [(0.0, 0.0)]
    for da, db in deltas:
        proj.append((proj[-1][0] + da, proj[-1][1] + db))
    return MorseFlatReport(
        max_distance=max(dists),
        distances=tuple(dists),
        projections=tuple(proj),
        monotone=violations == 0,
        violations=violations,
        flat=flat0,
    )


# -- combined verdict --------------------------------------------------------

EVIDENCE_ANOSOV = "evidence-anosov"
EVIDENCE_DEGENERATE = "evidence-degenerate"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class VerdictConfig:
    """Heuristic thresholds for the empirical verdict.  These are artifact
    policy, deliberately exposed: the combined criterion is

        slope_c >= spacing_factor * min_spacing   (words up to max_len >= 8)
        min zeta-angle >= pi - zeta_slack
        all midpoint-segment types within pi/6 +- theta_halfwidth
    """

    max_len: int = 10
    samples: int = 50_000
    window: int = 10
    peripheral_n: int = 64
    seed: int = 0
    theta_halfwidth: float = float(np.pi / 8.0)
    zeta_slack: float = 0.5
    spacing_factor: float = 0.05


@dataclass(frozen=True)
class AnosovVerdict:
    coordinates: Coordinates
    verdict: str
    stats: dict = field(default_factory=dict)


def anosov_verdict(c: Coordinates, config: VerdictConfig | None = None) -> AnosovVerdict:
    """Combine straightness, gap growth and peripheral growth into one of
    evidence-anosov / evidence-degenerate / inconclusive."""
    cfg = config or VerdictConfig()
    rep = rep_from_coords(c)
    stats: dict = {"seed": cfg.seed, "max_len": cfg.max_len, "window": cfg.window}

    peripheral = peripheral_growth(rep, cfg.peripheral_n)
    stats["peripheral_model"] = peripheral.model
    stats["peripheral_kappa"] = peripheral.kappa

    straight = None
    try:
        words = random_f2_geodesic(cfg.window, cfg.seed)
        seq = midpoint_sequence(rep, words)
        straight = straightness_report(seq, ModelInterval.symmetric(cfg.theta_halfwidth))
        stats["min_zeta_angle"] = straight.min_zeta_angle
        stats["min_spacing"] = straight.min_spacing
        stats["type_min"] = straight.type_min
        stats["type_max"] = straight.type_max
    except (RegularityError, DegenerateTriangleError, DomainError) as exc:
        stats["straightness_error"] = str(exc)

    gaps = cartan_gap_scan(rep, cfg.max_len, cfg.samples, cfg.seed)
    stats["slope_c"] = gaps.slope_c
    stats["intercept_C"] = gaps.intercept_C

    straight_ok = (
        straight is not None
        and straight.min_zeta_angle >= np.pi - cfg.zeta_slack
        and straight.all_types_within
        and straight.min_spacing > 0.0
    )
    gap_ok = (
        cfg.max_len >= 8
        and straight is not None
        and gaps.slope_c >= cfg.spacing_factor * straight.min_spacing
    )
    if straight_ok and gap_ok:
        verdict = EVIDENCE_ANOSOV
    elif peripheral.model == "log":
        verdict = EVIDENCE_DEGENERATE
    else:
        verdict = INCONCLUSIVE
    return AnosovVerdict(coordinates=c, verdict=verdict, stats=stats)
