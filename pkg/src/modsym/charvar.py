"""Representations of <a, b | a^2 = b^3 = 1> into the isometry group,
built from character coordinates; trace identities; the tr = -1 surface;
Fuchsian classification and reducibility.

A representation sends ``a`` to the inversion fixing a point ``x`` and
``b`` to the rotation of angle 2 pi / 3 about the first axis.  The
character is determined by the coordinates (s, t, theta): ``s`` and ``t``
are the fiber and base exponent parameters of ``x`` in the cylindrical
chart (gauge-fixed to r = 0, beta = 0, alpha = theta / 2), and theta
lives in [0, pi).

Word matrices are evaluated in extended precision from closed-form
generator matrices (no runtime inversion), so the trace identities hold
to ~1e-10 absolute even where the entries reach 1e10.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParityError, PreconditionError
from .factored import FIsometry, FPoint, fcompose
from .flats import ParallelCoords, coords_from_point
from .modgroup import F2Word, ModWord, normalize, parity_abelianization
from .symspace import Isometry, Point, compose, inversion_at, rotation

BABA = normalize("baba")
ABAB = normalize("aBaB")  # (baba)^{-1}
B2ABA = normalize("Baba")
WORD_B = normalize("b")
WORD_ABA = normalize("aba")

TYPE_I = "typeI"
TYPE_II = "typeII"
BOTH_FIXED_POINT = "both"
NON_FUCHSIAN = "non-fuchsian"


@dataclass(frozen=True)
class Coordinates:
    """Character coordinates (s, t, theta) with s, t >= 0, theta in [0, pi)."""

    s: float
    t: float
    theta: float

    def __post_init__(self):
        if self.s < 0.0 or self.t < 0.0:
            raise ValueError("s and t must be nonnegative")
        object.__setattr__(self, "theta", float(self.theta) % float(np.pi))


def _halfangle_blocks(s, t, alpha, dtype):
    """Closed-form pieces of x = S W S: S = exp(t p1) diagonal and
    W = exp(2 s R_alpha f1 R_{-alpha}) by the rank-two power identity."""
    s, t, alpha = dtype(s), dtype(t), dtype(alpha)
    one = dtype(1.0)
    S = np.diag([one, np.exp(t / 2), np.exp(-t / 2)])
    Si = np.diag([one, np.exp(-t / 2), np.exp(t / 2)])
    wt = np.zeros((3, 3), dtype=dtype)
    wt[0, 1] = wt[1, 0] = np.cos(alpha)
    wt[0, 2] = wt[2, 0] = np.sin(alpha)
    wt2 = wt @ wt
    eye = np.eye(3, dtype=dtype)

    def expw(factor):
        return eye + np.sinh(factor * s) * wt + (np.cosh(factor * s) - one) * wt2

    return S, Si, expw


class Representation:
    """a -> inversion at x, b -> rotation by 2 pi / 3.

    The fixed point is kept in factored form so that orbit computations
    remain meaningful at any coordinate scale; the explicit ``x`` Point
    (and the inversion ``rho_a``) are available whenever the eigenvalue
    range of ``x`` fits in double precision.
    """

    def __init__(self, coords: Coordinates | None, fx: FPoint,
                 letter_a: FIsometry):
        self.coords = coords
        self.fx = fx
        rot_mat = rotation(2.0 * np.pi / 3.0)
        self.rot = Isometry(rot_mat, reversing=False)
        self._letters = {
            "a": letter_a,
            "b": FIsometry.from_pair(rot_mat, rot_mat.T, False),
            "B": FIsometry.from_pair(rot_mat.T, rot_mat, False),
        }
        self._f2_gens: dict[int, FIsometry] | None = None
        self._x: Point | None = None
        self._rho_a: Isometry | None = None

    @property
    def x(self) -> Point:
        if self._x is None:
            self._x = self.fx.to_point()
        return self._x

    @property
    def rho_a(self) -> Isometry:
        if self._rho_a is None:
            self._rho_a = inversion_at(self.x)
        return self._rho_a

    def letter(self, syllable: str) -> FIsometry:
        return self._letters[syllable]

    def f2_generators(self) -> dict[int, FIsometry]:
        """Factored isometries of the four free generators of the
        index-six subgroup."""
        if self._f2_gens is None:
            from .modgroup import G1, G1_INV, G2, G2_INV, _F2_SUBSTITUTION

            gens = {}
            for k in (G1, G1_INV, G2, G2_INV):
                g = FIsometry.identity()
                for syll in _F2_SUBSTITUTION[k]:
                    g = fcompose(g, self._letters[syll])
                gens[k] = g
            self._f2_gens = gens
        return self._f2_gens

    def validate(self, tol: float = 1e-10) -> bool:
        """Relator check: rho(a)^2 = rho(b)^3 = identity."""
        a2 = compose(self.rho_a, self.rho_a)
        b3 = compose(self.rot, compose(self.rot, self.rot))
        return a2.is_identity(tol) and b3.is_identity(tol)


def rep_from_coords(c: Coordinates) -> Representation:
    """Build the gauge-fixed representation: r = 0, beta = 0,
    alpha = theta / 2, so that 2 alpha - beta = theta."""
    alpha = c.theta / 2.0
    S, Si, expw = _halfangle_blocks(c.s, c.t, alpha, np.float64)
    fx = FPoint.from_factor(S @ expw(1.0), expw(-1.0) @ Si)
    x_mat = S @ expw(2.0) @ S
    x_inv = Si @ expw(-2.0) @ Si
    letter_a = FIsometry.from_pair(x_mat, x_inv, True)
    return Representation(c, fx, letter_a)


def rep_from_point(x: Point) -> Representation:
    """Representation with inversion center at an explicit point."""
    fx = FPoint.from_point(x)
    letter_a = FIsometry.from_pair(x.mat, x.inv(), True)
    return Representation(None, fx, letter_a)


def coords_from_rep(rep: Representation) -> Coordinates:
    """Extract (s, t, theta = 2 alpha - beta mod pi) from the fixed point.

    Requires the gauge-fixed rotation (which every Representation built
    here carries) and a fixed point within double-precision range.
    """
    if not np.allclose(rep.rot.mat, rotation(2.0 * np.pi / 3.0), atol=1e-12):
        raise ValueError("representation is not gauge fixed")
    pc: ParallelCoords = coords_from_point(rep.x)
    theta = (2.0 * pc.alpha - pc.beta) % np.pi
    if pc.s <= 1e-12 or pc.t <= 1e-12:
        theta = 0.0
    return Coordinates(s=pc.s, t=pc.t, theta=theta)


def evaluate(rep: Representation, w: ModWord) -> Isometry:
    """Homomorphic extension to normal-form words, as an Isometry."""
    out = Isometry.identity()
    for syll in w.syllables:
        if syll == "a":
            out = compose(out, rep.rho_a)
        elif syll == "b":
            out = compose(out, rep.rot)
        else:
            out = compose(out, compose(rep.rot, rep.rot))
    return out


def word_fisometry(rep: Representation, w: ModWord) -> FIsometry:
    """Same element as :func:`evaluate`, with maintained inverse matrix."""
    out = FIsometry.identity()
    for syll in w.syllables:
        out = fcompose(out, rep.letter(syll))
    return out


def f2_fisometry(rep: Representation, w: F2Word) -> FIsometry:
    gens = rep.f2_generators()
    out = FIsometry.identity()
    for k in w.letters:
        out = fcompose(out, gens[k])
    return out


def _generators_ld(rep: Representation):
    """Extended-precision generator matrices (x, x^{-1}, R, R^2), all in
    closed form: no matrix is inverted at runtime."""
    ld = np.longdouble
    if rep.coords is not None:
        c = rep.coords
        S, Si, expw = _halfangle_blocks(c.s, c.t, c.theta / 2.0, ld)
        x = S @ expw(2.0) @ S
        xinv = Si @ expw(-2.0) @ Si
    else:
        x = rep.x.mat.astype(ld)
        xinv = rep.x.inv().astype(ld)
    r = rotation(2.0 * np.pi / 3.0, dtype=ld)
    return x, xinv, r, r.T.copy()


def matrix_of(rep: Representation, w) -> np.ndarray:
    """Matrix of an even word (an element of the index-two subgroup).

    The word is folded left to right; a pending orientation reversal
    replaces each incoming generator by its contragredient, which is
    closed-form for all generators.  Returned in extended precision.

    Raises ParityError on words with odd inversion count.
    """
    if isinstance(w, str):
        w = normalize(w)
    if parity_abelianization(w)[0] != 0:
        raise ParityError(f"word {w} is orientation reversing; no matrix in the group")
    x, xinv, r, r2 = _generators_ld(rep)
    table = {"a": (x, xinv), "b": (r, r), "B": (r2, r2)}
    out = np.eye(3, dtype=np.longdouble)
    reversed_state = False
    for syll in w.syllables:
        plain, starred = table[syll]
        out = out @ (starred if reversed_state else plain)
        if syll == "a":
            reversed_state = not reversed_state
    return out


def trace_of_word(rep: Representation, w) -> float:
    return float(np.trace(matrix_of(rep, w)))


def trace_baba_closed_form(c: Coordinates | None = None, s=None, t=None, theta=None):
    """Closed-form trace of the peripheral element baba:

        -(3/2) cosh(2s) cosh(2t) + (9/4) cosh^2(2s) - 3/4
            - 3 sin^2(theta) sinh^4(s) sinh^2(t)

    Evaluated in extended precision (the terms cancel heavily at large
    s, t).  Accepts a Coordinates or the three scalars.
    """
    if c is not None:
        s, t, theta = c.s, c.t, c.theta
    ld = np.longdouble
    s, t, theta = ld(s), ld(t), ld(theta)
    return (
        -ld(1.5) * np.cosh(2 * s) * np.cosh(2 * t)
        + ld(2.25) * np.cosh(2 * s) ** 2
        - ld(0.75)
        - 3 * np.sin(theta) ** 2 * np.sinh(s) ** 4 * np.sinh(t) ** 2
    )


def schwartz_t(s, theta):
    """The unique t >= 0 with trace(baba) = -1 at given (s, theta):

        cosh(2t) = (9 cosh^2(2s) + 1 + 6 sin^2(theta) sinh^4(s))
                   / (6 (cosh(2s) + sin^2(theta) sinh^4(s)))

    Returns an extended-precision scalar so the defining identity holds
    to ~1e-14 when fed back into the closed form.
    """
    ld = np.longdouble
    s, theta = ld(s), ld(theta)
    q = np.sin(theta) ** 2 * np.sinh(s) ** 4
    rhs = (9 * np.cosh(2 * s) ** 2 + 1 + 6 * q) / (6 * (np.cosh(2 * s) + q))
    if rhs < 1:
        raise DomainError(f"cosh(2t) = {float(rhs)} < 1; surface equation has no solution")
    return np.arccosh(rhs) / 2


@dataclass(frozen=True)
class TraceReport:
    word: ModWord
    numeric_trace: float
    closed_form: float | None = None
    residual: float | None = None

    def __post_init__(self):
        if self.closed_form is not None:
            object.__setattr__(
                self, "residual", abs(self.numeric_trace - self.closed_form)
            )


def trace_symmetry_check(rep: Representation) -> TraceReport:
    """tr(rho(baba)) versus tr(rho(baba)^{-1}); the two agree for every
    representation in this family."""
    tr = trace_of_word(rep, BABA)
    tr_inv = trace_of_word(rep, ABAB)
    return TraceReport(word=BABA, numeric_trace=tr, closed_form=tr_inv)


def fuchsian_classify(c: Coordinates, tol: float = 1e-9) -> str:
    """s = 0 detects type I, t = 0 type II, both the global fixed point."""
    s_zero = c.s <= tol
    t_zero = c.t <= tol
    if s_zero and t_zero:
        return BOTH_FIXED_POINT
    if s_zero:
        return TYPE_I
    if t_zero:
        return TYPE_II
    return NON_FUCHSIAN


def _parallel_complex(u: np.ndarray, v: np.ndarray, tol: float) -> bool:
    cross = np.cross(u, v)
    return bool(np.linalg.norm(cross) <= tol * np.linalg.norm(u) * np.linalg.norm(v))


def _common_eigenvector(m1: np.ndarray, m2: np.ndarray, tol: float) -> bool:
    _, v1 = np.linalg.eig(m1)
    _, v2 = np.linalg.eig(m2)
    for i in range(3):
        for j in range(3):
            if _parallel_complex(v1[:, i], v2[:, j], tol):
                return True
    return False


def is_reducible(rep: Representation, tol: float = 1e-7) -> bool:
    """True when the even subgroup has an invariant line or plane.

    The even subgroup is generated by b and aba; a common complex
    eigenvector of their matrices is an invariant line, and a common
    eigenvector of the inverse transposes is an invariant plane.
    """
    mb = np.asarray(matrix_of(rep, WORD_B), dtype=float)
    maba = np.asarray(matrix_of(rep, WORD_ABA), dtype=float)
    if _common_eigenvector(mb, maba, tol):
        return True
    return _common_eigenvector(np.linalg.inv(mb).T, np.linalg.inv(maba).T, tol)


# Observed one-sided bound for tr(rho(b^2 a b a)) on the tr(baba) = -1
# surface in this determinant-one convention: |trace| >= 4, with equality
# exactly at the Fuchsian point s = 0.
B2ABA_TRACE_BOUND = 4.0
SURFACE_TOL = 1e-8


def trace_b2aba_bound_check(rep: Representation) -> TraceReport:
    """Properness check on the surface: |tr(rho(b^2 a b a))| >= 4 - 1e-6.

    Precondition: the representation lies on the tr(baba) = -1 surface
    within 1e-8.  Raises DomainError if the bound fails (it cannot, for
    surface representations).
    """
    tr_baba = trace_of_word(rep, BABA)
    if abs(tr_baba + 1.0) > SURFACE_TOL:
        raise PreconditionError(
            f"representation is off the surface: tr(baba) = {tr_baba!r}"
        )
    tr = trace_of_word(rep, B2ABA)
    if abs(tr) < B2ABA_TRACE_BOUND - 1e-6:
        raise DomainError(f"surface trace bound violated: tr(b2aba) = {tr!r}")
    return TraceReport(word=B2ABA, numeric_trace=tr)


def char_poly_coeffs(m: np.ndarray) -> np.ndarray:
    """Coefficients (1, c2, c1, c0) of det(xI - m) for a 3x3 matrix.
    Dtype preserving, so extended-precision inputs keep their accuracy."""
    m = np.asarray(m)
    tr = np.trace(m)
    e2 = 0.5 * (tr**2 - np.trace(m @ m))
    det = (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )
    return np.array([m.dtype.type(1), -tr, e2, -det])
