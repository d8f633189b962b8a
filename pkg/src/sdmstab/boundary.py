"""Stability region of the quasi-static integrator magnitude ``a = |I|``.

For a design with feedback-difference coefficients ``b`` of order ``n``, the
characteristic polynomial ``F(z; a) = a*(z-1)**n + D(z)`` is stable exactly
when all roots stay inside the unit circle.  Stability flips only where a
root crosses the circle: either at ``z = -1`` (the closed-form lower bound)
or at an interior angle, located by eliminating ``x = cos(phi)`` between the
real and imaginary unit-circle profiles through a remainder chain carried
symbolically in ``a``.  Two numeric oracles (a direct crossing-parameter
scan and eigenvalue bisection) cross-check every boundary value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .polynomial import Poly, all_roots, cheb_expand, chebyshev_t, chebyshev_u, poly_rem
from .transfer import DCoeffs, MAX_ORDER, char_poly, d_coeffs
from .winding import count_inside_e1, count_inside_eig

__all__ = [
    "DegenerateBoundaryError",
    "StabilityQuery",
    "ZeroPointCandidate",
    "StabilityInterval",
    "StabilityReport",
    "i_min",
    "zero_point_candidates",
    "i_max_order3",
    "t2_order5",
    "crossing_value",
    "crossing_param",
    "classify_intervals",
    "bisect_boundary",
    "report_to_dict",
]


class DegenerateBoundaryError(ValueError):
    """The boundary equation degenerates to a continuum.

    Happens when the terminal remainder vanishes identically in ``a`` (for
    example reciprocal-symmetric designs, which pin a root pair to the unit
    circle for a whole range of ``a``); there is no isolated candidate list.
    """


@dataclass(frozen=True)
class StabilityQuery:
    """Inputs for a stability question: coefficients, order, optional probe."""

    b: tuple[float, ...]
    n: int
    a_probe: float | None = None

    def __post_init__(self):
        _check_design(self.b, self.n)
        if self.a_probe is not None and self.a_probe < 0.0:
            raise ValueError("a_probe must be nonnegative")


@dataclass(frozen=True)
class ZeroPointCandidate:
    """Value of ``a`` at which the contour image may pass through the origin.

    ``x`` is the associated ``cos(phi)``; ``valid`` requires ``|x| < 1``, a
    non-degenerate chain, and a confirmed root of ``F(z; a)`` on the circle.
    """

    a: float
    x: float
    valid: bool
    source: str  # remainder_chain | closed_form_3 | crossing_param


@dataclass(frozen=True)
class StabilityInterval:
    lo: float
    hi: float
    stable: bool
    witness_a: float
    witness_count: int | None


@dataclass(frozen=True)
class StabilityReport:
    sum_b: float
    a_min: float
    candidates: tuple[ZeroPointCandidate, ...]
    intervals: tuple[StabilityInterval, ...]


def _check_design(b: Sequence[float], n: int) -> tuple[float, ...]:
    b = tuple(float(v) for v in b)
    if not 1 <= n <= MAX_ORDER:
        raise ValueError(f"order must be in [1, {MAX_ORDER}], got {n}")
    if len(b) != n:
        raise ValueError(f"len(b) must equal order {n}, got {len(b)}")
    return b


def i_min(b: Sequence[float], n: int) -> float:
    """Lower stability bound: the ``a`` at which a root crosses at ``z = -1``.

    Evaluates ``-sum((-1)**k * b_k) / 2**n`` with an exactly-rounded sum, so
    the value is as accurate as the inputs allow; ``F(-1; a_min) = 0``.
    """
    b = _check_design(b, n)
    alt = math.fsum((-1.0) ** k * b[k - 1] for k in range(1, n + 1))
    return -alt / 2.0**n


# --- symbolic-in-a remainder chain -------------------------------------------
#
# Chain elements are polynomials in x whose coefficients are rational
# functions of a, carried as numerator polynomials over one shared
# denominator.  Remainder steps use fraction-free elimination: each step
# multiplies the running remainder by the divisor's leading numerator, so
# the shared denominator is a product of those leading coefficients.  It is
# kept in factored form: expanding it invites catastrophic cancellation when
# evaluated, while the factors themselves stay well conditioned, and a
# near-zero factor is precisely the degree-collapse (vanishing divisor lead)
# the candidate filter must detect.

_ZERO = np.zeros(0)


def _ap_trim(c: np.ndarray) -> np.ndarray:
    nz = np.nonzero(c)[0]
    return c[: nz[-1] + 1] if nz.size else _ZERO


def _ap_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.size == 0 or b.size == 0:
        return _ZERO
    return np.convolve(a, b)


def _ap_sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    m = max(a.size, b.size)
    out = np.zeros(m)
    out[: a.size] += a
    out[: b.size] -= b
    return out


def _ap_eval(c: np.ndarray, a: float) -> float:
    acc = 0.0
    for v in c[::-1]:
        acc = acc * a + v
    return float(acc)


def _ap_eval_abs(c: np.ndarray, a: float) -> float:
    """Sum of term magnitudes: the natural scale of the Horner evaluation."""
    acc = 0.0
    for v in np.abs(c)[::-1]:
        acc = acc * abs(a) + v
    return float(acc)


class _SymPoly:
    """Polynomial in x with shared-denominator rational-in-a coefficients."""

    __slots__ = ("nums", "den_factors", "den_scalar")

    def __init__(
        self,
        nums: list[np.ndarray],
        den_factors: list[np.ndarray] | None = None,
        den_scalar: float = 1.0,
    ):
        self.nums = nums
        self.den_factors = den_factors or []
        self.den_scalar = den_scalar
        self._cleanup()

    def _cleanup(self) -> None:
        # Normalize scale and strip structural zeros (exact cancellations of
        # the elimination, ~1e-16 relative after rounding).  Interior entries
        # are never rounded away: truncation noise gets amplified by later
        # fraction-free steps far beyond its original size.
        scale = max((abs(c).max() if c.size else 0.0 for c in self.nums), default=0.0)
        if scale == 0.0:
            self.nums = []
            return
        cleaned = []
        for c in self.nums:
            c = c / scale
            keep = c.size
            while keep > 0 and abs(c[keep - 1]) <= 3e-14:
                keep -= 1
            cleaned.append(c[:keep])
        while cleaned and (
            cleaned[-1].size == 0 or np.abs(cleaned[-1]).max() <= 1e-10
        ):
            cleaned.pop()
        self.nums = cleaned
        self.den_scalar /= scale
        factors = []
        for f in self.den_factors:
            s = abs(f).max()
            factors.append(f / s)
            self.den_scalar *= s
        self.den_factors = factors

    @property
    def xdeg(self) -> int:
        return len(self.nums) - 1

    @property
    def is_zero(self) -> bool:
        return not self.nums

    def den_at(self, a: float) -> float:
        acc = self.den_scalar
        for f in self.den_factors:
            acc *= _ap_eval(f, a)
        return acc

    def degenerate_at(self, a: float, rtol: float = 1e-8) -> bool:
        """True when some divisor leading coefficient vanishes at this a."""
        return any(
            abs(_ap_eval(f, a)) <= rtol * _ap_eval_abs(f, a) for f in self.den_factors
        )

    def den_condition(self, a: float) -> float:
        """Cancellation ratio of the denominator evaluation (1 is perfect)."""
        cond = 1.0
        for f in self.den_factors:
            v = abs(_ap_eval(f, a))
            cond *= _ap_eval_abs(f, a) / v if v > 0.0 else math.inf
        return cond

    def coeff_at(self, j: int, a: float) -> float:
        return _ap_eval(self.nums[j], a) / self.den_at(a)


def _sym_rem(a_el: _SymPoly, b_el: _SymPoly) -> _SymPoly:
    """Remainder of ``a_el`` by ``b_el`` (the divisor's denominator cancels)."""
    db = b_el.xdeg
    lead = b_el.nums[-1]
    r = [c.copy() for c in a_el.nums]
    steps = 0
    while len(r) - 1 >= db:
        top = r[-1]
        if top.size == 0 or not np.any(top):
            r.pop()
            continue
        shift = len(r) - 1 - db
        new = []
        for j in range(len(r) - 1):
            term = _ap_mul(lead, r[j])
            k = j - shift
            if 0 <= k < db:
                term = _ap_sub(term, _ap_mul(top, b_el.nums[k]))
            new.append(term)
        r = new
        steps += 1
        while r and (r[-1].size == 0 or not np.any(r[-1])):
            r.pop()
    factors = a_el.den_factors + [lead] * steps
    return _SymPoly(r, factors, a_el.den_scalar)


def _sym_profiles(b: tuple[float, ...], n: int) -> tuple[_SymPoly, _SymPoly]:
    """Real and (sine-reduced) imaginary unit-circle profiles, symbolic in a.

    The k-th image coefficient is ``d_k(a) = b_k + C(n,k) * (-1)**k * a``, a
    degree-1 polynomial in ``a``.
    """
    d_lin = [
        np.array([b[k - 1], math.comb(n, k) * (-1.0) ** k]) for k in range(1, n + 1)
    ]
    r0 = [np.zeros(2) for _ in range(n + 1)]
    r0[0][1] = 1.0  # the offset term a itself
    r1 = [np.zeros(2) for _ in range(max(n, 1))]
    for k in range(1, n + 1):
        for j, c in enumerate(chebyshev_t(k).coeffs):
            r0[j] = r0[j] + c * d_lin[k - 1]
        for j, c in enumerate(chebyshev_u(k - 1).coeffs):
            r1[j] = r1[j] + c * d_lin[k - 1]
    return _SymPoly(r0), _SymPoly(r1)


def _on_circle_distance(b: tuple[float, ...], n: int, a: float) -> float:
    roots = all_roots(char_poly(b, n, a))
    return min(abs(abs(z) - 1.0) for z in roots)


def _numeric_terminal(b: tuple[float, ...], n: int, a: float) -> float:
    """Terminal remainder of the plain numeric chain at one ``a``.

    Pointwise this is well conditioned even where the carried terminal
    polynomial's coefficient spread is not, so it serves to polish roots.
    """
    d = d_coeffs(b, n, a).d
    cur, prev = cheb_expand(d, kind="sine"), cheb_expand(d, a, "cosine")
    while True:
        if cur.is_zero:
            return 0.0
        if cur.degree == 0:
            return cur.coeffs[0]
        _, rem, _ = poly_rem(prev, cur)
        prev, cur = cur, rem


def _polish_terminal_root(b: tuple[float, ...], n: int, a: float) -> float:
    """Secant refinement of a terminal-equation root; keeps a on failure."""
    h = 1e-7 * max(1.0, abs(a))
    a0, a1 = a, a + h
    t0, t1 = _numeric_terminal(b, n, a0), _numeric_terminal(b, n, a1)
    best, tbest = (a0, abs(t0)) if abs(t0) <= abs(t1) else (a1, abs(t1))
    for _ in range(8):
        if t1 == t0:
            break
        a2 = a1 - t1 * (a1 - a0) / (t1 - t0)
        if not math.isfinite(a2) or abs(a2 - a) > 1e-3 * max(1.0, abs(a)) or a2 < 0.0:
            break
        t2 = _numeric_terminal(b, n, a2)
        a0, t0, a1, t1 = a1, t1, a2, t2
        if abs(t2) < tbest:
            best, tbest = a2, abs(t2)
        else:
            break
    return best


# A candidate is confirmed when the characteristic polynomial really does
# have a root this close to the unit circle at that a.
ON_CIRCLE_TOL = 1e-7


def zero_point_candidates(b: Sequence[float], n: int) -> list[ZeroPointCandidate]:
    """Values of ``a`` where the contour image can pass through the origin.

    Runs the remainder chain on the symbolic profiles, equates the terminal
    degree-0 remainder to zero, and solves for real ``a >= 0``.  Each
    solution recovers ``x`` from the last linear chain element; candidates
    failing ``|x| < 1`` or the on-circle confirmation are kept but flagged
    invalid.  Solutions sitting where a chain leading coefficient vanishes
    (the degree-collapse case) are artifacts of the elimination and are
    dropped.  Raises :class:`DegenerateBoundaryError` when the terminal
    remainder vanishes identically (a continuum, not isolated candidates).
    """
    b = _check_design(b, n)
    if n == 1:
        # A first-order image traces a circle: no self-intersections exist.
        return []
    r0, r1 = _sym_profiles(b, n)
    chain = [r0, r1]
    while chain[-1].xdeg >= 1:
        nxt = _sym_rem(chain[-2], chain[-1])
        chain.append(nxt)
        if nxt.is_zero:
            break
    terminal = chain[-1]
    if terminal.is_zero:
        raise DegenerateBoundaryError(
            "terminal remainder vanishes identically: the design pins roots "
            "to the unit circle over a continuum of a values"
        )
    eq = Poly(terminal.nums[0])
    # Strip a negligible leading tail so spurious huge roots do not appear.
    cs = list(eq.coeffs)
    top = max(abs(c) for c in cs)
    while len(cs) > 1 and abs(cs[-1]) < 1e-10 * top:
        cs.pop()
    eq = Poly(cs)
    if eq.degree < 1:
        return []

    linear = chain[-2] if chain[-2].xdeg == 1 else None

    sols: list[float] = []
    for z in all_roots(eq):
        if abs(z.imag) > 1e-8 * (1.0 + abs(z.real)):
            continue
        a = z.real
        if a < 0.0:
            continue
        if not terminal.degenerate_at(a):
            # The carried terminal's coefficient spread limits root accuracy;
            # the pointwise numeric chain does not.
            a = _polish_terminal_root(b, n, a)
        if a < 0.0 or any(abs(a - s) <= 1e-9 * max(1.0, abs(s)) for s in sols):
            continue
        sols.append(a)
    sols.sort()

    out: list[ZeroPointCandidate] = []
    for a in sols:
        if terminal.degenerate_at(a):
            continue  # leading-coefficient collapse, not a boundary event
        if linear is None:
            out.append(ZeroPointCandidate(a=a, x=math.nan, valid=False, source="remainder_chain"))
            continue
        # The shared denominator cancels in the root of the linear element.
        c1 = _ap_eval(linear.nums[1], a)
        c0 = _ap_eval(linear.nums[0], a)
        if c1 == 0.0:
            out.append(ZeroPointCandidate(a=a, x=math.nan, valid=False, source="remainder_chain"))
            continue
        x = -c0 / c1
        valid = (
            math.isfinite(x)
            and abs(x) < 1.0 - 1e-9
            and _on_circle_distance(b, n, a) <= ON_CIRCLE_TOL
        )
        if not valid and terminal.degenerate_at(a, rtol=1e-4):
            # a noise-displaced copy of a degree-collapse root, not a
            # rejected boundary candidate: not worth listing
            continue
        out.append(ZeroPointCandidate(a=a, x=x, valid=valid, source="remainder_chain"))
    return out


def i_max_order3(b: Sequence[float]) -> tuple[float, bool]:
    """Closed-form order-3 boundary ``(b1*b3 - b3**2) / (b1 + b2 + b3)``.

    The flag reports whether the recovered crossing location
    ``x = -(b2 + 2a) / (2*(b3 - a))`` is a genuine interior self-intersection
    (``|x| < 1`` and ``b3 != a``).  Raises on a zero denominator.
    """
    b = _check_design(b, 3)
    s = math.fsum(b)
    if s == 0.0:
        raise ValueError("b1 + b2 + b3 must be nonzero")
    a = (b[0] * b[2] - b[2] ** 2) / s
    if b[2] == a:
        return a, False
    x = -(b[1] + 2.0 * a) / (2.0 * (b[2] - a))
    return a, abs(x) < 1.0


def t2_order5(d: DCoeffs) -> Poly:
    """Closed-form degree-3 factor of the order-5 terminal remainder.

    For order 5 the first remainder of the cosine profile by the sine
    profile equals ``a - T2(x)`` with
    ``T2(x) = 8*d5*x**3 + 4*d4*x**2 + (2*d3 - 4*d5)*x + (d2 - d4)``.
    """
    if d.n != 5:
        raise ValueError(f"order-5 coefficients required, got order {d.n}")
    d1, d2, d3, d4, d5 = d.d
    return Poly([d2 - d4, 2.0 * d3 - 4.0 * d5, 4.0 * d4, 8.0 * d5])


def crossing_value(b: Sequence[float], n: int, phi: float) -> complex:
    """The ``a`` that would place a root at angle ``phi`` on the unit circle.

    Solves ``F(e^{i phi}; a) = 0`` for ``a``: the value is a root-crossing
    parameter only where it comes out real and positive.  At ``phi = pi``
    it reduces exactly to the ``i_min`` formula.
    """
    b = _check_design(b, n)
    z = complex(math.cos(phi), math.sin(phi))
    num = 0.0 + 0.0j
    for coeff in b:  # b is already ordered descending in z powers
        num = num * z + coeff
    return -num / (z - 1.0) ** n


def crossing_param(
    b: Sequence[float], n: int, phi_grid: int = 2048
) -> list[ZeroPointCandidate]:
    """Oracle boundary scan: real positive crossings of ``a(phi)`` on (0, pi).

    Scans the imaginary part of the crossing parameter for sign changes,
    bisects each bracket to 1e-12 in ``phi``, and emits ``(a, x=cos(phi))``
    for every real crossing with ``a > 0``.
    """
    b = _check_design(b, n)
    if phi_grid < 2:
        raise ValueError("phi_grid must be >= 2")
    phis = np.linspace(0.0, math.pi, phi_grid + 2)[1:-1]
    z = np.exp(1j * phis)
    vals = -np.polyval(np.asarray(b, dtype=float), z) / (z - 1.0) ** n
    ims = vals.imag
    signs = np.where(ims >= 0.0, 1.0, -1.0)
    # Rounding noise on a structurally-real parameter (reciprocal designs)
    # must not read as crossings: demand the bracket rise above noise level.
    mags = np.abs(vals)
    out: list[ZeroPointCandidate] = []
    for i in np.nonzero(signs[:-1] * signs[1:] < 0.0)[0]:
        if max(abs(ims[i]), abs(ims[i + 1])) <= 1e-9 * max(mags[i], mags[i + 1]):
            continue
        lo, hi = float(phis[i]), float(phis[i + 1])
        flo = float(ims[i])
        while hi - lo > 1e-12:
            mid = 0.5 * (lo + hi)
            fm = crossing_value(b, n, mid).imag
            if fm == 0.0:
                lo = hi = mid
                break
            if (fm < 0.0) == (flo < 0.0):
                lo, flo = mid, fm
            else:
                hi = mid
        phi = 0.5 * (lo + hi)
        a = crossing_value(b, n, phi).real
        if a <= 0.0:
            continue
        if any(abs(a - c.a) <= 1e-9 * max(1.0, abs(c.a)) for c in out):
            continue
        valid = _on_circle_distance(b, n, a) <= ON_CIRCLE_TOL
        out.append(
            ZeroPointCandidate(a=a, x=math.cos(phi), valid=valid, source="crossing_param")
        )
    out.sort(key=lambda c: c.a)
    return out


# Events closer than this (relative) are merged; probes refuse to sit closer
# than this to an event.
EVENT_TOL = 1e-9


def _merge_events(values: list[float]) -> list[float]:
    values = sorted(values)
    out: list[float] = []
    for v in values:
        if out and abs(v - out[-1]) <= EVENT_TOL * max(1.0, abs(v)):
            continue
        out.append(v)
    return out


def _probe(b: tuple[float, ...], n: int, a: float) -> tuple[bool, int | None]:
    """Stability verdict at one ``a``: criterion count with eigen fallback."""
    res = count_inside_e1(char_poly(b, n, a))
    if res.marginal:
        eig = count_inside_eig(char_poly(b, n, a))
        return False, eig.inside  # a marginal probe never certifies stability
    return res.inside == n, res.inside


def classify_intervals(b: Sequence[float], n: int) -> StabilityReport:
    """Partition ``a > 0`` into stable/unstable intervals with witnesses.

    Events are the lower bound (when positive) plus every valid zero-point
    candidate; each open interval between consecutive events is classified
    at a witness probe.  The linear-model point ``a = 1`` is preferred as
    the witness whenever it lies inside an interval.  If ``sum(b) <= 0``
    the turning point at ``z = 1`` is never positive and every interval is
    unstable without further search.
    """
    b = _check_design(b, n)
    sum_b = math.fsum(b)
    a_min = i_min(b, n)

    if sum_b <= 0.0:
        _, count = _probe(b, n, 1.0)
        interval = StabilityInterval(
            lo=0.0, hi=math.inf, stable=False, witness_a=1.0, witness_count=count
        )
        return StabilityReport(
            sum_b=sum_b, a_min=a_min, candidates=(), intervals=(interval,)
        )

    try:
        candidates = zero_point_candidates(b, n)
    except DegenerateBoundaryError:
        # Continuum designs have no isolated chain candidates; fall back to
        # the direct crossing scan for whatever isolated events remain.
        candidates = crossing_param(b, n)

    events = [c.a for c in candidates if c.valid and c.a > EVENT_TOL]
    if a_min > EVENT_TOL:
        events.append(a_min)
    events = _merge_events(events)

    edges = [0.0] + events + [math.inf]
    intervals: list[StabilityInterval] = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if math.isinf(hi):
            witness = 10.0 * events[-1] + 1.0 if events else 1.0
        else:
            witness = 0.5 * (lo + hi)
        if lo < 1.0 < hi:
            dist = min(1.0 - lo, (hi - 1.0) if not math.isinf(hi) else math.inf)
            if dist > EVENT_TOL:
                witness = 1.0
        stable, count = _probe(b, n, witness)
        intervals.append(
            StabilityInterval(
                lo=lo, hi=hi, stable=stable, witness_a=witness, witness_count=count
            )
        )
    return StabilityReport(
        sum_b=sum_b,
        a_min=a_min,
        candidates=tuple(candidates),
        intervals=tuple(intervals),
    )


def bisect_boundary(b: Sequence[float], n: int, lo: float, hi: float) -> float:
    """Numeric flip-point search between two ``a`` values of different verdict.

    The verdict at each end comes from explicit root moduli; the bracket is
    bisected to 1e-10.  Raises ``ValueError`` when both ends agree.
    """
    b = _check_design(b, n)
    if not lo < hi:
        raise ValueError("need lo < hi")

    def stable(a: float) -> bool:
        return max(abs(z) for z in all_roots(char_poly(b, n, a))) < 1.0

    s_lo, s_hi = stable(lo), stable(hi)
    if s_lo == s_hi:
        raise ValueError("stability verdicts at lo and hi must differ")
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if stable(mid) == s_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def report_to_dict(report: StabilityReport) -> dict:
    """JSON-ready form of a stability report."""
    return {
        "sum_b": report.sum_b,
        "a_min": report.a_min,
        "candidates": [
            {"a": c.a, "x": c.x, "valid": c.valid, "source": c.source}
            for c in report.candidates
        ],
        "intervals": [
            {
                "lo": iv.lo,
                "hi": iv.hi,
                "stable": iv.stable,
                "witness_a": iv.witness_a,
                "witness_count": iv.witness_count,
            }
            for iv in report.intervals
        ],
    }
