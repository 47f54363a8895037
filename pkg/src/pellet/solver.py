"""Inside-out computation of the positive roots r < R of phi.

At a point ``xb`` with ``phi(xb) <= 0`` phi is dominated by the tangent
trinomial ``f(x) = alpha x^n - beta x^k + gamma``; the roots of ``f`` lie in
``[r, R]`` and become the next iterates. The roots of ``f`` are in turn
found from the dominating surrogate

    h(x) = alpha delta / (eps - x^k) - beta x^k + gamma,

whose zeros solve a quadratic in ``x^k``. Every iterate of either loop is a
valid bound (an upper bound on r or a lower bound on R), so the process can
be cut short at any point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import kernels
from .detection import DEFAULT_TOL
from .errors import ConvergenceError, InvalidInputError, InvalidStartError, PelletError
from .poly import PelletInstance, eval_phi, phi_scale

# relative slack (against the sum of term magnitudes) for "phi <= 0" checks at
# points that are roots up to rounding
ROUND_SLACK = 1e-11
MAX_OUTER = 100
MAX_INNER = 100
# outer steps longer than this fraction of x count as far from the root
_FAR = 0.05

UPPER = "upper"
LOWER = "lower"


@dataclass(frozen=True)
class Trinomial:
    alpha: float
    beta: float
    gamma: float
    n: int
    k: int
    x_fit: float = math.nan

    def value_deriv(self, x: float) -> tuple[float, float]:
        xk = x**self.k
        xn = x**self.n
        value = self.alpha * xn - self.beta * xk + self.gamma
        deriv = (self.n * self.alpha * xn - self.k * self.beta * xk) / x if x > 0 else 0.0
        return value, deriv

    def __call__(self, x: float) -> float:
        return self.value_deriv(x)[0]

    def scale(self, x: float) -> float:
        return self.alpha * x**self.n + self.beta * x**self.k + self.gamma


@dataclass(frozen=True)
class Surrogate:
    delta: float
    epsilon: float
    parent: Trinomial
    x_bar: float

    @property
    def pole(self) -> float:
        return self.epsilon ** (1.0 / self.parent.k)

    def __call__(self, x: float) -> float:
        """Value of h; +inf at or beyond the pole."""
        t = self.parent
        n, k, xb = t.n, t.k, self.x_bar
        # normalized so that delta (which overflows first) is never needed
        u = (x / xb) ** k
        e = (n + k) / n
        if u >= e:
            return math.inf
        xbk = xb**k
        return t.alpha * xb**n * (k / n) / (e - u) - t.beta * xbk * u + t.gamma


@dataclass(frozen=True)
class AnnulusResult:
    k: int
    r: float
    R: float
    iterates_r: tuple
    iterates_R: tuple
    inner_counts_r: tuple
    inner_counts_R: tuple
    converged: bool
    zero_count: int
    x_start: float = field(default=math.nan)

    @property
    def outer_iterations(self) -> tuple[int, int]:
        return len(self.inner_counts_r), len(self.inner_counts_R)

    def to_json(self, trace: bool = False) -> dict:
        out = {
            "k": self.k,
            "r": self.r,
            "R": self.R,
            "zero_count": self.zero_count,
            "converged": self.converged,
            "outer_iterations_r": len(self.inner_counts_r),
            "outer_iterations_R": len(self.inner_counts_R),
            "inner_counts_r": list(self.inner_counts_r),
            "inner_counts_R": list(self.inner_counts_R),
        }
        if trace:
            out["iterates_r"] = list(self.iterates_r)
            out["iterates_R"] = list(self.iterates_R)
        return out


def fit_trinomial(inst: PelletInstance, x_bar: float, slack: float = ROUND_SLACK) -> Trinomial:
    """Tangent trinomial majorant of phi at ``x_bar`` (which must satisfy phi <= 0)."""
    x = float(x_bar)
    if not x > 0:
        raise InvalidInputError("x_bar must be positive")
    phi, _ = eval_phi(inst, x)
    if phi > slack * phi_scale(inst, x):
        raise InvalidStartError(f"phi({x!r}) = {phi!r} > 0: x_bar is outside [r, R]")
    a, b, g = kernels.trinomial_terms(inst.eta, inst.k, x)
    if not b > 0:
        raise InvalidStartError(f"trinomial fit at {x!r} has beta <= 0")
    return Trinomial(a / x**inst.n, b / x**inst.k, g, inst.n, inst.k, x)


def fit_surrogate(tri: Trinomial, x_bar: float, slack: float = ROUND_SLACK) -> Surrogate:
    x = float(x_bar)
    if not x > 0:
        raise InvalidInputError("x_bar must be positive")
    if tri(x) > slack * tri.scale(x):
        raise InvalidStartError(f"f({x!r}) > 0: x_bar is outside the roots of the trinomial")
    n, k = tri.n, tri.k
    try:
        delta = k / n * x ** (k + n)
    except OverflowError:
        delta = math.inf  # only used for display; the roots avoid it
    return Surrogate(delta=delta, epsilon=(n + k) / n * x**k, parent=tri, x_bar=x)


def surrogate_roots(sur: Surrogate, slack: float = ROUND_SLACK) -> tuple[float, float]:
    """The two zeros ``s1 <= s2`` of h below its pole.

    The quadratic is solved in ``t = x^k / x_bar^k`` so that no power of
    ``x_bar`` beyond ``n - k`` is formed.
    """
    t = sur.parent
    n, k, xb = t.n, t.k, sur.x_bar
    xk = xb**k
    e = (n + k) / n
    d = k / n
    big_a = t.alpha * xb ** (n - k)
    g = t.gamma / xk
    b = e * t.beta + g
    c = big_a * d + e * g
    disc = b * b - 4.0 * t.beta * c
    if disc < 0:
        if disc < -slack * b * b:
            raise PelletError("surrogate quadratic has complex roots: invalid fit point")
        disc = 0.0
    t_large = (b + math.sqrt(disc)) / (2.0 * t.beta)
    t_small = c / (t.beta * t_large)
    if not t_large < e:
        # the x^n term can vanish in rounding, pushing s2 onto the pole
        if t_large > e * (1.0 + slack):
            raise PelletError("surrogate root beyond the pole: invalid fit point")
        t_large = math.nextafter(e, 0.0)
    return xb * t_small ** (1.0 / k), xb * t_large ** (1.0 / k)


def _chord_step(tri: Trinomial, x: float, out: float, upper: bool) -> tuple[float, float]:
    """Secant step in ``y = x^k`` between the inside point ``x`` and an outside
    point ``out`` (where f > 0), after a Newton update of ``out``.

    f is convex in y, so the chord lies above it: the chord root never
    passes the root of f that lies between ``x`` and ``out``, and Newton from
    ``out`` never crosses it either.
    """
    n, k = tri.n, tri.k
    p = n / k
    yo = out**k
    fo = tri(out)
    slope = tri.alpha * p * yo ** (p - 1.0) - tri.beta if yo > 0 else -tri.beta
    if slope != 0.0:
        yn = yo - fo / slope
        if yn > 0.0:
            on = yn ** (1.0 / k)
            fn = tri(on)
            if fn > 0.0 and ((x < on < out) if upper else (out < on < x)):
                out, yo, fo = on, yn, fn
    y = x**k
    fx = tri(x)
    if not (fx <= 0.0 < fo):
        return x, out
    yc = y + (-fx / (fo - fx)) * (yo - y)
    xc = yc ** (1.0 / k) if yc > 0.0 else 0.0
    # f(out) carries rounding noise; recheck that the chord root is inside
    if not ((x <= xc <= out) if upper else (out <= xc <= x)) or tri(xc) > ROUND_SLACK * tri.scale(xc):
        return x, out
    return xc, out


def solve_trinomial_root(
    tri: Trinomial,
    x_start: float,
    side: str,
    tol: float = DEFAULT_TOL,
    max_iter: int = MAX_INNER,
    accelerate: bool = True,
) -> tuple[float, int]:
    """Root ``r2`` (side="upper") or ``r1`` (side="lower") of ``tri`` by
    surrogate steps from ``x_start``; returns ``(root, iterations)``.

    With ``accelerate`` each step is the further of the surrogate root and a
    chord step (see ``_chord_step``). Both land inside ``[r1, r2]``, so the
    iterates keep their bound property; the chord matters only far from the
    root, where the surrogate step is capped by the pole of h.
    """
    if side not in (UPPER, LOWER):
        raise InvalidInputError(f"side must be {UPPER!r} or {LOWER!r}")
    upper = side == UPPER
    n, k = tri.n, tri.k
    x = float(x_start)
    out = 0.0
    if upper:
        # f(out) = gamma > 0 in exact arithmetic; step outward until the
        # evaluated sign agrees
        out = (tri.beta / tri.alpha) ** (1.0 / (n - k))
        push = 1e-14
        while not tri(out) > 0.0 and push < 1.0:
            out *= 1.0 + push
            push *= 4.0
    for it in range(1, max_iter + 1):
        s1, s2 = surrogate_roots(fit_surrogate(tri, x))
        x_new = s2 if upper else s1
        if accelerate:
            xc, out = _chord_step(tri, x, out, upper)
            x_new = max(x_new, xc) if upper else min(x_new, xc)
        if (x_new <= x) if upper else (x_new >= x):
            return x, it
        step = abs(x_new - x)
        x = x_new
        if step <= tol * max(1.0, x):
            return x, it
    raise ConvergenceError(f"trinomial {side} root: no convergence in {max_iter} iterations", iterations=max_iter)


def _inside(inst: PelletInstance, x: float) -> bool:
    """phi(x) < 0 beyond rounding, i.e. r < x < R."""
    if not 0 < x < math.inf:
        return False
    phi, _ = eval_phi(inst, x)
    return phi < -ROUND_SLACK * phi_scale(inst, x)


def _side_loop(inst, x_star, side, tol, max_outer, max_inner):
    upper = side == UPPER
    x = x_star
    iterates = [x]
    counts = []
    outer_cap = 1 if inst.is_trinomial else max_outer
    stretch = 2.0
    for _ in range(outer_cap):
        tri = fit_trinomial(inst, x)
        x_new, inner = solve_trinomial_root(tri, x, side, tol, max_inner)
        counts.append(inner)
        if (x_new <= x) if upper else (x_new >= x):
            return x, iterates, counts
        step = abs(x_new - x)
        if step > _FAR * x and not inst.is_trinomial:
            # far from the root the majorant is a poor model and steps are
            # short; a longer step is kept only when phi certifies it is
            # still between the roots
            x_try = x + stretch * (x_new - x)
            if _inside(inst, x_try):
                x_new, step = x_try, abs(x_try - x)
                stretch *= 2.0
            else:
                stretch = 2.0
        x = x_new
        iterates.append(x)
        if step <= tol * max(1.0, x):
            return x, iterates, counts
    if inst.is_trinomial:
        # f = phi, so the inner solve already produced the root
        return x, iterates, counts
    raise ConvergenceError(f"{side} root of phi: no convergence in {max_outer} outer iterations", iterations=max_outer)


def _quadratic_annulus(inst: PelletInstance, x_star: float) -> AnnulusResult:
    # phi = x^2 - eta_1 x + eta_0
    e0, e1 = float(inst.eta[0]), float(inst.eta[1])
    disc = e1 * e1 - 4.0 * e0
    if disc <= 0:
        raise InvalidStartError("quadratic phi has no two distinct positive roots")
    R = 0.5 * (e1 + math.sqrt(disc))
    r = e0 / R
    return AnnulusResult(
        k=1,
        r=r,
        R=R,
        iterates_r=(x_star, r),
        iterates_R=(x_star, R),
        inner_counts_r=(0,),
        inner_counts_R=(0,),
        converged=True,
        zero_count=1,
        x_start=x_star,
    )


def pellet_annulus(
    inst: PelletInstance,
    x_star: float,
    tol: float = DEFAULT_TOL,
    max_outer: int = MAX_OUTER,
    max_inner: int = MAX_INNER,
) -> AnnulusResult:
    """Compute ``r`` and ``R`` starting from ``x_star`` with ``phi(x_star) < 0``."""
    x_star = float(x_star)
    if not x_star > 0:
        raise InvalidStartError("x_star must be positive")
    phi, _ = eval_phi(inst, x_star)
    if not phi < 0:
        raise InvalidStartError(f"phi(x_star) = {phi!r} is not negative")
    if inst.n == 2:
        return _quadratic_annulus(inst, x_star)
    R, it_R, c_R = _side_loop(inst, x_star, UPPER, tol, max_outer, max_inner)
    r, it_r, c_r = _side_loop(inst, x_star, LOWER, tol, max_outer, max_inner)
    return AnnulusResult(
        k=inst.k,
        r=r,
        R=R,
        iterates_r=tuple(it_r),
        iterates_R=tuple(it_R),
        inner_counts_r=tuple(c_r),
        inner_counts_R=tuple(c_R),
        converged=r < R,
        zero_count=inst.k,
        x_start=x_star,
    )
