"""Constructors for the h / join / twisted-join / degree-one families.

All families are returned fully expanded. The factor list of the two
variable base polynomial and the analytic location of its projective zeros
are kept separately (``h_factors``, ``h_chart_roots``) so that numerical
root counts can be checked against something that never touches the
expansion.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum

from .mixed import MixedPolynomial

GENERIC_TOL = 1e-12
DEFAULT_ALPHA = 2 + 0j
DEFAULT_BETA = 3 + 0j


class GenericityError(ValueError):
    pass


class FamilyKind(str, Enum):
    BASE_H = "base"
    JOIN_C = "join"
    TWISTED_S = "twisted"
    DEGREE_ONE_F = "degree-one"
    REMARK11_H = "remark11"

    @property
    def n_vars(self) -> int:
        return 2 if self in (FamilyKind.BASE_H, FamilyKind.REMARK11_H) else 3


@dataclass(frozen=True)
class FamilyParams:
    q: int = 1
    r: int = 1
    j: int = 0
    alpha: complex = DEFAULT_ALPHA
    beta: complex = DEFAULT_BETA

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        if self.q < 1:
            raise ValueError(f"polar degree q must be positive, got {self.q}")
        if not self.r >= self.j >= 0:
            raise ValueError(f"need r >= j >= 0, got r={self.r}, j={self.j}")

    def to_dict(self, kind: FamilyKind | None = None) -> dict:
        out = {} if kind is None else {"kind": kind.value}
        out.update({
            "q": self.q, "r": self.r, "j": self.j,
            "alpha": [self.alpha.real, self.alpha.imag],
            "beta": [self.beta.real, self.beta.imag],
        })
        return out


def params_from_dict(data: dict) -> tuple[FamilyKind, FamilyParams]:
    """Parse a family description such as {"kind": "twisted", "q": 1, "r": 2, "j": 0, ...}."""
    kind = FamilyKind(data.get("kind", "base"))
    kw = {k: int(data[k]) for k in ("q", "r", "j") if k in data}
    for k in ("alpha", "beta"):
        if k in data:
            v = data[k]
            kw[k] = complex(*v) if isinstance(v, (list, tuple)) else complex(v)
    if kind is FamilyKind.DEGREE_ONE_F:
        kw.update(q=1, j=0)
    return kind, FamilyParams(**kw)


def validate_generic(alpha: complex, beta: complex, tol: float = GENERIC_TOL) -> bool:
    a, b = abs(alpha), abs(beta)
    return (
        a > tol and b > tol
        and abs(a - 1) > tol and abs(b - 1) > tol
        and abs(a - b) > tol
    )


def require_generic(p: FamilyParams) -> None:
    # alpha, beta only enter as constants when r == j
    if p.r > p.j and not validate_generic(p.alpha, p.beta):
        raise GenericityError(
            f"alpha={p.alpha}, beta={p.beta} not generic: need |alpha|,|beta| not in {{0,1}} and |alpha| != |beta|"
        )


def h_factors(p: FamilyParams) -> tuple[MixedPolynomial, MixedPolynomial, MixedPolynomial]:
    """The three factors of h_{q,r,j} in (w1, w2)."""
    q, r, j = p.q, p.r, p.j
    w1, w2 = MixedPolynomial.var(1, 2), MixedPolynomial.var(2, 2)
    wb1, wb2 = MixedPolynomial.conj_var(1, 2), MixedPolynomial.conj_var(2, 2)
    first = w1 ** (q + j) * wb1 ** j + w2 ** (q + j) * wb2 ** j
    k = r - j
    second = w1 ** k - p.alpha * w2 ** k
    third = wb1 ** k - p.beta * wb2 ** k
    return first, second, third


def make_h(p: FamilyParams) -> MixedPolynomial:
    require_generic(p)
    a, b, c = h_factors(p)
    return a * b * c


def h_chart_roots(p: FamilyParams) -> list[complex]:
    """Zeros of h_{q,r,j}(w, 1), read off the factors.

    First factor: |w|^{2j} w^q = -1, i.e. |w| = 1 and w^q = -1.
    Second: w^{r-j} = alpha. Third: conj(w)^{r-j} = beta.
    """
    roots = [cmath.exp(1j * math.pi * (2 * m + 1) / p.q) for m in range(p.q)]
    k = p.r - p.j
    if k:
        roots += _nth_roots(p.alpha, k)
        roots += [w.conjugate() for w in _nth_roots(p.beta, k)]
    return roots


def _nth_roots(c: complex, k: int) -> list[complex]:
    rad, arg = abs(c) ** (1.0 / k), cmath.phase(c)
    return [rad * cmath.exp(1j * (arg + 2 * math.pi * m) / k) for m in range(k)]


def join(f: MixedPolynomial, g: MixedPolynomial) -> MixedPolynomial:
    """f(z) + g(w) in disjoint variables (z, w)."""
    n = f.n_vars + g.n_vars
    return f.embed(n) + g.embed(n, offset=f.n_vars)


def twisted_join(f: MixedPolynomial, a: int, b: int) -> MixedPolynomial:
    """f(z) + conj(z_n) w^a conj(w)^b in n + 1 variables."""
    if not a > b >= 0:
        raise ValueError(f"twisted join needs a > b >= 0, got a={a}, b={b}")
    n = f.n_vars + 1
    nu = [0] * n
    mu = [0] * n
    nu[-1], mu[-1] = a, b
    mu[-2] = 1
    return f.embed(n) + MixedPolynomial.monomial(nu, mu)


def make_join(p: FamilyParams) -> MixedPolynomial:
    tail = MixedPolynomial.monomial([p.q + p.r], [p.r])
    return join(make_h(p), tail)


def make_twisted(p: FamilyParams) -> MixedPolynomial:
    if p.r < 1:
        raise ValueError("twisted family needs r >= 1 (twist exponent r - 1)")
    return twisted_join(make_h(p), p.q + p.r, p.r - 1)


def make_degree_one(r: int, alpha: complex = DEFAULT_ALPHA, beta: complex = DEFAULT_BETA) -> MixedPolynomial:
    if r < 1:
        raise ValueError("degree-one family needs r >= 1")
    if not validate_generic(alpha, beta):
        raise GenericityError(f"alpha={alpha}, beta={beta} not generic")
    return make_twisted(FamilyParams(1, r, 0, alpha, beta))


def make_remark11(r: int, beta: complex = DEFAULT_BETA) -> MixedPolynomial:
    """(z1^{r+1} - z2^{r+1})(conj z1 - beta conj z2)."""
    if r < 1:
        raise ValueError("remark-11 family needs r >= 1")
    require_generic_beta(beta)
    w1, w2 = MixedPolynomial.var(1, 2), MixedPolynomial.var(2, 2)
    wb1, wb2 = MixedPolynomial.conj_var(1, 2), MixedPolynomial.conj_var(2, 2)
    return (w1 ** (r + 1) - w2 ** (r + 1)) * (wb1 - complex(beta) * wb2)


def require_generic_beta(beta: complex) -> None:
    b = abs(beta)
    if b <= GENERIC_TOL or abs(b - 1) <= GENERIC_TOL:
        raise GenericityError(f"|beta| must avoid 0 and 1, got beta={beta}")


def remark11_chart_roots(r: int, beta: complex = DEFAULT_BETA) -> list[complex]:
    return [cmath.exp(2j * math.pi * m / (r + 1)) for m in range(r + 1)] + [complex(beta).conjugate()]


def build(kind: FamilyKind, p: FamilyParams) -> MixedPolynomial:
    if kind is FamilyKind.BASE_H:
        return make_h(p)
    if kind is FamilyKind.JOIN_C:
        return make_join(p)
    if kind is FamilyKind.TWISTED_S:
        return make_twisted(p)
    if kind is FamilyKind.DEGREE_ONE_F:
        return make_degree_one(p.r, p.alpha, p.beta)
    if kind is FamilyKind.REMARK11_H:
        return make_remark11(p.r, p.beta)
    raise ValueError(f"unknown family {kind!r}")


def chart_roots(kind: FamilyKind, p: FamilyParams) -> list[complex] | None:
    """Analytic zeros on the w2 = 1 chart for the two-variable families."""
    if kind is FamilyKind.BASE_H:
        return h_chart_roots(p)
    if kind is FamilyKind.REMARK11_H:
        return remark11_chart_roots(p.r, p.beta)
    return None


def degrees(kind: FamilyKind, p: FamilyParams) -> tuple[int, int]:
    """(radial degree, polar degree) of a family member."""
    if kind is FamilyKind.REMARK11_H:
        return p.r + 2, p.r
    if kind is FamilyKind.DEGREE_ONE_F:
        return 1 + 2 * p.r, 1
    return p.q + 2 * p.r, p.q


def normalize_params(kind: FamilyKind, p: FamilyParams) -> FamilyParams:
    if kind is FamilyKind.DEGREE_ONE_F and (p.q, p.j) != (1, 0):
        return replace(p, q=1, j=0)
    return p
