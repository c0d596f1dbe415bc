"""Closed-form topological invariants and the genus/degree embedding planner.

Everything here is exact integer arithmetic. Divisions that would produce
a non-integer raise :class:`DivisibilityViolation` instead of rounding.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .families import FamilyKind, FamilyParams, degrees, normalize_params, require_generic, require_generic_beta


class ParameterError(ValueError):
    pass


class DivisibilityViolation(ArithmeticError):
    pass


class NegativeGenus(ArithmeticError):
    pass


def _check_qrj(q: int, r: int, j: int) -> None:
    if q < 1 or not r >= j >= 0:
        raise ParameterError(f"need q >= 1 and r >= j >= 0, got (q, r, j) = ({q}, {r}, {j})")


def _exact_div(a: int, b: int) -> int:
    if b == 0 or a % b:
        raise DivisibilityViolation(f"{b} does not divide {a}")
    return a // b


# two-variable base family

def link_count(q: int, r: int, j: int) -> int:
    _check_qrj(q, r, j)
    return q + 2 * (r - j)


def chi_H_star(q: int, r: int, j: int) -> int:
    """Euler characteristic of the Milnor fiber of h restricted to the torus."""
    return -link_count(q, r, j) * q


def chi_H(q: int, r: int, j: int) -> int:
    _check_qrj(q, r, j)
    value = -q * ((q - 2) + 2 * (r - j))
    # the two coordinate axes each meet the fiber in q points
    assert value == chi_H_star(q, r, j) + 2 * q
    return value


def chi_fiber_from_points(n_points: int, q: int) -> int:
    """chi(F) for a 2-variable strongly polar f whose zero set on P^1 has n_points points.

    F -> P^1 minus V is a q-fold cyclic cover.
    """
    return q * (2 - n_points)


# join and twisted join

def join_chi(chi_f: int, chi_k: int) -> int:
    """Euler characteristic of the fiber of f(z) + k(w): reduced characteristics multiply up to sign."""
    return 1 - (chi_f - 1) * (chi_k - 1)


def chi_join_family(q: int, r: int, j: int) -> int:
    _check_qrj(q, r, j)
    value = q * (q - 1) * (q - 2) + 2 * q * (q - 1) * (r - j) + q
    # fiber of z^{q+r} zbar^r = 1 is q points
    assert value == join_chi(chi_H(q, r, j), q)
    return value


def chi_twisted(a: int, b: int, chi_f: int, chi_fn: int) -> int:
    if not a > b >= 0:
        raise ParameterError(f"twisted join needs a > b >= 0, got a={a}, b={b}")
    return -(a - b - 1) * chi_f + (a - b) * chi_fn


def chi_twisted_closed_form(q: int, r: int, j: int) -> int:
    _check_qrj(q, r, j)
    return q * (q * q - q + 1 + 2 * (r - j))


def chi_twisted_family(q: int, r: int, j: int) -> tuple[int, int, bool]:
    """(composed, closed_form, consistent) for s_{q,r,j}.

    ``composed`` runs the twisted-join formula with a = q + r, b = r - 1,
    chi(F_f) = chi_H(q, r, j) and chi(F_{f_n}) = q (the slice z2 = 0 of the
    fiber of h is q points). The two routes agree for q = 1 or r = j only.
    """
    _check_qrj(q, r, j)
    if r < 1:
        raise ParameterError("twisted family needs r >= 1")
    composed = chi_twisted(q + r, r - 1, chi_H(q, r, j), q)
    closed = chi_twisted_closed_form(q, r, j)
    return composed, closed, composed == closed


# projective curve from the Milnor fiber

def genus_from_chi(chi_F: int, q: int) -> int:
    twice_plus_one = _exact_div(chi_F, q) - 1
    if twice_plus_one < 0:
        raise NegativeGenus(f"chi(F)={chi_F}, q={q} gives negative genus")
    return _exact_div(twice_plus_one, 2)


def chi_projective(n: int, chi_F: int, q: int) -> tuple[int, int]:
    """(chi(V), chi(P^{n-1} minus V)); chi(F) = q * chi(complement) by construction."""
    complement = _exact_div(chi_F, q)
    return n - complement, complement


def thom_bound(q: int) -> int:
    if q < 1:
        raise ParameterError("degree must be positive")
    return (q - 1) * (q - 2) // 2


plucker_genus = thom_bound


def genus_join_family(q: int, r: int, j: int) -> int:
    _check_qrj(q, r, j)
    return (q - 1) * (q - 2) // 2 + (q - 1) * (r - j)


def genus_twisted_closed_form(q: int, r: int, j: int) -> int:
    _check_qrj(q, r, j)
    return q * (q - 1) // 2 + (r - j)


@dataclass(frozen=True)
class ZetaFactorization:
    """Formal product of (1 - t^k)^e over ``factors``."""

    factors: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        merged: dict[int, int] = {}
        for k, e in self.factors:
            if k < 1:
                raise ValueError("factor exponents k must be positive")
            merged[k] = merged.get(k, 0) + e
        object.__setattr__(self, "factors", tuple(sorted((k, e) for k, e in merged.items() if e)))

    def __call__(self, t: complex) -> complex:
        out = 1.0
        for k, e in self.factors:
            out *= (1 - t ** k) ** e
        return out

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        parts = []
        for k, e in self.factors:
            base = "1-t" if k == 1 else f"1-t^{k}"
            parts.append(f"({base})^{{{e}}}")
        return "".join(parts)

    def to_list(self) -> list[list[int]]:
        return [[k, e] for k, e in self.factors]


def zeta_function(chi_F: int, q: int) -> ZetaFactorization:
    return ZetaFactorization(((q, -_exact_div(chi_F, q)),))


@dataclass(frozen=True)
class InvariantReport:
    kind: FamilyKind
    params: FamilyParams
    n_vars: int
    chi_F: int
    chi_V: int
    genus: int | None
    embedding_degree: int
    radial_degree: int
    zeta: ZetaFactorization
    link_count: int | None = None
    closed_form_chi: int | None = None
    routes_consistent: bool = True
    closed_form_genus: int | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "params": self.params.to_dict(),
            "n_vars": self.n_vars,
            "chi_F": self.chi_F,
            "chi_V": self.chi_V,
            "genus": self.genus,
            "embedding_degree": self.embedding_degree,
            "radial_degree": self.radial_degree,
            "link_count": self.link_count,
            "zeta": self.zeta.to_list(),
            "zeta_str": str(self.zeta),
            "closed_form_chi": self.closed_form_chi,
            "closed_form_genus": self.closed_form_genus,
            "routes_consistent": self.routes_consistent,
        }


def invariant_report(kind: FamilyKind, p: FamilyParams) -> InvariantReport:
    """Invariants of one family member.

    Curves (3 variables) use the composition route for chi(F); for twisted
    families the closed form is recorded next to it. Base families use the
    link count and report the finite zero set on P^1 (genus is ``None``).
    """
    kind = FamilyKind(kind)
    p = normalize_params(kind, p)
    # the formulas below assume the generic (alpha, beta) of the constructors
    if kind is FamilyKind.REMARK11_H:
        require_generic_beta(p.beta)
    else:
        require_generic(p)
    d, q = degrees(kind, p)
    closed = closed_genus = links = None
    consistent = True

    if kind is FamilyKind.BASE_H:
        links = link_count(p.q, p.r, p.j)
        chi_F = chi_H(p.q, p.r, p.j)
        consistent = chi_F == chi_fiber_from_points(links, q)
    elif kind is FamilyKind.REMARK11_H:
        if p.r < 1:
            raise ParameterError("remark-11 family needs r >= 1")
        links = p.r + 2
        chi_F = chi_fiber_from_points(links, q)
    elif kind is FamilyKind.JOIN_C:
        chi_F = join_chi(chi_H(p.q, p.r, p.j), p.q)
        closed = chi_join_family(p.q, p.r, p.j)
        closed_genus = genus_join_family(p.q, p.r, p.j)
        consistent = chi_F == closed
    else:
        chi_F, closed, consistent = chi_twisted_family(p.q, p.r, p.j)
        closed_genus = genus_twisted_closed_form(p.q, p.r, p.j)

    n = kind.n_vars
    chi_V, _ = chi_projective(n, chi_F, q)
    genus = genus_from_chi(chi_F, q) if n == 3 else None
    if kind is FamilyKind.JOIN_C:
        consistent = consistent and genus == closed_genus
    return InvariantReport(
        kind=kind, params=p, n_vars=n, chi_F=chi_F, chi_V=chi_V, genus=genus,
        embedding_degree=q, radial_degree=d, zeta=zeta_function(chi_F, q),
        link_count=links, closed_form_chi=closed, routes_consistent=consistent,
        closed_form_genus=closed_genus,
    )


class PlanStatus(str, Enum):
    TWISTED = "Twisted"
    JOIN = "Join"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class EmbeddingPlan:
    genus: int
    degree: int
    status: PlanStatus
    kind: FamilyKind | None = None
    params: FamilyParams | None = None
    notes: str = ""

    def to_dict(self) -> dict:
        out = {"status": self.status.value, "genus": self.genus, "degree": self.degree}
        if self.params is not None:
            out.update(kind=self.kind.value, q=self.params.q, r=self.params.r, j=self.params.j)
        out["notes"] = self.notes
        return out


def plan_embedding(g: int, q: int) -> EmbeddingPlan:
    """Pick a family realizing genus g in embedding degree q, if one is known.

    Twisted S_{q,r,1} covers g >= q(q-1)/2 (the degree-one family f_g when
    q = 1). Below that the join family C_{q,r,1} works when
    g - (q-1)(q-2)/2 is divisible by q - 1; anything else is left open.
    """
    if g < 0 or q < 1:
        raise ParameterError("need genus >= 0 and degree >= 1")
    tri = q * (q - 1) // 2
    thom = thom_bound(q)
    if g >= tri:
        if q == 1:
            if g == 0:
                params, kind = FamilyParams(1, 1, 1), FamilyKind.TWISTED_S
                note = "S_{1,1,1}: genus 0 in degree 1"
            else:
                params, kind = FamilyParams(1, g, 0), FamilyKind.DEGREE_ONE_F
                note = f"degree-one family f_{g}"
        else:
            r = g - tri + 1
            params, kind = FamilyParams(q, r, 1), FamilyKind.TWISTED_S
            note = f"twisted S_{{{q},{r},1}} with r = g - q(q-1)/2 + 1"
            if r > 1:
                note += "; genus only via the closed-form route (composition gives a different value)"
        return EmbeddingPlan(g, q, PlanStatus.TWISTED, kind, params, note)
    if g < thom:
        return EmbeddingPlan(g, q, PlanStatus.UNKNOWN, notes=f"below the Thom bound (q-1)(q-2)/2 = {thom}; no smooth embedding")
    excess = g - thom
    if excess % (q - 1) == 0:
        r = 1 + excess // (q - 1)
        return EmbeddingPlan(
            g, q, PlanStatus.JOIN, FamilyKind.JOIN_C, FamilyParams(q, r, 1),
            notes=f"join C_{{{q},{r},1}}: g - (q-1)(q-2)/2 divisible by q-1",
        )
    return EmbeddingPlan(
        g, q, PlanStatus.UNKNOWN,
        notes=f"(q-1)(q-2)/2 <= g < q(q-1)/2 and g - {thom} not divisible by {q - 1}: existence open",
    )


# markdown

REPORT_COLUMNS = (
    ("kind", "family"), ("q", "q"), ("r", "r"), ("j", "j"),
    ("chi_F", "χ(F)"), ("chi_V", "χ(V)"), ("genus", "g"), ("embedding_degree", "degree"),
    ("radial_degree", "radial"), ("link_count", "links"), ("zeta_str", "ζ(t)"),
    ("closed_form_chi", "closed χ"), ("routes_consistent", "consistent"),
)


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def markdown_table(reports: list[InvariantReport]) -> str:
    lines = [
        "| " + " | ".join(h for _, h in REPORT_COLUMNS) + " |",
        "|" + "|".join("---" for _ in REPORT_COLUMNS) + "|",
    ]
    for rep in reports:
        row = rep.to_dict()
        row.update(q=rep.params.q, r=rep.params.r, j=rep.params.j)
        lines.append("| " + " | ".join(_cell(row[k]) for k, _ in REPORT_COLUMNS) + " |")
    return "\n".join(lines)


def report_grid(kind: FamilyKind, qmax: int, rmax: int) -> list[InvariantReport]:
    kind = FamilyKind(kind)
    out = []
    if kind is FamilyKind.DEGREE_ONE_F:
        qs = [1]
    elif kind is FamilyKind.REMARK11_H:
        return [invariant_report(kind, FamilyParams(1, r, 0)) for r in range(1, rmax + 1)]
    else:
        qs = range(1, qmax + 1)
    rmin = 1 if kind in (FamilyKind.TWISTED_S, FamilyKind.DEGREE_ONE_F) else 0
    for q in qs:
        for r in range(rmin, rmax + 1):
            js = [0] if kind is FamilyKind.DEGREE_ONE_F else range(0, r + 1)
            for j in js:
                out.append(invariant_report(kind, FamilyParams(q, r, j)))
    return out
