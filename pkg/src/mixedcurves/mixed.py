"""Sparse mixed polynomials f(z, zbar) in n complex variables.

A term is stored as ``(nu, mu, coeff)`` meaning ``coeff * z**nu * conj(z)**mu``.
Polynomials are immutable and always kept in canonical form: one term per
``(nu, mu)`` key, no (near) zero coefficients, terms sorted lexicographically
on ``nu + mu``.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

ZERO_TOL = 1e-14


class Monomial(NamedTuple):
    coeff: complex
    nu: tuple[int, ...]
    mu: tuple[int, ...]

    @property
    def radial(self) -> int:
        return sum(self.nu) + sum(self.mu)

    @property
    def polar(self) -> int:
        return sum(self.nu) - sum(self.mu)


def canonicalize(terms: Iterable, n_vars: int, zero_tol: float = ZERO_TOL) -> "MixedPolynomial":
    """Merge duplicate exponent keys, drop zeros and sort.

    ``terms`` may hold :class:`Monomial` values or plain ``(coeff, nu, mu)``
    triples.
    """
    if n_vars < 1:
        raise ValueError("n_vars must be positive")
    acc: dict[tuple[tuple[int, ...], tuple[int, ...]], complex] = {}
    for coeff, nu, mu in terms:
        nu = tuple(int(k) for k in nu)
        mu = tuple(int(k) for k in mu)
        if len(nu) != n_vars or len(mu) != n_vars:
            raise ValueError(
                f"exponent vectors of length {len(nu)}/{len(mu)} in a {n_vars}-variable polynomial"
            )
        if any(k < 0 for k in nu + mu):
            raise ValueError("exponents must be nonnegative")
        c = complex(coeff)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValueError(f"non-finite coefficient {c!r}")
        key = (nu, mu)
        acc[key] = acc.get(key, 0j) + c
    kept = [
        Monomial(c, nu, mu)
        for (nu, mu), c in sorted(acc.items(), key=lambda kv: kv[0][0] + kv[0][1])
        if abs(c) >= zero_tol
    ]
    return MixedPolynomial(n_vars, tuple(kept))


@dataclass(frozen=True)
class MixedPolynomial:
    n_vars: int
    terms: tuple[Monomial, ...] = ()
    _tables: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    # construction helpers

    @classmethod
    def zero(cls, n_vars: int) -> "MixedPolynomial":
        return cls(n_vars, ())

    @classmethod
    def constant(cls, c: complex, n_vars: int) -> "MixedPolynomial":
        return canonicalize([(c, (0,) * n_vars, (0,) * n_vars)], n_vars)

    @classmethod
    def monomial(cls, nu: Sequence[int], mu: Sequence[int] | None = None, coeff: complex = 1.0) -> "MixedPolynomial":
        mu = (0,) * len(nu) if mu is None else mu
        return canonicalize([(coeff, nu, mu)], len(nu))

    @classmethod
    def var(cls, i: int, n_vars: int, power: int = 1) -> "MixedPolynomial":
        """``z_i ** power`` with 1-based ``i``."""
        _check_index(i, n_vars)
        nu = [0] * n_vars
        nu[i - 1] = power
        return cls.monomial(nu)

    @classmethod
    def conj_var(cls, i: int, n_vars: int, power: int = 1) -> "MixedPolynomial":
        """``conj(z_i) ** power`` with 1-based ``i``."""
        _check_index(i, n_vars)
        mu = [0] * n_vars
        mu[i - 1] = power
        return cls.monomial([0] * n_vars, mu)

    # container protocol

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def keys(self) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
        return {(t.nu, t.mu) for t in self.terms}

    def coeff(self, nu: Sequence[int], mu: Sequence[int]) -> complex:
        nu, mu = tuple(nu), tuple(mu)
        for t in self.terms:
            if t.nu == nu and t.mu == mu:
                return t.coeff
        return 0j

    # arithmetic

    def _same_dim(self, other: "MixedPolynomial") -> None:
        if self.n_vars != other.n_vars:
            raise ValueError(f"dimension mismatch: {self.n_vars} vs {other.n_vars} variables")

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = MixedPolynomial.constant(other, self.n_vars)
        if not isinstance(other, MixedPolynomial):
            return NotImplemented
        self._same_dim(other)
        return canonicalize(list(self.terms) + list(other.terms), self.n_vars)

    __radd__ = __add__

    def __neg__(self):
        return MixedPolynomial(self.n_vars, tuple(Monomial(-t.coeff, t.nu, t.mu) for t in self.terms))

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = MixedPolynomial.constant(other, self.n_vars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return canonicalize([(other * t.coeff, t.nu, t.mu) for t in self.terms], self.n_vars)
        if not isinstance(other, MixedPolynomial):
            return NotImplemented
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        out = MixedPolynomial.constant(1.0, self.n_vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # structure

    @property
    def degree(self) -> int:
        return max((t.radial for t in self.terms), default=0)

    def embed(self, n_vars: int, offset: int = 0) -> "MixedPolynomial":
        """Same polynomial viewed in ``n_vars`` variables; variable i becomes i + offset."""
        if offset < 0 or offset + self.n_vars > n_vars:
            raise ValueError("target dimension too small for embedding")
        pad_l, pad_r = (0,) * offset, (0,) * (n_vars - self.n_vars - offset)
        return MixedPolynomial(
            n_vars,
            tuple(sorted(
                (Monomial(t.coeff, pad_l + t.nu + pad_r, pad_l + t.mu + pad_r) for t in self.terms),
                key=lambda t: t.nu + t.mu,
            )),
        )

    def __call__(self, z):
        return evaluate(self, z)

    def __str__(self) -> str:
        return to_text(self)

    def to_dict(self) -> dict:
        return {
            "n_vars": self.n_vars,
            "terms": [
                {"coeff": [t.coeff.real, t.coeff.imag], "nu": list(t.nu), "mu": list(t.mu)}
                for t in self.terms
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MixedPolynomial":
        return canonicalize(
            [(complex(*t["coeff"]), t["nu"], t["mu"]) for t in data["terms"]], int(data["n_vars"])
        )

    # cached exponent arrays for the batch evaluators
    def _arrays(self):
        if "arr" not in self._tables:
            coeffs = np.array([t.coeff for t in self.terms], dtype=complex)
            nu = np.array([t.nu for t in self.terms], dtype=np.int64).reshape(len(self.terms), self.n_vars)
            mu = np.array([t.mu for t in self.terms], dtype=np.int64).reshape(len(self.terms), self.n_vars)
            self._tables["arr"] = (coeffs, nu, mu)
        return self._tables["arr"]


def _check_index(i: int, n_vars: int) -> None:
    if not 1 <= i <= n_vars:
        raise IndexError(f"variable index {i} outside 1..{n_vars}")


def multiply(f: MixedPolynomial, g: MixedPolynomial) -> MixedPolynomial:
    f._same_dim(g)
    out = []
    for a in f.terms:
        for b in g.terms:
            out.append((
                a.coeff * b.coeff,
                tuple(x + y for x, y in zip(a.nu, b.nu)),
                tuple(x + y for x, y in zip(a.mu, b.mu)),
            ))
    return canonicalize(out, f.n_vars)


def conjugate(f: MixedPolynomial) -> MixedPolynomial:
    """(c, nu, mu) -> (conj c, mu, nu); evaluates to the conjugate of f."""
    return canonicalize([(t.coeff.conjugate(), t.mu, t.nu) for t in f.terms], f.n_vars)


def restrict(f: MixedPolynomial, i: int) -> MixedPolynomial:
    """f with z_i frozen at 0 (n_vars is kept)."""
    _check_index(i, f.n_vars)
    k = i - 1
    return MixedPolynomial(f.n_vars, tuple(t for t in f.terms if t.nu[k] == 0 and t.mu[k] == 0))


def d_dz(f: MixedPolynomial, i: int) -> MixedPolynomial:
    _check_index(i, f.n_vars)
    k = i - 1
    out = []
    for t in f.terms:
        if t.nu[k]:
            nu = list(t.nu)
            nu[k] -= 1
            out.append((t.coeff * t.nu[k], nu, t.mu))
    return canonicalize(out, f.n_vars)


def d_dzbar(f: MixedPolynomial, i: int) -> MixedPolynomial:
    _check_index(i, f.n_vars)
    k = i - 1
    out = []
    for t in f.terms:
        if t.mu[k]:
            mu = list(t.mu)
            mu[k] -= 1
            out.append((t.coeff * t.mu[k], t.nu, mu))
    return canonicalize(out, f.n_vars)


def _point(f: MixedPolynomial, z) -> tuple[complex, ...]:
    z = tuple(complex(x) for x in z)
    if len(z) != f.n_vars:
        raise ValueError(f"point of dimension {len(z)} for a {f.n_vars}-variable polynomial")
    return z


def _ipow(x: complex, k: int) -> complex:
    # repeated squaring; exact for 0**0 = 1 and avoids the log route of complex ** int
    out = 1 + 0j
    while k:
        if k & 1:
            out *= x
        x *= x
        k >>= 1
    return out


def evaluate(f: MixedPolynomial, z) -> complex:
    z = _point(f, z)
    zb = tuple(x.conjugate() for x in z)
    total = 0j
    for t in f.terms:
        v = t.coeff
        for x, xb, a, b in zip(z, zb, t.nu, t.mu):
            if a:
                v *= _ipow(x, a)
            if b:
                v *= _ipow(xb, b)
        total += v
    return total


def wirtinger(f: MixedPolynomial, z) -> tuple[np.ndarray, np.ndarray]:
    """Wirtinger partials (df/dz_i, df/dzbar_i) at the point z."""
    z = _point(f, z)
    n = f.n_vars
    dz = np.array([evaluate(d_dz(f, i), z) for i in range(1, n + 1)], dtype=complex)
    dzb = np.array([evaluate(d_dzbar(f, i), z) for i in range(1, n + 1)], dtype=complex)
    return dz, dzb


def _power_table(Z: np.ndarray, kmax: int) -> np.ndarray:
    # table[k] = Z**k elementwise, built by repeated multiplication
    table = np.empty((kmax + 1,) + Z.shape, dtype=complex)
    table[0] = 1.0
    for k in range(1, kmax + 1):
        table[k] = table[k - 1] * Z
    return table


def term_values(f: MixedPolynomial, Z) -> np.ndarray:
    """Per-term values, shape (m, T), for points Z of shape (m, n)."""
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    if Z.shape[1] != f.n_vars:
        raise ValueError(f"points of dimension {Z.shape[1]} for a {f.n_vars}-variable polynomial")
    coeffs, nu, mu = f._arrays()
    m = Z.shape[0]
    if not len(coeffs):
        return np.zeros((m, 0), dtype=complex)
    kmax = int(max(nu.max(), mu.max()))
    zp = _power_table(Z, kmax)
    zbp = _power_table(Z.conj(), kmax)
    vals = np.ones((m, len(coeffs)), dtype=complex) * coeffs
    cols = np.arange(Z.shape[1])
    for ti in range(len(coeffs)):
        vals[:, ti] *= np.prod(zp[nu[ti], :, cols].T, axis=1) * np.prod(zbp[mu[ti], :, cols].T, axis=1)
    return vals


def evaluate_batch(f: MixedPolynomial, Z) -> np.ndarray:
    """Evaluate at many points at once; Z has shape (m, n)."""
    return term_values(f, Z).sum(axis=1)


def wirtinger_batch(f: MixedPolynomial, Z) -> tuple[np.ndarray, np.ndarray]:
    """Wirtinger partials at many points; both outputs have shape (m, n)."""
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    derivs = f._tables.get("wirt")
    if derivs is None:
        derivs = (
            [d_dz(f, i) for i in range(1, f.n_vars + 1)],
            [d_dzbar(f, i) for i in range(1, f.n_vars + 1)],
        )
        f._tables["wirt"] = derivs
    dz = np.stack([evaluate_batch(g, Z) for g in derivs[0]], axis=1)
    dzb = np.stack([evaluate_batch(g, Z) for g in derivs[1]], axis=1)
    return dz, dzb


@dataclass(frozen=True)
class ScaleAction:
    """(t, rho) acting by z_i -> t**q_i * rho**p_i * z_i.

    ``weights`` is anything with integer sequences ``Q`` and ``P`` (normally a
    :class:`mixedcurves.weights.WeightSystem`); ``None`` is the usual action
    with all weights 1.
    """

    t: float
    rho: complex
    weights: object | None = None
    tol: float = 1e-12

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("t must be positive")
        if abs(abs(self.rho) - 1.0) > self.tol:
            raise ValueError("rho must have unit modulus")

    def act(self, z) -> tuple[complex, ...]:
        z = tuple(complex(x) for x in z)
        if self.weights is None:
            Q = P = (1,) * len(z)
        else:
            Q, P = tuple(self.weights.Q), tuple(self.weights.P)
            if len(Q) != len(z) or len(P) != len(z):
                raise ValueError("weight vector length does not match the point")
        return tuple(self.t ** qi * _ipow_signed(self.rho, pi) * x for qi, pi, x in zip(Q, P, z))


def _ipow_signed(x: complex, k: int) -> complex:
    return _ipow(x, k) if k >= 0 else _ipow(1 / x, -k)


def apply_action(f: MixedPolynomial, act: ScaleAction, z) -> complex:
    z = _point(f, z)
    return evaluate(f, act.act(z))


# text form: (re,im)*z1^2*z2*zb1 + ...

def _fmt(x: float) -> str:
    return format(x, ".17g")


def to_text(f: MixedPolynomial) -> str:
    if not f.terms:
        return "0"
    parts = []
    for t in f.terms:
        s = f"({_fmt(t.coeff.real)},{_fmt(t.coeff.imag)})"
        for name, exps in (("z", t.nu), ("zb", t.mu)):
            for i, k in enumerate(exps, start=1):
                if k == 1:
                    s += f"*{name}{i}"
                elif k > 1:
                    s += f"*{name}{i}^{k}"
        parts.append(s)
    return " + ".join(parts)


_TERM = re.compile(r"^\(([^,()]+),([^,()]+)\)((?:\*zb?\d+(?:\^\d+)?)*)$")
_FACTOR = re.compile(r"\*(zb?)(\d+)(?:\^(\d+))?")


def from_text(text: str, n_vars: int) -> MixedPolynomial:
    text = text.strip()
    if text == "0":
        return MixedPolynomial.zero(n_vars)
    terms = []
    for chunk in text.split(" + "):
        m = _TERM.match(chunk.strip())
        if not m:
            raise ValueError(f"cannot parse term {chunk!r}")
        nu, mu = [0] * n_vars, [0] * n_vars
        for kind, idx, k in _FACTOR.findall(m.group(3)):
            i = int(idx)
            _check_index(i, n_vars)
            (mu if kind == "zb" else nu)[i - 1] += int(k) if k else 1
        terms.append((complex(float(m.group(1)), float(m.group(2))), nu, mu))
    return canonicalize(terms, n_vars)
