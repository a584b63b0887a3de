"""Meet, join and combined meet-and-join matrices, and their factorizations.

Matrices are plain float64 numpy arrays (row-major).  Entries are evaluated
in exact integer/rational arithmetic whenever the function values and all
exponents are integral, and widened to float only at the end; otherwise they
are computed in double precision through the shared real-power rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .incidence import (
    PosetFunction,
    PowerDomainError,
    down_convolution,
    real_power,
    up_convolution,
)
from .poset import ElementSubset

MATRIX_EQ_TOL = 1e-10


class ExistenceError(ValueError):
    """The requested combined matrix does not exist for these exponents."""


class FactorizationError(ValueError):
    """A factorization precondition fails (closure or sign conditions)."""


def matrices_close(a, b, rel: float = MATRIX_EQ_TOL) -> bool:
    """Entrywise closeness, relative to the largest absolute entry."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        return False
    scale = max(float(np.abs(a).max(initial=0.0)), float(np.abs(b).max(initial=0.0)))
    if scale == 0.0:
        return True
    return float(np.abs(a - b).max()) <= rel * scale


def _exact_power(base: Fraction, exponent: int) -> Fraction:
    if base == 0:
        if exponent == 0:
            return Fraction(1)
        if exponent > 0:
            return Fraction(0)
        raise PowerDomainError("zero base with a negative exponent")
    return base**exponent


def _all_integral(*exponents) -> bool:
    return all(float(e) == int(e) for e in exponents)


@dataclass(frozen=True)
class CombinedSpec:
    """Exponent quadruple (alpha, beta, gamma, delta) with the set S and f.

    The matrix has entries
        f(meet)^alpha * f(join)^beta / (f(x_i)^gamma * f(x_j)^delta).
    Meets are only evaluated when alpha != 0 and joins when beta != 0, so
    e.g. a pure meet matrix never requires joins to exist.
    """

    alpha: float
    beta: float
    gamma: float
    delta: float
    subset: ElementSubset
    f: PosetFunction

    def validate(self) -> None:
        """Check the existence conditions for the exponent quadruple."""
        f = self.f
        s = self.subset
        if f.parent is not s.parent:
            raise ValueError("function and subset live on different posets")
        if (self.gamma != 0.0 or self.delta != 0.0) and any(
            f.value_at(i) == 0.0 for i in s.indices
        ):
            raise ExistenceError(
                "f vanishes on a member of S, which requires gamma = delta = 0"
            )
        p = s.parent
        if self.alpha < 0.0:
            for a, i in enumerate(s.indices):
                for j in s.indices[: a + 1]:
                    if f.value_at(p._meet_index(i, j)) == 0.0:
                        raise ExistenceError(
                            f"f vanishes at the meet of {p.label_of(i)!r} and "
                            f"{p.label_of(j)!r}, which requires alpha >= 0"
                        )
        if self.beta < 0.0:
            for a, i in enumerate(s.indices):
                for j in s.indices[: a + 1]:
                    if f.value_at(p._join_index(i, j)) == 0.0:
                        raise ExistenceError(
                            f"f vanishes at the join of {p.label_of(i)!r} and "
                            f"{p.label_of(j)!r}, which requires beta >= 0"
                        )

    @property
    def is_symmetric_case(self) -> bool:
        return self.gamma == self.delta


def _pair_entry_float(spec: CombinedSpec, i: int, j: int) -> float:
    p = spec.subset.parent
    f = spec.f
    val = 1.0
    if spec.alpha != 0.0:
        val *= real_power(f.value_at(p._meet_index(i, j)), spec.alpha)
    if spec.beta != 0.0:
        val *= real_power(f.value_at(p._join_index(i, j)), spec.beta)
    if spec.gamma != 0.0:
        d = real_power(f.value_at(i), spec.gamma)
        if d == 0.0:
            raise PowerDomainError("division by a vanishing f power")
        val /= d
    if spec.delta != 0.0:
        d = real_power(f.value_at(j), spec.delta)
        if d == 0.0:
            raise PowerDomainError("division by a vanishing f power")
        val /= d
    return val


def _pair_entry_exact(spec: CombinedSpec, i: int, j: int) -> Fraction:
    p = spec.subset.parent
    f = spec.f
    val = Fraction(1)
    if spec.alpha != 0.0:
        val *= _exact_power(
            Fraction(int(round(f.value_at(p._meet_index(i, j))))), int(spec.alpha)
        )
    if spec.beta != 0.0:
        val *= _exact_power(
            Fraction(int(round(f.value_at(p._join_index(i, j))))), int(spec.beta)
        )
    if spec.gamma != 0.0:
        d = _exact_power(Fraction(int(round(f.value_at(i)))), int(spec.gamma))
        if d == 0:
            raise PowerDomainError("division by a vanishing f power")
        val /= d
    if spec.delta != 0.0:
        d = _exact_power(Fraction(int(round(f.value_at(j)))), int(spec.delta))
        if d == 0:
            raise PowerDomainError("division by a vanishing f power")
        val /= d
    return val


def combined_matrix(spec: CombinedSpec) -> np.ndarray:
    """Build the combined meet-and-join matrix for the given spec."""
    spec.validate()
    s = spec.subset
    n = len(s)
    out = np.zeros((n, n))
    exact = spec.f.is_integer_valued and _all_integral(
        spec.alpha, spec.beta, spec.gamma, spec.delta
    )
    entry = _pair_entry_exact if exact else _pair_entry_float
    if spec.is_symmetric_case:
        for a in range(n):
            for b in range(a, n):
                v = float(entry(spec, s.indices[a], s.indices[b]))
                out[a, b] = v
                out[b, a] = v
    else:
        for a in range(n):
            for b in range(n):
                out[a, b] = float(entry(spec, s.indices[a], s.indices[b]))
    return out


def meet_matrix(s: ElementSubset, f: PosetFunction, alpha: float = 1.0) -> np.ndarray:
    """Matrix with entries f(x_i meet x_j)**alpha."""
    return combined_matrix(CombinedSpec(float(alpha), 0.0, 0.0, 0.0, s, f))


def join_matrix(s: ElementSubset, f: PosetFunction, alpha: float = 1.0) -> np.ndarray:
    """Matrix with entries f(x_i join x_j)**alpha."""
    return combined_matrix(CombinedSpec(0.0, float(alpha), 0.0, 0.0, s, f))


def g_matrix(s: ElementSubset, f: PosetFunction, exponent: float) -> np.ndarray:
    """Comparability-masked power-ratio matrix used by the structure theorems.

    Entry is 1 for comparable pairs, else
    (f(meet) f(join) / (f(x_i) f(x_j)))**exponent.
    """
    p = s.parent
    n = len(s)
    out = np.ones((n, n))
    if exponent == 0.0:
        return out
    for a in range(n):
        for b in range(a + 1, n):
            i, j = s.indices[a], s.indices[b]
            if p._leq[i, j] or p._leq[j, i]:
                continue
            denom = f.value_at(i) * f.value_at(j)
            if denom == 0.0:
                raise PowerDomainError(
                    f"ratio undefined: f vanishes at {p.label_of(i)!r} or {p.label_of(j)!r}"
                )
            ratio = (
                f.value_at(p._meet_index(i, j)) * f.value_at(p._join_index(i, j)) / denom
            )
            v = real_power(ratio, exponent)
            out[a, b] = v
            out[b, a] = v
    return out


# -- square-root factorizations over ideals and filters ----------------------


def _sqrt_entries(values: np.ndarray, labels) -> np.ndarray:
    scale = max(1.0, float(np.abs(values).max(initial=0.0)))
    out = np.empty_like(values)
    for k, v in enumerate(values):
        if v < 0.0:
            if v >= -1e-12 * scale:  # roundoff from cancellation in the convolution
                out[k] = 0.0
                continue
            raise FactorizationError(
                f"convolution entry at {labels[k]!r} is negative ({v}); "
                "the square-root factorization needs nonnegative entries"
            )
        out[k] = math.sqrt(v)
    return out


def factor_ideal(s: ElementSubset, f: PosetFunction, alpha: float = 1.0) -> np.ndarray:
    """n x m factor A with A A^T equal to the meet matrix of f**alpha.

    Columns run over the order ideal of S (members of S first); the entry in
    row i, column j is sqrt of the down-convolution at w_j when w_j lies
    below x_i, else zero.
    """
    conv = down_convolution(f, alpha, s)
    ideal = conv.domain
    roots = _sqrt_entries(conv.values, ideal.labels)
    leq = s.parent._leq
    a = np.zeros((len(s), len(ideal)))
    for col, w in enumerate(ideal.indices):
        for row, x in enumerate(s.indices):
            if leq[w, x]:
                a[row, col] = roots[col]
    return a


def factor_filter(s: ElementSubset, f: PosetFunction, alpha: float = 1.0) -> np.ndarray:
    """n x m factor A with A A^T equal to the join matrix of f**alpha."""
    conv = up_convolution(f, alpha, s)
    filt = conv.domain
    roots = _sqrt_entries(conv.values, filt.labels)
    leq = s.parent._leq
    a = np.zeros((len(s), len(filt)))
    for col, w in enumerate(filt.indices):
        for row, x in enumerate(s.indices):
            if leq[x, w]:
                a[row, col] = roots[col]
    return a


def incidence_matrix(s: ElementSubset) -> np.ndarray:
    """E with e_ij = 1 iff x_j lies below x_i; unit lower triangular under
    the canonical subset ordering."""
    leq = s.parent._leq
    n = len(s)
    e = np.zeros((n, n))
    for a in range(n):
        for b in range(n):
            if leq[s.indices[b], s.indices[a]]:
                e[a, b] = 1.0
    return e


def factor_meet_closed(s: ElementSubset, f: PosetFunction, alpha: float = 1.0):
    """(E, d) with E diag(d) E^T equal to the meet matrix of f**alpha.

    Requires S meet closed.  d_i collects the down-convolution over the
    elements below x_i that are below no earlier member.
    """
    if not s.is_meet_closed():
        raise FactorizationError("set is not meet closed")
    conv = down_convolution(f, alpha, s)
    ideal = conv.domain
    leq = s.parent._leq
    d = np.zeros(len(s))
    for i, x in enumerate(s.indices):
        earlier = list(s.indices[:i])
        total = 0.0
        for pos, z in enumerate(ideal.indices):
            if leq[z, x] and not any(leq[z, y] for y in earlier):
                total += conv.values[pos]
        d[i] = total
    return incidence_matrix(s), d


def factor_join_closed(s: ElementSubset, f: PosetFunction, alpha: float = 1.0):
    """(E, d) with E^T diag(d) E equal to the join matrix of f**alpha.

    Requires S join closed.  d_i collects the up-convolution over the
    elements above x_i that are above no later member.
    """
    if not s.is_join_closed():
        raise FactorizationError("set is not join closed")
    conv = up_convolution(f, alpha, s)
    filt = conv.domain
    leq = s.parent._leq
    d = np.zeros(len(s))
    for i, x in enumerate(s.indices):
        later = list(s.indices[i + 1 :])
        total = 0.0
        for pos, z in enumerate(filt.indices):
            if leq[x, z] and not any(leq[y, z] for y in later):
                total += conv.values[pos]
        d[i] = total
    return incidence_matrix(s), d


# -- structure factorizations -------------------------------------------------


@dataclass(frozen=True)
class StructureFactors:
    """Factors F^left (core o G) F^right of a combined matrix.

    ``f_values`` holds the diagonal of F (the f values on S); the power of a
    diagonal matrix is taken entrywise through the real-power rules.
    """

    f_values: np.ndarray
    left_exponent: float
    right_exponent: float
    core: np.ndarray
    g: np.ndarray

    def _diag(self, exponent: float) -> np.ndarray:
        return np.array([real_power(v, exponent) for v in self.f_values])

    def product(self) -> np.ndarray:
        left = self._diag(self.left_exponent)
        right = self._diag(self.right_exponent)
        return left[:, None] * (self.core * self.g) * right[None, :]


def structure_meet(spec: CombinedSpec) -> StructureFactors:
    """Meet-oriented structure factorization of the combined matrix.

    M = F^(beta-gamma) (meet matrix of f^(alpha-beta) o G_beta) F^(beta-delta).
    """
    spec.validate()
    s = spec.subset
    fvals = np.array([spec.f.value_at(i) for i in s.indices])
    core = meet_matrix(s, spec.f, spec.alpha - spec.beta)
    g = g_matrix(s, spec.f, spec.beta)
    return StructureFactors(
        fvals, spec.beta - spec.gamma, spec.beta - spec.delta, core, g
    )


def structure_join(spec: CombinedSpec) -> StructureFactors:
    """Join-oriented structure factorization of the combined matrix.

    M = F^(alpha-gamma) (join matrix of f^(beta-alpha) o G_alpha) F^(alpha-delta).
    """
    spec.validate()
    s = spec.subset
    fvals = np.array([spec.f.value_at(i) for i in s.indices])
    core = join_matrix(s, spec.f, spec.beta - spec.alpha)
    g = g_matrix(s, spec.f, spec.alpha)
    return StructureFactors(
        fvals, spec.alpha - spec.gamma, spec.alpha - spec.delta, core, g
    )


def ideal_block_split(spec: CombinedSpec):
    """The two positive-semidefinite pieces of the ideal-based decomposition.

    For gamma = delta the combined matrix equals P1 + P2 where
    P1 = (F^(beta-gamma) B)(F^(beta-gamma) B)^T over the columns of S and
    P2 is the same over the remaining ideal columns.  Returns (P1, P2).
    """
    if spec.gamma != spec.delta:
        raise ValueError("the block split needs gamma = delta")
    s = spec.subset
    a = factor_ideal(s, spec.f, spec.alpha - spec.beta)
    fpow = np.array(
        [real_power(spec.f.value_at(i), spec.beta - spec.gamma) for i in s.indices]
    )
    b = fpow[:, None] * a[:, : len(s)]
    c = fpow[:, None] * a[:, len(s) :]
    return b @ b.T, c @ c.T


def hadamard_diag_identity_check(a, b, c, d, tol: float = 1e-12) -> bool:
    """Verify C (A o B) D = B o (C A D) for diagonal C and D."""
    a, b, c, d = (np.asarray(m, dtype=np.float64) for m in (a, b, c, d))
    for m in (a, b, c, d):
        if m.shape != a.shape or m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("all four matrices must be square and same-sized")
    for m in (c, d):
        if np.any(m != np.diag(np.diag(m))):
            raise ValueError("third and fourth matrices must be diagonal")
    lhs = c @ (a * b) @ d
    rhs = b * (c @ a @ d)
    return matrices_close(lhs, rhs, rel=tol)


# -- matrix text output -------------------------------------------------------


def format_matrix(m, style: str = "csv") -> str:
    """Render a matrix as CSV (17 significant digits, round-trip safe) or as
    aligned columns ('pretty')."""
    m = np.asarray(m, dtype=np.float64)
    if style == "csv":
        return "\n".join(",".join(f"{v:.17g}" for v in row) for row in m) + "\n"
    if style == "pretty":
        cells = [[f"{v:.6g}" for v in row] for row in m]
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells) + "\n"
    raise ValueError(f"unknown matrix format {style!r}")


def parse_matrix_csv(text: str) -> np.ndarray:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            rows.append([float(tok) for tok in line.split(",")])
        except ValueError:
            raise ValueError(f"line {lineno}: bad matrix entry") from None
    if not rows:
        raise ValueError("no matrix rows found")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("matrix rows have inconsistent lengths")
    return np.array(rows)
