"""Real-valued functions on poset elements and their Mobius convolutions.

Power evaluation follows the 0**0 = 1 convention throughout; zero base with
a negative exponent and negative base with a non-integer exponent are domain
errors rather than NaNs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .poset import ElementSubset, LatticeError, Poset, _parse_label

SEMIMULT_TOL = 1e-9


class PowerDomainError(ValueError):
    """Power of a function value is undefined over the reals."""


def real_power(base: float, exponent: float) -> float:
    """base**exponent with 0**0 = 1; raises PowerDomainError when undefined."""
    if base == 0.0:
        if exponent == 0.0:
            return 1.0
        if exponent > 0.0:
            return 0.0
        raise PowerDomainError("zero base with a negative exponent")
    if base < 0.0 and exponent != int(exponent):
        raise PowerDomainError(
            f"negative base {base} with non-integer exponent {exponent}"
        )
    if base < 0.0:
        return float(base ** int(exponent))
    return float(base**exponent)


class PosetFunction:
    """A map from the elements of a poset to real values."""

    def __init__(self, parent: Poset, values):
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (len(parent),):
            raise ValueError("need exactly one value per poset element")
        if not np.isfinite(values).all():
            raise ValueError("function values must be finite")
        self.parent = parent
        self.values = values
        self.values.setflags(write=False)

    @classmethod
    def from_mapping(cls, parent: Poset, mapping) -> "PosetFunction":
        try:
            vals = [mapping[x] for x in parent.elements]
        except KeyError as exc:
            raise ValueError(f"no value given for element {exc.args[0]!r}") from None
        return cls(parent, vals)

    @classmethod
    def identity(cls, parent: Poset) -> "PosetFunction":
        """f(x) = x on numerically labeled posets (the stock divisor-poset choice)."""
        try:
            vals = [float(x) for x in parent.elements]
        except (TypeError, ValueError):
            raise ValueError("identity function requires numeric element labels") from None
        return cls(parent, vals)

    @classmethod
    def constant(cls, parent: Poset, c: float) -> "PosetFunction":
        return cls(parent, np.full(len(parent), float(c)))

    @classmethod
    def from_name(cls, parent: Poset, name: str) -> "PosetFunction":
        """Resolve a built-in function name: 'N' or 'const:c'."""
        if name == "N":
            return cls.identity(parent)
        if name.startswith("const:"):
            try:
                return cls.constant(parent, float(name[len("const:") :]))
            except ValueError:
                raise ValueError(f"bad constant in function name {name!r}") from None
        raise ValueError(f"unknown built-in function {name!r}")

    def __call__(self, label) -> float:
        return float(self.values[self.parent.index_of(label)])

    def value_at(self, index: int) -> float:
        return float(self.values[index])

    @property
    def is_integer_valued(self) -> bool:
        return bool(np.all(self.values == np.rint(self.values)))

    def power(self, label, alpha: float) -> float:
        return real_power(self(label), alpha)


def power_value(f: PosetFunction, x, alpha: float) -> float:
    """f(x)**alpha under the real-power rules above."""
    return f.power(x, alpha)


def parse_function(parent: Poset, text: str) -> PosetFunction:
    """Parse the 'label value' per-line function file format."""
    mapping = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) != 2:
            raise ValueError(f"line {lineno}: expected 'label value'")
        label = _parse_label(toks[0])
        try:
            value = float(toks[1])
        except ValueError:
            raise ValueError(f"line {lineno}: bad value {toks[1]!r}") from None
        if label in mapping:
            raise ValueError(f"line {lineno}: duplicate label {label!r}")
        mapping[label] = value
    return PosetFunction.from_mapping(parent, mapping)


def load_function(parent: Poset, path) -> PosetFunction:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_function(parent, fh.read())


@dataclass(frozen=True, repr=False)
class ConvolutionVector:
    """Values of a Mobius convolution over an ideal or a filter.

    ``domain`` is the order ideal (direction 'down') or order filter
    (direction 'up') of the generating subset, in its members-first order;
    ``values`` is aligned with ``domain.indices``.
    """

    direction: str
    exponent: float
    domain: ElementSubset
    values: np.ndarray

    def entry(self, label) -> float:
        i = self.domain.parent.index_of(label)
        try:
            pos = self.domain.indices.index(i)
        except ValueError:
            raise ValueError(f"{label!r} is outside the convolution domain") from None
        return float(self.values[pos])

    @property
    def entries(self) -> dict:
        return dict(zip(self.domain.labels, self.values.tolist()))

    def __repr__(self) -> str:
        return f"ConvolutionVector({self.direction}, exponent={self.exponent}, {self.entries})"


def _powers(f: PosetFunction, indices, alpha: float):
    """(float array, exact int list or None) of f**alpha over the given indices."""
    exact = None
    if f.is_integer_valued and alpha == int(alpha) and alpha >= 0:
        k = int(alpha)
        exact = [int(round(f.values[i])) ** k for i in indices]
        # 0**0 = 1 is what Python's int pow already gives
        return np.array([float(v) for v in exact]), exact
    vals = np.array([real_power(f.values[i], alpha) for i in indices])
    return vals, None


def down_convolution(f: PosetFunction, alpha: float, s: ElementSubset) -> ConvolutionVector:
    """Sum of f(z)**alpha * mu(z, w) over z below w, for every w in the ideal of S.

    Integer-valued f with a nonnegative integer exponent is accumulated in
    exact integer arithmetic before widening to float.
    """
    p = s.parent
    if f.parent is not p:
        raise ValueError("function and subset live on different posets")
    if not p.has_bottom:
        raise LatticeError("down convolution requires a bottom element")
    ideal = s.order_ideal()
    idx = list(ideal.indices)
    mu = p.mobius().matrix[np.ix_(idx, idx)]
    fpow, exact = _powers(f, idx, alpha)
    if exact is not None:
        vals = np.array(
            [float(sum(exact[a] * int(mu[a, b]) for a in range(len(idx)))) for b in range(len(idx))]
        )
    else:
        vals = fpow @ mu.astype(np.float64)
    return ConvolutionVector("down", float(alpha), ideal, vals)


def up_convolution(f: PosetFunction, alpha: float, s: ElementSubset) -> ConvolutionVector:
    """Sum of mu(w, z) * f(z)**alpha over z above w, for every w in the filter of S."""
    p = s.parent
    if not p.has_top:
        raise LatticeError("up convolution requires a top element")
    filt = s.order_filter()
    idx = list(filt.indices)
    mu = p.mobius().matrix[np.ix_(idx, idx)]
    fpow, exact = _powers(f, idx, alpha)
    if exact is not None:
        vals = np.array(
            [float(sum(int(mu[a, b]) * exact[b] for b in range(len(idx)))) for a in range(len(idx))]
        )
    else:
        vals = mu.astype(np.float64) @ fpow
    return ConvolutionVector("up", float(alpha), filt, vals)


def is_semimultiplicative(f: PosetFunction, p: Poset | None = None, tol: float = SEMIMULT_TOL) -> bool:
    """Check f(x)f(y) = f(meet)f(join) for all pairs, to a relative tolerance.

    The poset must be a lattice; missing meets or joins raise eagerly.
    """
    if p is None:
        p = f.parent
    if p is not f.parent:
        raise ValueError("function is not defined on the given poset")
    n = len(p)
    v = f.values
    for i in range(n):
        for j in range(i + 1, n):
            m = p._meet_index(i, j)
            u = p._join_index(i, j)
            lhs = v[i] * v[j]
            rhs = v[m] * v[u]
            if abs(lhs - rhs) > tol * max(1.0, abs(lhs)):
                return False
    return True
