"""Static models of the three rank-2 interacting-wave systems.

Each algebra (A2, B2, G2) is encoded as data: its positive roots, Cartan
matrix, and the bilinear first-order system — one equation

    D_{p,q} f^s_{p.q} = sum_k  coef_k * f_{A_k} * f_{B_k}

per signed root.  Keeping the equations as data means the verifier and the
transformation engine share a single source of truth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Tuple

from .exprat import ExpRational, WaveConstants

Root = Tuple[int, int]
#: A signed field key: (sign, (p, q)) with sign in {+1, -1} naming f^sign_{p.q}.
FieldKey = Tuple[int, Root]

PLUS, MINUS = 1, -1


def field_label(key: FieldKey) -> str:
    s, (p, q) = key
    return f"f{'+' if s > 0 else '-'}{p}.{q}"


def parse_field_label(label: str) -> FieldKey:
    if len(label) < 5 or label[0] != "f" or label[1] not in "+-":
        raise ValueError(f"bad field label: {label!r}")
    p, q = label[2:].split(".")
    return (PLUS if label[1] == "+" else MINUS, (int(p), int(q)))


@dataclass(frozen=True)
class EquationSpec:
    """One component equation: D_{d_index} f_lhs = sum(coef * f_a * f_b)."""

    lhs: FieldKey
    d_index: Root
    rhs: Tuple[Tuple[int, FieldKey, FieldKey], ...]


@dataclass(frozen=True)
class AlgebraModel:
    name: str
    cartan: Tuple[Tuple[int, int], Tuple[int, int]]
    roots: Tuple[Root, ...]
    equations: Tuple[EquationSpec, ...]

    @property
    def field_keys(self) -> Tuple[FieldKey, ...]:
        return tuple((s, r) for r in self.roots for s in (PLUS, MINUS))


def _eqs(table) -> Tuple[EquationSpec, ...]:
    out = []
    for sign in (PLUS, MINUS):
        for root, rhs in table:
            terms = tuple(
                (coef, (sign * sa, ra), (sign * sb, rb)) for coef, (sa, ra), (sb, rb) in rhs
            )
            out.append(EquationSpec(lhs=(sign, root), d_index=root, rhs=terms))
    return tuple(out)


# Tables give the '+' column; the '-' column is the sign mirror f^+ <-> f^-.
# Each rhs factor is written (relative_sign, root): relative_sign +1 keeps the
# equation's own sign, -1 flips it.

_A2_TABLE = [
    ((1, 0), [(1, (+1, (1, 1)), (-1, (0, 1)))]),
    ((0, 1), [(1, (+1, (1, 1)), (-1, (1, 0)))]),
    ((1, 1), [(-1, (+1, (0, 1)), (+1, (1, 0)))]),
]

_B2_TABLE = [
    ((1, 0), [(2, (+1, (1, 1)), (-1, (0, 1)))]),
    ((0, 1), [(1, (+1, (1, 1)), (-1, (1, 0))), (1, (+1, (1, 2)), (-1, (1, 1)))]),
    ((1, 1), [(-1, (+1, (0, 1)), (+1, (1, 0))), (1, (+1, (1, 2)), (-1, (0, 1)))]),
    ((1, 2), [(-2, (+1, (1, 1)), (+1, (0, 1)))]),
]

_G2_TABLE = [
    ((2, 3), [(3, (+1, (1, 0)), (+1, (1, 3))), (-3, (+1, (1, 1)), (+1, (1, 2)))]),
    ((1, 3), [(-3, (+1, (2, 3)), (-1, (1, 0))), (-3, (+1, (0, 1)), (+1, (1, 2)))]),
    ((1, 2), [(1, (+1, (2, 3)), (-1, (1, 1))), (1, (+1, (1, 3)), (-1, (0, 1))),
              (-2, (+1, (0, 1)), (+1, (1, 1)))]),
    ((1, 1), [(1, (+1, (2, 3)), (-1, (1, 2))), (2, (+1, (1, 2)), (-1, (0, 1))),
              (-1, (+1, (0, 1)), (+1, (1, 0)))]),
    ((1, 0), [(-3, (+1, (2, 3)), (-1, (1, 3))), (3, (+1, (1, 1)), (-1, (0, 1)))]),
    ((0, 1), [(1, (+1, (1, 3)), (-1, (1, 2))), (2, (+1, (1, 2)), (-1, (1, 1))),
              (1, (+1, (1, 1)), (-1, (1, 0)))]),
]

_MODELS: Dict[str, AlgebraModel] = {
    "A2": AlgebraModel(
        name="A2",
        cartan=((2, -1), (-1, 2)),
        roots=((1, 0), (0, 1), (1, 1)),
        equations=_eqs(_A2_TABLE),
    ),
    "B2": AlgebraModel(
        name="B2",
        cartan=((2, -2), (-1, 2)),
        roots=((1, 0), (0, 1), (1, 1), (1, 2)),
        equations=_eqs(_B2_TABLE),
    ),
    "G2": AlgebraModel(
        name="G2",
        cartan=((2, -3), (-1, 2)),
        roots=((1, 0), (0, 1), (1, 1), (1, 2), (1, 3), (2, 3)),
        equations=_eqs(_G2_TABLE),
    ),
}


def model(name: str) -> AlgebraModel:
    try:
        return _MODELS[name]
    except KeyError:
        raise ValueError(f"unknown algebra {name!r} (expected A2, B2 or G2)") from None


@dataclass
class FieldConfig:
    """A total assignment of an ExpRational to every signed root of one algebra."""

    algebra: str
    constants: WaveConstants
    fields: Dict[FieldKey, ExpRational]

    def __post_init__(self) -> None:
        m = model(self.algebra)
        missing = [k for k in m.field_keys if k not in self.fields]
        extra = [k for k in self.fields if k not in m.field_keys]
        if missing or extra:
            raise ValueError(
                f"field assignment mismatch for {self.algebra}: "
                f"missing={[field_label(k) for k in missing]} "
                f"extra={[field_label(k) for k in extra]}"
            )

    def __getitem__(self, key: FieldKey) -> ExpRational:
        return self.fields[key]

    def get(self, sign: int, root: Root) -> ExpRational:
        return self.fields[(sign, root)]

    def with_fields(self, updates: Dict[FieldKey, ExpRational]) -> "FieldConfig":
        merged = dict(self.fields)
        merged.update(updates)
        return FieldConfig(self.algebra, self.constants, merged)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldConfig):
            return NotImplemented
        if self.algebra != other.algebra or self.constants != other.constants:
            return False
        return all(self.fields[k] == other.fields[k] for k in model(self.algebra).field_keys)


def zero_config(name: str, constants: WaveConstants) -> FieldConfig:
    m = model(name)
    return FieldConfig(name, constants, {k: ExpRational.zero() for k in m.field_keys})


def residual(m: AlgebraModel, cfg: FieldConfig, eq: EquationSpec) -> ExpRational:
    """D_{i,j} f_lhs  -  sum coef*f_a*f_b, as one normalized ExpRational."""
    i, j = eq.d_index
    acc = cfg[eq.lhs].deriv(i, j, cfg.constants)
    for coef, a, b in eq.rhs:
        acc = acc - cfg[a] * cfg[b] * Fraction(coef)
    return acc


def residuals(m: AlgebraModel, cfg: FieldConfig) -> Dict[FieldKey, ExpRational]:
    return {eq.lhs: residual(m, cfg, eq) for eq in m.equations}


def is_exact_solution(m: AlgebraModel, cfg: FieldConfig) -> bool:
    return all(residual(m, cfg, eq).is_zero() for eq in m.equations)


# -- G2 structural symmetry ----------------------------------------------------
#
# The exchange below maps the G2 system onto itself: each derivative index and
# each field is sent to (sign, new index/field).  Note the f_{0.1} rule swaps
# the +/- sign of the field (with a plus sign): as printed the rule carries a
# minus, but only the plus variant actually maps the equation set onto itself,
# which is the property the transformation engine relies on.

G2_SUBST_D: Dict[Root, Tuple[int, Root]] = {
    (2, 3): (-1, (2, 3)),
    (1, 3): (-1, (1, 0)),
    (1, 0): (-1, (1, 3)),
    (1, 2): (-1, (1, 1)),
    (1, 1): (-1, (1, 2)),
    (0, 1): (+1, (0, 1)),
}

G2_SUBST_F: Dict[FieldKey, Tuple[int, FieldKey]] = {}
for _s in (PLUS, MINUS):
    G2_SUBST_F[(_s, (2, 3))] = (-1, (_s, (2, 3)))
    G2_SUBST_F[(_s, (1, 3))] = (-1, (_s, (1, 0)))
    G2_SUBST_F[(_s, (1, 0))] = (-1, (_s, (1, 3)))
    G2_SUBST_F[(_s, (1, 1))] = (-1, (_s, (1, 2)))
    G2_SUBST_F[(_s, (1, 2))] = (-1, (_s, (1, 1)))
    G2_SUBST_F[(_s, (0, 1))] = (+1, (-_s, (0, 1)))


def _normalize_eq(lhs: FieldKey, d_index: Root, rhs: Iterable) -> tuple:
    merged: Dict[tuple, Fraction] = {}
    for coef, a, b in rhs:
        key = tuple(sorted((a, b)))
        merged[key] = merged.get(key, Fraction(0)) + Fraction(coef)
    terms = tuple(sorted((k, c) for k, c in merged.items() if c))
    return (lhs, d_index, terms)


def substituted_equation(eq: EquationSpec, dmap, fmap) -> tuple:
    """Apply a (sign, relabel) substitution to one equation and normalize.

    From  eta*D'_{r'}(eps_L*f_{L'}) = sum coef*eps_A*eps_B*f_{A'}*f_{B'}
    the normalized claim is  D'_{r'} f_{L'} = sum (coef*eps_A*eps_B/(eta*eps_L)) ...
    """
    eta, new_d = dmap[eq.d_index]
    eps_l, new_lhs = fmap[eq.lhs]
    rhs = []
    for coef, a, b in eq.rhs:
        eps_a, new_a = fmap[a]
        eps_b, new_b = fmap[b]
        rhs.append((Fraction(coef, 1) * eps_a * eps_b / (eta * eps_l), new_a, new_b))
    return _normalize_eq(new_lhs, new_d, rhs)


def substitution_is_symmetry(m: AlgebraModel, dmap, fmap) -> bool:
    """True iff the substitution maps the equation set onto itself exactly."""
    original = {_normalize_eq(eq.lhs, eq.d_index, eq.rhs) for eq in m.equations}
    mapped = {substituted_equation(eq, dmap, fmap) for eq in m.equations}
    return mapped == original
