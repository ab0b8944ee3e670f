"""Hankel-determinant chains living inside one-directional backgrounds.

When every f^+ field of a B2 configuration vanishes, repeated discrete
transformations collapse to classical determinant recursions: the pair
(f^+_{0.1}, f^-_{0.1}) runs a one-dimensional Toda chain whose tau functions
are Hankel minors of the single seed function, the pair (f^-_{1.1}, f^-_{1.2})
runs a linear chain (A^n, B^n) on top of it, and the first-root analogue is
solved by bordered Hankel minors.  Everything here is exact ExpPoly
arithmetic; determinants use fraction-free elimination with exact division.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

from .exprat import ExpPoly, ExpRational, WaveConstants, divexact
from .spectral import SpectralData, f_wave, initial_config, validate
from .tau import tau_V_B2
from .transforms import PivotZero
from .wavesys import MINUS, PLUS, FieldConfig, FieldKey, model

HALF = Fraction(1, 2)


# -- determinants ---------------------------------------------------------------


def det_cofactor(rows: Sequence[Sequence[ExpPoly]]) -> ExpPoly:
    """Reference determinant by first-row cofactor expansion."""
    n = len(rows)
    if n == 0:
        return ExpPoly.const(1)
    if n == 1:
        return rows[0][0]
    acc = ExpPoly.zero()
    for j in range(n):
        if rows[0][j].is_zero():
            continue
        minor = [[row[c] for c in range(n) if c != j] for row in rows[1:]]
        term = rows[0][j] * det_cofactor(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def det_bareiss(rows: Sequence[Sequence[ExpPoly]]) -> ExpPoly:
    """Fraction-free determinant: every intermediate entry stays an ExpPoly.

    One-step condensation divides exactly by the previous pivot; row swaps
    flip the sign.  Cost grows with minor size, not with nesting depth,
    which keeps term counts far below cofactor expansion for n >= 4.
    """
    n = len(rows)
    if n == 0:
        return ExpPoly.const(1)
    m = [list(row) for row in rows]
    sign = 1
    prev = ExpPoly.const(1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return ExpPoly.zero()
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = divexact(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev)
        prev = m[k][k]
    out = m[n - 1][n - 1]
    return out if sign > 0 else -out


# -- the Toda chain of the second simple root ------------------------------------


@dataclass
class HankelChain:
    """Lazily extended main minors Det_n of the Hankel matrix of one seed.

    Entry (i, j) of the matrix is the (i+j)-th derivative of the seed in the
    fixed direction; Det_0 = 1 and Det_{-1} = 0 by convention (the n = 0 and
    n = -1 cases of the chain relations force both).
    """

    seed: ExpPoly
    constants: WaveConstants
    direction: Tuple[int, int] = (1, 0)
    seed_key: FieldKey = (MINUS, (0, 1))
    _ders: List[ExpPoly] = field(default_factory=list, repr=False)
    _dets: List[ExpPoly] = field(default_factory=list, repr=False)

    def derivative(self, k: int) -> ExpPoly:
        if not self._ders:
            self._ders.append(self.seed)
        i, j = self.direction
        while len(self._ders) <= k:
            self._ders.append(self._ders[-1].deriv(i, j, self.constants))
        return self._ders[k]

    def det(self, n: int) -> ExpPoly:
        if n < 0:
            return ExpPoly.zero()
        if not self._dets:
            self._dets.append(ExpPoly.const(1))
        while len(self._dets) <= n:
            size = len(self._dets)
            rows = [
                [self.derivative(i + j) for j in range(size)] for i in range(size)
            ]
            self._dets.append(det_bareiss(rows))
        return self._dets[n]


def hankel_chain(s: SpectralData) -> HankelChain:
    """Toda chain of the seed r = f^-_{0.1} with derivatives along (1, 0)."""
    validate(s)
    r = ExpPoly.zero()
    for sp in s.qspikes:
        r = r + f_wave(sp.pos, s.constants, sp.weight)
    return HankelChain(r, s.constants)


def det_n(chain: HankelChain, n: int) -> ExpPoly:
    return chain.det(n)


def toda_residual(chain: HankelChain, n: int) -> ExpRational:
    """D^2 log Det_n minus Det_{n-1} Det_{n+1} / Det_n^2, exactly.

    Zero identically iff level n of the chain satisfies the Toda relation.
    The logarithmic second derivative is realized polynomially as
    (Det * D^2 Det - (D Det)^2) / Det^2.
    """
    dn = chain.det(n)
    if dn.is_zero():
        raise PivotZero("TODA_CHAIN", chain.seed_key, step=n)
    i, j = chain.direction
    d1 = dn.deriv(i, j, chain.constants)
    d2 = d1.deriv(i, j, chain.constants)
    num = dn * d2 - d1 * d1 - chain.det(n - 1) * chain.det(n + 1)
    return ExpRational(num, dn * dn)


# -- the linear (A, B) chain riding on the Toda background -----------------------


@dataclass(frozen=True)
class ABChain:
    """Level-n pair: f^-_{1.1} = A / Det_n^2 and f^-_{1.2} = B / Det_n^2."""

    level: int
    A: ExpPoly
    B: ExpPoly


def _as_poly(f: ExpRational, what: str) -> ExpPoly:
    c = f.den.terms.get((Fraction(0), Fraction(0)))
    if len(f.den.terms) != 1 or c is None:
        raise ValueError(f"{what} must be polynomial (constant denominator)")
    return f.num * (1 / c)


def ab_init(s: SpectralData) -> ABChain:
    """Level 0: the seed values of f^-_{1.1} and f^-_{1.2} (Det_0 = 1)."""
    cfg = initial_config(model("B2"), s)
    return ABChain(
        0,
        _as_poly(cfg[(MINUS, (1, 1))], "seed f-1.1"),
        _as_poly(cfg[(MINUS, (1, 2))], "seed f-1.2"),
    )


def ab_step(prev: ABChain, chain: HankelChain) -> ABChain:
    """One exact step of the linear chain.

    A' = (Det_{n+1} D B / 2 - B D Det_{n+1}) / Det_n, and B' is the
    three-part recursion cleared to a single numerator over 4 Det_n^4; both
    divisions are exact on genuine chain data (InexactDivision otherwise).
    """
    n = prev.level
    dn = chain.det(n)
    if dn.is_zero():
        raise PivotZero("AB_CHAIN", chain.seed_key, step=n)
    dn1 = chain.det(n + 1)
    w = chain.constants
    i, j = chain.direction

    def d(f: ExpPoly) -> ExpPoly:
        return f.deriv(i, j, w)

    a, b = prev.A, prev.B
    b1 = d(b)
    dn1_1 = d(dn1)
    a_new = divexact(dn1 * b1 - b * dn1_1 * 2, dn * 2)

    num = (
        dn * dn * (dn1 * dn1 * d(b1) - dn1 * dn1_1 * b1 * 4 + dn1_1 * dn1_1 * b * 4)
        + dn * dn1 * dn1 * (a * dn1_1 - dn1 * d(a)) * 2
        + dn1 * dn1 * dn1 * (a * d(dn) + b * chain.det(n - 1)) * 2
    )
    b_new = divexact(num, dn * dn * dn * dn * 4)
    return ABChain(n + 1, a_new, b_new)


def ab_closed(s: SpectralData, n: int) -> Tuple[ExpPoly, ExpPoly]:
    """Closed forms: two independent Q-groups against a single P-group.

    A^n pairs groups of sizes (n, n+1), B^n pairs (n+1, n+1); both couple
    every mu to the single lambda.  Needs at least 2n+2 Q-spikes and one
    P-spike to be a faithful instantiation.
    """
    if n < 0:
        raise ValueError("chain level must be nonnegative")
    if len(s.qspikes) < 2 * n + 2 or len(s.pspikes) < 1:
        raise ValueError(
            f"level {n} closed form needs >= {2 * n + 2} Q-spikes and one P-spike"
        )
    return tau_V_B2(s, 1, n, n + 1), tau_V_B2(s, 1, n + 1, n + 1)


def ab_f10(prev: ABChain, chain: HankelChain) -> ExpRational:
    """The remaining field at level n+1: f^-_{1.0} = B^n / Det_{n+1}^2."""
    dn1 = chain.det(prev.level + 1)
    if dn1.is_zero():
        raise PivotZero("AB_CHAIN", chain.seed_key, step=prev.level + 1)
    return ExpRational(prev.B, dn1 * dn1)


# -- the chain of the first simple root ------------------------------------------

_FRC_ZERO_KEYS = ((PLUS, (1, 0)), (PLUS, (0, 1)), (PLUS, (1, 1)), (PLUS, (1, 2)))


def first_root_chain(cfg: FieldConfig, steps: int) -> FieldConfig:
    """n steps of the first-root transformation on an all-f^+-zero background.

    The whole chain is solved at once by bordered Hankel minors in the
    direction (0, 1) of the seed g = f^-_{1.0}: plain minors Det_n give
    f^+_{1.0} and f^-_{1.0}, replacing the last column by derivatives of
    h = f^-_{1.1} gives f^-_{0.1} and f^-_{1.1}, and the symmetric bordering
    with corner k = f^-_{1.2} gives f^-_{1.2}.  The f^+ zero pattern is
    preserved at every level.
    """
    if cfg.algebra != "B2":
        raise ValueError(f"first-root chain acts on B2 configs, got {cfg.algebra}")
    if steps < 0:
        raise ValueError("step count must be nonnegative")
    for key in _FRC_ZERO_KEYS:
        if not cfg[key].is_zero():
            raise ValueError("background must have every f^+ identically zero")
    if steps == 0:
        return cfg

    w = cfg.constants
    g = _as_poly(cfg[(MINUS, (1, 0))], "f-1.0")
    h = _as_poly(cfg[(MINUS, (1, 1))], "f-1.1")
    k = _as_poly(cfg[(MINUS, (1, 2))], "f-1.2")

    gd = [g]
    hd = [h]
    for _ in range(2 * steps):
        gd.append(gd[-1].deriv(0, 1, w))
        hd.append(hd[-1].deriv(0, 1, w))

    def plain(n: int) -> ExpPoly:
        if n < 0:
            return ExpPoly.zero()
        return det_bareiss([[gd[i + j] for j in range(n)] for i in range(n)])

    def bordered(n: int) -> ExpPoly:
        # last column -> derivatives of h
        rows = [
            [gd[i + j] for j in range(n - 1)] + [hd[i]] for i in range(n)
        ]
        return det_bareiss(rows)

    def double_bordered(n: int) -> ExpPoly:
        # last column and row -> derivatives of h, corner -> k
        rows = [
            [gd[i + j] for j in range(n - 1)] + [hd[i]] for i in range(n - 1)
        ]
        rows.append([hd[j] for j in range(n - 1)] + [k])
        return det_bareiss(rows)

    den = plain(steps)
    if den.is_zero():
        raise PivotZero("FIRST_ROOT_CHAIN", (MINUS, (1, 0)), step=steps)
    fields = {key: ExpRational.zero() for key in _FRC_ZERO_KEYS}
    fields[(PLUS, (1, 0))] = ExpRational(plain(steps - 1), den)
    fields[(MINUS, (1, 0))] = ExpRational(plain(steps + 1), den)
    fields[(MINUS, (0, 1))] = ExpRational(bordered(steps), den)
    fields[(MINUS, (1, 1))] = ExpRational(bordered(steps + 1), den)
    fields[(MINUS, (1, 2))] = ExpRational(double_bordered(steps + 1), den)
    return FieldConfig("B2", w, fields)
