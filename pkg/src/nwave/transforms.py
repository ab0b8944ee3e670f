"""The discrete-transformation engine.

Each transformation maps a FieldConfig to a new FieldConfig of the same
algebra, exactly: derivatives via the bilinear D_{i,j} rule, divisions as
normalized ExpRational quotients.  The defining property — verified by the
tests and exposed via verify_invariance — is that solutions map to
solutions.

Naming: local aliases like m10 / p12 stand for f^-_{1.0} / f^+_{1.2}.

Where the source material for a map was internally inconsistent (signs or
indices that break exact invariance), the implemented row is the minimal
correction that restores invariance; the arbiter is always the residual
check, never the printed glyph.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from .exprat import ExpRational, WaveConstants
from .wavesys import MINUS, PLUS, FieldConfig, FieldKey, field_label, model, residuals

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)

TRANSFORM_IDS = (
    "A2_T1",
    "A2_T2",
    "A2_T3",
    "B2_TM",
    "B2_T10",
    "B2_T10_INV",
    "B2_T2A2",
    "G2_T1",
    "G2_TA1_3A2",
)

TRANSFORM_ALGEBRA = {
    "A2_T1": "A2",
    "A2_T2": "A2",
    "A2_T3": "A2",
    "B2_TM": "B2",
    "B2_T10": "B2",
    "B2_T10_INV": "B2",
    "B2_T2A2": "B2",
    "G2_T1": "G2",
    "G2_TA1_3A2": "G2",
}

#: Field that must not vanish identically for the map to be defined.
TRANSFORM_PIVOT: Dict[str, FieldKey] = {
    "A2_T1": (MINUS, (1, 0)),
    "A2_T2": (MINUS, (0, 1)),
    "A2_T3": (MINUS, (1, 1)),
    "B2_TM": (MINUS, (1, 2)),
    "B2_T10": (MINUS, (1, 0)),
    "B2_T10_INV": (PLUS, (1, 0)),
    "B2_T2A2": (MINUS, (1, 2)),
    "G2_T1": (MINUS, (1, 0)),
    "G2_TA1_3A2": (MINUS, (1, 3)),
}


class PivotZero(ZeroDivisionError):
    """The pivot field of a transformation vanishes identically."""

    def __init__(self, transform_id: str, key: FieldKey, step: int = None):
        self.transform_id = transform_id
        self.key = key
        self.step = step
        at = f" (chain step {step})" if step is not None else ""
        super().__init__(f"{transform_id}{at}: pivot {field_label(key)} is identically zero")


def _check(tid: str, cfg: FieldConfig) -> None:
    want = TRANSFORM_ALGEBRA[tid]
    if cfg.algebra != want:
        raise ValueError(f"{tid} acts on {want} configs, got {cfg.algebra}")
    if cfg[TRANSFORM_PIVOT[tid]].is_zero():
        raise PivotZero(tid, TRANSFORM_PIVOT[tid])


def _a2_t1(cfg: FieldConfig) -> Dict[FieldKey, ExpRational]:
    w = cfg.constants
    p10, p01, p11 = cfg[(PLUS, (1, 0))], cfg[(PLUS, (0, 1))], cfg[(PLUS, (1, 1))]
    m10, m01, m11 = cfg[(MINUS, (1, 0))], cfg[(MINUS, (0, 1))], cfg[(MINUS, (1, 1))]
    return {
        (PLUS, (1, 0)): m10.inv(),
        (MINUS, (0, 1)): m11 / m10,
        (PLUS, (1, 1)): -p01 / m10,
        (PLUS, (0, 1)): (p01 / m10).deriv(1, 1, w) * m10,
        (MINUS, (1, 1)): (m11 / m10).deriv(0, 1, w) * m10,
        (MINUS, (1, 0)): (p10 * m10 + m10.dlog(1, 1, w).deriv(0, 1, w)) * m10,
    }


def _a2_t2(cfg: FieldConfig) -> Dict[FieldKey, ExpRational]:
    w = cfg.constants
    p10, p01, p11 = cfg[(PLUS, (1, 0))], cfg[(PLUS, (0, 1))], cfg[(PLUS, (1, 1))]
    m10, m01, m11 = cfg[(MINUS, (1, 0))], cfg[(MINUS, (0, 1))], cfg[(MINUS, (1, 1))]
    return {
        (PLUS, (0, 1)): m01.inv(),
        (MINUS, (1, 0)): -m11 / m01,
        (PLUS, (1, 1)): p10 / m01,
        (PLUS, (1, 0)): -(p10 / m01).deriv(1, 1, w) * m01,
        (MINUS, (1, 1)): -(m11 / m01).deriv(1, 0, w) * m01,
        (MINUS, (0, 1)): (p01 * m01 + m01.dlog(1, 1, w).deriv(1, 0, w)) * m01,
    }


def _a2_t3(cfg: FieldConfig) -> Dict[FieldKey, ExpRational]:
    w = cfg.constants
    p10, p01, p11 = cfg[(PLUS, (1, 0))], cfg[(PLUS, (0, 1))], cfg[(PLUS, (1, 1))]
    m10, m01, m11 = cfg[(MINUS, (1, 0))], cfg[(MINUS, (0, 1))], cfg[(MINUS, (1, 1))]
    return {
        (PLUS, (1, 1)): m11.inv(),
        (PLUS, (1, 0)): -m01 / m11,
        (PLUS, (0, 1)): m10 / m11,
        (MINUS, (0, 1)): -(m01 / m11).deriv(1, 0, w) * m11,
        (MINUS, (1, 0)): (m10 / m11).deriv(0, 1, w) * m11,
        (MINUS, (1, 1)): (p11 * m11 - m11.dlog(0, 1, w).deriv(1, 0, w)) * m11,
    }


def _b2_fields(cfg: FieldConfig):
    return (
        cfg[(PLUS, (1, 0))], cfg[(PLUS, (0, 1))], cfg[(PLUS, (1, 1))], cfg[(PLUS, (1, 2))],
        cfg[(MINUS, (1, 0))], cfg[(MINUS, (0, 1))], cfg[(MINUS, (1, 1))], cfg[(MINUS, (1, 2))],
    )


def _b2_tm(cfg: FieldConfig) -> Dict[FieldKey, ExpRational]:
    w = cfg.constants
    p10, p01, p11, p12, m10, m01, m11, m12 = _b2_fields(cfg)

    def D(f: ExpRational) -> ExpRational:
        return f.deriv(1, 0, w)

    dlog12 = m12.dlog(1, 0, w)
    tm12 = (
        m12.dlog(1, 0, w).deriv(1, 0, w) * QUARTER
        + (m11 * D(m01) - m01 * D(m11)) / (m12 * 2)
        + p12 * m12 + p11 * m11 + p01 * m01
    ) * m12
    return {
        (PLUS, (1, 2)): m12.inv(),
        (PLUS, (0, 1)): m11 / m12,
        (PLUS, (1, 1)): -m01 / m12,
        (PLUS, (1, 0)): p10 + m01 * m01 / m12,
        (MINUS, (1, 0)): m10 - m11 * m11 / m12,
        (MINUS, (0, 1)): -D(m01) - p11 * m12 + m01 * dlog12 * HALF,
        (MINUS, (1, 1)): -D(m11) + p01 * m12 + m11 * dlog12 * HALF,
        (MINUS, (1, 2)): tm12,
    }


def _b2_t10(cfg: FieldConfig) -> Dict[FieldKey, ExpRational]:
    w = cfg.constants
    p10, p01, p11, p12, m10, m01, m11, m12 = _b2_fields(cfg)

    def D(f: ExpRational) -> ExpRational:
        return f.deriv(1, 2, w)

    dlog10 = m10.dlog(1, 2, w)
    tm10 = (
        m10.dlog(1, 2, w).deriv(1, 2, w) * QUARTER
        + (p01 * D(m11) - m11 * D(p01)) / (m10 * 2)
        + p10 * m10 + p11 * m11 + p01 * m01
    ) * m10
    return {
        (PLUS, (1, 0)): m10.inv(),
        (MINUS, (0, 1)): m11 / m10,
        (PLUS, (1, 1)): -p01 / m10,
        (PLUS, (1, 2)): p12 + p01 * p01 / m10,
        (MINUS, (1, 2)): m12 - m11 * m11 / m10,
        (PLUS, (0, 1)): D(p01) - p11 * m10 - p01 * dlog10 * HALF,
        (MINUS, (1, 1)): D(m11) + m01 * m10 - m11 * dlog10 * HALF,
        (MINUS, (1, 0)): tm10,
    }


def _b2_t10_inv(cfg: FieldConfig) -> Dict[FieldKey, ExpRational]:
    w = cfg.constants
    G, N1, K, tp12, Z, H, M1, tm12 = _b2_fields(cfg)

    def D(f: ExpRational) -> ExpRational:
        return f.deriv(1, 2, w)

    dlogG = G.dlog(1, 2, w)
    m10 = G.inv()
    m11 = H / G
    p01 = -K / G
    p12 = tp12 - K * K / G
    m12 = tm12 + H * H / G
    m01 = M1 * G - D(H) + H * dlogG * HALF
    p11 = -D(K) + K * dlogG * HALF - N1 * G
    p10 = (
        Z * G * G
        + dlogG.deriv(1, 2, w) * G * QUARTER
        + (m11 * D(p01) - p01 * D(m11)) * G * G * HALF
        - (p11 * m11 + p01 * m01) * G
    )
    return {
        (PLUS, (1, 0)): p10,
        (PLUS, (0, 1)): p01,
        (PLUS, (1, 1)): p11,
        (PLUS, (1, 2)): p12,
        (MINUS, (1, 0)): m10,
        (MINUS, (0, 1)): m01,
        (MINUS, (1, 1)): m11,
        (MINUS, (1, 2)): m12,
    }


def _g2_fields(cfg: FieldConfig):
    keys = [(1, 0), (0, 1), (1, 1), (1, 2), (1, 3), (2, 3)]
    plus = {k: cfg[(PLUS, k)] for k in keys}
    minus = {k: cfg[(MINUS, k)] for k in keys}
    return plus, minus


def _g2_t1(cfg: FieldConfig) -> Dict[FieldKey, ExpRational]:
    w = cfg.constants
    p, m = _g2_fields(cfg)
    p10, p01, p11, p12, p13, p23 = (p[k] for k in [(1, 0), (0, 1), (1, 1), (1, 2), (1, 3), (2, 3)])
    m10, m01, m11, m12, m13, m23 = (m[k] for k in [(1, 0), (0, 1), (1, 1), (1, 2), (1, 3), (2, 3)])

    def D(f: ExpRational) -> ExpRational:
        return f.deriv(1, 2, w)

    dlog10 = m10.dlog(1, 2, w)

    def half_deriv(f: ExpRational) -> ExpRational:
        # (m10*Df - (1/2) f*Dm10) / m10  ==  Df - (1/2) f * dlog10
        return D(f) - f * dlog10 * HALF

    tm23 = (
        half_deriv(m23) - m10 * m13
        + (m23 * m23 * p13 * (-1) + m11 * m11 * m11 * 2 + m23 * m11 * p01 * 3) / (m10 * 2)
    )
    tp01 = (
        half_deriv(p01) - p11 * m10
        + (m11 * m11 * p13 * 2 + p01 * p01 * m11 + m23 * p01 * p13) / (m10 * 2)
    )
    tp13 = (
        half_deriv(p13) + p23 * m10
        + (p13 * p13 * m23 - p13 * m11 * p01 * 3 - p01 * p01 * p01 * 2) / (m10 * 2)
    )
    tm11 = (
        half_deriv(m11) + m01 * m10
        - (p01 * p01 * m23 * 2 + m11 * m11 * p01 + m23 * m11 * p13) / (m10 * 2)
    )
    tm10 = (
        dlog10.deriv(1, 2, w) * QUARTER
        + m10 * p10
        + (m01 * p01 + m11 * p11) * Fraction(3, 2)
        + (m23 * p23 + m13 * p13) * HALF
        + (p01 * D(m11) - m11 * D(p01)) / m10 * Fraction(3, 4)
        - (p13 * D(m23) - m23 * D(p13)) / m10 * QUARTER
        - (
            (m11 * p01) * (m11 * p01) * 3
            - (m23 * p13) * (m23 * p13)
            + m11 * p01 * m23 * p13 * 6
            + m11 * m11 * m11 * p13 * 4
            + p01 * p01 * p01 * m23 * 4
        ) / (m10 * m10) * QUARTER
    ) * m10
    return {
        (PLUS, (1, 0)): m10.inv(),
        (MINUS, (1, 3)): -m23 / m10,
        (PLUS, (1, 1)): -p01 / m10,
        (MINUS, (0, 1)): m11 / m10,
        (PLUS, (2, 3)): p13 / m10,
        (PLUS, (1, 2)): p12 + (m11 * p13 + p01 * p01) / m10,
        (MINUS, (1, 2)): m12 - (m23 * p01 + m11 * m11) / m10,
        (MINUS, (2, 3)): tm23,
        (PLUS, (0, 1)): tp01,
        (PLUS, (1, 3)): tp13,
        (MINUS, (1, 1)): tm11,
        (MINUS, (1, 0)): tm10,
    }


# The index exchange of the G2 system (see wavesys.G2_SUBST_*): on exponents
# it reflects the F-charge, (Lam, M) -> (Lam, 3*Lam - M); on fields it
# relabels with signs.  Conjugating G2_T1 by it yields the second-root map.


def _g2_sigma(cfg: FieldConfig) -> FieldConfig:
    from .wavesys import G2_SUBST_F

    w = cfg.constants

    def omega(a: Fraction, b: Fraction) -> Tuple[Fraction, Fraction]:
        lam = (-w.c2 * a - w.d2 * b) / w.delta
        mm = (w.c1 * a + w.d1 * b) / w.delta
        m2 = lam * 3 - mm
        return (lam * w.d1 + m2 * w.d2, -(lam * w.c1 + m2 * w.c2))

    fields: Dict[FieldKey, ExpRational] = {}
    for key, f in cfg.fields.items():
        eps, target = G2_SUBST_F[key]
        fields[target] = f.map_exponents(omega) * eps
    return FieldConfig(cfg.algebra, w, fields)


def _g2_ta1_3a2(cfg: FieldConfig) -> Dict[FieldKey, ExpRational]:
    inner = _g2_sigma(cfg)
    # the conjugated pivot: sigma sends f-1.3 onto -f-1.0
    out = _g2_sigma(FieldConfig("G2", cfg.constants, _g2_t1(inner)))
    return dict(out.fields)


def _b2_t2a2(cfg: FieldConfig) -> Dict[FieldKey, ExpRational]:
    mid = FieldConfig("B2", cfg.constants, _b2_tm(cfg))
    return _b2_t10_inv(mid)


_BODIES: Dict[str, Callable[[FieldConfig], Dict[FieldKey, ExpRational]]] = {
    "A2_T1": _a2_t1,
    "A2_T2": _a2_t2,
    "A2_T3": _a2_t3,
    "B2_TM": _b2_tm,
    "B2_T10": _b2_t10,
    "B2_T10_INV": _b2_t10_inv,
    "B2_T2A2": _b2_t2a2,
    "G2_T1": _g2_t1,
    "G2_TA1_3A2": _g2_ta1_3a2,
}


def apply(tid: str, cfg: FieldConfig) -> FieldConfig:
    if tid not in _BODIES:
        raise ValueError(f"unknown transform {tid!r}")
    _check(tid, cfg)
    return FieldConfig(cfg.algebra, cfg.constants, _BODIES[tid](cfg))


def apply_chain(tids, cfg: FieldConfig) -> FieldConfig:
    for step, tid in enumerate(tids):
        try:
            cfg = apply(tid, cfg)
        except PivotZero as e:
            raise PivotZero(e.transform_id, e.key, step=step) from None
    return cfg


def verify_invariance(tid: str, cfg: FieldConfig) -> dict:
    """Apply the map, then report exact residuals of the output."""
    out = apply(tid, cfg)
    m = model(out.algebra)
    res = residuals(m, out)
    nonzero = [field_label(k) for k, v in res.items() if not v.is_zero()]
    return {"transform": tid, "pass": not nonzero, "nonzero_residuals": nonzero}
