"""
Stratification of singular sl(2)-type Hitchin fibres by Higgs divisors.

A Higgs divisor assigns to each zero ``x`` of ``a_{2n}`` an integer
``0 <= l_x <= floor(m_x / 2)``. Each divisor indexes a stratum which is a
bundle of Hecke parameters (an affine ``C^s`` times ``(C^*)^r``) over a
torsor for a Prym variety on the symplectic side, or for its dual on the
odd orthogonal side.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .spectral import BasePoint, classify_sl2_type, curve_invariants, validate_base_point

SIDES = ("sp", "so")


class PreconditionError(ValueError):
    """A theorem hypothesis (canonical twist, irreducibility, table range) is not met."""


@dataclass(frozen=True)
class HiggsDivisor:
    values: tuple[tuple[str, int], ...]

    @classmethod
    def from_dict(cls, d: dict[str, int]) -> "HiggsDivisor":
        return cls(tuple(sorted(d.items())))

    def as_dict(self) -> dict[str, int]:
        return dict(self.values)

    @property
    def degree(self) -> int:
        return sum(v for _, v in self.values)

    def is_zero(self) -> bool:
        return self.degree == 0

    def __getitem__(self, label: str) -> int:
        return self.as_dict()[label]

    def __str__(self):
        parts = [f"{v}*{k}" for k, v in self.values if v]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class TorsorDescriptor:
    side: str
    base_kind: str
    components: int
    twist_label: str
    dim: int


@dataclass(frozen=True)
class StratumInfo:
    divisor: HiggsDivisor
    side: str
    r: int
    s: int
    dim: int
    n_diag: int
    torsor: TorsorDescriptor
    covering_degree: int

    @property
    def deg_D(self) -> int:
        return self.divisor.degree


@dataclass(frozen=True)
class DualityRow:
    divisor: HiggsDivisor
    sp: StratumInfo
    so: StratumInfo
    hecke_iso: bool
    abelian_dual: bool


def _check_side(side: str) -> str:
    s = side.lower()
    if s not in SIDES:
        raise ValueError(f"unknown side {side!r}; expected 'sp' or 'so'")
    return s


def _require_theorem_hypotheses(b: BasePoint) -> None:
    v = validate_base_point(b)
    if v:
        raise ValueError("invalid base point: " + "; ".join(v))
    if not b.is_canonical:
        raise PreconditionError("stratification requires M = K")
    if not b.irreducible_reduced:
        raise PreconditionError("stratification requires the spectral curve to be asserted irreducible and reduced")
    if b.germ_mode and not classify_sl2_type(b).is_sl2_type:
        raise PreconditionError("stratification requires an sl(2)-type base point")


def iter_higgs_divisors(b: BasePoint) -> Iterator[HiggsDivisor]:
    zs = sorted(b.zeros, key=lambda z: z.label)
    ranges = [range(z.order // 2 + 1) for z in zs]
    for combo in itertools.product(*ranges):
        yield HiggsDivisor(tuple((z.label, l) for z, l in zip(zs, combo)))


def enumerate_higgs_divisors(b: BasePoint) -> list[HiggsDivisor]:
    """
    All Higgs divisors of ``b``, ordered lexicographically by the vector of
    values taken over the zero labels in sorted order.
    """
    v = validate_base_point(b)
    if v:
        raise ValueError("invalid base point: " + "; ".join(v))
    return list(iter_higgs_divisors(b))


def _n_diag(b: BasePoint, D: HiggsDivisor) -> int:
    vals = D.as_dict()
    return sum(1 for z in b.zeros if z.order % 2 == 0 and 2 * vals[z.label] == z.order)


def _check_divisor(b: BasePoint, D: HiggsDivisor) -> None:
    vals = D.as_dict()
    if set(vals) != {z.label for z in b.zeros}:
        raise ValueError("divisor labels do not match the marked zeros")
    for z in b.zeros:
        if not 0 <= vals[z.label] <= z.order // 2:
            raise ValueError(f"divisor value {vals[z.label]} at {z.label} outside [0, {z.order // 2}]")


def _torsor(b: BasePoint, side: str, prym_dim: int) -> tuple[TorsorDescriptor, int]:
    base = "π_n^*K^{−1}(D)"
    all_even = b.n_odd == 0
    if side == "sp":
        label = ("I·" if all_even else "") + base
        return TorsorDescriptor("Sp", "Prym", 1, label, prym_dim), 2 if all_even else 1
    first = ("I·" if all_even else "") + base
    label = f"{first} ⊔ N·{first} /Jac(X)[2]"
    return TorsorDescriptor("SO", "PrymDual", 2, label, prym_dim), 1


def _stratum(b: BasePoint, D: HiggsDivisor, side: str, prym_dim: int) -> StratumInfo:
    nd = _n_diag(b, D)
    r = b.n_even - nd
    rs = 2 * b.n * (b.g - 1) - D.degree - b.n_odd // 2
    s = rs - r
    dim = (2 * b.n * b.n + b.n) * (b.g - 1) - D.degree
    torsor, cover = _torsor(b, side, prym_dim)
    return StratumInfo(D, side, r, s, dim, nd, torsor, cover)


def stratum_invariants(b: BasePoint, D: HiggsDivisor, side: str) -> StratumInfo:
    """Hecke parameters ``(r, s)``, dimension and torsor data of one stratum."""
    side = _check_side(side)
    _require_theorem_hypotheses(b)
    _check_divisor(b, D)
    return _stratum(b, D, side, curve_invariants(b).prym_dim)


def stratification_table(b: BasePoint, side: str) -> list[StratumInfo]:
    """Every stratum, sorted by dimension descending (ties keep divisor order)."""
    side = _check_side(side)
    _require_theorem_hypotheses(b)
    prym = curve_invariants(b).prym_dim
    rows = [_stratum(b, D, side, prym) for D in iter_higgs_divisors(b)]
    rows.sort(key=lambda s: -s.dim)
    return rows


def component_count(b: BasePoint, side: str) -> tuple[int, int]:
    """(connected components, irreducible components) of the whole fibre."""
    side = _check_side(side)
    _require_theorem_hypotheses(b)
    irreducible = 1 if b.n_odd > 0 else 4
    if side == "sp":
        return 1, irreducible
    return 2, max(irreducible, 2)


DEGENERATION_LABELS = {1: "point", 2: "P1", 3: "P1", 4: "P(1,1,2)", 5: "P(1,1,2)"}


def first_degeneration_model(b: BasePoint) -> list[tuple[str, str]]:
    """
    Local fibre factor contributed by each zero when the fibre is a
    fibration over the smallest stratum, as ``(label, model)`` pairs.
    """
    v = validate_base_point(b)
    if v:
        raise ValueError("invalid base point: " + "; ".join(v))
    if any(z.order not in DEGENERATION_LABELS for z in b.zeros):
        raise PreconditionError("fibre model beyond the tabulated orders (1 to 5)")
    if b.n_odd == 0:
        raise PreconditionError("degeneration model requires at least one odd-order zero")
    return [(z.label, DEGENERATION_LABELS[z.order]) for z in b.zeros]


def global_fibration(b: BasePoint) -> bool | None:
    """
    True when every zero has odd order, in which case the whole fibre is a
    fibration over the bottom stratum; ``None`` otherwise (no statement).
    """
    return True if b.zeros and b.n_even == 0 else None


def duality_report(b: BasePoint) -> list[DualityRow]:
    """Compare the two sides stratum by stratum."""
    _require_theorem_hypotheses(b)
    prym = curve_invariants(b).prym_dim
    out = []
    for D in iter_higgs_divisors(b):
        sp = _stratum(b, D, "sp", prym)
        so = _stratum(b, D, "so", prym)
        hecke = (sp.r, sp.s) == (so.r, so.s)
        dual = (sp.torsor.dim == so.torsor.dim and sp.dim == so.dim
                and (sp.torsor.base_kind, so.torsor.base_kind) == ("Prym", "PrymDual"))
        out.append(DualityRow(D, sp, so, hecke, dual))
    return out
