"""The t-derangement graph and its ratio-bound certificate.

A certificate at ``(n, t)`` is a weighting of the fat associates (minus the
hook ``(n-t, 1^t)``) whose eigenvalues are 1 on the trivial eigenspace and
``ζ`` on the other weighted fat eigenspaces. When ``ζ`` is also the minimum
over every eigenspace, the ratio bound gives ``|F| <= (2(n-t)-1)!!``.
Everything is exact.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .matchings import sphere_size
from .partitions import (
    Partition,
    as_partition,
    check_t_range,
    derangement_count,
    double_factorial,
    enumerate_partitions,
    fat_partitions,
    hook_partition,
    odd_falling,
)
from .symfunc import RationalMatrix, format_rational
from .scheme import p_table


@dataclass(frozen=True)
class DerangementGraph:
    """``Γ_t``: matchings adjacent when they share fewer than ``t`` edges."""

    n: int
    t: int
    edge_labels: frozenset
    valency_sum: int

    @classmethod
    def build(cls, n: int, t: int) -> "DerangementGraph":
        if n < 1 or t < 1:
            raise ValueError("need n >= 1 and t >= 1")
        labels = frozenset(p for p in enumerate_partitions(n) if p.unit_parts() < t)
        return cls(n, t, labels, sum(sphere_size(p, n) for p in labels))

    def adjacent_labels(self) -> list[Partition]:
        return [p for p in enumerate_partitions(self.n) if p in self.edge_labels]


def zeta(n: int, t: int) -> Fraction:
    if t < 1:
        raise ValueError("t must be at least 1")
    denom = odd_falling(n, t) - 1
    if denom <= 0:
        raise ValueError(f"ζ undefined at n={n}, t={t}: ((2n-1))_t - 1 = {denom}")
    return Fraction(-1, denom)


def weight_labels(n: int, t: int) -> tuple[Partition, ...]:
    """Fat partitions with the hook ``(n-t, 1^t)`` removed."""
    return fat_partitions(n, t)[:-1]


def solve_weights(n: int, t: int) -> dict[Partition, Fraction]:
    check_t_range(n, t)
    labels = weight_labels(n, t)
    table = p_table(n)
    minor = table.submatrix(labels, labels)
    z = zeta(n, t)
    rhs = [Fraction(1)] + [z] * (len(labels) - 1)
    try:
        x = minor.solve(rhs)
    except ZeroDivisionError as exc:
        raise ArithmeticError(f"fat minor is singular at n={n}, t={t}") from exc
    return dict(zip(labels, x))


def eigen_table(weights: Mapping, n: int, table: RationalMatrix | None = None) -> dict[Partition, Fraction]:
    table = table or p_table(n)
    weights = {as_partition(k): Fraction(v) for k, v in weights.items()}
    return {
        lam: sum((x * table[lam, j] for j, x in weights.items()), Fraction(0))
        for lam in table.row_labels
    }


def _rational_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Certificate:
    n: int
    t: int
    zeta: Fraction
    weights: dict
    eigenvalues: dict
    fattest_eig: Fraction
    min_eig: Fraction
    minimizers: tuple
    min_is_zeta: bool
    hoffman_value: Fraction
    valid: bool

    @property
    def bound(self) -> int:
        return double_factorial(2 * (self.n - self.t) - 1)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "zeta": _rational_str(self.zeta),
            "weights": {str(k): _rational_str(v) for k, v in self.weights.items()},
            "eigenvalues": {str(k): _rational_str(v) for k, v in self.eigenvalues.items()},
            "fattestEig": _rational_str(self.fattest_eig),
            "minEig": _rational_str(self.min_eig),
            "minimizers": [str(p) for p in self.minimizers],
            "minIsZeta": self.min_is_zeta,
            "hoffmanValue": _rational_str(self.hoffman_value),
            "valid": self.valid,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Certificate":
        part = Partition.parse
        return cls(
            n=doc["n"],
            t=doc["t"],
            zeta=Fraction(doc["zeta"]),
            weights={part(k): Fraction(v) for k, v in doc["weights"].items()},
            eigenvalues={part(k): Fraction(v) for k, v in doc["eigenvalues"].items()},
            fattest_eig=Fraction(doc["fattestEig"]),
            min_eig=Fraction(doc["minEig"]),
            minimizers=tuple(part(p) for p in doc["minimizers"]),
            min_is_zeta=doc["minIsZeta"],
            hoffman_value=Fraction(doc["hoffmanValue"]),
            valid=doc["valid"],
        )

    def pretty(self) -> str:
        lines = [f"n={self.n} t={self.t} zeta={format_rational(self.zeta)}"]
        lines.append("weights:")
        for k, v in self.weights.items():
            lines.append(f"  {k.pretty():<14} {format_rational(v)}")
        lines.append("eigenvalues:")
        fat = set(fat_partitions(self.n, self.t))
        for k, v in self.eigenvalues.items():
            tag = "fat" if k in fat else ""
            mark = "min" if k in self.minimizers else ""
            lines.append(f"  {k.pretty():<14} {format_rational(v):<24} {tag:<4} {mark}".rstrip())
        lines.append(f"fattest eigenvalue: {format_rational(self.fattest_eig)}")
        lines.append(f"ratio bound: {format_rational(self.hoffman_value)}")
        verdict = f"VALID: bound {self.bound}" if self.valid else "INVALID: minimum eigenvalue is not zeta on fat labels only"
        lines.append(verdict)
        return "\n".join(lines)


def hoffman_value(n: int, z: Fraction) -> Fraction:
    return double_factorial(2 * n - 1) * (-z) / (1 - z)


def certify(n: int, t: int) -> Certificate:
    check_t_range(n, t)
    table = p_table(n)
    z = zeta(n, t)
    weights = solve_weights(n, t)
    eigs = eigen_table(weights, n, table)
    fat = fat_partitions(n, t)
    fattest = eigs[hook_partition(n, t)]
    low = min(eigs.values())
    minimizers = tuple(lam for lam, v in eigs.items() if v == low)
    min_is_zeta = low == z
    fat_ok = all(eigs[lam] == z for lam in fat[1:])
    valid = min_is_zeta and fattest == z and fat_ok and all(m in fat for m in minimizers)
    return Certificate(
        n=n,
        t=t,
        zeta=z,
        weights=weights,
        eigenvalues=eigs,
        fattest_eig=fattest,
        min_eig=low,
        minimizers=minimizers,
        min_is_zeta=min_is_zeta,
        hoffman_value=hoffman_value(n, z),
        valid=valid,
    )


def nonfat_ratio_squared(cert: Certificate) -> Fraction:
    """``max over non-fat ρ of (|η_ρ|·√n/|ζ|)^2``, kept exact by squaring."""
    fat = set(fat_partitions(cert.n, cert.t))
    worst = max((v * v for lam, v in cert.eigenvalues.items() if lam not in fat), default=Fraction(0))
    return worst * cert.n / (cert.zeta * cert.zeta)


@dataclass(frozen=True)
class ScanRow:
    n: int
    valid: bool
    min_eig: Fraction
    minimizers: tuple
    fattest_is_zeta: bool


@dataclass(frozen=True)
class ScanResult:
    t: int
    rows: tuple[ScanRow, ...]

    @property
    def onset(self) -> int | None:
        """Smallest scanned n from which every later scanned n is valid."""
        start = None
        for row in self.rows:
            if row.valid:
                start = row.n if start is None else start
            else:
                start = None
        return start

    def to_csv(self) -> str:
        out = ["n,t,valid,min_eig,minimizers,fattest_is_zeta"]
        for r in self.rows:
            mins = ";".join(str(p) for p in r.minimizers)
            out.append(f'{r.n},{self.t},{str(r.valid).lower()},{_rational_str(r.min_eig)},"{mins}",{str(r.fattest_is_zeta).lower()}')
        return "\n".join(out) + "\n"


def threshold_scan(t: int, n_range: Iterable[int], workers: int = 1) -> ScanResult:
    ns = list(n_range)
    for n in ns:
        check_t_range(n, t)

    def one(n: int) -> ScanRow:
        c = certify(n, t)
        return ScanRow(n, c.valid, c.min_eig, c.minimizers, c.fattest_eig == c.zeta)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(one, ns))
    else:
        rows = [one(n) for n in ns]
    return ScanResult(t, tuple(rows))


INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class CrossRatio:
    applicable: bool
    value: Fraction | None = None
    reason: str = ""

    @property
    def product_bound(self) -> Fraction | None:
        return None if self.value is None else self.value**2

    def __str__(self) -> str:
        return format_rational(self.value) if self.applicable else INAPPLICABLE


def cross_ratio_value(n: int, t: int, cert: Certificate | None = None) -> CrossRatio:
    """``(2n-1)!!·|ζ|/(1+|ζ|)`` when the certificate is valid and ``|ζ|``
    dominates every non-trivial eigenvalue in absolute value."""
    cert = cert or certify(n, t)
    if not cert.valid:
        return CrossRatio(False, reason="certificate invalid")
    trivial = Partition((n,))
    a = abs(cert.zeta)
    worst = max(abs(v) for lam, v in cert.eigenvalues.items() if lam != trivial)
    if worst > a:
        return CrossRatio(False, reason=f"a non-trivial eigenvalue has modulus {worst} > |zeta|")
    return CrossRatio(True, double_factorial(2 * n - 1) * a / (1 + a))


def derangement_graph_check(n: int, t: int) -> bool:
    """The weighted labels sit on Γ_t edges and the valency sum is ``D_2(n,t)``."""
    g = DerangementGraph.build(n, t)
    return g.valency_sum == derangement_count(n, t) and all(
        lam in g.edge_labels for lam in solve_weights(n, t)
    )
