from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from mpmath import mp, mpf


def format_real(value: mpf | None, digits: int) -> str:
    """
    Exactly `digits` significant digits, trailing zeros kept (empty for missing values).

    Certified results are printed at their full length so golden files compare
    digit for digit.
    """
    if value is None:
        return ""
    return mp.nstr(value, max(digits, 1), strip_zeros=False)


def format_coordinate(value: mpf) -> str:
    """Shortest rendering of an input coordinate such as k (up to 15 digits)."""
    return mp.nstr(value, 15)


class Method(str, Enum):
    RPM = "rpm"
    RR = "rr"
    EXACT = "exact"


@dataclass
class EnergyResult:
    """A computed eigenvalue with the digits its convergence history certifies."""
    value: mpf
    certified_digits: int
    method: Method
    orders_used: list[tuple[int, mpf]] = field(default_factory=list)
    lam: mpf | None = None

    def to_record(self) -> dict[str, Any]:
        return {
            "value": format_real(self.value, self.certified_digits),
            "certified_digits": self.certified_digits,
            "method": self.method.value,
            "lambda": format_real(self.lam, self.certified_digits),
            "orders_used": [order for order, _ in self.orders_used],
        }


@dataclass
class Table1Row:
    k: mpf
    E0: mpf | None
    certified_digits: int
    method: Method = Method.RPM
    status: str = "ok"
    error: str | None = None

    def to_record(self) -> dict[str, Any]:
        record = {
            "k": format_coordinate(self.k),
            "E0": format_real(self.E0, self.certified_digits),
            "certified_digits": self.certified_digits,
        }
        if self.status != "ok":
            record["status"] = self.status
            record["error"] = self.error
        return record


@dataclass
class CurveSample:
    k: mpf
    E0: mpf | None
    digits: int
    status: str = "ok"
    error: str | None = None

    def to_record(self) -> dict[str, Any]:
        record = {"k": format_coordinate(self.k), "E0": format_real(self.E0, self.digits)}
        if self.status != "ok":
            record["status"] = self.status
            record["error"] = self.error
        return record


@dataclass
class CompareRow:
    """RPM against Rayleigh-Ritz for one spring constant."""
    k: mpf
    rpm: mpf
    rr: mpf
    agree_digits: int
    upper_bound: bool
    published_digits: int | None
    digits: int

    def to_record(self) -> dict[str, Any]:
        return {
            "k": format_coordinate(self.k),
            "E0_rpm": format_real(self.rpm, self.digits),
            "E0_rr": format_real(self.rr, self.digits),
            "agree_digits": self.agree_digits,
            "upper_bound": self.upper_bound,
            "published_digits": "" if self.published_digits is None else self.published_digits,
        }


@dataclass
class SpectrumRow:
    j: int
    n: int
    eps: mpf
    energy: mpf | None
    digits: int

    def to_record(self) -> dict[str, Any]:
        record = {"j": self.j, "n": self.n, "eps": format_real(self.eps, self.digits)}
        if self.energy is not None:
            record["E"] = format_real(self.energy, self.digits)
        return record


@dataclass
class LevelRow:
    """One Rayleigh-Ritz relative s-level and its harmonium energy."""
    index: int
    eps: mpf
    energy: mpf
    digits: int

    def to_record(self) -> dict[str, Any]:
        return {
            "i": self.index,
            "eps": format_real(self.eps, self.digits),
            "E": format_real(self.energy, self.digits),
        }


@dataclass
class VariationalSummary:
    alpha: mpf
    beta: mpf
    W: mpf
    abs_error: mpf
    digits: int

    def to_record(self) -> dict[str, Any]:
        # Errors below the printed resolution are reported as exact zeros
        error = mp.zero if self.abs_error < mp.mpf(10) ** (-self.digits) else self.abs_error
        return {
            "alpha_opt": format_real(self.alpha, self.digits),
            "beta_opt": format_real(self.beta, self.digits),
            "W_opt": format_real(self.W, self.digits),
            "abs_error": format_real(error, 5),
        }
