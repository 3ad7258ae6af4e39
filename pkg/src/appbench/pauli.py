"""Pauli-string algebra on symplectic bitsets.

A :class:`PauliString` stores its X and Z parts as Python integers used as
bitsets (qubit ``k`` is bit ``k``) together with a global phase ``i**phase_exp``.
A site with both bits set is the Hermitian ``Y`` (not ``XZ``), so a Pauli
string is Hermitian exactly when ``phase_exp`` is even.

:class:`PauliSum` is a real linear combination of phase-free Pauli strings;
signs are folded into the coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

LETTERS = "IXYZ"

# letter -> (x, z)
_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


class DimensionError(ValueError):
    """Operands act on different numbers of qubits."""


class PauliDomainError(ValueError):
    """Operation is undefined for the given Pauli operator or angle."""


def _popcount(v: int) -> int:
    return v.bit_count()


def product_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    """Power of ``i`` picked up by the site-wise product of two phase-free strings."""
    ax, ay, az = x1 & ~z1, x1 & z1, z1 & ~x1
    bx, by, bz = x2 & ~z2, x2 & z2, z2 & ~x2
    plus = (ax & by) | (ay & bz) | (az & bx)
    minus = (ay & bx) | (az & by) | (ax & bz)
    return (_popcount(plus) - _popcount(minus)) % 4


def anticommutes_bits(x1: int, z1: int, x2: int, z2: int) -> bool:
    return _popcount((x1 & z2) ^ (z1 & x2)) & 1 == 1


@dataclass(frozen=True)
class PauliString:
    num_qubits: int
    x_bits: int = 0
    z_bits: int = 0
    phase_exp: int = 0

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError("num_qubits must be positive")
        mask = (1 << self.num_qubits) - 1
        if self.x_bits & ~mask or self.z_bits & ~mask or self.x_bits < 0 or self.z_bits < 0:
            raise ValueError("bitset has bits beyond num_qubits")
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    # -- construction -------------------------------------------------------

    @classmethod
    def identity(cls, num_qubits: int) -> PauliString:
        return cls(num_qubits)

    @classmethod
    def from_sites(cls, num_qubits: int, sites: Mapping[int, str], phase_exp: int = 0) -> PauliString:
        """Build from ``{qubit: letter}``; identity letters are allowed and ignored."""
        x = z = 0
        for q, letter in sites.items():
            if not 0 <= q < num_qubits:
                raise ValueError(f"qubit {q} out of range for {num_qubits} qubits")
            try:
                bx, bz = _BITS[letter]
            except KeyError:
                raise ValueError(f"invalid Pauli letter {letter!r}") from None
            x |= bx << q
            z |= bz << q
        return cls(num_qubits, x, z, phase_exp)

    @classmethod
    def from_label(cls, label: str, num_qubits: int | None = None) -> PauliString:
        """Parse ``"+XIZZY"``, ``"-iZZ"`` or a sparse form such as ``"Z62"``/``"X0 Z5"``.

        In the dense form qubit 0 is the leftmost letter.  The sparse form
        needs ``num_qubits``.
        """
        text = label.strip()
        phase = 0
        for token, exp in (("+i", 1), ("-i", 3), ("+", 0), ("-", 2), ("i", 1)):
            if text.startswith(token) and len(text) > len(token):
                phase = exp
                text = text[len(token):]
                break
        if text and all(c in LETTERS for c in text) and not any(c.isdigit() for c in text):
            n = len(text)
            if num_qubits is not None and num_qubits != n:
                raise DimensionError(f"label has {n} letters, expected {num_qubits}")
            return cls.from_sites(n, dict(enumerate(text)), phase)
        if num_qubits is None:
            raise ValueError(f"sparse Pauli label {label!r} needs num_qubits")
        sites = {}
        for token in text.replace(",", " ").split():
            letter, index = token[0], token[1:]
            if letter not in "XYZ" or not index.isdigit():
                raise ValueError(f"cannot parse Pauli token {token!r}")
            q = int(index)
            if q in sites:
                raise ValueError(f"qubit {q} appears twice in {label!r}")
            sites[q] = letter
        return cls.from_sites(num_qubits, sites, phase)

    # -- inspection ---------------------------------------------------------

    def letter(self, q: int) -> str:
        return LETTERS[_code(self.x_bits >> q & 1, self.z_bits >> q & 1)]

    def sites(self) -> dict[int, str]:
        return {q: self.letter(q) for q in self.support()}

    def support(self) -> list[int]:
        s = self.x_bits | self.z_bits
        out = []
        while s:
            low = s & -s
            out.append(low.bit_length() - 1)
            s ^= low
        return out

    @property
    def weight(self) -> int:
        return _popcount(self.x_bits | self.z_bits)

    @property
    def is_hermitian(self) -> bool:
        return self.phase_exp % 2 == 0

    @property
    def sign(self) -> int:
        if not self.is_hermitian:
            raise PauliDomainError("non-Hermitian Pauli string has no real sign")
        return 1 if self.phase_exp == 0 else -1

    def unsigned(self) -> PauliString:
        return PauliString(self.num_qubits, self.x_bits, self.z_bits, 0)

    @property
    def key(self) -> tuple[int, int]:
        return self.x_bits, self.z_bits

    def to_label(self, with_sign: bool = True) -> str:
        body = "".join(self.letter(q) for q in range(self.num_qubits))
        if not with_sign:
            return body
        return ("+", "+i", "-", "-i")[self.phase_exp] + body

    def to_sparse_label(self) -> str:
        """Signed sparse form such as ``"+Z62"`` or ``"-X0 Y3"``; parsed back by :meth:`from_label`."""
        body = " ".join(f"{c}{q}" for q, c in self.sites().items())
        return ("+", "+i", "-", "-i")[self.phase_exp] + body

    def __str__(self) -> str:
        return self.to_label()

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)

    def __neg__(self) -> PauliString:
        return PauliString(self.num_qubits, self.x_bits, self.z_bits, self.phase_exp + 2)


def _code(x: int, z: int) -> int:
    # index into LETTERS
    return (0, 1, 3, 2)[x | (z << 1)]


def _check_width(a, b):
    if a.num_qubits != b.num_qubits:
        raise DimensionError(f"qubit counts differ: {a.num_qubits} vs {b.num_qubits}")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Exact operator product ``a @ b`` including the phase."""
    _check_width(a, b)
    k = product_phase(a.x_bits, a.z_bits, b.x_bits, b.z_bits)
    return PauliString(a.num_qubits, a.x_bits ^ b.x_bits, a.z_bits ^ b.z_bits,
                       a.phase_exp + b.phase_exp + k)


def commutes(a: PauliString, b: PauliString) -> bool:
    _check_width(a, b)
    return not anticommutes_bits(a.x_bits, a.z_bits, b.x_bits, b.z_bits)


class PauliSum:
    """Real linear combination of Pauli strings, keyed by ``(x_bits, z_bits)``."""

    __slots__ = ("num_qubits", "terms")

    def __init__(self, num_qubits: int, terms: Mapping[tuple[int, int], float] | None = None):
        self.num_qubits = num_qubits
        self.terms: dict[tuple[int, int], float] = {}
        if terms:
            for key, c in terms.items():
                if c != 0.0:
                    self.terms[key] = float(c)

    @classmethod
    def from_pauli(cls, p: PauliString, coeff: float = 1.0) -> PauliSum:
        return cls.from_strings([(p, coeff)], p.num_qubits)

    @classmethod
    def from_strings(cls, items: Iterable[tuple[PauliString, float]], num_qubits: int) -> PauliSum:
        out = cls(num_qubits)
        for p, c in items:
            if p.num_qubits != num_qubits:
                raise DimensionError("term width differs from sum width")
            out.add(p.key, c * p.sign)
        return out

    def add(self, key: tuple[int, int], c: float) -> None:
        v = self.terms.get(key, 0.0) + c
        if v == 0.0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = v

    def strings(self) -> Iterator[tuple[PauliString, float]]:
        for (x, z), c in self.terms.items():
            yield PauliString(self.num_qubits, x, z), c

    def as_labels(self) -> dict[str, float]:
        return {p.to_label(with_sign=False): c for p, c in self.strings()}

    def norm_squared(self) -> float:
        return math.fsum(c * c for c in self.terms.values())

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, PauliSum) and self.num_qubits == other.num_qubits and self.terms == other.terms

    def __repr__(self) -> str:
        body = ", ".join(f"{lab}: {c:.6g}" for lab, c in sorted(self.as_labels().items()))
        return f"PauliSum({{{body}}})"

    def copy(self) -> PauliSum:
        out = PauliSum(self.num_qubits)
        out.terms = dict(self.terms)
        return out


def clifford_cos_sin(theta: float, tol: float = 1e-12) -> tuple[float, float]:
    """``(cos, sin)`` of ``theta`` with exact values at multiples of pi/2."""
    quarter = theta / (math.pi / 2)
    k = round(quarter)
    if abs(quarter - k) * (math.pi / 2) < tol:
        return ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[k % 4]
    return math.cos(theta), math.sin(theta)


def conjugate_by_rotation(obs: PauliSum, p: PauliString, theta: float) -> PauliSum:
    """Return ``exp(i theta p / 2) obs exp(-i theta p / 2)``.

    Commuting terms pass through.  An anticommuting term ``c O`` becomes
    ``c cos(theta) O + c sin(theta) (i p O)``; ``i p O`` is a signed Hermitian
    Pauli string.  Only exact zeros are dropped.
    """
    if p.num_qubits != obs.num_qubits:
        raise DimensionError(f"qubit counts differ: {p.num_qubits} vs {obs.num_qubits}")
    if not p.is_hermitian:
        raise PauliDomainError("rotation generator must be Hermitian")
    c, s = clifford_cos_sin(theta)
    px, pz = p.x_bits, p.z_bits
    base = p.phase_exp + 1
    out: dict[tuple[int, int], float] = {}
    get = out.get
    for (x, z), coeff in obs.terms.items():
        if not ((px & z) ^ (pz & x)).bit_count() & 1:
            out[(x, z)] = get((x, z), 0.0) + coeff
            continue
        if c != 0.0:
            out[(x, z)] = get((x, z), 0.0) + coeff * c
        if s != 0.0:
            k = (base + product_phase(px, pz, x, z)) % 4
            key = (x ^ px, z ^ pz)
            out[key] = get(key, 0.0) + (coeff * s if k == 0 else -coeff * s)
    res = PauliSum(obs.num_qubits)
    res.terms = {k: v for k, v in out.items() if v != 0.0}
    return res
