"""Sign-free n-qubit Pauli algebra on bit-packed X/Z words.

Phases are dropped throughout: postselection and correction logic depend
only on error supports.  Qubit i maps to bit i; n is capped at 64 so one
python int (or uint64 in the kernels) holds each component.
"""

from __future__ import annotations

from dataclasses import dataclass

_LABELS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {v: k for k, v in _LABELS.items()}


@dataclass(frozen=True)
class PauliString:
    """Pauli operator on n qubits as paired X/Z bit-vectors."""

    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if not 0 < self.n <= 64:
            raise ValueError(f"qubit count must be in 1..64, got {self.n}")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("bit-vector extends past qubit count")

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse a string over I/X/Y/Z, qubit 0 leftmost."""
        x = z = 0
        for i, ch in enumerate(label.strip().upper()):
            try:
                xb, zb = _BITS[ch]
            except KeyError:
                raise ValueError(f"bad Pauli letter {ch!r}") from None
            x |= xb << i
            z |= zb << i
        return cls(len(label), x, z)

    @classmethod
    def from_support(cls, n: int, kind: str, support) -> "PauliString":
        """Uniform X, Y or Z on the given qubit indices."""
        bits = 0
        for q in support:
            bits |= 1 << q
        xb, zb = _BITS[kind.upper()]
        return cls(n, bits if xb else 0, bits if zb else 0)

    def label(self) -> str:
        return "".join(
            _LABELS[((self.x >> i) & 1, (self.z >> i) & 1)] for i in range(self.n)
        )

    def weight(self) -> int:
        return ((self.x | self.z)).bit_count()

    def x_weight(self) -> int:
        return self.x.bit_count()

    def z_weight(self) -> int:
        return self.z.bit_count()

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return PauliString(self.n, self.x ^ other.x, self.z ^ other.z)

    def __str__(self) -> str:
        return self.label()


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the symplectic product a.x*b.z + a.z*b.x vanishes mod 2."""
    if a.n != b.n:
        raise ValueError("length mismatch")
    return (((a.x & b.z).bit_count() + (a.z & b.x).bit_count()) & 1) == 0


def propagate_through_cnot(p: PauliString, control: int, target: int) -> PauliString:
    """Conjugate a Pauli by CNOT: X on control spreads to target, Z on target to control."""
    n = p.n
    if control == target:
        raise ValueError("control equals target")
    if not (0 <= control < n and 0 <= target < n):
        raise ValueError("index out of range")
    x, z = p.x, p.z
    if (x >> control) & 1:
        x ^= 1 << target
    if (z >> target) & 1:
        z ^= 1 << control
    return PauliString(n, x, z)


def cnot_frame(x: int, z: int, control: int, target: int) -> tuple[int, int]:
    """Raw-word version of propagate_through_cnot for frame updates."""
    if (x >> control) & 1:
        x ^= 1 << target
    if (z >> target) & 1:
        z ^= 1 << control
    return x, z
