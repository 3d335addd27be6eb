"""Construction and validation of the six stabilizer codes under study.

Surface codes of distance 3/4/5 on rotated grids, and the self-dual CSS
family on 16 qubits: the k=6 code built from the [16,5] first-order
Reed-Muller code, gauge-fixed down to k=4 and k=2 by adjoining
self-orthogonal fixing vectors found by a deterministic search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from . import gf2
from .layouts import Layout, build_grid_layout
from .pauli import PauliString, commutes


class CodeValidationError(Exception):
    pass


@dataclass
class CodeParams:
    n: int
    k: int
    d_measured: int

    def label(self) -> str:
        return f"[[{self.n},{self.k},{self.d_measured}]]"


@dataclass
class CodeSpec:
    """Stabilizer generators, logical operators and layout binding.

    For the CSS codes used here, x_stabs are pure-X and z_stabs pure-Z;
    supports are also exposed as bitsets for the GF(2) machinery.
    """

    name: str
    n: int
    k: int
    x_stabs: List[PauliString]
    z_stabs: List[PauliString]
    logical_x: List[PauliString]
    logical_z: List[PauliString]
    layout: Optional[Layout] = None
    data_map: Dict[int, int] = field(default_factory=dict)  # code index -> layout data id

    def __post_init__(self):
        if self.layout is not None and not self.data_map:
            self.data_map = {i: self.layout.data_qubits[i] for i in range(self.n)}

    @property
    def x_supports(self) -> List[int]:
        return [p.x for p in self.x_stabs]

    @property
    def z_supports(self) -> List[int]:
        return [p.z for p in self.z_stabs]

    def stab_group(self, sector: str) -> List[int]:
        """All elements of one CSS stabilizer group as support bitsets."""
        gens = self.x_supports if sector == "X" else self.z_supports
        return list(gf2.span_iter(gf2.row_reduce(gens, self.n)[0]))


# ---------------------------------------------------------------------------
# Surface codes


def _plaquette_type(r: int, c: int) -> str:
    return "X" if (r + c) % 2 == 0 else "Z"


def surface_plaquettes(d: int) -> List[Tuple[str, Tuple[int, int], List[int]]]:
    """(type, dual position, data indices) for all stabilizers of a distance-d patch.

    Interior plaquettes are weight four; boundary half-plaquettes (top and
    bottom X-type, left and right Z-type) are weight two.
    """
    def idx(r, c):
        return d * r + c

    out = []
    for r in range(-1, d):
        for c in range(-1, d):
            qubits = [
                idx(r + dr, c + dc)
                for dr in (0, 1)
                for dc in (0, 1)
                if 0 <= r + dr < d and 0 <= c + dc < d
            ]
            if len(qubits) != (4 if 0 <= r < d - 1 and 0 <= c < d - 1 else 2):
                continue  # corners
            kind = _plaquette_type(r, c)
            interior = 0 <= r < d - 1 and 0 <= c < d - 1
            if not interior:
                top_bottom = r in (-1, d - 1)
                if top_bottom != (kind == "X"):
                    continue
            out.append((kind, (r, c), qubits))
    return out


def build_surface_code(d: int) -> CodeSpec:
    """Rotated distance-d surface code on d*d data qubits."""
    if d not in (3, 4, 5):
        raise ValueError(f"unsupported distance {d}")
    n = d * d
    x_stabs, z_stabs = [], []
    for kind, _pos, qubits in surface_plaquettes(d):
        p = PauliString.from_support(n, kind, qubits)
        (x_stabs if kind == "X" else z_stabs).append(p)
    logical_x = [PauliString.from_support(n, "X", [d * r for r in range(d)])]
    logical_z = [PauliString.from_support(n, "Z", list(range(d)))]
    return CodeSpec(
        name=f"surface-d{d}",
        n=n,
        k=1,
        x_stabs=x_stabs,
        z_stabs=z_stabs,
        logical_x=logical_x,
        logical_z=logical_z,
        layout=build_grid_layout(d),
    )


# ---------------------------------------------------------------------------
# Reed-Muller family on 16 qubits


def rm14_basis() -> List[int]:
    """Basis of the [16,5,8] first-order Reed-Muller code as bitsets."""
    n = 16
    ones = (1 << n) - 1
    coords = []
    for bit in range(4):
        v = 0
        for j in range(n):
            if (j >> bit) & 1:
                v |= 1 << j
        coords.append(v)
    return [ones] + coords


def _min_weight_basis(gens: Sequence[int], n: int) -> List[int]:
    """Greedy minimum-weight, lexicographically-least generating set of a span."""
    basis, _ = gf2.row_reduce(list(gens), n)
    words = sorted(gf2.span_iter(basis), key=lambda v: (v.bit_count(), v))
    chosen: List[int] = []
    for w in words:
        if w == 0:
            continue
        if not gf2.in_span(chosen, n, w):
            chosen.append(w)
        if len(chosen) == len(basis):
            break
    return chosen


def _css_distance_sector(stab_supports: List[int], other_supports: List[int], n: int) -> int:
    """Min weight of an error commuting with `other` checks but outside the span."""
    null_basis = gf2.nullspace(other_supports, n)
    best = n + 1
    for v in gf2.span_iter(null_basis):
        if v == 0:
            continue
        w = v.bit_count()
        if w < best and not gf2.in_span(list(stab_supports), n, v):
            best = w
    return best


def css_quantum_distance(x_supports: List[int], z_supports: List[int], n: int) -> int:
    dx = _css_distance_sector(x_supports, z_supports, n)  # undetected X errors
    dz = _css_distance_sector(z_supports, x_supports, n)
    return min(dx, dz)


def css_logicals(x_supports: List[int], z_supports: List[int], n: int) -> Tuple[List[int], List[int]]:
    """Paired logical X/Z representatives, minimum weight with lexicographic ties."""
    kx = n - len(gf2.row_reduce(x_supports, n)[0]) - len(gf2.row_reduce(z_supports, n)[0])
    lx: List[int] = []
    for v in gf2.nullspace(z_supports, n):
        if not gf2.in_span(x_supports + lx, n, v):
            lx.append(v)
    lz: List[int] = []
    for v in gf2.nullspace(x_supports, n):
        if not gf2.in_span(z_supports + lz, n, v):
            lz.append(v)
    if len(lx) != kx or len(lz) != kx:
        raise CodeValidationError("logical space dimension mismatch")
    # Re-pair so that lx[i] anticommutes with lz[i] only: solve the GF(2)
    # pairing system for each unit vector and combine the Z candidates.
    pairing = gf2.BinaryMatrix.from_rows(
        kx, [sum(gf2.dot_bits(lx[r], lz[j]) << j for j in range(kx)) for r in range(kx)]
    )
    paired_z: List[int] = []
    for i in range(kx):
        sol = gf2.rank_and_solve(pairing, 1 << i)
        if sol is None:
            raise CodeValidationError("logical pairing is singular")
        v = 0
        for j in range(kx):
            if (sol >> j) & 1:
                v ^= lz[j]
        paired_z.append(v)
    # Reduce every representative to its minimum-weight coset element.
    x_group = list(gf2.span_iter(gf2.row_reduce(x_supports, n)[0]))
    z_group = list(gf2.span_iter(gf2.row_reduce(z_supports, n)[0]))
    lx = [min((v ^ s for s in x_group), key=lambda w: (w.bit_count(), w)) for v in lx]
    paired_z = [min((v ^ s for s in z_group), key=lambda w: (w.bit_count(), w)) for v in paired_z]
    return lx, paired_z


def build_css_code(name: str, n: int, x_supports: List[int], z_supports: List[int],
                   layout: Optional[Layout] = None) -> CodeSpec:
    """Assemble a CodeSpec from CSS check supports, deriving logical operators."""
    lx, lz = css_logicals(x_supports, z_supports, n)
    k = len(lx)
    return CodeSpec(
        name=name,
        n=n,
        k=k,
        x_stabs=[PauliString(n, x=v) for v in x_supports],
        z_stabs=[PauliString(n, z=v) for v in z_supports],
        logical_x=[PauliString(n, x=v) for v in lx],
        logical_z=[PauliString(n, z=v) for v in lz],
        layout=layout,
    )


def find_fixing_vectors(count: int, base: Optional[List[int]] = None) -> List[int]:
    """Deterministic search for self-orthogonal gauge-fixing vectors.

    Candidates are even-weight vectors orthogonal to the current classical
    code (and to each other), taken outside the current span, keeping the
    resulting quantum distance at 4.  Ties break by lowest weight, then by
    lexicographic (integer) order.
    """
    n = 16
    code = list(base) if base is not None else rm14_basis()
    chosen: List[int] = []
    for _ in range(count):
        found = None
        for weight in range(4, n + 1, 2):
            for support in combinations(range(n), weight):
                v = 0
                for q in support:
                    v |= 1 << q
                if any(gf2.dot_bits(v, g) for g in code):
                    continue
                if gf2.in_span(code, n, v):
                    continue
                trial = code + [v]
                if css_quantum_distance(trial, trial, n) == 4:
                    found = v
                    break
            if found is not None:
                break
        if found is None:
            raise CodeValidationError("no valid fixing vector remains")
        code.append(found)
        chosen.append(found)
    return chosen


def build_rm16_code(k: int, fixing_vectors: Optional[Sequence[int]] = None,
                    layout: Optional[Layout] = None) -> CodeSpec:
    """[[16,k,4]] self-dual CSS code for k in {2,4,6}.

    k=6 uses the first-order Reed-Muller classical code directly; k=4 and
    k=2 adjoin one and two fixing vectors.  Omitted vectors are found by
    find_fixing_vectors; supplied ones are checked for self-orthogonality,
    commutation and distance.
    """
    if k not in (2, 4, 6):
        raise ValueError(f"unsupported k {k}")
    need = (6 - k) // 2
    if fixing_vectors is None:
        fixing_vectors = find_fixing_vectors(need) if need else []
    if len(fixing_vectors) != need:
        raise ValueError(f"k={k} needs exactly {need} fixing vectors")
    code = rm14_basis()
    for v in fixing_vectors:
        if v.bit_count() % 2:
            raise CodeValidationError(f"fixing vector {v:#06x} is not self-orthogonal")
        if any(gf2.dot_bits(v, g) for g in code):
            raise CodeValidationError(f"fixing vector {v:#06x} breaks commutation")
        if gf2.in_span(code, 16, v):
            raise CodeValidationError(f"fixing vector {v:#06x} is already a stabilizer")
        code.append(v)
    if css_quantum_distance(code, code, 16) != 4:
        raise CodeValidationError("fixing vectors lower the distance below 4")
    supports = _min_weight_basis(code, 16)
    if layout is None:
        layout = build_grid_layout(4)
        layout.name = "grid25"
    spec = build_css_code(f"rm16-k{k}", 16, list(supports), list(supports), layout)
    if spec.k != k:
        raise CodeValidationError(f"construction yielded k={spec.k}, expected {k}")
    return spec


def shorten_classical(rows: List[int], n: int, coord: int) -> List[int]:
    """Shorten a classical code at one coordinate (keep words with 0 there, drop it)."""
    reduced, pivots = gf2.row_reduce(list(rows), n)
    # Eliminate the coordinate: combine rows so at most one hits it, drop that row.
    hit = [r for r in reduced if (r >> coord) & 1]
    keep = [r for r in reduced if not (r >> coord) & 1]
    if hit:
        keep += [r ^ hit[0] for r in hit[1:]]
    out = []
    low_mask = (1 << coord) - 1
    for r in keep:
        out.append((r & low_mask) | ((r >> (coord + 1)) << coord))
    return out


def punctured_hamming_code(coord: int = 0) -> CodeSpec:
    """The [[15,7,3]] CSS structure obtained by puncturing the k=6 code."""
    shortened = shorten_classical(rm14_basis(), 16, coord)
    return build_css_code(f"hamming15-p{coord}", 15, shortened, list(shortened))


# ---------------------------------------------------------------------------
# Validation


def validate_code(code: CodeSpec) -> CodeParams:
    """Check all commutation invariants and measure the distance exactly.

    Distance is the minimum weight over the normalizer minus the stabilizer
    group, computed per CSS sector by enumerating the dual code.
    """
    n = code.n
    for i, a in enumerate(code.x_stabs + code.z_stabs):
        for b in (code.x_stabs + code.z_stabs)[i + 1:]:
            if not commutes(a, b):
                raise CodeValidationError(f"stabilizers do not commute: {a} vs {b}")
    for log in code.logical_x + code.logical_z:
        for s in code.x_stabs + code.z_stabs:
            if not commutes(log, s):
                raise CodeValidationError(f"logical {log} anticommutes with stabilizer {s}")
    for i, lx in enumerate(code.logical_x):
        for j, lz in enumerate(code.logical_z):
            want = i != j
            if commutes(lx, lz) != want:
                raise CodeValidationError(f"logical pairing broken at ({i},{j})")
    symplectic_rows = [p.x | (p.z << n) for p in code.x_stabs + code.z_stabs]
    n_stabs = len(gf2.row_reduce(symplectic_rows, 2 * n)[0])
    if len(code.x_stabs) + len(code.z_stabs) != n - code.k or n_stabs != n - code.k:
        raise CodeValidationError("generator count does not match n - k")

    d = css_quantum_distance(code.x_supports, code.z_supports, n)
    for log in code.logical_x:
        if log.weight() < d:
            raise CodeValidationError(f"logical {log} below measured distance {d}")
    for log in code.logical_z:
        if log.weight() < d:
            raise CodeValidationError(f"logical {log} below measured distance {d}")
    return CodeParams(n=n, k=code.k, d_measured=d)


# ---------------------------------------------------------------------------
# File format


def _bits_to_string(v: int, n: int) -> str:
    return "".join("1" if (v >> i) & 1 else "0" for i in range(n))


def _string_to_bits(s: str) -> int:
    v = 0
    for i, ch in enumerate(s):
        if ch == "1":
            v |= 1 << i
    return v


def save_code(code: CodeSpec, path: str, d: Optional[int] = None) -> None:
    if d is None:
        d = validate_code(code).d_measured
    lines = [f"psqec-code v1 {code.name}", f"[[{code.n},{code.k},{d}]]"]
    for p in code.x_stabs:
        lines.append(f"X {_bits_to_string(p.x, code.n)}")
    for p in code.z_stabs:
        lines.append(f"Z {_bits_to_string(p.z, code.n)}")
    for p in code.logical_x:
        lines.append(f"LX {_bits_to_string(p.x, code.n)}")
    for p in code.logical_z:
        lines.append(f"LZ {_bits_to_string(p.z, code.n)}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_code(path: str, layout: Optional[Layout] = None) -> CodeSpec:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    head = lines[0].split()
    if head[:2] != ["psqec-code", "v1"]:
        raise ValueError(f"unrecognized code header: {lines[0]!r}")
    name = head[2] if len(head) > 2 else "code"
    params = lines[1].strip("[]").split(",")
    n, k = int(params[0]), int(params[1])
    xs, zs, lxs, lzs = [], [], [], []
    for ln in lines[2:]:
        tag, bits = ln.split()
        v = _string_to_bits(bits)
        if tag == "X":
            xs.append(PauliString(n, x=v))
        elif tag == "Z":
            zs.append(PauliString(n, z=v))
        elif tag == "LX":
            lxs.append(PauliString(n, x=v))
        elif tag == "LZ":
            lzs.append(PauliString(n, z=v))
        else:
            raise ValueError(f"bad code line: {ln!r}")
    return CodeSpec(name=name, n=n, k=k, x_stabs=xs, z_stabs=zs,
                    logical_x=lxs, logical_z=lzs, layout=layout)
