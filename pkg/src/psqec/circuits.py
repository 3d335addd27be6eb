"""Stabilizer measurement circuits: IR, fault enumeration, verification, search.

A circuit measures one X- or Z-type stabilizer with a syndrome ancilla
plus flag ancillas.  Flags double as mediators: a flag is entangled with
its parent (opened), may run CNOTs onto part of the support, then is
disentangled (closed) and measured in the opposite basis, so a mid-window
fault on it both spreads and raises the flag.  Everything downstream
(tables, verification, search) works from exhaustive fault propagation,
which is linear over GF(2), so two-fault outcomes compose by XOR.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .layouts import Layout, is_adjacent

Gate = Tuple  # ("PX",q) ("PZ",q) ("CX",c,t) ("MX",q) ("MZ",q), global qubit ids


class CircuitError(Exception):
    pass


class CircuitNotFT(Exception):
    """Raised when no consistent flag table exists for a circuit."""


class MissingFlagPattern(Exception):
    """Raised when a table lacks an entry for a reachable flag set."""


@dataclass
class MeasCircuit:
    """Timed gate list measuring one stabilizer.

    support lists the stabilizer's data qubits in order (position i prints
    as d{i+1}); ancillas print as a{w+1}.. in listed order.  rounds hold
    parallel gate sets; gates within a round touch disjoint qubits.
    """

    name: str
    basis: str  # "X" or "Z"
    support: Tuple[int, ...]
    ancillas: Tuple[int, ...]
    syndrome: int
    rounds: List[List[Gate]]

    @property
    def weight(self) -> int:
        return len(self.support)

    @property
    def flags(self) -> Tuple[int, ...]:
        return tuple(a for a in self.ancillas if a != self.syndrome)

    @property
    def qubits(self) -> Tuple[int, ...]:
        return self.support + self.ancillas

    @property
    def cnot_depth(self) -> int:
        return sum(1 for rnd in self.rounds if any(g[0] == "CX" for g in rnd))

    def local_index(self) -> Dict[int, int]:
        return {q: i for i, q in enumerate(self.qubits)}

    def print_name(self, q: int) -> str:
        if q in self.support:
            return f"d{self.support.index(q) + 1}"
        return f"a{self.weight + 1 + self.ancillas.index(q)}"

    def flag_print_id(self, q: int) -> int:
        return self.weight + 1 + self.ancillas.index(q)


@dataclass(frozen=True)
class FaultEvent:
    """One elementary fault: a Pauli after a gate, or an outcome flip."""

    round_idx: int
    gate_idx: int
    kind: str        # "pauli" or "flip"
    x: int = 0       # local-space words for pauli faults
    z: int = 0
    qubit: int = -1  # measured qubit for flips


@dataclass(frozen=True)
class FaultOutcome:
    faults: Tuple[FaultEvent, ...]
    x_res: int  # residual on data, bit i = support position i
    z_res: int
    flags: FrozenSet[int]  # raised flag ancillas (global ids)
    synflip: bool


# ---------------------------------------------------------------------------
# Structural validation


def validate_circuit(c: MeasCircuit, layout: Optional[Layout] = None) -> None:
    if c.basis not in ("X", "Z"):
        raise CircuitError(f"bad basis {c.basis!r}")
    if c.syndrome not in c.ancillas:
        raise CircuitError("syndrome is not a listed ancilla")
    seen_prep: Set[int] = set()
    measured: Set[int] = set()
    last_use: Dict[int, Tuple[int, int]] = {}
    for r, rnd in enumerate(c.rounds):
        busy: Set[int] = set()
        for g in rnd:
            qs = g[1:] if g[0] == "CX" else (g[1],)
            for q in qs:
                if q in busy:
                    raise CircuitError(f"round {r} reuses qubit {q}")
                busy.add(q)
                if q in measured:
                    raise CircuitError(f"qubit {q} used after measurement")
            if g[0] in ("PX", "PZ"):
                if g[1] in c.support:
                    raise CircuitError("data qubit prepared")
                seen_prep.add(g[1])
            elif g[0] == "CX":
                ctl, tgt = g[1], g[2]
                for q in (ctl, tgt):
                    if q in c.ancillas and q not in seen_prep:
                        raise CircuitError(f"ancilla {q} used before preparation")
                if layout is not None and not is_adjacent(layout, ctl, tgt):
                    raise CircuitError(f"CNOT {ctl}->{tgt} not layout-adjacent")
                if c.basis == "X" and ctl in c.support:
                    raise CircuitError("data qubit used as control in X circuit")
                if c.basis == "Z" and tgt in c.support:
                    raise CircuitError("data qubit used as target in Z circuit")
            elif g[0] in ("MX", "MZ"):
                if g[1] in c.support:
                    raise CircuitError("data qubit measured")
                measured.add(g[1])
                syn_basis = "MX" if c.basis == "X" else "MZ"
                if (g[0] == syn_basis) != (g[1] == c.syndrome):
                    raise CircuitError(f"measurement basis of {g[1]} conflicts with role")
            else:
                raise CircuitError(f"unknown gate {g!r}")
            for q in qs:
                last_use[q] = (r, 0)
    missing = set(c.ancillas) - measured
    if missing:
        raise CircuitError(f"ancillas never measured: {sorted(missing)}")
    _check_ideal_semantics(c)


def _conjugate_back(c: MeasCircuit, x: int, z: int) -> Tuple[int, int]:
    """Pull a final Pauli back to circuit start (CNOT is self-inverse)."""
    idx = c.local_index()
    for rnd in reversed(c.rounds):
        for g in rnd:
            if g[0] == "CX":
                ctl, tgt = idx[g[1]], idx[g[2]]
                if (x >> ctl) & 1:
                    x ^= 1 << tgt
                if (z >> tgt) & 1:
                    z ^= 1 << ctl
    return x, z


def _prep_stab_membership(c: MeasCircuit, x: int, z: int, allow_data: int = 0) -> bool:
    """Is the initial-time Pauli a product of preparation stabilizers?

    |+> ancillas contribute X factors, |0> ancillas Z factors; any other
    component (and any data support beyond allow_data) fails.
    """
    idx = c.local_index()
    prep_x = prep_z = 0
    for rnd in c.rounds:
        for g in rnd:
            if g[0] == "PX":
                prep_x |= 1 << idx[g[1]]
            elif g[0] == "PZ":
                prep_z |= 1 << idx[g[1]]
    data_mask = (1 << c.weight) - 1
    if (x & data_mask) != (allow_data if c.basis == "X" else 0):
        return False
    if (z & data_mask) != (allow_data if c.basis == "Z" else 0):
        return False
    return (x & ~data_mask & ~prep_x) == 0 and (z & ~data_mask & ~prep_z) == 0


def _check_ideal_semantics(c: MeasCircuit) -> None:
    """Fault-free run must measure exactly the declared stabilizer.

    The syndrome observable pulled back to circuit start must be the
    stabilizer times preparation stabilizers; every flag observable must
    pull back to preparation stabilizers alone (deterministic outcome).
    """
    idx = c.local_index()
    data_mask = (1 << c.weight) - 1
    s = 1 << idx[c.syndrome]
    if c.basis == "X":
        x0, z0 = _conjugate_back(c, s, 0)
    else:
        x0, z0 = _conjugate_back(c, 0, s)
    if not _prep_stab_membership(c, x0, z0, allow_data=data_mask):
        raise CircuitError("circuit does not measure the declared stabilizer")
    for f in c.flags:
        fb = 1 << idx[f]
        if c.basis == "X":
            x0, z0 = _conjugate_back(c, 0, fb)  # flags are MZ in X circuits
        else:
            x0, z0 = _conjugate_back(c, fb, 0)
        if not _prep_stab_membership(c, x0, z0):
            raise CircuitError(f"flag {f} has a data-dependent or random outcome")


# ---------------------------------------------------------------------------
# Fault enumeration

_TWO_QUBIT_PAULIS = [
    (xc, zc, xt, zt)
    for xc in (0, 1) for zc in (0, 1) for xt in (0, 1) for zt in (0, 1)
    if (xc, zc, xt, zt) != (0, 0, 0, 0)
]


def fault_events(c: MeasCircuit) -> List[FaultEvent]:
    """All elementary fault events of the section-IV noise model."""
    idx = c.local_index()
    events: List[FaultEvent] = []
    for r, rnd in enumerate(c.rounds):
        for gi, g in enumerate(rnd):
            if g[0] == "PX":
                events.append(FaultEvent(r, gi, "pauli", 0, 1 << idx[g[1]]))
            elif g[0] == "PZ":
                events.append(FaultEvent(r, gi, "pauli", 1 << idx[g[1]], 0))
            elif g[0] == "CX":
                ctl, tgt = idx[g[1]], idx[g[2]]
                for xc, zc, xt, zt in _TWO_QUBIT_PAULIS:
                    events.append(FaultEvent(
                        r, gi, "pauli",
                        (xc << ctl) | (xt << tgt),
                        (zc << ctl) | (zt << tgt),
                    ))
            else:
                events.append(FaultEvent(r, gi, "flip", qubit=g[1]))
    return events


def propagate_fault(c: MeasCircuit, ev: FaultEvent) -> FaultOutcome:
    """Forward-propagate one fault event to circuit end and read outcomes."""
    idx = c.local_index()
    x = ev.x
    z = ev.z
    flags: Set[int] = set()
    synflip = False
    for r in range(len(c.rounds)):
        for gi, g in enumerate(c.rounds[r]):
            live = r > ev.round_idx or (r == ev.round_idx and gi > ev.gate_idx)
            if g[0] == "CX" and live:
                ctl, tgt = idx[g[1]], idx[g[2]]
                if (x >> ctl) & 1:
                    x ^= 1 << tgt
                if (z >> tgt) & 1:
                    z ^= 1 << ctl
            elif g[0] in ("MX", "MZ") and (live or ev.kind == "flip"):
                q = idx[g[1]]
                bit = (z >> q) & 1 if g[0] == "MX" else (x >> q) & 1
                if ev.kind == "flip" and g[1] == ev.qubit:
                    bit ^= 1
                if bit:
                    if g[1] == c.syndrome:
                        synflip = not synflip
                    else:
                        flags.add(g[1])
    data_mask = (1 << c.weight) - 1
    return FaultOutcome((ev,), x & data_mask, z & data_mask, frozenset(flags), synflip)


def compose_outcomes(c: MeasCircuit, a: FaultOutcome, b: FaultOutcome) -> FaultOutcome:
    """Joint outcome of two fault events; exact because propagation is GF(2)-linear."""
    return FaultOutcome(
        a.faults + b.faults,
        a.x_res ^ b.x_res,
        a.z_res ^ b.z_res,
        a.flags ^ b.flags,
        a.synflip != b.synflip,
    )


def enumerate_fault_outcomes(c: MeasCircuit, max_faults: int) -> List[FaultOutcome]:
    """Exhaustive single-fault outcomes, plus all unordered pairs for max_faults=2."""
    if max_faults not in (1, 2):
        raise ValueError("max_faults must be 1 or 2")
    singles = [propagate_fault(c, ev) for ev in fault_events(c)]
    if max_faults == 1:
        return singles
    out = list(singles)
    for i in range(len(singles)):
        for j in range(i + 1, len(singles)):
            out.append(compose_outcomes(c, singles[i], singles[j]))
    return out


# ---------------------------------------------------------------------------
# Flag tables

ACCEPT = ("accept",)
REJECT = ("reject",)


def CORRECT(bits: int) -> Tuple[str, int]:
    return ("correct", bits)


@dataclass
class FlagTable:
    """Map from raised-flag set to recovery action.

    Corrections are support bitmasks in the circuit's stabilizer basis.
    The empty flag set always maps to accept-no-correction.
    """

    circuit: str
    basis: str
    weight: int
    entries: Dict[FrozenSet[int], Tuple] = field(default_factory=dict)

    def action(self, flags: FrozenSet[int]) -> Tuple:
        if not flags:
            return ACCEPT
        if flags not in self.entries:
            raise MissingFlagPattern(f"no table entry for flags {sorted(flags)}")
        return self.entries[flags]

    def correction_bits(self, flags: FrozenSet[int]) -> Optional[int]:
        """Correction support for a flag set, or None when rejecting."""
        act = self.action(flags)
        if act == REJECT:
            return None
        return act[1] if act[0] == "correct" else 0


def _eff_weight(bits: int, stab_mask: int) -> int:
    """Residual weight modulo the measured stabilizer itself."""
    return min(bits.bit_count(), (bits ^ stab_mask).bit_count())


def _residual_in_basis(c: MeasCircuit, o: FaultOutcome) -> Tuple[int, int]:
    """(correctable-sector residual, opposite-sector residual) for an outcome."""
    if c.basis == "X":
        return o.x_res, o.z_res
    return o.z_res, o.x_res


def _pack_outcome(c: MeasCircuit, o: FaultOutcome, flag_pos: Dict[int, int]) -> int:
    """Pack an outcome as [flags | res | other | syn] for vectorized work."""
    w = c.weight
    res, other = _residual_in_basis(c, o)
    fbits = 0
    for f in o.flags:
        fbits |= 1 << flag_pos[f]
    return (fbits << (2 * w + 1)) | (res << (w + 1)) | (other << 1) | int(o.synflip)


def packed_singles(c: MeasCircuit) -> Tuple[np.ndarray, Dict[int, int]]:
    """All single-fault outcomes in packed form, plus the flag bit layout.

    Propagates every Pauli fault event in one vectorized sweep over the
    gate list; outcome-flip events contribute their measurement bit only.
    """
    idx = c.local_index()
    flag_pos = {f: i for i, f in enumerate(c.flags)}
    w = c.weight
    one = np.uint64(1)

    flat: List[Gate] = [g for rnd in c.rounds for g in rnd]
    flat_pos = {}
    t = 0
    for r, rnd in enumerate(c.rounds):
        for gi in range(len(rnd)):
            flat_pos[(r, gi)] = t
            t += 1

    pauli_events = []
    flip_vals = []
    for ev in fault_events(c):
        if ev.kind == "pauli":
            pauli_events.append(ev)
        else:
            if ev.qubit == c.syndrome:
                flip_vals.append(1)
            else:
                flip_vals.append(1 << (2 * w + 1 + flag_pos[ev.qubit]))
    m = len(pauli_events)
    pos = np.array([flat_pos[(ev.round_idx, ev.gate_idx)] for ev in pauli_events], dtype=np.int64)
    order = np.argsort(pos, kind="stable")
    pos = pos[order]
    x = np.array([pauli_events[i].x for i in order], dtype=np.uint64)
    z = np.array([pauli_events[i].z for i in order], dtype=np.uint64)
    syn = np.zeros(m, dtype=np.uint64)
    fl = np.zeros(m, dtype=np.uint64)

    a = 0
    for t, g in enumerate(flat):
        while a < m and pos[a] < t:
            a += 1
        if a == 0:
            continue
        if g[0] == "CX":
            ctl, tgt = idx[g[1]], idx[g[2]]
            x[:a] ^= ((x[:a] >> np.uint64(ctl)) & one) << np.uint64(tgt)
            z[:a] ^= ((z[:a] >> np.uint64(tgt)) & one) << np.uint64(ctl)
        elif g[0] == "MX":
            bits = (z[:a] >> np.uint64(idx[g[1]])) & one
            if g[1] == c.syndrome:
                syn[:a] ^= bits
            else:
                fl[:a] ^= bits << np.uint64(flag_pos[g[1]])
        elif g[0] == "MZ":
            bits = (x[:a] >> np.uint64(idx[g[1]])) & one
            if g[1] == c.syndrome:
                syn[:a] ^= bits
            else:
                fl[:a] ^= bits << np.uint64(flag_pos[g[1]])

    data_mask = np.uint64((1 << w) - 1)
    xd = x & data_mask
    zd = z & data_mask
    res, other = (xd, zd) if c.basis == "X" else (zd, xd)
    packed = (fl << np.uint64(2 * w + 1)) | (res << np.uint64(w + 1)) | (other << one) | syn
    all_vals = np.concatenate([packed, np.array(flip_vals, dtype=np.uint64)])
    return all_vals, flag_pos


def _pair_unique(singles: np.ndarray) -> np.ndarray:
    """Distinct packed outcomes over all unordered pairs (XOR-composable)."""
    xor = singles[:, None] ^ singles[None, :]
    iu = np.triu_indices(len(singles), k=1)
    return np.unique(xor[iu])


def _split_packed(vals: np.ndarray, w: int):
    syn = vals & np.uint64(1)
    other = (vals >> np.uint64(1)) & np.uint64((1 << w) - 1)
    res = (vals >> np.uint64(w + 1)) & np.uint64((1 << w) - 1)
    flags = vals >> np.uint64(2 * w + 1)
    return flags, res, other, syn


def _best_correction(res1: np.ndarray, res2: np.ndarray, w: int) -> Optional[int]:
    """Lowest-weight correction with all singles <= 1 and pairs <= 2, mod stabilizer."""
    full = np.uint64((1 << w) - 1)
    cands = {0}
    for arr in (res1, res2):
        cands.update(int(v) for v in arr)
        cands.update(int(v ^ full) for v in arr)
    for cand in sorted(cands, key=lambda v: (bin(v).count("1"), v)):
        cv = np.uint64(cand)
        e1 = np.minimum(np.bitwise_count(res1 ^ cv), np.bitwise_count(res1 ^ cv ^ full))
        if e1.size and e1.max() > 1:
            continue
        e2 = np.minimum(np.bitwise_count(res2 ^ cv), np.bitwise_count(res2 ^ cv ^ full))
        if e2.size and e2.max() > 2:
            continue
        return cand
    return None


def _flag_set(c: MeasCircuit, fbits: int) -> FrozenSet[int]:
    return frozenset(f for i, f in enumerate(c.flags) if (fbits >> i) & 1)


def derive_flag_table(c: MeasCircuit, distance: int = 4) -> FlagTable:
    """Assign a correction or rejection to every reachable flag set.

    Flag sets reachable by one fault must admit a correction taking every
    single-fault residual to weight <= 1 (and every pair sharing the set
    to weight <= 2 at distance 4).  Sets reachable only by pairs correct
    when one action bounds all of them by 2, otherwise reject.  Residuals
    count modulo the measured stabilizer.
    """
    w = c.weight
    singles, _pos = packed_singles(c)
    u1 = np.unique(singles)
    u2 = _pair_unique(singles) if distance >= 4 else np.array([], dtype=np.uint64)
    f1, r1, _o1, _s1 = _split_packed(u1, w)
    f2, r2, _o2, _s2 = _split_packed(u2, w)

    table = FlagTable(circuit=c.name, basis=c.basis, weight=w)
    patterns = sorted(set(int(v) for v in f1) | set(int(v) for v in f2))
    for pat in patterns:
        res1 = r1[f1 == pat]
        res2 = r2[f2 == pat] if u2.size else np.array([], dtype=np.uint64)
        if pat == 0:
            chosen = _best_correction(res1, res2, w)
            if chosen != 0:
                raise CircuitNotFT(f"{c.name}: unflagged faults spread beyond weight 1")
            continue
        chosen = _best_correction(res1, res2, w)
        if chosen is None:
            if res1.size:
                raise CircuitNotFT(
                    f"{c.name}: flag set {sorted(_flag_set(c, pat))} reachable by one "
                    f"fault admits no consistent correction"
                )
            table.entries[_flag_set(c, pat)] = REJECT
        else:
            table.entries[_flag_set(c, pat)] = CORRECT(chosen) if chosen else ACCEPT
    return table


@dataclass
class FtVerdict:
    ok: bool
    distance: int
    counterexample: Optional[FaultOutcome] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _find_counterexample(c: MeasCircuit, table: FlagTable, packed_target: int) -> FaultOutcome:
    """Recover one fault set generating a packed outcome (slow path, failures only)."""
    flag_pos = {f: i for i, f in enumerate(c.flags)}
    singles = [propagate_fault(c, ev) for ev in fault_events(c)]
    for o in singles:
        if _pack_outcome(c, o, flag_pos) == packed_target:
            return o
    for i in range(len(singles)):
        for j in range(i + 1, len(singles)):
            o = compose_outcomes(c, singles[i], singles[j])
            if _pack_outcome(c, o, flag_pos) == packed_target:
                return o
    raise AssertionError("packed outcome not reproducible")


def verify_ft_circuit(c: MeasCircuit, table: FlagTable, distance: int) -> FtVerdict:
    """Exhaustive <=2-fault check of the distance-3/4 circuit rules.

    One fault must be corrected (never rejected) to X and Z weight at most
    one; at distance four, two faults must be rejected or left at weight at
    most two after the table action.  Residuals are judged modulo the
    measured stabilizer.
    """
    if distance not in (3, 4):
        raise ValueError("distance must be 3 or 4")
    w = c.weight
    full = np.uint64((1 << w) - 1)
    singles, _pos = packed_singles(c)
    u1 = np.unique(singles)
    stages = [(u1, 1, "single fault")]
    if distance == 4:
        stages.append((_pair_unique(singles), 2, "double fault"))

    # Dense action arrays indexed by flag bit-pattern.
    nf = len(c.flags)
    kind = np.full(1 << nf, -1, dtype=np.int8)  # -1 missing, 0 correct, 1 reject
    corr = np.zeros(1 << nf, dtype=np.uint64)
    kind[0] = 0
    for fs, act in table.entries.items():
        pat = 0
        for f in fs:
            pat |= 1 << c.flags.index(f)
        if act == REJECT:
            kind[pat] = 1
        else:
            kind[pat] = 0
            corr[pat] = act[1] if act[0] == "correct" else 0

    for vals, bound, label in stages:
        flags, res, other, _syn = _split_packed(vals, w)
        k = kind[flags.astype(np.int64)]
        if np.any(k == -1):
            bad = vals[k == -1][0]
            missing = _flag_set(c, int(flags[k == -1][0]))
            raise MissingFlagPattern(f"no table entry for reachable flags {sorted(missing)}")
        rejected = k == 1
        if bound == 1 and rejected.any():
            return FtVerdict(False, distance, _find_counterexample(c, table, int(vals[rejected][0])),
                             "single fault hits a rejecting flag set")
        cc = corr[flags.astype(np.int64)]
        eff = np.minimum(np.bitwise_count(res ^ cc), np.bitwise_count(res ^ cc ^ full))
        bad_mask = ~rejected & ((eff > bound) | (np.bitwise_count(other) > bound))
        if bad_mask.any():
            return FtVerdict(False, distance, _find_counterexample(c, table, int(vals[bad_mask][0])),
                             f"{label} leaves weight > {bound}")
    return FtVerdict(True, distance)


# ---------------------------------------------------------------------------
# Construction helpers


def _pack_rounds(serial: List[Gate]) -> List[List[Gate]]:
    """Greedy ASAP packing of a serial gate list into disjoint parallel rounds."""
    rounds: List[List[Gate]] = []
    busy_until: Dict[int, int] = {}
    for g in serial:
        qs = g[1:] if g[0] == "CX" else (g[1],)
        start = max((busy_until.get(q, 0) for q in qs), default=0)
        while len(rounds) <= start:
            rounds.append([])
        rounds[start].append(g)
        for q in qs:
            busy_until[q] = start + 1
    return rounds


def _apply_basis(c_basis: str, serial_x: List[Gate]) -> List[Gate]:
    """Map the X-basis gate template to the requested basis (CSS dual)."""
    if c_basis == "X":
        return serial_x
    out: List[Gate] = []
    for g in serial_x:
        if g[0] == "PX":
            out.append(("PZ", g[1]))
        elif g[0] == "PZ":
            out.append(("PX", g[1]))
        elif g[0] == "CX":
            out.append(("CX", g[2], g[1]))
        elif g[0] == "MX":
            out.append(("MZ", g[1]))
        else:
            out.append(("MX", g[1]))
    return out


def build_bare_circuit(basis: str, support: Sequence[int], ancilla: int,
                       name: str = "", order: Optional[Sequence[int]] = None) -> MeasCircuit:
    """Single-ancilla measurement circuit (no flags), data in a chosen order."""
    support = tuple(support)
    order = list(order) if order is not None else list(support)
    serial: List[Gate] = [("PX", ancilla)]
    serial += [("CX", ancilla, d) for d in order]
    serial.append(("MX", ancilla))
    serial = _apply_basis(basis, serial)
    return MeasCircuit(
        name=name or f"bare-w{len(support)}-{basis}",
        basis=basis,
        support=support,
        ancillas=(ancilla,),
        syndrome=ancilla,
        rounds=_pack_rounds(serial),
    )


@dataclass
class GadgetPlan:
    """Mediator-tree structure for one stabilizer measurement."""

    syndrome: int
    parents: Dict[int, int]            # mediator/flag -> parent node
    data_assign: Dict[int, List[int]]  # node -> data qubits it drives
    pure_flags: List[int]              # flags with no data (subset of parents keys)


def _serial_from_plan(plan: GadgetPlan, rng: random.Random) -> List[Gate]:
    """Randomized serial X-basis gate order realizing a gadget plan.

    Each non-syndrome node is opened by a CNOT from its parent, runs its
    data CNOTs and child blocks, is closed by a second parent CNOT and is
    measured as a flag.  Open/close positions are sampled so that windows
    can overlap sibling activity; every window still wraps the node's own
    block, which keeps the order causally valid.
    """
    children: Dict[int, List[int]] = {}
    for node, parent in plan.parents.items():
        children.setdefault(parent, []).append(node)

    def node_block(v: int) -> List[Gate]:
        # Atomic items: own data CNOTs and fully-serialized child blocks.
        items: List[List[Gate]] = [[("CX", v, d)] for d in plan.data_assign.get(v, [])]
        kids = list(children.get(v, []))
        n_data = len(items)
        for ch in kids:
            items.append(node_block(ch))
        order = list(range(len(items)))
        rng.shuffle(order)
        items = [items[i] for i in order]
        child_pos = {kids[i - n_data]: pos for pos, i in enumerate(order) if i >= n_data}
        # Keyed layout: item j sits at key j; opens/closes get fractional keys
        # anywhere outside the child's own block, so windows overlap siblings.
        keyed: List[Tuple[float, List[Gate]]] = [(float(j), blk) for j, blk in enumerate(items)]
        for ch in kids:
            pos = child_pos[ch]
            open_key = min(rng.uniform(-1.0, pos), pos - 0.25)
            close_key = max(rng.uniform(pos, len(items)), pos + 0.25)
            keyed.append((open_key, [("CX", v, ch)]))
            keyed.append((close_key, [("CX", v, ch)]))
        keyed.sort(key=lambda kv: kv[0])
        return [g for _k, blk in keyed for g in blk]

    serial: List[Gate] = [("PX", plan.syndrome)]
    for node in plan.parents:
        serial.append(("PZ", node))
    serial += node_block(plan.syndrome)
    serial.append(("MX", plan.syndrome))
    for node in plan.parents:
        serial.append(("MZ", node))
    return serial


def circuit_from_plan(basis: str, support: Sequence[int], plan: GadgetPlan,
                      rng: random.Random, name: str = "") -> MeasCircuit:
    support = tuple(support)
    serial = _serial_from_plan(plan, rng)
    serial = _apply_basis(basis, serial)
    ancillas = tuple([plan.syndrome] + list(plan.parents))
    return MeasCircuit(
        name=name or f"gadget-w{len(support)}-{basis}",
        basis=basis,
        support=support,
        ancillas=ancillas,
        syndrome=plan.syndrome,
        rounds=_pack_rounds(serial),
    )


def plan_gadget(layout: Layout, support: Sequence[int], ancillas: Iterable[int],
                rng: random.Random, max_extra_flags: Optional[int] = None) -> Optional[GadgetPlan]:
    """Random mediator-tree plan: assign data to adjacent ancillas, connect
    the used ancillas to a random syndrome root, attach leftovers as flags."""
    anc = sorted(set(ancillas))
    support = list(support)
    adj = {a: set(layout.neighbors(a)) for a in anc}
    # Balanced data assignment: single-flag corrections stay weight <= 1
    # only when each mediator drives at most two support qubits, so load
    # the least-busy adjacent ancilla (random ties, occasional imbalance).
    assign: Dict[int, List[int]] = {}
    loose = rng.random() < 0.2
    order = list(support)
    rng.shuffle(order)
    for d in order:
        options = [a for a in anc if d in adj[a]]
        if not options:
            return None
        if loose:
            a = rng.choice(options)
        else:
            low = min(len(assign.get(a, [])) for a in options)
            a = rng.choice([a for a in options if len(assign.get(a, [])) == low])
        assign.setdefault(a, []).append(d)
    syndrome = rng.choice(anc)
    # BFS tree over ancilla-ancilla edges that reaches every data-carrying node.
    parents: Dict[int, int] = {}
    seen = {syndrome}
    frontier = [syndrome]
    while frontier:
        v = frontier.pop(0)
        nbrs = [a for a in anc if a in adj[v] and a not in seen]
        rng.shuffle(nbrs)
        for a in nbrs:
            parents[a] = v
            seen.add(a)
            frontier.append(a)
    if any(node not in seen for node in assign):
        return None
    # Trim branches that carry no data, then re-attach leftovers as pure flags.
    needed: Set[int] = set(assign)
    keep: Set[int] = set()
    for node in needed:
        while node != syndrome:
            keep.add(node)
            node = parents[node]
    parents = {n: p for n, p in parents.items() if n in keep}
    tree_nodes = [syndrome] + list(parents)
    spare = [a for a in anc if a not in tree_nodes]
    rng.shuffle(spare)
    if max_extra_flags is not None:
        spare = spare[:max_extra_flags]
    pure_flags: List[int] = []
    for a in spare:
        hosts = [v for v in tree_nodes if a in adj[v]]
        if hosts:
            parents[a] = rng.choice(hosts)
            pure_flags.append(a)
    data_assign = {n: sorted(qs) for n, qs in assign.items()}
    return GadgetPlan(syndrome=syndrome, parents=parents,
                      data_assign=data_assign, pure_flags=pure_flags)


def search_circuit(basis: str, support: Sequence[int], layout: Layout,
                   ancillas: Iterable[int], distance: int, budget: int,
                   seed: int, name: str = "") -> Optional[Tuple[MeasCircuit, FlagTable]]:
    """Randomized layout-constrained search for a fault-tolerant circuit.

    Samples mediator-tree plans and gate orderings, derives a flag table
    for each candidate and returns the first one passing exhaustive
    verification at the requested distance.  Deterministic given seed.
    """
    rng = random.Random(seed)
    support = tuple(support)
    for trial in range(budget):
        plan = plan_gadget(layout, support, ancillas, rng)
        if plan is None:
            continue
        c = circuit_from_plan(basis, support, plan, rng,
                              name=name or f"w{len(support)}-{basis}")
        try:
            validate_circuit(c, layout)
            derive_flag_table(c, 3)  # cheap screen before the pair stage
            table = derive_flag_table(c, distance)
        except (CircuitError, CircuitNotFT):
            continue
        if verify_ft_circuit(c, table, distance):
            return c, table
    return None


# ---------------------------------------------------------------------------
# File formats


def save_circuit(c: MeasCircuit, path: str) -> None:
    lines = [
        f"psqec-circuit v1 {c.name}",
        f"basis {c.basis}",
        "support " + ",".join(map(str, c.support)),
        "ancillas " + ",".join(map(str, c.ancillas)),
        f"syndrome {c.print_name(c.syndrome)}",
    ]
    tok = {"PX": "P+", "PZ": "P0", "MX": "MX", "MZ": "MZ"}
    for rnd in c.rounds:
        parts = []
        for g in rnd:
            if g[0] == "CX":
                parts.append(f"CX {c.print_name(g[1])} {c.print_name(g[2])}")
            elif g[0] in ("MX", "MZ"):
                role = "syndrome" if g[1] == c.syndrome else "flag"
                parts.append(f"{tok[g[0]]} {c.print_name(g[1])} {role}")
            else:
                parts.append(f"{tok[g[0]]} {c.print_name(g[1])}")
        lines.append(" ; ".join(parts))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_circuit(path: str) -> MeasCircuit:
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    head = lines[0].split()
    if head[:2] != ["psqec-circuit", "v1"]:
        raise ValueError(f"unrecognized circuit header: {lines[0]!r}")
    name = head[2] if len(head) > 2 else "circuit"
    basis = lines[1].split()[1]
    support = tuple(int(t) for t in lines[2].split()[1].split(","))
    ancillas = tuple(int(t) for t in lines[3].split()[1].split(","))
    syn_token = lines[4].split()[1]
    w = len(support)

    def resolve(tokname: str) -> int:
        if tokname.startswith("d"):
            return support[int(tokname[1:]) - 1]
        return ancillas[int(tokname[1:]) - w - 1]

    syndrome = resolve(syn_token)
    tok = {"P+": "PX", "P0": "PZ", "MX": "MX", "MZ": "MZ"}
    rounds: List[List[Gate]] = []
    for ln in lines[5:]:
        rnd: List[Gate] = []
        for part in ln.split(" ; "):
            bits = part.split()
            if bits[0] == "CX":
                rnd.append(("CX", resolve(bits[1]), resolve(bits[2])))
            else:
                rnd.append((tok[bits[0]], resolve(bits[1])))
        rounds.append(rnd)
    return MeasCircuit(name=name, basis=basis, support=support,
                       ancillas=ancillas, syndrome=syndrome, rounds=rounds)


def save_flag_table(t: FlagTable, c: MeasCircuit, path: str) -> None:
    """Two-column corrections plus a rejection list, in local print ids."""
    def flag_ids(fs: FrozenSet[int]) -> str:
        return "{" + ",".join(str(c.flag_print_id(f)) for f in sorted(fs, key=c.flag_print_id)) + "}"

    def corr_ids(bits: int) -> str:
        return "{" + ",".join(str(i + 1) for i in range(c.weight) if (bits >> i) & 1) + "}"

    lines = [f"psqec-flagtable v1 {t.circuit}", f"basis {t.basis}", "corrections"]
    rejections = []
    for flags in sorted(t.entries, key=lambda fs: (len(fs), sorted(c.flag_print_id(f) for f in fs))):
        act = t.entries[flags]
        if act == REJECT:
            rejections.append(flag_ids(flags))
        elif act == ACCEPT:
            lines.append(f"{flag_ids(flags)} | {{}}")
        else:
            lines.append(f"{flag_ids(flags)} | {corr_ids(act[1])}")
    lines.append("rejections")
    lines.extend(rejections)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_flag_table(path: str, c: MeasCircuit) -> FlagTable:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    head = lines[0].split()
    if head[:2] != ["psqec-flagtable", "v1"]:
        raise ValueError(f"unrecognized table header: {lines[0]!r}")
    basis = lines[1].split()[1]
    by_print = {c.flag_print_id(f): f for f in c.flags}

    def parse_set(text: str) -> FrozenSet[int]:
        inner = text.strip()[1:-1]
        if not inner:
            return frozenset()
        return frozenset(by_print[int(t)] for t in inner.split(","))

    table = FlagTable(circuit=head[2] if len(head) > 2 else c.name,
                      basis=basis, weight=c.weight)
    mode = None
    for ln in lines[2:]:
        if ln == "corrections":
            mode = "corr"
            continue
        if ln == "rejections":
            mode = "rej"
            continue
        if mode == "corr":
            left, right = ln.split("|")
            flags = parse_set(left)
            inner = right.strip()[1:-1]
            bits = 0
            if inner:
                for t in inner.split(","):
                    bits |= 1 << (int(t) - 1)
            table.entries[flags] = CORRECT(bits) if bits else ACCEPT
        elif mode == "rej":
            table.entries[parse_set(ln)] = REJECT
    return table
