"""Bisimulation checking, greatest-fixpoint computation and
distinguishing-formula synthesis.

Two notions are supported: the plain coalition-logic bisimulation
(atom equivalence plus one Forth/Back pair per coalition) and its
strengthening with three nested condition families, one per strategic
operator.  Relations are sets of ordered state pairs over one model;
to relate states of two models, take their disjoint union first.

Every "Back" condition is the corresponding "Forth" with the roles of
the two states exchanged; the relation itself keeps its orientation
relative to the checked pair, which is what makes non-symmetric
relations (such as the diagonal between two embedded models) usable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .formula import And, Atom, Formula, Not, Obeta, Oalpha, Oc, TOP, bottom, or_
from .model import Coalition, GameModel, InputError, State
from .semantics import extension_bits, holds, strategic_states_bits

Relation = frozenset

FAMILY_COOP = "c"
FAMILY_PROACTIVE = "alpha"
FAMILY_REACTIVE = "beta"
ALL_FAMILIES = (FAMILY_COOP, FAMILY_PROACTIVE, FAMILY_REACTIVE)

_FAMILY_TAGS = {
    (FAMILY_COOP, False): "A-Forth_c",
    (FAMILY_COOP, True): "A-Back_c",
    (FAMILY_PROACTIVE, False): "B-Forth_alpha",
    (FAMILY_PROACTIVE, True): "B-Back_alpha",
    (FAMILY_REACTIVE, False): "A-Forth_beta",
    (FAMILY_REACTIVE, True): "A-Back_beta",
}


@dataclass(frozen=True)
class BisimFailure:
    """First violated clause: which pair, which condition, which coalitions."""

    pair: tuple[State, State]
    condition: str
    coalition_a: Coalition | None = None
    coalition_b: Coalition | None = None
    witness: str | None = None

    def __str__(self) -> str:
        parts = [f"{self.condition} fails at ({self.pair[0]}, {self.pair[1]})"]
        if self.coalition_a is not None:
            parts.append(f"A={{{','.join(sorted(self.coalition_a))}}}")
        if self.coalition_b is not None:
            parts.append(f"B={{{','.join(sorted(self.coalition_b))}}}")
        if self.witness:
            parts.append(f"unmatched {self.witness}")
        return " ".join(parts)


@dataclass(frozen=True)
class BisimVerdict:
    ok: bool
    failure: BisimFailure | None = None

    def __str__(self) -> str:
        return "ok" if self.ok else f"fail: {self.failure}"

    def to_json(self) -> dict:
        if self.ok:
            return {"ok": True}
        f = self.failure
        return {
            "ok": False,
            "pair": list(f.pair),
            "condition": f.condition,
            "coalition_a": sorted(f.coalition_a) if f.coalition_a is not None else None,
            "coalition_b": sorted(f.coalition_b) if f.coalition_b is not None else None,
            "witness": f.witness,
        }


# -- relation plumbing ---------------------------------------------------


def _check_relation(model: GameModel, relation) -> list[tuple[State, State]]:
    pairs = []
    for pair in relation:
        s, t = pair
        if s not in model.state_index or t not in model.state_index:
            raise InputError(f"relation references unknown state in {pair!r}")
        pairs.append((s, t))
    idx = model.state_index
    pairs.sort(key=lambda p: (idx[p[0]], idx[p[1]]))
    return pairs


def _label_bits(model: GameModel):
    sig = {}
    for i, s in enumerate(model.states):
        sig[s] = frozenset(a for a, ss in model.valuation.items() if s in ss)
    return sig


def _coalitions(agents) -> tuple[Coalition, ...]:
    subsets = []
    for r in range(len(agents) + 1):
        for combo in itertools.combinations(agents, r):
            subsets.append(frozenset(combo))
    return tuple(subsets)


def _coalition_pairs(agents, disjoint_only: bool):
    """(A, B) pairs in canonical order; responder overlap with the actor
    is redundant (the clauses only see B through B minus A), so the
    fixpoint loops use disjoint pairs only."""
    subsets = _coalitions(agents)
    pairs = []
    for a in subsets:
        for b in subsets:
            if disjoint_only and a & b:
                continue
            pairs.append((a, b))
    return tuple(pairs)


class _Matcher:
    """Per-relation successor matching with memoized set-to-set checks."""

    def __init__(self, model: GameModel, relation):
        n = len(model.states)
        idx = model.state_index
        fwd = [0] * n
        rev = [0] * n
        for u, v in relation:
            fwd[idx[u]] |= 1 << idx[v]
            rev[idx[v]] |= 1 << idx[u]
        self.fwd = fwd
        self.rev = rev
        self._memo_fwd: dict = {}
        self._memo_rev: dict = {}

    def match_fwd(self, o1: int, o2: int) -> bool:
        """Every state in o2 (second-state side) is related from some state in o1."""
        key = (o1, o2)
        hit = self._memo_fwd.get(key)
        if hit is None:
            hit = True
            rev = self.rev
            m = o2
            while m:
                low = m & -m
                if not (rev[low.bit_length() - 1] & o1):
                    hit = False
                    break
                m ^= low
            self._memo_fwd[key] = hit
        return hit

    def match_rev(self, o1: int, o2: int) -> bool:
        """Every state in o1 (first-state side) is related to some state in o2."""
        key = (o1, o2)
        hit = self._memo_rev.get(key)
        if hit is None:
            hit = True
            fwd = self.fwd
            m = o1
            while m:
                low = m & -m
                if not (fwd[low.bit_length() - 1] & o2):
                    hit = False
                    break
                m ^= low
            self._memo_rev[key] = hit
        return hit


# -- clause evaluators ----------------------------------------------------
#
# Each returns None when the clause holds, otherwise the joint action on
# the universally quantified side that cannot be matched.


def _cl_clause(model, matcher, s1, s2, c, swapped):
    outs1 = model.out_bits_table(s1, c)
    outs2 = model.out_bits_table(s2, c)
    if not swapped:
        for i1, o1 in enumerate(outs1):
            if not any(matcher.match_fwd(o1, o2) for o2 in outs2):
                return model.joint_action_table(s1, c)[i1]
    else:
        for i2, o2 in enumerate(outs2):
            if not any(matcher.match_rev(o1, o2) for o1 in outs1):
                return model.joint_action_table(s2, c)[i2]
    return None


def _coop_clause(model, matcher, s1, s2, a, b, swapped):
    outs1 = model.out_bits_table(s1, a)
    outs2 = model.out_bits_table(s2, a)
    m1 = model.merged_out_bits(s1, a, b)
    m2 = model.merged_out_bits(s2, a, b)
    nb1 = len(model.joint_action_table(s1, b))
    nb2 = len(model.joint_action_table(s2, b))
    if not swapped:
        for ia1, o1 in enumerate(outs1):
            row1 = m1[ia1]
            ok = False
            for ia2, o2 in enumerate(outs2):
                if not matcher.match_fwd(o1, o2):
                    continue
                row2 = m2[ia2]
                if all(any(matcher.match_fwd(row1[ib1], row2[ib2]) for ib2 in range(nb2))
                       for ib1 in range(nb1)):
                    ok = True
                    break
            if not ok:
                return model.joint_action_table(s1, a)[ia1]
    else:
        for ia2, o2 in enumerate(outs2):
            row2 = m2[ia2]
            ok = False
            for ia1, o1 in enumerate(outs1):
                if not matcher.match_rev(o1, o2):
                    continue
                row1 = m1[ia1]
                if all(any(matcher.match_rev(row1[ib1], row2[ib2]) for ib1 in range(nb1))
                       for ib2 in range(nb2)):
                    ok = True
                    break
            if not ok:
                return model.joint_action_table(s2, a)[ia2]
    return None


def _proactive_clause(model, matcher, s1, s2, a, b, swapped):
    outs1 = model.out_bits_table(s1, a)
    outs2 = model.out_bits_table(s2, a)
    m1 = model.merged_out_bits(s1, a, b)
    m2 = model.merged_out_bits(s2, a, b)
    nb1 = len(model.joint_action_table(s1, b))
    nb2 = len(model.joint_action_table(s2, b))
    if not swapped:
        for ib1 in range(nb1):
            ok = False
            for ib2 in range(nb2):
                if all(any(matcher.match_rev(o1, o2)
                           and matcher.match_fwd(m1[ia1][ib1], m2[ia2][ib2])
                           for ia1, o1 in enumerate(outs1))
                       for ia2, o2 in enumerate(outs2)):
                    ok = True
                    break
            if not ok:
                return model.joint_action_table(s1, b)[ib1]
    else:
        for ib2 in range(nb2):
            ok = False
            for ib1 in range(nb1):
                if all(any(matcher.match_fwd(o1, o2)
                           and matcher.match_rev(m1[ia1][ib1], m2[ia2][ib2])
                           for ia2, o2 in enumerate(outs2))
                       for ia1, o1 in enumerate(outs1)):
                    ok = True
                    break
            if not ok:
                return model.joint_action_table(s2, b)[ib2]
    return None


def _reactive_clause(model, matcher, s1, s2, a, b, swapped):
    outs1 = model.out_bits_table(s1, a)
    outs2 = model.out_bits_table(s2, a)
    m1 = model.merged_out_bits(s1, a, b)
    m2 = model.merged_out_bits(s2, a, b)
    nb1 = len(model.joint_action_table(s1, b))
    nb2 = len(model.joint_action_table(s2, b))
    if not swapped:
        for ia1, o1 in enumerate(outs1):
            row1 = m1[ia1]
            ok = False
            for ia2, o2 in enumerate(outs2):
                if not matcher.match_fwd(o1, o2):
                    continue
                row2 = m2[ia2]
                if all(any(matcher.match_rev(row1[ib1], row2[ib2]) for ib1 in range(nb1))
                       for ib2 in range(nb2)):
                    ok = True
                    break
            if not ok:
                return model.joint_action_table(s1, a)[ia1]
    else:
        for ia2, o2 in enumerate(outs2):
            row2 = m2[ia2]
            ok = False
            for ia1, o1 in enumerate(outs1):
                if not matcher.match_rev(o1, o2):
                    continue
                row1 = m1[ia1]
                if all(any(matcher.match_fwd(row1[ib1], row2[ib2]) for ib2 in range(nb2))
                       for ib1 in range(nb1)):
                    ok = True
                    break
            if not ok:
                return model.joint_action_table(s2, a)[ia2]
    return None


_FAMILY_CLAUSES = {
    FAMILY_COOP: _coop_clause,
    FAMILY_PROACTIVE: _proactive_clause,
    FAMILY_REACTIVE: _reactive_clause,
}


# -- checkers -------------------------------------------------------------


def _atom_check(model, pairs):
    sig = _label_bits(model)
    for s, t in pairs:
        if sig[s] != sig[t]:
            return BisimFailure((s, t), "AtomEq")
    return None


def check_cl_bisim(model: GameModel, relation) -> BisimVerdict:
    """Is the relation a coalition-logic bisimulation in the model?"""
    pairs = _check_relation(model, relation)
    bad = _atom_check(model, pairs)
    if bad is not None:
        return BisimVerdict(False, bad)
    matcher = _Matcher(model, pairs)
    for s, t in pairs:
        for c in _coalitions(model.agents):
            for swapped, tag in ((False, "Forth"), (True, "Back")):
                witness = _cl_clause(model, matcher, s, t, c, swapped)
                if witness is not None:
                    return BisimVerdict(False, BisimFailure(
                        (s, t), tag, coalition_a=c, witness=str(witness)))
    return BisimVerdict(True)


def check_constr_bisim(model: GameModel, relation,
                       families=ALL_FAMILIES) -> BisimVerdict:
    """Is the relation a bisimulation for the full conditional language?

    The three condition families are checked in the given order; the
    verdict reports the first violated clause.  Restricting `families`
    probes a single operator's conditions in isolation.
    """
    unknown = set(families) - set(ALL_FAMILIES)
    if unknown:
        raise InputError(f"unknown condition families: {sorted(unknown)}")
    pairs = _check_relation(model, relation)
    bad = _atom_check(model, pairs)
    if bad is not None:
        return BisimVerdict(False, bad)
    matcher = _Matcher(model, pairs)
    coalition_pairs = _coalition_pairs(model.agents, disjoint_only=False)
    for family in families:
        clause = _FAMILY_CLAUSES[family]
        for s, t in pairs:
            for a, b in coalition_pairs:
                for swapped in (False, True):
                    witness = clause(model, matcher, s, t, a, b, swapped)
                    if witness is not None:
                        return BisimVerdict(False, BisimFailure(
                            (s, t), _FAMILY_TAGS[(family, swapped)],
                            coalition_a=a, coalition_b=b, witness=str(witness)))
    return BisimVerdict(True)


# -- greatest fixpoints ---------------------------------------------------


def _atom_equivalence_pairs(model: GameModel):
    sig = _label_bits(model)
    idx = model.state_index
    pairs = [(s, t) for s in model.states for t in model.states if sig[s] == sig[t]]
    pairs.sort(key=lambda p: (idx[p[0]], idx[p[1]]))
    return pairs


def _greatest(model: GameModel, pair_fails) -> Relation:
    """Shrink the atom-equivalence relation until no clause is violated.

    Deletions are swept in lexicographic pair order round by round; the
    greatest fixpoint is unique, the sweeps only fix the trace.
    """
    current = _atom_equivalence_pairs(model)
    while True:
        matcher = _Matcher(model, current)
        keep = []
        deleted = False
        current_set = set(current)
        for pair in current:
            if pair_fails(matcher, pair):
                deleted = True
            else:
                keep.append(pair)
        if not deleted:
            return frozenset(current_set)
        current = keep


def greatest_cl_bisim(model: GameModel) -> Relation:
    """Largest coalition-logic bisimulation in the model."""
    cached = model.__dict__.get("_greatest_cl")
    if cached is not None:
        return cached
    coalitions = _coalitions(model.agents)

    def fails(matcher, pair):
        s, t = pair
        for c in coalitions:
            for swapped in (False, True):
                if _cl_clause(model, matcher, s, t, c, swapped) is not None:
                    return True
        return False

    result = _greatest(model, fails)
    model.__dict__["_greatest_cl"] = result
    return result


def greatest_constr_bisim(model: GameModel) -> Relation:
    """Largest bisimulation for the full conditional language."""
    cached = model.__dict__.get("_greatest_constr")
    if cached is not None:
        return cached
    coalition_pairs = _coalition_pairs(model.agents, disjoint_only=True)
    clauses = [_FAMILY_CLAUSES[f] for f in ALL_FAMILIES]

    def fails(matcher, pair):
        s, t = pair
        for a, b in coalition_pairs:
            for clause in clauses:
                for swapped in (False, True):
                    if clause(model, matcher, s, t, a, b, swapped) is not None:
                        return True
        return False

    result = _greatest(model, fails)
    model.__dict__["_greatest_constr"] = result
    return result


# -- distinguishing formulas ----------------------------------------------


class SynthesisError(RuntimeError):
    """The synthesizer could not separate a pair the fixpoint says is
    separable (or separated a pair it says is not)."""


class _Synthesizer:
    """Partition refinement where every split is justified by a concrete
    formula, evaluated set-level and memoized through the semantics cache.

    Candidate arguments are unions of current classes: primarily closures
    of outcome sets of the block's own joint actions, with an exhaustive
    union sweep as fallback.  Each recorded split formula's extension is
    asserted against the set used to split, so the table stays honest.
    """

    _WIDE_LIMIT = 8  # classes; 2^k unions is the fallback search space

    def __init__(self, model: GameModel):
        self.model = model
        self.ops = (Oc, Oalpha, Obeta)
        self.coalition_pairs = _coalition_pairs(model.agents, disjoint_only=True)
        sig = _label_bits(model)
        groups: dict[frozenset, list[State]] = {}
        for s in model.states:
            groups.setdefault(sig[s], []).append(s)
        idx = model.state_index
        self.blocks = sorted((tuple(sorted(g, key=idx.get)) for g in groups.values()),
                             key=lambda b: idx[b[0]])
        self.dist: dict[tuple, Formula] = {}
        self._literals = self._literal_pool()
        for b1 in self.blocks:
            for b2 in self.blocks:
                if b1 != b2:
                    self.dist[(b1, b2)] = self._atom_split(sig, b1, b2)

    # - initial atom distinguishers -

    def _atom_split(self, sig, b1, b2) -> Formula:
        s1, s2 = sig[b1[0]], sig[b2[0]]
        plus = sorted(s1 - s2)
        if plus:
            return Atom(plus[0])
        minus = sorted(s2 - s1)
        return Not(Atom(minus[0]))

    def _literal_pool(self):
        model = self.model
        full = model.full_bits
        pool = [(TOP, full), (bottom(), 0)]
        for atom in model.atoms:
            bits = model.atom_bits[atom]
            pool.append((Atom(atom), bits))
            pool.append((Not(Atom(atom)), full ^ bits))
        return pool

    # - class formulas -

    def _gamma(self, block) -> Formula:
        others = [b for b in self.blocks if b != block]
        if not others:
            return TOP
        f = self.dist[(block, others[0])]
        for other in others[1:]:
            f = And(f, self.dist[(block, other)])
        return f

    def _block_bits(self, block) -> int:
        return self.model.bits_of(block)

    def _closure(self, bits: int) -> int:
        mask = 0
        for block in self.blocks:
            bb = self._block_bits(block)
            if bb & bits:
                mask |= bb
        return mask

    def _materialize(self, bits: int) -> Formula:
        """A formula whose extension is exactly `bits` (a union of classes)."""
        for f, b in self._literals:
            if b == bits:
                return f
        for (f1, b1), (f2, b2) in itertools.combinations(self._literals, 2):
            if b1 & b2 == bits:
                return And(f1, f2)
            if b1 | b2 == bits:
                return or_(f1, f2)
        parts = [self._gamma(b) for b in self.blocks if self._block_bits(b) & bits]
        f = parts[0]
        for part in parts[1:]:
            f = or_(f, part)
        got = extension_bits(self.model, f)
        if got != bits:
            raise SynthesisError("materialized class union drifted from its set")
        return f

    # - candidate enumeration -

    def _pools(self, block, a, b):
        model = self.model
        seen_u, seen_w = [], []

        def add(pool, bits):
            if bits not in pool:
                pool.append(bits)

        for s in block:
            for o in model.out_bits_table(s, a):
                add(seen_u, self._closure(o))
            for row in model.merged_out_bits(s, a, b):
                for o in row:
                    add(seen_w, self._closure(o))
        add(seen_u, model.full_bits)
        add(seen_w, model.full_bits)
        for bits in seen_u:
            add(seen_w, bits)
        return seen_u, seen_w

    def _try_split(self, block, candidates):
        block_bits = self._block_bits(block)
        for op, a, b, u, w in candidates:
            bits = strategic_states_bits(self.model, op, a, b, u, w)
            inside = bits & block_bits
            if inside and inside != block_bits:
                theta = op(a, b, self._materialize(u), self._materialize(w))
                got = extension_bits(self.model, theta)
                if got != bits:
                    raise SynthesisError("split formula drifted from its set evaluation")
                return theta, bits
        return None

    def _narrow_candidates(self, block):
        for a, b in self.coalition_pairs:
            pool_u, pool_w = self._pools(block, a, b)
            for op in self.ops:
                for u in pool_u:
                    for w in pool_w:
                        yield op, a, b, u, w

    def _wide_candidates(self, block):
        if len(self.blocks) > self._WIDE_LIMIT:
            return
        block_masks = [self._block_bits(b) for b in self.blocks]
        unions = [0]
        for mask in block_masks:
            unions += [u | mask for u in unions]
        unions.sort(key=lambda u: (bin(u).count("1"), u))
        for a, b in self.coalition_pairs:
            for op in self.ops:
                for u in unions:
                    for w in unions:
                        yield op, a, b, u, w

    # - refinement -

    def _split_block(self, block, theta, bits):
        idx = self.model.state_index
        inside = tuple(s for s in block if bits >> idx[s] & 1)
        outside = tuple(s for s in block if not bits >> idx[s] & 1)
        new_dist = {}
        for (b1, b2), f in self.dist.items():
            n1 = (inside, outside) if b1 == block else (b1,)
            n2 = (inside, outside) if b2 == block else (b2,)
            for x in n1:
                for y in n2:
                    new_dist[(x, y)] = f
        new_dist[(inside, outside)] = theta
        new_dist[(outside, inside)] = Not(theta)
        self.dist = new_dist
        self.blocks = sorted(
            [b for b in self.blocks if b != block] + [inside, outside],
            key=lambda b: idx[b[0]])

    def refine(self, target: Relation):
        """Split blocks until the partition matches the target equivalence."""
        while True:
            split_done = False
            for block in list(self.blocks):
                if len(block) < 2:
                    continue
                found = self._try_split(block, self._narrow_candidates(block))
                if found is None and any((s, t) not in target
                                         for s in block for t in block):
                    found = self._try_split(block, self._wide_candidates(block))
                if found is not None:
                    self._split_block(block, *found)
                    split_done = True
                    break
            if not split_done:
                return

    def table(self):
        block_of = {s: b for b in self.blocks for s in b}
        return block_of, self.dist


def _synthesis_table(model: GameModel):
    cached = model.__dict__.get("_distinguishers")
    if cached is not None:
        return cached
    target = greatest_constr_bisim(model)
    synth = _Synthesizer(model)
    synth.refine(target)
    block_of, dist = synth.table()
    for s in model.states:
        for t in model.states:
            same_block = block_of[s] is block_of[t]
            related = (s, t) in target
            if same_block != related:
                raise SynthesisError(
                    f"partition disagrees with the greatest bisimulation at ({s}, {t})")
    table = (block_of, dist)
    model.__dict__["_distinguishers"] = table
    return table


def distinguishing_formula(model: GameModel, s: State, t: State) -> Formula | None:
    """A formula true at s and false at t, or None when the states are
    bisimulation equivalent.  Every returned formula is re-verified
    through the model checker before being handed out."""
    for x in (s, t):
        if x not in model.state_index:
            raise InputError(f"unknown state {x!r}")
    if (s, t) in greatest_constr_bisim(model):
        return None
    block_of, dist = _synthesis_table(model)
    f = dist[(block_of[s], block_of[t])]
    if not holds(model, s, f) or holds(model, t, f):
        raise SynthesisError(f"synthesized formula fails to distinguish ({s}, {t})")
    return f
