"""Independent re-implementations used as oracles by the test suite.

Everything here deliberately avoids the package's evaluation machinery:
no bitmasks, no memoization, no shared tables.  Joint actions, outcome
sets and the operator quantifier nests are spelled out directly over the
model's raw fields.
"""

import itertools

from constr.formula import And, Atom, Not, Obeta, Oalpha, Oc, Top

# static structure only (availability products); truth values are never
# cached.  Models are pinned so id-based keys can never be recycled.
_PROFILES = {}
_PINNED = {}


def profiles_at(model, state):
    key = (id(model), state)
    got = _PROFILES.get(key)
    if got is None:
        _PINNED[id(model)] = model
        pools = [model.avail.get((state, a), ()) for a in model.agents]
        got = list(itertools.product(*pools))
        _PROFILES[key] = got
    return got


def brute_outcome_set(model, state, assignment):
    """Successors of every full profile extending the partial assignment."""
    out = set()
    for profile in profiles_at(model, state):
        if all(assignment[a] == profile[i]
               for i, a in enumerate(model.agents) if a in assignment):
            out.add(model.outcome[(state, profile)])
    return out


def joint_assignments(model, state, coalition):
    members = [a for a in model.agents if a in coalition]
    pools = [model.avail.get((state, a), ()) for a in members]
    return [dict(zip(members, choice)) for choice in itertools.product(*pools)]


def brute_merge(first, second):
    combined = dict(second)
    combined.update(first)
    return combined


def brute_holds(model, state, f):
    """Literal quantifier nest; recomputes everything on every call."""
    if isinstance(f, Atom):
        return state in model.valuation.get(f.name, frozenset())
    if isinstance(f, Top):
        return True
    if isinstance(f, Not):
        return not brute_holds(model, state, f.sub)
    if isinstance(f, And):
        return brute_holds(model, state, f.left) and brute_holds(model, state, f.right)

    def secures(assignment, goal):
        return all(brute_holds(model, u, goal)
                   for u in brute_outcome_set(model, state, assignment))

    a_choices = joint_assignments(model, state, f.a)
    b_choices = joint_assignments(model, state, f.b)
    if isinstance(f, Oc):
        return any(
            secures(sa, f.phi) and any(secures(brute_merge(sa, sb), f.psi)
                                       for sb in b_choices)
            for sa in a_choices)
    if isinstance(f, Oalpha):
        return any(
            all(not secures(sa, f.phi) or secures(brute_merge(sa, sb), f.psi)
                for sa in a_choices)
            for sb in b_choices)
    if isinstance(f, Obeta):
        return all(
            not secures(sa, f.phi) or any(secures(brute_merge(sa, sb), f.psi)
                                          for sb in b_choices)
            for sa in a_choices)
    raise TypeError(f"not a formula: {f!r}")


def brute_extension(model, f):
    return frozenset(s for s in model.states if brute_holds(model, s, f))


# -- exhaustive relation search ------------------------------------------


def _label_groups(model):
    sig = {s: frozenset(a for a, ss in model.valuation.items() if s in ss)
           for s in model.states}
    return sig


def exhaustive_greatest(model, checker):
    """Union of every relation the checker accepts, searched exhaustively.

    Only symmetric supersets of the diagonal inside atom equivalence need
    to be enumerated: any accepted relation stays accepted after adding
    its inverse and the diagonal, so the union over this class is the
    overall greatest fixed point.
    """
    sig = _label_groups(model)
    diagonal = frozenset((s, s) for s in model.states)
    orbits = [
        (s, t)
        for i, s in enumerate(model.states)
        for t in model.states[i + 1:]
        if sig[s] == sig[t]
    ]
    union: set = set()
    for k in range(len(orbits) + 1):
        for combo in itertools.combinations(orbits, k):
            pairs = set(diagonal)
            for s, t in combo:
                pairs.add((s, t))
                pairs.add((t, s))
            candidate = frozenset(pairs)
            if candidate <= union:
                continue
            if checker(model, candidate).ok:
                union |= candidate
    return frozenset(union)
