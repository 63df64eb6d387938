"""Line-oriented text formats for models and state relations.

Model format (UTF-8, `#` starts a comment):

    agents: a b
    states: s0 s1 s2
    labels s0: p q            # omitted line = no atoms true there
    actions s0 a: a1 a2       # one line per state and agent
    go s0 (a1,b1) -> s1       # one line per full profile, in agent order

Relation format: one `s ~ t` pair per line.
"""

from __future__ import annotations

import re

from .model import GameModel, ParseError

_GO_RE = re.compile(r"^go\s+(\S+)\s+\(([^()]*)\)\s*->\s*(\S+)$")


def _fail(lineno: int, msg: str):
    raise ParseError(f"line {lineno}: {msg}")


def _strip(line: str) -> str:
    if "#" in line:
        line = line[: line.index("#")]
    return line.strip()


def parse_model(text: str) -> GameModel:
    """Parse the textual model format.

    Declaration lines (`agents:`, `states:`) must precede any use.
    Duplicate `labels`, `actions` or `go` lines for the same key are
    rejected; totality of the outcome map is left to validate_model so
    that partial files can still be loaded and diagnosed.
    """
    agents: tuple[str, ...] | None = None
    states: tuple[str, ...] | None = None
    avail: dict[tuple[str, str], tuple[str, ...]] = {}
    outcome: dict[tuple[str, tuple[str, ...]], str] = {}
    labels: dict[str, tuple[str, ...]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue

        if line.startswith("agents:"):
            if agents is not None:
                _fail(lineno, "duplicate agents line")
            agents = tuple(line[len("agents:"):].split())
            if not agents:
                _fail(lineno, "agents line declares no agents")
            if len(set(agents)) != len(agents):
                _fail(lineno, "repeated agent name")
            continue

        if line.startswith("states:"):
            if states is not None:
                _fail(lineno, "duplicate states line")
            states = tuple(line[len("states:"):].split())
            if not states:
                _fail(lineno, "states line declares no states")
            if len(set(states)) != len(states):
                _fail(lineno, "repeated state name")
            continue

        if agents is None or states is None:
            _fail(lineno, "agents: and states: must be declared first")

        if line.startswith("labels "):
            head, sep, rest = line[len("labels "):].partition(":")
            if not sep:
                _fail(lineno, "labels line needs a ':'")
            state = head.strip()
            if state not in states:
                _fail(lineno, f"unknown state {state!r}")
            if state in labels:
                _fail(lineno, f"duplicate labels line for {state}")
            labels[state] = tuple(rest.split())
            continue

        if line.startswith("actions "):
            head, sep, rest = line[len("actions "):].partition(":")
            if not sep:
                _fail(lineno, "actions line needs a ':'")
            parts = head.split()
            if len(parts) != 2:
                _fail(lineno, "expected 'actions STATE AGENT: ...'")
            state, agent = parts
            if state not in states:
                _fail(lineno, f"unknown state {state!r}")
            if agent not in agents:
                _fail(lineno, f"unknown agent {agent!r}")
            if (state, agent) in avail:
                _fail(lineno, f"duplicate actions line for {state} {agent}")
            acts = tuple(rest.split())
            if len(set(acts)) != len(acts):
                _fail(lineno, "repeated action name")
            avail[(state, agent)] = acts
            continue

        if line.startswith("go "):
            m = _GO_RE.match(line)
            if not m:
                _fail(lineno, "expected 'go STATE (a1,b1,...) -> STATE'")
            state, profile_text, target = m.groups()
            if state not in states:
                _fail(lineno, f"unknown state {state!r}")
            if target not in states:
                _fail(lineno, f"unknown state {target!r}")
            profile = tuple(p.strip() for p in profile_text.split(","))
            if len(profile) != len(agents) or any(not p for p in profile):
                _fail(lineno, f"profile must list one action per agent ({len(agents)} expected)")
            if (state, profile) in outcome:
                _fail(lineno, f"duplicate go line for ({','.join(profile)}) at {state}")
            outcome[(state, profile)] = target
            continue

        _fail(lineno, f"unrecognized line {line!r}")

    if agents is None or states is None:
        raise ParseError("model text must declare agents: and states:")

    valuation: dict[str, frozenset] = {}
    for state, atoms in labels.items():
        for atom in atoms:
            valuation.setdefault(atom, frozenset())
            valuation[atom] |= {state}

    return GameModel(agents=agents, states=states, avail=avail,
                     outcome=outcome, valuation=valuation)


def render_model(model: GameModel) -> str:
    """Canonical text for a model; parsing it back reproduces the model."""
    lines = [
        "agents: " + " ".join(model.agents),
        "states: " + " ".join(model.states),
    ]
    for s in model.states:
        atoms = sorted(a for a, ss in model.valuation.items() if s in ss)
        if atoms:
            lines.append(f"labels {s}: " + " ".join(atoms))
    for s in model.states:
        for a in model.agents:
            acts = model.avail.get((s, a))
            if acts:
                lines.append(f"actions {s} {a}: " + " ".join(acts))
    for s in model.states:
        for profile in model.profiles(s):
            target = model.outcome.get((s, profile))
            if target is not None:
                lines.append(f"go {s} ({','.join(profile)}) -> {target}")
    # keep any outcome entries that sit outside the availability product
    # (invalid models still round-trip through the formatter)
    listed = {(s, p) for s in model.states for p in model.profiles(s)}
    for (s, profile), target in sorted(model.outcome.items()):
        if (s, profile) not in listed:
            lines.append(f"go {s} ({','.join(profile)}) -> {target}")
    return "\n".join(lines) + "\n"


def parse_relation(text: str, model: GameModel | None = None) -> frozenset:
    """Parse `s ~ t` lines into a set of ordered state pairs."""
    pairs = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        parts = line.split("~")
        if len(parts) != 2:
            _fail(lineno, "expected 's ~ t'")
        left, right = parts[0].strip(), parts[1].strip()
        if not left or not right:
            _fail(lineno, "expected 's ~ t'")
        if model is not None:
            for s in (left, right):
                if not model.has_state(s):
                    _fail(lineno, f"unknown state {s!r}")
        pairs.add((left, right))
    return frozenset(pairs)


def render_relation(pairs, model: GameModel | None = None) -> str:
    """Canonical text for a relation, ordered by state position when known."""
    if model is not None:
        idx = model.state_index
        ordering = sorted(pairs, key=lambda p: (idx.get(p[0], -1), idx.get(p[1], -1), p))
    else:
        ordering = sorted(pairs)
    return "\n".join(f"{s} ~ {t}" for s, t in ordering) + ("\n" if ordering else "")
