"""
Automaton generators for HOObs
Seeded random automata and parameterized benchmark families
"""

import numpy as np
from typing import List

from automata.model import Automaton

EVENT_ALPHABET = "abcdefgh"


def random_automaton(rng: np.random.Generator, n_states: int, n_events: int,
                     density: float = 0.35, n_initial: int = 1,
                     acyclic: bool = False) -> Automaton:
    """
    Draw a random nondeterministic automaton

    Args:
        rng: numpy random generator (seed it for reproducible suites)
        n_states: Number of states, named q0, q1, ...
        n_events: Number of events, named a, b, ...
        density: Probability of each (source, event, target) transition
        n_initial: Number of initial states
        acyclic: Only allow transitions to higher-numbered states

    Returns:
        The generated automaton
    """
    mask = rng.random((n_states, n_events, n_states)) < density
    if acyclic:
        mask &= np.triu(np.ones((n_states, n_states), dtype=bool), k=1)[:, None, :]
    transitions = [(int(s), int(e), int(t)) for s, e, t in np.argwhere(mask)]
    initial = rng.choice(n_states, size=min(max(n_initial, 1), n_states), replace=False)
    return Automaton([f"q{i}" for i in range(n_states)], list(EVENT_ALPHABET[:n_events]),
                     transitions, [int(q) for q in initial])


def random_observable(rng: np.random.Generator, automaton: Automaton,
                      p: float = 0.5) -> List[str]:
    """Draw a random observable event subset"""
    keep = rng.random(automaton.num_events) < p
    return [name for name, flag in zip(automaton.event_names, keep) if flag]


def counter_automaton(k: int) -> Automaton:
    """
    k-bit counter with a hidden shortcut

    States 0..2^k-1 start at 0. `inc` counts modulo 2^k, `tick` loops
    everywhere and `jump` moves 0 to 1 like `inc` does.
    """
    size = 2 ** k
    transitions = []
    for value in range(size):
        transitions.append((str(value), "inc", str((value + 1) % size)))
        transitions.append((str(value), "tick", str(value)))
    transitions.append(("0", "jump", "1"))
    return Automaton.from_names([str(value) for value in range(size)], ["inc", "jump", "tick"],
                                transitions, ["0"])


def explosive_automaton() -> Automaton:
    """
    8-state "seventh symbol from the end is a" automaton

    Its observer over {a,b} has 2^7 reachable states.
    """
    transitions = [("0", "a", "0"), ("0", "b", "0"), ("0", "a", "1")]
    for i in range(1, 7):
        transitions.append((str(i), "a", str(i + 1)))
        transitions.append((str(i), "b", str(i + 1)))
    return Automaton.from_names([str(i) for i in range(8)], ["a", "b"], transitions, ["0"])


def removal_automaton(n: int = 8) -> Automaton:
    """
    n states, all initial, with events x0..x(n-1) and y0..y(n-1)

    xj and yj loop on every state except j, where they are undefined. An agent
    seeing the x events and a second agent seeing every event can be left with
    any pair of estimates Y ⊆ X, Y nonempty, so the order-2 observer has
    3^n - 2^n states and the third-level composition has n·3^(n-1).
    """
    states = [str(i) for i in range(n)]
    events = [f"x{j}" for j in range(n)] + [f"y{j}" for j in range(n)]
    transitions = [(state, event, state) for state in states for event in events
                   if event[1:] != state]
    return Automaton.from_names(states, events, transitions, states)
