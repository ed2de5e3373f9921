"""Knowing-how: strong executability and conformant plan search.

Plans are sequences of action ids.  The search runs over belief states
(sets of states encoded as bitmasks): from a set ``T`` an action is
applicable when every member has a successor, and the next belief state
is the union of their successors.  A belief state after ``k`` steps is
exactly the union of the per-state reachable sets, so requiring every
member to have a successor at every step is the same as requiring the
whole plan to be strongly executable from each start state.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .models import LtsModel, UnknownSymbol, require_world


class NotExecutable(ValueError):
    """A plan cannot be continued from some reachable state."""

    def __init__(self, prefix: tuple, state: str, action: str):
        self.prefix = tuple(prefix)
        self.state = state
        self.action = action
        done = "".join(prefix) or "the empty prefix"
        super().__init__(f"after {done}, state {state!r} has no {action!r}-successor")


@dataclass(frozen=True)
class KhResult:
    holds: bool
    plan: Optional[tuple] = None

    def __iter__(self):
        return iter((self.holds, self.plan))

    def __bool__(self):
        return self.holds


def _image(succ: tuple, belief: int) -> Optional[int]:
    """Successor belief state, or None if some member is stuck."""
    out = 0
    w = 0
    while belief:
        if belief & 1:
            s = succ[w]
            if s == 0:
                return None
            out |= s
        belief >>= 1
        w += 1
    return out


def belief_search(n: int, actions: list, pre: int, goal: int) -> Optional[tuple]:
    """Shortest plan (as action indices) taking belief ``pre`` into
    ``goal``; None when there is none.  Ties go to the lower action index.
    """
    if pre & ~goal == 0:
        return ()
    seen = {pre}
    queue = deque([(pre, ())])
    while queue:
        belief, plan = queue.popleft()
        for k, succ in enumerate(actions):
            nxt = _image(succ, belief)
            if nxt is None:
                continue
            if nxt & ~goal == 0:
                return plan + (k,)
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, plan + (k,)))
    return None


def reachable_beliefs(n: int, actions: list, pre: int) -> set:
    """All belief states reachable from ``pre`` by executable plans."""
    seen = {pre}
    stack = [pre]
    while stack:
        b = stack.pop()
        for succ in actions:
            nxt = _image(succ, b)
            if nxt is not None and nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def kh_table(n: int, actions: list) -> np.ndarray:
    """Boolean table ``T[pre, goal]`` of plan existence for all masks."""
    size = 1 << n
    table = np.zeros((size, size), dtype=bool)
    goals = np.arange(size)
    for pre in range(size):
        for b in reachable_beliefs(n, actions, pre):
            table[pre] |= (b & ~goals) == 0
    return table


# ---------------------------------------------------------------------------
# Model-level API


def _check_plan(m: LtsModel, plan) -> tuple:
    plan = tuple(plan)
    for a in plan:
        if a not in m.trans:
            raise UnknownSymbol(f"unknown action {a!r}")
    return plan


def parse_plan(text: str, m: LtsModel) -> tuple:
    """Split a plan string: single-letter actions may be run together
    ("ru"), otherwise separate them with commas or spaces."""
    text = text.strip()
    if text in ("", "-", "eps", "ε"):
        return ()
    if "," in text or " " in text:
        return tuple(t for t in text.replace(",", " ").split())
    if text in m.trans:
        return (text,)
    return tuple(text)


def strongly_executable(m: LtsModel, s: str, plan) -> bool:
    require_world(m, s)
    plan = _check_plan(m, plan)
    frontier = {s}
    for a in plan:
        nxt = set()
        for t in frontier:
            succ = m.successors(a, t)
            if not succ:
                return False
            nxt.update(succ)
        frontier = nxt
    return True


def execute(m: LtsModel, belief, plan) -> frozenset:
    """States reachable from ``belief`` by ``plan``; raises
    :class:`NotExecutable` naming the failing prefix and state."""
    plan = _check_plan(m, plan)
    frontier = set(belief)
    for w in frontier:
        require_world(m, w)
    for k, a in enumerate(plan):
        nxt = set()
        for t in sorted(frontier, key=m.states.index):
            succ = m.successors(a, t)
            if not succ:
                raise NotExecutable(plan[:k], t, a)
            nxt.update(succ)
        frontier = nxt
    return frozenset(frontier)


def eval_kh(m: LtsModel, pre, goal) -> KhResult:
    """Decide ``Kh(pre, goal)`` and return the shortest witness plan."""
    from .semantics import compile_model, extension_mask

    st = compile_model(m)
    p = extension_mask(m, pre)
    g = extension_mask(m, goal)
    found = belief_search(st.n, [st.succ[a] for a in m.actions], p, g)
    if found is None:
        return KhResult(False, None)
    return KhResult(True, tuple(m.actions[k] for k in found))


def eval_u(m: LtsModel, phi) -> bool:
    """Universal modality: ``phi`` holds at every state."""
    from .semantics import truth_set

    return truth_set(m, phi) == set(m.states)


def format_plan(plan) -> str:
    if not plan:
        return "ε"
    if all(len(a) == 1 for a in plan):
        return "".join(plan)
    return ",".join(plan)
