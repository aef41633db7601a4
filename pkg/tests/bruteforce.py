"""Independent brute-force oracle for plan enumeration and feasibility.

Everything here is re-derived from scratch on plain dicts/strings: its
own admissibility rules, its own stack/reach evaluation, and exhaustive
recursion over action sequences.  It deliberately shares no logic with
the package's search or strategy code so it can serve as a second
opinion; only dataclass fields are read at the boundary.
"""

from __future__ import annotations

ORI_ORDER = ("vert", "horiz_x", "horiz_y")

# An oracle state maps object name -> (supporter name, orientation name);
# an oracle action is (object, destination cell name, orientation name).


def state_from_view(view):
    return {
        obj: (_ename(view.state.at[obj]), view.state.ori[obj].value) for obj in view.state.at
    }


def shapes_from_view(view):
    # Straight from scene truth; never touches the query ledger.
    return {obj: phys.shape for obj, phys in view.naming.items()}


def goal_from(goal):
    literals = []
    for lit in goal.literals:
        kind = type(lit).__name__
        if kind == "AtLiteral":
            literals.append(("at", lit.obj, _ename(lit.entity)))
        elif kind == "OriLiteral":
            literals.append(("ori", lit.obj, lit.orient.value))
        else:
            literals.append(("below", _ename(lit.base), lit.obj))
    return literals


def rules_from(catalog):
    unstable = [
        (
            r.top_shape,
            r.top_orient.value if r.top_orient else None,
            r.bottom_shape,
            r.bottom_orient.value if r.bottom_orient else None,
        )
        for r in catalog.unstable_rules
    ]
    blockers = {(r.shape, r.orient.value) for r in catalog.blocker_rules}
    return unstable, blockers


def occl_from(occl):
    return {(f.name, b.name) for f, b in occl.pairs}


def cells_from(occl):
    return sorted(
        f"loc_{x}x{y}" for x in range(occl.width) for y in range(occl.depth)
    )


def plan_key(plan):
    """Package plan -> oracle plan tuple."""
    return tuple((a.obj, _ename(a.dest), a.orient.value) for a in plan)


def _ename(entity):
    return entity if isinstance(entity, str) else entity.name


def _occupant(state, entity_name):
    for obj, (supp, _) in state.items():
        if supp == entity_name:
            return obj
    return None


def _base(state, name):
    while name in state:
        name = state[name][0]
    return name


def _top_without(state, cell_name, lifted):
    current = cell_name
    while True:
        above = _occupant(state, current)
        if above is None or above == lifted:
            return current
        current = above


def _clear(state, obj):
    return _occupant(state, obj) is None


def _normalize(state, obj, cell_name):
    return _top_without(state, cell_name, lifted=obj)


def actions(state, cells):
    """All admissible (obj, cell, orientation) triples, in canonical order."""
    result = []
    for obj in sorted(state):
        if not _clear(state, obj):
            continue
        for cell in cells:
            if _normalize(state, obj, cell) == state[obj][0]:
                continue
            for ori in ORI_ORDER:
                result.append((obj, cell, ori))
    return result


def apply(state, action):
    obj, cell, ori = action
    new = dict(state)
    new[obj] = (_normalize(state, obj, cell), ori)
    return new


def goal_ok(state, literals):
    for lit in literals:
        if lit[0] == "at":
            if state[lit[1]][0] != lit[2]:
                return False
        elif lit[0] == "ori":
            if state[lit[1]][1] != lit[2]:
                return False
        else:
            _, base, obj = lit
            name = state[obj][0]
            while True:
                if name == base:
                    break
                if name not in state:
                    return False
                name = state[name][0]
    return True


def plans_of_length(state, literals, cells, length):
    """Every admissible action sequence of exactly `length` steps that
    ends in a goal state."""
    if length == 0:
        return [()] if goal_ok(state, literals) else []
    found = []
    for action in actions(state, cells):
        for tail in plans_of_length(apply(state, action), literals, cells, length - 1):
            found.append((action,) + tail)
    return found


def plans_by_length(state, literals, cells, maxstep):
    return {length: plans_of_length(state, literals, cells, length) for length in range(maxstep + 1)}


def _rule_hit(rule, top_shape, top_ori, bottom_shape, bottom_ori):
    ts, to, bs, bo = rule
    return (
        ts in (None, top_shape)
        and to in (None, top_ori)
        and bs in (None, bottom_shape)
        and bo in (None, bottom_ori)
    )


def step_infeasible(state, action, shapes, unstable, blockers, occl_pairs):
    """Direct ground-truth evaluation of one step's external conditions."""
    obj, cell, ori = action
    target = _normalize(state, obj, cell)
    if target in state:  # stacking onto an object
        if any(
            _rule_hit(rule, shapes[obj], ori, shapes[target], state[target][1])
            for rule in unstable
        ):
            return True
    pick_cell = _base(state, obj)
    place_cell = target if target not in state else _base(state, target)
    for other in state:
        if other == obj:
            continue
        if (shapes[other], state[other][1]) not in blockers:
            continue
        other_base = _base(state, other)
        if (other_base, pick_cell) in occl_pairs or (other_base, place_cell) in occl_pairs:
            return True
    return False


def plan_feasible(state, plan, shapes, unstable, blockers, occl_pairs):
    for action in plan:
        if step_infeasible(state, action, shapes, unstable, blockers, occl_pairs):
            return False
        state = apply(state, action)
    return True


def feasible_plans_by_length(state, literals, cells, maxstep, shapes, unstable, blockers, occl_pairs):
    by_length = plans_by_length(state, literals, cells, maxstep)
    return {
        length: [
            p for p in plans if plan_feasible(state, p, shapes, unstable, blockers, occl_pairs)
        ]
        for length, plans in by_length.items()
    }
