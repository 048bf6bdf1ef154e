from typing import Dict, List, Optional

from ezytamp import fields as fld
from ezytamp.planner.context import Violation
from ezytamp.scene.graph import SceneGraph
from ezytamp.scene.state import HighLevelState, Navigate, Pickup, TaskPlan


def check_feasibility(
    plan: TaskPlan, state: HighLevelState, graph: SceneGraph
) -> List[Violation]:
    """Symbolically simulate plan from state and report violations.

    Each action is checked for graph grounding and for its preconditions;
    at most one violation is reported per action, in this priority:

    - navigate: furniture-missing, room-missing, precondition
    - pickup: object-missing, furniture-missing, pickup-wrong-furniture,
      precondition
    - place: object-missing, furniture-missing, object-not-held,
      place-wrong-furniture

    The effects of every action are applied afterwards, violated or not, so
    one fault does not cascade into the following actions. After a navigate
    that is not grounded the robot location is unknown and the wrong-furniture
    rules are not checked until the next grounded navigate. Neither plan,
    state nor graph is modified.

    Parameters
    ----------
    plan: TaskPlan
        Plan to check.
    state: HighLevelState
        State the plan starts from.
    graph: SceneGraph
        Scene graph the parameters must be grounded in.

    Returns
    -------
    List[Violation]
        Every violation found, in action order.
    """
    holding: Optional[str] = state.holding
    at_furniture: Optional[str] = state.at_furniture
    lost = False
    location: Dict[str, Optional[str]] = {i.name: i.on_furniture for i in graph.objects}

    out: List[Violation] = []

    def report(i: int, rule: str, detail: str):
        out.append(Violation(action_index=i, rule=rule, detail=detail))

    for i, action in enumerate(plan):
        if isinstance(action, Navigate):
            f, r = action.furniture, action.room
            if not graph.has_furniture(f):
                report(i, fld.RULE_FURNITURE_MISSING, f"{f} is not in the scene graph")
            elif not graph.has_room(r):
                report(i, fld.RULE_ROOM_MISSING, f"{r} is not in the scene graph")
            elif graph.room_of(f) != r:
                report(i, fld.RULE_PRECONDITION, f"{f} is in {graph.room_of(f)}, not {r}")
            lost = not graph.has_furniture(f) or not graph.has_room(r)
            at_furniture = f
            continue

        o, f = action.obj, action.furniture
        if not graph.has_object(o):
            report(i, fld.RULE_OBJECT_MISSING, f"{o} is not in the scene graph")
        elif not graph.has_furniture(f):
            report(i, fld.RULE_FURNITURE_MISSING, f"{f} is not in the scene graph")
        elif isinstance(action, Pickup):
            if not lost and at_furniture != f:
                report(
                    i,
                    fld.RULE_PICKUP_WRONG_FURNITURE,
                    f"{o} is picked from {f} but robot navigated to {at_furniture}",
                )
            elif holding is not None:
                report(i, fld.RULE_PRECONDITION, f"hand is not free, holding {holding}")
            elif location.get(o) != f:
                report(i, fld.RULE_PRECONDITION, f"{o} is not on {f}")
        elif holding != o:
            report(i, fld.RULE_OBJECT_NOT_HELD, f"{o} is neither picked up nor in hand")
        elif not lost and at_furniture != f:
            report(
                i,
                fld.RULE_PLACE_WRONG_FURNITURE,
                f"{o} is placed on {f} but robot navigated to {at_furniture}",
            )

        if isinstance(action, Pickup):
            holding = o
            location[o] = None
        else:
            holding = None
            location[o] = f

    return out
