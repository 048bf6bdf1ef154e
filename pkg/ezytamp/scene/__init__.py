from ezytamp.scene.graph import (
    FurnitureNode,
    ObjectNode,
    RoomNode,
    SceneGraph,
    SemanticAttributes,
    load_scene_graph,
    serialize_scene_graph,
)
from ezytamp.scene.grid import (
    OccupancyGrid,
    load_occupancy_grid,
    serialize_occupancy_grid,
)
from ezytamp.scene.state import (
    HighLevelAction,
    HighLevelState,
    LowLevelControl,
    Navigate,
    Pickup,
    Place,
    TaskPlan,
    action_to_list,
    parse_action,
)
