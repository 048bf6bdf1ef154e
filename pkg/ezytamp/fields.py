import math

ACTION_NAVIGATE = "navigate"
ACTION_PICKUP = "pickup"
ACTION_PLACE = "place"

ACTION_LIST = [ACTION_NAVIGATE, ACTION_PICKUP, ACTION_PLACE]
MANIPULATION_LIST = [ACTION_PICKUP, ACTION_PLACE]

COST_KIND_NAV = "nav"
COST_KIND_MAN = "man"

LABEL_HARD = "hard"
LABEL_MEDIUM = "medium"
LABEL_EASY = "easy"
LABEL_UNKNOWN = "unknown"

LABEL_LIST = [LABEL_HARD, LABEL_MEDIUM, LABEL_EASY, LABEL_UNKNOWN]

LABEL_VALUE_MAP = {
    LABEL_HARD: 20.0,
    LABEL_MEDIUM: 10.0,
    LABEL_EASY: 5.0,
    LABEL_UNKNOWN: 0.0,
}

ENCODE_LOWER = 5.0
"""Costs below this value are easy."""
ENCODE_UPPER = 15.0
"""Costs above this value are hard."""

RULE_PRECONDITION = "precondition"
RULE_OBJECT_MISSING = "object-missing"
RULE_FURNITURE_MISSING = "furniture-missing"
RULE_ROOM_MISSING = "room-missing"
RULE_PICKUP_WRONG_FURNITURE = "pickup-wrong-furniture"
RULE_PLACE_WRONG_FURNITURE = "place-wrong-furniture"
RULE_OBJECT_NOT_HELD = "object-not-held"

RULE_LIST = [
    v for k, v in locals().copy().items() if isinstance(k, str) and k.startswith("RULE_")
]

ALGO_INTER_LLM = "inter_llm"
ALGO_OPEN_LOOP = "open_loop"
ALGO_REACTIVE = "reactive"

ALGO_LIST = [ALGO_INTER_LLM, ALGO_OPEN_LOOP, ALGO_REACTIVE]

ALGO_ALIAS_MAP = {
    "inter": ALGO_INTER_LLM,
    "openloop": ALGO_OPEN_LOOP,
    "reactive": ALGO_REACTIVE,
    ALGO_INTER_LLM: ALGO_INTER_LLM,
    ALGO_OPEN_LOOP: ALGO_OPEN_LOOP,
}

BACKEND_SCRIPTED = "scripted"
BACKEND_LLM = "llm"

BACKEND_LIST = [BACKEND_SCRIPTED, BACKEND_LLM]

NAV_MODE_LITERAL = "literal"
NAV_MODE_NORMALIZED = "normalized"

NAV_MODE_LIST = [NAV_MODE_LITERAL, NAV_MODE_NORMALIZED]

CELL_FREE = "free"
CELL_OCCUPIED = "occupied"
CELL_DOOR = "door"

CELL_CHAR_MAP = {".": CELL_FREE, "#": CELL_OCCUPIED, "D": CELL_DOOR}
CELL_LABEL_MAP = {v: k for k, v in CELL_CHAR_MAP.items()}

"""
Hyperparameters
"""
DEFAULT_M_CANDIDATES = 3
DEFAULT_SIGMA = 0.8
DEFAULT_GAMMA_NAV = 10.0
DEFAULT_GAMMA_MAN = 100.0
DEFAULT_GAMMA_OBJ = 100.0
DEFAULT_EPSILON_D = 1.0
DEFAULT_N_L = 5
DEFAULT_MAX_RETRIES = 5

DEFAULT_RETRY_BUDGET_MAP = {
    ALGO_INTER_LLM: 1,
    ALGO_OPEN_LOOP: 1,
    ALGO_REACTIVE: 3,
}

"""
World
"""
DEFAULT_CELL_SIZE = 0.25
DEFAULT_ROBOT_SPEED = 0.5
DEFAULT_TURN_TIME = 0.5
DEFAULT_COLLISION_TIME_PENALTY = 8.0
DEFAULT_COLLISION_DETOUR_M = 1.0

FORWARD_STEP_M = 0.05
HEADING_STEP_DEG = 45

SQRT2 = math.sqrt(2.0)

START_KEY = "<start>"
"""Navigation ledger key used when the robot is not at any furniture."""

"""
Metrics
"""
METRIC_CC_NAV = "cc_nav"
METRIC_D_NAV = "d_nav"
METRIC_SR_MAN = "sr_man"
METRIC_T_EXE = "t_exe"
METRIC_SR_OBJ = "sr_obj"
METRIC_M_OVERALL = "m_overall"
METRIC_J_TOTAL = "j_total"

"""
Low level controls
"""
CONTROL_FORWARD = "forward"
CONTROL_TURN_LEFT_45 = "turn_left_45"
CONTROL_TURN_RIGHT_45 = "turn_right_45"
CONTROL_PICK_AT = "pick_at"
CONTROL_PLACE_AT = "place_at"

CONTROL_LIST = [
    CONTROL_FORWARD,
    CONTROL_TURN_LEFT_45,
    CONTROL_TURN_RIGHT_45,
    CONTROL_PICK_AT,
    CONTROL_PLACE_AT,
]
