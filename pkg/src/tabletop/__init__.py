"""Tabletop manipulation planning with pluggable perception integration."""

from .errors import (
    AssociationFailure,
    CellOutOfRange,
    HorizonExhausted,
    InadmissibleAction,
    InvalidState,
    ParseError,
    TabletopError,
    UnknownEntity,
    UnknownObject,
    UnknownPreset,
    UnknownShape,
)
from .geometry import (
    BlockerRule,
    OcclusionRelation,
    ReachCheck,
    ShapeCatalog,
    StackCheck,
    StackRule,
    collect_checks,
    reach_blocked,
    unstackable,
)
from .formats import (
    bundled_path,
    load_instance,
    parse_catalog,
    parse_instance,
    parse_plan,
    render_plan,
)
from .perception import (
    PerceptView,
    PhysicalObject,
    SceneTruth,
    TaskSpec,
    bottom_up,
    occlusion_of,
)
from .search import (
    Above,
    ActionPattern,
    ConditionalProhibition,
    Plan,
    enumerate_plans,
    prohibition_blocks,
)
from .strategies import (
    STRATEGIES,
    FeasibilityVerdict,
    LoadedInstance,
    PlanRequest,
    RunOutcome,
    derive_constraints,
    precompile_checks,
    run_strategy,
    verify_plan,
)
from .world import (
    Cell,
    DomainConfig,
    Goal,
    AtLiteral,
    BelowLiteral,
    MoveAction,
    Orientation,
    OriLiteral,
    State,
    apply_action,
    enumerate_actions,
    goal_holds,
    is_below,
)

__version__ = "0.1.0"
