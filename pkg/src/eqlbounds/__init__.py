"""Learn linear inequality constraints that bound a dataset's feasible region.

A small equation-learner network (one symbolic layer of identity/constant
units, one linear readout) is trained with a three-term boundary loss so
that its zero level set hugs the edge of the data.  The trained network
collapses into a canonical linear inequality that can be scored, pruned,
and saved.
"""

from .datamodel import (
    COEFF_EPS,
    Dataset,
    DatasetError,
    Direction,
    EmptyDatasetError,
    EpochRecord,
    LinearConstraint,
    LossConfig,
    NonNumericError,
    RaggedRowError,
    TrainConfig,
    TrainReport,
    constraint_from_dict,
    constraint_text,
    constraint_to_dict,
    load_constraint,
    load_dataset,
    save_constraint,
    save_dataset,
)
from .datagen import (
    BallCap,
    LinearCut,
    PAPER_PRESETS,
    RegionSpec,
    RejectionBudgetExceededError,
    generate,
    load_region_spec,
    paper_dataset,
    save_region_spec,
)
from .extract import (
    DegenerateConstraintError,
    collapse_affine,
    extract_constraint,
    prune,
    violation_rate,
    violation_report,
)
from .loss import (
    LossBreakdown,
    directional_errors,
    loss_total,
    p_gamma_subset,
    term_anchor,
    term_e,
    term_p,
    term_reg,
)
from .network import (
    DEFAULT_PRIMITIVES,
    EqlNetwork,
    IMPLEMENTED_PRIMITIVES,
    Primitive,
    UnsupportedPrimitiveError,
    apply_mask,
    forward,
    forward_batch,
    initialize,
    load_checkpoint,
    save_checkpoint,
)
from .trainer import (
    DivergenceError,
    Gradients,
    NonFiniteGradientError,
    configs_from_mapping,
    export_history_csv,
    gradients,
    load_configs,
    train,
    train_multi,
)

__version__ = "0.1.0"

__all__ = [
    "BallCap",
    "COEFF_EPS",
    "DEFAULT_PRIMITIVES",
    "Dataset",
    "DatasetError",
    "DegenerateConstraintError",
    "Direction",
    "DivergenceError",
    "EmptyDatasetError",
    "EpochRecord",
    "EqlNetwork",
    "Gradients",
    "IMPLEMENTED_PRIMITIVES",
    "LinearConstraint",
    "LinearCut",
    "LossBreakdown",
    "LossConfig",
    "NonFiniteGradientError",
    "NonNumericError",
    "PAPER_PRESETS",
    "Primitive",
    "RaggedRowError",
    "RegionSpec",
    "RejectionBudgetExceededError",
    "TrainConfig",
    "TrainReport",
    "UnsupportedPrimitiveError",
    "apply_mask",
    "collapse_affine",
    "configs_from_mapping",
    "constraint_from_dict",
    "constraint_text",
    "constraint_to_dict",
    "directional_errors",
    "export_history_csv",
    "extract_constraint",
    "forward",
    "forward_batch",
    "generate",
    "gradients",
    "initialize",
    "load_checkpoint",
    "load_configs",
    "load_constraint",
    "load_dataset",
    "load_region_spec",
    "loss_total",
    "p_gamma_subset",
    "paper_dataset",
    "prune",
    "save_checkpoint",
    "save_constraint",
    "save_dataset",
    "save_region_spec",
    "term_anchor",
    "term_e",
    "term_p",
    "term_reg",
    "train",
    "train_multi",
    "violation_rate",
    "violation_report",
]
