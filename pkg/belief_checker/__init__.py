from .errors import (
    BeliefCheckerError,
    ConfigError,
    ContractViolationError,
    FormulaSyntaxError,
    ModelFormatError,
    ModelLookupError,
    ModelValidationError,
    ScenarioError,
    UnresolvedIdentifierError,
)
from .model import (
    ActionFlags,
    BeliefRelation,
    IndexicalGroup,
    Model,
    ModelBuilder,
    Point,
    Run,
    TimeStampFn,
    ValidationReport,
    Violation,
    membership,
    repair_kd45,
    successors,
    validate_model,
    valuation,
)
from .model_io import dump_model, load_model, model_from_dict, model_to_dict
from .formula import Formula, parse, render, subformulas
from .checker import (
    ActionStamped,
    Checker,
    Extension,
    Standard,
    TimeStamped,
    bounded_nesting_oracle,
    check,
    extension,
    reachable_set,
)
from .properties import (
    JbReport,
    StampCertification,
    TheoremReport,
    check_jb,
    chi_alw_encoding,
    chi_alw_encoding_equiv,
    chi_extension,
    clock_stamp,
    embed_stamp_as_flags,
    stamp_certification,
    verify_theorem_1_2,
    verify_theorem_3_4,
)
from .config import CheckerOpts, edit_opts, load_opts
