"""Decision procedure, Kripke countermodels, and proof transformations for
intuitionistic strong Löb logic."""

import sys

if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

from .errors import (
    ContractError,
    InterpolationError,
    IslError,
    ParseError,
    ProofCheckError,
    TransformError,
)
from .formulas import (
    BOT,
    TOP,
    And,
    Atom,
    Bottom,
    Box,
    Formula,
    Imp,
    Or,
    SearchOrderContext,
    Sequent,
    box_count,
    degree,
    multiset_less,
    neg,
    sequent,
    sequent_less,
    weight,
)
from .parsing import (
    SourceSpan,
    parse_formula,
    parse_sequent,
    parse_split_sequent,
    render,
    render_sequent,
)
from .g4 import (
    G4Node,
    SearchNode,
    backward_applications,
    check_g4_proof,
    decide,
    extract_proof,
    is_extended_axiom,
    is_irreducible,
    search,
    verify_g4,
)
from .g3 import (
    CutMeasure,
    G3Node,
    check_g3_proof,
    contract,
    critical_inferences,
    dwl,
    eliminate_cuts,
    ext_axiom_g3,
    g4_to_g3,
    grade,
    height,
    invert,
    node_sequent,
    reduce_topmost_cut,
    strong_weaken_down,
    strong_weaken_up,
    verify_g3,
    weaken,
)
from .semantics import (
    KripkeModel,
    countermodel,
    enumerate_models,
    forces,
    generated_submodel,
    refutes,
    validate_model,
)
from .interpolation import SplitSequent, interpolate
from .generate import FuzzConfig, corpus

__all__ = [name for name in dir() if not name.startswith("_")]
