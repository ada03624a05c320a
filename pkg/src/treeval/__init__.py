"""Exact arithmetic for trees of valuation rings at desk scale.

The package implements, over number fields and rational function fields:

* finite trees of valuation rings and generic choice systems,
* exact number field arithmetic (factorization, splitting fields,
  automorphism groups),
* enumeration of the extensions of a p-adic valuation along a finite
  normal extension, with exact values and residues,
* Gauss and composed (rank-2) valuations on F(t),
* the averaging measure on structure extensions, and
* a decision procedure for root-bounded existential sentences.

Everything is exact: rationals are `fractions.Fraction`, finite fields
use a fixed canonical modulus, and no floating point is involved.
"""

from treeval.errors import (
    InvariantViolation,
    ParseError,
    PreconditionError,
    ResourceBoundError,
    TreevalError,
    UnsupportedHandleError,
)
from treeval.polys import QQ, Poly
from treeval.trees import CharFunction, ChoiceSystem, FiniteTree, Poset
from treeval.numfield import (
    FieldElement,
    FieldEmbedding,
    NumberField,
    QQ_FIELD,
    automorphisms,
    minimal_polynomial,
    rational_embedding,
    relative_automorphisms,
    splitting_field,
)
from treeval.qfactor import factor_over_Q
from treeval.padic import (
    Membership,
    ResidueField,
    ValuationHandle,
    ValueVec,
    count_extensions,
    extend_valuation,
    galois_orbit_check,
    padic_handle_on_Q,
    padic_handles,
    pushforward,
    restrict_handle,
    trivial_handle,
)
from treeval.ratfunc import RatFunc, RatFuncField
from treeval.funcfield import (
    ComposedHandle,
    GaussHandle,
    Place,
    count_fine_extensions,
    gauss_extend,
    join,
    trivial_gauss,
)
from treeval.structures import (
    TP0Structure,
    StructureExtensionSet,
    enumerate_structure_extensions,
    fiber_report,
    restrict_structure,
    tree_from_valuations,
)
from treeval.formulas import evaluate, parse, print_formula
from treeval.measure import (
    MeasureResult,
    check_axioms,
    determining_extension,
    invariance_under_closed_residue_extension,
    measure,
    measure_stable_under,
)
from treeval.decide import (
    ConsistencyVerdict,
    PsiSentence,
    build_witness,
    consistency_equals_positive_measure,
    decide_psi,
)

__version__ = "0.1.0"
