"""pvk: a theorem-proving kernel and proof-certificate checker built on
hash-consed expression DAGs over nine primitive kinds, six inference rules,
and a reduction calculus for instantiation."""

from .exprs import (Conditional, Expression, ExprRange, ExprTuple, IndexedVar,
                    Lambda, Literal, NamedExprs, Operation, Variable, build,
                    canonical_form, expr_id, free_vars)
from .kernel import (Judgment, Proof, ProofStep, assume, deduce,
                     export_certificate, export_proof, generalize,
                     instantiate, invoke, literal_generalize, modus_ponens,
                     proof_certificate)
from .reduce import (Fuel, ReductionResult, ReplacementMap, apply_lambda,
                     equality_reduce, expand_range, relabel_for_capture,
                     replace_operation, substitute)
from .sexpr import parse, serialize
from .style import StyledExpr, format_expr, format_judgment, style_options, with_style
from .theory import Presumptions, Registry, load_stdlib

__version__ = "0.1.0"
