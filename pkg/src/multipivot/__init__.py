"""Average-case analysis of k-pivot Quicksort.

The package pairs an exact evaluator of the expected-cost recurrence with the
analytic solution built from the roots of the indicial polynomial, and an
instrumented sorter for empirical checks.
"""

from multipivot.asymptotic import (
    AsymptoticEstimate,
    SeriesReconstruction,
    asymptotic_estimate,
    convergence_table,
    series_reconstruct,
    theorem_estimate,
)
from multipivot.constants import (
    IntegrationConstants,
    closed_form_s_minus2,
    solve_constants,
)
from multipivot.indicial import IndicialPolynomial, build_indicial, find_roots
from multipivot.num_core import harmonic, harmonic2, stirling2
from multipivot.oracle import ExactCostTable, TollModel, exact_cost_table

__version__ = "0.1.0"

__all__ = [
    "AsymptoticEstimate",
    "ExactCostTable",
    "IndicialPolynomial",
    "IntegrationConstants",
    "SeriesReconstruction",
    "TollModel",
    "asymptotic_estimate",
    "build_indicial",
    "closed_form_s_minus2",
    "convergence_table",
    "exact_cost_table",
    "find_roots",
    "harmonic",
    "harmonic2",
    "series_reconstruct",
    "solve_constants",
    "stirling2",
    "theorem_estimate",
]
