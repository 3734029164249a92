"""Matroid intersection toolkit: oracles, grid gadgets, reductions and Monotone Local Search."""

from .core import (AxiomVerdict, FoolingCertificate, GuardError, Oracle, QueryReport,
                   audited_es_run, contract, greedy_basis, is_basis, rank, restrict,
                   verify_matroid_axioms)
from .zoo import (SetFamilyOracle, SUMatrix, g_matroid, graphic_matroid, grid_partition_matroid,
                  is_L_perfect, partition_matroid, truncate, uniform_matroid)
from .gadgets import (CNFInstance, Digraph, EMIInstance, ESInstance, LMIInstance, ThreeDMInstance,
                      canonical_bijection, encode_3dm, encode_hampath, enumerate_su_matrices,
                      es_from_sat, reduce_es_to_emi, reduce_es_to_lmi, su_matrix_for_set)
from .solvers import (SolveOutcome, brute_force_emi, brute_force_lmi, extension_solve,
                      matroid_intersection_2, parameterized_lmi_stand_in, solve_es_bruteforce,
                      solve_es_via_emi_reduction, solve_es_via_lmi_reduction)
from .mls import (BudgetPlan, ExtensionAlgorithm, ImplicitSetProblem, LogTimeFunction,
                  binary_entropy, binom_exact, enumerative_extension, g_family,
                  listed_extension, lmi_as_implicit_problem, log_binom,
                  monotone_local_search, optimal_t, phi, phi_growth_check, psi, sample)

__all__ = [
    "AxiomVerdict", "FoolingCertificate", "GuardError", "Oracle", "QueryReport",
    "audited_es_run", "contract", "greedy_basis", "is_basis", "rank", "restrict",
    "verify_matroid_axioms", "SetFamilyOracle", "SUMatrix", "g_matroid", "graphic_matroid",
    "grid_partition_matroid", "is_L_perfect", "partition_matroid", "truncate",
    "uniform_matroid", "CNFInstance", "Digraph", "EMIInstance", "ESInstance", "LMIInstance",
    "ThreeDMInstance", "canonical_bijection", "encode_3dm", "encode_hampath",
    "enumerate_su_matrices", "es_from_sat", "reduce_es_to_emi", "reduce_es_to_lmi",
    "su_matrix_for_set", "SolveOutcome", "brute_force_emi", "brute_force_lmi",
    "extension_solve", "matroid_intersection_2", "parameterized_lmi_stand_in",
    "solve_es_bruteforce", "solve_es_via_emi_reduction", "solve_es_via_lmi_reduction",
    "BudgetPlan", "ExtensionAlgorithm", "ImplicitSetProblem", "LogTimeFunction",
    "binary_entropy", "binom_exact", "enumerative_extension", "g_family", "listed_extension",
    "lmi_as_implicit_problem", "log_binom", "monotone_local_search", "optimal_t", "phi",
    "phi_growth_check", "psi", "sample",
]

__version__ = "0.1.0"
