"""
bellsel: Bell-experiment tables, structural causal models and diagnostics
for reading Bell correlations as selection effects of a locked collider.
"""
from .quantum import (
    InitialLabel, MeasurementDirection, StateVector, correlation_e, joint_outcome_probability,
    make_state, measurement_projector, outcome_distribution,
)
from .tables import JointTable
from .bell import (
    Dataset, ExperimentKind, Setting, TrialRecord, closed_form_table, kernel_table, posterior_initial,
    preselect, read_csv, same_outcome_rates, sample_trials, setting_policy, uniform_policy,
)
from .graphs import Claim, Dag, DependencyClaimSet, LockedStructure, build_dag, d_separated, figure_graph, is_collider
from .scm import (
    ConstrainedScm, Constraint, Cpt, Scm, build_bigv_retro_scm, build_damascus_scm, build_fig4_scm,
    ccc_counterfactual, constrain_collider, counterfactual_query, do_intervene, exact_joint, random_scm,
    sample_scm,
)
from .analysis import (
    chsh_value, counterfactual_support_report, deterministic_strategies, faithfulness_report,
    fine_tuning_sweep, g2_ci_test, lhv_same_outcome_bound, no_signalling_check, quantum_same_outcome_rate,
    si_check,
)

__version__ = "0.1.0"
