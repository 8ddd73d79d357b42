"""Exact-rational probabilistic automata over finite words.

The package keeps every probability a `fractions.Fraction`, so all identity
checks in `verification` are exact equalities, never float comparisons.
"""

from .errors import (
    AlphabetClash,
    AutomatonError,
    BudgetExceeded,
    DomainError,
    EmptyCycle,
    InconsistentSupport,
    NotADistribution,
    NotSimple,
    OrderMismatch,
    ParseError,
    PreconditionFailed,
    UnknownLetter,
    UnknownState,
    ValidationError,
)
from .core import (
    HALF,
    ONE,
    ZERO,
    Distribution,
    NumberlessAutomaton,
    ProbAutomaton,
    Rational,
    WordEvalTrace,
    accept_prob,
    complete_with_sink,
    dirac,
    distribution_after,
    format_rational,
    instantiate,
    is_simple,
    make_distribution,
    monte_carlo_accept,
    parse_rational,
    reach_prob,
    require_simple,
    step,
    support_abstraction,
    trace_word,
)
from .seesaw import seesaw_delta, seesaw_npa, seesaw_pa
from .constructions import (
    DOLLAR,
    NEXT_TRANSITION,
    NEXT_WORD,
    SHARP,
    BuchiAutomaton,
    FairCoinOutput,
    SimulationNPA,
    apply_letter,
    buchi_reduction,
    build_simulation,
    check_letter,
    commit_prob,
    dfa_accepts,
    encode_word,
    erase_sharps,
    fair_coin,
    fairness_dfa,
    hat,
    instantiate_simulation,
    parse_sim_letter,
    run_deterministic,
    sim_alphabet,
    simulation_parameters,
    unhat,
)
from .analysis import (
    FamilyTemplate,
    LassoWord,
    SearchBudget,
    SweepPoint,
    expand_template,
    family_eval,
    lasso_prob,
    noisy_sweep,
    states_reaching,
    value_lower_bound,
)
from .verification import (
    CaseStudyRow,
    ChainRow,
    EquivalenceChainReport,
    PropReport,
    check_cheat_once,
    check_fair_coin,
    check_fair_coin_erasure,
    check_lower,
    check_theta,
    equivalence_chain_report,
    extract_witness,
    first_exceeding,
    random_simple_pa,
    scrambled_block,
    seesaw_case_study,
)
from .documents import (
    AutomatonDocument,
    TransitionRecord,
    automaton_to_document,
    document_to_automaton,
    eval_expression,
    parse_automaton,
    parse_document,
    serialize_automaton,
    serialize_document,
)
from .dot import export_dot

__all__ = [
    "AlphabetClash",
    "AutomatonError",
    "BudgetExceeded",
    "DomainError",
    "EmptyCycle",
    "InconsistentSupport",
    "NotADistribution",
    "NotSimple",
    "OrderMismatch",
    "ParseError",
    "PreconditionFailed",
    "UnknownLetter",
    "UnknownState",
    "ValidationError",
    "HALF",
    "ONE",
    "ZERO",
    "Distribution",
    "NumberlessAutomaton",
    "ProbAutomaton",
    "Rational",
    "WordEvalTrace",
    "accept_prob",
    "complete_with_sink",
    "dirac",
    "distribution_after",
    "format_rational",
    "instantiate",
    "is_simple",
    "make_distribution",
    "monte_carlo_accept",
    "parse_rational",
    "reach_prob",
    "require_simple",
    "step",
    "support_abstraction",
    "trace_word",
    "seesaw_delta",
    "seesaw_npa",
    "seesaw_pa",
    "DOLLAR",
    "NEXT_TRANSITION",
    "NEXT_WORD",
    "SHARP",
    "BuchiAutomaton",
    "FairCoinOutput",
    "SimulationNPA",
    "apply_letter",
    "buchi_reduction",
    "build_simulation",
    "check_letter",
    "commit_prob",
    "dfa_accepts",
    "encode_word",
    "erase_sharps",
    "fair_coin",
    "fairness_dfa",
    "hat",
    "instantiate_simulation",
    "parse_sim_letter",
    "run_deterministic",
    "sim_alphabet",
    "simulation_parameters",
    "unhat",
    "FamilyTemplate",
    "LassoWord",
    "SearchBudget",
    "SweepPoint",
    "expand_template",
    "family_eval",
    "lasso_prob",
    "noisy_sweep",
    "states_reaching",
    "value_lower_bound",
    "CaseStudyRow",
    "ChainRow",
    "EquivalenceChainReport",
    "PropReport",
    "check_cheat_once",
    "check_fair_coin",
    "check_fair_coin_erasure",
    "check_lower",
    "check_theta",
    "equivalence_chain_report",
    "extract_witness",
    "first_exceeding",
    "random_simple_pa",
    "scrambled_block",
    "seesaw_case_study",
    "AutomatonDocument",
    "TransitionRecord",
    "automaton_to_document",
    "document_to_automaton",
    "eval_expression",
    "parse_automaton",
    "parse_document",
    "serialize_automaton",
    "serialize_document",
    "export_dot",
]
