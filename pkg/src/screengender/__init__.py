"""Gender inference from screen names by multi-pattern term matching."""

from .classifier import (
    Fallback,
    Matched,
    Prediction,
    Strategy,
    StrategyConfig,
    build_strategy_matcher,
    classify_corpus,
    classify_user,
    fallback_draw,
)
from .corpus import (
    CorpusStats,
    EdgeList,
    Gender,
    UserRecord,
    corpus_stats,
    load_edges,
    load_users,
    split_known,
)
from .errors import EmptyInputError, EvaluationError, IngestError, LexiconError, ScreenGenderError
from .evaluation import (
    EvalReport,
    Outcome,
    evaluate,
    expected_accuracy,
    monte_carlo_accuracy,
    pattern_feature_prevalence,
    sweep_prior,
)
from .lexicon import (
    Category,
    Lexicon,
    Term,
    build_lexicon,
    load_term_list,
    mine_candidate_terms,
    normalize_text,
    shadow_report,
)
from .matcher import (
    Match,
    Matcher,
    SelectionMode,
    SelectionPolicy,
    brute_force_matches,
    build_matcher,
    find_all_matches,
    select_best_match,
)

__version__ = "0.1.0"
