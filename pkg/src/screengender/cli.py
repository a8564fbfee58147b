"""Command-line interface.

Exit codes: 0 success, 1 internal error, 2 usage or validation error,
3 an input that is well-formed but empty where data is required (for
example no labeled users). Nothing is written to ``--out`` unless the
command succeeds.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import os
import sys
import tempfile
import traceback
from pathlib import Path
from typing import Callable, Sequence

from .classifier import Fallback, Strategy, StrategyConfig, build_strategy_matcher, classify_corpus, strategy_categories
from .corpus import EdgeList, corpus_stats, dump_users, load_edges, load_users, split_known
from .errors import EmptyInputError, IngestError, LexiconError, ScreenGenderError
from .evaluation import evaluate, monte_carlo_accuracy, pattern_feature_prevalence, sweep_prior
from .lexicon import Category, Lexicon, build_lexicon, load_term_list, mine_candidate_terms, shadow_report
from .synth import CorpusSpec, demo_list_path, generate_edges, generate_users

logger = logging.getLogger("screengender")

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_EMPTY = 0, 1, 2, 3

_LIST_FLAGS = {
    Category.FEMALE_NAME: ("female_names", "female_names"),
    Category.MALE_NAME: ("male_names", "male_names"),
    Category.TOPIC: ("topics", "topics"),
    Category.EXTRA_FEMALE: ("extras", "extras"),
}


class UsageError(ScreenGenderError):
    pass


# --- argument parsing -------------------------------------------------------

def _prior(value: str) -> float:
    try:
        p = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None
    if not 0.0 <= p <= 1.0:
        raise argparse.ArgumentTypeError(f"prior must be in [0, 1], got {value}")
    return p


def _seed(value: str) -> int:
    try:
        s = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from None
    if not 0 <= s < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return s


def _positive_int(value: str) -> int:
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _priors(value: str) -> list[float]:
    items = [v.strip() for v in value.split(",") if v.strip()]
    if not items:
        raise argparse.ArgumentTypeError("empty prior list")
    return [_prior(v) for v in items]


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, help="output file (default: standard output)")
    p.add_argument("--format", choices=["json", "tsv"], default="json")


def _add_lists(p: argparse.ArgumentParser) -> None:
    p.add_argument("--female-names", type=Path)
    p.add_argument("--male-names", type=Path)
    p.add_argument("--topics", type=Path)
    p.add_argument("--extras", type=Path)
    p.add_argument("--demo-lists", action="store_true", help="use the bundled demonstration lists for any list not given")


def _add_strategy(p: argparse.ArgumentParser) -> None:
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.FEMALE_ONLY_PLUS_EXTRAS.value)
    p.add_argument("--prior", type=_prior, default=0.7, help="fallback probability of predicting F")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--workers", type=_positive_int, default=1, help="threads used for classification")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="screengender", description="Infer gender from screen names with term lists.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="predict a gender for every user")
    p.add_argument("--users", type=Path, required=True)
    _add_lists(p)
    _add_strategy(p)
    _add_output(p)

    p = sub.add_parser("evaluate", help="score a strategy against labeled users")
    p.add_argument("--users", type=Path, required=True)
    _add_lists(p)
    _add_strategy(p)
    _add_output(p)

    p = sub.add_parser("montecarlo", help="mean realized accuracy over many seeds")
    p.add_argument("--users", type=Path, required=True)
    p.add_argument("--trials", type=_positive_int, default=100)
    _add_lists(p)
    _add_strategy(p)
    _add_output(p)

    p = sub.add_parser("sweep", help="accuracy as a function of the fallback prior")
    p.add_argument("--users", type=Path, required=True)
    p.add_argument("--priors", type=_priors, default=[0.5, 0.6, 0.7, 0.8, 0.9, 1.0])
    _add_lists(p)
    _add_strategy(p)
    _add_output(p)

    p = sub.add_parser("stats", help="corpus composition and degree summary")
    p.add_argument("--users", type=Path, required=True)
    p.add_argument("--edges", type=Path)
    _add_output(p)

    p = sub.add_parser("shadow", help="terms contained in longer terms")
    _add_lists(p)
    _add_output(p)

    p = sub.add_parser("mine", help="propose gender-skewed username n-grams")
    p.add_argument("--users", type=Path, required=True)
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--min-support", type=_positive_int, default=20)
    p.add_argument("--threshold", type=float, default=0.8)
    _add_lists(p)
    _add_output(p)

    p = sub.add_parser("features", help="prevalence of surface patterns by gender")
    p.add_argument("--users", type=Path, required=True)
    _add_output(p)

    p = sub.add_parser("gen", help="write a synthetic labeled user table")
    p.add_argument("--n-users", type=int, default=1000)
    p.add_argument("--female-fraction", type=_prior, default=0.7)
    p.add_argument("--female-embed-rate", type=_prior, default=0.5)
    p.add_argument("--male-embed-rate", type=_prior, default=0.5)
    p.add_argument("--unknown-fraction", type=_prior, default=0.0)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--edges-out", type=Path)
    p.add_argument("--edges-per-user", type=int, default=3)
    p.add_argument("--female-names", type=Path)
    p.add_argument("--male-names", type=Path)
    p.add_argument("--out", type=Path)
    return parser


# --- helpers ----------------------------------------------------------------

def _list_path(args, category: Category) -> Path | None:
    attr, demo = _LIST_FLAGS[category]
    path = getattr(args, attr, None)
    if path is None and getattr(args, "demo_lists", False):
        return Path(str(demo_list_path(demo)))
    return path


def _load_lexicon(args, categories: Sequence[Category], required: bool) -> Lexicon:
    lists = []
    for category in categories:
        path = _list_path(args, category)
        if path is None:
            if required:
                flag = "--" + _LIST_FLAGS[category][0].replace("_", "-")
                raise UsageError(f"strategy {args.strategy} needs {flag} (or --demo-lists)")
            continue
        lists.append((category, load_term_list(path, category).terms))
    if not lists:
        raise UsageError("no term lists given")
    return build_lexicon(lists)


def _strategy_setup(args):
    strategy = Strategy(args.strategy)
    lexicon = _load_lexicon(args, strategy_categories(strategy), required=True)
    matcher = build_strategy_matcher(lexicon, strategy)
    config = StrategyConfig(strategy, args.prior, args.seed)
    return matcher, config


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _tsv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    buf.write("\t".join(header) + "\n")
    for row in rows:
        buf.write("\t".join(_cell(v) for v in row) + "\n")
    return buf.getvalue()


def _cell(value) -> str:
    if value is None:
        return "NA"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _flatten(obj, prefix: str = ""):
    for key, value in obj.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from _flatten(value, name + ".")
        else:
            yield name, value


def _emit(args, text: str) -> None:
    """Write ``text`` to ``--out`` atomically, or to stdout."""
    if args.out is None:
        sys.stdout.write(text)
        return
    target = Path(args.out)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _report(args, obj: dict | list, header: Sequence[str] | None = None, rows=None) -> None:
    if args.format == "tsv":
        if header is None:
            text = _tsv(["key", "value"], _flatten(obj))
        else:
            text = _tsv(header, rows)
    else:
        text = _json(obj)
    _emit(args, text)


# --- subcommands ------------------------------------------------------------

def cmd_classify(args) -> int:
    users = load_users(args.users)
    matcher, config = _strategy_setup(args)
    preds = classify_corpus(matcher, config, users, workers=args.workers)
    records = []
    rows = []
    for p in preds:
        if isinstance(p.provenance, Fallback):
            prov = {"kind": "fallback", "uniform_draw": p.provenance.uniform_draw}
            rows.append((p.user_id, p.gender.value, "fallback", None, None, None, None, p.provenance.uniform_draw))
        else:
            m = p.provenance
            prov = {"kind": "matched", "term": m.term.text, "category": m.term.category.value, "start": m.start, "end": m.end}
            rows.append((p.user_id, p.gender.value, "matched", m.term.text, m.term.category.value, m.start, m.end, None))
        records.append({"user_id": p.user_id, "gender": p.gender.value, "provenance": prov})
    header = ("user_id", "gender", "provenance", "term", "category", "start", "end", "uniform_draw")
    _report(args, records, header, rows)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    users = load_users(args.users)
    known, _ = split_known(users)
    if not known:
        raise EmptyInputError("no labeled users")
    matcher, config = _strategy_setup(args)
    preds = classify_corpus(matcher, config, known, workers=args.workers)
    report = evaluate(preds, known, config.fallback_prior_female)
    _report(args, report.as_dict())
    summary = (
        f"strategy={config.strategy.value} realized={report.realized_accuracy:.6f} "
        f"expected={report.expected_accuracy:.6f} coverage={report.coverage:.6f} n={report.n_evaluated}"
    )
    print(summary, file=sys.stdout if args.out is not None else sys.stderr)
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    users = load_users(args.users)
    matcher, config = _strategy_setup(args)
    result = monte_carlo_accuracy(matcher, config, users, args.trials, workers=args.workers)
    obj = {
        "strategy": config.strategy.value,
        "prior_female": config.fallback_prior_female,
        "base_seed": config.seed,
        "trials": result.trials,
        "mean": result.mean,
        "stderr": result.stderr,
        "stderr_defined": result.stderr_defined,
    }
    _report(args, obj)
    return EXIT_OK


def cmd_sweep(args) -> int:
    users = load_users(args.users)
    matcher, config = _strategy_setup(args)
    rows = sweep_prior(matcher, config, users, args.priors, workers=args.workers)
    obj = [{"prior_female": r.prior_female, "expected_accuracy": r.expected_accuracy, "realized_accuracy": r.realized_accuracy} for r in rows]
    _report(
        args,
        obj,
        ("prior_female", "expected_accuracy", "realized_accuracy"),
        [(r.prior_female, r.expected_accuracy, r.realized_accuracy) for r in rows],
    )
    return EXIT_OK


def cmd_stats(args) -> int:
    users = load_users(args.users)
    edges = load_edges(args.edges, users) if args.edges is not None else EdgeList(())
    obj = corpus_stats(users, edges).as_dict()
    obj["self_loops_dropped"] = edges.self_loops_dropped
    obj["dangling_endpoints"] = edges.dangling_endpoints
    _report(args, obj)
    return EXIT_OK


def cmd_shadow(args) -> int:
    lexicon = _load_lexicon(args, list(Category), required=False)
    pairs = shadow_report(lexicon)
    obj = [
        {"inner": p.inner.text, "inner_category": p.inner.category.value, "outer": p.outer.text, "outer_category": p.outer.category.value}
        for p in pairs
    ]
    _report(
        args,
        obj,
        ("inner", "inner_category", "outer", "outer_category"),
        [(p.inner.text, p.inner.category.value, p.outer.text, p.outer.category.value) for p in pairs],
    )
    return EXIT_OK


def cmd_mine(args) -> int:
    users = load_users(args.users)
    known, _ = split_known(users)
    if not known:
        raise EmptyInputError("no labeled users")
    has_lists = any(_list_path(args, c) is not None for c in Category)
    exclude = _load_lexicon(args, list(Category), required=False) if has_lists else None
    try:
        found = mine_candidate_terms(known, args.n_min, args.n_max, args.min_support, args.threshold, exclude)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    obj = [{"text": c.text, "support": c.support, "female_fraction": c.female_fraction} for c in found]
    _report(args, obj, ("text", "support", "female_fraction"), [(c.text, c.support, c.female_fraction) for c in found])
    return EXIT_OK


def cmd_features(args) -> int:
    users = load_users(args.users)
    _report(args, pattern_feature_prevalence(users).as_dict())
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        spec = CorpusSpec(
            args.n_users, args.female_fraction, args.female_embed_rate, args.male_embed_rate, args.unknown_fraction, args.seed
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    female = load_term_list(args.female_names, Category.FEMALE_NAME).texts if args.female_names else None
    male = load_term_list(args.male_names, Category.MALE_NAME).texts if args.male_names else None
    users = generate_users(spec, female, male)
    buf = io.StringIO()
    dump_users(users, buf)
    edges_text = None
    if args.edges_out is not None:
        edges_text = "".join(f"{a}\t{b}\n" for a, b in generate_edges(users, args.edges_per_user, args.seed))
    _emit(args, buf.getvalue())
    if edges_text is not None:
        _emit(argparse.Namespace(out=args.edges_out), edges_text)
    return EXIT_OK


COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "classify": cmd_classify,
    "evaluate": cmd_evaluate,
    "montecarlo": cmd_montecarlo,
    "sweep": cmd_sweep,
    "stats": cmd_stats,
    "shadow": cmd_shadow,
    "mine": cmd_mine,
    "features": cmd_features,
    "gen": cmd_gen,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except EmptyInputError as exc:
        print(f"screengender: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except IngestError as exc:
        print(f"screengender: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"screengender: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LexiconError, ScreenGenderError) as exc:
        print(f"screengender: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
