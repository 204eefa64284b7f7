"""
lamq command-line entry point
"""

import argparse
import json
import sys
from typing import Any, List, Optional

import pandas as pd

from config.factory import settings
from core.exceptions import ExerciseQualityError, ValidationError
from core.logging import logger

from . import commands

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

REPRESENTATIONS = ("joint-time", "angle-time", "joint-freq", "angle-freq")
FAMILIES = ("svm", "svdd", "adaboost", "dtw", "nn", "mnn")


class LamqArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises ValidationError instead of exiting"""

    def error(self, message):
        raise ValidationError(message, details={"stage": "arguments"})


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    parent = LamqArgumentParser(add_help=False)
    default = (lambda value: argparse.SUPPRESS) if suppress else (lambda value: value)
    parent.add_argument("--seed", type=int, default=default(settings.DEFAULT_SEED),
                        help="base seed for every random stream (default 42)")
    parent.add_argument("--quiet", action="store_true", default=default(False),
                        help="only log warnings and errors")
    parent.add_argument("--format", choices=("json", "csv"), default=default("json"),
                        help="format of the summary printed on stdout")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = LamqArgumentParser(
        prog="lamq",
        description="Exercise quality assessment from skeleton motion data",
        parents=[_global_flags(suppress=False)],
    )
    sub = parser.add_subparsers(dest="command", parser_class=LamqArgumentParser)
    sub.required = True
    flags = [_global_flags(suppress=True)]

    p = sub.add_parser("generate", parents=flags, help="generate a synthetic dataset")
    p.add_argument("--exercise", default="blast-off")
    p.add_argument("--subjects", type=int, default=5)
    p.add_argument("--pos", default="11,13,10,14,15", help="good repetitions per subject")
    p.add_argument("--neg", default="10,13,10,14,15", help="bad repetitions per subject")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=commands.cmd_generate)

    p = sub.add_parser("preprocess", parents=flags, help="resample, scale and re-center samples")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--frames", type=int, default=160)
    p.add_argument("--scale-lo", type=float, default=1.0)
    p.add_argument("--scale-hi", type=float, default=3.0)
    p.add_argument("--per-axis-scaling", action="store_true")
    p.set_defaults(handler=commands.cmd_preprocess)

    p = sub.add_parser("featurize", parents=flags, help="build a feature table")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--rep", choices=REPRESENTATIONS, default="joint-time")
    p.add_argument("--out", required=True)
    p.set_defaults(handler=commands.cmd_featurize)

    p = sub.add_parser("train", parents=flags, help="fit a classifier on a feature table")
    p.add_argument("--features", required=True)
    p.add_argument("--rep", choices=REPRESENTATIONS, default="joint-time")
    p.add_argument("--frames", type=int, default=160, help="frames per preprocessed sample")
    p.add_argument("--model", choices=FAMILIES, required=True)
    p.add_argument("--rounds", type=int)
    p.add_argument("--nu", type=float)
    p.add_argument("--lam", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--hidden", help="hidden layer sizes, e.g. 500 or 500,100")
    p.add_argument("--learning-rate", type=float)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=commands.cmd_train)

    p = sub.add_parser("predict", parents=flags, help="score a feature table with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=commands.cmd_predict)

    p = sub.add_parser("eval", parents=flags, help="run an evaluation protocol")
    p.add_argument("--data", required=True)
    p.add_argument("--rep", choices=REPRESENTATIONS, default="joint-time")
    p.add_argument("--model", choices=FAMILIES, required=True)
    p.add_argument("--protocol", default="random:80", help="holdout:3,4,5/1,2 or random:80")
    p.add_argument("--runs", type=int, help="defaults to 51 for random splits and 1 for holdout")
    p.add_argument("--rounds", type=int, help="AdaBoost rounds (default 300 random, 90 holdout)")
    p.add_argument("--out", required=True)
    p.add_argument("--roc")
    p.add_argument("--record", action="store_true", help="store the result in the run history")
    p.set_defaults(handler=commands.cmd_eval)

    p = sub.add_parser("roc", parents=flags, help="median-run ROC curve from a stored report")
    p.add_argument("--report", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=commands.cmd_roc)

    p = sub.add_parser("reproduce", parents=flags, help="run the full synthetic experiment grid")
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int)
    p.add_argument("--runs", type=int, help="random-split runs (default 51)")
    p.add_argument("--rounds", type=int, help="AdaBoost rounds for random splits (default 300)")
    p.add_argument("--no-one-class", action="store_true", help="skip the supplementary SVDD table")
    p.add_argument("--record", action="store_true")
    p.set_defaults(handler=commands.cmd_reproduce)

    p = sub.add_parser("history", parents=flags, help="show recently recorded experiments")
    p.add_argument("--limit", type=int, default=20)
    p.add_argument("--clear", action="store_true")
    p.set_defaults(handler=commands.cmd_history)

    return parser


def render(result: Any, fmt: str) -> str:
    if isinstance(result, pd.DataFrame):
        if fmt == "csv":
            return result.to_csv(index=False, lineterminator="\n").rstrip("\n")
        return result.to_json(orient="records", date_format="iso")
    if fmt == "csv":
        frame = pd.DataFrame({"key": list(result.keys()), "value": list(result.values())})
        return frame.to_csv(index=False, lineterminator="\n").rstrip("\n")
    return json.dumps(result, default=str)


def _error_line(error: ExerciseQualityError, stage: str) -> str:
    return json.dumps({
        "error": error.error_code,
        "stage": error.details.get("stage", stage),
        "message": error.message,
    })


def main(argv: Optional[List[str]] = None) -> int:
    stage = "arguments"
    try:
        args = build_parser().parse_args(argv)
        stage = args.command
        logger.set_level("WARNING" if args.quiet else settings.LOG_LEVEL)
        result = args.handler(args)
    except ValidationError as e:
        print(_error_line(e, stage), file=sys.stderr)
        return EXIT_USAGE
    except ExerciseQualityError as e:
        logger.log_stage_error(stage, e)
        print(_error_line(e, stage), file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as e:
        print(json.dumps({"error": type(e).__name__, "stage": stage, "message": str(e)}), file=sys.stderr)
        return EXIT_RUNTIME

    print(render(result, args.format))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
