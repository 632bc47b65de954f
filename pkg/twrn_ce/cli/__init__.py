# Interface en ligne de commande
import argparse
import sys
from typing import List, Optional

from .. import __version__
from ..core.config import settings
from ..core.exceptions import TwrnError
from ..core.logging import setup_logging
from ..schemas.cli import CliInvocation, Subcommand
from .commands import dispatch


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twrn-ce",
        description="Estimation de canal compressive pour réseau à relais bidirectionnel",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("subcommand", choices=[s.value for s in Subcommand])
    parser.add_argument("--config", dest="config_path", metavar="PATH", help="fichier 'clé = valeur'")
    parser.add_argument("--out", dest="output_dir", metavar="DIR", default=settings.OUTPUT_DIR)
    parser.add_argument("--set", dest="overrides", metavar="KEY=VALUE", action="append", default=[])
    parser.add_argument("--workers", type=int, metavar="N", default=None)
    parser.add_argument("--seed", type=int, metavar="N", default=None)
    parser.add_argument("--log-level", default=None)
    parser.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    if args.workers is not None and args.workers < 1:
        print("❌ --workers doit être >= 1", file=sys.stderr)
        return 2
    invocation = CliInvocation(
        subcommand=Subcommand(args.subcommand),
        config_path=args.config_path,
        overrides=tuple(args.overrides),
        output_dir=args.output_dir,
        workers=args.workers,
        seed=args.seed,
        inject_fault=args.inject_fault,
    )
    try:
        return dispatch(invocation)
    except TwrnError as exc:
        print(f"❌ {exc.detail}", file=sys.stderr)
        return exc.exit_code
