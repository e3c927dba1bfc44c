"""
Command-line entry point.

    python backend/main.py [-v] <command> [options]

Exit codes: 0 success, 2 divergence / failed certificate / unresolved,
3 invalid input, 4 I/O error.
"""

import argparse
import logging
import os
import sys

# 允许从仓库根目录直接运行 backend/main.py
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from core.errors import InputError, SolverError
from core.logger import default_level, logger, set_level
from core.registry import COMMAND_CLASS_MAPPINGS, get_command_info
from services.executor import execute_command, exit_code_for, iter_option_defs, option_flag
from services.plugin_loader import load_all_commands


class CliArgumentParser(argparse.ArgumentParser):
    """argparse usage errors become InputError (exit 3) instead of SystemExit(2)."""

    def error(self, message):
        raise InputError(message)


def _describe(type_tag, meta: dict) -> str:
    kind = "{" + ",".join(type_tag) + "}" if isinstance(type_tag, list) else type_tag
    if "default" in meta and meta["default"] not in (None, ""):
        return f"{kind} (default: {meta['default']})"
    return kind


# ==========================================
# Parser construction (from the command registry)
# ==========================================
def build_parser() -> argparse.ArgumentParser:
    load_all_commands()
    parser = CliArgumentParser(
        prog="sine-thurston",
        description="Centers of hyperbolic components of the sine family lambda*sin(z).",
        allow_abbrev=False,
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    subparsers = parser.add_subparsers(dest="command", metavar="<command>")
    subparsers.required = True

    for name, info in get_command_info().items():
        sub = subparsers.add_parser(name, help=f"{info['display_name']}: {info['description']}",
                                    description=info["description"], allow_abbrev=False)
        sub.add_argument("--config", default=None, help="flat 'key = value' option file")
        for opt, type_tag, meta, required in iter_option_defs(COMMAND_CLASS_MAPPINGS[name]):
            kwargs = {"dest": opt, "default": None, "help": _describe(type_tag, meta)}
            if type_tag == "BOOLEAN":
                kwargs.update(nargs="?", const="true")
            elif type_tag == "INT_LIST":
                kwargs.update(nargs="*")
            sub.add_argument(option_flag(opt, meta), **kwargs)
    return parser


def dispatch(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # --help
        return int(e.code or 0)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(e)

    set_level(logging.DEBUG if args.verbose else default_level())

    command_cls = COMMAND_CLASS_MAPPINGS[args.command]
    flags = {opt: getattr(args, opt, None) for opt, _, _, _ in iter_option_defs(command_cls)}
    try:
        return execute_command(args.command, flags, args.config)
    except (InputError, SolverError, OSError) as e:
        logger.debug(f"[Main] {args.command} failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(dispatch(sys.argv[1:]))
