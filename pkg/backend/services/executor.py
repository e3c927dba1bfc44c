import inspect
import logging
from typing import Any, Dict, Optional

from core.config import RunConfig, load_config_file, merge_run_config, normalize_key
from core.errors import InputError, SolverError
from core.registry import COMMAND_CLASS_MAPPINGS, get_input_defs
from core.type_system import convert_value
from utils.run_monitor import get_run_monitor

logger = logging.getLogger("SineThurston.Executor")

EXIT_OK = 0
EXIT_UNRESOLVED = 2
EXIT_INPUT = 3
EXIT_IO = 4


# =============================================================================
# 1. Option declarations
# =============================================================================
def option_flag(name: str, meta: dict) -> str:
    """Command-line flag of an option: meta['flag'] or --name-with-dashes."""
    return meta.get("flag") or "--" + name.replace("_", "-")


def iter_option_defs(command_cls):
    """Yield (name, type_tag, meta, required) for every declared option."""
    input_defs = get_input_defs(command_cls)
    for section, required in (("required", True), ("optional", False)):
        for name, spec in input_defs.get(section, {}).items():
            type_tag = spec[0]
            meta = spec[1] if len(spec) > 1 and isinstance(spec[1], dict) else {}
            yield name, type_tag, meta, required


def config_key_aliases(command_cls) -> Dict[str, str]:
    """Config-file key -> option name; both the option name and its flag are accepted."""
    aliases = {}
    for name, _, meta, _ in iter_option_defs(command_cls):
        aliases[normalize_key(name)] = name
        aliases[normalize_key(option_flag(name, meta))] = name
    return aliases


# =============================================================================
# 2. Input preparation
# =============================================================================
def _check_range(name: str, value, meta: dict) -> None:
    if "min" in meta and value < meta["min"]:
        raise InputError(f"option '{name}' must be >= {meta['min']}, got {value}")
    if "max" in meta and value > meta["max"]:
        raise InputError(f"option '{name}' must be <= {meta['max']}, got {value}")
    if meta.get("positive") and not value > 0:
        raise InputError(f"option '{name}' must be positive, got {value}")


def validate_and_prepare_inputs(command_cls, raw_inputs: Dict[str, Any], command: str = "Unknown") -> Dict[str, Any]:
    """
    Fill defaults, check presence, coerce every value to its declared type and
    check ranges. Any violation raises InputError.
    """
    final_inputs = {}
    for name, type_tag, meta, required in iter_option_defs(command_cls):
        val = raw_inputs.get(name)
        is_enum_or_list = isinstance(type_tag, list) and len(type_tag) > 0

        if val is None or (isinstance(val, str) and val == "" and type_tag != "INT_LIST"):
            if "default" in meta:
                val = meta["default"]
            elif is_enum_or_list and required:
                val = type_tag[0]

        if val is None:
            if required:
                raise InputError(f"Required option '{option_flag(name, meta)}' is missing for command {command}.")
            final_inputs[name] = None
            continue

        val = convert_value(type_tag, val, name)
        if type_tag in ("INT", "FLOAT"):
            _check_range(name, val, meta)
        final_inputs[name] = val
    return final_inputs


def build_run_config(command: str, flags: Dict[str, Any], config_path: Optional[str] = None) -> RunConfig:
    """flags > config file > declared defaults."""
    command_cls = COMMAND_CLASS_MAPPINGS.get(command)
    if command_cls is None:
        raise InputError(f"unknown command '{command}'")

    file_values: Dict[str, Any] = {}
    if config_path:
        aliases = config_key_aliases(command_cls)
        for key, value in load_config_file(config_path).items():
            if key == "config":
                continue
            if key not in aliases:
                raise InputError(f"{config_path}: unknown option '{key}' for command {command}")
            file_values[aliases[key]] = value

    defaults = {name: meta["default"] for name, _, meta, _ in iter_option_defs(command_cls) if "default" in meta}
    run = merge_run_config(command, flags, file_values, defaults)
    run.options = validate_and_prepare_inputs(command_cls, run.options, command)
    for name, source in sorted(run.sources.items()):
        if source != "default":
            logger.debug(f"[Executor] {name} = {run.options.get(name)!r} ({source})")
    return run


# =============================================================================
# 3. Core executor
# =============================================================================
def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, InputError):
        return EXIT_INPUT
    if isinstance(exc, SolverError):
        return EXIT_UNRESOLVED
    if isinstance(exc, OSError):
        return EXIT_IO
    return 1


def execute_command(command: str, flags: Dict[str, Any], config_path: Optional[str] = None) -> int:
    """
    Resolve options, instantiate the registered command class and call its
    FUNCTION. Returns the command's exit code.
    """
    run = build_run_config(command, flags, config_path)
    CommandCls = COMMAND_CLASS_MAPPINGS[command]
    instance = CommandCls()
    method = getattr(instance, getattr(CommandCls, "FUNCTION", "execute"))

    func_args = dict(run.options)
    sig = inspect.signature(method)
    accepts_kwargs = any(p.kind == inspect.Parameter.VAR_KEYWORD for p in sig.parameters.values())
    if not accepts_kwargs:
        func_args = {k: v for k, v in func_args.items() if k in sig.parameters}

    logger.debug(f"[Executor] running '{command}'")
    with get_run_monitor().track(command):
        code = method(**func_args)
    return EXIT_OK if code is None else int(code)
