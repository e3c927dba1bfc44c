import os
import sys
import importlib
import logging
from typing import List, Tuple


logger = logging.getLogger("SineThurston.Plugins")


# built-in commands; any import failure here aborts the CLI
CRITICAL_COMMANDS = {
    "commands.solve",
    "commands.verify",
    "commands.scan",
    "commands.enumerate",
    "commands.diagnose",
}

_loaded: List[str] = []


def load_all_commands() -> Tuple[bool, List[str], List[str]]:
    """
    Import every module under backend/commands so their @register_command
    decorators run. Safe to call more than once.

    Returns:
        Tuple[bool, List[str], List[str]]: all_success, loaded modules, failed modules.

    Raises:
        RuntimeError: when a critical command module fails to import.
    """
    if _loaded:
        return True, list(_loaded), []

    root_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    commands_path = os.path.join(root_dir, "commands")
    if not os.path.isdir(commands_path):
        logger.error(f"[Plugins] Commands directory not found at: {commands_path}")
        raise RuntimeError(f"Commands directory not found: {commands_path}")

    if root_dir not in sys.path:
        sys.path.append(root_dir)

    logger.debug(f"[Plugins] Scanning commands in: {commands_path}")

    success_list = []
    failed_list = []
    for filename in sorted(os.listdir(commands_path)):
        if not filename.endswith(".py") or filename == "__init__.py":
            continue
        module_name = f"commands.{filename[:-3]}"
        try:
            importlib.import_module(module_name)
            success_list.append(module_name)
            logger.debug(f"[Plugins] Loaded: {module_name}")
        except Exception as e:
            failed_list.append(module_name)
            if module_name in CRITICAL_COMMANDS:
                logger.error(f"[Plugins] CRITICAL command failed: {module_name}: {type(e).__name__}: {e}")
                raise RuntimeError(
                    f"Critical command '{module_name}' failed to load: {type(e).__name__}: {e}"
                ) from e
            logger.warning(f"[Plugins] Non-critical module failed: {module_name}: {type(e).__name__}: {e}")

    logger.debug(f"[Plugins] Load summary: {len(success_list)} loaded, {len(failed_list)} failed")
    if not failed_list:
        _loaded.extend(success_list)
    return len(failed_list) == 0, success_list, failed_list
