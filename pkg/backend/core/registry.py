# registry.py
from typing import Dict, Type

from core.logger import logger

COMMAND_CLASS_MAPPINGS: Dict[str, Type] = {}


def register_command(name: str):
    """
    装饰器：注册命令类
    """

    def decorator(cls):
        if name in COMMAND_CLASS_MAPPINGS:
            existing = COMMAND_CLASS_MAPPINGS[name]
            logger.warning(
                f"[Registry] Duplicate command name '{name}': "
                f"{existing.__name__} will be overridden by {cls.__name__}"
            )
        COMMAND_CLASS_MAPPINGS[name] = cls
        cls.COMMAND_NAME = name
        return cls

    return decorator


def get_input_defs(cls) -> dict:
    if not hasattr(cls, "INPUT_TYPES"):
        return {"required": {}, "optional": {}}
    try:
        defs = cls.INPUT_TYPES()
    except Exception as e:
        logger.error(f"Error getting input types for {cls.__name__}: {e}")
        return {"required": {}, "optional": {}}
    defs.setdefault("required", {})
    defs.setdefault("optional", {})
    return defs


def get_command_info():
    """
    命令元数据：argparse 子命令和帮助文本都由此生成
    """
    info = {}
    for name, cls in COMMAND_CLASS_MAPPINGS.items():
        description = getattr(cls, "DESCRIPTION", None) or (cls.__doc__.strip() if cls.__doc__ else "No description.")
        info[name] = {
            "display_name": getattr(cls, "DISPLAY_NAME", name),
            "description": description,
        }
    return info
