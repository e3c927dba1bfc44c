from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from core.errors import InputError


# Option type tags understood by the executor.
OPTION_TYPES = {
    "INT",
    "FLOAT",
    "BOOLEAN",
    "STRING",
    "PATH",
    "COMPLEX",
    "INT_LIST",
    "REGION",
    "RESOLUTION",
}


@dataclass(frozen=True)
class Region:
    """Axis-aligned rectangle of the parameter plane."""
    center: complex
    width: float
    height: float

    @property
    def x_min(self) -> float:
        return self.center.real - self.width / 2

    @property
    def y_max(self) -> float:
        return self.center.imag + self.height / 2


def parse_complex(text: str | object) -> complex:
    """
    Parse `1.5`, `1.5+0i`, `1.5 - 2j` or `-0.3i`.

    The CLI output format (`a + bi`) parses back exactly.
    """
    if isinstance(text, (int, float, complex, np.number)):
        value = complex(text)
    else:
        raw = str(text).replace(" ", "").replace("i", "j")
        if not raw:
            raise InputError("empty complex number")
        try:
            value = complex(raw)
        except ValueError:
            raise InputError(f"malformed complex number {text!r}")
    if not (np.isfinite(value.real) and np.isfinite(value.imag)):
        raise InputError(f"complex value must be finite, got {text!r}")
    return value


def format_complex(value: complex) -> str:
    """`a + bi` with 17 significant digits."""
    value = complex(value)
    sign = "-" if value.imag < 0 else "+"
    return f"{value.real:.17g} {sign} {abs(value.imag):.17g}i"


def parse_int_list(text: str | object) -> List[int]:
    """`1,-1,2` or a list of such tokens; empty means no entries."""
    if text is None:
        return []
    tokens = [str(t) for t in text] if isinstance(text, (list, tuple)) else [str(text)]
    values: List[int] = []
    for token in tokens:
        for part in token.replace(" ", ",").split(","):
            part = part.strip()
            if not part:
                continue
            try:
                values.append(int(part))
            except ValueError:
                raise InputError(f"expected an integer, got {part!r}")
    return values


def parse_region(text: str | object) -> Region:
    """`cre,cim,width,height`"""
    if isinstance(text, Region):
        return text
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) != 4:
        raise InputError(f"region must be 'cre,cim,width,height', got {text!r}")
    try:
        cre, cim, width, height = (float(p) for p in parts)
    except ValueError:
        raise InputError(f"region entries must be numbers, got {text!r}")
    if not all(np.isfinite(v) for v in (cre, cim, width, height)):
        raise InputError(f"region entries must be finite, got {text!r}")
    if width <= 0 or height <= 0:
        raise InputError(f"region width and height must be positive, got {width} x {height}")
    return Region(center=complex(cre, cim), width=width, height=height)


def parse_resolution(text: str | object) -> Tuple[int, int]:
    """`NXxNY`, e.g. `256x64`."""
    if isinstance(text, tuple):
        nx, ny = text
    else:
        parts = str(text).lower().replace(",", "x").split("x")
        if len(parts) != 2:
            raise InputError(f"resolution must be 'NXxNY', got {text!r}")
        try:
            nx, ny = int(parts[0]), int(parts[1])
        except ValueError:
            raise InputError(f"resolution entries must be integers, got {text!r}")
    if nx <= 0 or ny <= 0:
        raise InputError(f"resolution must be positive, got {nx}x{ny}")
    return int(nx), int(ny)


def parse_boolean(value: str | object) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off", ""):
        return False
    raise InputError(f"expected a boolean, got {value!r}")


def convert_value(type_tag, value, name: str = "?"):
    """Coerce a raw flag/config string into the declared option type."""
    if isinstance(type_tag, list):
        text = str(value)
        if text not in type_tag:
            raise InputError(f"option '{name}' must be one of {type_tag}, got {text!r}")
        return text
    try:
        if type_tag == "INT":
            if isinstance(value, bool):
                raise ValueError
            if isinstance(value, str) and not value.strip().lstrip("+-").isdigit():
                raise ValueError
            return int(value)
        if type_tag == "FLOAT":
            result = float(value)
            if not np.isfinite(result):
                raise ValueError
            return result
    except (TypeError, ValueError):
        raise InputError(f"option '{name}' expects {type_tag}, got {value!r}")
    if type_tag == "BOOLEAN":
        return parse_boolean(value)
    if type_tag in ("STRING", "PATH"):
        return str(value)
    if type_tag == "COMPLEX":
        return parse_complex(value)
    if type_tag == "INT_LIST":
        return parse_int_list(value)
    if type_tag == "REGION":
        return parse_region(value)
    if type_tag == "RESOLUTION":
        return parse_resolution(value)
    raise InputError(f"option '{name}' has unsupported type {type_tag!r}")
