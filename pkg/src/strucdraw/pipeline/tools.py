"""Calculator tools offered to the model during step 3.

Arithmetic is done in ``Decimal`` on the decimal literal of each argument
(a float's shortest repr, so ``1.4142`` means exactly 1.4142 as the model
wrote it) and rounded half-up to 4 decimals, the precision the prompts ask for.
"""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal, InvalidOperation, localcontext
from typing import Iterable

TOOL_NAMES = ("Multiply", "Divide", "Minus", "Add", "Sqrt")
_ARITY = {"multiply": 2, "divide": 2, "minus": 2, "add": 2, "sqrt": 1}
_QUANTUM = Decimal("0.0001")


class ToolError(ValueError):
    pass


class UnknownTool(ToolError):
    pass


class ArityError(ToolError):
    pass


class DivideByZero(ToolError, ZeroDivisionError):
    pass


class NegativeSqrt(ToolError):
    pass


def _dec(value) -> Decimal:
    if isinstance(value, bool):
        raise ToolError(f"not a number: {value!r}")
    try:
        if isinstance(value, str):
            out = Decimal(value.strip())
        elif isinstance(value, float):
            out = Decimal(repr(value))
        else:
            out = Decimal(value)
    except (InvalidOperation, TypeError, ValueError):
        raise ToolError(f"not a number: {value!r}") from None
    if not out.is_finite():
        raise ToolError(f"not a finite number: {value!r}")
    return out


def calc_tool(op: str, args: Iterable) -> float:
    name = op.strip().lower()
    if name not in _ARITY:
        raise UnknownTool(f"unknown tool {op!r}; available: {', '.join(TOOL_NAMES)}")
    values = [_dec(a) for a in args]
    if len(values) != _ARITY[name]:
        raise ArityError(f"{op} takes {_ARITY[name]} argument(s), got {len(values)}")
    with localcontext() as ctx:
        ctx.prec = 60
        if name == "multiply":
            out = values[0] * values[1]
        elif name == "divide":
            if values[1] == 0:
                raise DivideByZero(f"division by zero: {values[0]} / 0")
            out = values[0] / values[1]
        elif name == "minus":
            out = values[0] - values[1]
        elif name == "add":
            out = values[0] + values[1]
        else:
            if values[0] < 0:
                raise NegativeSqrt(f"square root of negative number {values[0]}")
            out = values[0].sqrt()
        result = float(out.quantize(_QUANTUM, rounding=ROUND_HALF_UP))
    return 0.0 if result == 0 else result
