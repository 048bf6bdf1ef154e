from ezytamp import fields as fld
from ezytamp import validators as vld
from ezytamp.errors import InputError


def encode_cost(
    value: float,
    lower: float = fld.ENCODE_LOWER,
    upper: float = fld.ENCODE_UPPER,
) -> str:
    """Cost value to textual label.

    ``value > upper`` is hard, ``lower <= value <= upper`` is medium and
    ``value < lower`` is easy.
    """
    vld.check_non_negative(value, "cost")
    if value > upper:
        return fld.LABEL_HARD
    if value >= lower:
        return fld.LABEL_MEDIUM
    return fld.LABEL_EASY


def decode_label(label: str) -> float:
    """Textual label to cost value (hard 20, medium 10, easy 5, unknown 0)."""
    try:
        return fld.LABEL_VALUE_MAP[label]
    except KeyError:
        msg = f"Unknown cost label {label!r}"
        raise InputError(msg) from None
