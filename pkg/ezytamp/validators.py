from typing import Iterable, Optional

from ezytamp.errors import InputError


def check_duplicate(data_list: Optional[Iterable[str]], what: str = "name"):
    if data_list is None:
        return

    seen = set()
    for i in data_list:
        if i in seen:
            msg = f"Duplicate {what} ({i})"
            raise InputError(msg)
        seen.add(i)


def check_pct(pct: float, name: str = "pct") -> None:
    if not 0 <= pct <= 1:
        msg = f"{name} must be between 0 and 1"
        raise InputError(msg)


def check_non_negative(value: float, name: str) -> None:
    if not value >= 0:
        msg = f"{name} must be non-negative"
        raise InputError(msg)


def check_positive(value: float, name: str) -> None:
    if not value > 0:
        msg = f"{name} must be positive"
        raise InputError(msg)


def check_choice(value: str, choices: Iterable[str], name: str) -> None:
    choices = list(choices)
    if value not in choices:
        msg = f"{name} must be one of {choices}, got {value!r}"
        raise InputError(msg)


def check_keys(document: dict, required: Iterable[str], where: str) -> None:
    if not isinstance(document, dict):
        msg = f"{where} must be an object"
        raise InputError(msg)
    for k in required:
        if k not in document:
            msg = f"{where} is missing key {k!r}"
            raise InputError(msg)
