# springerlab/utils/validators.py

"""
Validation utilities for command-line input.
"""
import re

SUPPORTED_TYPES = ("G2", "F4")
SUPPORTED_CHARS = (2, 3)
FIELD_ORDERS = (2, 3, 4, 8, 9, 16, 27, 81)
_TYPE_LABEL = re.compile(r"^([ABCDGF]|Ã)\d+((A|B|C|D|Ã)\d+)*$")


def validate_type(type_label, allowed=SUPPORTED_TYPES):
    if not type_label or not isinstance(type_label, str):
        return False, "Type is required and must be a string"
    if allowed is not None and type_label not in allowed:
        return False, f"Unsupported type {type_label}; expected one of {', '.join(allowed)}"
    if allowed is None and not _TYPE_LABEL.match(type_label):
        return False, f"Malformed type label {type_label}"
    return True, None


def validate_char(char):
    if char is None:
        return False, "Characteristic is required"
    if char not in SUPPORTED_CHARS:
        return False, f"Characteristic must be one of {SUPPORTED_CHARS}"
    return True, None


def validate_field_order(q, char=None):
    if q is None:
        return False, "Field size q is required"
    if q not in FIELD_ORDERS:
        return False, f"q must be one of {FIELD_ORDERS}"
    if char is not None and q % char != 0:
        return False, f"q = {q} is not a power of the characteristic {char}"
    return True, None


def validate_positive(value, name):
    if value is None:
        return True, None
    if not isinstance(value, int) or value <= 0:
        return False, f"{name} must be a positive integer"
    return True, None


def validate_context(type_label, char, dual, supported):
    key = f"{'g*' if dual else 'g'},{type_label},{char}"
    if key not in supported:
        return False, f"No tables for context {key}; supported: {', '.join(supported)}"
    return True, None
