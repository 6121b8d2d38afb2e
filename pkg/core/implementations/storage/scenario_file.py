"""Line-oriented `key = value` documents.

`#` starts a comment; blank lines are ignored; keys are case-sensitive and may
appear once. Values stay strings here; typing and validation happen in the
scenario schema, which maps problems back to the line numbers kept here.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, Optional

from core.exceptions import ScenarioError


@dataclass(frozen=True)
class KeyValueDocument:
    """Raw values and the line each key was defined on."""

    values: Dict[str, str]
    lines: Dict[str, int]
    source: str = "<scenario>"

    def line_of(self, key: str) -> Optional[int]:
        return self.lines.get(key)


def parse_key_values(
    text: str, source: str = "<scenario>", allowed: Optional[Iterable[str]] = None
) -> KeyValueDocument:
    """Split a scenario document into keys and raw values.

    Raises:
        ScenarioError: a line without `=`, an empty key, a repeated key or a
            key outside `allowed`.
    """
    known = set(allowed) if allowed is not None else None
    values: Dict[str, str] = {}
    lines: Dict[str, int] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        key, sep, value = content.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ScenarioError(f"expected `key = value`, got {content!r}", number, source)
        if known is not None and key not in known:
            raise ScenarioError(f"unknown key {key!r}; expected one of {sorted(known)}", number, source)
        if key in values:
            raise ScenarioError(f"key {key!r} already set on line {lines[key]}", number, source)
        values[key] = value.strip()
        lines[key] = number
    return KeyValueDocument(values=values, lines=lines, source=source)
