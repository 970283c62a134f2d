"""Subcommand views: each returns a ViewResult rendered as text or JSON by main.py."""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List


class UsageError(Exception):
    """Flags were syntactically valid but do not describe a runnable command."""


@dataclass
class ViewResult:
    payload: Dict[str, Any]
    lines: List[str] = field(default_factory=list)
    # simulate and price print JSON unless --text asks for the summary lines
    json_by_default: bool = False

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps(self.payload, indent=2)
        return "\n".join(self.lines)
