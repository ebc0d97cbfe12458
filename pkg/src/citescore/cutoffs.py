"""Default year-to-cutoff mapping for annual snapshot builds.

The mapping ships as an editable JSON file next to the package so operators
can pin extra years; anything not listed falls back to the default rule
(31 May of the following year).
"""

from __future__ import annotations

import json
from datetime import date
from importlib import resources


def load_cutoff_table(path: str | None = None) -> dict:
    """Load the bundled table, or a user-supplied one with the same schema."""
    if path is None:
        text = resources.files("citescore").joinpath("data/cutoff_dates.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    table = json.loads(text)
    if "default_month_day" not in table or "years" not in table:
        raise ValueError("cutoff table needs 'default_month_day' and 'years' keys")
    return table


def default_cutoff(year: int, table: dict | None = None) -> date:
    """Cutoff date for a metrics year per the table, else the default rule."""
    if table is None:
        table = load_cutoff_table()
    pinned = table["years"].get(str(year))
    if pinned is not None:
        return date.fromisoformat(pinned)
    month, day = (int(part) for part in table["default_month_day"].split("-"))
    return date(year + 1, month, day)
