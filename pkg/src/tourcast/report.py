"""Plain-text tour reports laid out like the client's tour sheets, plus a JSON sidecar."""

from __future__ import annotations

import datetime as dt
import json
import re
from dataclasses import dataclass, field
from typing import Sequence

from .constraints import AVAIL1, AVAIL2, BREAK, DEFAULT_BREAK_LIMIT, SEP1, SEP2, Evaluation, evaluate
from .model import Instance, day_of_week, duplicate_cities, is_complete, missing_cities

PROPERTY_KEYS = (
    "Good days",
    "Bad Days",
    "Number of cities in the tour",
    "Total miles",
    "Availability violation Type 1",
    "Availability violation Type 2",
    "Break violation",
    "Separation violation 1 day",
    "Separation violation more than 1 day",
)


def properties_from(tour: Sequence[int], ev: Evaluation) -> dict[str, int]:
    o, y = ev.objectives, ev.violations
    values = (o.good_days, o.bad_days, len({k for k in tour if k}), o.total_miles, *y.counts)
    return dict(zip(PROPERTY_KEYS, values))


@dataclass
class TourReport:
    title: str
    tour: tuple[int, ...]
    properties: dict[str, int]
    schedule: list[str]
    violation_lines: list[str] = field(default_factory=list)
    complete: bool = True
    duplicates: list[int] = field(default_factory=list)
    missing: list[int] = field(default_factory=list)
    cost: float | None = None

    def render(self) -> str:
        lines = [self.title, "[" + ", ".join(map(str, self.tour)) + "]", "", "Properties:"]
        lines += [f"{k}: {v}" for k, v in self.properties.items()]
        lines += ["", "Checks:",
                  f"Complete tour: {'yes' if self.complete else 'no'}",
                  f"Duplicate cities: {len(self.duplicates)}" + (f" {self.duplicates}" if self.duplicates else ""),
                  f"Missing cities: {len(self.missing)}" + (f" {self.missing}" if self.missing else "")]
        if self.cost is not None:
            lines.append(f"Relaxed cost: {self.cost:.1f}")
        lines += ["", "Schedule:"] + self.schedule
        if self.violation_lines:
            lines += ["", "Violations:"] + self.violation_lines
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "tour": list(self.tour),
            "properties": self.properties,
            "complete": self.complete,
            "duplicates": self.duplicates,
            "missing": self.missing,
            "cost": self.cost,
            "schedule": self.schedule,
            "violations": self.violation_lines,
        }

    def write(self, stem) -> None:
        """Write ``<stem>.txt`` and ``<stem>.json``."""
        from pathlib import Path

        stem = Path(stem)
        stem.parent.mkdir(parents=True, exist_ok=True)
        stem.with_suffix(".txt").write_text(self.render(), encoding="utf-8")
        stem.with_suffix(".json").write_text(json.dumps(self.to_json(), indent=2) + "\n", encoding="utf-8")


def day_label(inst: Instance, i: int, start_date: dt.date | None = None) -> str:
    wd = day_of_week(inst, i).label
    if start_date is None:
        return f"{wd}, day {i}"
    d = start_date + dt.timedelta(days=i)
    return f"{wd} {d.day}-{d.strftime('%b')}"


def _violation_lines(ev: Evaluation, tour, inst: Instance, start_date) -> list[str]:
    out = []
    for loc in ev.violations.locations:
        i = loc.day_index
        if loc.kind in (AVAIL1, AVAIL2):
            how = "relatively" if loc.kind == AVAIL1 else "absolutely"
            out.append(f"{day_label(inst, i, start_date)}: {inst.city_name(tour[i])} (city {tour[i]}) "
                       f"is {how} unavailable")
        elif loc.kind == BREAK:
            out.append(f"Break violation: performances every day from day {i} ({loc.detail})")
        elif loc.kind in (SEP1, SEP2):
            a = tour[i]
            j = next(k for k in range(i + 1, len(tour)) if tour[k])
            b = tour[j]
            out.append(f"It normally takes {inst.day[a - 1][b - 1]} days to travel from "
                       f"{inst.city_name(a)} (city {a}) to {inst.city_name(b)} (city {b})")
            out.append(f"Now it takes {j - i} days")
    return out


def build_report(tour: Sequence[int], inst: Instance, *, title: str = "Tour",
                 break_limit: int = DEFAULT_BREAK_LIMIT, start_date: dt.date | None = None,
                 cost: float | None = None) -> TourReport:
    tour = tuple(tour)
    ev = evaluate(tour, inst, break_limit)
    schedule = [f"{day_label(inst, i, start_date)}, {inst.city_name(k)}" for i, k in enumerate(tour) if k]
    return TourReport(
        title=title,
        tour=tour,
        properties=properties_from(tour, ev),
        schedule=schedule,
        violation_lines=_violation_lines(ev, tour, inst, start_date),
        complete=is_complete(tour, inst),
        duplicates=duplicate_cities(tour),
        missing=missing_cities(tour, inst),
        cost=cost,
    )


_PROP_LINE = re.compile(r"^(?P<key>[^:]+):\s*(?P<value>-?\d+)\s*$")


def parse_property_block(text: str) -> dict[str, int]:
    """Read back the ``Properties:`` block of a rendered report."""
    props = {}
    inside = False
    for line in text.splitlines():
        if line.strip() == "Properties:":
            inside = True
            continue
        if inside:
            if not line.strip():
                break
            m = _PROP_LINE.match(line)
            if m and m.group("key") in PROPERTY_KEYS:
                props[m.group("key")] = int(m.group("value"))
    return props


def verify_report_text(text: str, tour: Sequence[int], inst: Instance,
                       break_limit: int = DEFAULT_BREAK_LIMIT) -> bool:
    """True iff the rendered property block matches a fresh evaluation."""
    return parse_property_block(text) == properties_from(tour, evaluate(tour, inst, break_limit))
