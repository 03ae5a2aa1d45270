"""Reading venue availability grids and mileage tables into an :class:`Instance`.

Availability grid CSV layout::

    venue names          (row 1, one column per venue)
    city of each venue   (row 2)
    one row per day      (statuses: o, c, o/h, p, <k>h, or empty)

Mileage CSV: a header row of city names, then one row of integers per city,
optionally led by the row's city name.
"""

from __future__ import annotations

import configparser
import csv
import enum
import random
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .model import DEFAULT_TRAVEL_LIMIT, AvailabilityCode, Instance, Weekday, derive_day_matrix

DEFAULT_WAITLIST_CUTOFF = 3

AVAILABILITY_FILE = "availability.csv"
MILE_FILE = "miles.csv"
INSTANCE_FILE = "instance.ini"

__all__ = [
    "IngestError", "StatusKind", "VenueStatus", "VenueGrid", "GeneratorParams",
    "parse_status", "classify_status", "merge_city", "derive_day_matrix",
    "read_venue_grid", "read_mile_matrix", "parse_instance",
    "load_instance_dir", "write_instance_dir", "generate_random_instance",
]


class IngestError(ValueError):
    """Malformed or inconsistent input data."""


class StatusKind(enum.Enum):
    OPEN = "o"
    CONFIRMED = "c"
    OPEN_HOLD = "o/h"
    PENDING = "p"
    WAITLIST = "h"
    NO_INFO = ""


@dataclass(frozen=True)
class VenueStatus:
    kind: StatusKind
    position: int | None = None

    def __post_init__(self):
        if self.kind is StatusKind.WAITLIST:
            if self.position is None or self.position < 1:
                raise ValueError("waitlist position must be >= 1")
        elif self.position is not None:
            raise ValueError(f"{self.kind} takes no position")

    @property
    def token(self) -> str:
        if self.kind is StatusKind.WAITLIST:
            return f"{self.position}h"
        return self.kind.value


_WAITLIST = re.compile(r"^(\d+)\s*h$")
_SIMPLE = {k.value: k for k in StatusKind if k is not StatusKind.WAITLIST}


def parse_status(token: str) -> VenueStatus:
    t = (token or "").strip().lower()
    if t in _SIMPLE:
        return VenueStatus(_SIMPLE[t])
    m = _WAITLIST.match(t)
    if m and int(m.group(1)) >= 1:
        return VenueStatus(StatusKind.WAITLIST, int(m.group(1)))
    raise IngestError(f"unknown venue status {token!r}")


def classify_status(s: VenueStatus | str, waitlist_cutoff: int = DEFAULT_WAITLIST_CUTOFF) -> AvailabilityCode:
    if isinstance(s, str):
        s = parse_status(s)
    if waitlist_cutoff < 0:
        raise ValueError("waitlist cutoff must be >= 0")
    if s.kind in (StatusKind.OPEN, StatusKind.OPEN_HOLD):
        return AvailabilityCode.AVAILABLE
    if s.kind is StatusKind.WAITLIST:
        return AvailabilityCode.AVAILABLE if s.position <= waitlist_cutoff else AvailabilityCode.RELATIVE
    # confirmed, pending, blank
    return AvailabilityCode.ABSOLUTE


def merge_city(codes: Iterable[AvailabilityCode]) -> AvailabilityCode:
    """Combine the codes of all venues of one city on one day."""
    codes = list(codes)
    if not codes:
        raise ValueError("cannot merge an empty list of venue codes")
    if AvailabilityCode.AVAILABLE in codes:
        return AvailabilityCode.AVAILABLE
    if all(c == AvailabilityCode.ABSOLUTE for c in codes):
        return AvailabilityCode.ABSOLUTE
    return AvailabilityCode.RELATIVE


@dataclass(frozen=True)
class VenueGrid:
    venues: tuple[tuple[str, str], ...]  # (venue name, city name)
    statuses: tuple[tuple[VenueStatus, ...], ...]  # [day][venue]

    @property
    def num_days(self) -> int:
        return len(self.statuses)

    def cities(self) -> list[str]:
        """City names in order of first appearance across the columns."""
        out = []
        for _, city in self.venues:
            if city not in out:
                out.append(city)
        return out

    def availability(self, waitlist_cutoff: int = DEFAULT_WAITLIST_CUTOFF) -> list[list[AvailabilityCode]]:
        cities = self.cities()
        columns = {c: [j for j, (_, city) in enumerate(self.venues) if city == c] for c in cities}
        return [
            [merge_city(classify_status(row[j], waitlist_cutoff) for j in columns[c]) for c in cities]
            for row in self.statuses
        ]


def _read_rows(path: Path) -> list[list[str]]:
    try:
        with open(path, newline="", encoding="utf-8-sig") as fh:
            return [row for row in csv.reader(fh)]
    except FileNotFoundError:
        raise IngestError(f"file not found: {path}") from None


def read_venue_grid(path: str | Path, cities: Sequence[str] | None = None) -> VenueGrid:
    """Parse an availability grid. ``cities``, when given, is the set of declared cities."""
    path = Path(path)
    rows = _read_rows(path)
    if len(rows) < 2:
        raise IngestError(f"{path}: need venue and city header rows")
    names = [c.strip() for c in rows[0]]
    city_of = [c.strip() for c in rows[1]]
    while names and not names[-1]:
        names.pop()
    width = len(names)
    if width == 0:
        raise IngestError(f"{path}: no venues")
    if len(city_of) < width or any(not c for c in city_of[:width]):
        raise IngestError(f"{path}: every venue needs a city in row 2")
    city_of = city_of[:width]
    if cities is not None:
        unknown = sorted(set(city_of) - set(cities))
        if unknown:
            raise IngestError(f"{path}: venues reference undeclared cities {unknown}")
    statuses = []
    for r, row in enumerate(rows[2:], start=3):
        if not row:
            continue  # blank line; a blank status is written as an empty field
        if len(row) > width and any(cell.strip() for cell in row[width:]):
            raise IngestError(f"{path}:{r}: {len(row)} cells for {width} venues")
        row = list(row) + [""] * (width - len(row))
        try:
            statuses.append(tuple(parse_status(cell) for cell in row[:width]))
        except IngestError as exc:
            raise IngestError(f"{path}:{r}: {exc}") from None
    return VenueGrid(tuple(zip(names, city_of)), tuple(statuses))


def read_mile_matrix(path: str | Path) -> tuple[list[str], list[list[int]]]:
    path = Path(path)
    rows = [row for row in _read_rows(path) if any(c.strip() for c in row)]
    if not rows:
        raise IngestError(f"{path}: empty mile file")
    header = [c.strip() for c in rows[0]]
    if header and header[0] == "":
        header = header[1:]
    m = len(header)
    matrix = []
    for r, row in enumerate(rows[1:], start=2):
        cells = [c.strip() for c in row]
        if len(cells) == m + 1:
            idx = r - 2
            if idx >= m or cells[0] != header[idx]:
                raise IngestError(f"{path}:{r}: row label {cells[0]!r} does not match header")
            cells = cells[1:]
        if len(cells) != m:
            raise IngestError(f"{path}:{r}: mile matrix is not square ({len(cells)} columns, {m} cities)")
        try:
            vals = [int(c) for c in cells]
        except ValueError:
            raise IngestError(f"{path}:{r}: non-integer mileage") from None
        if any(v < 0 for v in vals):
            raise IngestError(f"{path}:{r}: negative mileage")
        matrix.append(vals)
    if len(matrix) != m:
        raise IngestError(f"{path}: mile matrix is not square ({len(matrix)} rows, {m} cities)")
    return header, matrix


def parse_instance(grid_file, mile_file, num_days: int, start_weekday: Weekday | str = Weekday.MON, *,
                   travel_limit: int = DEFAULT_TRAVEL_LIMIT,
                   waitlist_cutoff: int = DEFAULT_WAITLIST_CUTOFF) -> Instance:
    if isinstance(start_weekday, str):
        start_weekday = Weekday.parse(start_weekday)
    names, mile = read_mile_matrix(mile_file)
    grid = read_venue_grid(grid_file, cities=names)
    if grid.num_days != num_days:
        raise IngestError(f"{grid_file}: grid has {grid.num_days} days, calendar has {num_days}")
    cities = grid.cities()
    if sorted(cities) != sorted(names):
        missing = sorted(set(names) - set(cities))
        raise IngestError(f"{grid_file}: cities without venues: {missing}")
    if cities != names:
        raise IngestError(f"{mile_file}: city order {names} differs from grid order {cities}")
    if travel_limit <= 0:
        raise IngestError("travel limit must be positive")
    try:
        return Instance(num_days, start_weekday, tuple(cities), mile,
                        grid.availability(waitlist_cutoff), travel_limit=travel_limit)
    except ValueError as exc:
        raise IngestError(str(exc)) from None


def load_instance_dir(directory: str | Path, **overrides) -> Instance:
    """Load ``availability.csv``, ``miles.csv`` and the calendar in ``instance.ini``."""
    directory = Path(directory)
    cfg = configparser.ConfigParser()
    ini = directory / INSTANCE_FILE
    if not ini.is_file():
        raise IngestError(f"file not found: {ini}")
    cfg.read(ini, encoding="utf-8")
    cal = cfg["calendar"] if cfg.has_section("calendar") else {}
    try:
        settings = dict(
            num_days=int(overrides.get("num_days") or cal["days"]),
            start_weekday=overrides.get("start_weekday") or cal.get("start_weekday", "mon"),
            travel_limit=int(overrides.get("travel_limit") or cal.get("travel_limit", DEFAULT_TRAVEL_LIMIT)),
            waitlist_cutoff=int(overrides.get("waitlist_cutoff") if overrides.get("waitlist_cutoff") is not None
                                else cal.get("waitlist_cutoff", DEFAULT_WAITLIST_CUTOFF)),
        )
    except (KeyError, ValueError) as exc:
        raise IngestError(f"{ini}: bad calendar section ({exc})") from None
    return parse_instance(directory / AVAILABILITY_FILE, directory / MILE_FILE,
                          settings["num_days"], settings["start_weekday"],
                          travel_limit=settings["travel_limit"], waitlist_cutoff=settings["waitlist_cutoff"])


# tokens that classify to each code under the default cutoff, used when writing grids
_TOKENS = {
    AvailabilityCode.AVAILABLE: ("o", "o/h", "1h", "2h", "3h"),
    AvailabilityCode.RELATIVE: ("4h", "5h", "6h", "7h", "8h", "9h"),
    AvailabilityCode.ABSOLUTE: ("c", "", "p"),
}


def write_instance_dir(inst: Instance, directory: str | Path, *, seed: int | None = None,
                       waitlist_cutoff: int = DEFAULT_WAITLIST_CUTOFF) -> Path:
    """Write an instance as a one-venue-per-city grid, a mile table and a calendar.

    With ``seed`` the status tokens are drawn among all tokens that classify to
    the same code; otherwise the canonical ``o`` / ``5h`` / ``c`` are used.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed) if seed is not None else None

    def token(code: AvailabilityCode) -> str:
        if code == AvailabilityCode.RELATIVE:
            options = tuple(f"{k}h" for k in range(waitlist_cutoff + 1, waitlist_cutoff + 7))
        elif code == AvailabilityCode.AVAILABLE:
            options = ("o", "o/h") + tuple(f"{k}h" for k in range(1, waitlist_cutoff + 1))
        else:
            options = _TOKENS[code]
        return rng.choice(options) if rng else options[0]

    with open(directory / AVAILABILITY_FILE, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([f"{c} Venue" for c in inst.city_names])
        w.writerow(inst.city_names)
        for row in inst.availability:
            w.writerow([token(code) for code in row])
    with open(directory / MILE_FILE, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(inst.city_names)
        w.writerows(inst.mile)
    cfg = configparser.ConfigParser()
    cfg["calendar"] = {
        "days": str(inst.num_days),
        "start_weekday": inst.start_weekday.name.lower(),
        "travel_limit": str(inst.travel_limit),
        "waitlist_cutoff": str(waitlist_cutoff),
    }
    with open(directory / INSTANCE_FILE, "w", encoding="utf-8") as fh:
        cfg.write(fh)
    return directory


@dataclass(frozen=True)
class GeneratorParams:
    num_cities: int = 15
    num_days: int = 42
    start_weekday: Weekday = Weekday.MON
    p_available: float = 0.6
    p_relative: float = 0.15
    mile_range: tuple[int, int] = (50, 1500)
    travel_limit: int = DEFAULT_TRAVEL_LIMIT
    symmetric_days: bool = False

    def __post_init__(self):
        if not (0.0 <= self.p_available <= 1.0 and 0.0 <= self.p_relative <= 1.0):
            raise ValueError("probabilities must lie in [0, 1]")
        if self.p_available + self.p_relative > 1.0 + 1e-12:
            raise ValueError("p_available + p_relative must not exceed 1")
        lo, hi = self.mile_range
        if not 0 <= lo <= hi:
            raise ValueError(f"bad mile range {self.mile_range}")
        if self.num_cities < 0 or self.num_days < 1:
            raise ValueError("need num_cities >= 0 and num_days >= 1")


def generate_random_instance(params: GeneratorParams, seed: int) -> Instance:
    """Draw availability cells i.i.d. and a uniform, generally asymmetric mile matrix.

    With ``symmetric_days`` the reverse distance is drawn within the same
    travel-limit bucket as the forward one, so the derived day matrix is
    symmetric while the mile matrix need not be.
    """
    rng = random.Random(seed)
    m, n = params.num_cities, params.num_days
    lo, hi = params.mile_range
    limit = params.travel_limit
    mile = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            if params.symmetric_days and j < i:
                bucket = mile[j][i] // limit
                b_lo, b_hi = max(lo, bucket * limit), min(hi, bucket * limit + limit - 1)
                mile[i][j] = rng.randint(b_lo, b_hi)
            else:
                mile[i][j] = rng.randint(lo, hi)
    pa, pr = params.p_available, params.p_relative
    avail = []
    for _ in range(n):
        row = []
        for _ in range(m):
            u = rng.random()
            if u < pa:
                row.append(AvailabilityCode.AVAILABLE)
            elif u < pa + pr:
                row.append(AvailabilityCode.RELATIVE)
            else:
                row.append(AvailabilityCode.ABSOLUTE)
        avail.append(row)
    names = tuple(f"City{k:02d}" for k in range(1, m + 1))
    return Instance(n, params.start_weekday, names, mile, avail, travel_limit=limit)
