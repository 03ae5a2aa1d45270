"""Run manifests: an INI file collecting instance source, weights, penalties and SA settings.

Paths inside a manifest are resolved relative to the manifest file.
Sweep cells are sections named ``[cell NAME]`` whose keys are dotted
overrides of the base sections, e.g. ``weights.good = -2000``.
"""

from __future__ import annotations

import configparser
import datetime as dt
from dataclasses import dataclass, field, replace
from pathlib import Path

from .anneal import SAParams
from .constraints import DEFAULT_BREAK_LIMIT
from .ingest import DEFAULT_WAITLIST_CUTOFF, GeneratorParams
from .model import DEFAULT_TRAVEL_LIMIT, Penalties, Weekday, Weights


class ManifestError(ValueError):
    pass


_WEIGHT_KEYS = {"mile": "w_mile", "good": "w_good", "bad": "w_bad"}
_PENALTY_KEYS = {"avail1": "p_avail1", "avail2": "p_avail2", "break": "p_break", "sep1": "p_sep1", "sep2": "p_sep2"}
_ANNEAL_KEYS = {
    "t0": ("t0", float), "temp_limit": ("temp_limit", float), "iters_per_temp": ("iters_per_temp", int),
    "alpha": ("alpha", float), "budget": ("time_budget", float), "seed": ("seed", int),
    "restart_reset": ("restart_reset", "bool"), "max_moves": ("max_moves", int),
}
_GEN_KEYS = {
    "cities": ("num_cities", int), "days": ("num_days", int), "start_weekday": ("start_weekday", Weekday.parse),
    "p_available": ("p_available", float), "p_relative": ("p_relative", float),
    "mile_lo": ("mile_lo", int), "mile_hi": ("mile_hi", int), "travel_limit": ("travel_limit", int),
    "symmetric_days": ("symmetric_days", "bool"), "seed": ("seed", int),
}


@dataclass(frozen=True)
class Cell:
    name: str
    weights: Weights
    penalties: Penalties
    sa: SAParams


@dataclass(frozen=True)
class RunManifest:
    instance_dir: Path | None = None
    generator: GeneratorParams | None = None
    generator_seed: int = 0
    weights: Weights = Weights()
    penalties: Penalties = Penalties()
    sa: SAParams = SAParams()
    break_limit: int = DEFAULT_BREAK_LIMIT
    waitlist_cutoff: int = DEFAULT_WAITLIST_CUTOFF
    travel_limit: int | None = None
    start_date: dt.date | None = None
    output_dir: Path = Path("tourcast-out")
    cells: tuple[Cell, ...] = field(default=())

    def base_cell(self) -> Cell:
        return Cell("base", self.weights, self.penalties, self.sa)


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "yes", "true", "on"):
        return True
    if t in ("0", "no", "false", "off"):
        return False
    raise ManifestError(f"not a boolean: {text!r}")


def _convert(value: str, conv):
    if conv == "bool":
        return _bool(value)
    return conv(value)


def _apply(weights: Weights, penalties: Penalties, sa: SAParams, section: str, key: str, value: str, where: str):
    try:
        if section == "weights" and key in _WEIGHT_KEYS:
            return replace(weights, **{_WEIGHT_KEYS[key]: float(value)}), penalties, sa
        if section == "penalties" and key in _PENALTY_KEYS:
            return weights, replace(penalties, **{_PENALTY_KEYS[key]: float(value)}), sa
        if section == "anneal" and key in _ANNEAL_KEYS:
            attr, conv = _ANNEAL_KEYS[key]
            return weights, penalties, replace(sa, **{attr: _convert(value, conv)})
    except ValueError as exc:
        raise ManifestError(f"{where}: {section}.{key} = {value!r}: {exc}") from None
    raise ManifestError(f"{where}: unknown key {section}.{key}")


def load_manifest(path: str | Path) -> RunManifest:
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"manifest not found: {path}")
    cfg = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cfg.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ManifestError(f"{path}: {exc}") from None
    base = path.parent

    weights, penalties, sa = Weights(), Penalties(), SAParams()
    for section in ("weights", "penalties", "anneal"):
        if cfg.has_section(section):
            for key, value in cfg.items(section):
                weights, penalties, sa = _apply(weights, penalties, sa, section, key, value, str(path))

    kw: dict = {"weights": weights, "penalties": penalties, "sa": sa}
    if cfg.has_section("instance"):
        sec = cfg["instance"]
        if "dir" in sec:
            d = Path(sec["dir"])
            kw["instance_dir"] = d if d.is_absolute() else base / d
        for key, conv in (("travel_limit", int), ("waitlist_cutoff", int)):
            if key in sec:
                kw[key] = conv(sec[key])
        if "start_date" in sec:
            try:
                kw["start_date"] = dt.date.fromisoformat(sec["start_date"])
            except ValueError:
                raise ManifestError(f"{path}: bad start_date {sec['start_date']!r}") from None
    if cfg.has_section("generate"):
        gen: dict = {}
        for key, value in cfg.items("generate"):
            if key not in _GEN_KEYS:
                raise ManifestError(f"{path}: unknown key generate.{key}")
            attr, conv = _GEN_KEYS[key]
            try:
                gen[attr] = _convert(value, conv)
            except ValueError as exc:
                raise ManifestError(f"{path}: generate.{key}: {exc}") from None
        kw["generator_seed"] = gen.pop("seed", 0)
        lo, hi = gen.pop("mile_lo", None), gen.pop("mile_hi", None)
        if lo is not None or hi is not None:
            default = GeneratorParams().mile_range
            gen["mile_range"] = (lo if lo is not None else default[0], hi if hi is not None else default[1])
        gen.setdefault("travel_limit", DEFAULT_TRAVEL_LIMIT)
        try:
            kw["generator"] = GeneratorParams(**gen)
        except ValueError as exc:
            raise ManifestError(f"{path}: {exc}") from None
    if "instance_dir" not in kw and "generator" not in kw:
        raise ManifestError(f"{path}: needs an [instance] dir or a [generate] section")
    if cfg.has_section("rules"):
        sec = cfg["rules"]
        if "break_limit" in sec:
            kw["break_limit"] = int(sec["break_limit"])
        if "waitlist_cutoff" in sec:
            kw["waitlist_cutoff"] = int(sec["waitlist_cutoff"])
    if cfg.has_section("output") and "dir" in cfg["output"]:
        d = Path(cfg["output"]["dir"])
        kw["output_dir"] = d if d.is_absolute() else base / d

    cells = []
    for section in cfg.sections():
        if not section.startswith("cell"):
            continue
        name = section[4:].strip() or str(len(cells) + 1)
        cw, cp, cs = weights, penalties, sa
        for key, value in cfg.items(section):
            if "." not in key:
                raise ManifestError(f"{path}: [{section}] keys must be dotted, got {key!r}")
            sec, _, k = key.partition(".")
            cw, cp, cs = _apply(cw, cp, cs, sec, k, value, f"{path} [{section}]")
        cells.append(Cell(name, cw, cp, cs))
    kw["cells"] = tuple(cells)
    try:
        return RunManifest(**kw)
    except ValueError as exc:
        raise ManifestError(f"{path}: {exc}") from None
