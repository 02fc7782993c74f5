"""Run configuration: TOML schema, validation, defaults.

Schema (all keys optional except manifolds/corpus when a config file is
given; the shipped default covers the full catalog):

    seed = 0
    output = "reports"
    format = "jsonl"            # jsonl | csv | both
    suites = ["all"]            # subset of ps, lemmas, hardy, hpw, hs,
                                # ckn, ibp, bg, or the single word all

    [[manifolds]]
    kind = "euclidean"          # euclidean | cone (smoothed) | exact_cone
    n = 3
    # cone kinds: c, delta; optional r_max (default 50)

    [[corpus]]
    family = "gaussian"         # gaussian, bump, two_bump, talenti,
    alpha = 1.0                 # hardy_near_extremal, annulus
                                # remaining keys are family parameters

    [params.ps]
    p = [1.5, 2.0, 3.0]
    [params.lemmas]
    p = [2.0]
    weights = ["power:-1", "power:-2", "power:2", "constant"]
    [params.hardy]
    p = [2.0]
    [params.hs]
    p = [2.0]
    s_frac = [0.0, 0.5, 1.0]    # s = s_frac * p
    [params.ckn]
    a_frac = [0.0, 0.4, 0.8]    # a = a_frac * a_max(n, theta)
    db = [0.0, 0.5, 1.0]        # b = a + db
    [params.ibp]
    a = [0.0, 0.2, 0.4]

    [tolerances]                # optional per-suite relative overrides
    ps = 1e-8
"""

from __future__ import annotations

import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field

from .errors import ConfigError
from .functionals import WeightSpec
from .manifold import ModelManifold
from .radial import ProfileFamily, materialize

__all__ = [
    "RunConfig",
    "parse_config",
    "parse_manifold_spec",
    "DEFAULT_CONFIG_TOML",
    "SUITES",
]

SUITES = ("bg", "ps", "lemmas", "hardy", "hpw", "hs", "ckn", "ibp")

DEFAULT_CONFIG_TOML = """\
seed = 0
output = "reports"
format = "both"
suites = ["all"]

[[manifolds]]
kind = "euclidean"
n = 3

[[manifolds]]
kind = "euclidean"
n = 4

[[manifolds]]
kind = "cone"
n = 3
c = 0.5
delta = 1.0

[[manifolds]]
kind = "cone"
n = 4
c = 0.5
delta = 1.0

[[manifolds]]
kind = "cone"
n = 3
c = 0.8
delta = 1.0

[[manifolds]]
kind = "cone"
n = 4
c = 0.8
delta = 1.0

[[corpus]]
family = "gaussian"
alpha = 1.0

[[corpus]]
family = "bump"
R = 1.0
k = 2.0

[[corpus]]
family = "two_bump"

[[corpus]]
family = "talenti"
p = 2.0
R = 20.0

[[corpus]]
family = "hardy_near_extremal"
beta = 0.5
eps = 0.05

[params.ps]
p = [1.5, 2.0, 3.0]

[params.lemmas]
p = [2.0]
weights = ["power:-1", "power:-2", "power:2", "constant"]

[params.hardy]
p = [2.0]

[params.hs]
p = [2.0]
s_frac = [0.0, 0.5, 1.0]

[params.ckn]
a_frac = [0.0, 0.4, 0.8]
db = [0.0, 0.5, 1.0]

[params.ibp]
a = [0.0, 0.2, 0.4]
"""

_DEFAULT_PARAMS = {
    "ps": {"p": [1.5, 2.0, 3.0]},
    "lemmas": {"p": [2.0],
               "weights": ["power:-1", "power:-2", "power:2", "constant"]},
    "hardy": {"p": [2.0]},
    "hpw": {},
    "hs": {"p": [2.0], "s_frac": [0.0, 0.5, 1.0]},
    "ckn": {"a_frac": [0.0, 0.4, 0.8], "db": [0.0, 0.5, 1.0]},
    "ibp": {"a": [0.0, 0.2, 0.4]},
    "bg": {},
}


@dataclass
class RunConfig:
    manifolds: list[ModelManifold]
    corpus: list[ProfileFamily]
    suites: list[str]
    params: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    seed: int = 0
    output: str = "reports"
    format: str = "both"
    chs_budget: int = 1200
    chs_restarts: int = 2

    @classmethod
    def default(cls) -> "RunConfig":
        return parse_config(DEFAULT_CONFIG_TOML)

    def suite_params(self, suite: str) -> dict:
        merged = dict(_DEFAULT_PARAMS.get(suite, {}))
        merged.update(self.params.get(suite, {}))
        return merged


def parse_weight(text: str) -> WeightSpec:
    if text == "constant":
        return WeightSpec()
    mobj = re.fullmatch(r"power:(-?\d+(?:\.\d+)?)", text)
    if not mobj:
        raise ConfigError(f"weight {text!r} is not 'constant' or 'power:<exp>'")
    return WeightSpec.power(float(mobj.group(1)))


def parse_manifold_spec(text: str, n: int, r_max: float = 50.0) -> ModelManifold:
    """CLI catalog names: ``euclidean`` or ``cone(c,delta)``."""
    text = text.strip()
    if text == "euclidean":
        return ModelManifold.euclidean(n, r_max=r_max)
    mobj = re.fullmatch(r"cone\(([^,]+),([^)]+)\)", text)
    if mobj:
        return ModelManifold.smoothed_cone(n, float(mobj.group(1)),
                                           float(mobj.group(2)), r_max=r_max)
    raise ConfigError(f"unknown manifold spec {text!r}; "
                      "use 'euclidean' or 'cone(c,delta)'")


def _build_manifold(entry: dict, errors: list[str]) -> ModelManifold | None:
    kind = entry.get("kind")
    n = entry.get("n")
    r_max = float(entry.get("r_max", 50.0))
    try:
        if not isinstance(n, int) or n < 3:
            raise ConfigError(f"manifold dimension must be an integer >= 3, got {n!r}")
        if kind == "euclidean":
            return ModelManifold.euclidean(n, r_max=r_max)
        if kind == "cone":
            return ModelManifold.smoothed_cone(
                n, float(entry.get("c", 0.5)), float(entry.get("delta", 1.0)),
                r_max=r_max)
        if kind == "exact_cone":
            from .manifold import WarpFunction
            return ModelManifold(n=n, warp=WarpFunction.cone(float(entry["c"])),
                                 r_max=r_max)
        raise ConfigError(f"unknown manifold kind {kind!r}")
    except Exception as exc:  # collect, keep parsing
        errors.append(str(exc))
        return None


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a TOML run configuration.

    All precondition violations are collected and reported together.
    """
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"TOML parse error: {exc}") from exc

    errors: list[str] = []

    manifolds = [mm for entry in raw.get("manifolds", [])
                 if (mm := _build_manifold(entry, errors)) is not None]
    if not raw.get("manifolds"):
        errors.append("config must list at least one manifold")

    corpus: list[ProfileFamily] = []
    for entry in raw.get("corpus", []):
        entry = dict(entry)
        name = entry.pop("family", None)
        if name is None:
            errors.append("corpus entry missing 'family'")
            continue
        corpus.append(ProfileFamily(name=name, params=entry))
    if not raw.get("corpus"):
        errors.append("config must list at least one corpus family")

    suites = list(raw.get("suites", ["all"]))
    if suites == ["all"] or "all" in suites:
        suites = list(SUITES)
    for s in suites:
        if s not in SUITES:
            errors.append(f"unknown suite {s!r}; valid: {', '.join(SUITES)} or all")

    params = raw.get("params", {})
    tolerances = raw.get("tolerances", {})
    fmt = raw.get("format", "both")
    if fmt not in ("jsonl", "csv", "both"):
        errors.append(f"format must be jsonl, csv or both, got {fmt!r}")

    cfg = RunConfig(
        manifolds=manifolds,
        corpus=corpus,
        suites=[s for s in suites if s in SUITES],
        params=params,
        tolerances=tolerances,
        seed=int(raw.get("seed", 0)),
        output=str(raw.get("output", "reports")),
        format=fmt,
        chs_budget=int(raw.get("chs_budget", 1200)),
        chs_restarts=int(raw.get("chs_restarts", 2)),
    )
    errors.extend(_validate(cfg))
    if errors:
        raise ConfigError("invalid configuration:\n  - " + "\n  - ".join(errors))
    return cfg


def _validate(cfg: RunConfig) -> list[str]:
    errors: list[str] = []
    dims = {m.n for m in cfg.manifolds}

    for fam in cfg.corpus:
        for m in cfg.manifolds:
            try:
                materialize(fam, m)
            except ConfigError as exc:
                errors.append(str(exc))
            except Exception as exc:
                errors.append(f"{fam.label()}: {exc}")
            break  # support constraint depends only on r_max; one check suffices

    for suite in cfg.suites:
        sp = cfg.suite_params(suite)
        if suite in ("hardy", "hs"):
            thm = "the Hardy range 1 < p < n" if suite == "hardy" \
                else "the Hardy-Sobolev range 1 < p < n"
            for p in sp.get("p", []):
                if dims and not any(1.0 < p < n for n in dims):
                    errors.append(f"suite {suite}: p={p} violates {thm} "
                                  f"for every configured dimension {sorted(dims)}")
        if suite == "hs":
            for sf in sp.get("s_frac", []):
                if not (0.0 <= sf <= 1.0):
                    errors.append(f"suite hs: s_frac={sf} must lie in [0, 1] "
                                  "(s = s_frac * p must satisfy 0 <= s <= p)")
        if suite == "ckn":
            for af in sp.get("a_frac", []):
                if not (0.0 <= af < 1.0):
                    errors.append(
                        f"suite ckn: a_frac={af} must lie in [0, 1); the "
                        "admissible range is 0 <= a < "
                        "((n-2)/2)(1-sqrt(1-theta^(2/n)))")
            for db in sp.get("db", []):
                if not (0.0 <= db <= 1.0):
                    errors.append(f"suite ckn: db={db} must lie in [0, 1] "
                                  "(a <= b <= a+1)")
        if suite == "lemmas":
            for w in sp.get("weights", []):
                try:
                    parse_weight(w)
                except ConfigError as exc:
                    errors.append(f"suite lemmas: {exc}")
        if suite == "ps":
            for p in sp.get("p", []):
                if p <= 1.0:
                    errors.append(f"suite ps: p={p} must exceed 1")
    return errors
