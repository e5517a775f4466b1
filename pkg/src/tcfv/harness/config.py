"""Run configuration and its flat ``key = value`` text format.

Example::

    # aligned shock, three troubled columns on each side
    case = aligned-oblique
    grid = medium
    mach = 3
    beta = 30
    limiting = config
    config = 33

Blank lines and ``#`` comments are ignored.  Unknown keys are errors.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

from ..errors import ConfigurationError
from ..troubled import parse_config

CASES = ("aligned-oblique", "nonaligned-oblique", "aligned-ramp",
         "isentropic-vortex", "dmr-aligned", "dmr-nonaligned")
LIMITING = ("everywhere", "none", "config", "indicator")
TIERS = ("coarse", "medium", "fine")

# Parameters that make no sense for a case.
_FORBIDDEN = {
    "aligned-oblique": ("flow_angle", "t_final"),
    "nonaligned-oblique": ("t_final",),
    "aligned-ramp": ("flow_angle", "t_final"),
    "isentropic-vortex": ("mach", "beta", "flow_angle", "anchor_x", "config",
                          "threshold", "bootstrap_flux"),
    "dmr-aligned": ("mach", "beta", "flow_angle", "anchor_x", "bootstrap_flux"),
    "dmr-nonaligned": ("mach", "beta", "flow_angle", "anchor_x", "bootstrap_flux"),
}
UNSTEADY_CASES = ("isentropic-vortex", "dmr-aligned", "dmr-nonaligned")


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to set up and run one case.

    ``None`` means "use the case default".  ``nx``/``ny`` override ``grid``.
    """

    case: str
    grid: str = "coarse"
    nx: int | None = None
    ny: int | None = None
    mach: float | None = None
    beta: float | None = None
    flow_angle: float | None = None
    anchor_x: float | None = None
    limiting: str | None = None
    config: str | None = None
    threshold: float | None = None
    flux: str = "ausm+"
    bootstrap_flux: str | None = None
    order: int = 2
    cfl: float | None = None
    max_iterations: int = 15000
    tol: float = 1e-14
    t_final: float | None = None
    y_line: float = 0.5
    window: int = 20
    name: str | None = None

    def __post_init__(self):
        if self.case not in CASES:
            raise ConfigurationError(f"case: unknown case {self.case!r}; choose from {CASES}")
        if self.grid not in TIERS:
            raise ConfigurationError(f"grid: must be one of {TIERS}, got {self.grid!r}")
        if (self.nx is None) != (self.ny is None):
            raise ConfigurationError("nx/ny: give both or neither")
        for key in _FORBIDDEN[self.case]:
            if getattr(self, key) is not None:
                raise ConfigurationError(f"{key}: not a parameter of case {self.case}")
        limiting = self.limiting or self.default_limiting
        if limiting not in LIMITING:
            raise ConfigurationError(f"limiting: must be one of {LIMITING}, got {limiting!r}")
        object.__setattr__(self, "limiting", limiting)
        if limiting == "config":
            if self.config is None:
                raise ConfigurationError("config: required when limiting = config")
            parse_config(self.config)
        elif self.config is not None and not self.case.startswith("dmr"):
            raise ConfigurationError("config: only used when limiting = config")
        if limiting == "indicator":
            if self.threshold is None:
                object.__setattr__(self, "threshold", 0.05)
            if not self.threshold > 0:
                raise ConfigurationError(f"threshold: must be positive, got {self.threshold}")
        elif self.threshold is not None and not self.case.startswith("dmr"):
            raise ConfigurationError("threshold: only used when limiting = indicator")
        if self.case.startswith("dmr") and limiting not in ("indicator", "everywhere"):
            raise ConfigurationError(
                "limiting: double Mach reflection supports indicator or everywhere")
        if self.order not in (1, 2):
            raise ConfigurationError(f"order: must be 1 or 2, got {self.order}")
        if self.window < 1:
            raise ConfigurationError(f"window: must be positive, got {self.window}")

    @property
    def unsteady(self):
        return self.case in UNSTEADY_CASES

    @property
    def default_limiting(self):
        if self.case == "isentropic-vortex":
            return "none"
        if self.case.startswith("dmr"):
            return "indicator"
        return "everywhere"

    @property
    def mask_label(self):
        """Short tag for output tables: ``'33'``, ``'everywhere'``, ``'K=0.05'``."""
        if self.limiting == "config":
            x, y = parse_config(self.config)
            return f"{x}{y}"
        if self.limiting == "indicator":
            return f"K={self.threshold:g}"
        return self.limiting

    @property
    def run_name(self):
        if self.name:
            return self.name
        parts = [self.case]
        if self.mach is not None:
            parts.append(f"M{self.mach:g}")
        if self.beta is not None:
            parts.append(f"b{self.beta:g}")
        if self.flow_angle is not None:
            parts.append(f"a{self.flow_angle:g}")
        parts.append(f"{self.nx}x{self.ny}" if self.nx else self.grid)
        parts.append(self.mask_label.replace("=", ""))
        return "_".join(parts)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_INT_KEYS = ("nx", "ny", "order", "max_iterations", "window")
_FLOAT_KEYS = ("mach", "beta", "flow_angle", "anchor_x", "threshold", "cfl", "tol",
               "t_final", "y_line")


def parse_config_text(text, source="<string>"):
    """Parse ``key = value`` lines into a :class:`RunConfig`."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELDS:
            raise ConfigurationError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigurationError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            if key in _INT_KEYS:
                values[key] = int(value)
            elif key in _FLOAT_KEYS:
                values[key] = float(value)
            else:
                values[key] = value.strip("'\"")
        except ValueError:
            raise ConfigurationError(
                f"{source}:{lineno}: bad value {value!r} for {key}") from None
    if "case" not in values:
        raise ConfigurationError(f"{source}: missing required key 'case'")
    return RunConfig(**values)


def load_config(path):
    path = Path(path)
    return parse_config_text(path.read_text(), str(path))


def dump_config(cfg):
    """Inverse of :func:`parse_config_text` for non-default fields."""
    lines = []
    for name, f in _FIELDS.items():
        val = getattr(cfg, name)
        if val is None or (name != "case" and val == f.default):
            continue
        lines.append(f"{name} = {val:g}" if isinstance(val, float) else f"{name} = {val}")
    return "\n".join(lines) + "\n"
