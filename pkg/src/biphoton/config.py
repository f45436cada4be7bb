"""Flat key = value run configuration with strict unknown-key rejection.

Lines hold ``key = value`` pairs; ``#`` starts a comment.  Angles are
radians and accept exact pi expressions ("pi/4", "3*pi/2"); amplitudes
additionally accept complex literals ("0.6+0.8j") and sqrt ("sqrt(0.9)").
Unknown or duplicate keys are errors, never warnings.
"""

from __future__ import annotations

import ast
import math
import operator

from .experiments import (
    DEFAULT_N_TRIALS,
    DEFAULT_SWEEP_POINTS,
    ExperimentSpec,
    PRESETS,
    SWEEP_AXES,
    SweepSpec,
)
from .optics import PhaseSettings, RSQRT2, SOURCE_TAGS, SourceKind


class ConfigError(Exception):
    """Raised for any malformed, unknown, or inconsistent configuration."""


KNOWN_KEYS = frozenset(
    {
        "preset",
        "source",
        "amp1",
        "amp2",
        "phi_s",
        "phi_a",
        "which_path",
        "n_trials",
        "seed",
        "sweep_axis",
        "sweep_points",
        "out",
        "phi_s_prime",
        "phi_a_prime",
        "expect",
    }
)

_PRESET_SOURCE = {
    "rtm": "entangled",
    "product_control": "product",
    "mixture_control": "mixture",
    "delayed_choice": "entangled",
    "cat": "entangled",
}

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
        return node.value
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        val = _eval_node(node.operand)
        return -val if isinstance(node.op, ast.USub) else val
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id == "sqrt"
        and len(node.args) == 1
        and not node.keywords
    ):
        return math.sqrt(_eval_node(node.args[0]))
    raise ConfigError("unsupported expression element")


def eval_number(text: str) -> complex:
    """Safely evaluate a numeric expression (numbers, pi, sqrt, + - * / **)."""
    try:
        tree = ast.parse(text, mode="eval")
        value = _eval_node(tree)
    except ConfigError:
        raise ConfigError(f"cannot parse numeric value {text!r}")
    except (SyntaxError, ValueError, TypeError, ZeroDivisionError):
        raise ConfigError(f"cannot parse numeric value {text!r}")
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ConfigError(f"value {text!r} is not finite")
    return value


def parse_angle(text: str) -> float:
    value = eval_number(text)
    if value.imag != 0.0:
        raise ConfigError(f"angle {text!r} must be real")
    return value.real


def parse_amplitude(text: str) -> complex:
    return eval_number(text)


def parse_int(text: str, key: str) -> int:
    try:
        return int(text, 0)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {text!r}")


def parse_bool(text: str, key: str) -> bool:
    low = text.lower()
    if low in ("true", "on", "yes", "1"):
        return True
    if low in ("false", "off", "no", "0"):
        return False
    raise ConfigError(f"{key} must be a boolean, got {text!r}")


def parse_config_text(text: str) -> dict[str, str]:
    """Parse key = value lines; reject unknown and duplicate keys."""
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key = key.strip()
        value = value.strip()
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown config key '{key}'")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate config key '{key}'")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for key '{key}'")
        entries[key] = value
    return entries


def load_config(path: str) -> dict[str, str]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return parse_config_text(handle.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}")


def _build_source(cfg: dict[str, str], tag: str) -> SourceKind:
    amp1 = parse_amplitude(cfg["amp1"]) if "amp1" in cfg else RSQRT2
    amp2 = parse_amplitude(cfg["amp2"]) if "amp2" in cfg else RSQRT2
    try:
        return SourceKind(tag, amp1, amp2)
    except ValueError as exc:
        raise ConfigError(str(exc))


def _source_tag(cfg: dict[str, str], default: str) -> str:
    tag = cfg.get("source", default)
    if tag not in SOURCE_TAGS:
        raise ConfigError(f"source must be one of {SOURCE_TAGS}, got {tag!r}")
    return tag


def build_experiment_spec(cfg: dict[str, str], seed_override: int | None = None) -> ExperimentSpec:
    """Assemble a preset run from parsed config entries, applying defaults."""
    if "preset" not in cfg:
        raise ConfigError("config key 'preset' is required")
    preset = cfg["preset"]
    if preset not in PRESETS:
        raise ConfigError(f"preset must be one of {PRESETS}, got {preset!r}")

    source = _build_source(cfg, _source_tag(cfg, _PRESET_SOURCE[preset]))
    settings = PhaseSettings(
        parse_angle(cfg.get("phi_s", "0")),
        parse_angle(cfg.get("phi_a", "0")),
    )
    sweep = None
    if "sweep_axis" in cfg or "sweep_points" in cfg:
        axis = cfg.get("sweep_axis", "delta")
        if axis not in SWEEP_AXES:
            raise ConfigError(f"sweep_axis must be one of {SWEEP_AXES}, got {axis!r}")
        points = parse_int(cfg.get("sweep_points", str(DEFAULT_SWEEP_POINTS)), "sweep_points")
        sweep = SweepSpec(axis, points)

    seed = seed_override if seed_override is not None else parse_int(cfg.get("seed", "1"), "seed")
    try:
        return ExperimentSpec(
            preset=preset,
            source=source,
            settings=settings,
            which_path=parse_bool(cfg.get("which_path", "false"), "which_path"),
            n_trials=parse_int(cfg.get("n_trials", str(DEFAULT_N_TRIALS)), "n_trials"),
            seed=seed,
            sweep=sweep,
        )
    except ValueError as exc:
        raise ConfigError(str(exc))


def build_sweep_request(cfg: dict[str, str], seed_override: int | None = None):
    """Sweep inputs: (source, base settings, sweep, n_trials, seed)."""
    default_tag = _PRESET_SOURCE[cfg["preset"]] if cfg.get("preset") in PRESETS else "entangled"
    source = _build_source(cfg, _source_tag(cfg, default_tag))
    settings = PhaseSettings(
        parse_angle(cfg.get("phi_s", "0")),
        parse_angle(cfg.get("phi_a", "0")),
    )
    axis = cfg.get("sweep_axis", "delta")
    if axis not in SWEEP_AXES:
        raise ConfigError(f"sweep_axis must be one of {SWEEP_AXES}, got {axis!r}")
    try:
        sweep = SweepSpec(axis, parse_int(cfg.get("sweep_points", str(DEFAULT_SWEEP_POINTS)), "sweep_points"))
    except ValueError as exc:
        raise ConfigError(str(exc))
    n_trials = parse_int(cfg.get("n_trials", str(DEFAULT_N_TRIALS)), "n_trials")
    if n_trials < 1:
        raise ConfigError("n_trials must be positive")
    seed = seed_override if seed_override is not None else parse_int(cfg.get("seed", "1"), "seed")
    return source, settings, sweep, n_trials, seed


def build_bell_request(cfg: dict[str, str]):
    """CHSH inputs: (four angles, source, expect_violation)."""
    source = _build_source(cfg, _source_tag(cfg, "entangled"))
    angles = (
        parse_angle(cfg.get("phi_s", "0")),
        parse_angle(cfg.get("phi_s_prime", "pi/2")),
        parse_angle(cfg.get("phi_a", "pi/4")),
        parse_angle(cfg.get("phi_a_prime", "3*pi/4")),
    )
    expect = cfg.get("expect")
    if expect is None:
        expect_violation = source.tag == "entangled"
    elif expect in ("violation", "no_violation"):
        expect_violation = expect == "violation"
    else:
        raise ConfigError(f"expect must be 'violation' or 'no_violation', got {expect!r}")
    return angles, source, expect_violation
