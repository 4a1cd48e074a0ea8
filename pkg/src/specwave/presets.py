"""Named experiment presets; each ships as a config file under configs/."""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["Preset", "PRESETS", "preset_names", "get_preset"]


@dataclass(frozen=True)
class Preset:
    name: str
    kind: str  # subcommand the preset belongs to: 'run' | 'converge' | 'probe-jn'
    description: str
    config: dict


_P = [
    Preset(
        "init1-spectrum-decay",
        "converge",
        "projection-error decay of the localized heap data (T=0, no time stepping)",
        {
            "system": "saint-venant-1d",
            "scheme": "sharp",
            "initial": "init1",
            "init.alpha": "1.5",
            "M_list": "16 32 64 128 256",
            "M_ref": "2048",
            "dt": "1e-4",
            "T": "0",
        },
    ),
    Preset(
        "converge-1d-heap",
        "converge",
        "1D convergence/EOC study from the localized heap, sharp vs smooth-nl",
        {
            "system": "saint-venant-1d",
            "scheme": "sharp smooth-nl",
            "initial": "init1",
            "init.alpha": "1.5",
            "M_list": "16 32 64 128 256",
            "M_ref": "1024",
            "dt": "1e-4",
            "T": "0.1",
        },
    ),
    Preset(
        "converge-1d-cavitation-edge",
        "converge",
        "1D convergence study for data outside the strict hyperbolicity domain",
        {
            "system": "saint-venant-1d",
            "scheme": "sharp smooth-nl",
            "initial": "init2",
            "M_list": "16 32 64 128 256",
            "M_ref": "1024",
            "dt": "1e-4",
            "T": "0.1",
        },
    ),
    Preset(
        "zero-depth-1d",
        "run",
        "1D runs with the non-cavitation condition touched; sharp vs smooth-nl curvature contrast",
        {
            "system": "saint-venant-1d",
            "scheme": "sharp smooth-nl",
            "initial": "init_zero_depth",
            "M": "512",
            "dt": "1e-4",
            "T": "0.1",
        },
    ),
    Preset(
        "converge-2d-standard",
        "converge",
        "2D convergence study for the standard advective system",
        {
            "system": "saint-venant-2d-standard",
            "scheme": "sharp smooth-nl",
            "initial": "init2D",
            "init.h0": "0.5",
            "init.u_l": "0.5",
            "init.v_l": "-0.5",
            "init.u_h": "1",
            "init.v_h": "-1",
            "init.s": "2",
            "M_list": "16 32 64",
            "M_ref": "128",
            "dt": "1e-3",
            "T": "0.1",
        },
    ),
    Preset(
        "converge-2d-hamiltonian",
        "converge",
        "2D convergence study for the gradient-form (factorizable) system",
        {
            "system": "saint-venant-2d-hamiltonian",
            "scheme": "sharp smooth-nl",
            "initial": "init2D",
            "init.h0": "0.5",
            "init.u_l": "0.5",
            "init.v_l": "-0.5",
            "init.u_h": "1",
            "init.v_h": "-1",
            "init.s": "2",
            "M_list": "16 32 64",
            "M_ref": "128",
            "dt": "1e-3",
            "T": "0.1",
        },
    ),
    Preset(
        "zero-depth-2d",
        "run",
        "2D runs with negative minimal depth; sharp vs smooth-nl curvature contrast",
        {
            "system": "saint-venant-2d-standard",
            "scheme": "sharp smooth-nl",
            "initial": "init2D",
            "init.h0": "-0.1",
            "init.u_l": "0.5",
            "init.v_l": "-0.5",
            "init.u_h": "1",
            "init.v_h": "-1",
            "init.s": "2",
            "M": "128",
            "dt": "1e-3",
            "T": "0.1",
        },
    ),
    Preset(
        "strict-hyperbolicity-2d",
        "run",
        "2D runs violating the strict domain of the gradient-form system only",
        {
            "system": "saint-venant-2d-hamiltonian",
            "scheme": "sharp smooth-nl",
            "initial": "init2D",
            "init.h0": "0.5",
            "init.u_l": "2",
            "init.v_l": "-2",
            "init.u_h": "1",
            "init.v_h": "-1",
            "init.s": "2",
            "M": "128",
            "dt": "1e-3",
            "T": "0.1",
        },
    ),
    Preset(
        "jn-linear-growth",
        "probe-jn",
        "linear growth of the sharp-projection pairing against the diagonal symmetrizer",
        {
            "system": "saint-venant-1d",
            "N_list": "32 64 128 256",
            "p": "1",
            "q": "0",
        },
    ),
]

PRESETS = {p.name: p for p in _P}


def preset_names() -> list[str]:
    return [p.name for p in _P]


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(preset_names())
        raise ValueError(f"unknown preset {name!r}; available: {known}") from None
