"""Benchmark datasets for PatchLearn"""

from typing import Callable, Dict

from ..core.exceptions import ConfigError
from .functions import gen_curve1d, gen_manifold3d, gen_sinc2d
from .labeled_set import LabeledSet
from .mackey_glass import apply_embedding, gen_mackey_glass
from .sysid import LAST_K, gen_sysid


def _sysid_pairs() -> LabeledSet:
    return gen_sysid().pairs(2, LAST_K)


def _mackey_glass_rows() -> LabeledSet:
    return gen_mackey_glass().embedded


DATASETS: Dict[str, Callable[[], LabeledSet]] = {
    "curve1d": gen_curve1d,
    "sinc2d": gen_sinc2d,
    "manifold3d": gen_manifold3d,
    "sysid": _sysid_pairs,
    "mackey-glass": _mackey_glass_rows,
}


def load_dataset(name: str) -> LabeledSet:
    """Benchmark LabeledSet by name"""
    try:
        factory = DATASETS[name]
    except KeyError:
        raise ConfigError(
            f"Unknown dataset '{name}'; expected one of {', '.join(DATASETS)}"
        ) from None
    return factory()


__all__ = [
    "DATASETS",
    "LabeledSet",
    "apply_embedding",
    "gen_curve1d",
    "gen_mackey_glass",
    "gen_manifold3d",
    "gen_sinc2d",
    "gen_sysid",
    "load_dataset",
]
