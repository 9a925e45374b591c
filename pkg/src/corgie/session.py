"""Session state: the transient selection, the ordered focal groups, view
settings, and the focus actions that mutate them.

Focal groups stay pairwise disjoint across any action sequence: nodes added
to one group are removed from every other, and emptied groups are dropped
(later groups shift left).  At most four focal groups are allowed.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass

import numpy as np

from .neighborhoods import MAX_FOCAL_GROUPS

FOCUS_KINDS = ("createNew", "addTo", "singleOut", "removeFrom", "clear")

COLOR_MODES = ("latentPosition", "feature", "nodeType", "predictedLabel", "correctness")


@dataclass(frozen=True)
class FocusAction:
    kind: str
    node_ids: tuple[int, ...] = ()
    group: int | None = None   # addTo / singleOut / removeFrom target
    feature: str | None = None

    def __post_init__(self):
        if self.kind not in FOCUS_KINDS:
            raise ValueError(f"unknown focus action {self.kind!r}")
        if self.kind in ("addTo", "singleOut", "removeFrom") and self.group is None:
            raise ValueError(f"{self.kind} requires a group index")


@dataclass
class Settings:
    node_color_mode: str = "latentPosition"
    color_feature: str | None = None
    hover_extends_to_neighbors: int = 0
    edge_bundling: bool = False
    distance_mode: str = "global"


def apply_focus_action(
    focal_groups: list[np.ndarray],
    action: FocusAction,
    n_nodes: int,
) -> list[np.ndarray]:
    """Pure transition: returns the new focal group list.

    Disjointness is preserved by construction; group indices are validated
    against the current state.
    """
    if action.kind == "clear":
        return []

    ids = np.unique(np.asarray(action.node_ids, dtype=np.int64))
    if len(ids) and (ids.min() < 0 or ids.max() >= n_nodes):
        raise ValueError("focus action references invalid node ids")

    groups = [g.copy() for g in focal_groups]

    def remove_everywhere(victims: np.ndarray) -> None:
        for i, g in enumerate(groups):
            groups[i] = g[~np.isin(g, victims)]

    if action.kind == "createNew":
        if len(ids) == 0:
            raise ValueError("createNew needs at least one node")
        if len(groups) >= MAX_FOCAL_GROUPS:
            raise ValueError(f"at most {MAX_FOCAL_GROUPS} focal groups")
        remove_everywhere(ids)
        groups.append(ids)
    elif action.kind in ("addTo", "singleOut", "removeFrom"):
        g = action.group
        if g is None or not 0 <= g < len(groups):
            raise ValueError(f"invalid group index {g}")
        if action.kind == "addTo":
            remove_everywhere(ids)
            groups[g] = np.union1d(groups[g], ids)
        elif action.kind == "singleOut":
            remove_everywhere(ids)
            groups[g] = ids
        else:  # removeFrom
            groups[g] = groups[g][~np.isin(groups[g], ids)]

    return [g for g in groups if len(g)]


class Session:
    """Per-session mutable state; mutations are serialized by ``lock``."""

    _ids = itertools.count(1)

    def __init__(self, session_id: str | None = None, k: int = 2):
        self.id = session_id or f"s{next(Session._ids)}"
        self.k = k
        self.lock = threading.Lock()
        self.selection: np.ndarray = np.zeros(0, dtype=np.int64)
        self.focal_groups: list[np.ndarray] = []
        self.settings = Settings()
        # layout job state, guarded by lock
        self.layout = None                 # published KHopLayout dict
        self.layout_job_id: int | None = None
        self.pending_job_id: int | None = None
        self.cancel_event: threading.Event | None = None
        self.job_error: str | None = None
