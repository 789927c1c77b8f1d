"""Workspace configuration and the on-disk artifact cache.

Layout: cache/m{m}/n{n}/phi.txt, delta.txt, Delta_{n}_{d}.txt,
delta_nn_mod_{p}.txt.  Writes are atomic (temp file + rename), so concurrent
invocations cannot observe partial files.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .errors import WorkBudgetError

ENV_CACHE = "DYNATOMIC_CACHE"
DEFAULT_TRIAL_BOUND = 10**7
# work units are deg_x(Phi_n)^2; 64^2 admits m=2 up to n=6 in characteristic 0
DEFAULT_CHAR0_BUDGET = 64**2


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_CACHE)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "dynatomic"


@dataclass
class WorkspaceConfig:
    cache_dir: Path = field(default_factory=default_cache_dir)
    trial_bound: int = DEFAULT_TRIAL_BOUND
    work_budget: int = DEFAULT_CHAR0_BUDGET
    output_format: str = "text"

    def __post_init__(self):
        self.cache_dir = Path(self.cache_dir)
        if self.trial_bound < 2 or self.work_budget < 1:
            raise WorkBudgetError("budgets must be positive")

    def subdir(self, m: int, n: int) -> Path:
        return self.cache_dir / f"m{m}" / f"n{n}"

    def charge_char0(self, deg_x: int) -> None:
        if deg_x * deg_x > self.work_budget:
            raise WorkBudgetError(
                f"characteristic-0 computation of size {deg_x}^2 exceeds the "
                f"budget {self.work_budget}; raise work_budget to proceed"
            )


def atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_text(path: Path) -> str | None:
    try:
        return path.read_text()
    except FileNotFoundError:
        return None
