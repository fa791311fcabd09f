"""Curriculum tasks, ordered curriculum graphs and a mastering-rate scheduler.

Tasks restrict the sampling configuration: Add allows a single factor per
product (no multiplication at all), Mul2/Mul3 allow a single product of at
most two/three factors, Scoeff is the small-coefficient preset wholesale and
Mixed is the target configuration unchanged.  A directed acyclic graph over
tasks expresses which tasks should be learnt first.

The scheduler tracks an exponential moving average of per-task batch accuracy
(the mastering rate).  A task is eligible only while every ancestor's rate
exceeds the mastery threshold; eligible tasks receive attention proportional
to (1 - rate) + epsilon, normalized into a sampling distribution.  This
gate-and-remainder rule stands in for the attention-to-distribution
converters of the original curriculum-learning machinery and is deliberately
pluggable.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Sequence, TypeVar

from .config import ConstraintConfig, preset_config
from .rng import SeededRng

T = TypeVar("T")

TASK_NAMES = ("Add", "Mul2", "Mul3", "Scoeff", "Mixed")

N_B_DEFAULT = 10  # batch groups drawn between attention updates
MASTERY_THRESHOLD = 0.9
EMA_DECAY = 0.99
ATTENTION_EPS = 0.05


class UnknownTask(KeyError):
    pass


def task_config(name: str, base: ConstraintConfig) -> ConstraintConfig:
    """The sampling configuration implementing one curriculum task."""
    if name == "Add":
        cfg = replace(base, min_factors=1, max_factors=1)
    elif name == "Mul2":
        cfg = replace(base, min_products=1, max_products=1, max_factors=2, min_factors=2)
    elif name == "Mul3":
        cfg = replace(base, min_products=1, max_products=1, max_factors=3, min_factors=2)
    elif name == "Scoeff":
        cfg = preset_config("small_coeff", base.max_vars_poly)
    elif name == "Mixed":
        cfg = base
    else:
        raise UnknownTask(name)
    cfg.validate()
    return cfg


@dataclass(frozen=True)
class CurriculumGraph:
    edges: tuple[tuple[str, str], ...]

    @property
    def tasks(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for a, b in self.edges:
            seen.setdefault(a)
            seen.setdefault(b)
        return tuple(seen)

    def validate(self) -> None:
        tasks = self.tasks
        for a, b in self.edges:
            for t in (a, b):
                if t not in TASK_NAMES:
                    raise UnknownTask(t)
        out: dict[str, list[str]] = {t: [] for t in tasks}
        for a, b in self.edges:
            out[a].append(b)
        state: dict[str, int] = {}

        def visit(t: str) -> None:
            if state.get(t) == 1:
                raise ValueError(f"curriculum graph has a cycle through {t}")
            if state.get(t) == 2:
                return
            state[t] = 1
            for nxt in out[t]:
                visit(nxt)
            state[t] = 2

        for t in tasks:
            visit(t)
        sources = [t for t in tasks if not self.ancestors(t)]
        reachable = set(sources)
        frontier = list(sources)
        while frontier:
            cur = frontier.pop()
            for nxt in out[cur]:
                if nxt not in reachable:
                    reachable.add(nxt)
                    frontier.append(nxt)
        if set(tasks) - reachable:
            raise ValueError(f"tasks unreachable from any source: {set(tasks) - reachable}")

    def parents(self, task: str) -> tuple[str, ...]:
        return tuple(a for a, b in self.edges if b == task)

    def ancestors(self, task: str) -> frozenset[str]:
        seen: set[str] = set()
        frontier = list(self.parents(task))
        while frontier:
            cur = frontier.pop()
            if cur not in seen:
                seen.add(cur)
                frontier.extend(self.parents(cur))
        return frozenset(seen)


CURRICULA = {
    "C": CurriculumGraph((("Add", "Mul3"), ("Mul3", "Mixed"), ("Add", "Mixed"))),
    "C2": CurriculumGraph(
        (("Add", "Mul2"), ("Mul2", "Mul3"), ("Mul3", "Mixed"), ("Add", "Mixed"))
    ),
    "C4": CurriculumGraph(
        (
            ("Add", "Mul2"),
            ("Mul2", "Mul3"),
            ("Mul3", "Scoeff"),
            ("Add", "Scoeff"),
            ("Scoeff", "Mixed"),
        )
    ),
}


@dataclass
class SchedulerState:
    """Per-task mastering rates plus the scheduler hyperparameters."""

    mastery: dict[str, float]
    decay: float = EMA_DECAY
    threshold: float = MASTERY_THRESHOLD
    eps: float = ATTENTION_EPS
    updates: dict[str, int] = field(default_factory=dict)


def new_scheduler(
    graph: CurriculumGraph,
    decay: float = EMA_DECAY,
    threshold: float = MASTERY_THRESHOLD,
    eps: float = ATTENTION_EPS,
) -> SchedulerState:
    graph.validate()
    return SchedulerState(
        mastery={t: 0.0 for t in graph.tasks}, decay=decay, threshold=threshold, eps=eps
    )


def update_mastery(state: SchedulerState, task: str, batch_accuracy: float) -> SchedulerState:
    """Fold one batch accuracy into the task's mastering rate (EMA)."""
    if task not in state.mastery:
        raise UnknownTask(task)
    if not 0.0 <= batch_accuracy <= 1.0:
        raise ValueError(f"batch accuracy must be in [0, 1], got {batch_accuracy}")
    state.mastery[task] = state.decay * state.mastery[task] + (1 - state.decay) * batch_accuracy
    state.updates[task] = state.updates.get(task, 0) + 1
    return state


def distribution(state: SchedulerState, graph: CurriculumGraph) -> dict[str, float]:
    """Sampling distribution over tasks; gated by ancestor mastery."""
    attention: dict[str, float] = {}
    for task in graph.tasks:
        if all(state.mastery[a] > state.threshold for a in graph.ancestors(task)):
            attention[task] = (1.0 - state.mastery[task]) + state.eps
        else:
            attention[task] = 0.0
    total = sum(attention.values())
    return {t: a / total for t, a in attention.items()}


def sample_batches(
    state: SchedulerState,
    graph: CurriculumGraph,
    batch_size: int,
    rng: SeededRng,
    make_example: Callable[[str, SeededRng], T],
    n_batches: int = N_B_DEFAULT,
) -> list[list[tuple[str, T]]]:
    """Draw n_batches * batch_size task-labeled examples, shuffled into batches."""
    dist = distribution(state, graph)
    tasks = list(dist)
    cumulative = []
    acc = 0.0
    for t in tasks:
        acc += dist[t]
        cumulative.append(acc)
    examples: list[tuple[str, T]] = []
    for _ in range(n_batches * batch_size):
        u = rng.random()
        task = next(tasks[i] for i, c in enumerate(cumulative) if u <= c or i == len(tasks) - 1)
        examples.append((task, make_example(task, rng)))
    rng.shuffle(examples)
    return [examples[i * batch_size : (i + 1) * batch_size] for i in range(n_batches)]
