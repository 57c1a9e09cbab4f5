"""Deterministic single-loop task scheduler.

All realms share one FIFO ready queue.  Tasks enqueued while a task runs
form a batch that is appended when the running task finishes; inside a
batch, per-realm groups keep their order while the order of the groups is
rotated by an amount drawn from ``random.Random(schedule_seed)``.  This is
the only place the seed influences execution.

Timers run on a virtual clock and fire only when the ready queue is empty.
"""

from __future__ import annotations

import heapq
import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional


@dataclass
class Task:
    realm: str
    fn: Callable[[], None]
    label: str = ""
    seq: int = 0


@dataclass(order=True)
class _Timer:
    due: float
    seq: int
    task: Task = field(compare=False)
    timer_id: int = field(compare=False, default=0)


class Scheduler:
    def __init__(self, seed: int = 0):
        self.rng = random.Random(seed)
        self.queue: deque[Task] = deque()
        self.batch: list[Task] = []
        self.running: Optional[Task] = None
        self.clock = 0.0
        self._timers: list[_Timer] = []
        self._cancelled: set[int] = set()
        self._seq = itertools.count()
        self._timer_ids = itertools.count(1)

    def enqueue(self, realm: str, fn: Callable[[], None], label: str = "") -> Task:
        task = Task(realm, fn, label, next(self._seq))
        if self.running is None:
            self.queue.append(task)
        else:
            self.batch.append(task)
        return task

    def set_timer(self, realm: str, fn: Callable[[], None], delay: float, label: str = "timer") -> int:
        tid = next(self._timer_ids)
        task = Task(realm, fn, label, next(self._seq))
        heapq.heappush(self._timers, _Timer(self.clock + max(0.0, delay), task.seq, task, tid))
        return tid

    def clear_timer(self, timer_id: int) -> None:
        self._cancelled.add(timer_id)

    def commit(self) -> None:
        """Append the current batch to the queue, rotating realm groups."""
        if not self.batch:
            return
        groups: dict[str, list[Task]] = {}
        for t in self.batch:
            groups.setdefault(t.realm, []).append(t)
        order = list(groups)
        if len(order) > 1:
            k = self.rng.randrange(len(order))
            order = order[k:] + order[:k]
        for realm in order:
            self.queue.extend(groups[realm])
        self.batch = []

    def next_task(self) -> Optional[Task]:
        if self.queue:
            return self.queue.popleft()
        while self._timers:
            timer = heapq.heappop(self._timers)
            if timer.timer_id in self._cancelled:
                continue
            self.clock = max(self.clock, timer.due)
            return timer.task
        return None

    def run(self, execute: Callable[[Task], None]) -> None:
        """Run tasks until both the queue and the timer heap are empty."""
        while True:
            task = self.next_task()
            if task is None:
                return
            self.running = task
            try:
                execute(task)
            finally:
                self.running = None
                self.commit()

    @property
    def idle(self) -> bool:
        return not self.queue and not self.batch and not any(
            t.timer_id not in self._cancelled for t in self._timers
        )
