import collections
import logging
import random
import threading
from typing import Callable, Generic, Optional, Sequence, TypeVar

from util.set_proc_title import set_thread_title

logger = logging.getLogger("eager")

T = TypeVar("T")


class WorkStealingPool(Generic[T]):
    """Per-worker deques: the owner pushes and pops at the back, thieves take from the front.

    Termination counts items in flight: the count goes up when an item is pushed and down when
    the item that was popped has finished executing, so it only reaches zero once no deque holds
    an item and no worker is running one.
    """

    def __init__(self, *, workers: int, execute: Callable[[T, int], None], seed: int = 0,
                 idle_wait: float = 0.0005):
        if workers < 1:
            raise ValueError("a pool needs at least one worker")
        self.workers = workers
        self.execute = execute
        self.idle_wait = idle_wait
        self.deques: list[collections.deque[T]] = [collections.deque() for _ in range(workers)]
        self.randoms = [random.Random(seed + i) for i in range(workers)]
        self.steals = [0] * workers
        self._condition = threading.Condition()
        self._in_flight = 0
        self._error: Optional[BaseException] = None
        self._failed = threading.Event()

    def push(self, worker: int, item: T):
        with self._condition:
            self._in_flight += 1
        self.deques[worker].append(item)

    def _done(self):
        with self._condition:
            self._in_flight -= 1
            if self._in_flight == 0:
                self._condition.notify_all()

    def _pop(self, worker: int) -> Optional[T]:
        try:
            return self.deques[worker].pop()
        except IndexError:
            return None

    def _steal(self, worker: int) -> Optional[T]:
        rng = self.randoms[worker]
        for _ in range(self.workers - 1):
            victim = rng.randrange(self.workers - 1)
            if victim >= worker:
                victim += 1
            try:
                item = self.deques[victim].popleft()
            except IndexError:
                continue
            self.steals[worker] += 1
            return item
        return None

    def _fail(self, e: BaseException):
        with self._condition:
            if self._error is None:
                self._error = e
            self._failed.set()
            self._condition.notify_all()

    def _worker(self, worker: int):
        set_thread_title(f"eager-worker-{worker}")
        try:
            while not self._failed.is_set():
                item = self._pop(worker)
                if item is None:
                    item = self._steal(worker)
                if item is None:
                    with self._condition:
                        if self._in_flight == 0:
                            return
                        self._condition.wait(self.idle_wait)
                    continue
                try:
                    self.execute(item, worker)
                finally:
                    self._done()
        except BaseException as e:
            self._fail(e)

    def run(self, seeds: Sequence[T]):
        """Deals seeds round-robin, then works until every deque is empty and no item is running."""
        for i, item in enumerate(seeds):
            self.push(i % self.workers, item)
        if self.workers == 1:
            while True:
                item = self._pop(0)
                if item is None:
                    break
                try:
                    self.execute(item, 0)
                finally:
                    self._done()
            return
        threads = [
            threading.Thread(target=self._worker, args=(i,), name=f"eager-worker-{i}", daemon=True)
            for i in range(self.workers)
        ]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()
        if self._error is not None:
            raise self._error
        logger.debug(f"pool quiescent, steals per worker: {self.steals}")
