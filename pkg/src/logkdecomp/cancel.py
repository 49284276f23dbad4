"""Cooperative cancellation shared by the search loops."""
from __future__ import annotations

import threading
import time


class SearchCancelled(Exception):
    """Raised inside a search once its token is cancelled or expired."""


class CancelToken:
    """A cancellation flag plus an optional monotonic deadline.

    ``event`` may be a ``threading.Event`` or a ``multiprocessing.Event``;
    workers of one search share the same event.
    """

    def __init__(self, deadline: float | None = None, event=None):
        self.deadline = deadline
        self.event = event if event is not None else threading.Event()
        self.expired = False

    @classmethod
    def with_timeout(cls, seconds: float | None, event=None) -> "CancelToken":
        if not seconds:
            return cls(None, event)
        return cls(time.monotonic() + seconds, event)

    def cancel(self):
        self.event.set()

    def cancelled(self) -> bool:
        if self.event.is_set():
            return True
        if self.deadline is not None and time.monotonic() > self.deadline:
            self.expired = True
            return True
        return False

    def check(self):
        if self.cancelled():
            raise SearchCancelled()
