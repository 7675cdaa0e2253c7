# index_store.py - In-memory cache for group action tables and cycle indices

import logging
import threading
from abc import ABC, abstractmethod
from typing import Any, Dict, Hashable, Optional

from models import CycleIndex

logger = logging.getLogger(__name__)


# --- Abstract Base Class for Index Stores ---

class BaseIndexStore(ABC):
    """
    Interface for caching expensive group-theoretic artifacts.
    Implementations decide where the artifacts live; values are immutable once stored.
    """

    @abstractmethod
    def get_group_action(self, n: int) -> Optional[Any]:
        """Returns the cached action table of B_n, if present."""
        pass

    @abstractmethod
    def store_group_action(self, n: int, action: Any) -> None:
        pass

    @abstractmethod
    def get_cycle_index(self, key: Hashable) -> Optional[CycleIndex]:
        """Retrieves a cycle index by key, e.g. ("full", n, canonical_mask)."""
        pass

    @abstractmethod
    def store_cycle_index(self, key: Hashable, index: CycleIndex) -> bool:
        """Stores a cycle index; returns False when the key was already present."""
        pass

    @abstractmethod
    def stats(self) -> Dict[str, int]:
        pass

    @abstractmethod
    def clear(self) -> None:
        pass


# --- In-Memory Implementation ---

class InMemoryIndexStore(BaseIndexStore):
    """
    Dictionary-backed store guarded by a lock, so census sweeps running in
    worker threads can share one cache. Contents are lost on exit.
    """
    def __init__(self):
        self._actions: Dict[int, Any] = {}
        self._indices: Dict[Hashable, CycleIndex] = {}
        self._hits = 0
        self._misses = 0
        self._lock = threading.Lock()
        logger.debug("Initialized InMemoryIndexStore.")

    def get_group_action(self, n: int) -> Optional[Any]:
        with self._lock:
            return self._actions.get(n)

    def store_group_action(self, n: int, action: Any) -> None:
        with self._lock:
            self._actions[n] = action
        logger.debug(f"Stored action table for B_{n}.")

    def get_cycle_index(self, key: Hashable) -> Optional[CycleIndex]:
        with self._lock:
            index = self._indices.get(key)
            if index is None:
                self._misses += 1
            else:
                self._hits += 1
            return index

    def store_cycle_index(self, key: Hashable, index: CycleIndex) -> bool:
        with self._lock:
            if key in self._indices:
                logger.debug(f"Cycle index for {key} already stored; keeping the first copy.")
                return False
            self._indices[key] = index
            return True

    def stats(self) -> Dict[str, int]:
        with self._lock:
            return {
                "group_actions": len(self._actions),
                "cycle_indices": len(self._indices),
                "hits": self._hits,
                "misses": self._misses,
            }

    def clear(self) -> None:
        with self._lock:
            self._actions.clear()
            self._indices.clear()
            self._hits = self._misses = 0
        logger.info("Cleared index store.")


default_store = InMemoryIndexStore()
