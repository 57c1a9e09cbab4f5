"""Deterministic emulated browser for the JavaScript subset."""

from .config import EnvConfig, EventDescriptor, FeedMessage, FeedScript
from .errors import (
    ArityMismatch, BudgetExhausted, CloneError, MalformedEscape, ScriptError, SqlSyntaxError,
    UnknownTable,
)
from .hosts import unescape
from .runtime import Emulator, TaintPolicy, run_page
from .storage import StoreState, blob_concat, idb_iterate
from .taint import CROSS_WORKER, NETWORK, STORAGE_DERIVED, TaintLabel, TStr, taint_of
from .trace import ExecutionTrace, SinkEvent, fnv1a64
from .values import ProbeNumber, structured_clone
from .websql import DbState, ResultSet, websql_exec

__all__ = [
    "ArityMismatch", "BudgetExhausted", "CROSS_WORKER", "CloneError", "DbState", "Emulator",
    "EnvConfig", "EventDescriptor", "ExecutionTrace", "FeedMessage", "FeedScript",
    "MalformedEscape", "NETWORK", "ProbeNumber", "ResultSet", "STORAGE_DERIVED", "ScriptError",
    "SinkEvent", "SqlSyntaxError", "StoreState", "TStr", "TaintLabel", "TaintPolicy",
    "UnknownTable", "blob_concat", "fnv1a64", "idb_iterate", "run_page", "structured_clone",
    "taint_of", "unescape", "websql_exec",
]
