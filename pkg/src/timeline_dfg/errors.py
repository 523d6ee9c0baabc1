"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures to distinct
process exit statuses without a lookup table of its own.
"""

from __future__ import annotations


class TimelineDfgError(Exception):
    exit_code = 1


class MissingColumn(TimelineDfgError):
    exit_code = 3

    def __init__(self, column: str, available: list[str] | None = None):
        self.column = column
        self.available = list(available or [])
        super().__init__(f"missing column {column!r} (header has {self.available})")


class UnparseableTimestamp(TimelineDfgError):
    exit_code = 4

    def __init__(self, row: int | str, value: str):
        self.row = row
        self.value = value
        where = f"row {row}" if isinstance(row, int) else row
        super().__init__(f"{where}: cannot parse timestamp {value!r}")


class InvalidRow(TimelineDfgError):
    exit_code = 5

    def __init__(self, row: int, reason: str):
        self.row = row
        self.reason = reason
        super().__init__(f"row {row}: {reason}")


class EmptyLog(TimelineDfgError):
    exit_code = 6

    def __init__(self, message: str = "event log contains no events"):
        super().__init__(message)


class MalformedXml(TimelineDfgError):
    exit_code = 7


class MissingRequiredAttribute(TimelineDfgError):
    exit_code = 8

    def __init__(self, where: str, key: str):
        self.where = where
        self.key = key
        super().__init__(f"{where}: missing required attribute {key!r}")


class InvalidRecipe(TimelineDfgError):
    exit_code = 9


class InvalidConfig(TimelineDfgError):
    exit_code = 10


class EmptyDfg(TimelineDfgError):
    exit_code = 11


class EmptyStats(TimelineDfgError):
    exit_code = 12


class NegativeInput(TimelineDfgError, ValueError):
    exit_code = 13


class NonIncreasingPair(TimelineDfgError, ValueError):
    exit_code = 14


class UnmappedActivity(TimelineDfgError):
    exit_code = 15

    def __init__(self, activity: str):
        self.activity = activity
        super().__init__(f"activity {activity!r} has no timeline node")


class MissingStats(TimelineDfgError):
    exit_code = 16

    def __init__(self, activity: str):
        self.activity = activity
        super().__init__(f"no time statistics for activity {activity!r}")


class ActivitySetMismatch(TimelineDfgError):
    exit_code = 17
