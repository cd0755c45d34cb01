"""Exception types shared across the package."""


class BenfordAuditError(Exception):
    """Base class for every error raised by this package."""


class DomainError(BenfordAuditError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class EmptyInput(BenfordAuditError, ValueError):
    """An operation that needs at least one observation received none."""


class ParseError(BenfordAuditError):
    """A dataset row could not be parsed."""

    def __init__(self, row: int, column, reason: str):
        loc = f"row {row}" if column is None else f"row {row}, column {column!r}"
        super().__init__(f"{loc}: {reason}")
        self.row = row
        self.column = column
        self.reason = reason


class DuplicateKey(BenfordAuditError):
    """Two rows carry the same (entity_id, year) key."""

    def __init__(self, entity_id: str, year: int, row=None):
        loc = f" (row {row})" if row is not None else ""
        super().__init__(f"duplicate record for entity {entity_id!r}, year {year}{loc}")
        self.entity_id = entity_id
        self.year = year
        self.row = row


class DatasetError(BenfordAuditError):
    """One or more rows of a dataset were rejected.

    Carries the full row-addressed error list so callers can report every
    problem in a single pass instead of failing on the first bad row.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        head = "; ".join(str(e) for e in self.errors[:3])
        more = f" (+{len(self.errors) - 3} more)" if len(self.errors) > 3 else ""
        super().__init__(f"{len(self.errors)} bad row(s): {head}{more}")


class RemapError(BenfordAuditError):
    """An entity remap configuration is inconsistent with itself or the data."""


class UnknownEntity(RemapError):
    """A remap rule references an entity id absent from the dataset."""

    def __init__(self, entity_id: str):
        super().__init__(f"remap references unknown entity {entity_id!r}")
        self.entity_id = entity_id


class MissingGroup(BenfordAuditError, LookupError):
    """A (region, year) group was requested but holds no records."""

    def __init__(self, region: str, year: int):
        super().__init__(f"no records for group ({region!r}, {year})")
        self.region = region
        self.year = year


class InvalidSpec(BenfordAuditError, ValueError):
    """A synthetic-data generator spec violates its constraints."""
