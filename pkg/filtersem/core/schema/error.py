"""Models and functions used for schema dump."""
from filtersem.core.exceptions import CoreException


class SchemaError(CoreException):
    """A schema error."""
