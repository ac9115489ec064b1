"""String C-groups that are 2-groups: construction, validation, and covering checks."""

__version__ = "0.1.0"
