"""Utility modules for nettmle."""

from .terminal_utils import (
    calculate_display_width,
    format_value,
    pad_to_width,
    render_table,
)

__all__ = [
    "calculate_display_width",
    "format_value",
    "pad_to_width",
    "render_table",
]
