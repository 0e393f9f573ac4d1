"""Terminal display utilities for the metrics and estimate tables.

Widths are measured without ANSI colour codes so coloured cells stay aligned.
"""

import re

ANSI_ESCAPE_RE = re.compile(r"\x1b\[[0-9;]*m")


def calculate_display_width(text: str) -> int:
    """Visible width of ``text`` in terminal columns (ANSI codes excluded).

    Examples:
        >>> calculate_display_width("bias")
        4
        >>> calculate_display_width("\033[31m-0.104\033[0m")
        6
    """
    return len(ANSI_ESCAPE_RE.sub("", text))


def pad_to_width(text: str, target_width: int, align: str = "left", fill_char: str = " ") -> str:
    """Pad text to reach target width with proper alignment.

    Examples:
        >>> pad_to_width("TMLE", 6)
        'TMLE  '
        >>> pad_to_width("0.962", 7, align="right")
        '  0.962'
    """
    current_width = calculate_display_width(text)
    if current_width >= target_width:
        return text

    padding_needed = target_width - current_width
    if align == "left":
        return text + (fill_char * padding_needed)
    elif align == "right":
        return (fill_char * padding_needed) + text
    elif align == "center":
        left_padding = padding_needed // 2
        return (fill_char * left_padding) + text + (fill_char * (padding_needed - left_padding))
    else:
        raise ValueError(f"Invalid align value: {align}. Must be 'left', 'right', or 'center'")


def format_value(value: float | None, digits: int = 3) -> str:
    """Fixed-point cell; missing values render as ``-``."""
    if value is None:
        return "-"
    return f"{value:.{digits}f}"


def render_table(headers: list[str], rows: list[list[str]]) -> str:
    """Left-aligned first column, right-aligned numeric columns, dashed rule under the header."""
    widths = [
        max([calculate_display_width(h)] + [calculate_display_width(r[k]) for r in rows])
        for k, h in enumerate(headers)
    ]

    def line(cells: list[str]) -> str:
        return "  ".join(
            pad_to_width(cell, widths[k], align="left" if k == 0 else "right") for k, cell in enumerate(cells)
        )

    out = [line(headers), "  ".join("-" * w for w in widths)]
    out.extend(line(row) for row in rows)
    return "\n".join(out)
