from django import template

register = template.Library()


@register.filter
def sigfig(value, digits=4):
    """Format a number with ``digits`` significant figures; blanks pass through.

    Examples:
        0.52021 -> '0.5202'
        0.000149 -> '0.000149'
    """
    if value is None or value == "":
        return ""
    try:
        return f"{float(value):.{int(digits)}g}"
    except (TypeError, ValueError):
        return value


@register.filter
def signed(value, digits=2):
    """Deviation with an explicit sign in exponent notation, e.g. '+3.1e-05'."""
    if value is None or value == "":
        return ""
    try:
        return f"{float(value):+.{int(digits) - 1}e}"
    except (TypeError, ValueError):
        return value
