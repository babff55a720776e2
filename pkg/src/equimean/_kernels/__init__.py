"""Grid-scan kernel with a compiled core and a numpy fallback.

The compiled extension is preferred when the build produced it; otherwise
the numpy lane is selected at import. ``IMPLEMENTATION`` names the active
lane and both lanes are exposed for the comparison benchmark and tests.
"""

from . import fallback

try:
    from . import _gridscan as _compiled
except ImportError:
    _compiled = None

IMPLEMENTATION = "cython" if _compiled is not None else "numpy"

KERNEL_CODES = {
    "arith2": 0,
    "geom": 1,
    "minsq": 2,
    "dict0": 3,
    "dict1": 4,
    "const": 5,
}


def grid_scan_interval(kernel: str, param: float, a: float, b: float,
                       step: float, excluded: float):
    """Max contractivity ratio of a built-in binary mean over the square
    grid on [a, b]; returns (max_ratio, argmax_x, argmax_y, pairs)."""
    code = KERNEL_CODES[kernel]
    impl = _compiled if _compiled is not None else fallback
    return impl.grid_scan(code, param, a, b, step, excluded)


def grid_scan_both(kernel: str, param: float, a: float, b: float,
                   step: float, excluded: float) -> dict:
    """Run every available lane (for benchmarks and agreement tests)."""
    code = KERNEL_CODES[kernel]
    out = {"numpy": fallback.grid_scan(code, param, a, b, step, excluded)}
    if _compiled is not None:
        out["cython"] = _compiled.grid_scan(code, param, a, b, step, excluded)
    return out
