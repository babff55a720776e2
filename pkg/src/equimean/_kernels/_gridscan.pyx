# cython: boundscheck=False, wraparound=False, cdivision=True
"""Hot loop for the contractivity-ratio grid scan over an interval.

Scans every ordered grid pair (x, y) with |x - y| above the excluded
near-diagonal radius, evaluates one of the built-in binary means, and
tracks the maximum of max(|x - p|, |y - p|) / |x - y|. The float
arithmetic matches the numpy fallback operation for operation so both
lanes return bit-identical results.

Mean codes: 0 midpoint, 1 geometric, 2 min-plus-half-squared-gap,
3 first-coordinate, 4 second-coordinate, 5 constant(param).
"""

from libc.math cimport fabs, floor, fmax, fmin, sqrt


def grid_scan(int kind, double param, double a, double b, double step,
              double excluded):
    """Return (max_ratio, argmax_x, argmax_y, evaluated_pairs)."""
    cdef long m = <long> floor((b - a) / step + 1e-9) + 1
    cdef long i, j, bi = -1, bj = -1, count = 0
    cdef double x, y, p, d, r
    cdef double best = -1.0
    for i in range(m):
        x = a + (<double> i) * step
        for j in range(m):
            y = a + (<double> j) * step
            d = fabs(x - y)
            if d <= excluded:
                continue
            if kind == 0:
                p = (x + y) * 0.5
            elif kind == 1:
                p = sqrt(x * y)
            elif kind == 2:
                p = fmin(x, y) + (x - y) * (x - y) * 0.5
            elif kind == 3:
                p = x
            elif kind == 4:
                p = y
            else:
                p = param
            r = fmax(fabs(x - p), fabs(y - p)) / d
            count += 1
            if r > best:
                best = r
                bi = i
                bj = j
    if bi < 0:
        return -1.0, 0.0, 0.0, 0
    return best, a + (<double> bi) * step, a + (<double> bj) * step, count
