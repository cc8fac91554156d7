"""Pure-numpy fallback for the hot walk kernel.

Same contract as the compiled ``qwline._kernels`` extension: advance the
two-component amplitudes through repeated coin-and-shift applications on a
preallocated scratch pair, growing the active window by one site per side
per step.
"""

COMPILED = False


def run_map(ra, la, rb, lb, c, s, lo, hi, steps):
    """Iterate the lattice map ``steps`` times.

    All four buffers are equal-length, contiguous complex128 arrays.
    ``(ra, la)`` hold the input on the inclusive index range [lo, hi];
    every cell outside that range must be zero in all four buffers.  The
    caller must leave at least ``steps + 1`` cells of margin on each side.

    Returns ``(which, lo, hi)`` where ``which`` is 0 if the result ended
    up in ``(ra, la)`` and 1 if it ended up in ``(rb, lb)``.
    """
    src_r, src_l, dst_r, dst_l = ra, la, rb, lb
    for _ in range(steps):
        lo -= 1
        hi += 1
        dst_r[lo : hi + 1] = c * src_r[lo + 1 : hi + 2] + s * src_l[lo + 1 : hi + 2]
        dst_l[lo : hi + 1] = s * src_r[lo - 1 : hi] - c * src_l[lo - 1 : hi]
        src_r, dst_r = dst_r, src_r
        src_l, dst_l = dst_l, src_l
    return (0 if src_r is ra else 1), lo, hi
