"""Pure-numpy fallback for the series multiplication hot loop."""

import numpy as np


def accum_block(out_re, out_im, a_re, a_im, b_re, b_im, offset, eisen):
    # Same contract as the numba kernel: exact int64 accumulation, callers
    # certify that no partial sum can leave int64.
    n = a_re.shape[0] + b_re.shape[0] - 1
    a_has_im = a_im.any()
    b_has_im = b_im.any()
    rr = np.convolve(a_re, b_re)
    if a_has_im or b_has_im:
        ri = np.convolve(a_re, b_im) if b_has_im else 0
        ir = np.convolve(a_im, b_re) if a_has_im else 0
        im = ri + ir
        if a_has_im and b_has_im:
            ii = np.convolve(a_im, b_im)
            rr = rr - ii
            if eisen:
                im = im + ii
        out_im[offset:offset + n] += im
    out_re[offset:offset + n] += rr


def warmup():
    z = np.zeros(1, dtype=np.int64)
    accum_block(z.copy(), z.copy(), z, z, z, z, 0, False)
