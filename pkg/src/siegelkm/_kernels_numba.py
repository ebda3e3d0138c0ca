"""numba-jitted convolution kernel for the series multiplication hot loop."""

import numba
import numpy as np


@numba.njit("void(int64[:], int64[:], int64[:], int64[:], int64[:], int64[:], int64, boolean)",
            cache=True, nogil=True)
def accum_block(out_re, out_im, a_re, a_im, b_re, b_im, offset, eisen):
    # Adds the full product of two dense coefficient rows into out at offset.
    # Callers certify that no partial sum can leave int64.
    la = a_re.shape[0]
    lb = b_re.shape[0]
    for i in range(la):
        ar = a_re[i]
        ai = a_im[i]
        if ar == 0 and ai == 0:
            continue
        base = offset + i
        for j in range(lb):
            br = b_re[j]
            bi = b_im[j]
            if br == 0 and bi == 0:
                continue
            out_re[base + j] += ar * br - ai * bi
            im = ar * bi + ai * br
            if eisen:
                im += ai * bi
            out_im[base + j] += im


def warmup():
    z = np.zeros(1, dtype=np.int64)
    accum_block(z.copy(), z.copy(), z, z, z, z, 0, False)
