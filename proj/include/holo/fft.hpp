#pragma once

#include <vector>

namespace holo::fft {

/// Unnormalized 2-D DFT of a planar complex array (separate real/imag
/// buffers, row-major h x w). sign = -1 is the forward transform,
/// sign = +1 the unnormalized inverse; in/out may alias.
void dft2d(const double* re_in, const double* im_in, double* re_out, double* im_out,
           int h, int w, int sign);

/// Forward FFT.
inline void fft2d(const double* re_in, const double* im_in, double* re_out, double* im_out,
                  int h, int w) {
    dft2d(re_in, im_in, re_out, im_out, h, w, -1);
}

/// Normalized inverse FFT (divides by h*w).
void ifft2d(const double* re_in, const double* im_in, double* re_out, double* im_out,
            int h, int w);

}  // namespace holo::fft
