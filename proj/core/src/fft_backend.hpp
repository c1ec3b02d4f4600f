#pragma once

#include "vsg/spectral.hpp"

namespace vsg::detail {

/// Unnormalised out-of-place complex DFT over a d-dimensional n^d grid with
/// `howmany` interleaved components (stride howmany, distance 1). `sign` is
/// -1 for the forward and +1 for the backward transform. Thread-safe.
void fft_execute(int d, int n, int howmany, const Complex* in, Complex* out, int sign);

}  // namespace vsg::detail
