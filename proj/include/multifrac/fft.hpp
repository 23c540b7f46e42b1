// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>

namespace multifrac::fft {

using cplx = std::complex<double>;

/// Unscaled forward DFT: out[m] = sum_j in[j] * exp(-2*pi*i*m*j/n).
void forward(std::span<const cplx> in, std::span<cplx> out);

/// Inverse of forward (includes the 1/n factor).
void inverse(std::span<const cplx> in, std::span<cplx> out);

} // namespace multifrac::fft
