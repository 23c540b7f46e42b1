// SPDX-License-Identifier: Apache-2.0
#include "multifrac/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace multifrac::fft {

namespace {

// FFTW plans are cached per size; fftw_execute_dft on a cached plan with
// fresh arrays is thread-safe, plan creation is not.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex g_plan_mutex;
std::map<std::size_t, PlanPair>& plan_cache() {
    static std::map<std::size_t, PlanPair> cache;
    return cache;
}

PlanPair plans_for(std::size_t n) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto& cache = plan_cache();
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<cplx> scratch(n);
    auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
    PlanPair p;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p.fwd = fftw_plan_dft_1d(static_cast<int>(n), ptr, ptr, FFTW_FORWARD, flags);
    p.bwd = fftw_plan_dft_1d(static_cast<int>(n), ptr, ptr, FFTW_BACKWARD, flags);
    if (!p.fwd || !p.bwd) throw std::runtime_error("fftw planning failed");
    cache[n] = p;
    return p;
}

void execute(fftw_plan plan, std::span<const cplx> in, std::span<cplx> out) {
    if (in.size() != out.size()) throw std::invalid_argument("fft: size mismatch");
    std::vector<cplx> buf(in.begin(), in.end());
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(buf.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
}

} // namespace

void forward(std::span<const cplx> in, std::span<cplx> out) {
    execute(plans_for(in.size()).fwd, in, out);
}

void inverse(std::span<const cplx> in, std::span<cplx> out) {
    execute(plans_for(in.size()).bwd, in, out);
    const double scale = 1.0 / static_cast<double>(in.size());
    for (auto& z : out) z *= scale;
}

} // namespace multifrac::fft
