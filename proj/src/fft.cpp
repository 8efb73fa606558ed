#include "holo/fft.hpp"

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>

namespace holo::fft {
namespace {

// FFTW plan creation is not thread-safe; execution on distinct buffers is.
// Plans are cached per (h, w, sign) and created with FFTW_ESTIMATE so the
// algorithm choice (and therefore the rounding pattern) is deterministic.
std::mutex plan_mutex;
std::map<std::tuple<int, int, int>, fftw_plan> plan_cache;

fftw_plan get_plan(int h, int w, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_tuple(h, w, sign);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;
    // Dummy buffer for planning; FFTW_UNALIGNED lets us execute on arbitrary
    // caller buffers via fftw_execute_dft later.
    std::vector<std::complex<double>> buf(static_cast<size_t>(h) * w);
    fftw_plan p = fftw_plan_dft_2d(h, w, reinterpret_cast<fftw_complex*>(buf.data()),
                                   reinterpret_cast<fftw_complex*>(buf.data()),
                                   sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_cache.emplace(key, p);
    return p;
}

}  // namespace

void dft2d(const double* re_in, const double* im_in, double* re_out, double* im_out,
           int h, int w, int sign) {
    const size_t n = static_cast<size_t>(h) * w;
    thread_local std::vector<std::complex<double>> scratch;
    scratch.resize(n);
    for (size_t i = 0; i < n; ++i) scratch[i] = {re_in[i], im_in[i]};
    fftw_plan p = get_plan(h, w, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(scratch.data()),
                     reinterpret_cast<fftw_complex*>(scratch.data()));
    for (size_t i = 0; i < n; ++i) {
        re_out[i] = scratch[i].real();
        im_out[i] = scratch[i].imag();
    }
}

void ifft2d(const double* re_in, const double* im_in, double* re_out, double* im_out,
            int h, int w) {
    dft2d(re_in, im_in, re_out, im_out, h, w, +1);
    const size_t n = static_cast<size_t>(h) * w;
    const double inv = 1.0 / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) {
        re_out[i] *= inv;
        im_out[i] *= inv;
    }
}

}  // namespace holo::fft
