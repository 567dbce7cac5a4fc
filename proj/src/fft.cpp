#include "semispec/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace semispec {

namespace {

std::mutex planMutex;
std::map<std::pair<std::vector<int>, int>, fftw_plan> planCache;

fftw_plan plan_for(const std::vector<int>& dims, int sign, fftw_complex* buf) {
    std::lock_guard lock(planMutex);
    auto key = std::make_pair(dims, sign);
    auto it = planCache.find(key);
    if (it != planCache.end()) return it->second;
    // FFTW_UNALIGNED so the cached plan may be executed on any caller buffer.
    fftw_plan p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf,
                                sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fft: planning failed");
    planCache.emplace(key, p);
    return p;
}

}  // namespace

void fft_inplace_nd(std::vector<cplx>& data, const std::vector<int>& dims, int sign) {
    std::size_t n = 1;
    for (int d : dims) {
        if (d <= 0) throw std::invalid_argument("fft: dimensions must be positive");
        n *= static_cast<std::size_t>(d);
    }
    if (n != data.size()) throw std::invalid_argument("fft: size mismatch");
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan p = plan_for(dims, sign, buf);
    fftw_execute_dft(p, buf, buf);
}

void fft_inplace(std::vector<cplx>& data, int sign) {
    fft_inplace_nd(data, {static_cast<int>(data.size())}, sign);
}

}  // namespace semispec
