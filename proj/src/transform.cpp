#include "qds/transform.hpp"

#include "qds/params.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>

namespace qds {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};

} // namespace

FrequencyGrid frequency_grid(double dtau, int fft_size) {
    return {2.0 * 3.14159265358979323846 / (fft_size * dtau), fft_size};
}

std::vector<double> two_sided_spectrum(const std::vector<std::complex<double>>& f, double dtau, int fft_size) {
    if (fft_size <= 0 || (fft_size & (fft_size - 1)) != 0) {
        throw ValidationError("fft_size", "fft_size must be a power of two");
    }
    if (f.size() > static_cast<std::size_t>(fft_size)) {
        throw ValidationError("fft_size", "fft_size must hold every tau sample");
    }
    const auto m = static_cast<std::size_t>(fft_size);
    std::unique_ptr<fftw_complex[], FftwFree> buf(
        static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m)));
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(fft_size, buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    }
    for (std::size_t j = 0; j < m; ++j) {
        const std::complex<double> v = j < f.size() ? f[j] : std::complex<double>{};
        buf[j][0] = v.real();
        buf[j][1] = v.imag();
    }
    if (!f.empty()) {
        buf[0][0] *= 0.5;
        buf[0][1] *= 0.5;
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    std::vector<double> out(m);
    const std::size_t half = m / 2;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t k = (i + half) % m;  // shift zero frequency to the centre
        out[i] = 2.0 * dtau * buf[k][0];
    }
    return out;
}

} // namespace qds
