#include "fft_backend.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace vsg::detail {

namespace {

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(int d, int n, int howmany, int sign) {
        const auto key = std::make_tuple(d, n, howmany, sign);
        std::lock_guard<std::mutex> lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        std::size_t total = static_cast<std::size_t>(howmany);
        std::vector<int> dims(static_cast<std::size_t>(d), n);
        for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(n);
        // FFTW_ESTIMATE leaves the scratch arrays untouched and gives the same
        // plan (hence bitwise-identical output) on every call.
        auto* in = fftw_alloc_complex(total);
        auto* out = fftw_alloc_complex(total);
        fftw_plan plan = fftw_plan_many_dft(d, dims.data(), howmany, in, nullptr, howmany, 1, out,
                                            nullptr, howmany, 1, sign,
                                            FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

}  // namespace

void fft_execute(int d, int n, int howmany, const Complex* in, Complex* out, int sign) {
    fftw_plan plan = cache().get(d, n, howmany, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    // Out-of-place complex transforms leave the input intact.
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

}  // namespace vsg::detail
