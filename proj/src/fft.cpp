#include "cbf/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace cbf::fft {
namespace {

template <class T>
struct FftwDeleter {
    void operator()(T* p) const { fftw_free(p); }
};

template <class T>
using AlignedPtr = std::unique_ptr<T, FftwDeleter<T>>;

template <class T>
AlignedPtr<T> aligned_alloc_n(std::size_t count) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
    if (!p) throw std::bad_alloc();
    return AlignedPtr<T>(p);
}

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    std::size_t real_size = 0;
    std::size_t half_size = 0;

    PlanPair() = default;
    PlanPair(const PlanPair&) = delete;
    PlanPair& operator=(const PlanPair&) = delete;
    ~PlanPair() {
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
    }
};

struct State {
    std::mutex mutex;
    std::map<int, std::unique_ptr<PlanPair>> plans;
    int threads = 1;
    bool deterministic = true;
    bool threads_initialized = false;
};

State& state() {
    static State s;
    return s;
}

const PlanPair& plans_for(int n) {
    State& s = state();
    std::lock_guard lock(s.mutex);
    auto it = s.plans.find(n);
    if (it != s.plans.end()) return *it->second;

    if (!s.threads_initialized) {
        fftw_init_threads();
        s.threads_initialized = true;
    }
    fftw_plan_with_nthreads(s.threads);

    auto pp = std::make_unique<PlanPair>();
    pp->real_size = static_cast<std::size_t>(n) * n * n;
    pp->half_size = static_cast<std::size_t>(n) * n * (n / 2 + 1);
    auto real = aligned_alloc_n<double>(pp->real_size);
    auto half = aligned_alloc_n<fftw_complex>(pp->half_size);
    const unsigned flags = s.deterministic ? FFTW_ESTIMATE : FFTW_MEASURE;
    pp->forward = fftw_plan_dft_r2c_3d(n, n, n, real.get(), half.get(), flags);
    pp->backward = fftw_plan_dft_c2r_3d(n, n, n, half.get(), real.get(), flags);
    if (!pp->forward || !pp->backward) throw std::runtime_error("fftw planning failed");
    auto [pos, inserted] = s.plans.emplace(n, std::move(pp));
    (void)inserted;
    return *pos->second;
}

}  // namespace

void configure(int threads, bool deterministic) {
    if (threads < 1) throw std::invalid_argument("fft thread count must be >= 1");
    State& s = state();
    std::lock_guard lock(s.mutex);
    s.plans.clear();
    s.threads = threads;
    s.deterministic = deterministic;
}

int threads() { return state().threads; }
bool deterministic() { return state().deterministic; }

void inverse_r2c(int n, std::span<std::complex<double>> half, std::span<double> out) {
    const PlanPair& pp = plans_for(n);
    if (half.size() != pp.half_size || out.size() != pp.real_size)
        throw std::invalid_argument("inverse_r2c: buffer size mismatch");
    auto in = aligned_alloc_n<fftw_complex>(pp.half_size);
    auto res = aligned_alloc_n<double>(pp.real_size);
    std::memcpy(in.get(), half.data(), sizeof(fftw_complex) * pp.half_size);
    fftw_execute_dft_c2r(pp.backward, in.get(), res.get());
    std::copy_n(res.get(), pp.real_size, out.data());
}

void forward_r2c(int n, std::span<const double> in, std::span<std::complex<double>> half) {
    const PlanPair& pp = plans_for(n);
    if (half.size() != pp.half_size || in.size() != pp.real_size)
        throw std::invalid_argument("forward_r2c: buffer size mismatch");
    auto src = aligned_alloc_n<double>(pp.real_size);
    auto res = aligned_alloc_n<fftw_complex>(pp.half_size);
    std::copy_n(in.data(), pp.real_size, src.get());
    fftw_execute_dft_r2c(pp.forward, src.get(), res.get());
    std::memcpy(static_cast<void*>(half.data()), res.get(), sizeof(fftw_complex) * pp.half_size);
}

}  // namespace cbf::fft
