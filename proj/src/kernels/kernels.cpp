#include "latfold/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace latfold::kernels {

namespace detail {
const KernelTable* avx2_impl();
const KernelTable* neon_impl();
}  // namespace detail

namespace {

void affine_scalar(const double* w, const double* b, const double* x, double* y,
                   std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = w + r * cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc + (b ? b[r] : 0.0);
    }
}

void sqdist_scalar(const double* pts, std::size_t count, std::size_t dim,
                   const double* y, double* out) {
    for (std::size_t i = 0; i < count; ++i) {
        const double* p = pts + i * dim;
        double acc = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            double d = p[c] - y[c];
            acc += d * d;
        }
        out[i] = acc;
    }
}

const KernelTable kScalar{"scalar", affine_scalar, sqdist_scalar};

const KernelTable& select() {
    const KernelTable* best = &kScalar;
    if (auto* t = neon_table()) best = t;
    if (auto* t = avx2_table()) best = t;
    if (const char* env = std::getenv("LATFOLD_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return kScalar;
        if (std::strcmp(env, "avx2") == 0) return avx2_table() ? *avx2_table() : kScalar;
        if (std::strcmp(env, "neon") == 0) return neon_table() ? *neon_table() : kScalar;
    }
    return *best;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if defined(__x86_64__) || defined(__i386__)
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok ? detail::avx2_impl() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable* neon_table() { return detail::neon_impl(); }

const KernelTable& active() {
    static const KernelTable& t = select();
    return t;
}

std::vector<const KernelTable*> available() {
    std::vector<const KernelTable*> out{&kScalar};
    if (auto* t = avx2_table()) out.push_back(t);
    if (auto* t = neon_table()) out.push_back(t);
    return out;
}

}  // namespace latfold::kernels
