#include "latfold/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace latfold::kernels::detail {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

void affine_avx2(const double* w, const double* b, const double* x, double* y,
                 std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = w + r * cols;
        __m256d acc = _mm256_setzero_pd();
        std::size_t c = 0;
        for (; c + 4 <= cols; c += 4)
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(x + c), acc);
        double s = hsum(acc);
        for (; c < cols; ++c) s += row[c] * x[c];
        y[r] = s + (b ? b[r] : 0.0);
    }
}

void sqdist_avx2(const double* pts, std::size_t count, std::size_t dim,
                 const double* y, double* out) {
    for (std::size_t i = 0; i < count; ++i) {
        const double* p = pts + i * dim;
        __m256d acc = _mm256_setzero_pd();
        std::size_t c = 0;
        for (; c + 4 <= dim; c += 4) {
            __m256d d = _mm256_sub_pd(_mm256_loadu_pd(p + c), _mm256_loadu_pd(y + c));
            acc = _mm256_fmadd_pd(d, d, acc);
        }
        double s = hsum(acc);
        for (; c < dim; ++c) {
            double d = p[c] - y[c];
            s += d * d;
        }
        out[i] = s;
    }
}

const KernelTable kAvx2{"avx2", affine_avx2, sqdist_avx2};

}  // namespace

const KernelTable* avx2_impl() { return &kAvx2; }

}  // namespace latfold::kernels::detail

#else

namespace latfold::kernels::detail {
const KernelTable* avx2_impl() { return nullptr; }
}  // namespace latfold::kernels::detail

#endif
