#include "latfold/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace latfold::kernels::detail {

namespace {

void affine_neon(const double* w, const double* b, const double* x, double* y,
                 std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = w + r * cols;
        float64x2_t acc = vdupq_n_f64(0.0);
        std::size_t c = 0;
        for (; c + 2 <= cols; c += 2) acc = vfmaq_f64(acc, vld1q_f64(row + c), vld1q_f64(x + c));
        double s = vaddvq_f64(acc);
        for (; c < cols; ++c) s += row[c] * x[c];
        y[r] = s + (b ? b[r] : 0.0);
    }
}

void sqdist_neon(const double* pts, std::size_t count, std::size_t dim,
                 const double* y, double* out) {
    for (std::size_t i = 0; i < count; ++i) {
        const double* p = pts + i * dim;
        float64x2_t acc = vdupq_n_f64(0.0);
        std::size_t c = 0;
        for (; c + 2 <= dim; c += 2) {
            float64x2_t d = vsubq_f64(vld1q_f64(p + c), vld1q_f64(y + c));
            acc = vfmaq_f64(acc, d, d);
        }
        double s = vaddvq_f64(acc);
        for (; c < dim; ++c) {
            double d = p[c] - y[c];
            s += d * d;
        }
        out[i] = s;
    }
}

const KernelTable kNeon{"neon", affine_neon, sqdist_neon};

}  // namespace

const KernelTable* neon_impl() { return &kNeon; }

}  // namespace latfold::kernels::detail

#else

namespace latfold::kernels::detail {
const KernelTable* neon_impl() { return nullptr; }
}  // namespace latfold::kernels::detail

#endif
