#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace latfold::kernels {

// Dense row-major affine map y = W x + b, with W of shape rows x cols.
using AffineFn = void (*)(const double* w, const double* b, const double* x,
                          double* y, std::size_t rows, std::size_t cols);

// out[i] = |pts[i] - y|^2 for `count` points of dimension `dim`, row-major.
using SqDistFn = void (*)(const double* pts, std::size_t count, std::size_t dim,
                          const double* y, double* out);

struct KernelTable {
    const char* name;
    AffineFn affine;
    SqDistFn sqdist;
};

const KernelTable& scalar_table();

// nullptr when the variant was not compiled in or the CPU lacks the features.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// Best available table. LATFOLD_KERNELS=scalar|avx2|neon forces a variant
// (falls back to scalar if the requested one is unavailable).
const KernelTable& active();

std::vector<const KernelTable*> available();

}  // namespace latfold::kernels
