#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace latfold {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

// Bad caller input: unsupported family/dimension, points outside a declared domain.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A request that exceeds a configured size cap.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Broken internal invariant (factorization failure, degenerate construction, ...).
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr double kGeomTol = 1e-9;
constexpr double kAmbiguityBand = 1e-7;

// Worker count for Monte Carlo loops: LATTICE_FOLD_THREADS, default hardware concurrency.
unsigned worker_count();

}  // namespace latfold
