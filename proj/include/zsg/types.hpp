#pragma once

#include <Eigen/Dense>
#include <random>

namespace zsg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Single RNG threaded explicitly through everything that draws randomness.
// Consumption order is part of the reproducibility contract: a run with the
// same seed and config must produce byte-identical outputs.
using Rng = std::mt19937_64;

} // namespace zsg
