#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace varattack {

using Index = Eigen::Index;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = MatrixX<double>;
using VectorXd = VectorX<double>;
using BoolMatrix = MatrixX<bool>;

// "X1", "X2", ... (1-based display names)
std::vector<std::string> default_labels(Index d);

}  // namespace varattack
