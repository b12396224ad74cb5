// Copyright 2026 the transearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace transearch {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixF = MatrixX<float>;
using VectorF = VectorX<float>;

using Index = Eigen::Index;

}  // namespace transearch
