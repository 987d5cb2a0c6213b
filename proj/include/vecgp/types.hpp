#ifndef VECGP_TYPES_HPP
#define VECGP_TYPES_HPP

#include <Eigen/Dense>

namespace vecgp {

using Index = Eigen::Index;

template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vecd = VecX<double>;
using Matd = MatX<double>;

}  // namespace vecgp

#endif  // VECGP_TYPES_HPP
