#pragma once

#include <vector>

#include "elastens/tensor.hpp"
#include "oracle.hpp"

namespace testing_helpers {

inline elastens::ElasticityTensor tensor(int n, const oracle::Raw& raw) {
  return elastens::ElasticityTensor::from_entries(n, raw, false);
}

inline elastens::Vector vec(const std::vector<double>& v) {
  return Eigen::Map<const elastens::Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> std_vec(const elastens::Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

}  // namespace testing_helpers
