#pragma once

#include <cmath>

#include "blockcs/block_model.hpp"

namespace blockcs::detail {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedVectorSum {
 public:
  explicit CompensatedVectorSum(Eigen::Index n) : sum_(Vector::Zero(n)), comp_(Vector::Zero(n)) {}

  template <typename Derived>
  void add(const Eigen::MatrixBase<Derived>& v) {
    for (Eigen::Index i = 0; i < sum_.size(); ++i) {
      const double t = sum_[i] + v[i];
      if (std::abs(sum_[i]) >= std::abs(v[i])) {
        comp_[i] += (sum_[i] - t) + v[i];
      } else {
        comp_[i] += (v[i] - t) + sum_[i];
      }
      sum_[i] = t;
    }
  }
  Vector value() const { return sum_ + comp_; }

 private:
  Vector sum_;
  Vector comp_;
};

}  // namespace blockcs::detail
