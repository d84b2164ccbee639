#pragma once

#include <memory>
#include <vector>

namespace bgibbs {

// Shape-preserving piecewise-cubic Hermite interpolant (Fritsch-Carlson
// slopes). Monotone data yields a monotone interpolant, so a decreasing
// table keeps a negative derivative everywhere.
class PchipCurve {
 public:
  // x strictly increasing, size >= 2. Throws ValueError otherwise.
  PchipCurve(std::vector<double> x, std::vector<double> y);

  // Throws DomainError outside [x_min, x_max].
  double value(double t) const;
  double deriv(double t) const;

  double x_min() const { return d_->x.front(); }
  double x_max() const { return d_->x.back(); }
  const std::vector<double>& knots() const { return d_->x; }

 private:
  struct Data {
    std::vector<double> x, y, slope;
  };
  size_t segment(double t) const;
  std::shared_ptr<const Data> d_;  // immutable payload, cheap value copies
};

}  // namespace bgibbs
