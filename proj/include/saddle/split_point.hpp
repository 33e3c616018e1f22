#ifndef SADDLE_SPLIT_POINT_HPP
#define SADDLE_SPLIT_POINT_HPP

#include <Eigen/Core>
#include <cmath>

namespace saddle {

// A point z = (x, y) with separately addressable min-block x and max-block y.
struct SplitPoint {
  Eigen::VectorXd x;
  Eigen::VectorXd y;

  SplitPoint() = default;
  SplitPoint(Eigen::VectorXd x_, Eigen::VectorXd y_)
      : x(std::move(x_)), y(std::move(y_)) {}

  // Convenience for scalar problems (n = m = 1).
  static SplitPoint scalar(double x0, double y0) {
    Eigen::VectorXd vx(1), vy(1);
    vx << x0;
    vy << y0;
    return {vx, vy};
  }

  Eigen::Index dim() const { return x.size() + y.size(); }

  Eigen::VectorXd stacked() const {
    Eigen::VectorXd v(dim());
    v << x, y;
    return v;
  }

  static SplitPoint from_stacked(const Eigen::VectorXd& v, Eigen::Index n) {
    return {v.head(n), v.tail(v.size() - n)};
  }

  double norm() const { return std::hypot(x.norm(), y.norm()); }

  bool all_finite() const { return x.allFinite() && y.allFinite(); }
};

inline SplitPoint operator+(const SplitPoint& a, const SplitPoint& b) {
  return {a.x + b.x, a.y + b.y};
}
inline SplitPoint operator-(const SplitPoint& a, const SplitPoint& b) {
  return {a.x - b.x, a.y - b.y};
}
inline SplitPoint operator*(double c, const SplitPoint& z) {
  return {c * z.x, c * z.y};
}
inline double distance(const SplitPoint& a, const SplitPoint& b) {
  return std::hypot((a.x - b.x).norm(), (a.y - b.y).norm());
}

// Uniform axis-aligned box [lo, hi]^d used as a domain of validity for
// curvature certificates and as the projection region of the two-stepsize
// GDA variant.
struct Box {
  double lo = -1e6;
  double hi = 1e6;

  bool contains(const Eigen::VectorXd& v) const {
    return (v.array() >= lo).all() && (v.array() <= hi).all();
  }
  Eigen::VectorXd clamp(const Eigen::VectorXd& v) const {
    return v.array().max(lo).min(hi);
  }
};

}  // namespace saddle

#endif  // SADDLE_SPLIT_POINT_HPP
