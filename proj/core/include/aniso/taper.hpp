#pragma once

#include <Eigen/Core>
#include <array>

namespace aniso {

/// Product taper on [-1/2, 1/2]^2. CosinePower(alpha) applies
/// cos^alpha(pi s_i) per coordinate; Rectangular is the indicator
/// (equivalently alpha = 0).
class Taper {
 public:
  enum class Kind { Rectangular, CosinePower };

  static Taper rectangular() { return Taper(Kind::Rectangular, 0); }
  static Taper cosine(int alpha);

  Kind kind() const noexcept { return kind_; }
  int alpha() const noexcept { return alpha_; }

  /// Twice continuously differentiable on R (cosine with alpha >= 3).
  bool is_smooth() const noexcept { return kind_ == Kind::CosinePower && alpha_ >= 3; }

  /// One-dimensional factor h_1(s).
  double eval1(double s) const noexcept;

  friend bool operator==(const Taper&, const Taper&) = default;

 private:
  Taper(Kind k, int alpha) : kind_(k), alpha_(alpha) {}
  Kind kind_;
  int alpha_;
};

double taper_eval(const Taper& taper, const Eigen::Vector2d& s);

/// H_1(m) = \int_{-1/2}^{1/2} h_1(s)^2 exp(-2 pi i s m) ds, exact.
double h1_coefficient(const Taper& taper, int m);

/// H_2(m) = H_1(m_1) H_1(m_2).
double h_coefficient(const Taper& taper, const std::array<int, 2>& m);

/// sum_{m=lo}^{hi} H_1(m)^p, used for the separable weight sums over m in Z^2.
double h1_power_sum(const Taper& taper, int lo, int hi, int p);

/// 1-D frequency window B_1(u) = \int_{-lambda/2}^{lambda/2} h_1(s/lambda) e^{-i s u} ds.
double frequency_window1(const Taper& taper, double lambda, double u);

/// B_{lambda,2,h}(u) as the product of the two 1-D windows.
double frequency_window(const Taper& taper, double lambda, const Eigen::Vector2d& u);

}  // namespace aniso
