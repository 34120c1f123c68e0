#pragma once

// Sparse polynomials with exactly-stored coefficients.

#include "lensreeb/interval.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lensreeb {

/// A coefficient stored as an exact rational when one is available, together
/// with its nearest double and a rigorous enclosure.
class Coefficient {
 public:
  Coefficient() = default;
  static Coefficient rational(std::int64_t num, std::int64_t den);
  static Coefficient real(double value);

  double value() const { return value_; }
  Interval enclosure() const { return enclosure_; }
  bool is_rational() const { return den_ != 0; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Coefficient scaled(std::int64_t factor) const;
  bool is_zero() const { return value_ == 0.0 && enclosure_.lo == 0.0 && enclosure_.hi == 0.0; }
  std::string to_string() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 0;  // 0: plain double
  double value_ = 0.0;
  Interval enclosure_{0.0};
};

/// Parses "p/q", an integer, or a decimal number.
Coefficient parse_coefficient(const std::string& text);

/// Potential V(x1, x2) = sum c * x1^a * x2^b.
class PolynomialPotential {
 public:
  struct Term {
    int a = 0;
    int b = 0;
    Coefficient c;
  };

  PolynomialPotential() = default;
  explicit PolynomialPotential(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }

  double value(double x1, double x2) const;
  Eigen::Vector2d gradient(double x1, double x2) const;
  Eigen::Matrix2d hessian(double x1, double x2) const;

  /// Monomial-by-monomial enclosure over a box.
  Interval enclose(Interval x1, Interval x2) const;

  /// Term-exact partial derivative (dx1 = 1 differentiates in x1).
  PolynomialPotential derivative(int dx1, int dx2) const;

 private:
  std::vector<Term> terms_;
};

/// Cached term-exact derivatives of a potential up to order two.
struct PotentialJet {
  explicit PotentialJet(const PolynomialPotential& v);

  PolynomialPotential v, v1, v2, v11, v12, v22;
};

/// General polynomial in (x1, x2, y1, y2).
class Polynomial4 {
 public:
  struct Term {
    std::array<int, 4> e{};
    Coefficient c;
  };

  Polynomial4() = default;
  explicit Polynomial4(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }

  double value(const Eigen::Vector4d& p) const;
  Eigen::Vector4d gradient(const Eigen::Vector4d& p) const;
  Eigen::Matrix4d hessian(const Eigen::Vector4d& p) const;

 private:
  std::vector<Term> terms_;
};

PolynomialPotential henon_heiles_potential();
PolynomialPotential harmonic_potential();

}  // namespace lensreeb
