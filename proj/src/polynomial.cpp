#include "lensreeb/polynomial.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace lensreeb {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

Interval enclose_quotient(std::int64_t num, std::int64_t den) {
  const double q = static_cast<double>(num) / static_cast<double>(den);
  if (den == 1 && std::abs(num) < (std::int64_t{1} << 53)) return Interval(q);
  return {round_down(q), round_up(q)};
}

}  // namespace

Coefficient Coefficient::rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("Coefficient: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  Coefficient c;
  c.num_ = num;
  c.den_ = den;
  c.value_ = static_cast<double>(num) / static_cast<double>(den);
  c.enclosure_ = num == 0 ? Interval(0.0) : enclose_quotient(num, den);
  return c;
}

Coefficient Coefficient::real(double value) {
  Coefficient c;
  c.value_ = value;
  c.enclosure_ = Interval(value);
  return c;
}

Coefficient Coefficient::scaled(std::int64_t factor) const {
  if (is_rational()) return rational(num_ * factor, den_);
  Coefficient c;
  c.value_ = value_ * static_cast<double>(factor);
  c.enclosure_ = enclosure_ * Interval(static_cast<double>(factor));
  return c;
}

std::string Coefficient::to_string() const {
  if (is_rational()) {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

Coefficient parse_coefficient(const std::string& text) {
  const auto slash = text.find('/');
  auto parse_int = [](const std::string& s, std::int64_t& out) {
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
  };
  if (slash != std::string::npos) {
    std::int64_t num = 0;
    std::int64_t den = 0;
    if (!parse_int(text.substr(0, slash), num) || !parse_int(text.substr(slash + 1), den)) {
      throw std::invalid_argument("malformed rational coefficient '" + text + "'");
    }
    return Coefficient::rational(num, den);
  }
  std::int64_t whole = 0;
  if (parse_int(text, whole)) return Coefficient::rational(whole, 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed coefficient '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("malformed coefficient '" + text + "'");
  return Coefficient::real(v);
}

PolynomialPotential::PolynomialPotential(std::vector<Term> terms) {
  for (auto& t : terms) {
    if (t.a < 0 || t.b < 0) throw std::invalid_argument("PolynomialPotential: negative exponent");
    if (!t.c.is_zero()) terms_.push_back(std::move(t));
  }
}

double PolynomialPotential::value(double x1, double x2) const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.c.value() * ipow(x1, t.a) * ipow(x2, t.b);
  return s;
}

Eigen::Vector2d PolynomialPotential::gradient(double x1, double x2) const {
  Eigen::Vector2d g = Eigen::Vector2d::Zero();
  for (const auto& t : terms_) {
    if (t.a > 0) g[0] += t.c.value() * t.a * ipow(x1, t.a - 1) * ipow(x2, t.b);
    if (t.b > 0) g[1] += t.c.value() * t.b * ipow(x1, t.a) * ipow(x2, t.b - 1);
  }
  return g;
}

Eigen::Matrix2d PolynomialPotential::hessian(double x1, double x2) const {
  Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
  for (const auto& t : terms_) {
    const double c = t.c.value();
    if (t.a > 1) h(0, 0) += c * t.a * (t.a - 1) * ipow(x1, t.a - 2) * ipow(x2, t.b);
    if (t.b > 1) h(1, 1) += c * t.b * (t.b - 1) * ipow(x1, t.a) * ipow(x2, t.b - 2);
    if (t.a > 0 && t.b > 0) h(0, 1) += c * t.a * t.b * ipow(x1, t.a - 1) * ipow(x2, t.b - 1);
  }
  h(1, 0) = h(0, 1);
  return h;
}

Interval PolynomialPotential::enclose(Interval x1, Interval x2) const {
  Interval s(0.0);
  for (const auto& t : terms_) s = s + t.c.enclosure() * pow(x1, t.a) * pow(x2, t.b);
  return s;
}

PolynomialPotential PolynomialPotential::derivative(int dx1, int dx2) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    Term d = t;
    bool vanishes = false;
    for (int k = 0; k < dx1 && !vanishes; ++k) {
      if (d.a == 0) vanishes = true;
      else d.c = d.c.scaled(d.a--);
    }
    for (int k = 0; k < dx2 && !vanishes; ++k) {
      if (d.b == 0) vanishes = true;
      else d.c = d.c.scaled(d.b--);
    }
    if (!vanishes) out.push_back(d);
  }
  return PolynomialPotential(std::move(out));
}

PotentialJet::PotentialJet(const PolynomialPotential& pot)
    : v(pot),
      v1(pot.derivative(1, 0)),
      v2(pot.derivative(0, 1)),
      v11(pot.derivative(2, 0)),
      v12(pot.derivative(1, 1)),
      v22(pot.derivative(0, 2)) {}

Polynomial4::Polynomial4(std::vector<Term> terms) {
  for (auto& t : terms) {
    for (int e : t.e) {
      if (e < 0) throw std::invalid_argument("Polynomial4: negative exponent");
    }
    if (!t.c.is_zero()) terms_.push_back(std::move(t));
  }
}

double Polynomial4::value(const Eigen::Vector4d& p) const {
  double s = 0.0;
  for (const auto& t : terms_) {
    double m = t.c.value();
    for (int k = 0; k < 4; ++k) m *= ipow(p[k], t.e[k]);
    s += m;
  }
  return s;
}

Eigen::Vector4d Polynomial4::gradient(const Eigen::Vector4d& p) const {
  Eigen::Vector4d g = Eigen::Vector4d::Zero();
  for (const auto& t : terms_) {
    for (int i = 0; i < 4; ++i) {
      if (t.e[i] == 0) continue;
      double m = t.c.value() * t.e[i];
      for (int k = 0; k < 4; ++k) m *= ipow(p[k], t.e[k] - (k == i ? 1 : 0));
      g[i] += m;
    }
  }
  return g;
}

Eigen::Matrix4d Polynomial4::hessian(const Eigen::Vector4d& p) const {
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  for (const auto& t : terms_) {
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j) {
        std::array<int, 4> e = t.e;
        double factor = t.c.value();
        if (e[i] == 0) continue;
        factor *= e[i]--;
        if (e[j] == 0) continue;
        factor *= e[j]--;
        for (int k = 0; k < 4; ++k) factor *= ipow(p[k], e[k]);
        h(i, j) += factor;
      }
    }
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) h(i, j) = h(j, i);
  return h;
}

PolynomialPotential henon_heiles_potential() {
  // V = (x1^2 + x2^2)/2 + x1^2 x2 - x2^3/3
  return PolynomialPotential({{2, 0, Coefficient::rational(1, 2)},
                              {0, 2, Coefficient::rational(1, 2)},
                              {2, 1, Coefficient::rational(1, 1)},
                              {0, 3, Coefficient::rational(-1, 3)}});
}

PolynomialPotential harmonic_potential() {
  return PolynomialPotential({{2, 0, Coefficient::rational(1, 2)}, {0, 2, Coefficient::rational(1, 2)}});
}

}  // namespace lensreeb
