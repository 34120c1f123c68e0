#include "lensreeb/hamiltonian.hpp"

#include <cmath>
#include <set>

namespace lensreeb {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

// J with X_H = J grad H in (x1, x2, y1, y2) order.
Mat4 field_matrix() {
  Mat4 j = Mat4::Zero();
  j(0, 2) = 1.0;
  j(1, 3) = 1.0;
  j(2, 0) = -1.0;
  j(3, 1) = -1.0;
  return j;
}

Coefficient coefficient_from_json(const nlohmann::json& c) {
  if (c.is_string()) return parse_coefficient(c.get<std::string>());
  if (c.is_number_integer()) return Coefficient::rational(c.get<std::int64_t>(), 1);
  if (c.is_number()) return Coefficient::real(c.get<double>());
  throw std::invalid_argument("model: coefficient must be a number or a \"p/q\" string");
}

nlohmann::json coefficient_to_json(const Coefficient& c) {
  if (c.is_rational() && c.den() == 1) return c.num();
  if (c.is_rational()) return c.to_string();
  return c.value();
}

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw std::invalid_argument("model: unknown key '" + key + "'");
  }
}

}  // namespace

HamiltonianModel::HamiltonianModel(std::string name, Kind kind) : name_(std::move(name)), kind_(std::move(kind)) {
  if (const auto* e = std::get_if<Ellipsoid>(&kind_)) {
    if (!(e->r1 > 0.0) || !(e->r2 > 0.0)) throw std::invalid_argument("ellipsoid radii must be positive");
  }
}

const PolynomialPotential& HamiltonianModel::potential() const {
  if (const auto* m = std::get_if<Mechanical>(&kind_)) return m->potential;
  throw std::logic_error("model '" + name_ + "' is not mechanical");
}

double HamiltonianModel::value(const PhasePoint& p) const {
  return std::visit(overloaded{
                        [&](const Mechanical& m) {
                          return 0.5 * (p.y1 * p.y1 + p.y2 * p.y2) + m.potential.value(p.x1, p.x2);
                        },
                        [&](const Ellipsoid& e) {
                          return (p.x1 * p.x1 + p.y1 * p.y1) / (e.r1 * e.r1) +
                                 (p.x2 * p.x2 + p.y2 * p.y2) / (e.r2 * e.r2);
                        },
                        [&](const GeneralPolynomial& g) { return g.h.value(p.vec()); },
                    },
                    kind_);
}

Vec4 HamiltonianModel::gradient(const PhasePoint& p) const {
  return std::visit(overloaded{
                        [&](const Mechanical& m) {
                          const Eigen::Vector2d gv = m.potential.gradient(p.x1, p.x2);
                          return Vec4(gv[0], gv[1], p.y1, p.y2);
                        },
                        [&](const Ellipsoid& e) {
                          const double a = 2.0 / (e.r1 * e.r1);
                          const double b = 2.0 / (e.r2 * e.r2);
                          return Vec4(a * p.x1, b * p.x2, a * p.y1, b * p.y2);
                        },
                        [&](const GeneralPolynomial& g) { return Vec4(g.h.gradient(p.vec())); },
                    },
                    kind_);
}

Mat4 HamiltonianModel::hessian(const PhasePoint& p) const {
  return std::visit(overloaded{
                        [&](const Mechanical& m) {
                          Mat4 h = Mat4::Zero();
                          h.topLeftCorner<2, 2>() = m.potential.hessian(p.x1, p.x2);
                          h(2, 2) = 1.0;
                          h(3, 3) = 1.0;
                          return h;
                        },
                        [&](const Ellipsoid& e) {
                          const double a = 2.0 / (e.r1 * e.r1);
                          const double b = 2.0 / (e.r2 * e.r2);
                          return Mat4(Vec4(a, b, a, b).asDiagonal());
                        },
                        [&](const GeneralPolynomial& g) { return Mat4(g.h.hessian(p.vec())); },
                    },
                    kind_);
}

Evaluation evaluate(const HamiltonianModel& model, const PhasePoint& p) {
  return {model.value(p), model.gradient(p)};
}

TangentVector hamiltonian_field(const HamiltonianModel& model, const PhasePoint& p) {
  return field_matrix() * model.gradient(p);
}

Mat4 hamiltonian_field_jacobian(const HamiltonianModel& model, const PhasePoint& p) {
  return field_matrix() * model.hessian(p);
}

double reeb_normalizer(const HamiltonianModel& model, const PhasePoint& p) {
  // lambda0(X_H) = 1/2 <p, grad H>
  return 0.5 * p.vec().dot(model.gradient(p));
}

TangentVector reeb_field(const HamiltonianModel& model, const PhasePoint& p) {
  const double h = reeb_normalizer(model, p);
  if (std::abs(h) < kStarshapedThreshold) {
    throw ReebError("reeb_field: lambda0(X_H) = " + std::to_string(h) +
                    " below threshold; level is not starshaped at this point");
  }
  return hamiltonian_field(model, p) / h;
}

Mat4 reeb_field_jacobian(const HamiltonianModel& model, const PhasePoint& p) {
  const Vec4 grad = model.gradient(p);
  const Mat4 hess = model.hessian(p);
  const double h = 0.5 * p.vec().dot(grad);
  if (std::abs(h) < kStarshapedThreshold) throw ReebError("reeb_field_jacobian: level is not starshaped here");
  const Vec4 grad_h = 0.5 * (grad + hess * p.vec());
  const Vec4 xh = field_matrix() * grad;
  return field_matrix() * hess / h - xh * grad_h.transpose() / (h * h);
}

HamiltonianModel henon_heiles() { return {"henon-heiles", Mechanical{henon_heiles_potential()}}; }

HamiltonianModel harmonic_oscillator() { return {"harmonic", Mechanical{harmonic_potential()}}; }

HamiltonianModel decoupled_z4() {
  // H = (x2^2 + y2^2)/2 + (x1^2 + y1^2)/2 + 2(x1^2 + y1^2)(y1 x1 - x1 y1)
  //     - 4(x1^6 - 3 x1^4 y1^2 - 3 x1^2 y1^4 + y1^6).
  // The cubic-looking product is identically zero and contributes no terms.
  // Exponent order (x1, x2, y1, y2).
  const auto r = [](std::int64_t n, std::int64_t d) { return Coefficient::rational(n, d); };
  return {"decoupled-z4", GeneralPolynomial{Polynomial4({
                              {{0, 2, 0, 0}, r(1, 2)},
                              {{0, 0, 0, 2}, r(1, 2)},
                              {{2, 0, 0, 0}, r(1, 2)},
                              {{0, 0, 2, 0}, r(1, 2)},
                              {{6, 0, 0, 0}, r(-4, 1)},
                              {{4, 0, 2, 0}, r(12, 1)},
                              {{2, 0, 4, 0}, r(12, 1)},
                              {{0, 0, 6, 0}, r(-4, 1)},
                          })}};
}

HamiltonianModel ellipsoid(double r1, double r2) { return {"ellipsoid", Ellipsoid{r1, r2}}; }

HamiltonianModel builtin_model(const std::string& name, double r1, double r2) {
  if (name == "henon-heiles") return henon_heiles();
  if (name == "harmonic") return harmonic_oscillator();
  if (name == "decoupled-z4") return decoupled_z4();
  if (name == "ellipsoid") return ellipsoid(r1, r2);
  throw std::invalid_argument("unknown built-in model '" + name + "'");
}

HamiltonianModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw std::invalid_argument("model: expected an object with \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  const std::string name = j.value("name", kind);
  if (kind == "mechanical") {
    reject_unknown(j, {"kind", "name", "potential"});
    std::vector<PolynomialPotential::Term> terms;
    for (const auto& t : j.at("potential")) {
      if (!t.is_array() || t.size() != 3) throw std::invalid_argument("model: potential terms are [a, b, c]");
      terms.push_back({t[0].get<int>(), t[1].get<int>(), coefficient_from_json(t[2])});
    }
    return {name, Mechanical{PolynomialPotential(std::move(terms))}};
  }
  if (kind == "ellipsoid") {
    reject_unknown(j, {"kind", "name", "r1", "r2"});
    return {name, Ellipsoid{j.at("r1").get<double>(), j.at("r2").get<double>()}};
  }
  if (kind == "polynomial") {
    reject_unknown(j, {"kind", "name", "terms"});
    std::vector<Polynomial4::Term> terms;
    for (const auto& t : j.at("terms")) {
      if (!t.is_array() || t.size() != 5) throw std::invalid_argument("model: polynomial terms are [e1, e2, e3, e4, c]");
      terms.push_back({{t[0].get<int>(), t[1].get<int>(), t[2].get<int>(), t[3].get<int>()}, coefficient_from_json(t[4])});
    }
    return {name, GeneralPolynomial{Polynomial4(std::move(terms))}};
  }
  throw std::invalid_argument("model: unknown kind '" + kind + "'");
}

nlohmann::json model_to_json(const HamiltonianModel& model) {
  return std::visit(overloaded{
                        [&](const Mechanical& m) {
                          nlohmann::json terms = nlohmann::json::array();
                          for (const auto& t : m.potential.terms()) terms.push_back({t.a, t.b, coefficient_to_json(t.c)});
                          return nlohmann::json{{"kind", "mechanical"}, {"name", model.name()}, {"potential", terms}};
                        },
                        [&](const Ellipsoid& e) {
                          return nlohmann::json{{"kind", "ellipsoid"}, {"name", model.name()}, {"r1", e.r1}, {"r2", e.r2}};
                        },
                        [&](const GeneralPolynomial& g) {
                          nlohmann::json terms = nlohmann::json::array();
                          for (const auto& t : g.h.terms())
                            terms.push_back({t.e[0], t.e[1], t.e[2], t.e[3], coefficient_to_json(t.c)});
                          return nlohmann::json{{"kind", "polynomial"}, {"name", model.name()}, {"terms", terms}};
                        },
                    },
                    model.kind());
}

}  // namespace lensreeb
