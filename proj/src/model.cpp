#include "ldg/model.hpp"

#include <cmath>

namespace ldg {

namespace {

constexpr double kPi = 3.14159265358979323846;

ProblemSpec accuracy1d_spec() {
  ProblemSpec s;
  s.name = "accuracy1d";
  s.dim = 1;
  s.lower = {-1.0, 0.0};
  s.upper = {1.0, 1.0};
  s.boundary = BoundaryKind::Dirichlet;
  s.u_min = 1e-14;
  s.f = [](double u) { return u; };
  s.f_prime = [](double) { return 1.0; };
  s.H_prime = [](double u) { return u * u; };
  s.H_second = [](double u) { return 2.0 * u; };
  s.H = [](double u) { return u * u * u / 3.0; };
  s.phi = [](const double*) { return 0.0; };
  s.exact = [](const double* x, double t) {
    double w = 1.0 - x[0] * x[0] * x[0] * x[0];
    return std::exp(-t) * w * w * w * w * w;
  };
  s.u0 = [exact = s.exact](const double* x) { return exact(x, 0.0); };
  // Source for u_t = (2 u^2 u_x)_x + S with u = e^{-t} (1-x^4)^5.
  s.source = [](const double* xv, double t) {
    double x = xv[0];
    double x2 = x * x, x3 = x2 * x, x4 = x2 * x2;
    double a = 1.0 - x4;
    double a3 = a * a * a, a4 = a3 * a, a5 = a4 * a;
    double w = a5;
    double wp = -20.0 * x3 * a4;
    double wpp = -60.0 * x2 * a4 + 320.0 * x3 * x3 * a3;
    double e1 = std::exp(-t), e3 = std::exp(-3.0 * t);
    return -e1 * w - 2.0 * e3 * (2.0 * w * wp * wp + w * w * wpp);
  };
  return s;
}

ProblemSpec porous1d_spec() {
  ProblemSpec s;
  s.name = "porous1d";
  s.dim = 1;
  s.lower = {0.0, 0.0};
  s.upper = {1.0, 1.0};
  s.boundary = BoundaryKind::ZeroFlux;
  s.f = [](double u) { return u; };
  s.f_prime = [](double) { return 1.0; };
  // H'(u) = (4/3)(u-1/2)^3 max(u,1/2); the branch point u=1/2 belongs to
  // the upper branch. H'' is continuous there.
  s.H_prime = [](double u) {
    double d = u - 0.5;
    return (4.0 / 3.0) * d * d * d * std::max(u, 0.5);
  };
  s.H_second = [](double u) {
    double d = u - 0.5;
    if (u < 0.5) return 2.0 * d * d;
    return (4.0 / 3.0) * d * d * (4.0 * u - 0.5);
  };
  s.H = [](double u) {
    double d = u - 0.5;
    double d4 = d * d * d * d;
    double base = d4 / 6.0 - 1.0 / 96.0;  // fixes H(0) = 0
    if (u <= 0.5) return base;
    return base + (4.0 / 15.0) * d4 * d;
  };
  s.phi = [](const double*) { return 0.0; };
  s.u0 = [](const double* x) {
    return 0.5 - 0.5 * std::cos(2.0 * kPi * x[0]);
  };
  return s;
}

ProblemSpec porous2d_spec() {
  ProblemSpec s;
  s.name = "porous2d";
  s.dim = 2;
  s.lower = {-6.0, -6.0};
  s.upper = {6.0, 6.0};
  s.boundary = BoundaryKind::ZeroFlux;
  s.f = [](double u) { return u; };
  s.f_prime = [](double) { return 1.0; };
  s.H_prime = [](double u) { return 2.0 * u; };
  s.H_second = [](double) { return 2.0; };
  s.H = [](double u) { return u * u; };
  s.phi = [](const double*) { return 0.0; };
  s.u0 = [](const double* x) {
    return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1]));
  };
  return s;
}

ProblemSpec doublewell1d_spec() {
  ProblemSpec s;
  s.name = "doublewell1d";
  s.dim = 1;
  s.lower = {-1.4, 0.0};
  s.upper = {1.4, 1.0};
  s.boundary = BoundaryKind::ZeroFlux;
  s.f = [](double u) { return u; };
  s.f_prime = [](double) { return 1.0; };
  s.H_prime = [](double u) { return u; };
  s.H_second = [](double) { return 1.0; };
  s.H = [](double u) { return 0.5 * u * u; };
  s.phi = [](const double* x) {
    double x2 = x[0] * x[0];
    return 0.25 * x2 * x2 - 0.5 * x2;
  };
  s.u0 = [](const double* x) {
    return 0.2 / std::sqrt(0.4 * kPi) * std::exp(-x[0] * x[0] / 0.4);
  };
  return s;
}

ProblemSpec fermion2d_spec() {
  ProblemSpec s;
  s.name = "fermion2d";
  s.dim = 2;
  s.lower = {-10.0, -10.0};
  s.upper = {10.0, 10.0};
  s.boundary = BoundaryKind::ZeroFlux;
  s.admissible_lo = 0.0;
  s.admissible_hi = 1.0;
  s.f = [](double u) { return u * (1.0 - u); };
  s.f_prime = [](double u) { return 1.0 - 2.0 * u; };
  s.H_prime = [](double u) { return std::log(u / (1.0 - u)); };
  s.H_second = [](double u) { return 1.0 / (u * (1.0 - u)); };
  s.H = [](double u) {
    double a = (u > 0.0) ? u * std::log(u) : 0.0;
    double b = (u < 1.0) ? (1.0 - u) * std::log(1.0 - u) : 0.0;
    return a + b;
  };
  s.phi = [](const double* x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); };
  s.u0 = [](const double* x) {
    double g = 0.0;
    for (double sx : {-2.0, 2.0})
      for (double sy : {-2.0, 2.0}) {
        double dx = x[0] - sx, dy = x[1] - sy;
        g += std::exp(-0.5 * (dx * dx + dy * dy));
      }
    return g / (2.0 * std::sqrt(2.0 * kPi));
  };
  return s;
}

ProblemSpec boson1d_spec(double mass) {
  ProblemSpec s;
  s.name = "boson1d";
  s.dim = 1;
  s.lower = {-10.0, 0.0};
  s.upper = {10.0, 1.0};
  s.boundary = BoundaryKind::ZeroFlux;
  s.admissible_lo = 0.0;
  s.f = [](double u) { return u * (1.0 + u * u * u); };
  s.f_prime = [](double u) { return 1.0 + 4.0 * u * u * u; };
  s.H_prime = [](double u) {
    return std::log(u) - std::log1p(u * u * u) / 3.0;
  };
  s.H_second = [](double u) { return 1.0 / (u * (1.0 + u * u * u)); };
  // Antiderivative of H' with H(0)=0:
  //   H(u) = u log u - (u/3) log(1+u^3) - I(u),
  //   I(u) = int_0^u dv/(1+v^3)
  //        = (1/3)ln(1+u) - (1/6)ln(u^2-u+1)
  //          + (1/sqrt3)(atan((2u-1)/sqrt3) + atan(1/sqrt3)).
  s.H = [](double u) {
    if (u <= 0.0) return 0.0;
    double s3 = std::sqrt(3.0);
    double I = std::log1p(u) / 3.0 - std::log(u * u - u + 1.0) / 6.0 +
               (std::atan((2.0 * u - 1.0) / s3) + std::atan(1.0 / s3)) / s3;
    return u * std::log(u) - u / 3.0 * std::log1p(u * u * u) - I;
  };
  s.phi = [](const double* x) { return 0.5 * x[0] * x[0]; };
  s.u0 = [mass](const double* x) {
    double gp = std::exp(-0.5 * (x[0] - 2.0) * (x[0] - 2.0));
    double gm = std::exp(-0.5 * (x[0] + 2.0) * (x[0] + 2.0));
    return mass / (2.0 * std::sqrt(2.0 * kPi)) * (gp + gm);
  };
  return s;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"accuracy1d", "porous1d",  "porous2d",
          "doublewell1d", "fermion2d", "boson1d"};
}

ExperimentPreset preset(const std::string& name, double boson_mass) {
  ExperimentPreset p;
  p.name = name;
  if (name == "accuracy1d") {
    p.spec = accuracy1d_spec();
    p.mesh_counts = {100, 1};
    p.alpha = 1.0;
    p.t_final = 1.0;
  } else if (name == "porous1d") {
    p.spec = porous1d_spec();
    p.mesh_counts = {100, 1};
    p.alpha = 0.1;
    p.t_final = 1.0;
  } else if (name == "porous2d") {
    p.spec = porous2d_spec();
    p.mesh_counts = {30, 30};
    p.alpha = 1.0;
    p.t_final = 1.0;
  } else if (name == "doublewell1d") {
    p.spec = doublewell1d_spec();
    p.mesh_counts = {100, 1};
    p.alpha = 0.1;
    p.t_final = 2.0;
  } else if (name == "fermion2d") {
    p.spec = fermion2d_spec();
    p.mesh_counts = {30, 30};
    p.alpha = 1.0;
    p.t_final = 1.0;
  } else if (name == "boson1d") {
    p.spec = boson1d_spec(boson_mass);
    p.mesh_counts = {100, 1};
    p.alpha = 1.0;
    p.t_final = 10.0;
    p.mass = boson_mass;
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  p.degree = 2;
  p.dirk_order = p.degree + 1;
  return p;
}

ProblemSpec make_polynomial_problem(const std::vector<double>& f_coeffs,
                                    const std::vector<double>& hp_coeffs,
                                    std::array<double, 2> bounds,
                                    SpaceFn u0) {
  auto poly = [](const std::vector<double>& c, double u) {
    double acc = 0.0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * u + c[i];
    return acc;
  };
  auto dpoly = [](const std::vector<double>& c, double u) {
    double acc = 0.0;
    for (size_t i = c.size(); i-- > 1;) acc = acc * u + i * c[i];
    return acc;
  };
  auto ipoly = [](const std::vector<double>& c, double u) {
    double acc = 0.0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * u + c[i] / (i + 1.0);
    return acc * u;
  };
  ProblemSpec s;
  s.name = "polynomial";
  s.dim = 1;
  s.lower = {bounds[0], 0.0};
  s.upper = {bounds[1], 1.0};
  s.boundary = BoundaryKind::ZeroFlux;
  s.f = [=](double u) { return poly(f_coeffs, u); };
  s.f_prime = [=](double u) { return dpoly(f_coeffs, u); };
  s.H_prime = [=](double u) { return poly(hp_coeffs, u); };
  s.H_second = [=](double u) { return dpoly(hp_coeffs, u); };
  s.H = [=](double u) { return ipoly(hp_coeffs, u); };
  s.phi = [](const double*) { return 0.0; };
  s.u0 = std::move(u0);
  return s;
}

double entropy_density(const ProblemSpec& spec, double u, const double* x) {
  // Quadrature values may graze the admissible bounds even when the
  // constraint points satisfy them; nudge inside so H stays finite
  // (H extends continuously to the closed range for every model here).
  double uc = u;
  if (uc <= spec.admissible_lo) uc = spec.admissible_lo + 1e-300;
  if (uc >= spec.admissible_hi) uc = spec.admissible_hi - 1e-15;
  return u * spec.phi(x) + spec.H(uc);
}

}  // namespace ldg
