#include "etdg/coefficients.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace etdg {

namespace {

constexpr double kPi = std::numbers::pi;

// Fields of the form g(x1 + x2): D^(a,b) g = g^{(a+b)}.
double sin_pi_sum_derivative(int k, double s) {
  return std::pow(kPi, k) * std::sin(kPi * s + 0.5 * k * kPi);
}

double cos_pi_sum_derivative(int k, double s) {
  return std::pow(kPi, k) * std::cos(kPi * s + 0.5 * k * kPi);
}

ExactSolution sin_pi_sum_solution() {
  return {[](const Vec2& x) { return std::sin(kPi * (x.x() + x.y())); },
          [](const Vec2& x) {
            const double d = kPi * std::cos(kPi * (x.x() + x.y()));
            return Vec2(d, d);
          }};
}

// alpha = 1 + x1 + x2
void set_linear_alpha(PdeCoefficients& c) {
  c.alpha = [](const Vec2& x) { return 1.0 + x.x() + x.y(); };
  c.alpha_derivative = [](const MultiIndex& k, const Vec2& x) {
    switch (k.order()) {
      case 0: return 1.0 + x.x() + x.y();
      case 1: return 1.0;
      default: return 0.0;
    }
  };
}

PdeCoefficients ar_example() {
  PdeCoefficients c;
  c.name = "AR_EXAMPLE";
  c.diffusive = false;
  c.beta = [](const Vec2& x) { return Vec2(-x.x(), x.y()); };
  c.beta_divergence = [](const Vec2&) { return 0.0; };
  c.gamma = [](const Vec2& x) { return x.x() + x.y(); };
  c.source = [](const Vec2& x) {
    const double s = x.x() + x.y();
    return kPi * std::cos(kPi * s) * (x.y() - x.x()) + s * std::sin(kPi * s);
  };
  c.exact = sin_pi_sum_solution();
  c.dirichlet = c.exact->value;
  return c;
}

PdeCoefficients dar_example() {
  PdeCoefficients c;
  c.name = "DAR_EXAMPLE";
  set_linear_alpha(c);
  c.beta = [](const Vec2& x) { return Vec2(std::sin(x.x()), std::sin(x.y())); };
  c.beta_divergence = [](const Vec2& x) { return std::cos(x.x()) + std::cos(x.y()); };
  c.gamma = [](const Vec2& x) { return 4.0 / (1.0 + x.x() + x.y()); };
  c.source = [](const Vec2& x) {
    const double s = x.x() + x.y();
    const double diffusion = 2.0 * kPi * kPi * (1.0 + s) * std::sin(kPi * s) -
                             2.0 * kPi * std::cos(kPi * s);
    const double advection = kPi * std::cos(kPi * s) * (std::sin(x.x()) + std::sin(x.y()));
    return diffusion + advection + 4.0 / (1.0 + s) * std::sin(kPi * s);
  };
  c.exact = sin_pi_sum_solution();
  c.dirichlet = c.exact->value;
  return c;
}

// -div((1 + x1 + x2) grad sin(pi (x1 + x2)))
PdeCoefficients linear_diffusion(std::string name) {
  PdeCoefficients c;
  c.name = std::move(name);
  c.pure_diffusion = true;
  set_linear_alpha(c);
  c.beta = [](const Vec2&) { return Vec2(0.0, 0.0); };
  c.beta_divergence = [](const Vec2&) { return 0.0; };
  c.gamma = [](const Vec2&) { return 0.0; };
  c.source_derivative = [](const MultiIndex& i, const Vec2& x) {
    const int k = i.order();
    const double s = x.x() + x.y();
    // d^k [(1 + s) sin(pi s)] by Leibniz
    double product = (1.0 + s) * sin_pi_sum_derivative(k, s);
    if (k >= 1) product += k * sin_pi_sum_derivative(k - 1, s);
    return 2.0 * kPi * kPi * product - 2.0 * kPi * cos_pi_sum_derivative(k, s);
  };
  c.source = [d = c.source_derivative](const Vec2& x) { return d({0, 0}, x); };
  c.exact = sin_pi_sum_solution();
  c.dirichlet = c.exact->value;
  return c;
}

}  // namespace

BuiltinCase parse_case(std::string_view name) {
  if (name == "AR_EXAMPLE") return BuiltinCase::ArExample;
  if (name == "DAR_EXAMPLE") return BuiltinCase::DarExample;
  if (name == "BOX_DIFFUSION_2D") return BuiltinCase::BoxDiffusion2D;
  if (name == "QT_DIFFUSION") return BuiltinCase::QtDiffusion;
  throw std::invalid_argument("unknown case '" + std::string(name) + "'");
}

std::string to_string(BuiltinCase c) {
  switch (c) {
    case BuiltinCase::ArExample: return "AR_EXAMPLE";
    case BuiltinCase::DarExample: return "DAR_EXAMPLE";
    case BuiltinCase::BoxDiffusion2D: return "BOX_DIFFUSION_2D";
    case BuiltinCase::QtDiffusion: return "QT_DIFFUSION";
  }
  throw std::invalid_argument("unknown case");
}

PdeCoefficients builtin_case(BuiltinCase c) {
  switch (c) {
    case BuiltinCase::ArExample: return ar_example();
    case BuiltinCase::DarExample: return dar_example();
    case BuiltinCase::BoxDiffusion2D: return linear_diffusion("BOX_DIFFUSION_2D");
    case BuiltinCase::QtDiffusion: return linear_diffusion("QT_DIFFUSION");
  }
  throw std::invalid_argument("unknown case");
}

PdeCoefficients builtin_case(std::string_view name) { return builtin_case(parse_case(name)); }

PdeCoefficients harmonic_quadratic_case() {
  PdeCoefficients c;
  c.name = "HARMONIC_QUADRATIC";
  c.pure_diffusion = true;
  c.alpha = [](const Vec2&) { return 1.0; };
  c.alpha_derivative = [](const MultiIndex& k, const Vec2&) { return k.order() == 0 ? 1.0 : 0.0; };
  c.beta = [](const Vec2&) { return Vec2(0.0, 0.0); };
  c.beta_divergence = [](const Vec2&) { return 0.0; };
  c.gamma = [](const Vec2&) { return 0.0; };
  c.source = [](const Vec2&) { return 0.0; };
  c.source_derivative = [](const MultiIndex&, const Vec2&) { return 0.0; };
  c.exact = ExactSolution{[](const Vec2& x) { return x.x() * x.x() - x.y() * x.y(); },
                          [](const Vec2& x) { return Vec2(2.0 * x.x(), -2.0 * x.y()); }};
  c.dirichlet = c.exact->value;
  return c;
}

double finite_difference_derivative(const ScalarField& g, const MultiIndex& k, const Vec2& x,
                                    double step) {
  if (k.a > 0) {
    const MultiIndex lower{k.a - 1, k.b};
    return (finite_difference_derivative(g, lower, x + Vec2(step, 0.0), step) -
            finite_difference_derivative(g, lower, x - Vec2(step, 0.0), step)) /
           (2.0 * step);
  }
  if (k.b > 0) {
    const MultiIndex lower{k.a, k.b - 1};
    return (finite_difference_derivative(g, lower, x + Vec2(0.0, step), step) -
            finite_difference_derivative(g, lower, x - Vec2(0.0, step), step)) /
           (2.0 * step);
  }
  return g(x);
}

PdeCoefficients with_fallback_oracles(PdeCoefficients coeffs) {
  if (coeffs.diffusive && coeffs.alpha && !coeffs.alpha_derivative) {
    coeffs.alpha_derivative = [a = coeffs.alpha](const MultiIndex& k, const Vec2& x) {
      return finite_difference_derivative(a, k, x);
    };
    coeffs.reduced_accuracy = true;
  }
  if (coeffs.source && !coeffs.source_derivative) {
    coeffs.source_derivative = [f = coeffs.source](const MultiIndex& k, const Vec2& x) {
      return finite_difference_derivative(f, k, x);
    };
    coeffs.reduced_accuracy = true;
  }
  if (coeffs.beta && !coeffs.beta_divergence) {
    coeffs.beta_divergence = [b = coeffs.beta](const Vec2& x) {
      const ScalarField bx = [&b](const Vec2& y) { return b(y).x(); };
      const ScalarField by = [&b](const Vec2& y) { return b(y).y(); };
      return finite_difference_derivative(bx, {1, 0}, x) +
             finite_difference_derivative(by, {0, 1}, x);
    };
    coeffs.reduced_accuracy = true;
  }
  return coeffs;
}

double strong_residual(const PdeCoefficients& c, const Vec2& x, double u, const Vec2& grad_u,
                       const Eigen::Matrix2d& hess_u) {
  double r = c.beta(x).dot(grad_u) + c.gamma(x) * u - c.source(x);
  if (c.diffusive) r -= c.alpha(x) * hess_u.trace() + c.alpha_gradient(x).dot(grad_u);
  return r;
}

}  // namespace etdg
