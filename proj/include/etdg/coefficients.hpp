#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "etdg/basis.hpp"
#include "etdg/mesh.hpp"

namespace etdg {

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;
/// Partial derivative D^k g(x) of some scalar field g.
using DerivativeOracle = std::function<double(const MultiIndex&, const Vec2&)>;

struct ExactSolution {
  ScalarField value;
  VectorField gradient;
};

/// Data of  -div(alpha grad u) + beta . grad u + gamma u = f,  u = g_D on the
/// (inflow) boundary. Advection-reaction problems set `diffusive = false` and
/// leave alpha empty.
struct PdeCoefficients {
  std::string name;
  bool diffusive = true;
  /// beta == 0 and gamma == 0 everywhere; declared by the constructor of the
  /// data, not probed.
  bool pure_diffusion = false;
  ScalarField alpha;
  DerivativeOracle alpha_derivative;
  VectorField beta;
  ScalarField beta_divergence;
  ScalarField gamma;
  ScalarField source;
  DerivativeOracle source_derivative;
  ScalarField dirichlet;
  std::optional<ExactSolution> exact;
  /// Set when some derivative oracle is a finite-difference fallback.
  bool reduced_accuracy = false;

  Vec2 alpha_gradient(const Vec2& x) const {
    return {alpha_derivative({1, 0}, x), alpha_derivative({0, 1}, x)};
  }
};

enum class BuiltinCase { ArExample, DarExample, BoxDiffusion2D, QtDiffusion };

/// Accepts AR_EXAMPLE, DAR_EXAMPLE, BOX_DIFFUSION_2D, QT_DIFFUSION.
BuiltinCase parse_case(std::string_view name);
std::string to_string(BuiltinCase c);

PdeCoefficients builtin_case(BuiltinCase c);
PdeCoefficients builtin_case(std::string_view name);

/// Constant-coefficient Laplace problem with the harmonic solution x^2 - y^2
/// (f = 0, g_D = trace of the solution).
PdeCoefficients harmonic_quadratic_case();

/// Central-difference approximation of D^k g(x), applied one direction at a
/// time with step `step`.
double finite_difference_derivative(const ScalarField& g, const MultiIndex& k, const Vec2& x,
                                    double step = 1e-3);

/// Fills missing derivative oracles (and beta_divergence) with finite
/// differences and flags the result as reduced accuracy.
PdeCoefficients with_fallback_oracles(PdeCoefficients coeffs);

/// -div(alpha grad u) + beta . grad u + gamma u - f at x, given the value,
/// gradient and Hessian of u (alpha terms dropped for non-diffusive data).
double strong_residual(const PdeCoefficients& c, const Vec2& x, double u, const Vec2& grad_u,
                       const Eigen::Matrix2d& hess_u);

}  // namespace etdg
