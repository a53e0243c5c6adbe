#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "etdg/analysis.hpp"
#include "etdg/dg_forms.hpp"
#include "etdg/solver.hpp"
#include "support.hpp"

using namespace etdg;

namespace {

PdeCoefficients homogeneous(PdeCoefficients c) {
  c.source = [](const Vec2&) { return 0.0; };
  c.source_derivative = [](const MultiIndex&, const Vec2&) { return 0.0; };
  c.dirichlet = c.source;
  return c;
}

double quadratic_form(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& v) {
  return v.dot(a * v);
}

}  // namespace

TEST_CASE("AR form on the constant function") {
  const auto coeffs = builtin_case("AR_EXAMPLE");
  for (int n : {1, 3}) {
    const auto space = make_space(n, 2);
    const auto sys = assemble_global_system(FormKind::ArUpwind, space, coeffs, 0.0);
    const Eigen::VectorXd one = space->project([](const Vec2&) { return 1.0; });
    // int gamma = int (x + y) = 1; inflow only on x = 1 where |beta . n| = 1.
    CHECK(quadratic_form(sys.matrix, one) == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("SIP form on the constant function reduces to boundary penalty") {
  const auto coeffs = harmonic_quadratic_case();
  for (int n : {1, 2}) {
    const auto space = make_space(n, 2);
    const double sigma = 7.0;
    const auto sys = assemble_global_system(FormKind::DarSip, space, coeffs, sigma);
    const Eigen::VectorXd one = space->project([](const Vec2&) { return 1.0; });
    double expected = 0.0;
    const auto& alpha_f = facet_alpha(*space, coeffs);
    for (int f = 0; f < space->mesh().num_facets(); ++f) {
      const Facet& facet = space->mesh().facets()[f];
      if (facet.is_boundary()) expected += sigma * alpha_f[f] / facet.length * facet.length;
    }
    CHECK(expected == doctest::Approx(sigma * 4 * n));
    CHECK(quadratic_form(sys.matrix, one) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("zero data give a zero right-hand side") {
  for (const auto& [kind, name] :
       {std::pair{FormKind::ArUpwind, "AR_EXAMPLE"}, std::pair{FormKind::DarSip, "DAR_EXAMPLE"}}) {
    const auto space = make_space(2, 3);
    const auto sys = assemble_global_system(kind, space, homogeneous(builtin_case(name)), 10.0);
    CHECK(sys.rhs.norm() == 0.0);
  }
}

TEST_CASE("form preconditions") {
  const auto space = make_space(1, 2);
  CHECK_THROWS_AS(assemble_global_system(FormKind::DarSip, space, builtin_case("DAR_EXAMPLE"), 0.0),
                  std::invalid_argument);
  auto bad = builtin_case("DAR_EXAMPLE");
  bad.alpha = [](const Vec2& x) { return x.x() - 0.5; };
  CHECK_THROWS_AS(assemble_global_system(FormKind::DarSip, space, bad, 10.0), std::domain_error);
}

TEST_CASE("SIP diffusion matrix is symmetric") {
  for (const auto& coeffs : {harmonic_quadratic_case(), builtin_case("BOX_DIFFUSION_2D")}) {
    const auto space = make_space(3, 3);
    const auto sys = assemble_global_system(FormKind::DarSip, space, coeffs, default_sigma(3));
    CHECK(etdg::testing::relative_asymmetry(sys.matrix) <= 1e-10);
  }
  const auto space = make_space(3, 3);
  const auto adv = assemble_global_system(FormKind::DarSip, space, builtin_case("DAR_EXAMPLE"), 450.0);
  CHECK(etdg::testing::relative_asymmetry(adv.matrix) > 1e-6);
}

TEST_CASE("AR coercivity witness") {
  const auto coeffs = builtin_case("AR_EXAMPLE");
  const auto space = make_space(3, 2);
  const auto& mesh = space->mesh();
  const auto sys = assemble_global_system(FormKind::ArUpwind, space, coeffs, 0.0);
  std::mt19937 rng(9);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd v(space->num_dofs());
    for (int i = 0; i < v.size(); ++i) v[i] = n01(rng);
    double bound = 0.0;
    for (int k = 0; k < mesh.num_elements(); ++k) {
      const auto q = triangle_rule(mesh.element_vertices(k), 10);
      for (std::size_t i = 0; i < q.size(); ++i) {
        const Vec2& x = q.points[i];
        const double val = space->evaluate(v, k, x);
        bound += q.weights[i] * (coeffs.gamma(x) - 0.5 * coeffs.beta_divergence(x)) * val * val;
      }
    }
    for (const Facet& f : mesh.facets()) {
      const auto q = segment_rule(mesh.vertices()[f.vertices[0]], mesh.vertices()[f.vertices[1]], 8);
      for (std::size_t i = 0; i < q.size(); ++i) {
        const Vec2& x = q.points[i];
        const double bn = std::abs(coeffs.beta(x).dot(f.normal));
        const double jump = space->evaluate(v, f.left, x) -
                            (f.is_boundary() ? 0.0 : space->evaluate(v, f.right, x));
        bound += 0.5 * q.weights[i] * bn * jump * jump;
      }
    }
    CHECK(quadratic_form(sys.matrix, v) >= 0.9 * bound);
    CHECK(quadratic_form(sys.matrix, v) == doctest::Approx(bound).epsilon(1e-9));
  }
}

TEST_CASE("Galerkin residual of the projected exact solution decreases") {
  const auto coeffs = builtin_case("DAR_EXAMPLE");
  std::vector<double> r;
  for (int n : {2, 4, 8}) {
    const auto space = make_space(n, 2);
    const auto sys = assemble_global_system(FormKind::DarSip, space, coeffs, default_sigma(2));
    const Eigen::VectorXd u = space->project(coeffs.exact->value);
    r.push_back((sys.matrix * u - sys.rhs).norm());
  }
  CHECK(r[1] < r[0]);
  CHECK(r[2] < r[1]);
}

TEST_CASE("COO output") {
  Eigen::SparseMatrix<double> m(2, 2);
  m.insert(1, 0) = 2.5;
  std::ostringstream out;
  write_matrix_coo(out, m);
  CHECK(out.str().find("1 0 2.5") != std::string::npos);
}

TEST_CASE("zero data give zero solutions") {
  const auto coeffs = homogeneous(builtin_case("DAR_EXAMPLE"));
  const auto space = make_space(2, 3);
  const auto sys = assemble_global_system(FormKind::DarSip, space, coeffs, default_sigma(3));
  const auto ops = assemble_local_operators(*space, OperatorKind::Dar, coeffs);
  const auto emb = compute_global_embedding(*space, ops);
  CHECK(solve_standard_dg(sys).coefficients.norm() == 0.0);
  CHECK(solve_embedded_trefftz(sys, emb).coefficients.norm() == 0.0);
  CHECK(solve_block_coupled(ops, sys, emb, ComplementRule::SvdComplement).coefficients.norm() < 1e-14);
}

TEST_CASE("exactly representable harmonic solution") {
  const auto coeffs = harmonic_quadratic_case();
  for (int p : {2, 3}) {
    const auto space = make_space(4, p);
    const auto sys = assemble_global_system(FormKind::DarSip, space, coeffs, default_sigma(p));
    const auto dg = solve_standard_dg(sys);
    CHECK(dg.residual <= 1e-10);
    const Eigen::VectorXd proj = space->project(coeffs.exact->value);
    CHECK((sys.matrix * proj - sys.rhs).norm() <= 1e-9 * sys.rhs.norm());

    const auto ops = assemble_local_operators(*space, OperatorKind::Dar, coeffs);
    const auto emb = compute_global_embedding(*space, ops);
    const auto et = solve_embedded_trefftz(sys, emb);
    CHECK((et.coefficients - dg.coefficients).norm() <= 1e-8 * dg.coefficients.norm());
    CHECK(et.ndof_trefftz == space->num_elements() * (2 * p + 1));
    for (auto rule : {ComplementRule::SvdComplement, ComplementRule::MinNormImage}) {
      const auto block = solve_block_coupled(ops, sys, emb, rule);
      CHECK(compute_errors(block, coeffs, FormKind::DarSip, sys.sigma).l2_error <= 1e-8);
    }
    const auto err = compute_errors(et, coeffs, FormKind::DarSip, sys.sigma);
    CHECK(err.l2_error <= 1e-8);
    CHECK(err.vh_error <= 1e-8);
    CHECK(compute_errors(dg, coeffs, FormKind::DarSip, sys.sigma).l2_error <= 1e-8);
  }
}

TEST_CASE("AR embedded vs standard DG at n=8, p=3") {
  const auto coeffs = builtin_case("AR_EXAMPLE");
  const auto space = make_space(8, 3);
  const auto sys = assemble_global_system(FormKind::ArUpwind, space, coeffs, 0.0);
  const auto dg = solve_standard_dg(sys);
  const auto ops = assemble_local_operators(*space, OperatorKind::Ar, coeffs);
  const auto emb = compute_global_embedding(*space, ops);
  const auto et = solve_embedded_trefftz(sys, emb);
  const double e_dg = compute_errors(dg, coeffs, FormKind::ArUpwind, 0.0).l2_error;
  const double e_et = compute_errors(et, coeffs, FormKind::ArUpwind, 0.0).l2_error;
  CHECK(e_et <= 2.0 * e_dg);
  CHECK(e_dg <= 2.0 * e_et);
  CHECK(dg.residual <= 1e-10);
  CHECK(et.residual <= 1e-10);
  CHECK(static_cast<double>(et.ndof_trefftz) / et.ndof_full == doctest::Approx(0.4));

  // Local rows hold exactly for the embedded solution.
  for (int k = 0; k < space->num_elements(); ++k) {
    const Eigen::VectorXd uk = et.coefficients.segment(space->offset(k), space->dofs_per_element());
    CHECK((ops[k].matrix * uk - ops[k].rhs).norm() <= 1e-8 * (1.0 + ops[k].rhs.norm()));
  }
}

TEST_CASE("block system matches embedded solve for both complement rules") {
  for (const auto& [kind, name] :
       {std::pair{OperatorKind::Ar, "AR_EXAMPLE"}, std::pair{OperatorKind::Dar, "DAR_EXAMPLE"}}) {
    const auto coeffs = builtin_case(name);
    const auto space = make_space(4, 3);
    const auto sys = assemble_global_system(form_kind_for(kind), space, coeffs, default_sigma(3));
    const auto ops = assemble_local_operators(*space, kind, coeffs);
    const auto emb = compute_global_embedding(*space, ops);
    const auto et = solve_embedded_trefftz(sys, emb);
    const auto svd = solve_block_coupled(ops, sys, emb, ComplementRule::SvdComplement);
    const auto mn = solve_block_coupled(ops, sys, emb, ComplementRule::MinNormImage);
    const double norm = et.coefficients.norm();
    CHECK((svd.coefficients - et.coefficients).norm() <= 1e-8 * norm);
    CHECK((mn.coefficients - et.coefficients).norm() <= 1e-8 * norm);
    CHECK((svd.local_part + svd.trefftz_part - svd.coefficients).norm() <= 1e-12 * norm);
    CHECK((mn.local_part + mn.trefftz_part - mn.coefficients).norm() <= 1e-12 * norm);
    if (kind == OperatorKind::Ar) {
      CHECK((svd.local_part - mn.local_part).norm() > 1e-6 * norm);
    }
  }
}

TEST_CASE("complement bases") {
  const auto coeffs = builtin_case("AR_EXAMPLE");
  const auto space = make_space(1, 3);
  const auto ops = assemble_local_operators(*space, OperatorKind::Ar, coeffs);
  const auto emb = compute_global_embedding(*space, ops);
  for (auto rule : {ComplementRule::SvdComplement, ComplementRule::MinNormImage}) {
    const Eigen::MatrixXd c = complement_basis(emb.element(0), space->basis(0), rule);
    CHECK(c.cols() == 6);
    const Eigen::MatrixXd g = c.transpose() * c;
    CHECK((g - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-12);
    // Together with the Trefftz block it spans the full space.
    Eigen::MatrixXd all(10, 10);
    all << c, emb.element(0).trefftz;
    CHECK(std::abs(all.determinant()) > 1e-8);
  }
}

TEST_CASE("singular system reports an error") {
  Eigen::SparseMatrix<double> a(2, 2);
  a.insert(0, 0) = 1.0;
  CHECK_THROWS_AS(sparse_solve(a, Eigen::Vector2d(1.0, 1.0)), SolverError);
}

TEST_CASE("error norms") {
  const auto coeffs = builtin_case("AR_EXAMPLE");
  const auto space = make_space(4, 2);
  DiscreteSolution zero;
  zero.space = space;
  zero.coefficients = Eigen::VectorXd::Zero(space->num_dofs());
  const auto r = compute_errors(zero, coeffs, FormKind::ArUpwind, 0.0);
  CHECK(r.l2_error == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));

  // Homogeneity: with u_ex = 0 the error is -u_h.
  auto null_case = coeffs;
  null_case.exact = ExactSolution{[](const Vec2&) { return 0.0; }, [](const Vec2&) { return Vec2(0, 0); }};
  DiscreteSolution u = zero;
  u.coefficients = space->project(coeffs.exact->value);
  DiscreteSolution su = u;
  su.coefficients *= -3.0;
  for (auto kind : {FormKind::ArUpwind, FormKind::DarSip}) {
    auto c = null_case;
    if (kind == FormKind::DarSip) c = [] {
        auto d = builtin_case("DAR_EXAMPLE");
        d.exact = ExactSolution{[](const Vec2&) { return 0.0; }, [](const Vec2&) { return Vec2(0, 0); }};
        return d;
      }();
    const auto r1 = compute_errors(u, c, kind, 20.0);
    const auto r3 = compute_errors(su, c, kind, 20.0);
    CHECK(r3.l2_error == doctest::Approx(3.0 * r1.l2_error).epsilon(1e-12));
    CHECK(r3.vh_error == doctest::Approx(3.0 * r1.vh_error).epsilon(1e-12));
  }

  // A globally continuous u_h equal to u_ex has no jump contributions.
  auto harmonic = harmonic_quadratic_case();
  DiscreteSolution exact = zero;
  exact.coefficients = space->project(harmonic.exact->value);
  const auto re = compute_errors(exact, harmonic, FormKind::DarSip, 100.0);
  CHECK(re.l2_error <= 1e-8);
  CHECK(re.vh_error <= 1e-8);

  auto no_exact = coeffs;
  no_exact.exact.reset();
  CHECK_THROWS_AS(compute_errors(zero, no_exact, FormKind::ArUpwind, 0.0), std::invalid_argument);
}

TEST_CASE("EOC estimation") {
  auto r = estimate_eoc({{1.0, 1.0}, {0.5, 0.25}});
  CHECK(r.slope == doctest::Approx(2.0));
  CHECK(r.steps.size() == 1);
  CHECK(estimate_eoc({{1.0, 0.3}, {0.5, 0.3}, {0.25, 0.3}}).slope == doctest::Approx(0.0));
  std::vector<std::pair<double, double>> s;
  for (double h : {0.5, 0.25, 0.125, 0.0625}) s.emplace_back(h, 3.0 * std::pow(h, 4.5));
  r = estimate_eoc(s);
  CHECK(std::abs(r.slope - 4.5) < 1e-12);
  for (double step : r.steps) CHECK(std::abs(step - 4.5) < 1e-12);
  CHECK_THROWS_AS(estimate_eoc({{1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(estimate_eoc({{1.0, 1.0}, {0.5, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(estimate_eoc({{0.5, 1.0}, {1.0, 0.5}}), std::invalid_argument);
}

TEST_CASE("diagnostics") {
  const auto report =
      run_diagnostics(make_space(4, 3), OperatorKind::Ar, builtin_case("AR_EXAMPLE"));
  CHECK(report.rho_max <= 1e-10);
  REQUIRE(report.dim_table.size() == 1);
  CHECK(report.dim_table[0].n == 10);
  CHECK(report.dim_table[0].n_trefftz == 4);
  CHECK(report.dim_table[0].dim_test == 6);
  CHECK(report.dim_table[0].elements == 32);
  CHECK(report.block_equivalence_gap >= 0.0);
  CHECK(report.block_equivalence_gap <= 1e-8);
  CHECK(report.downgraded_elements == 0);

  // Local stability is roughly mesh independent.
  for (const auto& [kind, name] :
       {std::pair{OperatorKind::Ar, "AR_EXAMPLE"}, std::pair{OperatorKind::Dar, "DAR_EXAMPLE"},
        std::pair{OperatorKind::DarBox, "BOX_DIFFUSION_2D"},
        std::pair{OperatorKind::QtDiffusion, "QT_DIFFUSION"}}) {
    DiagnosticsOptions opt;
    opt.compute_block_gap = false;
    double lo = 1e300, hi = 0.0;
    for (int n : {4, 8, 16}) {
      const double s = run_diagnostics(make_space(n, 3), kind, builtin_case(name), opt).sigma_min_rel;
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    CHECK(hi < 5.0 * lo);
  }
}
