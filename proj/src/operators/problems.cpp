#include "bvi/problems.hpp"

#include <cmath>
#include <memory>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "bvi/errors.hpp"
#include "bvi/random.hpp"

namespace bvi {

Problem make_power_norm_problem(Index n, int p, double alpha) {
  if (n <= 0) throw InvalidArgument("power-norm: n must be positive");
  if (p < 2) throw InvalidArgument("power-norm: p must be an integer >= 2");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("power-norm: alpha must be positive");

  const double pd = static_cast<double>(p);
  const double mu = (pd - 1.0) / ((2.0 * pd - 1.0) * std::pow(std::sqrt(static_cast<double>(n)) * alpha, pd));
  auto eval = [pd](const Vector& x) -> Vector {
    const double r = x.norm();
    if (r == 0.0) return Vector::Zero(x.size());
    return std::pow(r, pd - 2.0) * x;
  };
  return Problem{
      .id = "power-norm",
      .op = VIOperator(n, eval, {.mu = mu, .M = 1.0, .L = std::nullopt}),
      .prox = ProxFunction::power(n, pd),
      .set = FeasibleSet::box(n, alpha),
      .solution = Vector::Zero(n),
      .objective = [pd](const Vector& x) { return std::pow(x.norm(), pd) / pd; },
      .saddle = std::nullopt,
  };
}

Problem make_quartic_problem(const QuarticData& data) {
  const Index n = data.E.rows();
  if (n <= 0) throw InvalidArgument("quartic: matrices must be non-empty");
  for (const Matrix* m : {&data.E, &data.A, &data.C}) {
    if (m->rows() != n || m->cols() != n) throw InvalidArgument("quartic: E, A, C must be square of equal size");
  }
  if (data.b.size() != n || data.d.size() != n) throw InvalidArgument("quartic: b and d must have dimension n");
  if (!data.E.allFinite() || !data.A.allFinite() || !data.C.allFinite() || !data.b.allFinite() ||
      !data.d.allFinite()) {
    throw InvalidArgument("quartic: non-finite input");
  }

  const Eigen::JacobiSVD<Matrix> svd_e(data.E), svd_a(data.A), svd_c(data.C);
  const double norm_e = svd_e.singularValues()(0);
  const double norm_a = svd_a.singularValues()(0);
  const double norm_c = svd_c.singularValues()(0);
  const double sigma_e = svd_e.singularValues()(n - 1);
  const double sigma_c = svd_c.singularValues()(n - 1);
  if (!(sigma_e > 0.0) || !(sigma_c > 0.0)) throw InvalidArgument("quartic: E and C must be nonsingular");
  const double nb = data.b.norm();

  const double L = 3.0 * std::pow(norm_e, 4) + 3.0 * std::pow(norm_a, 4) + 6.0 * std::pow(norm_a, 3) * nb +
                   3.0 * norm_a * norm_a * nb * nb + norm_c * norm_c;
  const double mu = std::min(std::pow(sigma_e, 4) / 3.0, sigma_c * sigma_c);

  auto shared = std::make_shared<const QuarticData>(data);
  auto eval = [shared](const Vector& x) -> Vector {
    const auto& q = *shared;
    const Vector ex = q.E * x;
    const Vector r = q.A * x - q.b;
    return ex.squaredNorm() * (q.E.transpose() * ex) + q.A.transpose() * r.array().cube().matrix() +
           q.C.transpose() * (q.C * x - q.d);
  };
  auto objective = [shared](const Vector& x) {
    const auto& q = *shared;
    const double e2 = (q.E * x).squaredNorm();
    const Vector r = q.A * x - q.b;
    return 0.25 * e2 * e2 + 0.25 * r.array().pow(4).sum() + 0.5 * (q.C * x - q.d).squaredNorm();
  };

  std::optional<Vector> solution;
  if (data.b.isZero(0.0) && data.d.isZero(0.0)) solution = Vector::Zero(n);

  return Problem{
      .id = "quartic",
      .op = VIOperator(n, eval, {.mu = mu, .M = std::nullopt, .L = L}),
      .prox = ProxFunction::quartic(n),
      .set = FeasibleSet::whole_space(n),
      .solution = solution,
      .objective = objective,
      .saddle = std::nullopt,
  };
}

namespace {

Matrix normal_matrix(Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

Vector normal_vector(Rng& rng, Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

// Random symmetric matrix with unit spectral norm.
Matrix unit_symmetric(Rng& rng, Index n) {
  for (;;) {
    const Matrix g = normal_matrix(rng, n, n);
    Matrix s = 0.5 * (g + g.transpose());
    const Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
    const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
    if (norm > 1e-12) return s / norm;
  }
}

}  // namespace

ErmProblem make_erm_problem(const ErmSpec& spec) {
  const Index n = spec.dimension;
  const Index m = spec.machines;
  if (n <= 0 || m <= 0) throw InvalidArgument("erm: dimension and machine count must be positive");
  if (!(spec.delta > 0.0) || !std::isfinite(spec.delta)) throw InvalidArgument("erm: delta must be positive");
  if (!(spec.mu_base > 0.0) || !std::isfinite(spec.mu_base)) throw InvalidArgument("erm: mu_base must be positive");

  Rng rng = Rng::stream(spec.seed, "problem-gen");

  // Mean Hessian with spectrum in [mu_base, 4 mu_base], smallest eigenvalue exact.
  const Eigen::HouseholderQR<Matrix> qr(normal_matrix(rng, n, n));
  const Matrix q = qr.householderQ();
  Vector lambda(n);
  lambda[0] = spec.mu_base;
  for (Index i = 1; i < n; ++i) lambda[i] = spec.mu_base * (1.0 + 3.0 * rng.uniform());
  Matrix a_bar = q * lambda.asDiagonal() * q.transpose();
  a_bar = 0.5 * (a_bar + a_bar.transpose());

  // Antithetic perturbations +-delta S keep the average Hessian equal to a_bar.
  std::vector<Matrix> hessians;
  std::vector<Vector> linear_terms;
  hessians.reserve(static_cast<std::size_t>(m));
  for (Index j = 0; j + 1 < m; j += 2) {
    const Matrix s = spec.delta * unit_symmetric(rng, n);
    hessians.push_back(a_bar + s);
    hessians.push_back(a_bar - s);
  }
  if (m % 2 == 1) hessians.push_back(a_bar);
  for (Index j = 0; j < m; ++j) linear_terms.push_back(normal_vector(rng, n));

  Matrix h_mean = Matrix::Zero(n, n);
  Vector b_mean = Vector::Zero(n);
  for (Index j = 0; j < m; ++j) {
    h_mean += hessians[static_cast<std::size_t>(j)];
    b_mean += linear_terms[static_cast<std::size_t>(j)];
  }
  h_mean /= static_cast<double>(m);
  b_mean /= static_cast<double>(m);
  const Eigen::LDLT<Matrix> mean_solver(h_mean);
  if (mean_solver.info() != Eigen::Success || !mean_solver.isPositive()) {
    throw NumericalFailure("erm: synthesized mean Hessian is not positive definite", 0.0);
  }
  const Vector x_star = mean_solver.solve(b_mean);

  struct Data {
    std::vector<Matrix> hessians;
    std::vector<Vector> linear_terms;
    Matrix h;  // Hessian of d
    Vector b1;
    Eigen::LDLT<Matrix> h_solver;
  };
  auto data = std::make_shared<Data>();
  data->hessians = hessians;
  data->linear_terms = linear_terms;
  data->h = hessians.front() + spec.delta * Matrix::Identity(n, n);
  data->b1 = linear_terms.front();
  data->h_solver.compute(data->h);
  std::shared_ptr<const Data> shared = data;

  const Eigen::SelfAdjointEigenSolver<Matrix> h_eig(shared->h, Eigen::EigenvaluesOnly);
  const double h_min = h_eig.eigenvalues()(0);
  const double h_max = h_eig.eigenvalues()(n - 1);

  ProxFunction::CustomSpec prox_spec{
      .dimension = n,
      .value = [shared](const Vector& x) { return 0.5 * x.dot(shared->h * x) - shared->b1.dot(x); },
      .gradient = [shared](const Vector& x) -> Vector { return shared->h * x - shared->b1; },
      .inverse_gradient = [shared](const Vector& y) -> Vector { return shared->h_solver.solve(y + shared->b1); },
      .omega = h_max + 2.0 * shared->b1.norm(),
      .strong_convexity = h_min,
  };

  const double md = static_cast<double>(m);
  auto eval = [shared, md](const Vector& x) -> Vector {
    Vector g = Vector::Zero(x.size());
    for (std::size_t j = 0; j < shared->hessians.size(); ++j) {
      g += shared->hessians[j] * x - shared->linear_terms[j];
    }
    return g / md;
  };
  auto objective = [shared, md](const Vector& x) {
    double v = 0.0;
    for (std::size_t j = 0; j < shared->hessians.size(); ++j) {
      v += 0.5 * x.dot(shared->hessians[j] * x) - shared->linear_terms[j].dot(x);
    }
    return v / md;
  };

  const double mu_rel = spec.mu_base / (spec.mu_base + 2.0 * spec.delta);
  ErmProblem out{
      .problem =
          Problem{
              .id = "erm",
              .op = VIOperator(n, eval, {.mu = mu_rel, .M = std::nullopt, .L = 1.0}),
              .prox = ProxFunction::custom(std::move(prox_spec)),
              .set = FeasibleSet::whole_space(n),
              .solution = x_star,
              .objective = objective,
              .saddle = std::nullopt,
          },
      .relative_smoothness = 1.0,
      .relative_strong_convexity = mu_rel,
      .hessians = std::move(hessians),
      .linear_terms = std::move(linear_terms),
  };
  return out;
}

Problem make_lagrangian_toy(double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("lagrangian-toy: eps must be positive");
  ScalarFunction objective{
      .value = [](const Vector& x) { return x[0] * x[0]; },
      .gradient = [](const Vector& x) -> Vector { return 2.0 * x; },
  };
  ScalarFunction constraint{
      .value = [](const Vector& x) { return x[0] - 0.5; },
      .gradient = [](const Vector& x) -> Vector { return Vector::Ones(x.size()); },
  };
  SaddleProblem sp = make_lagrangian_saddle(objective, {constraint}, eps, FeasibleSet::box(1, 1.0));

  // Jacobian [[2, 1], [-1, 2 eps]]: symmetric part diag(2, 2 eps).
  Matrix jac(2, 2);
  jac << 2.0, 1.0, -1.0, 2.0 * eps;
  const double L = Eigen::JacobiSVD<Matrix>(jac).singularValues()(0);
  auto [op, set] = saddle_operator(sp, {.mu = std::min(2.0, 2.0 * eps), .M = std::nullopt, .L = L});

  return Problem{
      .id = "lagrangian-toy",
      .op = op,
      .prox = ProxFunction::composite({{ProxFunction::euclidean(1), 1.0}, {ProxFunction::euclidean(1), 1.0}}),
      .set = set,
      .solution = Vector::Zero(2),
      .objective = nullptr,
      .saddle = sp,
  };
}

Problem make_bilinear_problem() {
  SaddleProblem sp{
      .value = [](const Vector& u, const Vector& v) { return u[0] * v[0]; },
      .grad_u = [](const Vector&, const Vector& v) -> Vector { return v; },
      .grad_v = [](const Vector& u, const Vector&) -> Vector { return u; },
      .primal_set = FeasibleSet::box(1, 1.0),
      .dual_set = FeasibleSet::box(1, 1.0),
  };
  auto [op, set] = saddle_operator(sp, {.mu = std::nullopt, .M = std::sqrt(2.0), .L = 1.0});
  return Problem{
      .id = "bilinear",
      .op = op,
      .prox = ProxFunction::euclidean(2),
      .set = set,
      .solution = Vector::Zero(2),
      .objective = nullptr,
      .saddle = sp,
  };
}

const std::vector<std::string>& problem_ids() {
  static const std::vector<std::string> ids{"power-norm", "quartic", "erm", "lagrangian-toy", "bilinear"};
  return ids;
}

Problem make_problem(std::string_view id, const ProblemParams& params) {
  if (id == "power-norm") return make_power_norm_problem(params.n, params.p, params.alpha);
  if (id == "quartic") {
    if (params.quartic) return make_quartic_problem(*params.quartic);
    if (params.n <= 0) throw InvalidArgument("quartic: n must be positive");
    const Matrix eye = Matrix::Identity(params.n, params.n);
    return make_quartic_problem({eye, eye, eye, Vector::Zero(params.n), Vector::Zero(params.n)});
  }
  if (id == "erm") {
    return make_erm_problem({.machines = params.m,
                             .dimension = params.n,
                             .delta = params.delta,
                             .mu_base = params.mu_base,
                             .seed = params.seed})
        .problem;
  }
  if (id == "lagrangian-toy") return make_lagrangian_toy(params.eps);
  if (id == "bilinear") return make_bilinear_problem();
  throw InvalidArgument(fmt::format("unknown problem id '{}'", id));
}

}  // namespace bvi
