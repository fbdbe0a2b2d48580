#include "tsd/solver.hpp"

#include <doctest.h>

#include "test_util.hpp"
#include "tsd/synth.hpp"

#include <cmath>

using namespace tsd;
using tsd_test::random_laplacian;
using tsd_test::random_matrix;
using tsd_test::random_vector;
using tsd_test::zero_laplacian;

namespace {

AdmmState random_state(int n, int m, int k, std::mt19937_64& rng) {
  AdmmState st = AdmmState::init(random_matrix(k, m, rng, 0.0, 1.0),
                                 random_matrix(n, k, rng, 0.0, 1.0), k);
  st.w = random_vector(k, rng);
  st.z_w = random_vector(k, rng);
  st.u_w = random_vector(k, rng, -0.2, 0.2);
  st.z_d1 = random_matrix(k, m, rng, 0.0, 1.0);
  st.z_d2 = random_matrix(k, m, rng);
  st.u_d1 = random_matrix(k, m, rng, -0.2, 0.2);
  st.u_d2 = random_matrix(k, m, rng, -0.2, 0.2);
  st.z_a1 = random_matrix(n, k, rng, 0.0, 1.0);
  st.z_a2 = random_matrix(n, k, rng);
  st.u_a1 = random_matrix(n, k, rng, -0.2, 0.2);
  st.u_a2 = random_matrix(n, k, rng, -0.2, 0.2);
  return st;
}

Hyperparams random_lambdas(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> weight(0.01, 0.5);
  Hyperparams h;
  h.lambda_x = weight(rng);
  h.lambda_w_l1 = weight(rng);
  h.lambda_w_l2 = weight(rng);
  h.lambda_a_l1 = weight(rng);
  h.lambda_a_l2 = weight(rng);
  h.lambda_d_l1 = weight(rng);
  h.lambda_d_l2 = weight(rng);
  h.lambda_s = weight(rng);
  h.lambda_t = weight(rng);
  h.rho_w = h.rho_d1 = h.rho_d2 = h.rho_a1 = h.rho_a2 = weight(rng);
  return h;
}

// Augmented-Lagrangian subobjectives in scaled-dual form, written out
// independently of the solver.
double aug_w(const Vector& w, const Vector& z, const Vector& u,
             const Matrix& a, const Vector& y, const Hyperparams& h) {
  return 0.5 * (a * w - y).squaredNorm() + h.lambda_w_l1 * z.lpNorm<1>() +
         0.5 * h.lambda_w_l2 * w.squaredNorm() +
         0.5 * h.rho_w * (w - z + u).squaredNorm();
}

double aug_d(const Matrix& d, const Matrix& z1, const Matrix& z2,
             const Matrix& u1, const Matrix& u2, const Matrix& a,
             const Matrix& x, const Hyperparams& h) {
  return 0.5 * h.lambda_x * (a * d - x).squaredNorm() +
         h.lambda_d_l1 * z2.lpNorm<1>() + 0.5 * h.lambda_d_l2 * d.squaredNorm() +
         0.5 * h.rho_d1 * (d - z1 + u1).squaredNorm() +
         0.5 * h.rho_d2 * (d - z2 + u2).squaredNorm();
}

double aug_a(const Matrix& a, const Matrix& z1, const Matrix& z2,
             const Matrix& u1, const Matrix& u2, const Matrix& d,
             const Vector& w, const Matrix& x, const Vector& y,
             const GraphLaplacian& ls, const GraphLaplacian& lt,
             const Hyperparams& h) {
  return 0.5 * (a * w - y).squaredNorm() +
         0.5 * h.lambda_x * (a * d - x).squaredNorm() +
         h.lambda_a_l1 * z2.lpNorm<1>() + 0.5 * h.lambda_a_l2 * a.squaredNorm() +
         h.lambda_s * laplacian_quadratic(ls, a) +
         h.lambda_t * laplacian_quadratic(lt, a) +
         0.5 * h.rho_a1 * (a - z1 + u1).squaredNorm() +
         0.5 * h.rho_a2 * (a - z2 + u2).squaredNorm();
}

}  // namespace

TEST_CASE("soft_threshold: shrink, dead zone, identity") {
  CHECK(soft_threshold(3.0, 1.0) == 2.0);
  CHECK(soft_threshold(-0.5, 1.0) == 0.0);
  CHECK(soft_threshold(-3.0, 1.0) == -2.0);
  CHECK(soft_threshold(1.25, 0.0) == 1.25);
  Matrix m(1, 3);
  m << 2.0, -0.1, -5.0;
  Matrix out = soft_threshold(m, 1.0);
  CHECK(out(0, 0) == 1.0);
  CHECK(out(0, 1) == 0.0);
  CHECK(out(0, 2) == -4.0);
}

TEST_CASE("update_w: identity design with vanishing rho recovers y") {
  const int k = 3;
  AdmmState st = AdmmState::init(Matrix::Zero(k, 2), Matrix::Zero(k, k), k);
  Hyperparams h;
  h.rho_w = 1e-9;
  Matrix a = Matrix::Identity(k, k);
  Vector y(k);
  y << 1.0, -2.0, 0.5;
  update_w(st, a, y, h);
  CHECK((st.w - y).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("update_w: zero data keeps W at zero") {
  const int k = 2;
  AdmmState st = AdmmState::init(Matrix::Zero(k, 2), Matrix::Zero(4, k), k);
  Hyperparams h;
  std::mt19937_64 rng(2);
  Matrix a = random_matrix(4, k, rng);
  update_w(st, a, Vector::Zero(4), h);
  CHECK(st.w.isZero(0.0));
}

TEST_CASE("update_w: matches a dense normal-equation oracle within 1e-10") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 5; ++rep) {
    const int n = 8, k = 2;
    AdmmState st = random_state(n, 3, k, rng);
    Hyperparams h = random_lambdas(rng);
    Matrix a = random_matrix(n, k, rng);
    Vector y = random_vector(n, rng);
    Vector z = st.z_w, u = st.u_w;
    update_w(st, a, y, h);
    Matrix sys = a.transpose() * a +
                 (h.lambda_w_l2 + h.rho_w) * Matrix::Identity(k, k);
    Vector rhs = a.transpose() * y + h.rho_w * (z - u);
    Vector oracle = sys.fullPivLu().solve(rhs);
    CHECK((st.w - oracle).norm() <= 1e-10 * (1.0 + oracle.norm()));
  }
}

TEST_CASE("update_d: zero data and auxiliaries give zero D") {
  const int k = 2, m = 4, n = 5;
  std::mt19937_64 rng(5);
  AdmmState st = AdmmState::init(Matrix::Zero(k, m), Matrix::Zero(n, k), k);
  Hyperparams h;
  Matrix a = random_matrix(n, k, rng);
  update_d(st, a, Matrix::Zero(n, m), h);
  CHECK(st.d.isZero(0.0));
}

TEST_CASE("update_d: nonneg auxiliary clamps negative entries to zero") {
  const int k = 1, m = 3, n = 4;
  AdmmState st = AdmmState::init(Matrix::Zero(k, m), Matrix::Zero(n, k), k);
  Hyperparams h;
  h.lambda_x = 1.0;
  Matrix a = Matrix::Ones(n, k);
  Matrix x(n, m);
  x << -1.0, 1.0, -2.0,
       -1.0, 1.0, -2.0,
       -1.0, 1.0, -2.0,
       -1.0, 1.0, -2.0;
  update_d(st, a, x, h);
  CHECK(st.d(0, 0) < 0.0);  // the unconstrained solve goes negative
  CHECK(st.z_d1(0, 0) == 0.0);
  CHECK(st.z_d1(0, 1) > 0.0);
  CHECK(st.z_d1(0, 2) == 0.0);
}

TEST_CASE("update_d: recovers the true dictionary on noiseless data") {
  std::mt19937_64 rng(7);
  const int n = 50, k = 3, m = 6;
  Matrix a = random_matrix(n, k, rng, 0.1, 1.0);  // full column rank w.h.p.
  Matrix d_true = random_matrix(k, m, rng, 0.0, 2.0);
  Matrix x = a * d_true;
  Hyperparams h;
  h.lambda_x = 1.0;
  h.lambda_d_l1 = 1e-8;
  h.lambda_d_l2 = 1e-8;
  AdmmState st = AdmmState::init(Matrix::Zero(k, m), a, k);
  for (int iter = 0; iter < 500; ++iter) update_d(st, a, x, h);
  CHECK((st.d - d_true).norm() <= 1e-4 * d_true.norm());
}

TEST_CASE("update_a: zero right-hand side gives zero A") {
  const int n = 5, k = 2, m = 3;
  std::mt19937_64 rng(11);
  AdmmState st = AdmmState::init(random_matrix(k, m, rng), Matrix::Zero(n, k), k);
  st.a = random_matrix(n, k, rng);  // nonzero start; solve must still land on 0
  Hyperparams h;
  h.lambda_s = 0.3;
  GraphLaplacian ls = random_laplacian(n, rng);
  update_a(st, st.d, Vector::Zero(k), Matrix::Zero(n, m), Vector::Zero(n), ls,
           zero_laplacian(n), h);
  CHECK(st.a.norm() <= 1e-12);
}

TEST_CASE("update_a: no graph terms reduce to row-wise ridge systems") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 5; ++rep) {
    const int n = 7, k = 3, m = 5;
    AdmmState st = random_state(n, m, k, rng);
    Hyperparams h = random_lambdas(rng);
    h.lambda_s = 0.0;
    h.lambda_t = 0.0;
    Matrix d = random_matrix(k, m, rng);
    Vector w = random_vector(k, rng);
    Matrix x = random_matrix(n, m, rng);
    Vector y = random_vector(n, rng);
    Matrix z1 = st.z_a1, z2 = st.z_a2, u1 = st.u_a1, u2 = st.u_a2;
    update_a(st, d, w, x, y, zero_laplacian(n), zero_laplacian(n), h);

    Matrix m_right = w * w.transpose() + h.lambda_x * (d * d.transpose()) +
                     (h.lambda_a_l2 + h.rho_a1 + h.rho_a2) * Matrix::Identity(k, k);
    Matrix rhs = y * w.transpose() + h.lambda_x * (x * d.transpose()) +
                 h.rho_a1 * (z1 - u1) + h.rho_a2 * (z2 - u2);
    for (int i = 0; i < n; ++i) {
      Vector row = m_right.fullPivLu().solve(rhs.row(i).transpose());
      CHECK((st.a.row(i).transpose() - row).norm() <= 1e-8 * (1.0 + row.norm()));
    }
  }
}

TEST_CASE("update_a: matches the Kronecker-vectorized dense solve") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 5; ++rep) {
    const int n = 4, k = 2, m = 3;
    AdmmState st = random_state(n, m, k, rng);
    Hyperparams h = random_lambdas(rng);
    h.lambda_a_l2 += 0.5;  // keep the rotated systems well conditioned
    Matrix d = random_matrix(k, m, rng);
    Vector w = random_vector(k, rng);
    Matrix x = random_matrix(n, m, rng);
    Vector y = random_vector(n, rng);
    GraphLaplacian ls = random_laplacian(n, rng, 0.7);
    GraphLaplacian lt = random_laplacian(n, rng, 0.7);
    Matrix z1 = st.z_a1, z2 = st.z_a2, u1 = st.u_a1, u2 = st.u_a2;
    update_a(st, d, w, x, y, ls, lt, h);

    Matrix m_right = w * w.transpose() + h.lambda_x * (d * d.transpose()) +
                     (h.lambda_a_l2 + h.rho_a1 + h.rho_a2) * Matrix::Identity(k, k);
    Matrix lap = 2.0 * h.lambda_s * Matrix(ls.laplacian) +
                 2.0 * h.lambda_t * Matrix(lt.laplacian);
    Matrix rhs = y * w.transpose() + h.lambda_x * (x * d.transpose()) +
                 h.rho_a1 * (z1 - u1) + h.rho_a2 * (z2 - u2);

    // vec(lap A + A m_right) = (I (x) lap + m_right' (x) I) vec(A),
    // column-major vec.
    Matrix big = Matrix::Zero(n * k, n * k);
    for (int c = 0; c < k; ++c) big.block(c * n, c * n, n, n) = lap;
    for (int c1 = 0; c1 < k; ++c1) {
      for (int c2 = 0; c2 < k; ++c2) {
        big.block(c2 * n, c1 * n, n, n) +=
            m_right(c1, c2) * Matrix::Identity(n, n);
      }
    }
    Vector vec_rhs(n * k);
    for (int c = 0; c < k; ++c) vec_rhs.segment(c * n, n) = rhs.col(c);
    Vector vec_a = big.fullPivLu().solve(vec_rhs);
    Matrix oracle(n, k);
    for (int c = 0; c < k; ++c) oracle.col(c) = vec_a.segment(c * n, n);
    CHECK((st.a - oracle).norm() <= 1e-8 * (1.0 + oracle.norm()));
  }
}

TEST_CASE("block updates never increase their augmented subobjective") {
  std::mt19937_64 rng(19);
  for (int rep = 0; rep < 8; ++rep) {
    const int n = 9, k = 3, m = 5;
    AdmmState st = random_state(n, m, k, rng);
    Hyperparams h = random_lambdas(rng);
    Matrix x = random_matrix(n, m, rng, 0.0, 1.0);
    Vector y = random_vector(n, rng);
    GraphLaplacian ls = random_laplacian(n, rng);
    GraphLaplacian lt = random_laplacian(n, rng);

    {
      Vector w0 = st.w, z0 = st.z_w, u0 = st.u_w;
      double before = aug_w(w0, z0, u0, st.a, y, h);
      update_w(st, st.a, y, h);
      double after_solve = aug_w(st.w, z0, u0, st.a, y, h);
      double after_prox = aug_w(st.w, st.z_w, u0, st.a, y, h);
      CHECK(after_solve <= before + 1e-10);
      CHECK(after_prox <= after_solve + 1e-10);
    }
    {
      Matrix d0 = st.d, z1 = st.z_d1, z2 = st.z_d2, u1 = st.u_d1, u2 = st.u_d2;
      double before = aug_d(d0, z1, z2, u1, u2, st.a, x, h);
      update_d(st, st.a, x, h);
      double after_solve = aug_d(st.d, z1, z2, u1, u2, st.a, x, h);
      double after_prox = aug_d(st.d, st.z_d1, st.z_d2, u1, u2, st.a, x, h);
      CHECK(after_solve <= before + 1e-10);
      CHECK(after_prox <= after_solve + 1e-10);
      CHECK((st.z_d1.array() >= 0.0).all());
    }
    {
      Matrix a0 = st.a, z1 = st.z_a1, z2 = st.z_a2, u1 = st.u_a1, u2 = st.u_a2;
      double before = aug_a(a0, z1, z2, u1, u2, st.d, st.w, x, y, ls, lt, h);
      update_a(st, st.d, st.w, x, y, ls, lt, h);
      double after_solve = aug_a(st.a, z1, z2, u1, u2, st.d, st.w, x, y, ls, lt, h);
      double after_prox =
          aug_a(st.a, st.z_a1, st.z_a2, u1, u2, st.d, st.w, x, y, ls, lt, h);
      CHECK(after_solve <= before + 1e-10);
      CHECK(after_prox <= after_solve + 1e-10);
      CHECK((st.z_a1.array() >= 0.0).all());
    }
  }
}

TEST_CASE("analytic block gradients agree with central finite differences") {
  std::mt19937_64 rng(23);
  const double step = 1e-6;
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 6, k = 2, m = 4;
    AdmmState st = random_state(n, m, k, rng);
    Hyperparams h = random_lambdas(rng);
    Matrix x = random_matrix(n, m, rng, 0.0, 1.0);
    Vector y = random_vector(n, rng);
    GraphLaplacian ls = random_laplacian(n, rng);
    GraphLaplacian lt = random_laplacian(n, rng);

    auto check_close = [&](double analytic, double fd) {
      CHECK(std::abs(analytic - fd) <= 1e-4 * (1.0 + std::abs(fd)));
    };

    // Smooth part only: the l1 terms live at the auxiliaries, so the
    // differentiated functions drop them.
    Vector gw = grad_w_subobjective(st.w, st.a, y, h, st.z_w, st.u_w);
    for (int j = 0; j < k; ++j) {
      Vector hi = st.w, lo = st.w;
      hi[j] += step;
      lo[j] -= step;
      auto f = [&](const Vector& w) {
        return 0.5 * (st.a * w - y).squaredNorm() +
               0.5 * h.lambda_w_l2 * w.squaredNorm() +
               0.5 * h.rho_w * (w - st.z_w + st.u_w).squaredNorm();
      };
      check_close(gw[j], (f(hi) - f(lo)) / (2.0 * step));
    }

    Matrix gd = grad_d_subobjective(st.d, st.a, x, h, st.z_d1, st.u_d1, st.z_d2,
                                    st.u_d2);
    for (int idx = 0; idx < 4; ++idx) {
      int r = int(rng() % k), c = int(rng() % m);
      Matrix hi = st.d, lo = st.d;
      hi(r, c) += step;
      lo(r, c) -= step;
      auto f = [&](const Matrix& d) {
        return 0.5 * h.lambda_x * (st.a * d - x).squaredNorm() +
               0.5 * h.lambda_d_l2 * d.squaredNorm() +
               0.5 * h.rho_d1 * (d - st.z_d1 + st.u_d1).squaredNorm() +
               0.5 * h.rho_d2 * (d - st.z_d2 + st.u_d2).squaredNorm();
      };
      check_close(gd(r, c), (f(hi) - f(lo)) / (2.0 * step));
    }

    Matrix ga = grad_a_subobjective(st.a, st.d, st.w, x, y, ls, lt, h, st.z_a1,
                                    st.u_a1, st.z_a2, st.u_a2);
    for (int idx = 0; idx < 4; ++idx) {
      int r = int(rng() % n), c = int(rng() % k);
      Matrix hi = st.a, lo = st.a;
      hi(r, c) += step;
      lo(r, c) -= step;
      auto f = [&](const Matrix& a) {
        return 0.5 * (a * st.w - y).squaredNorm() +
               0.5 * h.lambda_x * (a * st.d - x).squaredNorm() +
               0.5 * h.lambda_a_l2 * a.squaredNorm() +
               h.lambda_s * laplacian_quadratic(ls, a) +
               h.lambda_t * laplacian_quadratic(lt, a) +
               0.5 * h.rho_a1 * (a - st.z_a1 + st.u_a1).squaredNorm() +
               0.5 * h.rho_a2 * (a - st.z_a2 + st.u_a2).squaredNorm();
      };
      check_close(ga(r, c), (f(hi) - f(lo)) / (2.0 * step));
    }
  }
}

TEST_CASE("farthest_point_rows: deterministic, distinct, lowest-index ties") {
  Matrix x(4, 1);
  x << 1.0, 1.0, 1.0, 1.0;
  auto first = farthest_point_rows(x, 3, 9);
  auto second = farthest_point_rows(x, 3, 9);
  CHECK(first == second);
  std::vector<int> sorted = first;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  CHECK_THROWS_AS(farthest_point_rows(x, 5, 0), InputError);
}

TEST_CASE("fit: recovers sources from noiseless synthetic data") {
  SynthSpec spec;
  spec.n_samples = 200;
  spec.n_analytes = 12;
  spec.k_sources = 3;
  spec.noise_std = 0.0;
  spec.seed = 101;
  SynthData data = generate(spec);

  Hyperparams h;
  h.k_sources = 3;
  h.lambda_x = 1.0;
  h.lambda_w_l2 = 1e-4;
  h.lambda_a_l2 = 1e-4;
  h.lambda_d_l2 = 1e-4;
  h.rho_w = h.rho_d1 = h.rho_d2 = h.rho_a1 = h.rho_a2 = 0.5;
  h.max_iters = 300;
  h.tol = 1e-8;
  h.seed = 7;

  auto [model, report] = fit(data.dataset, h, zero_laplacian(spec.n_samples),
                             zero_laplacian(spec.n_samples));
  SourceMatch match = match_sources(model.D, data.d_true);
  CHECK(match.mean_similarity >= 0.95);
  CHECK(report.objective_trace.back() <= report.objective_trace.front());
}

TEST_CASE("fit: overwhelming regularization drives everything to zero") {
  SynthSpec spec;
  spec.n_samples = 30;
  spec.n_analytes = 6;
  spec.k_sources = 2;
  spec.noise_std = 0.0;
  spec.seed = 3;
  SynthData data = generate(spec);

  Hyperparams h;
  h.k_sources = 2;
  h.lambda_x = 0.0;
  h.lambda_w_l1 = h.lambda_w_l2 = 1e6;
  h.lambda_a_l1 = h.lambda_a_l2 = 1e6;
  h.lambda_d_l1 = h.lambda_d_l2 = 1e6;
  h.max_iters = 50;
  auto [model, report] = fit(data.dataset, h, zero_laplacian(30), zero_laplacian(30));
  CHECK(model.A.lpNorm<Eigen::Infinity>() <= 1e-3);
  CHECK(model.D.lpNorm<Eigen::Infinity>() <= 1e-3);
  CHECK(model.W.lpNorm<Eigen::Infinity>() <= 1e-3);
  CHECK((model.A * model.W).lpNorm<Eigen::Infinity>() <= 1e-3);
}

namespace {

// Test-side projected coordinate descent for min_{v>=0} 1/2 v'Gv - c'v.
void oracle_nnls(const Matrix& gram, const Vector& lin, Vector& v, int sweeps) {
  for (int s = 0; s < sweeps; ++s) {
    for (int j = 0; j < v.size(); ++j) {
      double denom = gram(j, j);
      if (denom <= 0.0) {
        v[j] = 0.0;
        continue;
      }
      double cross = gram.col(j).dot(v) - denom * v[j];
      v[j] = std::max(0.0, (lin[j] - cross) / denom);
    }
  }
}

}  // namespace

TEST_CASE("fit: objective agrees with an alternating-NNLS oracle within 1%") {
  SynthSpec spec;
  spec.n_samples = 40;
  spec.n_analytes = 8;
  spec.k_sources = 2;
  spec.noise_std = 0.05;
  spec.seed = 31;
  SynthData data = generate(spec);
  const Matrix& x = data.dataset.features;
  const Vector& y = data.dataset.target;
  const int n = spec.n_samples, k = 2;

  Hyperparams h;
  h.k_sources = k;
  h.lambda_x = 1.0;
  h.lambda_w_l2 = 1e-3;
  h.lambda_a_l2 = 1e-3;
  h.lambda_d_l2 = 1e-3;
  h.rho_w = h.rho_d1 = h.rho_d2 = h.rho_a1 = h.rho_a2 = 0.5;
  h.max_iters = 400;
  h.tol = 1e-10;
  h.seed = 5;

  GraphLaplacian none = zero_laplacian(n);
  auto [model, report] = fit(data.dataset, h, none, none);
  double f_admm = objective(x, y, model, h, none, none);

  // Oracle: same init, alternating ridge W / NNLS D columns / NNLS A rows.
  auto anchor = farthest_point_rows(x, k, h.seed);
  Matrix d = Matrix::Zero(k, x.cols());
  for (int j = 0; j < k; ++j) d.row(j) = x.row(anchor[j]);
  Matrix a = Matrix::Zero(n, k);
  Vector w = Vector::Zero(k);
  for (int iter = 0; iter < 300; ++iter) {
    Matrix sys = a.transpose() * a + h.lambda_w_l2 * Matrix::Identity(k, k);
    sys.diagonal().array() += 1e-12;
    w = sys.ldlt().solve(a.transpose() * y);
    {
      Matrix gram = h.lambda_x * (a.transpose() * a) +
                    h.lambda_d_l2 * Matrix::Identity(k, k);
      for (int c = 0; c < x.cols(); ++c) {
        Vector col = d.col(c);
        oracle_nnls(gram, h.lambda_x * (a.transpose() * x.col(c)), col, 30);
        d.col(c) = col;
      }
    }
    {
      Matrix gram = w * w.transpose() + h.lambda_x * (d * d.transpose()) +
                    h.lambda_a_l2 * Matrix::Identity(k, k);
      for (int i = 0; i < n; ++i) {
        Vector row = a.row(i).transpose();
        oracle_nnls(gram, y[i] * w + h.lambda_x * (d * x.row(i).transpose()),
                    row, 30);
        a.row(i) = row.transpose();
      }
    }
  }
  double f_anls = objective(x, y, Factorization{d, a, w}, h, none, none);
  CHECK(f_admm <= 1.01 * f_anls);
  CHECK(f_admm >= 0.99 * f_anls - 1e-9);
}
