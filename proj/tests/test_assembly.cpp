#include <doctest.h>

#include <cmath>
#include <random>

#include "bionet/assembly.hpp"
#include "bionet/quadrature.hpp"

using namespace bionet;

namespace {

ScalarField coordinate_field(const TriMesh& mesh, int axis) {
  return mesh.nodes.col(axis);
}

ScalarField affine_field(const TriMesh& mesh, double a, double b, double c) {
  return (a + b * mesh.nodes.col(0).array() + c * mesh.nodes.col(1).array())
      .matrix();
}

double max_abs_entry(const SparseSymMatrix& A) {
  double worst = 0.0;
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseSymMatrix::InnerIterator it(A, k); it; ++it) {
      worst = std::max(worst, std::abs(it.value()));
    }
  }
  return worst;
}

double max_abs_asymmetry(const SparseSymMatrix& A) {
  const SparseSymMatrix At = SparseSymMatrix(A.transpose());
  double worst = 0.0;
  for (int k = 0; k < A.outerSize(); ++k) {
    SparseSymMatrix::InnerIterator a(A, k), b(At, k);
    for (; a && b; ++a, ++b) {
      REQUIRE(a.col() == b.col());
      worst = std::max(worst, std::abs(a.value() - b.value()));
    }
    REQUIRE(!a);
    REQUIRE(!b);
  }
  return worst;
}

TensorField random_tensor_field(const TriMesh& mesh, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 2.0);
  TensorField C = TensorField::Zero(mesh.node_count());
  for (int k = 0; k < mesh.node_count(); ++k) {
    C.c11[k] = dist(rng);
    C.c12[k] = dist(rng);
    C.c22[k] = dist(rng);
  }
  return C;
}

// Exact integral of x^p y^q over the triangle (0,0),(1,0),(0,1):
// p! q! / (p+q+2)!.
double reference_monomial_integral(int p, int q) {
  auto factorial = [](int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
  };
  return factorial(p) * factorial(q) / factorial(p + q + 2);
}

}  // namespace

TEST_CASE("edge-midpoint rule: weights sum to one, exact to degree 2") {
  const QuadratureRule& rule = QuadratureRule::edge_midpoint();
  CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-15));
  for (int q = 0; q < rule.size(); ++q) {
    CHECK(rule.points.row(q).sum() == doctest::Approx(1.0).epsilon(1e-15));
  }
  // On the reference triangle, barycentric (l0,l1,l2) = (1-x-y, x, y).
  for (int p = 0; p + 0 <= rule.degree; ++p) {
    for (int q = 0; p + q <= rule.degree; ++q) {
      double sum = 0.0;
      for (int i = 0; i < rule.size(); ++i) {
        const double x = rule.points(i, 1);
        const double y = rule.points(i, 2);
        sum += rule.weights[i] * std::pow(x, p) * std::pow(y, q);
      }
      // Reference triangle has area 1/2 and normalized weights.
      CHECK(0.5 * sum ==
            doctest::Approx(reference_monomial_integral(p, q)).epsilon(1e-14));
    }
  }
  // Degree 3 is not required to be exact, and indeed is not for x^3.
  double cubic = 0.0;
  for (int i = 0; i < rule.size(); ++i) {
    cubic += rule.weights[i] * std::pow(rule.points(i, 1), 3);
  }
  CHECK(std::abs(0.5 * cubic - reference_monomial_integral(3, 0)) > 1e-6);
}

TEST_CASE("mass matrix entries sum to the domain measure") {
  const TriMesh mesh = build_unit_square_mesh(13);
  const SparseSymMatrix M = assemble_mass(mesh);
  double sum = 0.0;
  for (int k = 0; k < M.outerSize(); ++k) {
    for (SparseSymMatrix::InnerIterator it(M, k); it; ++it) {
      sum += it.value();
    }
  }
  CHECK(std::abs(sum - 1.0) <= 1e-13);

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.node_count());
  CHECK(ones.dot(M * ones) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("mass matrix reproduces the exact single-element values") {
  // On n_div = 1 the entries decompose into per-element area/6 and area/12
  // contributions (element area 1/2).
  const TriMesh mesh = build_unit_square_mesh(1);
  const SparseSymMatrix M = assemble_mass(mesh);
  const double a6 = 0.5 / 6.0;
  const double a12 = 0.5 / 12.0;
  const int sw = mesh.node_index(0, 0);
  const int se = mesh.node_index(1, 0);
  const int ne = mesh.node_index(1, 1);
  const int nw = mesh.node_index(0, 1);
  CHECK(M.coeff(se, se) == doctest::Approx(a6).epsilon(1e-14));       // 1 element
  CHECK(M.coeff(nw, nw) == doctest::Approx(a6).epsilon(1e-14));       // 1 element
  CHECK(M.coeff(sw, sw) == doctest::Approx(2 * a6).epsilon(1e-14));   // 2 elements
  CHECK(M.coeff(ne, ne) == doctest::Approx(2 * a6).epsilon(1e-14));
  CHECK(M.coeff(sw, se) == doctest::Approx(a12).epsilon(1e-14));      // 1 element
  CHECK(M.coeff(sw, ne) == doctest::Approx(2 * a12).epsilon(1e-14));  // shared edge
  CHECK(M.coeff(se, nw) == 0.0);  // opposite corners share no element
}

TEST_CASE("stiffness annihilates constants and integrates |grad x|^2") {
  const TriMesh mesh = build_unit_square_mesh(17);
  const SparseSymMatrix K = assemble_stiffness(mesh);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh.node_count());
  CHECK((K * ones).lpNorm<Eigen::Infinity>() <= 1e-13);

  const ScalarField x = coordinate_field(mesh, 0);
  CHECK(x.dot(K * x) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(max_abs_asymmetry(K) == 0.0);  // bitwise symmetric by construction
}

TEST_CASE("weighted stiffness reduces to the plain one for constant weights") {
  const TriMesh mesh = build_unit_square_mesh(9);
  const SparseSymMatrix K = assemble_stiffness(mesh);

  const TensorField zero = TensorField::Zero(mesh.node_count());
  const SparseSymMatrix K0 = assemble_weighted_stiffness(mesh, zero, 1.0);
  CHECK(max_abs_entry(SparseSymMatrix(K0 - K)) <= 1e-14);

  const TensorField id = TensorField::Identity(mesh.node_count());
  const SparseSymMatrix K1 = assemble_weighted_stiffness(mesh, id, 0.1);
  const SparseSymMatrix scaled = 1.1 * K;
  CHECK(max_abs_entry(SparseSymMatrix(K1 - scaled)) <= 1e-13);
}

TEST_CASE("anisotropic coefficient diag(1,0) weights the two directions") {
  const TriMesh mesh = build_unit_square_mesh(11);
  const double r = 0.35;
  TensorField C = TensorField::Zero(mesh.node_count());
  C.c11.setOnes();
  const SparseSymMatrix A = assemble_weighted_stiffness(mesh, C, r);
  const ScalarField x = coordinate_field(mesh, 0);
  const ScalarField y = coordinate_field(mesh, 1);
  CHECK(x.dot(A * x) == doctest::Approx(1.0 + r).epsilon(1e-12));
  CHECK(y.dot(A * y) == doctest::Approx(r).epsilon(1e-12));
}

TEST_CASE("weighted stiffness decomposes as matrix(C,0) + r*K") {
  const TriMesh mesh = build_unit_square_mesh(7);
  const TensorField C = random_tensor_field(mesh, 42);
  const double r = 0.73;
  const SparseSymMatrix with_r = assemble_weighted_stiffness(mesh, C, r);
  const SparseSymMatrix without_r = assemble_weighted_stiffness(mesh, C, 0.0);
  const SparseSymMatrix K = assemble_stiffness(mesh);
  const SparseSymMatrix recombined = without_r + r * K;
  double scale = 0.0, worst = 0.0;
  for (int k = 0; k < with_r.outerSize(); ++k) {
    for (SparseSymMatrix::InnerIterator it(with_r, k); it; ++it) {
      scale = std::max(scale, std::abs(it.value()));
      worst = std::max(worst,
                       std::abs(it.value() - recombined.coeff(it.row(),
                                                              it.col())));
    }
  }
  CHECK(worst <= 1e-12 * scale);
}

TEST_CASE("assembled matrices are symmetric on random coefficient fields") {
  const TriMesh mesh = build_unit_square_mesh(6);
  for (unsigned seed : {1u, 2u, 3u}) {
    const TensorField C = random_tensor_field(mesh, seed);
    CHECK(max_abs_asymmetry(assemble_weighted_stiffness(mesh, C, 0.01)) == 0.0);
    const auto w = [&](int e, const Eigen::Vector3d& bary,
                       const Eigen::Vector2d&) {
      double v = 0.0;
      for (int i = 0; i < 3; ++i) {
        v += bary[i] * std::abs(C.c11[mesh.elements(e, i)]);
      }
      return v + 0.5;
    };
    CHECK(max_abs_asymmetry(assemble_weighted_mass(mesh, w)) == 0.0);
  }
}

TEST_CASE("weighted mass: unit and constant weights") {
  const TriMesh mesh = build_unit_square_mesh(8);
  const SparseSymMatrix M = assemble_mass(mesh);
  const auto one = [](int, const Eigen::Vector3d&, const Eigen::Vector2d&) {
    return 1.0;
  };
  const SparseSymMatrix M1 = assemble_weighted_mass(mesh, one);
  CHECK(max_abs_entry(SparseSymMatrix(M1 - M)) <= 1e-15);

  const auto five = [](int, const Eigen::Vector3d&, const Eigen::Vector2d&) {
    return 5.0;
  };
  const SparseSymMatrix M5 = assemble_weighted_mass(mesh, five);
  const SparseSymMatrix scaled = 5.0 * M;
  CHECK(max_abs_entry(SparseSymMatrix(M5 - scaled)) <= 1e-14);
}

TEST_CASE("weighted mass rejects non-finite weights") {
  const TriMesh mesh = build_unit_square_mesh(3);
  const auto bad = [](int, const Eigen::Vector3d&, const Eigen::Vector2d&) {
    return std::numeric_limits<double>::infinity();
  };
  CHECK_THROWS_AS(assemble_weighted_mass(mesh, bad), std::domain_error);
}

TEST_CASE("load vector of simple functions") {
  const TriMesh mesh = build_unit_square_mesh(10);
  const Eigen::VectorXd b1 =
      assemble_load(mesh, PointFn([](const Eigen::Vector2d&) { return 1.0; }));
  CHECK(b1.sum() == doctest::Approx(1.0).epsilon(1e-13));

  const Eigen::VectorXd b0 =
      assemble_load(mesh, PointFn([](const Eigen::Vector2d&) { return 0.0; }));
  CHECK(b0.lpNorm<Eigen::Infinity>() == 0.0);

  // Nodal overload agrees with the functional one on affine data.
  const ScalarField f = affine_field(mesh, 0.2, -1.0, 0.5);
  const Eigen::VectorXd ba = assemble_load(mesh, f);
  const Eigen::VectorXd bb = assemble_load(
      mesh, PointFn([](const Eigen::Vector2d& x) {
        return 0.2 - 1.0 * x[0] + 0.5 * x[1];
      }));
  CHECK((ba - bb).lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("element gradients of affine fields are exact") {
  const TriMesh mesh = build_unit_square_mesh(5);
  const auto gx = element_gradients(mesh, coordinate_field(mesh, 0));
  const auto gc = element_gradients(
      mesh, ScalarField::Constant(mesh.node_count(), 3.7));
  const auto ga = element_gradients(mesh, affine_field(mesh, 0.0, 1.0, 2.0));
  for (int e = 0; e < mesh.element_count(); ++e) {
    CHECK(gx(e, 0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gx(e, 1) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(gc(e, 0) == 0.0);
    CHECK(gc(e, 1) == 0.0);
    CHECK(ga(e, 0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ga(e, 1) == doctest::Approx(2.0).epsilon(1e-13));
  }
}

TEST_CASE("gradient product load integrates g_a g_b phi_k") {
  const TriMesh mesh = build_unit_square_mesh(6);
  const ScalarField p = affine_field(mesh, 0.0, 2.0, -3.0);  // grad = (2,-3)
  const auto g = element_gradients(mesh, p);
  const Eigen::VectorXd l01 = assemble_gradient_product_load(mesh, g, 0, 1);
  // sum_k load_k = int g_x g_y = -6.
  CHECK(l01.sum() == doctest::Approx(-6.0).epsilon(1e-12));
  const Eigen::VectorXd l00 = assemble_gradient_product_load(mesh, g, 0, 0);
  CHECK(l00.sum() == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("L2 norms") {
  const TriMesh mesh = build_unit_square_mesh(64);
  const ScalarField ones = ScalarField::Ones(mesh.node_count());
  CHECK(l2_norm(mesh, ones) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(relative_l2_error(mesh, ones, ones) == 0.0);

  const ScalarField x = coordinate_field(mesh, 0);
  CHECK(l2_norm(mesh, x) ==
        doctest::Approx(0.5773502691896257).epsilon(1e-9));

  CHECK_THROWS_AS(
      relative_l2_error(mesh, x, ScalarField::Zero(mesh.node_count())),
      std::domain_error);
}

TEST_CASE("l2_norm agrees with the mass-matrix quadratic form") {
  const TriMesh mesh = build_unit_square_mesh(12);
  const SparseSymMatrix M = assemble_mass(mesh);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  ScalarField u(mesh.node_count());
  for (int k = 0; k < mesh.node_count(); ++k) {
    u[k] = dist(rng);
  }
  const double direct = l2_norm(mesh, u);
  CHECK(direct * direct == doctest::Approx(u.dot(M * u)).epsilon(1e-12));
}

TEST_CASE("mass quadratic form is exact on interpolants of degree-1 data") {
  const TriMesh mesh = build_unit_square_mesh(9);
  const double a = 0.3, b = -1.2, c = 0.7;
  const ScalarField u = affine_field(mesh, a, b, c);
  // int (a + b x + c y)^2 over the unit square.
  const double exact = a * a + b * b / 3.0 + c * c / 3.0 + a * b + a * c +
                       b * c / 2.0;
  const double norm = l2_norm(mesh, u);
  CHECK(norm * norm == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("frobenius norm field") {
  const TriMesh mesh = build_unit_square_mesh(2);
  TensorField C = TensorField::Identity(mesh.node_count());
  ScalarField f = frobenius_norm_field(C);
  for (int k = 0; k < mesh.node_count(); ++k) {
    CHECK(f[k] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  }

  C = TensorField::Zero(mesh.node_count());
  CHECK(frobenius_norm_field(C).lpNorm<Eigen::Infinity>() == 0.0);

  C.c11.setConstant(3.0);
  C.c12.setConstant(4.0);
  C.c22.setConstant(0.0);
  f = frobenius_norm_field(C);
  CHECK(f[0] == doctest::Approx(6.4031242374328485).epsilon(1e-15));  // sqrt(41)
}
