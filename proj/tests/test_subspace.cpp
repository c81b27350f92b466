#include <doctest.h>

#include "outerinv/subspace.hpp"
#include "test_helpers.hpp"

using namespace outerinv;
using test_helpers::rel_diff;

namespace {

Subspace span_of(std::initializer_list<std::initializer_list<double>> cols) {
  const Index n = static_cast<Index>(cols.begin()->size());
  Matrix m(n, static_cast<Index>(cols.size()));
  Index j = 0;
  for (const auto& col : cols) {
    Index i = 0;
    for (double v : col) m(i++, j) = v;
    ++j;
  }
  return Subspace::from_spanning(m);
}

Subspace random_subspace(Rng& rng, Index ambient, Index dim) {
  if (dim == 0) return Subspace::zero(ambient);
  for (;;) {
    Subspace s = Subspace::from_spanning(rng.gaussian_matrix(ambient, dim));
    if (s.dim() == dim) return s;
  }
}

/// Monte Carlo lower estimate of delta(M, N): max distance to N over random
/// unit vectors of M. This is the definition evaluated by sampling.
double sampled_delta(Rng& rng, const Subspace& m, const Subspace& n,
                     int samples) {
  if (m.is_trivial()) return 0.0;
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    Vector coeffs = rng.gaussian_matrix(m.dim(), 1).col(0);
    const double len = coeffs.norm();
    if (len == 0.0) continue;
    best = std::max(best, dist_point(m.basis() * (coeffs / len), n));
  }
  return best;
}

}  // namespace

TEST_CASE("from_spanning drops dependent columns") {
  const Subspace line = span_of({{1, 0}, {2, 0}});
  REQUIRE(line.dim() == 1);
  CHECK(std::abs(std::abs(line.basis()(0, 0)) - 1.0) < 1e-15);
  CHECK(std::abs(line.basis()(1, 0)) < 1e-15);

  CHECK(Subspace::from_spanning(Matrix(2, 0)).dim() == 0);

  Rng rng(21);
  const Matrix low = test_helpers::random_rank_deficient(rng, 6, 4, 3);
  const Subspace s = Subspace::from_spanning(low);
  CHECK(s.dim() == 3);
  CHECK((s.basis().transpose() * s.basis() - Matrix::Identity(3, 3)).norm() <
        1e-12);
}

TEST_CASE("from_orthonormal validates the basis") {
  Matrix skewed(2, 1);
  skewed << 1, 1;
  CHECK_THROWS_AS(Subspace::from_orthonormal(skewed), ParameterError);
  CHECK(Subspace::from_orthonormal(Matrix::Identity(3, 3)).is_full());
  Matrix poisoned(2, 1);
  poisoned << std::numeric_limits<double>::quiet_NaN(), 0;
  CHECK_THROWS_AS(Subspace::from_orthonormal(poisoned), ParameterError);
}

TEST_CASE("one-sided deviations are asymmetric for nested subspaces") {
  Rng rng(30);
  const Subspace plane = random_subspace(rng, 5, 3);
  const Subspace inner =
      Subspace::from_spanning(plane.basis() * rng.gaussian_matrix(3, 1));
  CHECK(delta(inner, plane) < 1e-12);
  CHECK(delta(plane, inner) > 0.1);  // generic strict containment
  CHECK(gap(plane, inner) == delta(plane, inner));
}

TEST_CASE("dist_point") {
  const Subspace e2 = span_of({{0, 1}});
  CHECK(dist_point((Vector(2) << 1, 0).finished(), e2) ==
        doctest::Approx(1.0));
  CHECK(dist_point((Vector(2) << 0, 3).finished(), e2) < 1e-15);
  // min over t of ||(1,0) - t(1,1)|| is attained at t = 1/2
  const Subspace diag = span_of({{1, 1}});
  CHECK(std::abs(dist_point((Vector(2) << 1, 0).finished(), diag) -
                 0.7071067811865476) < 1e-14);
  CHECK_THROWS_AS(dist_point(Vector::Zero(3), e2), DimensionError);
}

TEST_CASE("delta: containment, orthogonal lines, oblique line") {
  Rng rng(22);
  const Subspace big = random_subspace(rng, 5, 3);
  const Subspace inside =
      Subspace::from_spanning(big.basis() * rng.gaussian_matrix(3, 2));
  CHECK(delta(inside, big) < 1e-12);

  CHECK(delta(span_of({{1, 0}}), span_of({{0, 1}})) == doctest::Approx(1.0));
  CHECK(std::abs(delta(span_of({{1, 0}}), span_of({{1, 1}})) -
                 0.7071067811865476) < 1e-14);
  CHECK(delta(Subspace::zero(4), random_subspace(rng, 4, 2)) == 0.0);
}

TEST_CASE("delta matches the sampled supremum on small ambients") {
  Rng rng(23);
  for (int rep = 0; rep < 30; ++rep) {
    const Index ambient = 2 + static_cast<Index>(rng.uniform() * 2);  // 2 or 3
    const Index dm = 1 + static_cast<Index>(rng.uniform() *
                                            static_cast<double>(ambient - 1));
    const Index dn = 1 + static_cast<Index>(rng.uniform() *
                                            static_cast<double>(ambient - 1));
    const Subspace m = random_subspace(rng, ambient, dm);
    const Subspace n = random_subspace(rng, ambient, dn);
    const double closed = delta(m, n);
    const double sampled = sampled_delta(rng, m, n, 2000);
    CHECK(sampled <= closed + 1e-12);  // sampling can only undershoot
    CHECK(closed - sampled < 5e-3);
  }
}

TEST_CASE("gap: axioms and principal-angle oracle") {
  Rng rng(24);
  const Subspace m = random_subspace(rng, 6, 3);
  CHECK(gap(m, m) == 0.0);
  CHECK(gap(span_of({{1, 0}}), span_of({{0, 1}})) == doctest::Approx(1.0));

  for (int rep = 0; rep < 25; ++rep) {
    const Index ambient = 3 + static_cast<Index>(rng.uniform() * 6);
    const Index dim = 1 + static_cast<Index>(rng.uniform() *
                                             static_cast<double>(ambient - 1));
    const Subspace x = random_subspace(rng, ambient, dim);
    const Subspace y = random_subspace(rng, ambient, dim);

    // equal dimensions: gap equals the sine of the largest principal angle
    const Vector cosines =
        svd(x.basis().transpose() * y.basis()).singular_values;
    const double cos_min =
        std::clamp(cosines(cosines.size() - 1), -1.0, 1.0);
    const double sin_max = std::sqrt(1.0 - cos_min * cos_min);
    CHECK(std::abs(gap(x, y) - sin_max) < 1e-10);

    // symmetry is exact by construction, checked in both orders
    CHECK(gap(x, y) == gap(y, x));
    CHECK(std::abs(delta(x, y) - delta(y, x)) < 1e-12);
    CHECK(gap(x, y) >= 0.0);
    CHECK(gap(x, y) <= 1.0);
  }
}

TEST_CASE("delta vanishes exactly when every basis vector lies in N") {
  Rng rng(25);
  for (int rep = 0; rep < 25; ++rep) {
    const Subspace n = random_subspace(rng, 6, 3);
    const Subspace contained =
        Subspace::from_spanning(n.basis() * rng.gaussian_matrix(3, 2));
    const Subspace generic = random_subspace(rng, 6, 2);

    for (const Subspace& m : {contained, generic}) {
      const bool small_delta = delta(m, n) < 1e-10;
      bool all_near = true;
      for (Index j = 0; j < m.dim(); ++j) {
        if (dist_point(m.basis().col(j), n) >= 1e-10) all_near = false;
      }
      CHECK(small_delta == all_near);
    }
  }
}

TEST_CASE("orth_projector") {
  CHECK((orth_projector(Subspace::full(3)) - Matrix::Identity(3, 3)).norm() <
        1e-15);
  CHECK(orth_projector(Subspace::zero(3)).norm() == 0.0);

  Rng rng(26);
  const Subspace m = random_subspace(rng, 7, 4);
  const Matrix p = orth_projector(m);
  CHECK((p * p - p).norm() < 1e-12);
  CHECK((p - p.transpose()).norm() < 1e-14);
}

TEST_CASE("oblique_projector: forced small cases") {
  const Subspace e1 = span_of({{1, 0}});
  const Subspace e2 = span_of({{0, 1}});
  Matrix expected(2, 2);
  expected << 1, 0, 0, 0;
  CHECK((oblique_projector(e1, e2) - expected).norm() < 1e-14);

  // P(1,0) = (1,0) and P(1,1) = 0 force the matrix
  const Subspace diag = span_of({{1, 1}});
  expected << 1, -1, 0, 0;
  CHECK((oblique_projector(e1, diag) - expected).norm() < 1e-13);

  CHECK_THROWS_AS(oblique_projector(e1, e1), NotComplementaryError);
  CHECK_THROWS_AS(oblique_projector(e1, Subspace::zero(2)),
                  NotComplementaryError);  // dims do not add up
}

TEST_CASE("oblique_projector: idempotent with prescribed range and kernel") {
  Rng rng(27);
  for (int rep = 0; rep < 20; ++rep) {
    const Index n = 3 + static_cast<Index>(rng.uniform() * 6);
    const Index r = 1 + static_cast<Index>(rng.uniform() *
                                           static_cast<double>(n - 1));
    const Subspace range_part = random_subspace(rng, n, r);
    const Subspace null_part = orth_complement(range_part);
    // tilt the kernel away from the orthogonal complement
    Matrix tilt = rng.gaussian_matrix(n, n - r);
    tilt /= std::max(1.0, spectral_norm(tilt));
    const Subspace oblique =
        Subspace::from_spanning(null_part.basis() + 0.4 * tilt);
    if (oblique.dim() != n - r) continue;
    if (!is_complementary(range_part, oblique)) continue;

    const Matrix p = oblique_projector(range_part, oblique);
    CHECK((p * p - p).norm() < 1e-10);
    CHECK(gap(Subspace::from_spanning(p), range_part) < 1e-8);
    CHECK(gap(Subspace::from_orthonormal(nullspace_basis(p)), oblique) < 1e-8);
  }
}

TEST_CASE("is_complementary") {
  const Subspace e1 = span_of({{1, 0}});
  const Subspace e2 = span_of({{0, 1}});
  CHECK(is_complementary(e1, e2));
  CHECK_FALSE(is_complementary(e1, e1));
  CHECK_FALSE(is_complementary(e1, Subspace::zero(2)));

  Rng rng(28);
  for (int rep = 0; rep < 20; ++rep) {
    const Subspace m = random_subspace(rng, 6, 3);
    const Subspace complement = orth_complement(m);
    Matrix tilt = rng.gaussian_matrix(6, 3);
    tilt /= spectral_norm(tilt);
    const Subspace perturbed =
        Subspace::from_spanning(complement.basis() + 0.25 * tilt);
    if (gap(complement, perturbed) < 0.3) {
      CHECK(is_complementary(m, perturbed));
    }
  }
}

TEST_CASE("perturbations below 1/(1+||P||) keep complements") {
  // idempotent P with range M: any M' with gap(M, M') < 1/(1+||P||)
  // remains complementary to the kernel of P
  Rng rng(29);
  int exercised = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const Index n = 4 + static_cast<Index>(rng.uniform() * 4);
    const Index r = 1 + static_cast<Index>(rng.uniform() *
                                           static_cast<double>(n - 2));
    const Subspace m = random_subspace(rng, n, r);
    Matrix tilt = rng.gaussian_matrix(n, n - r);
    tilt /= spectral_norm(tilt);
    const Subspace kernel = Subspace::from_spanning(
        orth_complement(m).basis() + 0.3 * tilt);
    if (kernel.dim() != n - r || !is_complementary(m, kernel)) continue;

    const Matrix p = oblique_projector(m, kernel);
    const double limit = 1.0 / (1.0 + spectral_norm(p));
    const Subspace kernel_as_range =
        Subspace::from_spanning(Matrix::Identity(n, n) - p);
    const Subspace m_prime = gen_subspace_perturbation(rng, m, 0.9 * limit);
    CHECK(gap(m, m_prime) < limit);
    CHECK(is_complementary(kernel_as_range, m_prime));
    ++exercised;
  }
  CHECK(exercised >= 20);
}
