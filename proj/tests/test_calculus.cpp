#include <doctest.h>

#include "qcalc/basis.hpp"
#include "qcalc/calculus.hpp"
#include "qcalc/errors.hpp"
#include "qcalc/random.hpp"
#include "qcalc/scenarios.hpp"
#include "support.hpp"

using namespace qcalc;
using qtest::max_abs;

namespace {
const FactorSpace A = FactorSpace::single("a", 2);
const FactorSpace B = FactorSpace::single("b", 2);
const FactorSpace AB{{"a", 2}, {"b", 2}};

Orbit random_orbit(const FactorSpace& s, Rng& rng, double scale = 1.0) {
  return Orbit(random_density(s, rng).scaled(scale));
}
}  // namespace

TEST_CASE("type invariants") {
  CHECK_THROWS_AS(Bambino(1.5), InvariantError);
  CHECK_THROWS_AS(Bambino(-0.1), InvariantError);
  CHECK_THROWS_AS(Orbit(Operator(A, qtest::diag({1.0, -0.2}))), InvariantError);
  CHECK_THROWS_AS(Orbit(Operator(A, qtest::diag({0.8, 0.4}))), InvariantError);
  CHECK_THROWS_AS(Orbit(Operator::zero(A)), InvariantError);
  CHECK_THROWS_AS(Orbit(Operator(A, qtest::diag({0.3, 0.2})), true), PeggingError);
  CHECK_THROWS_AS(CoOrbit(Operator(A, qtest::diag({1.5, 0}))), InvariantError);
  const CoOrbit e(Operator(A, qtest::diag({0.5, 0.5})));
  CHECK_THROWS_AS(Bindle({}), InvariantError);
  CHECK_THROWS_AS(Bindle({e, CoOrbit(Operator(A, qtest::diag({0.5, 0.2})))}), InvariantError);
  CHECK_THROWS_AS(Bindle({e, e, e}), InvariantError);
  const Bindle dup({e, e});
  CHECK(dup.norm().value() == doctest::Approx(1.0));
  CHECK(Bindle({e}).norm().value() == doctest::Approx(0.5));
  CHECK_THROWS_AS(Bindle({e, CoOrbit::identity(B)}), SpaceError);
}

TEST_CASE("born") {
  Rng rng(1);
  const Orbit p = Orbit::pegged(random_density(AB, rng));
  CHECK(born(p, CoOrbit::identity(AB)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(born(Orbit(Operator(A, qtest::diag({1, 0}))), CoOrbit(Operator(A, qtest::diag({0, 1})))) ==
        0.0);
  CHECK_THROWS_AS(born(p, CoOrbit::identity(A)), SpaceError);
  const CoOrbit swapped(reorder(random_effect(AB, rng), FactorSpace({{"b", 2}, {"a", 2}})));
  CHECK(born(p, swapped) == doctest::Approx((p.op().matrix() *
                                             reorder(swapped.effect(), AB).matrix())
                                                .trace()
                                                .real()));

  // singlet against analyzers 45 degrees apart with the right wing relabeled
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  const Orbit singlet = Orbit::pegged(Operator(AB, v * v.adjoint()));
  auto projector = [](const FactorSpace& s, double theta, int sign) {
    Matrix m(2, 2);
    const double c = std::cos(theta), sn = std::sin(theta);
    m << 1.0 + sign * c, sign * sn, sign * sn, 1.0 - sign * c;
    return CoOrbit(Operator(s, m / 2.0));
  };
  const double t = M_PI / 4.0;
  const double same = born(singlet, future_product(projector(A, 0, 1), projector(B, t, -1))) +
                      born(singlet, future_product(projector(A, 0, -1), projector(B, t, 1)));
  CHECK(std::abs(same - 0.8535533906) < 1e-9);
}

TEST_CASE("born timelessness") {
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const Orbit p = Orbit::pegged(random_density(AB, rng));
    const CoOrbit s(random_effect(AB, rng));
    const Operator u = random_unitary(AB, rng);
    const double moved = born(Orbit(conjugate(p.op(), u)), CoOrbit(conjugate(s.effect(), u)));
    CHECK(std::abs(moved - born(p, s)) < 1e-10);
  }
}

TEST_CASE("past and future products") {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Orbit p = random_orbit(A, rng, 0.7), q = random_orbit(B, rng, 0.4);
    const Orbit pq = past_product(p, q);
    CHECK(std::abs(pq.norm() - p.norm() * q.norm()) < 1e-12);
    const Orbit r = random_orbit(FactorSpace::single("c", 3), rng, 0.9);
    const Orbit left = past_product(past_product(p, q), r);
    const Orbit right = past_product(p, past_product(q, r));
    CHECK(max_abs(left.op().matrix() - right.op().matrix()) < 1e-12);
    const Orbit qp = past_product(q, p);
    CHECK(max_abs(reorder(qp.op(), AB).matrix() - pq.op().matrix()) < 1e-12);
    const Orbit scaled = past_product(p, scale(Bambino(0.3), q));
    CHECK(max_abs(scaled.op().matrix() - 0.3 * pq.op().matrix()) < 1e-12);

    const CoOrbit s(random_effect(A, rng)), t(random_effect(B, rng));
    const CoOrbit st = future_product(s, t);
    CHECK(std::abs(born(pq, st) - born(p, s) * born(q, t)) < 1e-12);
    const double top = eigenvalues(st.effect()).maxCoeff();
    CHECK(std::abs(top - eigenvalues(s.effect()).maxCoeff() * eigenvalues(t.effect()).maxCoeff()) <
          1e-12);
    const Orbit pp = Orbit::pegged(random_density(AB, rng));
    CHECK(std::abs(born(pp, future_product(CoOrbit::identity(A), t)) -
                   kernel::born(partial_trace(pp.op(), std::vector<std::string>{"a"}), t.effect())) <
          1e-12);
  }
  CHECK(past_product(Orbit::pegged(random_density(A, rng)), Orbit::pegged(random_density(B, rng)))
            .is_pegged());
  CHECK_THROWS_AS(past_product(random_orbit(A, rng), random_orbit(A, rng)), DisjointnessError);
  CHECK_THROWS_AS(future_product(CoOrbit::identity(A), CoOrbit::identity(A)), DisjointnessError);
}

TEST_CASE("scale and normalize") {
  Rng rng(4);
  const Orbit p = Orbit::pegged(random_density(AB, rng));
  CHECK(scale(Bambino(1.0), p).op().matrix() == p.op().matrix());
  CHECK(scale(Bambino(0.5), p).norm() == doctest::Approx(0.5));
  CHECK_THROWS_AS(scale(Bambino(0.0), p), InvariantError);
  const CoOrbit s(random_effect(AB, rng));
  CHECK(std::abs(born(scale(Bambino(0.3), p), s) - 0.3 * born(p, s)) < 1e-14);
  CHECK(std::abs(born(p, scale(Bambino(0.3), s)) - 0.3 * born(p, s)) < 1e-14);
  CHECK(max_abs(normalize(p).op().matrix() - p.op().matrix()) < 1e-15);
  CHECK(max_abs(normalize(scale(Bambino(0.3), p)).op().matrix() - p.op().matrix()) < 1e-12);
  for (int i = 0; i < 50; ++i) {
    const Orbit x = random_orbit(AB, rng, 0.05 + 0.9 * rng.uniform());
    const Orbit n = normalize(x);
    CHECK(n.is_pegged());
    CHECK(std::abs(n.norm() - 1.0) < 1e-12);
    CHECK(max_abs(scale(Bambino(x.norm()), n).op().matrix() - x.op().matrix()) < 1e-12);
  }
  CHECK_THROWS_AS(normalize(Orbit(Operator(A, qtest::diag({1e-14, 0})))), DegenerateOrbitError);
}

TEST_CASE("first division") {
  Rng rng(5);
  const Orbit rho = Orbit::pegged(random_density(A, rng));
  const Orbit sigma = Orbit::pegged(random_density(B, rng));
  const CoOrbit s(random_effect(B, rng));
  const Orbit r = divide_orbit(past_product(rho, sigma), s);
  CHECK(r.space() == A);
  CHECK(max_abs(r.op().matrix() - born(sigma, s) * rho.op().matrix()) < 1e-12);
  CHECK_FALSE(r.is_pegged());

  const Orbit joint = Orbit::pegged(random_density(AB, rng));
  const Orbit traced = divide_orbit(joint, CoOrbit::identity(B));
  CHECK(max_abs(traced.op().matrix() -
                partial_trace(joint.op(), std::vector<std::string>{"b"}).matrix()) < 1e-12);

  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  const Orbit bell = Orbit::pegged(Operator(AB, phi * phi.adjoint()));
  const Orbit half = divide_orbit(bell, CoOrbit(Operator(B, qtest::diag({1, 0}))));
  CHECK(max_abs(half.op().matrix() - qtest::diag({0.5, 0})) < 1e-15);
  CHECK(half.norm() == doctest::Approx(0.5));

  CHECK_THROWS_AS(divide_orbit(joint, CoOrbit::identity(AB)), LabelError);
  CHECK_THROWS_AS(divide_orbit(joint, CoOrbit::identity(FactorSpace::single("z", 2))), LabelError);
  CHECK_THROWS_AS(divide_orbit(bell, CoOrbit(Operator(B, qtest::diag({0, 0})))),
                  DegenerateOrbitError);
}

TEST_CASE("first division properties") {
  Rng rng(6);
  const FactorSpace xyz{{"x", 2}, {"y", 3}, {"z", 2}};
  const FactorSpace yz{{"y", 3}, {"z", 2}};
  const auto spanning = hermitian_basis(yz);
  for (int i = 0; i < 30; ++i) {
    const Orbit p = random_orbit(xyz, rng, 0.8);
    const CoOrbit s(random_effect(FactorSpace::single("x", 2), rng));
    const Orbit r = divide_orbit(p, s);
    CHECK(validate(r.op(), Validation::psd));
    CHECK(std::abs(r.norm() - kernel::born(p.op(), s.effect())) < 1e-12);

    // Oracle: explicit sandwich with the square root taken here.
    const Matrix root = qtest::kron(qtest::sqrtm(s.effect().matrix()), Matrix::Identity(6, 6));
    Matrix expected = Matrix::Zero(6, 6);
    const Matrix sandwich = root * p.op().matrix() * root;
    for (int k = 0; k < 2; ++k) expected += sandwich.block(6 * k, 6 * k, 6, 6);
    CHECK(max_abs(r.op().matrix() - expected) < 1e-12);

    for (const auto& h : spanning) {
      const double lhs = kernel::born(r.op(), h);
      const double rhs = kernel::born(p.op(), tensor(s.effect(), h));
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
    const CoOrbit t(random_effect(yz, rng));
    CHECK(std::abs(born(p, future_product(s, t)) - r.norm() * born(normalize(r), t)) < 1e-10);
  }
}

TEST_CASE("second division") {
  Rng rng(7);
  const CoOrbit ex(random_effect(A, rng)), eg(random_effect(B, rng));
  const Orbit q = random_orbit(B, rng, 0.6);
  const CoOrbit r = divide_coorbit(future_product(ex, eg), q);
  CHECK(max_abs(r.effect().matrix() - born(q, eg) * ex.effect().matrix()) < 1e-12);
  const CoOrbit none = divide_coorbit(CoOrbit::identity(AB), q);
  CHECK(max_abs(none.effect().matrix() - q.norm() * Matrix::Identity(2, 2)) < 1e-12);
  CHECK_THROWS_AS(divide_coorbit(CoOrbit::identity(B), q), LabelError);

  const FactorSpace xg{{"x", 3}, {"g", 2}};
  const FactorSpace x = FactorSpace::single("x", 3);
  const auto spanning = hermitian_basis(x);
  for (int i = 0; i < 30; ++i) {
    const CoOrbit s(random_effect(xg, rng));
    const Orbit qq = random_orbit(FactorSpace::single("g", 2), rng, 0.2 + 0.8 * rng.uniform());
    const CoOrbit red = divide_coorbit(s, qq);
    CHECK(validate(red.effect(), Validation::effect));
    CHECK(eigenvalues(red.effect()).maxCoeff() <= qq.norm() + 1e-12);
    for (const auto& h : spanning) {
      const double lhs = kernel::born(h, red.effect());
      const double rhs = trace_pairing(tensor(h, qq.op()), s.effect()).real();
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
    const Operator lin = kernel::second_division_linear(s.effect(), qq.op());
    CHECK(max_abs(lin.matrix() - red.effect().matrix()) < 1e-10);
  }
}

TEST_CASE("reduce_look") {
  Rng rng(8);
  const FactorSpace xq{{"x", 2}, {"q", 2}};
  const FactorSpace qs = FactorSpace::single("q", 2);
  const Bindle look({CoOrbit(Operator(qs, qtest::diag({1, 0}))), CoOrbit(Operator(qs, qtest::diag({0, 1})))});
  const Orbit q = Orbit(random_density(qs, rng).scaled(0.5));
  const InstrumentedObservation decoupled(q, Operator::identity(xq), look);
  const Bindle red = reduce_look(decoupled);
  CHECK(red.norm().value() == doctest::Approx(0.5).epsilon(1e-12));
  for (const auto& e : red.elements()) {
    const Matrix m = e.effect().matrix();
    CHECK(max_abs(m - m(0, 0) * Matrix::Identity(2, 2)) < 1e-12);
  }

  const auto s = lab::build_scenario("pointer_nondisturbing", 3, 1);
  const Bindle pointer = reduce_look(s.inst);
  CHECK(pointer.norm().value() == doctest::Approx(1.0));
  for (std::size_t k = 0; k < pointer.size(); ++k) {
    Matrix expected = Matrix::Zero(3, 3);
    expected(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
    CHECK(max_abs(pointer[k].effect().matrix() - expected) < 1e-10);
  }
}

TEST_CASE("instrumented observation and consonance") {
  const FactorSpace xq{{"x", 2}, {"q", 2}};
  const FactorSpace qs = FactorSpace::single("q", 2);
  const Bindle look({CoOrbit::identity(qs)});
  const Orbit q = Orbit::pegged(Operator(qs, qtest::diag({1, 0})));
  CHECK_THROWS_AS(InstrumentedObservation(q, Operator(xq, qtest::diag({1, 1, 1, 2})), look),
                  InvariantError);
  CHECK_THROWS_AS(InstrumentedObservation(q, Operator::identity(qs), look), LabelError);
  const InstrumentedObservation inst(q, Operator::identity(FactorSpace({{"q", 2}, {"x", 2}})), look);
  CHECK(inst.examinee_space() == FactorSpace::single("x", 2));
  CHECK(inst.joint_space() == xq);

  const Bindle l({CoOrbit::identity(A)}), r({CoOrbit::identity(B)});
  const Bindle l2({CoOrbit::identity(AB)});
  CHECK(consonant(l, r));
  CHECK_FALSE(consonant(l, l));
  CHECK_FALSE(consonant(l, l2));
}

TEST_CASE("divisions stay within their types") {
  Rng rng(9);
  const FactorSpace s{{"a", 2}, {"b", 2}, {"c", 2}};
  for (int i = 0; i < 100; ++i) {
    const Orbit p = random_orbit(s, rng, 0.1 + 0.9 * rng.uniform());
    const CoOrbit e(random_effect(FactorSpace({{"c", 2}, {"a", 2}}), rng));
    CHECK(validate(divide_orbit(p, e).op(), Validation::psd));
    const CoOrbit big(random_effect(s, rng));
    CHECK(validate(divide_coorbit(big, random_orbit(B, rng)).effect(), Validation::effect));
  }
}
