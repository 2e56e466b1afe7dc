#include <doctest.h>

#include <random>

#include "branges/debranges.hpp"
#include "branges/fixtures.hpp"
#include "branges/spectral.hpp"
#include "oracles.hpp"

using namespace branges;

namespace {

Vector e(int n, int i) { return Vector::Unit(n, i); }
Vector one() { return Vector::Ones(1); }

DBOperator swapped() { return {MatPoly::scalar({kI, 1.0}), MatPoly::scalar({-kI, 1.0})}; }

std::vector<Complex> sample(std::mt19937_64& rng, int count, double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    std::vector<Complex> out;
    for (int k = 0; k < count; ++k) out.emplace_back(u(rng), u(rng));
    return out;
}

double min_eig(const Matrix& g) {
    if (g.size() == 0) return 0.0;
    return Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (g + g.adjoint()), Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("validate_h1 accepts the fixtures") {
    for (const DBOperator& op : {fixtures::scalar_cayley(), fixtures::diag2(), fixtures::joint_real_zero()}) {
        const H1Report r = validate_h1(op);
        CHECK(r.pass);
        for (const auto& c : r.checks) {
            INFO(c.name);
            CHECK(c.pass);
        }
    }
}

TEST_CASE("validate_h1 rejects the swapped pair with witnesses") {
    const H1Report r = validate_h1(swapped());
    CHECK_FALSE(r.pass);
    const CheckResult* inv = r.find("eplus_invertible_upper");
    REQUIRE(inv != nullptr);
    CHECK_FALSE(inv->pass);
    REQUIRE(inv->witness.has_value());
    CHECK(std::abs(*inv->witness - kI) < 1e-8);
    const CheckResult* schur = r.find("schur_contraction");
    REQUIRE(schur != nullptr);
    CHECK_FALSE(schur->pass);
    REQUIRE(schur->witness.has_value());
    CHECK(schur->witness->imag() > 0.0);
}

TEST_CASE("validate_h1 joint fixture pole sets agree") {
    const H1Report r = validate_h1(fixtures::joint_real_zero());
    REQUIRE(r.common_real_zeros.size() == 1);
    CHECK(std::abs(r.common_real_zeros[0] - 1.0) < 1e-8);
    CHECK(r.find("pole_sets_agree")->pass);
    CHECK(r.find("douglas_range")->pass);
}

TEST_CASE("validate_h1 notices a lost real zero") {
    // det E_minus vanishes at 2, det E_plus at 1.
    const DBOperator bad(MatPoly::scalar({-kI, 1.0}) * MatPoly::scalar({-2.0, 1.0}), MatPoly::scalar({-kI, -1.0 + kI, 1.0}));
    const H1Report r = validate_h1(bad);
    CHECK_FALSE(r.find("pole_sets_agree")->pass);
    CHECK_FALSE(r.pass);
}

TEST_CASE("kernel closed forms") {
    std::mt19937_64 rng(97);
    const DBOperator s = fixtures::scalar_cayley();
    for (Complex w : sample(rng, 20, 3.0)) {
        for (Complex z : sample(rng, 3, 3.0)) CHECK(std::abs(kernel(s, w, z)(0, 0) - 1.0 / kPi) < 1e-12);
        CHECK(std::abs(kernel(s, w, std::conj(w))(0, 0) - 1.0 / kPi) < 1e-12);
        CHECK(std::abs(kernel(s, w, w)(0, 0) - 1.0 / kPi) < 1e-12);
    }
    const Matrix k = kernel(fixtures::diag2(), kI, kI);
    CHECK(std::abs(k(0, 0) - 1.0 / kPi) < 1e-10);
    CHECK(std::abs(k(1, 1) - 2.0 / kPi) < 1e-10);
    CHECK(std::abs(k(0, 1)) < 1e-10);
}

TEST_CASE("confluent kernel branch is continuous") {
    const DBOperator d = fixtures::diag2();
    const Complex w(0.3, 0.8);
    const Matrix at = kernel(d, w, std::conj(w));
    const Matrix near = kernel(d, w, std::conj(w) + 1e-5);
    CHECK((at - near).norm() <= 1e-6 * (1.0 + at.norm()));
    const Matrix inside = kernel(d, w, std::conj(w) + 5e-9);
    CHECK((at - inside).norm() <= 1e-6);
}

TEST_CASE("kernel sections match pointwise evaluation") {
    std::mt19937_64 rng(101);
    const DBOperator d = fixtures::joint_real_zero();
    for (Complex w : sample(rng, 5, 2.0)) {
        const MatPoly s = kernel_section(d, w);
        for (Complex z : sample(rng, 5, 2.0)) CHECK((s(z) - kernel(d, w, z)).norm() <= 1e-10 * (1.0 + s(z).norm()));
    }
    CHECK_THROWS_AS(kernel_section(DBOperator(MatPoly::scalar({1.0, 1.0}), MatPoly::scalar({2.0, 0.5})), kI), DomainError);
}

TEST_CASE("kernel Hermitian symmetry and diagonal positivity") {
    std::mt19937_64 rng(103);
    for (const DBOperator& op : {fixtures::scalar_cayley(), fixtures::diag2(), fixtures::joint_real_zero()}) {
        for (int k = 0; k < 100; ++k) {
            const auto pts = sample(rng, 2, 3.0);
            const Matrix a = kernel(op, pts[0], pts[1]);
            const Matrix b = kernel(op, pts[1], pts[0]);
            CHECK((a.adjoint() - b).norm() <= 1e-10 * (1.0 + a.norm()));
            const Matrix kd = kernel(op, pts[0], pts[0]);
            CHECK(min_eig(kd) >= -1e-8 * (1.0 + kd.norm()));
        }
    }
}

TEST_CASE("real-line and reflection identities") {
    std::mt19937_64 rng(107);
    for (const DBOperator& op : {fixtures::scalar_cayley(), fixtures::diag2(), fixtures::joint_real_zero()}) {
        const MatFun pr = adjoint_reflect(op.E_plus);
        const MatFun mr = adjoint_reflect(op.E_minus);
        for (Complex z : sample(rng, 20, 3.0)) {
            const Matrix lhs = op.E_plus(z) * pr(z) - op.E_minus(z) * mr(z);
            CHECK(lhs.norm() <= 1e-8 * (1.0 + op.E_plus(z).norm() * pr(z).norm()));
        }
        for (int k = 0; k < 200; ++k) {
            const double x = -10.0 + 20.0 * k / 199.0;
            const Matrix p = op.E_plus(x), m = op.E_minus(x);
            CHECK((p * p.adjoint() - m * m.adjoint()).norm() <= 1e-8 * (1.0 + p.norm() * p.norm()));
        }
    }
}

TEST_CASE("gram examples") {
    const DBOperator s = fixtures::scalar_cayley();
    CHECK(gram(s, {}, {}).size() == 0);
    const Matrix g = gram(s, {kI, 2.0 * kI, Complex(1, -1)}, {one(), one(), one()});
    CHECK((g - Matrix::Constant(3, 3, 1.0 / kPi)).norm() < 1e-12);
    CHECK(numerical_rank(g).rank == 1);
    const Matrix d = gram(fixtures::diag2(), {kI, 2.0 * kI}, {e(2, 0), e(2, 0)});
    CHECK(min_eig(d) >= 0.0);
    CHECK((d - d.adjoint()).norm() < 1e-10);
    CHECK_THROWS_AS(gram(s, {kI}, {}), DimensionError);
}

TEST_CASE("gram matrices are positive") {
    std::mt19937_64 rng(109);
    std::uniform_int_distribution<int> count(1, 8);
    for (const DBOperator& op : {fixtures::scalar_cayley(), fixtures::diag2(), fixtures::joint_real_zero()}) {
        for (int trial = 0; trial < 20; ++trial) {
            const int p = count(rng);
            const auto pts = sample(rng, p, 3.0);
            std::vector<Vector> vs;
            for (int i = 0; i < p; ++i) vs.push_back(oracle::random_vector(rng, op.dim()));
            const Matrix g = gram(op, pts, vs);
            CHECK((g - g.adjoint()).norm() <= 1e-10 * (1.0 + g.norm()));
            CHECK(min_eig(g) >= -1e-8 * spectral_norm(g));
        }
    }
}

TEST_CASE("range of the kernel diagonal is spanned by combo values") {
    std::mt19937_64 rng(113);
    const DBOperator d = fixtures::diag2();
    for (Complex a : sample(rng, 5, 2.0)) {
        Matrix values(2, 4);
        for (int j = 0; j < 4; ++j) {
            const KernelCombo f(d, {sample(rng, 1, 2.0)[0], a}, {oracle::random_vector(rng, 2), oracle::random_vector(rng, 2)});
            values.col(j) = f(a);
        }
        CHECK(numerical_rank(values, 1e-8).rank == numerical_rank(kernel(d, a, a), 1e-8).rank);
    }
}

TEST_CASE("quadrature inner products") {
    const DBOperator s = fixtures::scalar_cayley();
    const KernelCombo ki(s, {kI}, {one()});
    const InnerProductResult r = inner_product_quadrature(ki, ki);
    CHECK(std::abs(r.value - 1.0 / kPi) <= 1e-6);
    CHECK(std::abs(r.value - 0.318310) < 1e-6);
    CHECK(r.quad.doublings <= 12);
    CHECK(inner_product_quadrature(KernelCombo::empty(s), ki).value == 0.0);

    const DBOperator d = fixtures::diag2();
    const KernelCombo f(d, {kI}, {e(2, 0)});
    const Complex got = inner_product_quadrature(f, f).value;
    const Complex closed = kernel(d, kI, kI)(0, 0);
    CHECK(std::abs(got - closed) <= 1e-4 * std::abs(closed));
}

TEST_CASE("quadrature agrees with the reproducing property") {
    std::mt19937_64 rng(127);
    for (const DBOperator& op : {fixtures::scalar_cayley(), fixtures::diag2(), fixtures::joint_real_zero()}) {
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<Vector> u, v;
            for (int i = 0; i < 2; ++i) {
                u.push_back(oracle::random_vector(rng, op.dim()));
                v.push_back(oracle::random_vector(rng, op.dim()));
            }
            const KernelCombo f(op, sample(rng, 2, 2.0), u);
            const KernelCombo g(op, sample(rng, 2, 2.0), v);
            const Complex closed = inner_product_closed_form(f, g);
            const InnerProductResult q = inner_product_quadrature(f, g, {}, true);
            CHECK(std::abs(q.value - closed) <= 1e-4 * std::abs(closed));
            REQUIRE(q.discrepancy.has_value());
            CHECK(*q.discrepancy <= 1e-4 * std::abs(closed));
        }
    }
}

TEST_CASE("reproducing_check examples") {
    const DBOperator s = fixtures::scalar_cayley();
    CHECK(reproducing_check(KernelCombo(s, {kI}, {one()}), 2.0 * kI, one()) <= 1e-4);
    CHECK(reproducing_check(KernelCombo::empty(s), 2.0 * kI, one()) == 0.0);
    const DBOperator d = fixtures::diag2();
    const KernelCombo f(d, {kI, Complex(0.5, -1.0)}, {e(2, 0), e(2, 1)});
    CHECK(reproducing_check(f, Complex(-1.0, 2.0), e(2, 1)) <= 1e-4);
    CHECK(reproducing_check(f, Complex(1.0, 0.5), (e(2, 0) + e(2, 1)) / std::sqrt(2.0)) <= 1e-4);
}

TEST_CASE("hardy_membership examples") {
    const auto h1 = [](Complex z) {
        Vector v(1);
        v(0) = 1.0 / (z + kI);
        return v;
    };
    const MembershipReport a = hardy_membership(h1, HalfPlane::Upper, {kI});
    CHECK(a.pass);
    REQUIRE(a.probes.size() == 1);
    CHECK(a.probes[0].reproduction < 1e-6);
    CHECK(a.probes[0].annihilation < 1e-6);
    CHECK(std::abs(h1(kI)(0) + 0.5 * kI) < 1e-15);

    const auto h2 = [](Complex z) {
        Vector v(1);
        v(0) = 1.0 / (z - kI);
        return v;
    };
    CHECK_FALSE(hardy_membership(h2, HalfPlane::Upper, {2.0 * kI}).pass);
    CHECK(hardy_membership(h2, HalfPlane::Lower, {-2.0 * kI}).pass);

    const auto zero = [](Complex) { return Vector::Zero(1).eval(); };
    const MembershipReport z = hardy_membership(zero, HalfPlane::Upper, default_probes(HalfPlane::Upper));
    CHECK(z.pass);
    for (const auto& p : z.probes) CHECK(p.reproduction == 0.0);

    const auto grows = [](Complex z) {
        Vector v(1);
        v(0) = z / (z + kI);
        return v;
    };
    const MembershipReport g = hardy_membership(grows, HalfPlane::Upper, {kI});
    CHECK_FALSE(g.pass);
    CHECK_FALSE(g.square_integrable);
    CHECK_THROWS_AS(hardy_membership(h1, HalfPlane::Upper, {-kI}), DomainError);
}

TEST_CASE("kernel combos belong to the Hardy pictures") {
    const DBOperator d = fixtures::diag2();
    const KernelCombo f(d, {kI, Complex(1.0, -0.5)}, {e(2, 0), e(2, 1)});
    const VectorFunction up = [&](Complex z) -> Vector { return d.E_plus(z).fullPivLu().solve(f(z)); };
    const VectorFunction lo = [&](Complex z) -> Vector { return d.E_minus(z).fullPivLu().solve(f(z)); };
    CHECK(hardy_membership(up, HalfPlane::Upper, default_probes(HalfPlane::Upper)).pass);
    CHECK(hardy_membership(lo, HalfPlane::Lower, default_probes(HalfPlane::Lower)).pass);
}

TEST_CASE("embed_check examples") {
    const DBOperator s = fixtures::scalar_cayley();
    const KernelCombo f(s, {kI}, {one()});
    const EmbedReport id = embed_check(MatPoly::identity(1), s, s, {f});
    CHECK(id.pass);
    CHECK(id.max_residual < 1e-10);

    const DBOperator e0 = fixtures::joint_real_zero_reduced();
    const KernelCombo g(e0, {kI}, {one()});
    const EmbedReport j = embed_check(fixtures::joint_real_zero_factor(), e0, fixtures::joint_real_zero(),
                                      {g, KernelCombo::empty(e0)});
    CHECK(j.pass);
    CHECK(j.samples[0].residual <= 1e-3);
    CHECK(j.samples[1].residual == 0.0);

    CHECK_THROWS_AS(embed_check(MatPoly::scalar({2.0}), e0, fixtures::joint_real_zero(), {g}), FactorMismatchError);
}

TEST_CASE("product_operator examples") {
    const DBOperator s = fixtures::scalar_cayley();
    const ProductResult p = product_operator(s, s);
    CHECK(p.decomposition_resid < 1e-12);
    std::mt19937_64 rng(131);
    for (const auto& pts = sample(rng, 10, 2.0); const Complex w : pts) {
        const Complex z = w * Complex(0.3, 1.1) + 0.5;
        const Complex expected = (2.0 * z * std::conj(w) + 2.0) / kPi;
        CHECK(std::abs(kernel(p.op, w, z)(0, 0) - expected) < 1e-10 * (1.0 + std::abs(expected)));
        const Complex split = ((z + kI) * (std::conj(w) - kI) + (z - kI) * (std::conj(w) + kI)) / kPi;
        CHECK(std::abs(split - expected) < 1e-12 * (1.0 + std::abs(expected)));
    }
    CHECK(std::abs(kernel(p.op, 0.0, 0.0)(0, 0) - 2.0 / kPi) < 1e-12);
    CHECK(validate_h1(p.op).pass);

    Matrix a(2, 2), b(2, 2);
    a << 0, 1, 0, 0;
    b << 0, 0, 1, 0;
    const DBOperator f(MatPoly(std::vector<Matrix>{a, Matrix::Identity(2, 2)}),
                       MatPoly(std::vector<Matrix>{b, Matrix::Identity(2, 2)}));
    const DBOperator g(MatPoly(std::vector<Matrix>{b, Matrix::Identity(2, 2)}),
                       MatPoly(std::vector<Matrix>{a, Matrix::Identity(2, 2)}));
    CHECK_THROWS_AS(product_operator(f, g), CommutationError);
    CHECK_NOTHROW(product_operator(fixtures::diag2(), fixtures::diag2()));
    CHECK_THROWS_AS(product_operator(DBOperator(MatPoly::scalar({kI, 1.0}), MatPoly::scalar({-kI, 1.0})), fixtures::diag2()),
                    DimensionError);
}

TEST_CASE("divide_out_zero examples") {
    const DBOperator d = fixtures::diag2();
    const DivisionReport z = divide_out_zero(KernelCombo::empty(d), kI);
    CHECK(z.pass);

    // f = c1 K_i e1 + c2 K_2i e1 with f(3i) = 0.
    const Complex a1 = kernel(d, kI, 3.0 * kI)(0, 0);
    const Complex a2 = kernel(d, 2.0 * kI, 3.0 * kI)(0, 0);
    const KernelCombo f(d, {kI, 2.0 * kI}, {a2 * e(2, 0), -a1 * e(2, 0)});
    CHECK(f(3.0 * kI).norm() < 1e-12);
    const DivisionReport r = divide_out_zero(f, 3.0 * kI);
    CHECK(r.which == DivisionCase::NonReal);
    CHECK(r.pass);
    REQUIRE(r.g_norm.has_value());
    CHECK(std::isfinite(*r.g_norm));

    CHECK_THROWS_AS(divide_out_zero(KernelCombo(d, {kI}, {e(2, 0)}), 3.0 * kI), NotAZeroError);

    const DBOperator j = fixtures::joint_real_zero();
    const KernelCombo g(j, {kI}, {one()});
    const DivisionReport p = divide_out_zero(g, 1.0);
    CHECK(p.which == DivisionCase::PreconditionFailed);
    CHECK_FALSE(p.pass);
    CHECK(p.note.find("real-point precondition failed") != std::string::npos);
}

TEST_CASE("divide_out_zero at a real regular point") {
    const DBOperator s = fixtures::diag2();
    const Complex a1 = kernel(s, kI, 0.5)(1, 1);
    const Complex a2 = kernel(s, Complex(1.0, 1.0), 0.5)(1, 1);
    const KernelCombo f(s, {kI, Complex(1.0, 1.0)}, {a2 * e(2, 1), -a1 * e(2, 1)});
    const DivisionReport r = divide_out_zero(f, 0.5);
    CHECK(r.which == DivisionCase::RealInvertible);
    CHECK(r.pass);
}
