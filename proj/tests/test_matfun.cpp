#include <doctest.h>

#include <random>

#include "branges/matfun.hpp"
#include "oracles.hpp"

using namespace branges;

namespace {

double rel(const Matrix& a, const Matrix& b) { return (a - b).norm() / (1.0 + b.norm()); }

std::vector<Complex> random_points(std::mt19937_64& rng, int count, double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    std::vector<Complex> out;
    while (static_cast<int>(out.size()) < count) {
        const Complex z(u(rng), u(rng));
        if (std::abs(z) <= radius) out.push_back(z);
    }
    return out;
}

Projection proj(const Matrix& m) { return Projection::from_matrix(m); }

}  // namespace

TEST_CASE("evaluation examples") {
    CHECK(std::abs(MatPoly::scalar({kI, 1.0})(kI)(0, 0) - 2.0 * kI) < 1e-15);
    CHECK(MatPoly::identity(3)(Complex(7, -3)).isApprox(Matrix::Identity(3, 3)));
    const ElemFactor f(0.0, 1.0, Projection::identity(1), 1, FactorMode::Canonical);
    CHECK(std::abs(f(-1.0)(0, 0) - 2.0 * std::exp(-1.0)) < 1e-12);
    CHECK(std::abs(f(-1.0)(0, 0) - 0.735758882) < 1e-9);
}

TEST_CASE("normalization drops negligible trailing coefficients") {
    Matrix tiny = Matrix::Constant(1, 1, 1e-16);
    const MatPoly p(std::vector<Matrix>{Matrix::Constant(1, 1, 2.0), Matrix::Constant(1, 1, 1.0), tiny});
    CHECK(p.degree() == 1);
    CHECK(MatPoly(2).is_zero());
    CHECK(MatPoly(2).degree() == 0);
    CHECK_THROWS_AS(MatPoly(std::vector<Matrix>{Matrix::Identity(2, 2), Matrix::Identity(3, 3)}), DimensionError);
}

TEST_CASE("derivative examples") {
    const MatPoly z2(std::vector<Matrix>{Matrix::Zero(2, 2), Matrix::Zero(2, 2), Matrix::Identity(2, 2)});
    const MatPoly d = z2.derivative();
    CHECK(d.degree() == 1);
    CHECK(d.coeff(1).isApprox(2.0 * Matrix::Identity(2, 2)));
    CHECK(std::abs(MatPoly::scalar({kI, 1.0}).derivative()(0.0)(0, 0) - 1.0) < 1e-15);
}

TEST_CASE("derivatives agree with finite differences") {
    std::mt19937_64 rng(3);
    const MatPoly a = oracle::random_poly(rng, 3, 4);
    const Projection p = proj(oracle::random_projector(rng, 3, 1));
    const ElemFactor plain(0.2, Complex(2.0, 1.0), p, 1, FactorMode::Plain);
    const ElemFactor canon(0.0, Complex(-1.5, 2.5), p, 3, FactorMode::Canonical);
    const std::vector<MatFun> funcs{MatFun(a),
                                    MatFun::elem(canon),
                                    MatFun::inverse(plain),
                                    MatFun::product({MatFun::elem(canon), a, MatFun::elem(plain)}),
                                    MatFun::product({MatFun::inverse(canon), a})};
    for (const auto& f : funcs) {
        const MatFun df = derivative(f);
        for (Complex z : random_points(rng, 20, 2.0)) {
            if (std::abs(z - plain.zk) < 0.2 || std::abs(z - canon.zk) < 0.2) continue;
            const Matrix fd = oracle::fd_derivative([&](Complex s) { return f(s); }, z);
            CHECK(rel(df(z), fd) <= 1e-6);
        }
    }
}

TEST_CASE("divided difference examples") {
    const MatPoly z2 = MatPoly::scalar({0.0, 0.0, 1.0});
    const MatPoly q = z2.divided_difference(1.0);
    CHECK(q.degree() == 1);
    CHECK(std::abs(q.coeff(0)(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(q.coeff(1)(0, 0) - 1.0) < 1e-15);
    const MatPoly c = MatPoly::scalar({kI, 1.0}).divided_difference(kI);
    CHECK(c.degree() == 0);
    CHECK(std::abs(c.coeff(0)(0, 0) - 1.0) < 1e-15);
    const MatPoly z3 = MatPoly::scalar({0.0, 0.0, 0.0, 1.0}).divided_difference(0.0);
    CHECK(z3.degree() == 2);
    CHECK(std::abs(z3.coeff(2)(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(z3.coeff(0)(0, 0)) < 1e-15);
}

TEST_CASE("synthetic division identity") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const MatPoly a = oracle::random_poly(rng, 1 + trial % 3, 1 + trial % 5);
        const Complex alpha = random_points(rng, 1, 2.0)[0];
        const MatPoly q = a.divided_difference(alpha);
        const MatPoly back = q.times_linear(alpha) + MatPoly::constant(a(alpha));
        for (Complex z : random_points(rng, 50, 3.0)) CHECK(rel(back(z), a(z)) <= 1e-10);
        CHECK(rel(q(alpha), a.derivative()(alpha)) <= 1e-10);
    }
}

TEST_CASE("numeric divided difference of a non-polynomial function") {
    std::mt19937_64 rng(9);
    const Projection p = proj(oracle::random_projector(rng, 2, 1));
    const MatFun f = MatFun::elem(ElemFactor(0.0, Complex(3.0, 1.0), p, 2, FactorMode::Canonical));
    const Complex alpha(0.4, -0.3);
    const MatFun r = divided_difference(f, alpha);
    for (Complex z : random_points(rng, 10, 1.5)) {
        if (std::abs(z - alpha) < 1e-3) continue;
        CHECK(rel(r(z), (f(z) - f(alpha)) / (z - alpha)) <= 1e-9);
    }
    CHECK(rel(r(alpha), f.eval_derivative(alpha)) <= 1e-8);
    CHECK(rel(r(alpha + 1e-7), r(alpha)) <= 1e-6);
}

TEST_CASE("adjoint reflection examples") {
    const MatPoly g = MatPoly::scalar({kI, 1.0}).adjoint_reflect();
    CHECK(std::abs(g.coeff(0)(0, 0) + kI) < 1e-15);
    Matrix h(2, 2);
    h << 2.0, Complex(1, 1), Complex(1, -1), 3.0;
    CHECK(MatPoly::constant(h).adjoint_reflect().coeff(0).isApprox(h));
    Matrix c0 = Matrix::Zero(2, 2);
    c0(0, 1) = 1.0;
    const MatPoly jordan(std::vector<Matrix>{c0, Matrix::Identity(2, 2)});
    const MatPoly r = jordan.adjoint_reflect();
    CHECK(r.coeff(0)(1, 0) == Complex(1.0));
    CHECK(r.coeff(0)(0, 1) == Complex(0.0));

    std::mt19937_64 rng(13);
    const Projection p = proj(oracle::random_projector(rng, 2, 1));
    const MatFun f = MatFun::product({MatFun::elem(ElemFactor(0.0, Complex(1, 2), p, 2, FactorMode::Canonical)),
                                      oracle::random_poly(rng, 2, 2)});
    const MatFun fr = adjoint_reflect(f);
    for (Complex z : random_points(rng, 10, 1.0)) CHECK(rel(fr(z), f(std::conj(z)).adjoint()) <= 1e-12);
}

TEST_CASE("products are multiplicative") {
    std::mt19937_64 rng(17);
    const MatPoly a = oracle::random_poly(rng, 3, 2);
    const MatPoly b = oracle::random_poly(rng, 3, 3);
    const MatFun ab = MatFun(a) * MatFun(b);
    for (Complex z : random_points(rng, 20, 2.0)) CHECK(rel(ab(z), a(z) * b(z)) <= 1e-12);
    const MatPoly exact = a * b;
    for (Complex z : random_points(rng, 20, 2.0)) CHECK(rel(exact(z), a(z) * b(z)) <= 1e-12);
}

TEST_CASE("plain factor times inverse is the identity") {
    std::mt19937_64 rng(19);
    for (int rank = 1; rank <= 3; ++rank) {
        const ElemFactor f(Complex(0.5, 0.1), Complex(-1.0, 2.0), proj(oracle::random_projector(rng, 3, rank)));
        for (Complex z : random_points(rng, 20, 3.0)) {
            CHECK(rel(f(z) * f.inverse(z), Matrix::Identity(3, 3)) <= 1e-12);
        }
        CHECK(rel(f(f.z0), Matrix::Identity(3, 3)) <= 1e-15);
        CHECK_THROWS_AS(f.inverse(f.zk), SingularityError);
        CHECK_THROWS_AS(MatFun::inverse(f)(f.zk), SingularityError);
    }
}

TEST_CASE("plain factor at its zero is singular on the range of P") {
    std::mt19937_64 rng(23);
    const Matrix pm = oracle::random_projector(rng, 3, 2);
    const ElemFactor f(0.0, Complex(1.0, 1.0), proj(pm));
    CHECK((pm * f(f.zk)).norm() <= 1e-12);
}

TEST_CASE("canonical closed form equals the literal definition") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 4;
        const int rank = 1 + trial % n;
        const int m = 1 + trial % 4;
        const Matrix pm = oracle::random_projector(rng, n, rank);
        const Complex zk(u(rng), u(rng));
        const ElemFactor f(0.0, zk, proj(pm), m, FactorMode::Canonical);
        Complex t(u(rng), u(rng));
        if (std::abs(t) > 3.0) t *= 3.0 / std::abs(t);
        const Complex z = t * zk;
        const Matrix id = Matrix::Identity(n, n);
        const Matrix literal = (id - t * pm) * oracle::expm(exp_partial_sum(t, m) * pm);
        CHECK(rel(f(z), literal) <= 1e-10 * (1.0 + literal.norm()));
        const Complex det = oracle::cofactor_det(f(z));
        const Complex expected = std::pow(1.0 - t, rank) * std::exp(static_cast<double>(rank) * exp_partial_sum(t, m));
        CHECK(std::abs(det - expected) <= 1e-10 * (1.0 + std::abs(expected)));
        const Matrix literal_inverse = oracle::expm(-exp_partial_sum(t, m) * pm) * (id - t * pm).inverse();
        CHECK(rel(f.inverse(z), literal_inverse) <= 1e-10 * (1.0 + literal_inverse.norm()));
    }
}

TEST_CASE("projections validate") {
    std::mt19937_64 rng(31);
    const Projection p = proj(oracle::random_projector(rng, 4, 2));
    CHECK(p.rank == 2);
    CHECK(p.is_valid());
    Projection bad = p;
    bad.M(0, 1) += 0.1;
    CHECK_FALSE(bad.is_valid());
    CHECK(Projection::zero(3).rank == 0);
    CHECK(Projection::identity(3).is_valid());
}

TEST_CASE("removable node resolves a removable singularity") {
    std::mt19937_64 rng(37);
    const MatPoly a = oracle::random_poly(rng, 2, 3);
    const Complex x(0.7, 0.2);
    const MatFun f = MatFun::function(
        2, [a, x](Complex z) { return ((a(z) - a(x)) / (z - x)).eval(); }, "quotient");
    const MatFun r = MatFun::removable(f, {x});
    const MatPoly q = a.divided_difference(x);
    CHECK(rel(r(x), q(x)) <= 1e-10);
    CHECK(rel(r(x + 1e-9), q(x + 1e-9)) <= 1e-10);
    CHECK(rel(r(Complex(2.0, -1.0)), q(Complex(2.0, -1.0))) <= 1e-12);
}
