#include <doctest.h>

#include <algorithm>
#include <random>

#include "branges/spectral.hpp"
#include "oracles.hpp"

using namespace branges;

namespace {

MatPoly lin(Complex a) { return MatPoly::scalar({-a, 1.0}); }

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

MatPoly jordan() { return MatPoly(std::vector<Matrix>{mat2(0, 1, 0, 0), Matrix::Identity(2, 2)}); }

}  // namespace

TEST_CASE("det_poly examples") {
    const MatPoly d = det_poly(MatPoly::diagonal({MatPoly::scalar({kI, 1.0}), MatPoly::scalar({2.0 * kI, 1.0})}));
    REQUIRE(d.degree() == 2);
    CHECK(std::abs(d.coeff(0)(0, 0) + 2.0) < 1e-12);
    CHECK(std::abs(d.coeff(1)(0, 0) - 3.0 * kI) < 1e-12);
    CHECK(std::abs(d.coeff(2)(0, 0) - 1.0) < 1e-12);
    const MatPoly one = det_poly(MatPoly::identity(3));
    CHECK(one.degree() == 0);
    CHECK(std::abs(one.coeff(0)(0, 0) - 1.0) < 1e-12);
    const MatPoly z2 = det_poly(jordan());
    REQUIRE(z2.degree() == 2);
    CHECK(std::abs(z2.coeff(2)(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(z2.coeff(0)(0, 0)) < 1e-12);
}

TEST_CASE("det_poly agrees with cofactor expansion") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 3;
        const int d = 1 + (trial / 3) % 3;
        const MatPoly a = oracle::random_poly(rng, n, d);
        const auto exact = oracle::det_coefficients(a);
        const MatPoly got = det_poly(a);
        double big = 0.0;
        for (Complex c : exact) big = std::max(big, std::abs(c));
        for (std::size_t k = 0; k < exact.size(); ++k) {
            const Complex g = static_cast<int>(k) <= got.degree() ? got.coeff(static_cast<int>(k))(0, 0) : 0.0;
            CHECK(std::abs(g - exact[k]) <= 1e-8 * big);
        }
    }
}

TEST_CASE("zeros examples") {
    const auto z1 = zeros(MatPoly::diagonal({lin(1.0), lin(1.0)}));
    REQUIRE(z1.size() == 1);
    CHECK(std::abs(z1[0].z - 1.0) < 1e-10);
    CHECK(z1[0].mult == 2);
    CHECK(z1[0].defect == 2);

    const auto z2 = zeros(jordan());
    REQUIRE(z2.size() == 1);
    CHECK(std::abs(z2[0].z) < 1e-7);
    CHECK(z2[0].mult == 2);
    CHECK(z2[0].defect == 1);

    CHECK(zeros(MatPoly::identity(2)).empty());
    CHECK_THROWS_AS(zeros(MatPoly::diagonal({lin(1.0), MatPoly(1)})), ZeroPolynomialError);
}

TEST_CASE("zeros of diagonal fixtures match the entry roots") {
    std::mt19937_64 rng(43);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Complex> roots;
        std::vector<MatPoly> entries;
        for (int i = 0; i < 3; ++i) {
            const Complex r(g(rng), g(rng));
            roots.push_back(r);
            entries.push_back(lin(r));
        }
        const auto zs = zeros(MatPoly::diagonal(entries));
        REQUIRE(zs.size() == 3);
        for (Complex r : roots) {
            const auto it = std::find_if(zs.begin(), zs.end(), [&](const ZeroRecord& z) { return std::abs(z.z - r) < 1e-8; });
            CHECK(it != zs.end());
        }
    }
}

TEST_CASE("multiplicity sum equals the determinant degree") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 4;
        const int d = 1 + trial % 5;
        MatPoly a = oracle::random_poly(rng, n, d);
        if (trial % 3 == 0) {
            // Rank-deficient leading coefficient gives infinite eigenvalues.
            std::vector<Matrix> c = a.coeffs();
            c.back().col(0).setZero();
            a = MatPoly(c);
        }
        int total = 0;
        for (const auto& z : zeros(a)) total += z.mult;
        CHECK(total == oracle::poly_degree(oracle::det_coefficients(a)));
    }
}

TEST_CASE("zero records satisfy their invariants") {
    std::mt19937_64 rng(53);
    const MatPoly a = oracle::random_poly(rng, 3, 3);
    for (const auto& z : zeros(a)) {
        CHECK(z.defect >= 1);
        CHECK(z.defect <= z.mult);
        CHECK(sigma_ratio(a(z.z)) < 1e-9);
    }
}

TEST_CASE("cokernel and kernel projection examples") {
    const Matrix m = mat2(0, 1, 0, 0);
    CHECK(cokernel_projection(m).M.isApprox(mat2(0, 0, 0, 1)));
    CHECK(kernel_projection(m).M.isApprox(mat2(1, 0, 0, 0)));
    CHECK(cokernel_projection(Matrix::Identity(2, 2)).rank == 0);
    CHECK(kernel_projection(Matrix::Identity(2, 2)).rank == 0);
    const Projection all = cokernel_projection(Matrix::Zero(2, 2), 1e-12);
    CHECK(all.rank == 2);
    CHECK(all.M.isApprox(Matrix::Identity(2, 2)));
    CHECK(kernel_projection(mat2(1, 0, 0, 0)).M.isApprox(mat2(0, 0, 0, 1)));
}

TEST_CASE("cokernel and kernel ranks agree") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 3;
        const int r = trial % n;
        Matrix m = Matrix::Zero(n, n);
        if (r > 0) m = oracle::random_matrix(rng, n).leftCols(r) * oracle::random_matrix(rng, n).topRows(r);
        const double tol = 1e-8 * std::max(1.0, spectral_norm(m));
        const Projection pc = cokernel_projection(m, tol);
        const Projection pk = kernel_projection(m, tol);
        CHECK(pc.rank == pk.rank);
        CHECK(pc.rank == n - r);
        CHECK((pc.M * m).norm() <= 1e-8 * (1.0 + m.norm()));
        CHECK((m * pk.M).norm() <= 1e-8 * (1.0 + m.norm()));
    }
}

TEST_CASE("numerical rank report") {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 1.0;
    m(1, 1) = 1e-12;
    const RankReport r = numerical_rank(m);
    CHECK(r.rank == 1);
    CHECK(r.singular_values(0) > r.tol_used);
    CHECK(r.singular_values(1) <= r.tol_used);
}

TEST_CASE("local rank tolerance sees scalar zeros") {
    const MatPoly a = lin(2.0);
    CHECK(numerical_rank(a(2.0), rank_tol_at(a, 2.0)).rank == 0);
    CHECK(numerical_rank(a(2.1), rank_tol_at(a, 2.1)).rank == 1);
}

TEST_CASE("nearest ordering breaks ties") {
    CHECK(nearer_to(0.0, 1.0, 2.0));
    CHECK_FALSE(nearer_to(0.0, 2.0, 1.0));
    // Equal moduli: smaller principal argument first.
    CHECK(nearer_to(0.0, Complex(0, -1), Complex(0, 1)));
    CHECK(nearer_to(0.0, Complex(0, 1), Complex(-1, 0)));
    std::vector<ZeroRecord> zs{{Complex(-1, 0), 1, 1}, {Complex(0, 1), 1, 1}, {Complex(1, 0), 1, 1}, {Complex(0.5, 0), 1, 1}};
    sort_by_distance(zs, 0.0);
    CHECK(zs[0].z == Complex(0.5, 0));
    CHECK(zs[1].z == Complex(1, 0));
    CHECK(zs[2].z == Complex(0, 1));
    CHECK(zs[3].z == Complex(-1, 0));
}
