#include <doctest.h>

#include <Eigen/QR>
#include <cmath>
#include <random>

#include "trop/trace.hpp"

using namespace trop;

namespace {

std::mt19937& rng() {
    static std::mt19937 r(42);
    return r;
}

Eigen::MatrixXd random_orthogonal(int n) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = nd(rng());
    return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
}

SymMatrix random_psd(int n, double scale = 2.0) {
    std::uniform_real_distribution<double> ud(0.0, scale);
    Eigen::MatrixXd q = random_orthogonal(n);
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d[i] = ud(rng());
    return SymMatrix(q * d.asDiagonal() * q.transpose());
}

DensityMatrix random_density(int n, double floor = 0.02) {
    std::exponential_distribution<double> ed(1.0);
    Eigen::VectorXd p(n);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += (p[i] = ed(rng()) + floor);
    p /= s;
    Eigen::MatrixXd q = random_orthogonal(n);
    return DensityMatrix(q * p.asDiagonal() * q.transpose());
}

Eigen::MatrixXd diag2(double x, double y) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 0) = x;
    m(1, 1) = y;
    return m;
}

}  // namespace

TEST_CASE("min-plus matrix operations") {
    Eigen::MatrixXd am(2, 2), bm(2, 2);
    am << 0, 1, 2, 0;
    bm << 0, 3, 1, 0;
    MinPlusMatrix a(am), b(bm);

    // brute-force oracle over all k for each entry
    auto oracle = [&](int i, int j) {
        double best = kInf;
        for (int k = 0; k < 2; ++k) best = std::min(best, am(i, k) + bm(k, j));
        return best;
    };
    MinPlusMatrix prod = minplus_mul(a, b);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(prod.m(i, j) == oracle(i, j));
    Eigen::MatrixXd expect(2, 2);
    expect << 0, 1, 1, 0;
    CHECK(prod.m == expect);

    CHECK(minplus_add(a, MinPlusMatrix::all_infinite(2)).m == a.m);
    CHECK(minplus_mul(a, MinPlusMatrix::identity(2)).m == a.m);
    CHECK_THROWS_AS(minplus_add(a, MinPlusMatrix::identity(3)), DomainError);
}

TEST_CASE("tropical trace and spectral variant") {
    Eigen::MatrixXd d = Eigen::MatrixXd::Constant(3, 3, kInf);
    d(0, 0) = 3;
    d(1, 1) = 1;
    d(2, 2) = 4;
    CHECK(trop_trace(MinPlusMatrix(d)).value == 1.0);

    Eigen::MatrixXd dd = Eigen::MatrixXd::Zero(3, 3);
    dd.diagonal() << 3, 1, 4;
    CHECK(trop_trace_spectral(SymMatrix(dd)).value == doctest::Approx(1.0));

    Eigen::MatrixXd m(2, 2);
    m << 2, 1, 1, 2;
    double lam = trop_trace_spectral(SymMatrix(m)).value;
    CHECK(lam == doctest::Approx(1.0).epsilon(1e-12));
    // characteristic polynomial residual at the reported eigenvalue
    CHECK(std::abs((2 - lam) * (2 - lam) - 1.0) < 1e-10);

    Eigen::MatrixXd neg = -Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(trop_trace_spectral(SymMatrix(neg)), DomainError);
}

TEST_CASE("quantum entropy evaluators") {
    DensityMatrix uniform(diag2(0.5, 0.5));
    CHECK(quantum_entropy_eval(QuantumEntropy::VonNeumann, uniform) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));

    // S(rho || rho) = 0 for strictly positive rho
    for (int t = 0; t < 5; ++t) {
        DensityMatrix rho = random_density(3);
        CHECK(quantum_entropy_eval(QuantumEntropy::Relative, rho, &rho) ==
              doctest::Approx(0.0).epsilon(1e-10));
        CHECK(std::abs(quantum_entropy_eval(QuantumEntropy::BelavkinStaszewski, rho, &rho)) <
              1e-9);
        CHECK(std::abs(quantum_entropy_eval(QuantumEntropy::UmegakiDeformed, rho, &rho, 0.5)) <
              1e-9);
    }

    // S_{q=2}(diag(1/4,3/4)) = -log(10/16); Tr(rho^2) = 10/16 exactly
    DensityMatrix skew(diag2(0.25, 0.75));
    CHECK(quantum_entropy_eval(QuantumEntropy::Renyi, skew, nullptr, 2.0) ==
          doctest::Approx(-std::log(10.0 / 16.0)).epsilon(1e-12));

    // diagonal case reduces to the classical functionals
    DensityMatrix diag(diag2(0.3, 0.7));
    CHECK(quantum_entropy_eval(QuantumEntropy::Tsallis, diag, nullptr, 2.0) ==
          doctest::Approx(entropy_eval(Entropy::tsallis(2.0), ProbVector({0.3, 0.7}))));

    // relative entropy nonnegativity on random pairs
    for (int t = 0; t < 10; ++t) {
        DensityMatrix rho = random_density(3), sig = random_density(3);
        CHECK(quantum_entropy_eval(QuantumEntropy::Relative, rho, &sig) >= -1e-10);
    }

    DensityMatrix singular(diag2(1.0, 0.0));
    DensityMatrix rho = random_density(2);
    CHECK_THROWS_AS(quantum_entropy_eval(QuantumEntropy::Relative, rho, &singular),
                    DomainError);
    CHECK_THROWS_AS(quantum_entropy_eval(QuantumEntropy::Renyi, rho, nullptr, 1.0),
                    DomainError);
}

TEST_CASE("deformed trace") {
    Entropy vn = Entropy::shannon();

    SUBCASE("diagonal reduction to the deformed addition") {
        std::uniform_real_distribution<double> ud(0.0, 4.0);
        for (int t = 0; t < 30; ++t) {
            double x = ud(rng()), y = ud(rng());
            Beta b(0.5 + (t % 4));
            double dt = deformed_trace(SymMatrix(diag2(x, y)), b, vn);
            std::vector<ExtReal> xs = {ExtReal{x}, ExtReal{y}};
            CHECK(dt == doctest::Approx(thermo_add_n(xs, b, vn).value).epsilon(1e-12));
        }
    }

    SUBCASE("identity 2x2 at beta=1: 1 - log 2, with direct minimization oracle") {
        SymMatrix id2(Eigen::MatrixXd::Identity(2, 2));
        double got = deformed_trace(id2, Beta(1.0), vn);
        CHECK(got == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-12));
        // oracle: min over rho = diag(p, 1-p) on a grid
        double best = kInf;
        for (int i = 0; i <= 100000; ++i) {
            double p = i / 100000.0;
            double s = 0.0;
            if (p > 0) s -= p * std::log(p);
            if (p < 1) s -= (1 - p) * std::log(1 - p);
            best = std::min(best, 1.0 - s);
        }
        CHECK(std::abs(got - best) < 1e-9);
    }

    SUBCASE("zero-temperature limit and bound") {
        for (int t = 0; t < 10; ++t) {
            SymMatrix a = random_psd(4);
            double lmin = a.eigenvalues().minCoeff();
            CHECK(deformed_trace(a, Beta::infinity(), vn) == doctest::Approx(lmin));
            for (int k = 1; k <= 6; ++k) {
                Beta b(std::pow(10.0, k));
                double v = deformed_trace(a, b, vn);
                CHECK(std::abs(v - lmin) <= std::log(4.0) / b.value() + 1e-12);
            }
        }
    }

    SUBCASE("Gibbs optimality") {
        SymMatrix a = random_psd(3);
        Beta b(1.0);
        double dt = deformed_trace(a, b, vn);
        for (int t = 0; t < 100; ++t) {
            DensityMatrix rho = random_density(3);
            double n = quantum_entropy_eval(QuantumEntropy::VonNeumann, rho);
            double obj = (rho.mat() * a.mat()).trace() - n / b.value();
            CHECK(dt <= obj + 1e-10);
        }
    }

    SUBCASE("unitary invariance") {
        for (int t = 0; t < 10; ++t) {
            SymMatrix a = random_psd(4);
            Eigen::MatrixXd q = random_orthogonal(4);
            SymMatrix conj(q * a.mat() * q.transpose(), 1e-7);
            CHECK(std::abs(deformed_trace(a, Beta(2.0), vn) -
                           deformed_trace(conj, Beta(2.0), vn)) < 1e-8);
        }
    }

    SUBCASE("restricted minimization for Renyi/Tsallis") {
        SymMatrix a = random_psd(3);
        auto res = deformed_trace_info(a, Beta(1.0), Entropy::tsallis(2.0));
        CHECK(res.restricted);
        // still bounded by the undeformed minimum from above
        CHECK(res.value <= a.eigenvalues().minCoeff() + 1e-12);
    }

    Eigen::MatrixXd neg = -Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(deformed_trace(SymMatrix(neg), Beta(1.0), vn), DomainError);
}

TEST_CASE("free-energy decomposition") {
    Entropy vn = Entropy::shannon();
    Beta b(1.0);

    SUBCASE("Gibbs state attains the minimum") {
        SymMatrix a = random_psd(3);
        DensityMatrix gibbs = gibbs_state(a, b);
        auto r = free_energy_decompose(a, gibbs, b);
        CHECK(r.relative_entropy_term == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(r.lhs == doctest::Approx(deformed_trace(a, b, vn)).epsilon(1e-9));
    }

    SUBCASE("zero observable") {
        SymMatrix zero(Eigen::MatrixXd::Zero(3, 3));
        DensityMatrix rho = random_density(3);
        auto r = free_energy_decompose(zero, rho, b);
        double n = quantum_entropy_eval(QuantumEntropy::VonNeumann, rho);
        CHECK(r.lhs == doctest::Approx(-n).epsilon(1e-10));
        CHECK(std::abs(r.lhs - r.rhs) < 1e-9);
    }

    SUBCASE("dual-path residual on random instances") {
        for (int t = 0; t < 100; ++t) {
            SymMatrix a = random_psd(3);
            DensityMatrix rho = random_density(3);
            auto r = free_energy_decompose(a, rho, b);
            CHECK(std::abs(r.lhs - r.rhs) <= 1e-9);
        }
    }

    DensityMatrix singular(diag2(1.0, 0.0));
    CHECK_THROWS_AS(free_energy_decompose(SymMatrix(Eigen::MatrixXd::Identity(2, 2)),
                                          singular, b),
                    DomainError);
}

TEST_CASE("direct and Kronecker sums") {
    Eigen::MatrixXd one(1, 1), two(1, 1);
    one << 1;
    two << 2;
    SymMatrix a1(one), a2(two);

    SymMatrix block = direct_sum(a1, a2);
    CHECK(block.mat() == diag2(1, 2));

    // spectrum of the block sum is the union: spectral trace is the min
    for (int t = 0; t < 5; ++t) {
        SymMatrix p = random_psd(2), q = random_psd(3);
        double lhs = trop_trace_spectral(direct_sum(p, q)).value;
        double rhs = std::min(trop_trace_spectral(p).value, trop_trace_spectral(q).value);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }

    // deformed trace is odot-additive over the Kronecker sum
    Entropy vn = Entropy::shannon();
    for (int t = 0; t < 10; ++t) {
        int n1 = 2 + t % 3, n2 = 2 + (t + 1) % 4;
        SymMatrix p = random_psd(n1), q = random_psd(n2);
        Beta b(0.5 + t % 3);
        double sum = deformed_trace(kronecker_sum(p, q), b, vn);
        double parts = deformed_trace(p, b, vn) + deformed_trace(q, b, vn);
        CHECK(std::abs(sum - parts) <= 1e-9);
    }
}
