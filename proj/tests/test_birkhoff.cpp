#include <doctest.h>

#include <cmath>
#include <random>

#include "trop/birkhoff.hpp"

using namespace trop;

namespace {

// sequence-valued edge-count character: psi(Gamma)(n) = |E(Gamma)| * n,
// machine index n = 1..len (integer values keep tropical arithmetic exact)
Character seq_edge_count(size_t len) {
    Character c;
    c.name = "seq-edge-count";
    c.kind = Value::Kind::Sequence;
    c.length = len;
    c.eval_connected = [len](const Graph& g) {
        std::vector<double> v(len);
        for (size_t n = 0; n < len; ++n) v[n] = double(g.n_edges()) * double(n + 1);
        return Value::sequence(v);
    };
    return c;
}

std::vector<Graph> small_family() {
    return {Graph::single_edge(), Graph::path(2),   Graph::path(3),
            Graph::cycle(3),      Graph::cycle(4),  Graph::banana(2),
            Graph::banana(3),     Graph::cycle(1),  // single loop
            Graph({0, 1, 2}, {{0, 1}, {0, 1}, {1, 2}})};
}

}  // namespace

TEST_CASE("partial-sum operator") {
    SUBCASE("tropical prefix minimum") {
        auto op = partial_sum_rb(Beta::infinity(), 3);
        Value f = Value::sequence({5, 1, 4});
        CHECK(op.apply(f).data == std::vector<double>{kInf, 5, 1});
    }

    SUBCASE("finite beta on the zero sequence gives -log(n-1)") {
        auto op = partial_sum_rb(Beta(1.0), 5);
        Value f = Value::sequence({0, 0, 0, 0, 0});
        Value t = op.apply(f);
        CHECK(t.data[0] == kInf);
        CHECK(t.data[1] == 0.0);
        CHECK(t.data[2] == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
        CHECK(t.data[3] == doctest::Approx(-std::log(3.0)).epsilon(1e-12));
        CHECK(t.data[4] == doctest::Approx(-std::log(4.0)).epsilon(1e-12));
    }

    SUBCASE("weight +1 identity: exact at beta=inf, tight at finite beta") {
        auto trop_op = partial_sum_rb(Beta::infinity(), 6);
        CHECK(certify_rb(trop_op, 100).max_residual == 0.0);
        for (double b : {0.5, 1.0, 2.0}) {
            auto op = partial_sum_rb(Beta(b), 6);
            auto rep = certify_rb(op, 100);
            CHECK(rep.pass);
            CHECK(rep.max_residual <= 1e-9);
        }
    }

    SUBCASE("deformed-linearity shift check") {
        auto op = partial_sum_rb(Beta(1.5), 6);
        CHECK(shift_equivariance_residual(op) <= 1e-12);
    }
}

TEST_CASE("q-integral operator") {
    Beta b1(1.0);

    SUBCASE("monomial closed form q^n/(1-q^n)") {
        auto op = q_integral_rb(0.5, b1, 4);
        Value mono = Value::series({0, 0, 1, 0, 0});  // t^2 on the exponential side
        Value t = op.apply(mono);
        CHECK(t.data[2] == doctest::Approx(0.25 / (1 - 0.25)).epsilon(1e-15));
        CHECK(t.data[1] == 0.0);
    }

    SUBCASE("closed form matches the truncated substitution sum") {
        // oracle: sum_{k=1..K} alpha(q^k t) coefficient-wise, K large enough
        // that the geometric tail is below 1e-12
        const double q = 0.5;
        const int K = 45;
        auto op = q_integral_rb(q, b1, 6);
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> ud(-2.0, 2.0);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> alpha(7, 0.0);
            for (size_t i = 1; i < alpha.size(); ++i) alpha[i] = ud(rng);
            std::vector<double> truncated(7, 0.0);
            for (int k = 1; k <= K; ++k)
                for (size_t n = 1; n < alpha.size(); ++n)
                    truncated[n] += alpha[n] * std::pow(q, double(k) * double(n));
            Value got = op.apply(Value::series(alpha));
            for (size_t n = 0; n < alpha.size(); ++n)
                CHECK(got.data[n] == doctest::Approx(truncated[n]).epsilon(1e-12));
        }
    }

    SUBCASE("constant modes are rejected with the divergence note") {
        auto op = q_integral_rb(0.5, b1, 3);
        CHECK_THROWS_AS(op.apply(Value::series({1.0, 0, 0, 0})), DomainError);
    }

    SUBCASE("weight +1 identity and linearity at finite beta") {
        auto op = q_integral_rb(0.5, b1, 6);
        auto rep = certify_rb(op, 100);
        CHECK(rep.pass);
        CHECK(rep.max_residual <= 1e-9);
        CHECK(shift_equivariance_residual(op) <= 1e-12);
        auto op_neg = q_integral_rb(-0.5, b1, 6);
        CHECK(certify_rb(op_neg, 100).pass);
    }

    CHECK_THROWS_AS(q_integral_rb(1.5, b1, 4), DomainError);
    CHECK_THROWS_AS(q_integral_rb(0.5, Beta::infinity(), 4), DomainError);
}

TEST_CASE("projection operator") {
    SUBCASE("masking examples") {
        auto all = projection_rb({true, true, true});
        Value f = Value::sequence({1, 2, 3});
        CHECK(all.apply(f).data == f.data);

        auto even = projection_rb({false, true, false, true});
        Value g = Value::sequence({1, 2, 3, 4});
        CHECK(even.apply(g).data == std::vector<double>{kInf, 2, kInf, 4});
        // idempotency, exactly
        CHECK(even.apply(even.apply(g)).data == even.apply(g).data);
    }

    SUBCASE("weight -1 identity holds exactly; superadditive with equality") {
        auto op = projection_rb({true, false, true, false, true});
        CHECK(certify_rb(op, 100).max_residual == 0.0);
        auto add = check_additivity(op, 100);
        CHECK(add.superadditive);
        CHECK(add.subadditive);  // equality case
    }
}

TEST_CASE("operator certification catches violations") {
    // doubling is monotone but fails the weight +1 identity
    RBOperator bad = partial_sum_rb(Beta::infinity(), 4);
    bad.name = "doubling";
    bad.apply = [](const Value& f) {
        Value out = f;
        for (double& x : out.data) x *= 2.0;
        return out;
    };
    auto rep = certify_rb(bad, 50);
    CHECK_FALSE(rep.pass);

    Character psi = seq_edge_count(4);
    std::vector<Graph> graphs = {Graph::single_edge()};
    CHECK_THROWS_AS(factorize(psi, bad, Beta::infinity(), graphs), CertificationError);
    // wrong weight is a domain error, not a certification failure
    auto proj = projection_rb({true, true, true, true});
    CHECK_THROWS_AS(factorize(psi, proj, Beta::infinity(), graphs), DomainError);
}

TEST_CASE("tropical factorization golden table on the 2-edge path") {
    // psi(Gamma)(n) = |E| n, partial-sum at beta = inf, N = 4.
    Character psi = seq_edge_count(4);
    auto op = partial_sum_rb(Beta::infinity(), 4);
    FactorizationSession sess(psi, op, Beta::infinity());

    const FactorEntry& edge = sess.eval(Graph::single_edge());
    CHECK(edge.tilde.data == std::vector<double>{1, 2, 3, 4});
    CHECK(edge.minus.data == std::vector<double>{kInf, 1, 1, 1});
    CHECK(edge.plus.data == std::vector<double>{1, 1, 1, 1});

    const FactorEntry& path = sess.eval(Graph::path(2));
    CHECK(path.tilde.data == std::vector<double>{2, 3, 4, 5});
    CHECK(path.minus.data == std::vector<double>{kInf, 2, 2, 2});
    CHECK(path.plus.data == std::vector<double>{2, 2, 2, 2});
}

TEST_CASE("factorization certificates over the small family") {
    Character psi = seq_edge_count(5);
    std::vector<Graph> graphs = small_family();

    SUBCASE("beta = inf: defining relation and multiplicativity hold exactly") {
        auto op = partial_sum_rb(Beta::infinity(), 5);
        auto res = factorize(psi, op, Beta::infinity(), graphs);
        CHECK(res.cert.pass);
        CHECK(res.max_convolution_residual == 0.0);
        CHECK(res.max_multiplicativity_residual == 0.0);
    }

    SUBCASE("finite beta within 1e-9") {
        for (double b : {0.5, 1.0, 2.0}) {
            auto op = partial_sum_rb(Beta(b), 5);
            auto res = factorize(psi, op, Beta(b), graphs);
            CHECK(res.max_convolution_residual <= 1e-9);
            CHECK(res.max_multiplicativity_residual <= 1e-9);
        }
    }

    SUBCASE("primitive graphs: psi_- = T(psi), psi_+ = min{psi_-, psi}") {
        auto op = partial_sum_rb(Beta::infinity(), 5);
        FactorizationSession sess(psi, op, Beta::infinity());
        Graph loop = Graph::cycle(1);
        const FactorEntry& e = sess.eval(loop);
        Value direct = op.apply(char_eval(psi, loop));
        CHECK(value_distance(e.minus, direct) == 0.0);
        CHECK(value_distance(e.plus, oplus(direct, char_eval(psi, loop), Beta::infinity())) ==
              0.0);
    }
}

TEST_CASE("beta convergence to the tropical factorization") {
    Character psi = seq_edge_count(5);
    std::vector<Graph> graphs = small_family();
    auto op_inf = partial_sum_rb(Beta::infinity(), 5);
    FactorizationSession tropical(psi, op_inf, Beta::infinity());

    for (double b : {10.0, 100.0, 1000.0}) {
        auto op = partial_sum_rb(Beta(b), 5);
        FactorizationSession deformed(psi, op, Beta(b));
        for (const Graph& g : graphs) {
            const FactorEntry& e0 = tropical.eval(g);
            const FactorEntry& eb = deformed.eval(g);
            // |psi_beta - psi_inf| <= log(m)/beta with m the accumulated
            // term count of the recursion
            CHECK(value_distance(eb.tilde, e0.tilde) <= std::log(eb.m_tilde) / b + 1e-12);
            CHECK(value_distance(eb.minus, e0.minus) <= std::log(eb.m_minus) / b + 1e-12);
            CHECK(value_distance(eb.plus, e0.plus) <= std::log(eb.m_plus) / b + 1e-12);
        }
    }
}

TEST_CASE("classical Bogolyubov-Parashchuk oracle") {
    // phi(Gamma)(n) = n^{|E|}: multiplicative, exp-shaped
    auto phi = [](const Graph& g) {
        std::vector<double> v(4);
        for (size_t n = 0; n < 4; ++n) v[n] = std::pow(double(n + 1), double(g.n_edges()));
        return v;
    };

    SUBCASE("golden table for the 2-edge path, weight +1 partial sums") {
        ClassicalBirkhoff oracle(phi, classical_partial_sum, +1.0, Value::Kind::Sequence, 4);
        const ClassicalEntry& edge = oracle.eval(Graph::single_edge());
        CHECK(edge.tilde == std::vector<double>{1, 2, 3, 4});
        CHECK(edge.minus == std::vector<double>{0, 1, 3, 6});
        CHECK(edge.plus == std::vector<double>{1, 3, 6, 10});

        const ClassicalEntry& path = oracle.eval(Graph::path(2));
        // tilde(n) = n^2 + 2 (n(n-1)/2) n = n^3
        CHECK(path.tilde == std::vector<double>{1, 8, 27, 64});
        CHECK(path.minus == std::vector<double>{0, 1, 9, 36});
        CHECK(path.plus == std::vector<double>{1, 9, 36, 100});
    }

    SUBCASE("weight -1 with a projection mask: phi_+ = (1 - T)(phi~)") {
        auto mask_op = [](const std::vector<double>& a) {
            std::vector<double> out = a;
            for (size_t i = 0; i < out.size(); i += 2) out[i] = 0.0;  // keep odd slots
            return out;
        };
        ClassicalBirkhoff oracle(phi, mask_op, -1.0, Value::Kind::Sequence, 4);
        const ClassicalEntry& e = oracle.eval(Graph::path(2));
        for (size_t i = 0; i < 4; ++i) {
            double expect = (i % 2 == 0) ? e.tilde[i] : 0.0;
            CHECK(e.plus[i] == doctest::Approx(expect));
        }
    }
}

TEST_CASE("exponential conjugation against the classical oracle") {
    Character psi = seq_edge_count(5);
    std::vector<Graph> graphs = {Graph::single_edge(), Graph::path(2), Graph::path(3),
                                 Graph::cycle(3),      Graph::banana(2), Graph::banana(3),
                                 Graph::cycle(4),      Graph::path(4)};
    for (double b : {0.5, 1.0, 2.0}) {
        auto op = partial_sum_rb(Beta(b), 5);
        auto rep = exp_conjugation_check(psi, op, Beta(b), graphs);
        CHECK(rep.max_residual <= 1e-8);
    }
    // primitive graph: one exp/log round trip
    auto op = partial_sum_rb(Beta(1.0), 5);
    std::vector<Graph> prim = {Graph::single_edge()};
    CHECK(exp_conjugation_check(psi, op, Beta(1.0), prim).max_residual <= 1e-13);
}

TEST_CASE("matrix Rota-Baxter identity for the deformed trace") {
    std::mt19937 rng(23);
    std::normal_distribution<double> nd;
    auto random_spd = [&](int n) {
        Eigen::MatrixXd g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = nd(rng);
        Eigen::MatrixXd m = 0.5 * (g + g.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        Eigen::VectorXd lam = es.eigenvalues();
        for (int i = 0; i < n; ++i) lam[i] = std::min(std::abs(lam[i]), 2.0) + 0.05;
        return SymMatrix(es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose());
    };

    SUBCASE("1x1 zero matrices reduce to the scalar weight-one identity") {
        std::vector<SymMatrix> a(4, SymMatrix(Eigen::MatrixXd::Zero(1, 1)));
        auto rep = matrix_rb_check(a, a, Beta(1.0));
        CHECK(rep.max_residual <= 1e-12);
        CHECK(std::isinf(rep.lhs[0]));
        // coordinate 2 (0-based): T on zeros is -log(m)/1; the identity value
        // matches the scalar partial-sum identity on the zero sequence
        auto op = partial_sum_rb(Beta(1.0), 4);
        Value z = Value::sequence({0, 0, 0, 0});
        Value t = op.apply(z);
        CHECK(rep.lhs[2] == doctest::Approx(2.0 * t.data[2]).epsilon(1e-12));
    }

    SUBCASE("random 2x2 PSD pairs at beta = 1") {
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<SymMatrix> a, b;
            for (int m = 0; m < 4; ++m) {
                a.push_back(random_spd(2));
                b.push_back(random_spd(2));
            }
            auto rep = matrix_rb_check(a, b, Beta(1.0));
            CHECK(rep.max_residual <= 1e-8);
        }
    }

    SUBCASE("large beta: identity stays exact, tropicalized gap <= log(3)/beta") {
        std::vector<SymMatrix> a, b;
        for (int m = 0; m < 4; ++m) {
            a.push_back(random_spd(2));
            b.push_back(random_spd(2));
        }
        for (double beta : {10.0, 30.0, 100.0}) {
            auto rep = matrix_rb_check(a, b, Beta(beta));
            CHECK(rep.max_residual <= 1e-8);
            for (size_t m = 1; m < rep.lhs.size(); ++m) {
                CHECK(rep.lhs[m] <= rep.rhs_tropical[m] + 1e-10);
                CHECK(rep.rhs_tropical[m] - rep.lhs[m] <= std::log(3.0) / beta + 1e-10);
            }
        }
    }
}

TEST_CASE("weight -1 factorizations") {
    Character psi = seq_edge_count(4);
    std::vector<Graph> graphs = {Graph::single_edge(), Graph::path(2), Graph::cycle(3),
                                 Graph::banana(2)};

    SUBCASE("identity operator: psi_- = psi~ = psi_+") {
        auto id = identity_rb(Value::Kind::Sequence, 4);
        auto res = factorize_minus1(psi, id, graphs);
        for (const auto& [key, e] : res.table) {
            CHECK(value_distance(e.minus, e.tilde) == 0.0);
            CHECK(value_distance(e.plus, e.tilde) == 0.0);
        }
        CHECK(res.max_multiplicativity_residual == 0.0);
    }

    SUBCASE("projection: factorization with masked minus part, exact") {
        auto proj = projection_rb({true, false, true, false});
        auto res = factorize_minus1(psi, proj, graphs);
        CHECK(res.cert.max_residual == 0.0);
        CHECK(res.max_convolution_residual == 0.0);
        CHECK(res.max_multiplicativity_residual == 0.0);
        for (const auto& [key, e] : res.table) {
            CHECK(e.minus.data[1] == kInf);
            CHECK(e.minus.data[3] == kInf);
        }
    }

    SUBCASE("max-plus variant with a linear operator") {
        Character mp;
        mp.name = "maxplus-edges";
        mp.kind = Value::Kind::Scalar;
        mp.mode = Mode::MaxPlus;
        mp.eval_connected = [](const Graph& g) {
            return Value::scalar(double(g.n_edges()), Mode::MaxPlus);
        };
        auto id = identity_rb(Value::Kind::Scalar, 1, Mode::MaxPlus);
        auto res = factorize_minus1(mp, id, graphs);
        CHECK(res.max_convolution_residual == 0.0);
        CHECK(res.max_multiplicativity_residual == 0.0);
        // preparation takes maxima: on the triangle it reaches
        // max{psi} over chains, here psi~ = max{3, gamma-chains}
        FactorizationSession sess(mp, id, Beta::infinity());
        CHECK(sess.eval(Graph::cycle(3)).tilde.scalar_value() >= 3.0);
    }

    // a genuinely non-superadditive weight -1 operator is rejected
    RBOperator shifted = identity_rb(Value::Kind::Sequence, 4);
    shifted.name = "concave-warp";
    shifted.apply = [](const Value& f) {
        Value out = f;
        for (double& x : out.data)
            if (!std::isinf(x)) x = x - 0.25 * x * x;
        return out;
    };
    CHECK_THROWS_AS(factorize_minus1(psi, shifted, graphs), CertificationError);
}

TEST_CASE("pair factorization with two weight -1 operators") {
    Character psi = seq_edge_count(3);
    std::vector<Graph> graphs = {Graph::single_edge(), Graph::path(2), Graph::cycle(3)};

    SUBCASE("T = T~ = identity") {
        auto id = identity_rb(Value::Kind::Sequence, 3);
        auto res = factorize_pair(psi, id, id, graphs);
        CHECK(res.cert_t.pass);
        CHECK(res.relation_residual == 0.0);  // T a = a oplus a = a
        CHECK(res.consistency_residual == 0.0);
        for (const auto& [key, e] : res.base.table) {
            CHECK(value_distance(e.minus, e.tilde) == 0.0);
            CHECK(value_distance(e.plus, e.tilde) == 0.0);
        }
    }

    SUBCASE("reference pair: T f = f oplus r, T~ f = r") {
        // nonnegative reference: both weight -1 identities and the exchange
        // relation hold; T~ is subadditive but not superadditive, which is
        // exactly the hypothesis/proof mismatch the pair construction probes
        Value r = Value::sequence({0.5, 1.0, 0.25});
        auto t = min_with_reference_rb(r);
        auto tt = constant_reference_rb(r);
        auto res = factorize_pair(psi, t, tt, graphs);
        CHECK(res.cert_t.pass);
        CHECK(res.cert_t_tilde.pass);
        CHECK(res.relation_residual == 0.0);
        CHECK(res.exchange_residual == 0.0);
        CHECK(res.consistency_residual == 0.0);
        CHECK(res.additivity_t_tilde.subadditive);
        CHECK_FALSE(res.additivity_t_tilde.superadditive);

        // negative reference: the T~ identity fails and the report says so
        Value neg = Value::sequence({-0.5, -1.0, -0.25});
        auto res2 = factorize_pair(psi, min_with_reference_rb(neg),
                                   constant_reference_rb(neg), graphs);
        CHECK_FALSE(res2.cert_t_tilde.pass);
        CHECK(res2.additivity_t_tilde.superadditive);
    }
}
