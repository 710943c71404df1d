#include "trop/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

namespace trop {

namespace {

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size(), 0.0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (size_t j = 0; j + i < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

}  // namespace

RBOperator partial_sum_rb(const Beta& beta, size_t length, Mode mode) {
    if (length == 0) throw DomainError("partial-sum operator needs positive length");
    RBOperator op;
    op.name = "partial-sum";
    op.weight = 1.0;
    op.additivity = RBOperator::Additivity::OplusAdditive;
    op.beta = beta;
    op.domain = Value::Kind::Sequence;
    op.mode = mode;
    op.length = length;
    op.bound_amplification = double(length);
    op.apply = [beta, length, mode](const Value& f) {
        if (f.kind != Value::Kind::Sequence || f.length() != length || f.mode != mode)
            throw DomainError("partial-sum operator domain mismatch");
        Value out = Value::oplus_identity(Value::Kind::Sequence, length, mode);
        const bool maxplus = mode == Mode::MaxPlus;
        std::vector<double> prefix;
        prefix.reserve(length);
        for (size_t n = 1; n < length; ++n) {
            prefix.push_back(maxplus ? -f.data[n - 1] : f.data[n - 1]);
            double v = beta.is_inf() ? *std::min_element(prefix.begin(), prefix.end())
                                     : lse_min(prefix, beta.value());
            out.data[n] = maxplus ? -v : v;
        }
        return out;
    };
    return op;
}

RBOperator q_integral_rb(double q, const Beta& beta, size_t order) {
    if (!(std::abs(q) < 1.0) || q == 0.0)
        throw DomainError("q-integral requires 0 < |q| < 1");
    if (beta.is_inf()) throw DomainError("q-integral operator is defined at finite beta");
    RBOperator op;
    op.name = "q-integral";
    op.weight = 1.0;
    op.additivity = RBOperator::Additivity::OplusAdditive;
    op.beta = beta;
    op.domain = Value::Kind::Series;
    op.mode = Mode::MinPlus;
    op.length = order + 1;
    op.apply = [q, order](const Value& f) {
        if (f.kind != Value::Kind::Series || f.length() != order + 1)
            throw DomainError("q-integral operator domain mismatch");
        if (f.data[0] != 0.0)
            throw DomainError(
                "q-integral needs series with no constant mode (the substitution sum "
                "diverges on constants)");
        Value out = f;
        for (size_t n = 1; n <= order; ++n) {
            double qn = std::pow(q, double(n));
            out.data[n] = f.data[n] * qn / (1.0 - qn);
        }
        return out;
    };
    return op;
}

RBOperator projection_rb(std::vector<bool> mask, Mode mode) {
    if (mask.empty()) throw DomainError("projection mask is empty");
    RBOperator op;
    op.name = "projection";
    op.weight = -1.0;
    op.additivity = RBOperator::Additivity::LinearIdempotent;
    op.beta = Beta::infinity();
    op.domain = Value::Kind::Sequence;
    op.mode = mode;
    op.length = mask.size();
    const double drop = mode == Mode::MinPlus ? kInf : -kInf;
    op.apply = [mask = std::move(mask), drop](const Value& f) {
        if (f.kind != Value::Kind::Sequence || f.length() != mask.size())
            throw DomainError("projection operator domain mismatch");
        Value out = f;
        for (size_t i = 0; i < mask.size(); ++i)
            if (!mask[i]) out.data[i] = drop;
        return out;
    };
    return op;
}

RBOperator identity_rb(Value::Kind kind, size_t length, Mode mode) {
    if (kind == Value::Kind::Series)
        throw DomainError("identity operator is not provided on series elements");
    RBOperator op;
    op.name = "identity";
    op.weight = -1.0;
    op.additivity = RBOperator::Additivity::LinearIdempotent;
    op.beta = Beta::infinity();
    op.domain = kind;
    op.mode = mode;
    op.length = length;
    op.apply = [](const Value& f) { return f; };
    return op;
}

RBOperator min_with_reference_rb(Value reference) {
    RBOperator op;
    op.name = "min-with-reference";
    op.weight = -1.0;
    op.additivity = RBOperator::Additivity::OplusAdditive;
    op.beta = Beta::infinity();
    op.domain = reference.kind;
    op.mode = reference.mode;
    op.length = reference.length();
    op.apply = [ref = std::move(reference)](const Value& f) {
        return oplus(f, ref, Beta::infinity());
    };
    return op;
}

RBOperator constant_reference_rb(Value reference) {
    RBOperator op;
    op.name = "constant-reference";
    op.weight = -1.0;
    op.additivity = RBOperator::Additivity::OplusAdditive;
    op.beta = Beta::infinity();
    op.domain = reference.kind;
    op.mode = reference.mode;
    op.length = reference.length();
    op.apply = [ref = std::move(reference)](const Value& f) {
        if (!f.compatible_with(ref)) throw DomainError("constant operator domain mismatch");
        return ref;
    };
    return op;
}

namespace {

Value random_value(const RBOperator& op, std::mt19937& rng, bool allow_inf) {
    std::uniform_real_distribution<double> ud(-3.0, 3.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<double> d(op.length);
    if (op.domain == Value::Kind::Series) {
        for (size_t i = 1; i < d.size(); ++i) d[i] = ud(rng);
        d[0] = 0.0;
        return Value::series(std::move(d));
    }
    const double inf = op.mode == Mode::MinPlus ? kInf : -kInf;
    for (double& x : d) x = (allow_inf && u01(rng) < 0.1) ? inf : ud(rng);
    if (op.domain == Value::Kind::Scalar) return Value::scalar(d[0], op.mode);
    return Value::sequence(std::move(d), op.mode);
}

// Both sides of the declared Rota-Baxter identity at |lambda| = 1, where
// the log|lambda| correction vanishes.
double identity_residual(const RBOperator& op, const Value& f1, const Value& f2) {
    const Beta& b = op.beta;
    Value t1 = op.apply(f1), t2 = op.apply(f2);
    Value mixed1 = op.apply(odot(t1, f2));
    Value mixed2 = op.apply(odot(f1, t2));
    Value plain = op.apply(odot(f1, f2));
    if (op.weight > 0) {
        Value lhs = odot(t1, t2);
        Value terms[3] = {mixed1, mixed2, plain};
        Value rhs = oplus_many(std::span<const Value>(terms, 3), b);
        return value_distance(lhs, rhs);
    }
    Value lhs_terms[2] = {odot(t1, t2), plain};
    Value lhs = oplus_many(std::span<const Value>(lhs_terms, 2), b);
    Value rhs_terms[2] = {mixed1, mixed2};
    Value rhs = oplus_many(std::span<const Value>(rhs_terms, 2), b);
    return value_distance(lhs, rhs);
}

}  // namespace

CertReport certify_rb(const RBOperator& op, int n_samples, double tol, unsigned seed) {
    if (std::abs(std::abs(op.weight) - 1.0) > 1e-15)
        throw DomainError("certification covers weights +1 and -1 only");
    std::mt19937 rng(seed);
    CertReport rep;
    rep.operator_name = op.name;
    rep.weight = op.weight;
    rep.samples = n_samples;
    bool allow_inf = op.domain != Value::Kind::Series;
    for (int s = 0; s < n_samples; ++s) {
        Value f1 = random_value(op, rng, allow_inf);
        Value f2 = random_value(op, rng, allow_inf);
        rep.max_residual = std::max(rep.max_residual, identity_residual(op, f1, f2));
    }
    rep.pass = rep.max_residual <= tol;
    return rep;
}

AdditivityReport check_additivity(const RBOperator& op, int n_samples, double tol,
                                  unsigned seed) {
    std::mt19937 rng(seed);
    AdditivityReport rep;
    for (int s = 0; s < n_samples; ++s) {
        Value f = random_value(op, rng, false);
        Value g = random_value(op, rng, false);
        Value joint = op.apply(odot(f, g));
        Value split = odot(op.apply(f), op.apply(g));
        for (size_t i = 0; i < joint.data.size(); ++i) {
            double d = split.data[i] - joint.data[i];  // > 0 violates superadditivity
            if (std::isnan(d)) continue;               // inf - inf patterns
            double sup = op.mode == Mode::MinPlus ? d : -d;
            rep.worst_superadditivity = std::max(rep.worst_superadditivity, sup);
            rep.worst_subadditivity = std::max(rep.worst_subadditivity, -sup);
        }
    }
    rep.superadditive = rep.worst_superadditivity <= tol;
    rep.subadditive = rep.worst_subadditivity <= tol;
    return rep;
}

double shift_equivariance_residual(const RBOperator& op, int n_samples, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ud(-2.0, 2.0);
    double worst = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        Value f = random_value(op, rng, false);
        double c = ud(rng);
        Value shifted = f;
        Value expected = op.apply(f);
        if (f.kind == Value::Kind::Series) {
            // c odot gamma multiplies the exponential side by exp(-beta c)
            double factor = std::exp(-op.beta.value() * c);
            for (double& x : shifted.data) x *= factor;
            for (double& x : expected.data) x *= factor;
        } else {
            for (double& x : shifted.data) x += c;
            for (double& x : expected.data) x += c;
        }
        worst = std::max(worst, value_distance(op.apply(shifted), expected));
    }
    return worst;
}

FactorizationSession::FactorizationSession(Character psi, RBOperator op, Beta beta,
                                           Admissibility adm)
    : psi_(std::move(psi)), op_(std::move(op)), beta_(beta), adm_(std::move(adm)) {
    if (psi_.kind != op_.domain || psi_.mode != op_.mode || psi_.length != op_.length)
        throw DomainError("character and operator live on different semirings");
    if (!(op_.beta == beta_))
        throw DomainError("operator beta does not match the session beta");
}

std::string FactorizationSession::key_of(const Graph& g) const {
    return psi_.iso_invariant ? g.canonical_string() : ("exact:" + g.to_json());
}

const FactorEntry& FactorizationSession::eval(const Graph& g) {
    std::string key = key_of(g);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    FactorEntry entry;
    if (g.n_edges() == 0) {
        Value u = psi_.unit_value();
        entry = {u, u, u, 1.0, 1.0, 1.0};
    } else {
        std::vector<Value> terms = {char_eval(psi_, g)};
        std::vector<double> weights = {1.0};
        std::vector<double> counts = {1.0};
        for (const CoproductTerm& t : coproduct(g, adm_, psi_.iso_invariant)) {
            const FactorEntry& sub = eval(t.sub);
            terms.push_back(odot(sub.minus, char_eval(psi_, t.quotient)));
            weights.push_back(double(t.multiplicity));
            counts.push_back(sub.m_minus);
        }
        entry.tilde = oplus_many(terms, beta_, weights);
        entry.m_tilde = 0.0;
        for (size_t i = 0; i < counts.size(); ++i) entry.m_tilde += weights[i] * counts[i];
        entry.minus = op_.apply(entry.tilde);
        entry.m_minus = entry.m_tilde * op_.bound_amplification;
        entry.plus = oplus(entry.minus, entry.tilde, beta_);
        entry.m_plus = entry.m_minus + entry.m_tilde;
    }
    auto [pos, inserted] = memo_.emplace(std::move(key), std::move(entry));
    (void)inserted;
    return pos->second;
}

double FactorizationSession::convolution_residual(const Graph& g) {
    const FactorEntry& e = eval(g);
    std::vector<Value> terms = {e.minus, char_eval(psi_, g)};
    std::vector<double> weights = {1.0, 1.0};
    for (const CoproductTerm& t : coproduct(g, adm_, psi_.iso_invariant)) {
        terms.push_back(odot(eval(t.sub).minus, char_eval(psi_, t.quotient)));
        weights.push_back(double(t.multiplicity));
    }
    Value conv = oplus_many(terms, beta_, weights);
    return value_distance(e.plus, conv);
}

double FactorizationSession::multiplicativity_residual(const Graph& g1, const Graph& g2) {
    Graph u = g1.disjoint_union(g2);
    const FactorEntry eu = eval(u);
    const FactorEntry e1 = eval(g1);
    const FactorEntry e2 = eval(g2);
    double r = value_distance(eu.minus, odot(e1.minus, e2.minus));
    return std::max(r, value_distance(eu.plus, odot(e1.plus, e2.plus)));
}

namespace {

FactorizationResult run_session(FactorizationSession& sess, std::span<const Graph> graphs) {
    FactorizationResult out;
    out.operator_name = sess.op().name;
    for (const Graph& g : graphs) {
        sess.eval(g);
        out.keys.push_back(sess.key_of(g));
        out.max_convolution_residual =
            std::max(out.max_convolution_residual, sess.convolution_residual(g));
    }
    for (size_t i = 0; i + 1 < graphs.size(); ++i)
        out.max_multiplicativity_residual =
            std::max(out.max_multiplicativity_residual,
                     sess.multiplicativity_residual(graphs[i], graphs[i + 1]));
    if (!graphs.empty())
        out.max_multiplicativity_residual =
            std::max(out.max_multiplicativity_residual,
                     sess.multiplicativity_residual(graphs[0], graphs[0]));
    out.table = sess.table();
    return out;
}

}  // namespace

FactorizationResult factorize(const Character& psi, const RBOperator& op, const Beta& beta,
                              std::span<const Graph> graphs, Admissibility adm,
                              int cert_samples, double tol) {
    if (op.weight <= 0) throw DomainError("factorize requires a weight +1 operator");
    CertReport cert = certify_rb(op, cert_samples, tol);
    if (!cert.pass) {
        std::ostringstream os;
        os << "operator '" << op.name << "' failed its Rota-Baxter identity, residual "
           << cert.max_residual;
        throw CertificationError(os.str());
    }
    FactorizationSession sess(psi, op, beta, adm);
    FactorizationResult out = run_session(sess, graphs);
    out.cert = cert;
    return out;
}

FactorizationResult factorize_minus1(const Character& psi, const RBOperator& op,
                                     std::span<const Graph> graphs, Admissibility adm,
                                     int cert_samples, double tol) {
    if (op.weight >= 0) throw DomainError("factorize_minus1 requires a weight -1 operator");
    if (!op.beta.is_inf())
        throw DomainError("the weight -1 path is tropical only (beta = inf)");
    CertReport cert = certify_rb(op, cert_samples, tol);
    if (!cert.pass) {
        std::ostringstream os;
        os << "operator '" << op.name << "' failed its weight -1 identity, residual "
           << cert.max_residual;
        throw CertificationError(os.str());
    }
    AdditivityReport add = check_additivity(op, cert_samples, tol);
    if (!add.superadditive) {
        std::ostringstream os;
        os << "operator '" << op.name << "' is not superadditive (worst violation "
           << add.worst_superadditivity
           << "); the factorization parts need not be characters";
        throw CertificationError(os.str());
    }
    FactorizationSession sess(psi, op, Beta::infinity(), adm);
    FactorizationResult out = run_session(sess, graphs);
    out.cert = cert;
    return out;
}

PairFactorizationResult factorize_pair(const Character& psi, const RBOperator& t,
                                       const RBOperator& t_tilde,
                                       std::span<const Graph> graphs, Admissibility adm,
                                       int cert_samples, double tol) {
    if (t.weight >= 0 || t_tilde.weight >= 0)
        throw DomainError("the pair factorization uses two weight -1 operators");
    if (t.domain != t_tilde.domain || t.length != t_tilde.length || t.mode != t_tilde.mode)
        throw DomainError("pair operators live on different semirings");

    PairFactorizationResult out;
    out.cert_t = certify_rb(t, cert_samples, tol);
    out.cert_t_tilde = certify_rb(t_tilde, cert_samples, tol);
    out.additivity_t = check_additivity(t, cert_samples, tol);
    out.additivity_t_tilde = check_additivity(t_tilde, cert_samples, tol);

    // sampled relations: T a = a oplus T~ a, and the exchange identity
    std::mt19937 rng(17);
    for (int s = 0; s < cert_samples; ++s) {
        Value a = random_value(t, rng, false);
        Value b = random_value(t, rng, false);
        Value lhs = t.apply(a);
        Value rhs = oplus(a, t_tilde.apply(a), Beta::infinity());
        out.relation_residual = std::max(out.relation_residual, value_distance(lhs, rhs));

        Value ex_lhs_terms[2] = {t_tilde.apply(odot(a, b)),
                                 odot(t_tilde.apply(a), t_tilde.apply(b))};
        Value ex_lhs =
            oplus_many(std::span<const Value>(ex_lhs_terms, 2), Beta::infinity());
        Value ex_rhs = t_tilde.apply(
            oplus(odot(t.apply(a), b), odot(a, t.apply(b)), Beta::infinity()));
        out.exchange_residual =
            std::max(out.exchange_residual, value_distance(ex_lhs, ex_rhs));
    }

    FactorizationSession sess(psi, t, Beta::infinity(), adm);
    out.base = run_session(sess, graphs);
    out.base.cert = out.cert_t;
    // psi_+ = T~(psi~); certify psi_- = min{psi~, psi_+}
    for (auto& [key, entry] : out.base.table) {
        entry.plus = t_tilde.apply(entry.tilde);
        Value expect = oplus(entry.tilde, entry.plus, Beta::infinity());
        out.consistency_residual =
            std::max(out.consistency_residual, value_distance(entry.minus, expect));
    }
    if (graphs.size() >= 2) {
        Graph u = graphs[0].disjoint_union(graphs[1]);
        Value pu = t_tilde.apply(sess.eval(u).tilde);
        Value p1 = t_tilde.apply(sess.eval(graphs[0]).tilde);
        Value p2 = t_tilde.apply(sess.eval(graphs[1]).tilde);
        out.base.max_multiplicativity_residual =
            std::max(out.base.max_multiplicativity_residual,
                     value_distance(pu, odot(p1, p2)));
    }
    return out;
}

ClassicalBirkhoff::ClassicalBirkhoff(std::function<RingVec(const Graph&)> phi_connected,
                                     std::function<RingVec(const RingVec&)> t_op,
                                     double weight, Value::Kind kind, size_t length,
                                     Admissibility adm)
    : phi_connected_(std::move(phi_connected)),
      t_op_(std::move(t_op)),
      weight_(weight),
      kind_(kind),
      length_(length),
      adm_(std::move(adm)) {
    if (kind_ == Value::Kind::Scalar) length_ = 1;
}

ClassicalBirkhoff::RingVec ClassicalBirkhoff::phi(const Graph& g) const {
    RingVec acc(length_, 0.0);
    if (kind_ == Value::Kind::Series)
        acc[0] = 1.0;
    else
        std::fill(acc.begin(), acc.end(), 1.0);  // ring unit
    for (const Graph& comp : g.component_graphs()) {
        if (comp.n_edges() == 0) continue;
        RingVec v = phi_connected_(comp);
        if (v.size() != length_) throw DomainError("classical phi length mismatch");
        if (kind_ == Value::Kind::Series) {
            acc = poly_mul(acc, v);
        } else {
            for (size_t i = 0; i < length_; ++i) acc[i] *= v[i];
        }
    }
    return acc;
}

const ClassicalEntry& ClassicalBirkhoff::eval(const Graph& g) {
    std::string key = g.canonical_string();
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    ClassicalEntry entry;
    if (g.n_edges() == 0) {
        RingVec u(length_, 0.0);
        if (kind_ == Value::Kind::Series)
            u[0] = 1.0;
        else
            std::fill(u.begin(), u.end(), 1.0);
        entry = {u, u, u};
    } else {
        RingVec tilde = phi(g);
        for (const CoproductTerm& t : coproduct(g, adm_)) {
            const ClassicalEntry& sub = eval(t.sub);
            RingVec quot = phi(t.quotient);
            RingVec term;
            if (kind_ == Value::Kind::Series) {
                term = poly_mul(sub.minus, quot);
            } else {
                term = sub.minus;
                for (size_t i = 0; i < length_; ++i) term[i] *= quot[i];
            }
            for (size_t i = 0; i < length_; ++i)
                tilde[i] += double(t.multiplicity) * term[i];
        }
        entry.tilde = tilde;
        entry.minus = t_op_(tilde);
        double sign = weight_ > 0 ? 1.0 : -1.0;
        for (double& x : entry.minus) x *= sign;
        entry.plus = entry.tilde;
        for (size_t i = 0; i < length_; ++i) entry.plus[i] += entry.minus[i];
    }
    auto [pos, inserted] = memo_.emplace(std::move(key), std::move(entry));
    (void)inserted;
    return pos->second;
}

std::vector<double> classical_partial_sum(const std::vector<double>& a) {
    std::vector<double> out(a.size(), 0.0);
    double run = 0.0;
    for (size_t i = 1; i < a.size(); ++i) {
        run += a[i - 1];
        out[i] = run;
    }
    return out;
}

ExpConjugationReport exp_conjugation_check(const Character& psi, const RBOperator& op,
                                           const Beta& beta, std::span<const Graph> graphs,
                                           Admissibility adm) {
    if (beta.is_inf()) throw DomainError("exponential conjugation needs finite beta");
    const double b = beta.value();

    // independent classical counterpart of the semiring operator
    std::function<std::vector<double>(const std::vector<double>&)> classical;
    if (op.name == "partial-sum") {
        classical = classical_partial_sum;
    } else {
        throw DomainError("no classical counterpart registered for operator " + op.name);
    }

    auto to_exp = [b](const Value& v) {
        std::vector<double> out(v.data.size());
        for (size_t i = 0; i < out.size(); ++i)
            out[i] = std::isinf(v.data[i]) ? 0.0 : std::exp(-b * v.data[i]);
        return out;
    };
    auto log_residual = [b](const Value& semiring_side, const std::vector<double>& ring) {
        double worst = 0.0;
        for (size_t i = 0; i < ring.size(); ++i) {
            double back = ring[i] <= 0.0 ? kInf : -std::log(ring[i]) / b;
            double ours = semiring_side.data[i];
            if (back == ours) continue;
            if (std::isinf(back) || std::isinf(ours)) return kInf;
            worst = std::max(worst, std::abs(back - ours));
        }
        return worst;
    };

    FactorizationSession sess(psi, op, beta, adm);
    ClassicalBirkhoff oracle([&](const Graph& g) { return to_exp(psi.eval_connected(g)); },
                             classical, /*weight=*/+1.0, psi.kind, psi.length, adm);

    ExpConjugationReport rep;
    for (const Graph& g : graphs) {
        const FactorEntry& e = sess.eval(g);
        const ClassicalEntry& c = oracle.eval(g);
        double r = std::max({log_residual(e.tilde, c.tilde), log_residual(e.minus, c.minus),
                             log_residual(e.plus, c.plus)});
        rep.per_graph[g.canonical_string()] = r;
        rep.max_residual = std::max(rep.max_residual, r);
    }
    return rep;
}

namespace {

using MaybeMatrix = std::optional<Eigen::MatrixXd>;  // nullopt = infinite matrix

// log of a strictly positive definite matrix. The trace-module sym_log
// clamps eigenvalues at 1e-14 for null modes; here the exp(-beta A) factors
// can be far smaller and must round-trip, so only true underflow is guarded.
Eigen::MatrixXd spd_log(const Eigen::MatrixXd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    Eigen::VectorXd d = es.eigenvalues();
    for (int i = 0; i < d.size(); ++i) d[i] = std::log(std::max(d[i], 1e-300));
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

// partial sum through the exponential bridge on matrix sequences:
// out(m) = -log( sum_{k<m} exp(-beta in(k)) )/beta, out(0) infinite
std::vector<MaybeMatrix> matrix_partial_sum(const std::vector<MaybeMatrix>& in, double b) {
    std::vector<MaybeMatrix> out(in.size());
    out[0] = std::nullopt;
    for (size_t m = 1; m < in.size(); ++m) {
        Eigen::MatrixXd sum;
        bool any = false;
        for (size_t k = 0; k < m; ++k) {
            if (!in[k]) continue;
            Eigen::MatrixXd e = sym_exp(-b * (*in[k]));
            if (!any) {
                sum = e;
                any = true;
            } else {
                sum += e;
            }
        }
        if (any)
            out[m] = -spd_log(sum) / b;
        else
            out[m] = std::nullopt;
    }
    return out;
}

double maybe_deformed_trace(const MaybeMatrix& a, double b) {
    if (!a) return kInf;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(*a);
    Eigen::VectorXd lam = es.eigenvalues();
    std::vector<double> ls(lam.data(), lam.data() + lam.size());
    return lse_min(ls, b);
}

MaybeMatrix maybe_kron_sum(const MaybeMatrix& a, const MaybeMatrix& b) {
    if (!a || !b) return std::nullopt;
    return kronecker_sum(SymMatrix(*a, 1e-7), SymMatrix(*b, 1e-7)).mat();
}

}  // namespace

MatrixRbReport matrix_rb_check(std::span<const SymMatrix> a_seq,
                               std::span<const SymMatrix> b_seq, const Beta& beta) {
    if (beta.is_inf()) throw DomainError("matrix identity check needs finite beta");
    if (a_seq.size() != b_seq.size() || a_seq.empty())
        throw DomainError("matrix sequences must have equal positive length");
    const double b = beta.value();
    const size_t len = a_seq.size();

    std::vector<MaybeMatrix> a(len), bb(len);
    for (size_t i = 0; i < len; ++i) {
        a[i] = a_seq[i].mat();
        bb[i] = b_seq[i].mat();
    }
    auto ta = matrix_partial_sum(a, b);
    auto tb = matrix_partial_sum(bb, b);

    std::vector<MaybeMatrix> ta_kron_b(len), a_kron_tb(len), a_kron_b(len), ta_kron_tb(len);
    for (size_t m = 0; m < len; ++m) {
        ta_kron_b[m] = maybe_kron_sum(ta[m], bb[m]);
        a_kron_tb[m] = maybe_kron_sum(a[m], tb[m]);
        a_kron_b[m] = maybe_kron_sum(a[m], bb[m]);
        ta_kron_tb[m] = maybe_kron_sum(ta[m], tb[m]);
    }
    auto t_ta_b = matrix_partial_sum(ta_kron_b, b);
    auto t_a_tb = matrix_partial_sum(a_kron_tb, b);
    auto t_a_b = matrix_partial_sum(a_kron_b, b);

    MatrixRbReport rep;
    rep.lhs.resize(len);
    rep.rhs.resize(len);
    rep.rhs_tropical.resize(len);
    for (size_t m = 0; m < len; ++m) {
        double lhs = maybe_deformed_trace(ta_kron_tb[m], b);
        double terms[3] = {maybe_deformed_trace(t_ta_b[m], b),
                           maybe_deformed_trace(t_a_tb[m], b),
                           maybe_deformed_trace(t_a_b[m], b)};
        double rhs = lse_min(terms, b);
        rep.lhs[m] = lhs;
        rep.rhs[m] = rhs;
        rep.rhs_tropical[m] = *std::min_element(terms, terms + 3);
        if (lhs == rhs) continue;  // matching infinities
        if (std::isinf(lhs) || std::isinf(rhs))
            rep.max_residual = kInf;
        else
            rep.max_residual = std::max(rep.max_residual, std::abs(lhs - rhs));
    }
    return rep;
}

}  // namespace trop
