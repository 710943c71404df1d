#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "trop/hopf.hpp"
#include "trop/trace.hpp"

namespace trop {

// A Rota-Baxter operator on semiring elements with a declared weight and
// additivity class. Operators are built for a fixed beta; at beta = inf the
// deformed sums degenerate to plain min/max.
struct RBOperator {
    enum class Additivity { OplusAdditive, LinearIdempotent, Superadditive };

    std::string name;
    double weight = 1.0;  // lambda, here always +1 or -1
    Additivity additivity = Additivity::OplusAdditive;
    Beta beta = Beta::infinity();
    Value::Kind domain = Value::Kind::Sequence;
    Mode mode = Mode::MinPlus;
    size_t length = 0;
    // Multiplier on the term-count bookkeeping used for the beta->inf
    // convergence bound (how many deformed-sum arguments one application
    // can introduce per coordinate).
    double bound_amplification = 1.0;
    std::function<Value(const Value&)> apply;
};

// (T f)(n) = deformed sum of f(1..n-1), (T f)(1) = inf; prefix minimum at
// beta = inf. Weight +1, oplus-additive.
RBOperator partial_sum_rb(const Beta& beta, size_t length, Mode mode = Mode::MinPlus);

// q-integral operator on truncated series, carried on the exponential side:
// t^n -> q^n/(1-q^n) t^n exactly (the closed form of the substitution sum
// over t -> q^k t). Requires 0 < |q| < 1 and series with no constant mode.
// Weight +1.
RBOperator q_integral_rb(double q, const Beta& beta, size_t order);

// Multiplication by the characteristic function of the mask, lifted through
// the exponential bridge: masked-out coordinates go to the oplus identity.
// Weight -1, linear-idempotent, superadditive with equality.
RBOperator projection_rb(std::vector<bool> mask, Mode mode = Mode::MinPlus);

// T = id as a weight -1 linear-idempotent operator.
RBOperator identity_rb(Value::Kind kind, size_t length, Mode mode = Mode::MinPlus);

// Exploratory weight -1 pair: T f = f oplus r and the constant operator
// T~ f = r; they satisfy T a = a oplus T~ a by construction.
RBOperator min_with_reference_rb(Value reference);
RBOperator constant_reference_rb(Value reference);

// Samples the declared Rota-Baxter identity (weight +-1, log|lambda| = 0)
// on random inputs and reports the worst residual.
struct CertReport {
    std::string operator_name;
    double weight = 0.0;
    int samples = 0;
    double max_residual = 0.0;
    bool pass = false;
};
CertReport certify_rb(const RBOperator& op, int n_samples = 100, double tol = 1e-9,
                      unsigned seed = 1);

// Sampled super/subadditivity of T over odot: T(f g) >= T(f) T(g) resp. <=.
struct AdditivityReport {
    double worst_superadditivity = 0.0;  // max of T(f)+T(g) - T(f+g) over samples
    double worst_subadditivity = 0.0;    // max of T(f+g) - T(f)-T(g)
    bool superadditive = false;
    bool subadditive = false;
};
AdditivityReport check_additivity(const RBOperator& op, int n_samples = 100,
                                  double tol = 1e-9, unsigned seed = 2);

// Shift equivariance T(c odot f) = c odot T(f), the scalar half of
// oplus_{beta,S}-linearity.
double shift_equivariance_residual(const RBOperator& op, int n_samples = 50,
                                   unsigned seed = 3);

// One Bogolyubov-Parashchuk table row.
struct FactorEntry {
    Value tilde, minus, plus;
    // multiplicative bookkeeping for |v_beta - v_inf| <= log(m)/beta
    double m_tilde = 1.0, m_minus = 1.0, m_plus = 1.0;
};

// Inductive factorization session: memoized preparation and the two parts,
// keyed by canonical form (exact form for label-sensitive characters).
class FactorizationSession {
  public:
    FactorizationSession(Character psi, RBOperator op, Beta beta,
                         Admissibility adm = Admissibility::all());

    const FactorEntry& eval(const Graph& g);
    Value psi_value(const Graph& g) const { return char_eval(psi_, g); }

    // |psi_plus - (psi_minus * psi)| with the convolution recomputed over
    // the full coproduct.
    double convolution_residual(const Graph& g);
    // max over the three parts of |part(g1 u g2) - part(g1) - part(g2)|.
    double multiplicativity_residual(const Graph& g1, const Graph& g2);

    const std::map<std::string, FactorEntry>& table() const { return memo_; }
    const Character& character() const { return psi_; }
    const RBOperator& op() const { return op_; }
    const Beta& beta() const { return beta_; }
    std::string key_of(const Graph& g) const;

  private:
    Character psi_;
    RBOperator op_;
    Beta beta_;
    Admissibility adm_;
    std::map<std::string, FactorEntry> memo_;
};

struct FactorizationResult {
    std::string operator_name;
    CertReport cert;
    std::vector<std::string> keys;  // one per requested graph
    std::map<std::string, FactorEntry> table;
    double max_convolution_residual = 0.0;
    double max_multiplicativity_residual = 0.0;
};

// Weight +1 factorization over a list of graphs; certifies the operator
// identity, the defining relation psi_+ = psi_- * psi on every graph, and
// multiplicativity on the disjoint unions of consecutive pairs. Throws
// CertificationError when the operator fails its identity.
FactorizationResult factorize(const Character& psi, const RBOperator& op, const Beta& beta,
                              std::span<const Graph> graphs,
                              Admissibility adm = Admissibility::all(),
                              int cert_samples = 100, double tol = 1e-9);

// Weight -1 variant (tropical only): requires sampled superadditivity,
// which is what makes the parts multiplicative.
FactorizationResult factorize_minus1(const Character& psi, const RBOperator& op,
                                     std::span<const Graph> graphs,
                                     Admissibility adm = Admissibility::all(),
                                     int cert_samples = 100, double tol = 1e-9);

// (T, T~)-factorization from a pair of weight -1 operators related by
// T a = a oplus T~ a: psi_- = T(psi~), psi_+ = T~(psi~). Reports which of
// the hypotheses hold on samples and certifies psi_- = psi~ oplus psi_+.
struct PairFactorizationResult {
    FactorizationResult base;  // base.table holds psi_- in minus, psi_+ = T~(tilde) in plus
    CertReport cert_t, cert_t_tilde;
    double relation_residual = 0.0;     // T a = a oplus T~ a on samples
    double exchange_residual = 0.0;     // T~(a b) oplus T~a T~b = T~(Ta b oplus a Tb)
    AdditivityReport additivity_t, additivity_t_tilde;
    double consistency_residual = 0.0;  // psi_- = min{psi~, psi_+} per graph
};
PairFactorizationResult factorize_pair(const Character& psi, const RBOperator& t,
                                       const RBOperator& t_tilde,
                                       std::span<const Graph> graphs,
                                       Admissibility adm = Admissibility::all(),
                                       int cert_samples = 100, double tol = 1e-9);

// Classical commutative-ring Bogolyubov-Parashchuk recursion, the
// independent oracle for exponential conjugation. Ring elements are plain
// coefficient vectors: pointwise products for sequences, truncated series
// products for series.
struct ClassicalEntry {
    std::vector<double> tilde, minus, plus;
};
class ClassicalBirkhoff {
  public:
    using RingVec = std::vector<double>;
    ClassicalBirkhoff(std::function<RingVec(const Graph&)> phi_connected,
                      std::function<RingVec(const RingVec&)> t_op, double weight,
                      Value::Kind kind, size_t length,
                      Admissibility adm = Admissibility::all());

    const ClassicalEntry& eval(const Graph& g);
    RingVec phi(const Graph& g) const;  // multiplicative extension

  private:
    std::function<RingVec(const Graph&)> phi_connected_;
    std::function<RingVec(const RingVec&)> t_op_;
    double weight_;
    Value::Kind kind_;
    size_t length_;
    Admissibility adm_;
    std::map<std::string, ClassicalEntry> memo_;
};

// Classical partial-sum operator (0, a1, a1+a2, ...) on coefficient vectors.
std::vector<double> classical_partial_sum(const std::vector<double>& a);

// Thermodynamic factorization vs -log(classical factorization of
// exp(-beta psi))/beta, coordinate-wise. Residual per graph and overall.
struct ExpConjugationReport {
    double max_residual = 0.0;
    std::map<std::string, double> per_graph;
};
ExpConjugationReport exp_conjugation_check(const Character& psi, const RBOperator& op,
                                           const Beta& beta, std::span<const Graph> graphs,
                                           Admissibility adm = Admissibility::all());

// Deformed-trace Rota-Baxter identity on matrix sequences: both sides of
//   dTr(T(A) # T(B)) = dTr(T(T(A) # B)) (+)_beta dTr(T(A # T(B)))
//                        (+)_beta dTr(T(A # B)),
// where # is the Kronecker sum, dTr the von Neumann deformed trace, and T
// the partial-sum operator applied through matrix exp/log. Coordinate 1 is
// infinite on both sides by construction. rhs_tropical replaces the deformed
// sum by a plain minimum; its gap to lhs is bounded by log(3)/beta.
struct MatrixRbReport {
    double max_residual = 0.0;
    std::vector<double> lhs, rhs, rhs_tropical;  // per sequence coordinate
};
MatrixRbReport matrix_rb_check(std::span<const SymMatrix> a_seq,
                               std::span<const SymMatrix> b_seq, const Beta& beta);

}  // namespace trop
