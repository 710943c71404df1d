#pragma once

#include <Eigen/Dense>
#include <optional>

#include "trop/semiring.hpp"

namespace trop {

// Square matrix over the min-plus scalar; entries may be +inf.
struct MinPlusMatrix {
    Eigen::MatrixXd m;

    explicit MinPlusMatrix(Eigen::MatrixXd mat);
    int size() const { return int(m.rows()); }

    static MinPlusMatrix all_infinite(int n);  // oplus identity
    static MinPlusMatrix identity(int n);      // odot identity: 0 diag, inf off
};

MinPlusMatrix minplus_add(const MinPlusMatrix& a, const MinPlusMatrix& b);
MinPlusMatrix minplus_mul(const MinPlusMatrix& a, const MinPlusMatrix& b);

// Real symmetric matrix; the observable of the deformed trace.
class SymMatrix {
  public:
    explicit SymMatrix(Eigen::MatrixXd a, double tol = 1e-9);
    const Eigen::MatrixXd& mat() const { return a_; }
    int size() const { return int(a_.rows()); }
    Eigen::VectorXd eigenvalues() const;
    bool is_psd(double tol = 1e-9) const;

  private:
    Eigen::MatrixXd a_;
};

// rho = rho^T, rho >= 0, Tr(rho) = 1.
class DensityMatrix {
  public:
    explicit DensityMatrix(Eigen::MatrixXd rho, double tol = 1e-8);
    const Eigen::MatrixXd& mat() const { return rho_; }
    int size() const { return int(rho_.rows()); }

  private:
    Eigen::MatrixXd rho_;
};

// Functional calculus helpers (symmetric eigendecomposition; eigenvalues
// clamped at 1e-14 before log).
Eigen::MatrixXd sym_exp(const Eigen::MatrixXd& a);
Eigen::MatrixXd sym_log(const Eigen::MatrixXd& a);
Eigen::MatrixXd sym_pow(const Eigen::MatrixXd& a, double p);

// Tropical trace min_i A_ii; the spectral variant returns min Spec(A),
// realizing the unitary-orbit infimum, and requires a PSD symmetric view.
ExtReal trop_trace(const MinPlusMatrix& a);
ExtReal trop_trace_spectral(const SymMatrix& a);

enum class QuantumEntropy { VonNeumann, Relative, Renyi, Tsallis, BelavkinStaszewski, UmegakiDeformed };

// Entropy evaluators. sigma is required (and must be strictly positive)
// for the relative entropies; param is q / alpha where applicable.
double quantum_entropy_eval(QuantumEntropy kind, const DensityMatrix& rho,
                            const DensityMatrix* sigma = nullptr, double param = 0.0);

// min_rho { Tr(rho A) - S(rho)/beta }. Von Neumann has the free-energy
// closed form -log Tr(exp(-beta A))/beta; Renyi/Tsallis minimize over
// densities diagonal in the eigenbasis of A only (restricted flag set).
struct DeformedTraceResult {
    double value;
    bool restricted;    // true when the minimization was restricted to the eigenbasis
    double resolution;  // simplex-search resolution; 0 for closed forms
};
DeformedTraceResult deformed_trace_info(const SymMatrix& a, const Beta& beta,
                                        const Entropy& entropy_kind);
double deformed_trace(const SymMatrix& a, const Beta& beta,
                      const Entropy& entropy_kind = Entropy::shannon());

// Both sides of
//   Tr(rho A) - N(rho)/beta = S(rho || sigma_{beta,A})/beta - log Z_A(beta)/beta
// computed through independent paths (direct traces vs functional calculus).
struct FreeEnergyIdentity {
    double lhs;
    double rhs;
    double relative_entropy_term;
};
FreeEnergyIdentity free_energy_decompose(const SymMatrix& a, const DensityMatrix& rho,
                                         const Beta& beta);

// Gibbs state exp(-beta A)/Z.
DensityMatrix gibbs_state(const SymMatrix& a, const Beta& beta);

// Block direct sum diag(A1, A2): the spectrum is the union.
SymMatrix direct_sum(const SymMatrix& a1, const SymMatrix& a2);
// Kronecker sum A1 x I + I x A2: exp(-b .) factorizes as a tensor product,
// so the deformed trace is odot-additive over it.
SymMatrix kronecker_sum(const SymMatrix& a1, const SymMatrix& a2);

}  // namespace trop
