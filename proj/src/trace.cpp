#include "trop/trace.hpp"

#include <cmath>
#include <functional>

namespace trop {

namespace {

constexpr double kEigClamp = 1e-14;

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve(const Eigen::MatrixXd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw DomainError("eigendecomposition failed");
    return es;
}

Eigen::MatrixXd apply_spectral(const Eigen::MatrixXd& a,
                               const std::function<double(double)>& f) {
    auto es = solve(a);
    Eigen::VectorXd d = es.eigenvalues();
    for (int i = 0; i < d.size(); ++i) d[i] = f(d[i]);
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

MinPlusMatrix::MinPlusMatrix(Eigen::MatrixXd mat) : m(std::move(mat)) {
    if (m.rows() != m.cols()) throw DomainError("min-plus matrix must be square");
}

MinPlusMatrix MinPlusMatrix::all_infinite(int n) {
    return MinPlusMatrix(Eigen::MatrixXd::Constant(n, n, kInf));
}

MinPlusMatrix MinPlusMatrix::identity(int n) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, kInf);
    m.diagonal().setZero();
    return MinPlusMatrix(m);
}

MinPlusMatrix minplus_add(const MinPlusMatrix& a, const MinPlusMatrix& b) {
    if (a.size() != b.size()) throw DomainError("min-plus matrix dimension mismatch");
    return MinPlusMatrix(a.m.cwiseMin(b.m));
}

MinPlusMatrix minplus_mul(const MinPlusMatrix& a, const MinPlusMatrix& b) {
    if (a.size() != b.size()) throw DomainError("min-plus matrix dimension mismatch");
    const int n = a.size();
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double best = kInf;
            for (int k = 0; k < n; ++k) {
                double aik = a.m(i, k), bkj = b.m(k, j);
                if (aik != kInf && bkj != kInf) best = std::min(best, aik + bkj);
            }
            out(i, j) = best;
        }
    return MinPlusMatrix(out);
}

SymMatrix::SymMatrix(Eigen::MatrixXd a, double tol) : a_(std::move(a)) {
    if (a_.rows() != a_.cols()) throw DomainError("symmetric matrix must be square");
    if ((a_ - a_.transpose()).cwiseAbs().maxCoeff() > tol)
        throw DomainError("matrix is not symmetric");
    a_ = 0.5 * (a_ + a_.transpose().eval());
}

Eigen::VectorXd SymMatrix::eigenvalues() const { return solve(a_).eigenvalues(); }

bool SymMatrix::is_psd(double tol) const { return eigenvalues().minCoeff() >= -tol; }

DensityMatrix::DensityMatrix(Eigen::MatrixXd rho, double tol) : rho_(std::move(rho)) {
    SymMatrix check(rho_, tol);  // validates squareness and symmetry
    rho_ = check.mat();
    if (std::abs(rho_.trace() - 1.0) > tol) throw DomainError("density matrix trace != 1");
    if (!check.is_psd(tol)) throw DomainError("density matrix is not PSD");
}

Eigen::MatrixXd sym_exp(const Eigen::MatrixXd& a) {
    return apply_spectral(a, [](double x) { return std::exp(x); });
}

Eigen::MatrixXd sym_log(const Eigen::MatrixXd& a) {
    return apply_spectral(a, [](double x) { return std::log(std::max(x, kEigClamp)); });
}

Eigen::MatrixXd sym_pow(const Eigen::MatrixXd& a, double p) {
    return apply_spectral(a, [p](double x) {
        if (x <= kEigClamp) return p > 0 ? 0.0 : std::pow(kEigClamp, p);
        return std::pow(x, p);
    });
}

ExtReal trop_trace(const MinPlusMatrix& a) {
    return {a.m.diagonal().minCoeff(), Mode::MinPlus};
}

ExtReal trop_trace_spectral(const SymMatrix& a) {
    if (!a.is_psd()) throw DomainError("spectral tropical trace requires a PSD matrix");
    return {a.eigenvalues().minCoeff(), Mode::MinPlus};
}

double quantum_entropy_eval(QuantumEntropy kind, const DensityMatrix& rho,
                            const DensityMatrix* sigma, double param) {
    const Eigen::MatrixXd& r = rho.mat();
    Eigen::VectorXd rho_eigs = solve(r).eigenvalues();

    auto require_sigma = [&]() -> const Eigen::MatrixXd& {
        if (!sigma) throw DomainError("relative entropy requires sigma");
        if (solve(sigma->mat()).eigenvalues().minCoeff() < 1e-12)
            throw DomainError("sigma is singular");
        return sigma->mat();
    };
    auto require_positive_rho = [&]() {
        if (rho_eigs.minCoeff() < 1e-12) throw DomainError("rho must be strictly positive");
    };
    // Tr(rho log rho) with 0 log 0 = 0 on null eigenvalues
    auto tr_rho_log_rho = [&]() {
        double s = 0.0;
        for (int i = 0; i < rho_eigs.size(); ++i)
            if (rho_eigs[i] > kEigClamp) s += rho_eigs[i] * std::log(rho_eigs[i]);
        return s;
    };

    switch (kind) {
        case QuantumEntropy::VonNeumann:
            return -tr_rho_log_rho();
        case QuantumEntropy::Relative: {
            const Eigen::MatrixXd& s = require_sigma();
            return tr_rho_log_rho() - (r * sym_log(s)).trace();
        }
        case QuantumEntropy::Renyi: {
            if (param == 1.0 || param <= 0.0) throw DomainError("Renyi requires q > 0, q != 1");
            double t = 0.0;
            for (int i = 0; i < rho_eigs.size(); ++i)
                if (rho_eigs[i] > 0) t += std::pow(rho_eigs[i], param);
            return std::log(t) / (1.0 - param);
        }
        case QuantumEntropy::Tsallis: {
            if (param == 1.0 || param <= 0.0)
                throw DomainError("Tsallis requires alpha > 0, alpha != 1");
            double t = 0.0;
            for (int i = 0; i < rho_eigs.size(); ++i)
                if (rho_eigs[i] > 0) t += std::pow(rho_eigs[i], param);
            return (t - 1.0) / (1.0 - param);
        }
        case QuantumEntropy::BelavkinStaszewski: {
            const Eigen::MatrixXd& s = require_sigma();
            require_positive_rho();
            Eigen::MatrixXd rh = sym_pow(r, 0.5);
            Eigen::MatrixXd inner = rh * sym_pow(s, -1.0) * rh;
            return (r * sym_log(0.5 * (inner + inner.transpose().eval()))).trace();
        }
        case QuantumEntropy::UmegakiDeformed: {
            // Amari alpha-divergence 4/(1-a^2) (1 - Tr(sigma^{(1+a)/2} rho^{(1-a)/2})),
            // zero at rho = sigma; reduces to the classical alpha-divergence on
            // commuting pairs.
            const Eigen::MatrixXd& s = require_sigma();
            require_positive_rho();
            if (param == 1.0 || param == -1.0)
                throw DomainError("Umegaki deformation requires alpha != +-1");
            double t =
                (sym_pow(s, (1.0 + param) / 2.0) * sym_pow(r, (1.0 - param) / 2.0)).trace();
            return 4.0 / (1.0 - param * param) * (1.0 - t);
        }
    }
    throw DomainError("unknown quantum entropy kind");
}

DeformedTraceResult deformed_trace_info(const SymMatrix& a, const Beta& beta,
                                        const Entropy& entropy_kind) {
    if (!a.is_psd())
        throw DomainError("deformed trace closed form requires a PSD observable");
    Eigen::VectorXd lam = a.eigenvalues();
    if (beta.is_inf()) return {lam.minCoeff(), false, 0.0};
    if (entropy_kind.is_shannon()) {
        // von Neumann: Helmholtz free energy -log Tr(exp(-beta A))/beta
        std::vector<double> ls(lam.data(), lam.data() + lam.size());
        return {lse_min(ls, beta.value()), false, 0.0};
    }
    // Renyi/Tsallis: minimize over densities diagonal in the eigenbasis of A;
    // the quantum functionals reduce to their classical counterparts there.
    std::vector<ExtReal> xs;
    for (int i = 0; i < lam.size(); ++i) xs.push_back(ExtReal{lam[i], Mode::MinPlus});
    ThermoResult r = thermo_add_n_info(xs, beta, entropy_kind);
    return {r.value.value, true, r.resolution};
}

double deformed_trace(const SymMatrix& a, const Beta& beta, const Entropy& entropy_kind) {
    return deformed_trace_info(a, beta, entropy_kind).value;
}

DensityMatrix gibbs_state(const SymMatrix& a, const Beta& beta) {
    if (beta.is_inf()) throw DomainError("Gibbs state needs finite beta");
    Eigen::VectorXd lam = a.eigenvalues();
    double shift = lam.minCoeff();
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(a.size(), a.size());
    Eigen::MatrixXd e = sym_exp(-beta.value() * (a.mat() - shift * id));
    return DensityMatrix(e / e.trace());
}

FreeEnergyIdentity free_energy_decompose(const SymMatrix& a, const DensityMatrix& rho,
                                         const Beta& beta) {
    if (beta.is_inf()) throw DomainError("free-energy identity needs finite beta");
    Eigen::VectorXd rho_eigs = solve(rho.mat()).eigenvalues();
    if (rho_eigs.minCoeff() < 1e-12)
        throw DomainError("free-energy identity requires rho > 0");
    const double b = beta.value();

    // Left side: direct traces.
    double n_rho = quantum_entropy_eval(QuantumEntropy::VonNeumann, rho);
    double lhs = (rho.mat() * a.mat()).trace() - n_rho / b;

    // Right side: relative entropy against the Gibbs state, log Z via the
    // shifted spectrum.
    DensityMatrix sigma = gibbs_state(a, beta);
    double srel = quantum_entropy_eval(QuantumEntropy::Relative, rho, &sigma);
    Eigen::VectorXd lam = a.eigenvalues();
    std::vector<double> ls(lam.data(), lam.data() + lam.size());
    double log_z = -b * lse_min(ls, b);
    double rhs = srel / b - log_z / b;
    return {lhs, rhs, srel};
}

SymMatrix direct_sum(const SymMatrix& a1, const SymMatrix& a2) {
    int n1 = a1.size(), n2 = a2.size();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
    out.topLeftCorner(n1, n1) = a1.mat();
    out.bottomRightCorner(n2, n2) = a2.mat();
    return SymMatrix(out);
}

SymMatrix kronecker_sum(const SymMatrix& a1, const SymMatrix& a2) {
    int n1 = a1.size(), n2 = a2.size();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n1 * n2, n1 * n2);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j)
            for (int k = 0; k < n2; ++k)
                for (int l = 0; l < n2; ++l) {
                    double v = 0.0;
                    if (k == l) v += a1.mat()(i, j);
                    if (i == j) v += a2.mat()(k, l);
                    out(i * n2 + k, j * n2 + l) = v;
                }
    return SymMatrix(out);
}

}  // namespace trop
