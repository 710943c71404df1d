#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "trop/errors.hpp"

namespace trop {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Mode { MinPlus, MaxPlus };

// Scalar of the tropical semiring: R u {+inf} in min-plus mode,
// R u {-inf} in max-plus mode. The infinite value is the identity for
// oplus and absorbing for odot.
struct ExtReal {
    double value = kInf;
    Mode mode = Mode::MinPlus;

    constexpr ExtReal() = default;
    constexpr ExtReal(double v, Mode m = Mode::MinPlus) : value(v), mode(m) {}

    bool is_identity() const {
        return mode == Mode::MinPlus ? value == kInf : value == -kInf;
    }
    static ExtReal identity(Mode m) {
        return {m == Mode::MinPlus ? kInf : -kInf, m};
    }

    friend bool operator==(const ExtReal&, const ExtReal&) = default;
};

// oplus = min (max-plus: max), odot = ordinary +, with inf absorbing.
ExtReal trop_oplus(ExtReal x, ExtReal y);
ExtReal trop_odot(ExtReal x, ExtReal y);

// Inverse temperature. Strictly positive, or infinite for the exact
// tropical (zero-temperature) limit. beta = 0 is rejected: 1/beta enters
// every deformed formula.
class Beta {
  public:
    explicit Beta(double b) : b_(b) {
        if (!(b > 0.0)) throw DomainError("beta must be > 0 (or infinite)");
    }
    static Beta infinity() { return Beta(kInf); }

    bool is_inf() const { return std::isinf(b_); }
    double value() const { return b_; }

    friend bool operator==(const Beta&, const Beta&) = default;

  private:
    double b_;
};

// Probability vector on n outcomes; entries >= 0, sum 1 within tolerance.
struct ProbVector {
    std::vector<double> p;

    explicit ProbVector(std::vector<double> probs, double tol = 1e-9);
    size_t size() const { return p.size(); }
};

// Classical entropy functionals on probability vectors. All three satisfy
// the coherence condition: vanishing coordinates are dropped before
// evaluation, so S agrees across arities on padded vectors.
struct Entropy {
    enum class Kind { Shannon, Renyi, Tsallis };
    Kind kind = Kind::Shannon;
    double param = 0.0;  // q for Renyi, alpha for Tsallis

    static Entropy shannon() { return {Kind::Shannon, 0.0}; }
    static Entropy renyi(double q);
    static Entropy tsallis(double alpha);

    double operator()(std::span<const double> p) const;
    bool is_shannon() const { return kind == Kind::Shannon; }
    std::string name() const;
};

double entropy_eval(const Entropy& S, const ProbVector& p);

// n-ary deformed addition  min_p { sum_i p_i x_i - S(p)/beta }  over the
// probability simplex. Shannon uses the log-sum-exp closed form; Renyi and
// Tsallis fall back to numerical simplex minimization.
struct ThermoResult {
    ExtReal value;
    double resolution = 0.0;  // 0 for closed forms; grid/descent step otherwise
};

ThermoResult thermo_add_n_info(std::span<const ExtReal> xs, const Beta& beta,
                               const Entropy& S);
ExtReal thermo_add_n(std::span<const ExtReal> xs, const Beta& beta, const Entropy& S);
ExtReal thermo_add(ExtReal x, ExtReal y, const Beta& beta, const Entropy& S);

// Overflow-safe deformed minimum  m - log(sum_i w_i exp(-beta (v_i - m)))/beta
// with m = min v_i. Entries equal to +inf are dropped; returns +inf when all
// are. Weights default to 1; they carry coproduct multiplicities.
double lse_min(std::span<const double> values, double beta,
               std::span<const double> weights = {});

// Rooted tree with a fixed planar embedding; every internal vertex has
// arity >= 2, leaves consume inputs left to right.
struct PlanarTree {
    std::vector<PlanarTree> children;  // empty <=> leaf

    bool is_leaf() const { return children.empty(); }
    int leaf_count() const;
    void validate() const;  // arity >= 2 at internal vertices

    static PlanarTree leaf() { return {}; }
    static PlanarTree node(std::vector<PlanarTree> ch);
    static PlanarTree left_comb(int n);   // ((x1 x2) x3) ... xn
    static PlanarTree right_comb(int n);  // x1 (x2 (... xn))
    static PlanarTree flat(int n);        // one n-ary vertex
};

// Applies the deformed addition at every internal vertex, children first.
ExtReal tree_compose(const PlanarTree& tree, std::span<const ExtReal> xs,
                     const Beta& beta, const Entropy& S);

}  // namespace trop
