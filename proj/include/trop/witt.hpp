#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <vector>

#include "trop/graph.hpp"

namespace trop {

using Rat = mpq_class;
using RatVec = std::vector<Rat>;

// mpq_class(num, den) does not reduce; every fraction built from a pair
// must go through here.
inline Rat make_rat(long num, long den = 1) {
    if (den == 0) throw DomainError("zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Rat rat_from_string(const std::string& s);  // "p/q" or integer text
std::string rat_to_string(const Rat& r);

// Truncated big Witt vector: the series 1 + a_1 t + ... + a_N t^N over exact
// rationals. Witt addition is the series product; the Witt product and the
// convolution product are computed through ghost coordinates.
class WittVector {
  public:
    explicit WittVector(int order);             // the series 1 (Witt zero)
    WittVector(RatVec coeffs_a1_to_aN);         // order = size

    int order() const { return int(a_.size()); }
    const RatVec& coefficients() const { return a_; }
    const Rat& coeff(int n) const;  // a_n, 1-based

    static WittVector one(int order);        // (1-t)^{-1}, the Witt unit
    static WittVector geometric(const Rat& a, int order);  // (1-at)^{-1}

    friend bool operator==(const WittVector&, const WittVector&) = default;

    std::string to_json() const;  // rational-string array
    static WittVector from_json(const std::string& json_text);

  private:
    RatVec a_;  // a_[n-1] = a_n
};

// Ghost coordinates g_n with alpha = exp(sum g_r t^r / r), read off from
// t alpha'/alpha; unghost is the exact inverse over the rationals.
struct GhostVector {
    RatVec g;  // g[n-1] = g_n
    int order() const { return int(g.size()); }
    friend bool operator==(const GhostVector&, const GhostVector&) = default;
};

GhostVector ghost(const WittVector& alpha);
WittVector unghost(const GhostVector& g);

WittVector witt_add(const WittVector& a, const WittVector& b);   // series product
WittVector witt_neg(const WittVector& a);                        // series inverse
WittVector witt_mul(const WittVector& a, const WittVector& b);   // ghost product
// Convolution (*) with ghost = power-series product of ghosts.
WittVector witt_convolve(const WittVector& a, const WittVector& b);

// Weight +1 Rota-Baxter operator alpha -> alpha (*) one(): on ghosts the
// shifted prefix sum g_n -> sum_{k<n} g_k.
WittVector rb_partial_sum_witt(const WittVector& alpha);

// q-twist operator with exact ghost action g_n -> g_n q^n/(1-q^n); equals
// the truncated infinite product prod_{k>=1} alpha(q^k t). Rejects q with
// q^n = 1 for some n <= order.
WittVector rb_q_witt(const WittVector& alpha, const Rat& q);
// The companion -id - T, again weight +1: ghost g_n -> -g_n/(1-q^n).
WittVector rb_q_witt_tilde(const WittVector& alpha, const Rat& q);

// Exact check of the weight +1 identity for the given operator over one of
// the two Witt-ring products. The partial-sum operator is Rota-Baxter for
// the Witt product (its ghost action is the coordinate-wise partial sum);
// the q-twist operators are Rota-Baxter for the convolution product (they
// come from series-linear operators on the ghost side).
enum class WittProduct { Witt, Convolution };
struct WittRbCheck {
    bool exact;           // residual identically zero
    WittVector lhs, rhs;  // both sides, for reports
};
WittRbCheck witt_rb_identity(const std::function<WittVector(const WittVector&)>& t,
                             const WittVector& a, const WittVector& b,
                             WittProduct product);

// Substitution alpha(t) -> alpha(c t), exact.
WittVector witt_substitute(const WittVector& alpha, const Rat& c);
// Truncated product prod_{k=1}^{K} alpha(q^k t); the secondary check for the
// q-twist closed form.
WittVector q_product_truncated(const WittVector& alpha, const Rat& q, int K);

// Integer point counts c_r = #X(F_{q^r}); source records whether they came
// from a closed formula or brute-force enumeration.
struct CountingSequence {
    std::vector<Rat> c;  // rational to accommodate formal Tate twists
    std::string source;  // "formula" | "brute-force"
};

// Integer-coefficient polynomial in the Lefschetz symbol L with possibly
// negative powers (Tate twists): terms (coefficient, power).
struct MotiveClass {
    std::vector<std::pair<long, long>> terms;

    static MotiveClass point() { return {{{1, 0}}}; }
    static MotiveClass affine_line() { return {{{1, 1}}}; }
    static MotiveClass affine_space(int n) { return {{{1, n}}}; }
    static MotiveClass projective_line() { return {{{1, 1}, {1, 0}}}; }
    static MotiveClass projective_space(int n);
    MotiveClass twist(long k) const;  // multiply by L^k

    Rat count(const Rat& q, int r) const;  // sum c_i q^{k_i r}
};

// Z(X,t) = exp(sum_r #X(F_{q^r}) t^r / r): the Witt vector whose ghost is
// the counting sequence.
WittVector zeta_from_counts(const CountingSequence& counts, int order);
WittVector zeta_of_motive(const MotiveClass& x, const Rat& q, int order);

// Brute-force counts over the prime field F_p (r = 1 only).
long count_affine_space_brute(int n, long p);
long count_projective_space_brute(int n, long p);

// Kirchhoff polynomial and graph-hypersurface counts: Psi_Gamma =
// sum over spanning trees of prod_{e not in T} t_e; counts #X_Gamma(F_q) by
// exhaustive enumeration over q^{|E|} points (per connected component, then
// multiplied through the complement classes). Caps: |E| <= 6, prime q <= 11.
struct HypersurfaceCount {
    long zeros;       // #X_Gamma(F_q)
    long complement;  // N(Y_Gamma, q) = q^{|E|} - zeros
};
HypersurfaceCount count_graph_hypersurface(const Graph& g, long q);

// The three zeta corollaries for the Rota-Baxter operators on Witt rings:
//   (1) T_W(Z(X,t)) = Z(X,t) (*) Z(Spec F_q, t)
//   (2) T_{W,q}(Z(X,t)) = prod_{k>=1} Z([X] L^k, t) (per-factor and on ghosts;
//       the q^{-1} side converges and is also compared against truncated
//       products)
//   (3) the tilde operators give prod_{k>=0} Z([X] L^{+-k}, t)^{-1}
struct ZetaRbReport {
    bool corollary1_exact = false;
    bool corollary2_exact = false;  // ghost closed forms + per-factor identification
    bool corollary3_exact = false;
    double truncated_product_gap = 0.0;  // numeric gap of the convergent side
};
ZetaRbReport zeta_rb_checks(const MotiveClass& x, const Rat& q, int order,
                            int product_truncation = 40);

}  // namespace trop
