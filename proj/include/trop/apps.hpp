#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "trop/birkhoff.hpp"
#include "trop/witt.hpp"

namespace trop {

// All induced subgraphs of a host, one per vertex subset.
std::vector<Graph> induced_family(const Graph& host, int max_vertices = 12);

// A potential on the induced-subgraph family of a host: evaluated on the
// induced graph of a vertex subset.
struct Potential {
    std::string name;
    std::function<double(const Graph& induced)> eval;
};
Potential vertex_cost_potential(std::map<int, double> costs);
Potential edge_count_squared_potential();

// Worst residual of the nearest-neighbor difference identity
//   W(A u v) - W(A) = W((A n d(v)) u v) - W(A n d(v))
// over every subset A and vertex v outside A; violations carry witnesses.
struct NeighborCheck {
    double worst_residual = 0.0;
    struct Witness {
        std::vector<int> subset;
        int vertex;
        double lhs, rhs;
    };
    std::vector<Witness> violations;  // up to 8 witnesses
};
NeighborCheck nn_check(const Graph& host, const Potential& w);

// Multiplicative Markov ratio identity for a positive field pi; throws
// DomainError when pi <= 0 somewhere.
NeighborCheck markov_check(const Graph& host,
                           const std::function<double(const Graph&)>& pi);

// Birkhoff factorization of a vertex-only potential over the family
// coproduct (induced subgraphs; quotients evaluated on the surviving
// vertices, collapsed components carrying zero cost). Values are constant
// sequences so the partial-sum operator drives the recursion.
struct PotentialFactorization {
    std::vector<std::vector<int>> subsets;           // family index
    std::map<std::string, std::vector<double>> w;    // key: subset text
    std::map<std::string, std::vector<double>> w_tilde, w_minus, w_plus;
    bool vertex_only = true;       // additivity W(A) = sum W({v}) held
    double markov_residual_base = 0.0;
    double markov_residual_minus = 0.0;  // additive-form residual per coordinate
    double markov_residual_plus = 0.0;
};
PotentialFactorization factorize_potential(const Graph& host, const Potential& w,
                                           const Beta& beta, size_t seq_len = 4);

// Exact integer polynomial interpolation of (x_i, y_i): the verdict is
// polynomial iff the Newton form collapses (degree <= #points - 2) and all
// coefficients are integers.
struct FitResult {
    bool polynomial = false;
    std::vector<Rat> coefficients;  // ascending powers
    long degree = -1;
};
FitResult integer_polynomial_fit(const std::vector<long>& xs, const std::vector<long>& ys);

// Counting N(Y_Gamma, q) over sampled primes and interpolating: psi(Gamma)
// is the leading exponent, or -inf when the counts are not polynomial.
struct PolyCountReport {
    std::vector<long> primes;
    std::vector<long> counts;  // N(Y_Gamma, q)
    FitResult fit;
    bool psi_is_minus_infinity = true;
    long psi = 0;
    std::string polynomial_text;  // human-readable fitted polynomial
};
PolyCountReport polycount(const Graph& g, const std::vector<long>& primes);

// Step-counting tables: row per connected graph (canonical key), one entry
// per machine index; +inf marks a non-halting computation.
struct StepCountTable {
    size_t machines = 0;
    std::map<std::string, std::vector<double>> rows;
};
StepCountTable synthetic_step_table(std::span<const Graph> graphs, size_t machines,
                                    unsigned seed, double nonhalt_probability = 0.2);

// Tropical factorization of the sequence-valued step character with the
// prefix-minimum operator; the transcript names, per (graph, machine), the
// coproduct term that achieved the preparation minimum, flagging the
// renormalized non-halting cases (psi_n = inf but psi~_n finite).
struct StepTranscriptRow {
    std::string graph;
    size_t machine = 0;  // 1-based
    double psi = 0.0, psi_tilde = 0.0;
    bool renormalized = false;
    bool achieved_by_subgraph = false;
    std::string gamma, quotient;  // canonical keys when achieved by a subgraph
    size_t k = 0;                 // earlier machine index achieving the prefix minimum
};
struct StepCountDemo {
    FactorizationResult factorization;
    std::vector<StepTranscriptRow> transcript;
};
StepCountDemo stepcount_demo(const StepCountTable& table, std::span<const Graph> graphs);

}  // namespace trop
