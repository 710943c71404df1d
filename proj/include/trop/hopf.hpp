#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "trop/graph.hpp"
#include "trop/semiring.hpp"

namespace trop {

// A semiring element: a tropical scalar, a pointwise sequence N -> R u {inf},
// or a truncated formal series. Series are carried in the exponential domain:
// data holds the coefficients of alpha(t) = exp(-beta gamma(t)), where the
// semiring operations become exact polynomial ones (oplus = coefficient sum,
// odot = truncated product). Series values are only meaningful at finite beta
// and in min-plus mode.
class Value {
  public:
    enum class Kind { Scalar, Sequence, Series };

    Kind kind = Kind::Scalar;
    Mode mode = Mode::MinPlus;
    std::vector<double> data = {kInf};

    static Value scalar(double v, Mode mode = Mode::MinPlus);
    static Value sequence(std::vector<double> v, Mode mode = Mode::MinPlus);
    static Value series(std::vector<double> exp_coefficients);

    // odot-unit: 0 scalar, zero sequence, series 1.
    static Value unit(Kind kind, size_t length, Mode mode = Mode::MinPlus);
    // oplus-identity: +inf (min-plus), -inf (max-plus), zero series.
    static Value oplus_identity(Kind kind, size_t length, Mode mode = Mode::MinPlus);

    size_t length() const { return data.size(); }
    double scalar_value() const;
    bool compatible_with(const Value& o) const {
        return kind == o.kind && mode == o.mode && data.size() == o.data.size();
    }
};

Value odot(const Value& a, const Value& b);
Value oplus(const Value& a, const Value& b, const Beta& beta);
// Deformed sum of many terms; weights carry coproduct multiplicities and are
// ignored at beta = inf (idempotent oplus).
Value oplus_many(std::span<const Value> terms, const Beta& beta,
                 std::span<const double> weights = {});

// max |a_i - b_i| with matching infinities counting as 0 (series: coefficient
// distance in the exponential domain).
double value_distance(const Value& a, const Value& b);

// Multiplicative-over-disjoint-union map from graphs to semiring values,
// determined by its restriction to connected nonempty graphs.
struct Character {
    std::string name;
    Value::Kind kind = Value::Kind::Scalar;
    Mode mode = Mode::MinPlus;
    size_t length = 1;
    // When false the evaluator depends on vertex/edge labels and
    // canonical-form memoization must not conflate isomorphic graphs.
    bool iso_invariant = true;
    std::function<Value(const Graph&)> eval_connected;

    Value unit_value() const { return Value::unit(kind, length, mode); }
};

// psi extended to arbitrary graphs: odot-product over connected components;
// the empty graph maps to the odot-unit.
Value char_eval(const Character& psi, const Graph& g);

// Built-in character families.
Character edge_count_character();
Character vertex_count_character();
// Trivial character: unit on the empty graph, oplus-identity on everything
// else; the unit of min-plus convolution.
Character trivial_character(Value::Kind kind = Value::Kind::Scalar, size_t length = 1,
                            Mode mode = Mode::MinPlus);
// tau(Gamma) = sum of vertex costs + sum of edge costs; satisfies
// inclusion-exclusion on overlapping unions. Vertex costs are keyed by id
// (missing key is an error); the edge cost is per-edge via a label-free
// function of the endpoint count convention: cost_loop for loops, cost_edge
// otherwise. Per-id costs make the character label-sensitive.
Character inclusion_exclusion_character(std::map<int, double> vertex_costs,
                                        double edge_cost = 0.0, double loop_cost = 0.0);
// Iso-invariant variant: constant vertex cost.
Character uniform_cost_character(double vertex_cost, double edge_cost);
// Table-backed character keyed by canonical form (sequence values).
Character table_character(std::string name,
                          std::map<std::string, std::vector<double>> table, size_t length,
                          Mode mode = Mode::MinPlus);

// Which subgraphs enter the coproduct sum.
struct Admissibility {
    std::string name;
    std::function<bool(const Graph& sub, const Graph& quotient, const Graph& whole)> accept;

    static Admissibility all();
    static Admissibility induced();    // edge subset = all edges among its vertices
    static Admissibility connected();  // connected subgraphs only
};

struct CoproductTerm {
    Graph sub;       // gamma
    Graph quotient;  // Gamma/gamma
    int multiplicity = 1;
};

// Non-primitive coproduct terms of a graph: nonempty proper admissible edge
// subsets, each paired with its contraction. With dedup, terms are merged by
// the canonical form of the pair and carry multiplicities. Throws CapError
// above max_edges (default 16: 2^|E| enumeration).
std::vector<CoproductTerm> coproduct(const Graph& g, const Admissibility& adm,
                                     bool dedup = true, int max_edges = 16);

// Convolution product (psi1 * psi2)(Gamma) over the full coproduct,
// including the primitive terms psi1(Gamma) and psi2(Gamma). Finite beta
// weights each deduplicated term by its multiplicity.
Value convolve(const Character& psi1, const Character& psi2, const Graph& g,
               const Beta& beta, const Admissibility& adm = Admissibility::all());

}  // namespace trop
