#include "trop/hopf.hpp"

#include <algorithm>
#include <cmath>

namespace trop {

namespace {

void require_compatible(const Value& a, const Value& b) {
    if (!a.compatible_with(b)) throw DomainError("semiring elements are incompatible");
}

// truncated polynomial product (series exponential domain)
std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size(), 0.0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (size_t j = 0; j + i < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

}  // namespace

Value Value::scalar(double v, Mode mode) { return {Kind::Scalar, mode, {v}}; }

Value Value::sequence(std::vector<double> v, Mode mode) {
    if (v.empty()) throw DomainError("sequence value needs positive length");
    return {Kind::Sequence, mode, std::move(v)};
}

Value Value::series(std::vector<double> exp_coefficients) {
    if (exp_coefficients.empty()) throw DomainError("series value needs positive length");
    return {Kind::Series, Mode::MinPlus, std::move(exp_coefficients)};
}

Value Value::unit(Kind kind, size_t length, Mode mode) {
    if (kind == Kind::Scalar) return scalar(0.0, mode);
    std::vector<double> d(length, 0.0);
    if (kind == Kind::Series) {
        d[0] = 1.0;  // exp(-beta * 0) = 1
        return series(std::move(d));
    }
    return sequence(std::move(d), mode);
}

Value Value::oplus_identity(Kind kind, size_t length, Mode mode) {
    if (kind == Kind::Series) return series(std::vector<double>(length, 0.0));
    double inf = mode == Mode::MinPlus ? kInf : -kInf;
    if (kind == Kind::Scalar) return scalar(inf, mode);
    return sequence(std::vector<double>(length, inf), mode);
}

double Value::scalar_value() const {
    if (kind != Kind::Scalar) throw DomainError("value is not a scalar");
    return data[0];
}

Value odot(const Value& a, const Value& b) {
    require_compatible(a, b);
    Value out = a;
    if (a.kind == Value::Kind::Series) {
        out.data = poly_mul(a.data, b.data);
        return out;
    }
    const double inf = a.mode == Mode::MinPlus ? kInf : -kInf;
    for (size_t i = 0; i < out.data.size(); ++i) {
        // inf is absorbing for odot
        out.data[i] = (a.data[i] == inf || b.data[i] == inf) ? inf : a.data[i] + b.data[i];
    }
    return out;
}

Value oplus(const Value& a, const Value& b, const Beta& beta) {
    Value arr[2] = {a, b};
    return oplus_many(std::span<const Value>(arr, 2), beta);
}

Value oplus_many(std::span<const Value> terms, const Beta& beta,
                 std::span<const double> weights) {
    if (terms.empty()) throw DomainError("oplus over an empty term list");
    for (size_t i = 1; i < terms.size(); ++i) require_compatible(terms[0], terms[i]);
    Value out = terms[0];

    if (out.kind == Value::Kind::Series) {
        if (beta.is_inf()) throw DomainError("series elements require finite beta");
        std::fill(out.data.begin(), out.data.end(), 0.0);
        for (size_t t = 0; t < terms.size(); ++t) {
            double w = weights.empty() ? 1.0 : weights[t];
            for (size_t i = 0; i < out.data.size(); ++i)
                out.data[i] += w * terms[t].data[i];
        }
        return out;
    }

    const bool maxplus = out.mode == Mode::MaxPlus;
    std::vector<double> column(terms.size());
    for (size_t i = 0; i < out.data.size(); ++i) {
        for (size_t t = 0; t < terms.size(); ++t)
            column[t] = maxplus ? -terms[t].data[i] : terms[t].data[i];
        double v = beta.is_inf() ? *std::min_element(column.begin(), column.end())
                                 : lse_min(column, beta.value(), weights);
        out.data[i] = maxplus ? -v : v;
    }
    return out;
}

double value_distance(const Value& a, const Value& b) {
    require_compatible(a, b);
    double d = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        if (a.data[i] == b.data[i]) continue;  // matching infinities included
        if (std::isinf(a.data[i]) || std::isinf(b.data[i])) return kInf;
        d = std::max(d, std::abs(a.data[i] - b.data[i]));
    }
    return d;
}

Value char_eval(const Character& psi, const Graph& g) {
    Value acc = psi.unit_value();
    for (const Graph& comp : g.component_graphs()) {
        // bare vertices are Hopf units and contribute nothing
        if (comp.n_edges() == 0) continue;
        acc = odot(acc, psi.eval_connected(comp));
    }
    return acc;
}

Character edge_count_character() {
    Character c;
    c.name = "edge-count";
    c.eval_connected = [](const Graph& g) { return Value::scalar(double(g.n_edges())); };
    return c;
}

Character vertex_count_character() {
    Character c;
    c.name = "vertex-count";
    c.eval_connected = [](const Graph& g) { return Value::scalar(double(g.n_vertices())); };
    return c;
}

Character trivial_character(Value::Kind kind, size_t length, Mode mode) {
    Character c;
    c.name = "trivial";
    c.kind = kind;
    c.length = length;
    c.mode = mode;
    c.eval_connected = [kind, length, mode](const Graph&) {
        return Value::oplus_identity(kind, length, mode);
    };
    return c;
}

Character inclusion_exclusion_character(std::map<int, double> vertex_costs,
                                        double edge_cost, double loop_cost) {
    Character c;
    c.name = "inclusion-exclusion";
    c.iso_invariant = false;
    c.eval_connected = [vc = std::move(vertex_costs), edge_cost,
                        loop_cost](const Graph& g) {
        double tau = 0.0;
        for (int v : g.vertices()) {
            auto it = vc.find(v);
            if (it == vc.end())
                throw DomainError("missing vertex cost for id " + std::to_string(v));
            tau += it->second;
        }
        for (const auto& [a, b] : g.edges()) tau += (a == b) ? loop_cost : edge_cost;
        return Value::scalar(tau);
    };
    return c;
}

Character uniform_cost_character(double vertex_cost, double edge_cost) {
    Character c;
    c.name = "uniform-cost";
    c.eval_connected = [vertex_cost, edge_cost](const Graph& g) {
        return Value::scalar(vertex_cost * g.n_vertices() + edge_cost * g.n_edges());
    };
    return c;
}

Character table_character(std::string name,
                          std::map<std::string, std::vector<double>> table, size_t length,
                          Mode mode) {
    Character c;
    c.name = std::move(name);
    c.kind = Value::Kind::Sequence;
    c.length = length;
    c.mode = mode;
    c.eval_connected = [tab = std::move(table), length, mode](const Graph& g) {
        auto it = tab.find(g.canonical_string());
        if (it == tab.end())
            throw DomainError("character table has no entry for graph " +
                              g.canonical_string());
        if (it->second.size() != length) throw DomainError("table row length mismatch");
        return Value::sequence(it->second, mode);
    };
    return c;
}

Admissibility Admissibility::all() {
    return {"all", [](const Graph&, const Graph&, const Graph&) { return true; }};
}

Admissibility Admissibility::induced() {
    return {"induced", [](const Graph& sub, const Graph&, const Graph& whole) {
                Graph ind = whole.induced_subgraph(sub.vertices());
                return ind.edges() == sub.edges();
            }};
}

Admissibility Admissibility::connected() {
    return {"connected",
            [](const Graph& sub, const Graph&, const Graph&) { return sub.is_connected(); }};
}

std::vector<CoproductTerm> coproduct(const Graph& g, const Admissibility& adm, bool dedup,
                                     int max_edges) {
    const int m = g.n_edges();
    if (m > max_edges) throw CapError("coproduct enumeration cap exceeded");
    std::vector<CoproductTerm> raw;
    if (m < 2) return raw;  // single edge: no nonempty proper subset
    for (unsigned mask = 1; mask < (1u << m) - 1u; ++mask) {
        std::vector<int> subset;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) subset.push_back(i);
        Graph sub = g.edge_subgraph(subset);
        Graph quot = g.contract(subset);
        if (!adm.accept(sub, quot, g)) continue;
        raw.push_back({std::move(sub), std::move(quot), 1});
    }
    if (!dedup) return raw;
    std::map<std::string, size_t> seen;
    std::vector<CoproductTerm> out;
    for (auto& term : raw) {
        std::string key =
            term.sub.canonical_string() + "|" + term.quotient.canonical_string();
        auto it = seen.find(key);
        if (it == seen.end()) {
            seen[key] = out.size();
            out.push_back(std::move(term));
        } else {
            out[it->second].multiplicity += 1;
        }
    }
    return out;
}

Value convolve(const Character& psi1, const Character& psi2, const Graph& g,
               const Beta& beta, const Admissibility& adm) {
    if (psi1.kind != psi2.kind || psi1.mode != psi2.mode || psi1.length != psi2.length)
        throw DomainError("characters live in different semirings");
    bool dedup = psi1.iso_invariant && psi2.iso_invariant;
    std::vector<Value> terms;
    std::vector<double> weights;
    // primitive part: Gamma (x) 1 and 1 (x) Gamma
    terms.push_back(char_eval(psi1, g));
    weights.push_back(1.0);
    terms.push_back(char_eval(psi2, g));
    weights.push_back(1.0);
    for (const CoproductTerm& t : coproduct(g, adm, dedup)) {
        terms.push_back(odot(char_eval(psi1, t.sub), char_eval(psi2, t.quotient)));
        weights.push_back(double(t.multiplicity));
    }
    return oplus_many(terms, beta, weights);
}

}  // namespace trop
