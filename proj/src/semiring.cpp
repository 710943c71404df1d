#include "trop/semiring.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace trop {

namespace {

void require_same_mode(const ExtReal& x, const ExtReal& y) {
    if (x.mode != y.mode) throw DomainError("tropical scalars have different modes");
}

}  // namespace

ExtReal trop_oplus(ExtReal x, ExtReal y) {
    require_same_mode(x, y);
    double v = x.mode == Mode::MinPlus ? std::min(x.value, y.value)
                                       : std::max(x.value, y.value);
    return {v, x.mode};
}

ExtReal trop_odot(ExtReal x, ExtReal y) {
    require_same_mode(x, y);
    if (x.is_identity() || y.is_identity()) return ExtReal::identity(x.mode);
    return {x.value + y.value, x.mode};
}

ProbVector::ProbVector(std::vector<double> probs, double tol) : p(std::move(probs)) {
    if (p.empty()) throw DomainError("probability vector is empty");
    double sum = 0.0;
    for (double pi : p) {
        if (pi < -tol) throw DomainError("negative probability");
        sum += pi;
    }
    if (std::abs(sum - 1.0) > tol) throw DomainError("probabilities do not sum to 1");
}

Entropy Entropy::renyi(double q) {
    if (q == 1.0) throw DomainError("Renyi entropy requires q != 1");
    if (q <= 0.0) throw DomainError("Renyi entropy requires q > 0");
    return {Kind::Renyi, q};
}

Entropy Entropy::tsallis(double alpha) {
    if (alpha == 1.0) throw DomainError("Tsallis entropy requires alpha != 1");
    if (alpha <= 0.0) throw DomainError("Tsallis entropy requires alpha > 0");
    return {Kind::Tsallis, alpha};
}

std::string Entropy::name() const {
    switch (kind) {
        case Kind::Shannon: return "shannon";
        case Kind::Renyi: return "renyi(" + std::to_string(param) + ")";
        case Kind::Tsallis: return "tsallis(" + std::to_string(param) + ")";
    }
    return "?";
}

double Entropy::operator()(std::span<const double> p) const {
    // Coherence: zero coordinates are dropped.
    switch (kind) {
        case Kind::Shannon: {
            double s = 0.0;
            for (double pi : p)
                if (pi > 0.0) s -= pi * std::log(pi);
            return s;
        }
        case Kind::Renyi: {
            double s = 0.0;
            for (double pi : p)
                if (pi > 0.0) s += std::pow(pi, param);
            return std::log(s) / (1.0 - param);
        }
        case Kind::Tsallis: {
            double s = 0.0;
            for (double pi : p)
                if (pi > 0.0) s += std::pow(pi, param);
            return (s - 1.0) / (1.0 - param);
        }
    }
    return 0.0;
}

double entropy_eval(const Entropy& S, const ProbVector& p) { return S(p.p); }

double lse_min(std::span<const double> values, double beta,
               std::span<const double> weights) {
    double m = kInf;
    for (size_t i = 0; i < values.size(); ++i)
        if (values[i] < m) m = values[i];
    if (m == kInf) return kInf;  // empty sum or all infinite
    double s = 0.0;
    for (size_t i = 0; i < values.size(); ++i) {
        double w = weights.empty() ? 1.0 : weights[i];
        if (values[i] != kInf) s += w * std::exp(-beta * (values[i] - m));
    }
    return m - std::log(s) / beta;
}

namespace {

// Objective sum_i p_i x_i - S(p)/beta on the simplex; used for the
// non-Shannon entropies, where no closed form is available.
double objective(std::span<const double> p, std::span<const double> xs, double beta,
                 const Entropy& S) {
    double lin = 0.0;
    for (size_t i = 0; i < p.size(); ++i) lin += p[i] * xs[i];
    return lin - S(p) / beta;
}

// Binary case: coarse grid plus golden-section refinement around the best
// cell. The Shannon objective is convex in p; Renyi/Tsallis are smooth and
// in practice unimodal on [0,1] at desk scale, and the coarse grid guards
// the refinement.
ThermoResult minimize_binary(double x1, double x2, double beta, const Entropy& S) {
    auto obj = [&](double p) {
        double pr[2] = {p, 1.0 - p};
        double lin = p * x1 + (1.0 - p) * x2;
        return lin - S(pr) / beta;
    };
    const int grid_n = 2000;
    double best_p = 0.0, best_v = obj(0.0);
    for (int i = 1; i <= grid_n; ++i) {
        double p = double(i) / grid_n;
        double v = obj(p);
        if (v < best_v) {
            best_v = v;
            best_p = p;
        }
    }
    double lo = std::max(0.0, best_p - 1.0 / grid_n);
    double hi = std::min(1.0, best_p + 1.0 / grid_n);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = obj(c), fd = obj(d);
    while (b - a > 1e-12) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = obj(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = obj(d);
        }
    }
    double p = 0.5 * (a + b);
    double v = std::min({obj(p), best_v});
    return {ExtReal{v, Mode::MinPlus}, 1e-12};
}

// Euclidean projection onto the probability simplex (sort-based).
void project_simplex(std::vector<double>& v) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0.0, theta = 0.0;
    int rho = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        css += u[i];
        double t = (css - 1.0) / double(i + 1);
        if (u[i] - t > 0) {
            rho = int(i) + 1;
            theta = t;
        }
    }
    (void)rho;
    for (double& vi : v) vi = std::max(0.0, vi - theta);
}

// n >= 3: Dirichlet-sampled multi-start projected gradient descent.
ThermoResult minimize_simplex(std::span<const double> xs, double beta, const Entropy& S) {
    const size_t n = xs.size();
    std::mt19937 rng(0x5eed);
    std::exponential_distribution<double> expd(1.0);

    auto grad_entropy = [&](const std::vector<double>& p, std::vector<double>& g) {
        const double eps = 1e-12;
        if (S.kind == Entropy::Kind::Renyi) {
            double sq = 0.0;
            for (double pi : p) sq += std::pow(std::max(pi, eps), S.param);
            for (size_t i = 0; i < p.size(); ++i)
                g[i] = S.param * std::pow(std::max(p[i], eps), S.param - 1.0) /
                       ((1.0 - S.param) * sq);
        } else if (S.kind == Entropy::Kind::Tsallis) {
            for (size_t i = 0; i < p.size(); ++i)
                g[i] = S.param * std::pow(std::max(p[i], eps), S.param - 1.0) /
                       (1.0 - S.param);
        } else {
            for (size_t i = 0; i < p.size(); ++i)
                g[i] = -(std::log(std::max(p[i], eps)) + 1.0);
        }
    };

    double best = kInf;
    const int n_starts = 24;
    const double final_step = 1e-10;
    std::vector<double> p(n), g(n), ge(n), trial(n);
    for (int s = 0; s < n_starts; ++s) {
        if (s == 0) {
            std::fill(p.begin(), p.end(), 1.0 / double(n));
        } else if (s <= int(n)) {
            // near-vertex starts
            std::fill(p.begin(), p.end(), 0.05 / double(n - 1));
            p[s - 1] = 1.0 - 0.05 * (1.0 - 1.0 / double(n - 1));
            double sum = std::accumulate(p.begin(), p.end(), 0.0);
            for (double& pi : p) pi /= sum;
        } else {
            double sum = 0.0;
            for (double& pi : p) sum += (pi = expd(rng));
            for (double& pi : p) pi /= sum;
        }
        double step = 0.25;
        double fv = objective(p, xs, beta, S);
        for (int it = 0; it < 400 && step > final_step; ++it) {
            grad_entropy(p, ge);
            for (size_t i = 0; i < n; ++i) g[i] = xs[i] - ge[i] / beta;
            trial = p;
            for (size_t i = 0; i < n; ++i) trial[i] -= step * g[i];
            project_simplex(trial);
            double ft = objective(trial, xs, beta, S);
            if (ft < fv - 1e-15) {
                p = trial;
                fv = ft;
            } else {
                step *= 0.5;
            }
        }
        best = std::min(best, fv);
    }
    return {ExtReal{best, Mode::MinPlus}, 1e-10};
}

ThermoResult thermo_min_plus(std::span<const double> xs, const Beta& beta,
                             const Entropy& S) {
    // identity entries already removed; xs nonempty and finite
    if (beta.is_inf()) {
        double m = *std::min_element(xs.begin(), xs.end());
        return {ExtReal{m, Mode::MinPlus}, 0.0};
    }
    const double b = beta.value();
    if (S.is_shannon()) return {ExtReal{lse_min(xs, b), Mode::MinPlus}, 0.0};
    if (xs.size() == 1) return {ExtReal{xs[0], Mode::MinPlus}, 0.0};
    if (xs.size() == 2) return minimize_binary(xs[0], xs[1], b, S);
    return minimize_simplex(xs, b, S);
}

}  // namespace

ThermoResult thermo_add_n_info(std::span<const ExtReal> xs, const Beta& beta,
                               const Entropy& S) {
    if (xs.empty()) throw DomainError("thermo_add_n on empty input");
    const Mode mode = xs.front().mode;
    std::vector<double> finite;
    finite.reserve(xs.size());
    for (const ExtReal& x : xs) {
        if (x.mode != mode) throw DomainError("mixed modes in thermo_add_n");
        // identity entries carry probability 0 at the optimum and are dropped
        if (!x.is_identity())
            finite.push_back(mode == Mode::MinPlus ? x.value : -x.value);
    }
    if (finite.empty()) return {ExtReal::identity(mode), 0.0};
    ThermoResult r = thermo_min_plus(finite, beta, S);
    if (mode == Mode::MaxPlus) r.value = ExtReal{-r.value.value, Mode::MaxPlus};
    r.value.mode = mode;
    return r;
}

ExtReal thermo_add_n(std::span<const ExtReal> xs, const Beta& beta, const Entropy& S) {
    return thermo_add_n_info(xs, beta, S).value;
}

ExtReal thermo_add(ExtReal x, ExtReal y, const Beta& beta, const Entropy& S) {
    ExtReal xs[2] = {x, y};
    return thermo_add_n(xs, beta, S);
}

int PlanarTree::leaf_count() const {
    if (is_leaf()) return 1;
    int n = 0;
    for (const auto& c : children) n += c.leaf_count();
    return n;
}

void PlanarTree::validate() const {
    if (is_leaf()) return;
    if (children.size() < 2) throw DomainError("internal tree vertex with arity < 2");
    for (const auto& c : children) c.validate();
}

PlanarTree PlanarTree::node(std::vector<PlanarTree> ch) {
    PlanarTree t;
    t.children = std::move(ch);
    t.validate();
    return t;
}

PlanarTree PlanarTree::left_comb(int n) {
    if (n < 1) throw DomainError("tree needs >= 1 leaf");
    PlanarTree t = leaf();
    for (int i = 1; i < n; ++i) t = node({std::move(t), leaf()});
    return t;
}

PlanarTree PlanarTree::right_comb(int n) {
    if (n < 1) throw DomainError("tree needs >= 1 leaf");
    PlanarTree t = leaf();
    for (int i = 1; i < n; ++i) t = node({leaf(), std::move(t)});
    return t;
}

PlanarTree PlanarTree::flat(int n) {
    if (n < 1) throw DomainError("tree needs >= 1 leaf");
    if (n == 1) return leaf();
    std::vector<PlanarTree> ch(n);
    return node(std::move(ch));
}

namespace {

ExtReal tree_eval(const PlanarTree& t, std::span<const ExtReal> xs, size_t& cursor,
                  const Beta& beta, const Entropy& S) {
    if (t.is_leaf()) return xs[cursor++];
    std::vector<ExtReal> vals;
    vals.reserve(t.children.size());
    for (const auto& c : t.children) vals.push_back(tree_eval(c, xs, cursor, beta, S));
    return thermo_add_n(vals, beta, S);
}

}  // namespace

ExtReal tree_compose(const PlanarTree& tree, std::span<const ExtReal> xs,
                     const Beta& beta, const Entropy& S) {
    tree.validate();
    if (tree.leaf_count() != int(xs.size()))
        throw DomainError("tree leaf count does not match input arity");
    size_t cursor = 0;
    return tree_eval(tree, xs, cursor, beta, S);
}

}  // namespace trop
