/// @file transport.hpp
/// @brief Discrete Wasserstein distances: exact network-simplex solver for
///        the dense transportation problem, entropic (Sinkhorn) approximation,
///        and grid quantization.
///
/// The exact solver runs the network simplex on the complete bipartite graph
/// with an artificial root. Artificial costs are handled symbolically: every
/// cost is a pair (real, M-count) with M treated lexicographically, so the
/// big-M bookkeeping is exact integer arithmetic and never contaminates the
/// floating-point reduced costs. Uncapacitated arcs mean only tree arcs carry
/// flow, so flow is stored per node (on the arc to the parent).
///
/// Distances are returned for the weight-normalized (probability) measures:
/// weights are rescaled to total 1 before solving, which makes translation
/// and dilation behave metrically (W_2(mu, mu(.-v)) = |v| exactly). Callers
/// needing the mass-carrying convention multiply W_p^p by the common mass.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "vortexlab/errors.hpp"
#include "vortexlab/geometry.hpp"
#include "vortexlab/grid.hpp"

namespace vortexlab {

struct WeightedPointCloud {
    std::vector<Vec2> points;
    std::vector<double> weights; // > 0

    std::size_t size() const { return points.size(); }
    double total_weight() const {
        KahanSum s;
        for (double w : weights) s.add(w);
        return s.value();
    }
};

/// One point per nonzero cell (weight h^2 rho); if there are more nonzero
/// cells than max_points, 2x2 blocks are merged greedily (mass-weighted
/// centroids) level by level until the budget holds. Total weight preserved.
inline WeightedPointCloud quantize(const GriddedDensity& g, std::size_t max_points) {
    struct Item {
        std::size_t ix, iy;
        double w;
        double wx, wy; // weight-weighted coordinates
    };
    std::vector<Item> items;
    for (std::size_t iy = 0; iy < g.ny; ++iy)
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const double v = g.at(ix, iy);
            if (v == 0.0) continue;
            const Vec2 c = g.cell_center(ix, iy);
            const double w = g.h * g.h * v;
            items.push_back({ix, iy, w, w * c.x, w * c.y});
        }
    if (items.empty()) throw DomainError("quantize: zero-mass grid");

    unsigned level = 1;
    while (items.size() > max_points) {
        std::map<std::pair<std::size_t, std::size_t>, Item> blocks;
        for (const Item& it : items) {
            const auto key = std::make_pair(it.ix >> level, it.iy >> level);
            auto [slot, fresh] = blocks.try_emplace(key, it);
            if (!fresh) {
                slot->second.w += it.w;
                slot->second.wx += it.wx;
                slot->second.wy += it.wy;
            }
        }
        items.clear();
        for (const auto& [key, it] : blocks) items.push_back(it);
        ++level;
        if (level > 48) break; // cannot merge further; single block reached
    }

    WeightedPointCloud out;
    out.points.reserve(items.size());
    out.weights.reserve(items.size());
    for (const Item& it : items) {
        out.points.push_back({it.wx / it.w, it.wy / it.w});
        out.weights.push_back(it.w);
    }
    return out;
}

namespace detail {

/// Network simplex for the dense, uncapacitated transportation problem.
class TransportSimplex {
  public:
    TransportSimplex(const std::vector<double>& supply, const std::vector<double>& demand,
                     std::vector<double> cost_matrix)
        : m_(supply.size()), n_(demand.size()), cost_(std::move(cost_matrix)) {
        const std::size_t V = m_ + n_ + 1;
        root_ = m_ + n_;
        parent_.assign(V, root_);
        pred_arc_.assign(V, 0);
        up_.assign(V, true);
        flow_.assign(V, 0.0);
        pi_.assign(V, 0.0);
        pi_m_.assign(V, 0);

        double max_cost = 0.0;
        for (double c : cost_) max_cost = std::max(max_cost, std::abs(c));
        eps_ = 1e-12 * (1.0 + max_cost);

        // Initial basis: every node hangs off the root by its artificial arc.
        // Sources point to the root (up), sinks are pointed to (down).
        for (std::size_t i = 0; i < m_; ++i) {
            up_[i] = true;
            flow_[i] = supply[i];
            pred_arc_[i] = art_arc(i);
            pi_[i] = 0.0;
            pi_m_[i] = 1;
        }
        for (std::size_t j = 0; j < n_; ++j) {
            const std::size_t v = m_ + j;
            up_[v] = false;
            flow_[v] = demand[j];
            pred_arc_[v] = art_arc(v);
            pi_[v] = 0.0;
            pi_m_[v] = -1;
        }
        parent_[root_] = root_;
        block_size_ = std::max<std::size_t>(
            64, static_cast<std::size_t>(std::sqrt(static_cast<double>(m_ * n_))));
    }

    /// Runs to optimality; returns the objective sum cost * flow.
    double solve() {
        const std::size_t max_pivots = 200 * (m_ * n_ + m_ + n_) + 10000;
        std::size_t pivots = 0;
        std::size_t next = 0;
        const std::size_t A = m_ * n_;
        while (true) {
            // Block pricing: best candidate within scanned blocks; stop early
            // once a block yields one.
            std::size_t best = A;
            double best_c = -eps_;
            int best_m = 0;
            std::size_t scanned = 0;
            while (scanned < A) {
                const std::size_t end = std::min(A, next + block_size_);
                for (std::size_t a = next; a < end; ++a) {
                    const std::size_t u = a / n_;
                    const std::size_t w = m_ + a % n_;
                    const int rm = pi_m_[w] - pi_m_[u];
                    const double rc = cost_[a] - pi_[u] + pi_[w];
                    if (rm < best_m || (rm == best_m && rc < best_c)) {
                        // exclude arcs currently in the tree
                        if (!(pred_arc_[u] == a && parent_[u] == w) &&
                            !(pred_arc_[w] == a && parent_[w] == u)) {
                            best = a;
                            best_c = rc;
                            best_m = rm;
                        }
                    }
                }
                scanned += end - next;
                next = end == A ? 0 : end;
                if (best != A) break;
            }
            if (best == A) break; // optimal
            pivot(best);
            if (++pivots > max_pivots)
                throw ConvergenceError("transport simplex exceeded its pivot budget",
                                       static_cast<double>(pivots));
        }
        KahanSum obj;
        for (std::size_t v = 0; v < m_ + n_; ++v) {
            const std::size_t a = pred_arc_[v];
            if (a < m_ * n_) obj.add(flow_[v] * cost_[a]);
            // artificial arcs carry only the residual weight imbalance
        }
        return obj.value();
    }

  private:
    std::size_t art_arc(std::size_t v) const { return m_ * n_ + v; }

    void pivot(std::size_t arc) {
        const std::size_t u_in = arc / n_;       // source endpoint
        const std::size_t w_in = m_ + arc % n_;  // sink endpoint

        // Find the join of the two tree paths (stamp walk).
        ++stamp_;
        if (visit_.size() != parent_.size()) visit_.assign(parent_.size(), 0);
        for (std::size_t x = u_in;; x = parent_[x]) {
            visit_[x] = stamp_;
            if (x == root_) break;
        }
        std::size_t join = w_in;
        while (visit_[join] != stamp_) join = parent_[join];

        // Leaving arc: minimum residual along both legs. Cycle orientation:
        // join -> u_in, entering arc u_in -> w_in, then w_in -> join.
        // On the u-leg, up-arcs lose flow; on the w-leg, down-arcs lose flow.
        double delta = std::numeric_limits<double>::infinity();
        std::size_t leave = root_;
        bool leave_on_u_leg = true;
        for (std::size_t x = u_in; x != join; x = parent_[x]) {
            if (up_[x] && flow_[x] < delta) { // strict: first minimum on this leg
                delta = flow_[x];
                leave = x;
                leave_on_u_leg = true;
            }
        }
        for (std::size_t x = w_in; x != join; x = parent_[x]) {
            if (!up_[x] && flow_[x] <= delta) { // ties: prefer closest to join
                delta = flow_[x];
                leave = x;
                leave_on_u_leg = false;
            }
        }

        // Apply the flow change.
        if (delta > 0.0) {
            for (std::size_t x = u_in; x != join; x = parent_[x])
                flow_[x] += up_[x] ? -delta : delta;
            for (std::size_t x = w_in; x != join; x = parent_[x])
                flow_[x] += up_[x] ? delta : -delta;
        }

        // Re-root the cut subtree at the entering arc's endpoint on that side.
        const std::size_t reroot = leave_on_u_leg ? u_in : w_in;
        std::size_t x = reroot;
        std::size_t prev_parent = leave_on_u_leg ? w_in : u_in;
        std::size_t prev_arc = arc;
        bool prev_up = leave_on_u_leg; // u_in -> w_in: up from u side, down to w side
        double prev_flow = delta;
        while (true) {
            const std::size_t old_parent = parent_[x];
            const std::size_t old_arc = pred_arc_[x];
            const bool old_up = up_[x];
            const double old_flow = flow_[x];
            parent_[x] = prev_parent;
            pred_arc_[x] = prev_arc;
            up_[x] = prev_up;
            flow_[x] = prev_flow;
            if (x == leave) break;
            prev_parent = x;
            prev_arc = old_arc;
            prev_up = !old_up; // arc direction is fixed; the stored side flips
            prev_flow = old_flow;
            x = old_parent;
        }

        recompute_potentials();
    }

    void recompute_potentials() {
        const std::size_t V = parent_.size();
        // children adjacency rebuilt each pivot; O(V)
        head_.assign(V, V);
        next_.assign(V, V);
        for (std::size_t v = 0; v < V; ++v) {
            if (v == root_) continue;
            next_[v] = head_[parent_[v]];
            head_[parent_[v]] = v;
        }
        stack_.clear();
        stack_.push_back(root_);
        pi_[root_] = 0.0;
        pi_m_[root_] = 0;
        while (!stack_.empty()) {
            const std::size_t p = stack_.back();
            stack_.pop_back();
            for (std::size_t c = head_[p]; c != V; c = next_[c]) {
                const std::size_t a = pred_arc_[c];
                const bool artificial = a >= m_ * n_;
                const double rc = artificial ? 0.0 : cost_[a];
                const int mc = artificial ? 1 : 0;
                if (up_[c]) {
                    pi_[c] = pi_[p] + rc;
                    pi_m_[c] = pi_m_[p] + mc;
                } else {
                    pi_[c] = pi_[p] - rc;
                    pi_m_[c] = pi_m_[p] - mc;
                }
                stack_.push_back(c);
            }
        }
    }

    std::size_t m_, n_, root_;
    std::vector<double> cost_;
    std::vector<std::size_t> parent_, pred_arc_;
    std::vector<bool> up_;  // true: tree arc points from node to parent
    std::vector<double> flow_;
    std::vector<double> pi_;
    std::vector<int> pi_m_;
    std::vector<std::size_t> head_, next_, stack_;
    std::vector<std::uint32_t> visit_;
    std::uint32_t stamp_ = 0;
    std::size_t block_size_ = 64;
    double eps_ = 1e-12;
};

inline void check_cloud(const WeightedPointCloud& c, const char* who) {
    if (c.points.size() != c.weights.size() || c.points.empty())
        throw DomainError(std::string(who) + ": malformed point cloud");
    for (double w : c.weights)
        if (!(w > 0.0)) throw DomainError(std::string(who) + ": weights must be positive");
}

inline std::vector<double> cost_matrix(const WeightedPointCloud& mu,
                                       const WeightedPointCloud& nu, int p) {
    std::vector<double> c(mu.size() * nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i)
        for (std::size_t j = 0; j < nu.size(); ++j) {
            const double r2 = norm2(mu.points[i] - nu.points[j]);
            c[i * nu.size() + j] = p == 2 ? r2 : std::sqrt(r2);
        }
    return c;
}

} // namespace detail

constexpr std::size_t kExactTransportCap = 4000;

/// Exact W_p (p in {1,2}) between weight-normalized clouds, solved to
/// optimality by the network simplex. Support sizes are capped; larger
/// instances should use wasserstein_entropic.
inline double wasserstein_exact(const WeightedPointCloud& mu, const WeightedPointCloud& nu,
                                int p) {
    detail::check_cloud(mu, "wasserstein_exact");
    detail::check_cloud(nu, "wasserstein_exact");
    if (p != 1 && p != 2) throw DomainError("wasserstein_exact: p must be 1 or 2");
    if (mu.size() > kExactTransportCap || nu.size() > kExactTransportCap)
        throw DomainError("wasserstein_exact: support too large; use the entropic solver");
    const double tm = mu.total_weight();
    const double tn = nu.total_weight();
    if (std::abs(tm - tn) > 1e-9 * std::max(tm, tn))
        throw DomainError("wasserstein_exact: total weights differ beyond tolerance");

    std::vector<double> a(mu.size()), b(nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) a[i] = mu.weights[i] / tm;
    for (std::size_t j = 0; j < nu.size(); ++j) b[j] = nu.weights[j] / tn;

    detail::TransportSimplex simplex(a, b, detail::cost_matrix(mu, nu, p));
    const double obj = simplex.solve();
    return p == 2 ? std::sqrt(std::max(0.0, obj)) : std::max(0.0, obj);
}

struct SinkhornOptions {
    std::size_t max_iterations = 20000;
    double tolerance = 1e-10; // L1 marginal violation (unit-mass scale)
};

/// Entropically regularized W_p estimate (log-domain Sinkhorn). Returns the
/// sharp plan-cost estimate <C, pi>, which overestimates W_p^p by
/// O(reg * log(support size)); see the bound helper below.
inline double wasserstein_entropic(const WeightedPointCloud& mu, const WeightedPointCloud& nu,
                                   int p, double reg, SinkhornOptions opts = {}) {
    detail::check_cloud(mu, "wasserstein_entropic");
    detail::check_cloud(nu, "wasserstein_entropic");
    if (p != 1 && p != 2) throw DomainError("wasserstein_entropic: p must be 1 or 2");
    if (!(reg > 0.0)) throw DomainError("wasserstein_entropic: reg must be > 0");

    const std::size_t m = mu.size(), n = nu.size();
    const double tm = mu.total_weight(), tn = nu.total_weight();
    std::vector<double> la(m), lb(n);
    for (std::size_t i = 0; i < m; ++i) la[i] = std::log(mu.weights[i] / tm);
    for (std::size_t j = 0; j < n; ++j) lb[j] = std::log(nu.weights[j] / tn);
    const std::vector<double> C = detail::cost_matrix(mu, nu, p);

    std::vector<double> f(m, 0.0), g(n, 0.0), scratch(std::max(m, n));
    auto lse = [&scratch](std::size_t count) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < count; ++k) mx = std::max(mx, scratch[k]);
        KahanSum s;
        for (std::size_t k = 0; k < count; ++k) s.add(std::exp(scratch[k] - mx));
        return mx + std::log(s.value());
    };

    double residual = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j)
                scratch[j] = lb[j] + (g[j] - C[i * n + j]) / reg;
            f[i] = -reg * lse(n);
        }
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < m; ++i)
                scratch[i] = la[i] + (f[i] - C[i * n + j]) / reg;
            g[j] = -reg * lse(m);
        }
        // Column marginals are exact right after the g update; convergence is
        // measured on the row marginals.
        residual = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            KahanSum row;
            for (std::size_t j = 0; j < n; ++j)
                row.add(std::exp(la[i] + lb[j] + (f[i] + g[j] - C[i * n + j]) / reg));
            residual += std::abs(row.value() - std::exp(la[i]));
        }
        if (residual < opts.tolerance) break;
    }
    if (!(residual < opts.tolerance))
        throw ConvergenceError("wasserstein_entropic: Sinkhorn did not converge", residual);

    KahanSum cost;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            cost.add(C[i * n + j] *
                     std::exp(la[i] + lb[j] + (f[i] + g[j] - C[i * n + j]) / reg));
    const double wpp = std::max(0.0, cost.value());
    return p == 2 ? std::sqrt(wpp) : wpp;
}

/// Documented overestimation bound of the entropic plan cost vs W_p^p:
/// <C, pi_reg> - W_p^p <= reg * KL(pi* | a x b) <= 2 reg log(max support + 1).
inline double entropic_bias_bound(std::size_t support_m, std::size_t support_n, double reg) {
    const auto s = static_cast<double>(std::max(support_m, support_n) + 1);
    return 2.0 * reg * std::log(s);
}

} // namespace vortexlab
