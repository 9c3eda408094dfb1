#include "dcl/network.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace dcl {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

Network::Network(int vertex_count, std::vector<NetEdge> edges)
    : n_(vertex_count), edges_(std::move(edges)) {
    adj_.assign(n_, {});
    for (int e = 0; e < (int)edges_.size(); ++e) {
        const NetEdge& ne = edges_[e];
        if (ne.a < 0 || ne.a >= n_ || ne.b < 0 || ne.b >= n_ || ne.a == ne.b)
            throw Error("bad network edge");
        if (!(ne.conductance > 0) || !std::isfinite(ne.conductance))
            throw Error("conductance must be positive and finite");
        adj_[ne.a].emplace_back(e, ne.b);
        adj_[ne.b].emplace_back(e, ne.a);
    }
}

std::vector<bool> graph_boundary(const Network& net, const std::vector<bool>& s) {
    std::vector<bool> out(s.size(), false);
    for (int i = 0; i < net.vertex_count(); ++i) {
        if (!s[i]) continue;
        for (auto [e, j] : net.incident(i))
            if (!s[j]) { out[i] = true; break; }
    }
    return out;
}

std::vector<bool> graph_interior(const Network& net, const std::vector<bool>& s) {
    std::vector<bool> b = graph_boundary(net, s);
    std::vector<bool> out(s.size());
    for (size_t i = 0; i < s.size(); ++i) out[i] = s[i] && !b[i];
    return out;
}

std::vector<bool> graph_closure(const Network& net, const std::vector<bool>& s) {
    std::vector<bool> c(s.size());
    for (size_t i = 0; i < s.size(); ++i) c[i] = !s[i];
    c = graph_interior(net, c);
    for (size_t i = 0; i < s.size(); ++i) c[i] = !c[i];
    return c;
}

namespace {

// Shared core: `inter` marks the unknowns, `region` the vertices carrying
// values (g elsewhere on region, NaN outside).
DirichletResult solve_masked(const Network& net, const std::vector<bool>& region,
                             const std::vector<bool>& inter,
                             const std::vector<double>& g) {
    int n = net.vertex_count();
    std::vector<int> idx(n, -1);
    std::vector<int> interior;
    for (int i = 0; i < n; ++i)
        if (inter[i]) {
            idx[i] = (int)interior.size();
            interior.push_back(i);
        }
    int m = (int)interior.size();

    // Every interior component must reach a boundary vertex, else singular.
    {
        std::vector<char> seen(n, 0);
        for (int i = 0; i < n; ++i) {
            if (!inter[i] || seen[i]) continue;
            std::queue<int> q;
            q.push(i);
            seen[i] = 1;
            bool touches = false;
            while (!q.empty()) {
                int v = q.front();
                q.pop();
                for (auto [e, j] : net.incident(v)) {
                    if (!inter[j]) { touches = true; continue; }
                    if (!seen[j]) { seen[j] = 1; q.push(j); }
                }
            }
            if (!touches) throw Error("singular system: interior component without boundary contact");
        }
    }

    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int r = 0; r < m; ++r) {
        int i = interior[r];
        double diag = 0;
        for (auto [e, j] : net.incident(i)) {
            double w = net.edges()[e].conductance;
            diag += w;
            if (idx[j] >= 0)
                trip.emplace_back(r, idx[j], -w);
            else
                rhs[r] += w * g[j];
        }
        trip.emplace_back(r, r, diag);
    }
    Eigen::SparseMatrix<double> L(m, m);
    L.setFromTriplets(trip.begin(), trip.end());

    Eigen::VectorXd x;
    if (m == 0) {
        x.resize(0);
    } else if (m <= 2000000) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(L);
        if (solver.info() != Eigen::Success) throw Error("Dirichlet factorization failed");
        x = solver.solve(rhs);
        if (solver.info() != Eigen::Success) throw Error("Dirichlet solve failed");
    } else {
        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper>
            cg(L);
        cg.setTolerance(1e-10);
        cg.setMaxIterations(40000);
        x = cg.solve(rhs);
        if (cg.info() != Eigen::Success && cg.error() > 1e-6)
            throw Error("Dirichlet CG did not converge");
    }

    DirichletResult out;
    out.f.assign(n, kNaN);
    for (int i = 0; i < n; ++i)
        if (region[i] && !inter[i]) out.f[i] = g[i];
    for (int r = 0; r < m; ++r) out.f[interior[r]] = x[r];

    for (int r = 0; r < m; ++r) {
        int i = interior[r];
        double res = 0;
        for (auto [e, j] : net.incident(i))
            res += net.edges()[e].conductance * (out.f[j] - out.f[i]);
        out.max_residual = std::max(out.max_residual, std::abs(res));
    }
    return out;
}

}  // namespace

DirichletResult solve_dirichlet(const Network& net, const std::vector<bool>& region,
                                const std::vector<double>& g) {
    return solve_masked(net, region, graph_interior(net, region), g);
}

DirichletResult solve_dirichlet_fixed(const Network& net, const std::vector<bool>& fixed,
                                      const std::vector<double>& g) {
    int n = net.vertex_count();
    std::vector<bool> region(n, true), inter(n);
    bool any = false;
    for (int i = 0; i < n; ++i) {
        inter[i] = !fixed[i];
        any = any || fixed[i];
    }
    if (!any) throw Error("singular system: no fixed vertices");
    return solve_masked(net, region, inter, g);
}

std::vector<int> edge_pool_E0(const ELProblem& p) {
    const Network& net = *p.net;
    std::vector<int> pool;
    for (int e = 0; e < (int)net.edges().size(); ++e) {
        int a = net.edges()[e].a, b = net.edges()[e].b;
        bool a0 = !p.v1[a] && !p.v2[a];
        bool b0 = !p.v1[b] && !p.v2[b];
        if (a0 || b0) pool.push_back(e);
    }
    return pool;
}

namespace {

void validate_problem(const ELProblem& p) {
    const Network& net = *p.net;
    bool any1 = false, any2 = false;
    for (int i = 0; i < net.vertex_count(); ++i) {
        if (p.v1[i] && p.v2[i]) throw Error("V1 and V2 must be disjoint");
        any1 |= p.v1[i];
        any2 |= p.v2[i];
    }
    if (!any1 || !any2) throw Error("V1 and V2 must be nonempty");
}

// Is V2 reachable from V1 through paths whose interior vertices lie in V0?
bool el_connected(const ELProblem& p) {
    const Network& net = *p.net;
    std::vector<char> seen(net.vertex_count(), 0);
    std::queue<int> q;
    for (int i = 0; i < net.vertex_count(); ++i)
        if (p.v1[i]) { q.push(i); seen[i] = 1; }
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (auto [e, j] : net.incident(v)) {
            if (seen[j]) continue;
            bool v0 = !p.v1[j] && !p.v2[j];
            if (p.v2[j]) {
                // must arrive via an E0 edge
                bool va = !p.v1[v] && !p.v2[v];
                if (va) return true;
                continue;
            }
            if (v0) { seen[j] = 1; q.push(j); }
        }
    }
    return false;
}

}  // namespace

ELResult extremal_length(const ELProblem& p) {
    validate_problem(p);
    const Network& net = *p.net;
    ELResult out;
    out.w.assign(net.edges().size(), 0.0);
    if (!el_connected(p)) return out;  // EL = +infinity
    out.connected = true;

    std::vector<bool> region(net.vertex_count(), true);
    std::vector<double> g(net.vertex_count(), 0.0);
    for (int i = 0; i < net.vertex_count(); ++i)
        if (p.v2[i]) g[i] = 1.0;
    // Interior of the Dirichlet problem is exactly V0: mark V1/V2 as boundary
    // by solving on the full graph but fixing them.
    std::vector<bool> v0(net.vertex_count());
    for (int i = 0; i < net.vertex_count(); ++i) v0[i] = !p.v1[i] && !p.v2[i];

    // Build a sub-network question: fix f on V1 u V2, harmonic on V0.
    int n = net.vertex_count();
    std::vector<int> idx(n, -1);
    std::vector<int> unknowns;
    for (int i = 0; i < n; ++i)
        if (v0[i]) { idx[i] = (int)unknowns.size(); unknowns.push_back(i); }
    int m = (int)unknowns.size();
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int r = 0; r < m; ++r) {
        int i = unknowns[r];
        double diag = 0;
        for (auto [e, j] : net.incident(i)) {
            double w = net.edges()[e].conductance;
            diag += w;
            if (idx[j] >= 0)
                trip.emplace_back(r, idx[j], -w);
            else
                rhs[r] += w * g[j];
        }
        trip.emplace_back(r, r, diag);
    }
    Eigen::SparseMatrix<double> L(m, m);
    L.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd x(m);
    if (m > 0) {
        if (m <= 2000000) {
            Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(L);
            if (solver.info() != Eigen::Success) throw Error("EL factorization failed");
            x = solver.solve(rhs);
        } else {
            Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper>
                cg(L);
            cg.setTolerance(1e-9);
            cg.setMaxIterations(60000);
            x = cg.solve(rhs);
            if (cg.info() != Eigen::Success && cg.error() > 1e-5)
                throw Error("EL CG did not converge");
        }
    }
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = p.v2[i] ? 1.0 : 0.0;
    for (int r = 0; r < m; ++r) f[unknowns[r]] = x[r];

    // Energy of the 0/1 potential is the effective conductance; EL is the
    // effective resistance, with w the edge currents of the unit-total-current
    // flow (so every V1-V2 cut carries total w >= 1).
    double energy = 0;
    for (int e : edge_pool_E0(p)) {
        const NetEdge& ne = net.edges()[e];
        double cur = ne.conductance * std::abs(f[ne.b] - f[ne.a]);
        out.w[e] = cur;
        energy += (1.0 / ne.conductance) * cur * cur;
    }
    if (!(energy > 0)) throw Error("EL solve produced zero energy");
    for (int e : edge_pool_E0(p)) out.w[e] /= energy;
    out.value = 1.0 / energy;
    return out;
}

namespace {

// Shortest V1->V2 path with interior vertices in V0, edge costs given;
// returns edge indices or empty if none.
std::vector<int> shortest_separating_path(const ELProblem& p,
                                          const std::vector<double>& cost) {
    const Network& net = *p.net;
    int n = net.vertex_count();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> pred_edge(n, -1), pred_vertex(n, -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (int i = 0; i < n; ++i)
        if (p.v1[i]) { dist[i] = 0; heap.push({0, i}); }
    int goal = -1;
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        if (d > dist[v]) continue;
        if (p.v2[v]) { goal = v; break; }
        for (auto [e, j] : net.incident(v)) {
            bool j0 = !p.v1[j] && !p.v2[j];
            bool v_0 = !p.v1[v] && !p.v2[v];
            // Path edges must lie in E0: at least one endpoint in V0.
            if (!j0 && !v_0) continue;
            if (p.v1[j]) continue;  // no re-entering V1
            double nd = d + cost[e];
            if (nd < dist[j]) {
                dist[j] = nd;
                pred_edge[j] = e;
                pred_vertex[j] = v;
                heap.push({nd, j});
            }
        }
    }
    std::vector<int> path;
    if (goal < 0) return path;
    for (int v = goal; pred_edge[v] >= 0; v = pred_vertex[v]) path.push_back(pred_edge[v]);
    return path;
}

}  // namespace

ELResult extremal_width(const ELProblem& p, const EWOptions& opt) {
    validate_problem(p);
    const Network& net = *p.net;
    ELResult out;
    out.w.assign(net.edges().size(), 0.0);
    std::vector<int> pool = edge_pool_E0(p);
    std::vector<int> pool_index(net.edges().size(), -1);
    for (int k = 0; k < (int)pool.size(); ++k) pool_index[pool[k]] = k;
    int ne = (int)pool.size();

    if (!el_connected(p)) return out;
    out.connected = true;

    // minimize sum mu w^2  s.t.  sum_{e in path} mu_e w_e >= 1 per path.
    // Constraint generation with an active-set equality QP:
    //   w = (1/2) diag(1/mu) A^T lambda,  (A diag(1/(2 mu)) A^T) lambda = 1.
    std::vector<double> mu(ne);
    for (int k = 0; k < ne; ++k) mu[k] = 1.0 / net.edges()[pool[k]].conductance;

    std::vector<std::vector<int>> constraints;  // rows, pool indices
    Eigen::VectorXd w = Eigen::VectorXd::Zero(ne);

    std::vector<double> cost(net.edges().size(), 0.0);
    for (int round = 0; round < opt.max_constraints; ++round) {
        for (int k = 0; k < ne; ++k) cost[pool[k]] = mu[k] * w[k];
        std::vector<int> path = shortest_separating_path(p, cost);
        if (path.empty()) throw Error("separation failed despite connectivity");
        double len = 0;
        for (int e : path) len += cost[e];
        if (len >= 1 - 1e-9) break;  // all path constraints satisfied

        std::vector<int> row;
        for (int e : path) row.push_back(pool_index[e]);
        constraints.push_back(std::move(row));

        // Active-set loop: solve with current active rows as equalities, drop
        // rows with negative multipliers.
        for (;;) {
            int na = (int)constraints.size();
            Eigen::MatrixXd G(na, na);
            for (int r = 0; r < na; ++r)
                for (int c = 0; c < na; ++c) {
                    // The stationarity condition 2 mu w = A^T diag(mu) lambda
                    // reduces to w_e = sum_r lambda_r / 2 over paths through e,
                    // so the reduced system is G lambda = 1 with
                    // G(r,c) = sum over shared edges of mu_e / 2.
                    double s = 0;
                    for (int er : constraints[r])
                        for (int ec : constraints[c])
                            if (er == ec) s += mu[er] / 2;
                    G(r, c) = s;
                }
            Eigen::VectorXd lambda =
                G.ldlt().solve(Eigen::VectorXd::Ones(na));
            int worst = -1;
            double worst_val = -1e-12;
            for (int r = 0; r < na; ++r)
                if (lambda[r] < worst_val) { worst_val = lambda[r]; worst = r; }
            if (worst < 0) {
                w.setZero();
                for (int r = 0; r < na; ++r)
                    for (int e : constraints[r]) w[e] += lambda[r] / 2;
                break;
            }
            constraints.erase(constraints.begin() + worst);
            if (constraints.empty()) { w.setZero(); break; }
        }
        if ((int)constraints.size() > opt.max_constraints)
            throw Error("extremal width constraint budget exceeded");
    }

    double ew = 0;
    for (int k = 0; k < ne; ++k) {
        out.w[pool[k]] = w[k];
        ew += mu[k] * w[k] * w[k];
    }
    out.value = ew;
    return out;
}

RecurrenceProfile recurrence_profile(const Network& net,
                                     const std::vector<std::complex<double>>& pos,
                                     const std::vector<double>& radii, double eps,
                                     double C) {
    int n = net.vertex_count();
    RecurrenceProfile out;
    out.theoretical_ring_bound = std::sin(eps) * std::sin(eps) / (12 * kPi * C * C);

    std::vector<std::vector<bool>> rings;
    for (double r : radii) {
        std::vector<bool> s(n);
        for (int i = 0; i < n; ++i) s[i] = std::abs(pos[i]) < r;
        rings.push_back(std::move(s));
    }
    for (size_t k = 1; k < rings.size(); ++k) {
        int prev = 0, cur = 0;
        for (int i = 0; i < n; ++i) {
            if (rings[k - 1][i] && !rings[k][i]) throw Error("rings violate nesting");
            prev += rings[k - 1][i];
            cur += rings[k][i];
        }
        if (prev == 0 || cur <= prev) throw Error("rings violate nesting");
    }

    double total = 0;
    for (size_t k = 1; k < rings.size(); ++k) {
        ELProblem prob;
        prob.net = &net;
        prob.v1 = rings[k - 1];
        std::vector<bool> comp(n);
        for (int i = 0; i < n; ++i) comp[i] = !rings[k][i];
        prob.v2 = graph_closure(net, comp);
        for (int i = 0; i < n; ++i)
            if (prob.v1[i] && prob.v2[i]) throw Error("rings too close: V1 meets closure(Vk^c)");
        ELResult el = extremal_length(prob);
        out.per_ring_el.push_back(el.value);
        total += el.value;
        out.cumulative.push_back(total);
    }
    return out;
}

AreaSumBound area_sum_bound_check(const Network& net,
                                  const std::vector<std::complex<double>>& pos,
                                  const std::vector<double>& edge_length,
                                  const std::vector<double>& edge_weight,
                                  double r_prev, double r_k, double eps, double C) {
    int n = net.vertex_count();
    std::vector<bool> vk(n), vprev(n);
    for (int i = 0; i < n; ++i) {
        vk[i] = std::abs(pos[i]) < r_k;
        vprev[i] = std::abs(pos[i]) < r_prev;
    }
    std::vector<bool> comp(n);
    for (int i = 0; i < n; ++i) comp[i] = !vk[i];
    std::vector<bool> v2 = graph_closure(net, comp);

    AreaSumBound out;
    for (int e = 0; e < (int)net.edges().size(); ++e) {
        int a = net.edges()[e].a, b = net.edges()[e].b;
        bool a0 = !vprev[a] && !v2[a];
        bool b0 = !vprev[b] && !v2[b];
        if (a0 || b0) out.lhs += edge_weight[e] * edge_length[e] * edge_length[e];
    }
    double s = std::sin(eps);
    out.rhs = 12 * kPi * C * C / (s * s) * r_prev * r_prev;
    out.ok = out.lhs <= out.rhs;
    return out;
}

}  // namespace dcl
