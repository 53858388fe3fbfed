// Copyright 2026 The qdiag Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdiag/embed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>

#include "qdiag/error.hpp"
#include "qdiag/seed.hpp"

namespace qdiag {

HardwareGraph HardwareGraph::chimera(int rows, int cols, int shore, std::set<int> broken) {
    if (rows < 1 || cols < 1 || shore < 1) {
        throw InvalidArgument("Chimera dimensions must be positive");
    }
    HardwareGraph g;
    g.rows_ = rows;
    g.cols_ = cols;
    g.shore_ = shore;
    for (int q : broken) {
        if (q < 0 || q >= g.num_qubits()) {
            throw InvalidArgument("broken qubit " + std::to_string(q) + " out of range 0.." +
                                  std::to_string(g.num_qubits() - 1));
        }
    }
    g.broken_ = std::move(broken);
    g.adjacency_.assign(static_cast<std::size_t>(g.num_qubits()), {});
    auto link = [&g](int a, int b) {
        if (g.broken_.contains(a) || g.broken_.contains(b)) {
            return;
        }
        g.adjacency_[static_cast<std::size_t>(a)].push_back(b);
        g.adjacency_[static_cast<std::size_t>(b)].push_back(a);
    };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            for (int i = 0; i < shore; ++i) {
                for (int j = 0; j < shore; ++j) {
                    link(g.qubit(r, c, 0, i), g.qubit(r, c, 1, j));
                }
                if (r + 1 < rows) {
                    link(g.qubit(r, c, 0, i), g.qubit(r + 1, c, 0, i));
                }
                if (c + 1 < cols) {
                    link(g.qubit(r, c, 1, i), g.qubit(r, c + 1, 1, i));
                }
            }
        }
    }
    for (auto& nbrs : g.adjacency_) {
        std::sort(nbrs.begin(), nbrs.end());
    }
    return g;
}

HardwareGraph build_chimera(int rows, int cols, int shore, const std::set<int>& broken) {
    return HardwareGraph::chimera(rows, cols, shore, broken);
}

int HardwareGraph::qubit(int row, int col, int side, int k) const {
    return ((row * cols_ + col) * 2 + side) * shore_ + k;
}

bool HardwareGraph::usable(int q) const {
    return q >= 0 && q < num_qubits() && !broken_.contains(q);
}

bool HardwareGraph::has_edge(int a, int b) const {
    if (a < 0 || a >= num_qubits()) {
        return false;
    }
    const auto& n = adjacency_[static_cast<std::size_t>(a)];
    return std::binary_search(n.begin(), n.end(), b);
}

int HardwareGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& n : adjacency_) {
        total += n.size();
    }
    return static_cast<int>(total / 2);
}

LogicalGraph LogicalGraph::from_qubo(const Qubo& q) {
    LogicalGraph g;
    g.n = q.size();
    for (const auto& [ij, c] : q.coefficients()) {
        if (ij.first != ij.second) {
            g.edges.push_back(ij);
        }
    }
    return g;
}

LogicalGraph LogicalGraph::from_ising(const IsingModel& m) {
    LogicalGraph g;
    g.n = m.size();
    for (const auto& [ij, c] : m.J()) {
        g.edges.push_back(ij);
    }
    return g;
}

std::vector<std::vector<int>> LogicalGraph::adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (const auto& [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
            throw InvalidArgument("logical edge out of range");
        }
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& v : adj) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return adj;
}

int Embedding::physical_qubit_count() const {
    int total = 0;
    for (const auto& c : chains) {
        total += static_cast<int>(c.size());
    }
    return total;
}

int Embedding::max_chain_length() const {
    std::size_t m = 0;
    for (const auto& c : chains) {
        m = std::max(m, c.size());
    }
    return static_cast<int>(m);
}

EmbeddingCheck check_embedding(const Embedding& e, const LogicalGraph& g, const HardwareGraph& hw) {
    auto fail = [](std::string why) { return EmbeddingCheck{false, std::move(why)}; };
    if (e.size() != g.n) {
        return fail("embedding has " + std::to_string(e.size()) + " chains for " + std::to_string(g.n) +
                    " logical variables");
    }
    std::vector<int> owner(static_cast<std::size_t>(hw.num_qubits()), -1);
    for (int u = 0; u < e.size(); ++u) {
        const auto& chain = e.chains[static_cast<std::size_t>(u)];
        if (chain.empty()) {
            return fail("chain " + std::to_string(u) + " is empty");
        }
        for (int q : chain) {
            if (!hw.usable(q)) {
                return fail("chain " + std::to_string(u) + " uses unusable qubit " + std::to_string(q));
            }
            if (owner[static_cast<std::size_t>(q)] != -1) {
                return fail("qubit " + std::to_string(q) + " shared by chains " +
                            std::to_string(owner[static_cast<std::size_t>(q)]) + " and " + std::to_string(u));
            }
            owner[static_cast<std::size_t>(q)] = u;
        }
    }
    for (int u = 0; u < e.size(); ++u) {
        const auto& chain = e.chains[static_cast<std::size_t>(u)];
        std::vector<int> stack{chain.front()};
        std::set<int> seen{chain.front()};
        while (!stack.empty()) {
            int q = stack.back();
            stack.pop_back();
            for (int r : hw.neighbors(q)) {
                if (owner[static_cast<std::size_t>(r)] == u && seen.insert(r).second) {
                    stack.push_back(r);
                }
            }
        }
        if (seen.size() != chain.size()) {
            return fail("chain " + std::to_string(u) + " is not connected");
        }
    }
    for (const auto& [a, b] : g.edges) {
        bool joined = false;
        for (int q : e.chains[static_cast<std::size_t>(a)]) {
            for (int r : hw.neighbors(q)) {
                if (owner[static_cast<std::size_t>(r)] == b) {
                    joined = true;
                    break;
                }
            }
            if (joined) break;
        }
        if (!joined) {
            return fail("logical edge (" + std::to_string(a) + ", " + std::to_string(b) + ") has no physical coupler");
        }
    }
    return {};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class ChainPlacer {
  public:
    ChainPlacer(const std::vector<std::vector<int>>& adj, const HardwareGraph& hw, std::uint64_t seed)
        : adj_(adj),
          hw_(hw),
          rng_(seed),
          chains_(adj.size()),
          usage_(static_cast<std::size_t>(hw.num_qubits()), 0),
          mark_(static_cast<std::size_t>(hw.num_qubits()), -1),
          usable_(static_cast<std::size_t>(hw.num_qubits())),
          cost_(static_cast<std::size_t>(hw.num_qubits())) {
        for (int q = 0; q < hw.num_qubits(); ++q) {
            usable_[static_cast<std::size_t>(q)] = hw.usable(q);
        }
    }

    bool run(const EmbedOptions& options) {
        std::vector<int> order = bfs_order();
        double base = 2.0;
        for (int u : order) {
            place(u, true, base);
        }
        int best_overlap = overlap_count();
        int stalled = 0;
        for (int pass = 0; pass < options.overlap_passes && best_overlap > 0; ++pass) {
            base = std::min(base * 1.5, 1e9);
            if (stalled >= 2) {
                // Chains next to a congested qubit have no incentive to make
                // room, so evict the whole neighborhood and place it again.
                base = 8.0;
                stalled = 0;
                for (int u : order) {
                    if (near_overlap(u)) {
                        evicted_.push_back(u);
                    }
                }
                for (int u : evicted_) {
                    remove_chain(u);
                }
                std::shuffle(evicted_.begin(), evicted_.end(), rng_);
                for (int u : evicted_) {
                    place(u, true, base);
                }
                evicted_.clear();
            } else {
                std::shuffle(order.begin(), order.end(), rng_);
                for (int u : order) {
                    remove_chain(u);
                    place(u, true, base);
                }
            }
            const int now = overlap_count();
            if (now < best_overlap) {
                best_overlap = now;
                stalled = 0;
            } else {
                ++stalled;
            }
        }
        const bool valid = best_overlap == 0 && overlap_count() == 0;
        if (!valid) {
            return false;
        }
        int idle = 0;
        for (int pass = 0; pass < options.refine_passes && idle < 3; ++pass) {
            const int before = total_size();
            std::shuffle(order.begin(), order.end(), rng_);
            for (int u : order) {
                std::vector<int> old = chains_[static_cast<std::size_t>(u)];
                remove_chain(u);
                if (!place(u, false, base) || chains_[static_cast<std::size_t>(u)].size() > old.size()) {
                    if (!chains_[static_cast<std::size_t>(u)].empty()) {
                        remove_chain(u);
                    }
                    set_chain(u, std::move(old));
                }
            }
            std::shuffle(order.begin(), order.end(), rng_);
            for (int u : order) {
                replace_group(u);
            }
            trim_all();
            idle = total_size() < before ? 0 : idle + 1;
        }
        return true;
    }

    Embedding result() const {
        Embedding e;
        e.chains = chains_;
        for (auto& c : e.chains) {
            std::sort(c.begin(), c.end());
        }
        return e;
    }

  private:
    // Breadth-first from the highest-degree vertex, neighbors shuffled, so
    // each chain is placed next to ones already on the chip.
    std::vector<int> bfs_order() {
        const std::size_t n = adj_.size();
        std::vector<int> roots(n);
        std::iota(roots.begin(), roots.end(), 0);
        std::shuffle(roots.begin(), roots.end(), rng_);
        std::stable_sort(roots.begin(), roots.end(), [this](int a, int b) {
            return adj_[static_cast<std::size_t>(a)].size() > adj_[static_cast<std::size_t>(b)].size();
        });
        std::vector<char> seen(n, 0);
        std::vector<int> order;
        order.reserve(n);
        for (int r : roots) {
            if (seen[static_cast<std::size_t>(r)]) continue;
            seen[static_cast<std::size_t>(r)] = 1;
            std::size_t head = order.size();
            order.push_back(r);
            while (head < order.size()) {
                std::vector<int> next = adj_[static_cast<std::size_t>(order[head++])];
                std::shuffle(next.begin(), next.end(), rng_);
                for (int v : next) {
                    if (!seen[static_cast<std::size_t>(v)]) {
                        seen[static_cast<std::size_t>(v)] = 1;
                        order.push_back(v);
                    }
                }
            }
        }
        return order;
    }

    int total_size() const {
        int t = 0;
        for (const auto& c : chains_) {
            t += static_cast<int>(c.size());
        }
        return t;
    }

    // Re-places u together with all of its neighbors, the neighbors first,
    // overlap forbidden. Kept only if the group shrinks.
    void replace_group(int u) {
        std::vector<int> group = adj_[static_cast<std::size_t>(u)];
        std::shuffle(group.begin(), group.end(), rng_);
        group.push_back(u);
        std::vector<std::vector<int>> old;
        std::size_t old_size = 0;
        for (int v : group) {
            old.push_back(chains_[static_cast<std::size_t>(v)]);
            old_size += old.back().size();
            remove_chain(v);
        }
        bool ok = true;
        std::size_t new_size = 0;
        for (int v : group) {
            if (!place(v, false, 1.0)) {
                ok = false;
                break;
            }
            new_size += chains_[static_cast<std::size_t>(v)].size();
        }
        if (ok && new_size < old_size) {
            return;
        }
        for (std::size_t i = 0; i < group.size(); ++i) {
            remove_chain(group[i]);
            set_chain(group[i], std::move(old[i]));
        }
    }

    // Drops qubits that later placements made redundant.
    void trim_all() {
        for (std::size_t u = 0; u < chains_.size(); ++u) {
            std::vector<int> chain = chains_[u];
            remove_chain(static_cast<int>(u));
            prune(chain, adj_[u]);
            set_chain(static_cast<int>(u), std::move(chain));
        }
    }

    int overlap_count() const {
        int total = 0;
        for (int use : usage_) {
            total += std::max(0, use - 1);
        }
        return total;
    }

    // True when chain u sits on, or next to, a qubit used more than once.
    bool near_overlap(int u) const {
        for (int q : chains_[static_cast<std::size_t>(u)]) {
            if (usage_[static_cast<std::size_t>(q)] > 1) return true;
            for (int r : hw_.neighbors(q)) {
                if (usage_[static_cast<std::size_t>(r)] > 1) return true;
            }
        }
        return false;
    }

    double weight(int q, bool allow_overlap, double base) const {
        if (!usable_[static_cast<std::size_t>(q)]) {
            return kInf;
        }
        const int use = usage_[static_cast<std::size_t>(q)];
        if (use == 0) {
            return 1.0;
        }
        return allow_overlap ? std::pow(base, use) : kInf;
    }

    void remove_chain(int u) {
        for (int q : chains_[static_cast<std::size_t>(u)]) {
            --usage_[static_cast<std::size_t>(q)];
        }
        chains_[static_cast<std::size_t>(u)].clear();
    }

    void set_chain(int u, std::vector<int> chain) {
        for (int q : chain) {
            ++usage_[static_cast<std::size_t>(q)];
        }
        chains_[static_cast<std::size_t>(u)] = std::move(chain);
    }

    // Vertex-weighted distances from a chain. Chain qubits themselves cost
    // their own weight (the price of sharing them).
    void distances(int v, std::vector<double>& dist, std::vector<int>& parent) {
        const std::size_t n = static_cast<std::size_t>(hw_.num_qubits());
        dist.assign(n, kInf);
        parent.assign(n, -1);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        const auto& src = chains_[static_cast<std::size_t>(v)];
        for (int q : src) {
            dist[static_cast<std::size_t>(q)] = 0.0;
            heap.emplace(0.0, q);
        }
        while (!heap.empty()) {
            auto [d, q] = heap.top();
            heap.pop();
            if (d > dist[static_cast<std::size_t>(q)]) {
                continue;
            }
            for (int r : hw_.neighbors(q)) {
                const double w = cost_[static_cast<std::size_t>(r)];
                if (w == kInf) {
                    continue;
                }
                const double nd = d + w;
                if (nd < dist[static_cast<std::size_t>(r)]) {
                    dist[static_cast<std::size_t>(r)] = nd;
                    parent[static_cast<std::size_t>(r)] = q;
                    heap.emplace(nd, r);
                }
            }
        }
        for (int q : src) {
            dist[static_cast<std::size_t>(q)] = cost_[static_cast<std::size_t>(q)];
            parent[static_cast<std::size_t>(q)] = -1;
        }
    }

    bool touches(const std::vector<int>& chain, int skip, int v) {
        const auto& other = chains_[static_cast<std::size_t>(v)];
        for (int q : other) {
            mark_[static_cast<std::size_t>(q)] = v;
        }
        bool found = false;
        for (int q : chain) {
            if (q == skip) continue;
            if (mark_[static_cast<std::size_t>(q)] == v) {
                found = true;
                break;
            }
            for (int r : hw_.neighbors(q)) {
                if (mark_[static_cast<std::size_t>(r)] == v) {
                    found = true;
                    break;
                }
            }
            if (found) break;
        }
        for (int q : other) {
            mark_[static_cast<std::size_t>(q)] = -1;
        }
        return found;
    }

    // Drops chain qubits with at most one in-chain neighbor while every
    // placed neighbor chain stays reachable.
    void prune(std::vector<int>& chain, const std::vector<int>& placed) {
        bool changed = true;
        while (changed && chain.size() > 1) {
            changed = false;
            for (std::size_t i = 0; i < chain.size() && chain.size() > 1; ++i) {
                const int q = chain[i];
                int inside = 0;
                for (int r : hw_.neighbors(q)) {
                    if (std::find(chain.begin(), chain.end(), r) != chain.end()) {
                        ++inside;
                    }
                }
                if (inside > 1) continue;
                bool needed = false;
                for (int v : placed) {
                    if (!touches(chain, q, v)) {
                        needed = true;
                        break;
                    }
                }
                if (!needed) {
                    chain.erase(chain.begin() + static_cast<std::ptrdiff_t>(i));
                    changed = true;
                    --i;
                }
            }
        }
    }

    bool place(int u, bool allow_overlap, double base) {
        std::vector<int> placed;
        for (int v : adj_[static_cast<std::size_t>(u)]) {
            if (!chains_[static_cast<std::size_t>(v)].empty()) {
                placed.push_back(v);
            }
        }
        const int n = hw_.num_qubits();
        for (int q = 0; q < n; ++q) {
            cost_[static_cast<std::size_t>(q)] = weight(q, allow_overlap, base);
        }
        if (placed.empty()) {
            double best = kInf;
            std::vector<int> ties;
            for (int q = 0; q < n; ++q) {
                const double w = cost_[static_cast<std::size_t>(q)];
                if (w < best) {
                    best = w;
                    ties.assign(1, q);
                } else if (w == best && w < kInf) {
                    ties.push_back(q);
                }
            }
            if (ties.empty()) return false;
            set_chain(u, {ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng_)]});
            return true;
        }

        std::vector<std::vector<double>> dist(placed.size());
        std::vector<std::vector<int>> parent(placed.size());
        for (std::size_t k = 0; k < placed.size(); ++k) {
            distances(placed[k], dist[k], parent[k]);
        }
        double best = kInf;
        std::vector<int> ties;
        for (int q = 0; q < n; ++q) {
            const double w = cost_[static_cast<std::size_t>(q)];
            if (w == kInf) continue;
            double cost = w;
            for (std::size_t k = 0; k < placed.size() && cost < kInf; ++k) {
                cost += dist[k][static_cast<std::size_t>(q)] - w;
            }
            if (cost < best - 1e-9) {
                best = cost;
                ties.assign(1, q);
            } else if (cost <= best + 1e-9 && cost < kInf) {
                ties.push_back(q);
            }
        }
        if (ties.empty()) return false;
        const int root = ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(rng_)];

        // Connect the nearest neighbor chains first; every later path may
        // branch off any qubit already in the chain.
        std::vector<std::size_t> by_distance(placed.size());
        std::iota(by_distance.begin(), by_distance.end(), std::size_t{0});
        std::sort(by_distance.begin(), by_distance.end(), [&](std::size_t a, std::size_t b) {
            return dist[a][static_cast<std::size_t>(root)] < dist[b][static_cast<std::size_t>(root)];
        });
        std::vector<int> chain{root};
        for (std::size_t k : by_distance) {
            int cur = root;
            double cheapest = dist[k][static_cast<std::size_t>(root)] - cost_[static_cast<std::size_t>(root)];
            for (int c : chain) {
                const double d = dist[k][static_cast<std::size_t>(c)] - cost_[static_cast<std::size_t>(c)];
                if (d < cheapest) {
                    cheapest = d;
                    cur = c;
                }
            }
            while (true) {
                const int p = parent[k][static_cast<std::size_t>(cur)];
                // Stop at the neighbor's own chain.
                if (p == -1 || parent[k][static_cast<std::size_t>(p)] == -1) {
                    break;
                }
                if (std::find(chain.begin(), chain.end(), p) == chain.end()) {
                    chain.push_back(p);
                }
                cur = p;
            }
        }
        prune(chain, placed);
        set_chain(u, std::move(chain));
        return true;
    }

    const std::vector<std::vector<int>>& adj_;
    const HardwareGraph& hw_;
    std::mt19937_64 rng_;
    std::vector<std::vector<int>> chains_;
    std::vector<int> usage_;
    std::vector<int> mark_;
    std::vector<char> usable_;
    std::vector<double> cost_;  // per-qubit weight for the placement in progress
    std::vector<int> evicted_;
};

}  // namespace

Embedding find_embedding(const LogicalGraph& g, const HardwareGraph& hw, std::uint64_t seed,
                         const EmbedOptions& options) {
    const auto adj = g.adjacency();
    if (g.n > hw.usable_count()) {
        throw EmbeddingNotFound("more logical variables than usable qubits");
    }
    std::optional<Embedding> best;
    int successes = 0;
    for (int attempt = 0; attempt < options.max_restarts && successes < options.restarts; ++attempt) {
        ChainPlacer placer(adj, hw, derive_seed(seed, "embed-restart", static_cast<std::uint64_t>(attempt)));
        if (!placer.run(options)) {
            continue;
        }
        Embedding e = placer.result();
        if (!check_embedding(e, g, hw)) {
            continue;
        }
        ++successes;
        if (!best || e.physical_qubit_count() < best->physical_qubit_count()) {
            best = std::move(e);
        }
    }
    if (!best) {
        throw EmbeddingNotFound("no valid embedding after " + std::to_string(options.max_restarts) + " restarts");
    }
    return *best;
}

double default_chain_strength(const IsingModel& m) {
    return 1.0 + std::max(m.max_abs_h() / 2.0, m.max_abs_J());
}

EmbeddedModel embed_ising(const IsingModel& m, const Embedding& e, const HardwareGraph& hw,
                          std::optional<double> chain_strength) {
    const LogicalGraph g = LogicalGraph::from_ising(m);
    if (auto check = check_embedding(e, g, hw); !check) {
        throw InvalidArgument("embedding does not fit this model: " + check.reason);
    }
    EmbeddedModel out;
    out.chain_strength = chain_strength ? *chain_strength : default_chain_strength(m);
    if (!(out.chain_strength > 0.0)) {
        throw InvalidArgument("chain strength must be positive");
    }
    IsingModel phys(hw.num_qubits());
    phys.set_offset(m.offset());
    for (int u = 0; u < m.size(); ++u) {
        const auto& chain = e.chains[static_cast<std::size_t>(u)];
        const double share = m.h(u) / static_cast<double>(chain.size());
        for (int q : chain) {
            phys.add_h(q, share);
        }
    }
    for (const auto& [ij, c] : m.J()) {
        const auto& a = e.chains[static_cast<std::size_t>(ij.first)];
        const auto& b = e.chains[static_cast<std::size_t>(ij.second)];
        bool done = false;
        for (int p : a) {
            for (int r : hw.neighbors(p)) {
                if (std::find(b.begin(), b.end(), r) != b.end()) {
                    phys.add_J(p, r, c);
                    done = true;
                    break;
                }
            }
            if (done) break;
        }
    }
    for (const auto& chain : e.chains) {
        for (std::size_t i = 0; i < chain.size(); ++i) {
            for (std::size_t j = i + 1; j < chain.size(); ++j) {
                if (hw.has_edge(chain[i], chain[j])) {
                    phys.add_J(chain[i], chain[j], -out.chain_strength);
                    ++out.chain_edge_count;
                }
            }
        }
    }
    auto normalized = normalize(phys);
    out.physical = std::move(normalized.model);
    out.scale = normalized.scale;
    return out;
}

std::vector<DecodedSample> decode_samples(std::span<const SpinVector> physical, const Embedding& e,
                                          std::uint64_t seed) {
    int max_qubit = -1;
    for (const auto& c : e.chains) {
        for (int q : c) max_qubit = std::max(max_qubit, q);
    }
    std::mt19937_64 rng(seed);
    std::vector<DecodedSample> out;
    out.reserve(physical.size());
    for (const auto& s : physical) {
        if (static_cast<int>(s.size()) <= max_qubit || (!physical.empty() && s.size() != physical.front().size())) {
            throw InvalidArgument("physical sample length does not cover the embedding");
        }
        DecodedSample d;
        d.spins.resize(e.chains.size());
        int broken = 0;
        for (std::size_t u = 0; u < e.chains.size(); ++u) {
            int up = 0;
            for (int q : e.chains[u]) {
                up += s[static_cast<std::size_t>(q)] > 0 ? 1 : 0;
            }
            const int down = static_cast<int>(e.chains[u].size()) - up;
            if (up > 0 && down > 0) {
                ++broken;
            }
            if (up > down) {
                d.spins[u] = 1;
            } else if (down > up) {
                d.spins[u] = -1;
            } else {
                d.spins[u] = (rng() >> 63) ? Spin{1} : Spin{-1};
            }
        }
        d.broken_fraction = e.chains.empty() ? 0.0 : static_cast<double>(broken) / static_cast<double>(e.chains.size());
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace qdiag
