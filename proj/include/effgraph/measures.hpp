#pragma once

#include "effgraph/error.hpp"
#include "effgraph/graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <stack>
#include <utility>
#include <vector>

namespace effgraph {

/**
 * Exact betweenness over unordered vertex pairs (Brandes accumulation).
 * Weighted mode walks distance 1 / w, so heavier edges are shorter; edges
 * of zero weight are impassable.
 */
inline std::vector<double> betweenness(const UndirectedGraph& g, bool weighted = false)
{
	const std::size_t n = g.n();
	const auto adj = g.adjacency();
	std::vector<double> centrality(n, 0.0);
	std::vector<double> sigma(n), delta(n), dist(n);
	std::vector<std::vector<VertexId>> preds(n);
	std::vector<VertexId> order;
	order.reserve(n);
	constexpr double inf = std::numeric_limits<double>::infinity();

	for (VertexId s = 0; s < n; ++s) {
		std::fill(sigma.begin(), sigma.end(), 0.0);
		std::fill(delta.begin(), delta.end(), 0.0);
		std::fill(dist.begin(), dist.end(), inf);
		for (auto& p : preds)
			p.clear();
		order.clear();
		sigma[s] = 1.0;
		dist[s] = 0.0;

		if (!weighted) {
			std::queue<VertexId> queue;
			queue.push(s);
			while (!queue.empty()) {
				const VertexId v = queue.front();
				queue.pop();
				order.push_back(v);
				for (const auto& [w, weight] : adj[v]) {
					if (dist[w] == inf) {
						dist[w] = dist[v] + 1.0;
						queue.push(w);
					}
					if (dist[w] == dist[v] + 1.0) {
						sigma[w] += sigma[v];
						preds[w].push_back(v);
					}
				}
			}
		}
		else {
			using Item = std::pair<double, VertexId>;
			std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
			std::vector<char> done(n, 0);
			heap.push({0.0, s});
			while (!heap.empty()) {
				const auto [d, v] = heap.top();
				heap.pop();
				if (done[v] || d > dist[v])
					continue;
				done[v] = 1;
				order.push_back(v);
				for (const auto& [w, weight] : adj[v]) {
					if (!(weight > 0.0) || done[w])
						continue;
					const double nd = dist[v] + 1.0 / weight;
					const double tol = 1e-12 * std::max(1.0, nd);
					if (nd < dist[w] - tol) {
						dist[w] = nd;
						sigma[w] = sigma[v];
						preds[w].assign(1, v);
						heap.push({nd, w});
					}
					else if (std::abs(nd - dist[w]) <= tol) {
						sigma[w] += sigma[v];
						preds[w].push_back(v);
					}
				}
			}
		}

		for (auto it = order.rbegin(); it != order.rend(); ++it) {
			const VertexId w = *it;
			for (VertexId v : preds[w])
				delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
			if (w != s)
				centrality[w] += delta[w];
		}
	}
	// each unordered pair was visited from both endpoints
	for (auto& c : centrality)
		c *= 0.5;
	return centrality;
}

/// Number of neighbors per vertex.
inline std::vector<std::size_t> degrees(const UndirectedGraph& g)
{
	std::vector<std::size_t> k(g.n(), 0);
	for (const auto& e : g.edges()) {
		++k[e.u];
		++k[e.v];
	}
	return k;
}

/// (k, fraction of vertices with degree >= k) for every occupied degree k,
/// ascending. The first fraction is exactly 1.
inline std::vector<std::pair<std::size_t, double>> ccdf(const UndirectedGraph& g)
{
	if (g.n() == 0)
		return {{0, 1.0}};
	const auto k = degrees(g);
	std::map<std::size_t, std::size_t> histogram;
	for (auto d : k)
		++histogram[d];
	std::vector<std::pair<std::size_t, double>> out;
	std::size_t remaining = g.n();
	for (const auto& [degree, count] : histogram) {
		out.emplace_back(degree, static_cast<double>(remaining) / static_cast<double>(g.n()));
		remaining -= count;
	}
	return out;
}

/// (k, mean over degree-k vertices of their mean neighbor degree), k >= 1.
inline std::vector<std::pair<std::size_t, double>> knn_degree_correlation(const UndirectedGraph& g)
{
	const auto k = degrees(g);
	const auto adj = g.adjacency();
	std::map<std::size_t, std::pair<double, std::size_t>> acc;
	for (VertexId v = 0; v < g.n(); ++v) {
		if (k[v] == 0)
			continue;
		double sum = 0.0;
		for (const auto& nb : adj[v])
			sum += static_cast<double>(k[nb.first]);
		auto& slot = acc[k[v]];
		slot.first += sum / static_cast<double>(k[v]);
		++slot.second;
	}
	std::vector<std::pair<std::size_t, double>> out;
	for (const auto& [degree, slot] : acc)
		out.emplace_back(degree, slot.first / static_cast<double>(slot.second));
	return out;
}

/**
 * Entry (a, b): directed edges from block a to block b over the possible
 * ordered pairs (|a||b|, or |a|(|a| - 1) on the diagonal).
 */
inline Eigen::MatrixXd block_density(const DirectedGraph& g, const std::vector<std::size_t>& partition)
{
	if (partition.size() != g.n())
		throw InputError("block_density: partition size does not match graph");
	const std::size_t blocks = partition.empty() ? 0 : *std::max_element(partition.begin(), partition.end()) + 1;
	std::vector<double> size(blocks, 0.0);
	for (auto b : partition)
		size[b] += 1.0;
	Eigen::MatrixXd count = Eigen::MatrixXd::Zero(blocks, blocks);
	for (const auto& e : g.edges())
		count(partition[e.src], partition[e.dst]) += 1.0;
	for (std::size_t a = 0; a < blocks; ++a)
		for (std::size_t b = 0; b < blocks; ++b) {
			const double possible = a == b ? size[a] * (size[a] - 1.0) : size[a] * size[b];
			count(a, b) = possible > 0.0 ? count(a, b) / possible : 0.0;
		}
	return count;
}

/// Fraction of unordered vertex pairs joined by an edge in either direction.
inline double undirected_density(const DirectedGraph& g)
{
	const double n = static_cast<double>(g.n());
	if (g.n() < 2)
		return 0.0;
	return static_cast<double>(symmetrize(g).edge_count()) / (n * (n - 1.0) / 2.0);
}

} // namespace effgraph
