#pragma once

#include "effgraph/effgraph.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace testsupport {

using namespace effgraph;

/// Random digraph with 2..max_n vertices. Each ordered pair gets an edge with
/// probability p; some edges are made reciprocal with an independent weight.
inline DirectedGraph random_digraph(std::mt19937_64& rng, std::size_t max_n, double p = 0.3, bool integer_weights = false)
{
	const std::size_t n = 2 + rng() % (max_n - 1);
	std::vector<EdgeRow> rows;
	for (std::size_t u = 0; u < n; ++u)
		for (std::size_t v = 0; v < n; ++v) {
			if (u == v || uniform01(rng) >= p)
				continue;
			const double w = integer_weights ? static_cast<double>(1 + rng() % 3) : 0.25 + 1.75 * uniform01(rng);
			rows.push_back({u, v, w, std::nullopt});
		}
	return DirectedGraph::from_edge_list(rows, n);
}

/// Same as random_digraph but every edge carries a random sign.
inline DirectedGraph random_signed_digraph(std::mt19937_64& rng, std::size_t max_n, double p = 0.3)
{
	const DirectedGraph g = random_digraph(rng, max_n, p);
	std::vector<EdgeRow> rows;
	// reciprocal edges share one sign so that T(u, v) T(v, u) = 1
	Eigen::MatrixXi sign = Eigen::MatrixXi::Zero(g.n(), g.n());
	for (const auto& e : g.edges()) {
		int s = sign(e.dst, e.src);
		if (s == 0)
			s = (rng() & 1) ? 1 : -1;
		sign(e.src, e.dst) = s;
		rows.push_back({e.src, e.dst, e.weight, s});
	}
	return DirectedGraph::from_edge_list(rows, g.n());
}

/// Random DAG on a hidden random order, made weakly connected by a chain.
inline DirectedGraph random_connected_dag(std::mt19937_64& rng, std::size_t min_n, std::size_t max_n, double p = 0.25)
{
	const std::size_t n = min_n + rng() % (max_n - min_n + 1);
	std::vector<std::size_t> order(n);
	for (std::size_t i = 0; i < n; ++i)
		order[i] = i;
	std::shuffle(order.begin(), order.end(), rng);
	std::vector<EdgeRow> rows;
	for (std::size_t i = 0; i + 1 < n; ++i)
		rows.push_back({order[i], order[i + 1], 1.0, std::nullopt});
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = i + 2; j < n; ++j)
			if (uniform01(rng) < p)
				rows.push_back({order[i], order[j], 1.0, std::nullopt});
	return DirectedGraph::from_edge_list(rows, n);
}

/// Random undirected graph with weights drawn from {1, 2, 4}.
inline UndirectedGraph random_undirected(std::mt19937_64& rng, std::size_t max_n, double p = 0.35)
{
	const std::size_t n = 1 + rng() % max_n;
	std::vector<UndirectedEdge> edges;
	for (std::size_t u = 0; u < n; ++u)
		for (std::size_t v = u + 1; v < n; ++v)
			if (uniform01(rng) < p)
				edges.push_back({u, v, static_cast<double>(1u << (rng() % 3))});
	return UndirectedGraph::from_edges(n, edges);
}

inline DirectedGraph directed_cycle(std::size_t n)
{
	std::vector<EdgeRow> rows;
	for (std::size_t u = 0; u < n; ++u)
		rows.push_back({u, (u + 1) % n, 1.0, std::nullopt});
	return DirectedGraph::from_edge_list(rows, n);
}

inline DirectedGraph directed_path(std::size_t n)
{
	std::vector<EdgeRow> rows;
	for (std::size_t u = 0; u + 1 < n; ++u)
		rows.push_back({u, u + 1, 1.0, std::nullopt});
	return DirectedGraph::from_edge_list(rows, n);
}

inline VertexSignal random_unit_signal(std::mt19937_64& rng, std::size_t n)
{
	VertexSignal f(n);
	for (std::size_t u = 0; u < n; ++u)
		f(u) = std::polar(1.0, 2.0 * 3.14159265358979323846 * uniform01(rng));
	return f;
}

} // namespace testsupport
