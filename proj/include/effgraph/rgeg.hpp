#pragma once

#include "effgraph/effective.hpp"
#include "effgraph/error.hpp"
#include "effgraph/graph.hpp"
#include "effgraph/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace effgraph {

struct RgParams
{
	double q = 0.1;
	double g = 0.0;
	double beta = 1.0;
	double alpha_disparity = 0.25;
	std::size_t steps = 4;
	PhaseScaling scaling = PhaseScaling::literal;
	bool accumulate_weights = false; // coarse edge weight = sum of fine weights
};

inline void validate(const RgParams& p)
{
	if (!(p.q >= 0.0 && p.q < 1.0))
		throw InputError("rgeg: q must lie in [0, 1)");
	if (!(p.g >= 0.0))
		throw InputError("rgeg: g must be non-negative");
	if (!(p.beta >= 0.0))
		throw InputError("rgeg: beta must be non-negative");
	if (!(p.alpha_disparity > 0.0 && p.alpha_disparity <= 1.0))
		throw InputError("rgeg: disparity threshold must lie in (0, 1]");
}

/**
 * Disparity filter backbone. For an endpoint of degree k > 1 with strength
 * S the edge significance is (1 - w / S)^(k - 1); an edge survives when the
 * smaller endpoint significance is below the threshold, when an endpoint has
 * degree 1, or when it belongs to the maximum-weight spanning forest.
 */
inline UndirectedGraph disparity_filter(const UndirectedGraph& g, double alpha_threshold)
{
	if (!(alpha_threshold > 0.0 && alpha_threshold <= 1.0))
		throw InputError("disparity_filter: threshold must lie in (0, 1]");
	const std::size_t n = g.n();
	std::vector<std::size_t> k(n, 0);
	std::vector<double> strength(n, 0.0);
	for (const auto& e : g.edges()) {
		if (!(e.weight > 0.0))
			continue;
		++k[e.u];
		++k[e.v];
		strength[e.u] += e.weight;
		strength[e.v] += e.weight;
	}
	auto significance = [&](VertexId x, double w) {
		return std::pow(1.0 - w / strength[x], static_cast<double>(k[x] - 1));
	};

	std::vector<char> keep(g.edge_count(), 0);
	for (std::size_t i = 0; i < g.edge_count(); ++i) {
		const auto& e = g.edges()[i];
		if (!(e.weight > 0.0))
			continue;
		if (k[e.u] == 1 || k[e.v] == 1) {
			keep[i] = 1;
			continue;
		}
		keep[i] = std::min(significance(e.u, e.weight), significance(e.v, e.weight)) < alpha_threshold;
	}

	// Kruskal on descending weight, ties by (u, v).
	std::vector<std::size_t> order(g.edge_count());
	std::iota(order.begin(), order.end(), std::size_t{0});
	std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
		return g.edges()[a].weight > g.edges()[b].weight;
	});
	std::vector<std::size_t> parent(n);
	std::iota(parent.begin(), parent.end(), std::size_t{0});
	auto find = [&](std::size_t x) {
		while (parent[x] != x) {
			parent[x] = parent[parent[x]];
			x = parent[x];
		}
		return x;
	};
	for (auto i : order) {
		const auto& e = g.edges()[i];
		if (!(e.weight > 0.0))
			continue;
		const auto a = find(e.u), b = find(e.v);
		if (a != b) {
			parent[a] = b;
			keep[i] = 1;
		}
	}

	std::vector<UndirectedEdge> kept;
	for (std::size_t i = 0; i < g.edge_count(); ++i)
		if (keep[i])
			kept.push_back(g.edges()[i]);
	return UndirectedGraph::from_edges(n, kept);
}

inline Eigen::MatrixXd laplacian_pseudoinverse(const UndirectedGraph& g)
{
	return symmetric_pseudoinverse(combinatorial_laplacian(g));
}

using VertexPair = std::pair<VertexId, VertexId>;

/**
 * Greedy matching on descending off-diagonal correlation Lp(u, v), ties by
 * (u, v). At most n / 2 pairs. When `components` is given, only vertices
 * sharing a component id may be paired.
 */
inline std::vector<VertexPair> correlation_pairing(const Eigen::MatrixXd& lp,
                                                   const std::vector<std::size_t>* components = nullptr)
{
	if (lp.rows() != lp.cols())
		throw InputError("correlation_pairing: matrix must be square");
	const auto n = static_cast<std::size_t>(lp.rows());
	if (components && components->size() != n)
		throw InputError("correlation_pairing: component labels do not match matrix size");

	std::vector<std::tuple<double, VertexId, VertexId>> candidates;
	candidates.reserve(n * (n - (n > 0)) / 2);
	for (VertexId u = 0; u < n; ++u)
		for (VertexId v = u + 1; v < n; ++v)
			if (!components || (*components)[u] == (*components)[v])
				candidates.emplace_back(lp(u, v), u, v);
	std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
		if (std::get<0>(a) != std::get<0>(b))
			return std::get<0>(a) > std::get<0>(b);
		return std::tie(std::get<1>(a), std::get<2>(a)) < std::tie(std::get<1>(b), std::get<2>(b));
	});

	std::vector<char> matched(n, 0);
	std::vector<VertexPair> pairs;
	for (const auto& [value, u, v] : candidates) {
		if (pairs.size() == n / 2)
			break;
		if (matched[u] || matched[v])
			continue;
		matched[u] = matched[v] = 1;
		pairs.emplace_back(u, v);
	}
	return pairs;
}

/// fine vertex -> coarse vertex.
using Partition = std::vector<std::size_t>;

/// Pairs and leftover singletons become coarse vertices, numbered by their
/// smallest member.
inline Partition pairs_to_partition(std::size_t n, const std::vector<VertexPair>& pairs)
{
	std::vector<VertexId> rep(n);
	std::iota(rep.begin(), rep.end(), VertexId{0});
	for (const auto& [u, v] : pairs) {
		if (u >= n || v >= n || u == v)
			throw InputError("pairs_to_partition: invalid pair");
		rep[u] = rep[v] = std::min(u, v);
	}
	Partition part(n);
	std::vector<std::size_t> id(n, n);
	std::size_t next = 0;
	for (VertexId v = 0; v < n; ++v) {
		if (id[rep[v]] == n)
			id[rep[v]] = next++;
		part[v] = id[rep[v]];
	}
	return part;
}

inline std::size_t partition_size(const Partition& p)
{
	return p.empty() ? 0 : *std::max_element(p.begin(), p.end()) + 1;
}

/**
 * Coarse graph: X -> Y whenever some fine edge u -> v has u in X, v in Y and
 * X != Y. Weight 1, or the summed fine weight when accumulating.
 */
inline DirectedGraph contract(const DirectedGraph& g, const Partition& part, bool accumulate = false)
{
	if (part.size() != g.n())
		throw InputError("contract: partition size does not match graph");
	std::map<std::pair<std::size_t, std::size_t>, double> coarse;
	for (const auto& e : g.edges()) {
		const auto x = part[e.src], y = part[e.dst];
		if (x == y)
			continue;
		double& w = coarse[{x, y}];
		w = accumulate ? w + e.weight : 1.0;
	}
	std::vector<EdgeRow> rows;
	rows.reserve(coarse.size());
	for (const auto& [key, w] : coarse)
		rows.push_back({key.first, key.second, w, std::nullopt});
	return DirectedGraph::from_edge_list(rows, partition_size(part));
}

struct RgStep
{
	DirectedGraph coarse;
	EffectiveGraph effective; // of the fine graph
	UndirectedGraph backbone; // effective graph after the disparity filter
	Partition partition;      // fine -> coarse
};

inline RgStep rgeg_step(const DirectedGraph& g, const RgParams& p)
{
	validate(p);
	RgStep step;
	step.effective = effective_graph(g, {p.q, p.g, p.beta, p.scaling});
	step.backbone = disparity_filter(step.effective.graph(), p.alpha_disparity);
	const auto comps = connected_components(step.backbone);
	const auto pairs = correlation_pairing(laplacian_pseudoinverse(step.backbone), &comps);
	step.partition = pairs_to_partition(g.n(), pairs);
	step.coarse = contract(g, step.partition, p.accumulate_weights);
	return step;
}

struct RgLevel
{
	DirectedGraph graph;
	EffectiveGraph effective;
	Partition step_partition; // previous level -> this level (identity at level 0)
	Partition membership;     // level 0 -> this level
	std::optional<double> purity; // majority-label fraction, when labels exist
};

struct RgFlowState
{
	std::vector<RgLevel> levels;
};

/// Majority-label purity of super-vertices: sum over super-vertices of the
/// majority count, divided by the number of fine vertices.
template<typename Label>
double label_purity(const Partition& membership, const std::vector<Label>& labels)
{
	if (membership.size() != labels.size())
		throw InputError("label_purity: size mismatch");
	if (membership.empty())
		return 1.0;
	std::map<std::pair<std::size_t, Label>, std::size_t> counts;
	for (std::size_t v = 0; v < labels.size(); ++v)
		++counts[{membership[v], labels[v]}];
	std::vector<std::size_t> best(partition_size(membership), 0);
	for (const auto& [key, c] : counts)
		best[key.first] = std::max(best[key.first], c);
	const double total = static_cast<double>(std::accumulate(best.begin(), best.end(), std::size_t{0}));
	return total / static_cast<double>(labels.size());
}

/**
 * Runs up to p.steps RG steps, stopping early once a level has at most two
 * vertices or a step merges nothing. Every level carries its effective graph.
 */
inline RgFlowState rgeg_flow(const DirectedGraph& g, const RgParams& p)
{
	validate(p);
	RgFlowState state;
	Partition identity(g.n());
	std::iota(identity.begin(), identity.end(), std::size_t{0});

	auto purity_of = [&](const Partition& membership) -> std::optional<double> {
		if (!g.has_labels())
			return std::nullopt;
		return label_purity(membership, g.labels());
	};

	DirectedGraph current = g;
	Partition membership = identity;
	Partition step_partition = identity;
	for (std::size_t k = 0;; ++k) {
		RgLevel level{current, {}, step_partition, membership, purity_of(membership)};
		if (current.n() == 0) {
			state.levels.push_back(std::move(level));
			break;
		}
		if (k == p.steps || current.n() <= 2) {
			level.effective = effective_graph(current, {p.q, p.g, p.beta, p.scaling});
			state.levels.push_back(std::move(level));
			break;
		}
		RgStep step = rgeg_step(current, p);
		level.effective = std::move(step.effective);
		state.levels.push_back(std::move(level));
		if (step.coarse.n() == current.n())
			break;
		for (auto& m : membership)
			m = step.partition[m];
		step_partition = std::move(step.partition);
		current = std::move(step.coarse);
	}
	return state;
}

} // namespace effgraph
