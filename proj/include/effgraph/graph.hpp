#pragma once

#include "effgraph/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace effgraph {

using VertexId = std::size_t;

struct Edge
{
	VertexId src = 0;
	VertexId dst = 0;
	double weight = 1.0;

	friend bool operator==(const Edge&, const Edge&) = default;
};

struct UndirectedEdge
{
	VertexId u = 0; // u < v
	VertexId v = 0;
	double weight = 0.0;

	friend bool operator==(const UndirectedEdge&, const UndirectedEdge&) = default;
};

/// One raw input row. `sign` is only meaningful for signed graphs.
struct EdgeRow
{
	VertexId src = 0;
	VertexId dst = 0;
	double weight = 1.0;
	std::optional<int> sign;
};

/**
 * Weighted directed graph on dense vertex ids 0..n-1.
 *
 * Edges are kept sorted by (src, dst), at most one per ordered pair, no
 * self-loops, strictly positive weights. Optional per-vertex labels and
 * per-edge signs (+1/-1). Immutable once built.
 */
class DirectedGraph
{
public:
	DirectedGraph() = default;

	explicit DirectedGraph(std::size_t n)
	: n_(n)
	{
	}

	/// Builds a graph from raw rows. Duplicate ordered pairs are summed.
	/// `n` defaults to one past the largest index seen.
	static DirectedGraph from_edge_list(const std::vector<EdgeRow>& rows,
	                                    std::optional<std::size_t> n = std::nullopt)
	{
		std::size_t count = n.value_or(0);
		bool any_sign = false;
		for (const auto& r : rows) {
			if (!n)
				count = std::max(count, std::max(r.src, r.dst) + 1);
			any_sign = any_sign || r.sign.has_value();
		}

		std::map<std::pair<VertexId, VertexId>, std::pair<double, int>> merged;
		for (std::size_t i = 0; i < rows.size(); ++i) {
			const auto& r = rows[i];
			if (r.src >= count || r.dst >= count)
				throw InputError("edge row " + std::to_string(i) + ": vertex index out of range");
			if (r.src == r.dst)
				throw InputError("edge row " + std::to_string(i) + ": self-loop on vertex " +
				                 std::to_string(r.src));
			if (!(r.weight > 0.0) || !std::isfinite(r.weight))
				throw InputError("edge row " + std::to_string(i) + ": weight must be positive and finite");
			if (any_sign && !r.sign)
				throw InputError("edge row " + std::to_string(i) + ": signs must cover every edge");
			int sign = r.sign.value_or(1);
			if (sign != 1 && sign != -1)
				throw InputError("edge row " + std::to_string(i) + ": sign must be +1 or -1");

			auto [it, inserted] = merged.try_emplace({r.src, r.dst}, r.weight, sign);
			if (!inserted) {
				if (it->second.second != sign)
					throw InputError("edge row " + std::to_string(i) + ": conflicting signs for duplicate edge");
				it->second.first += r.weight;
			}
		}

		DirectedGraph g(count);
		g.edges_.reserve(merged.size());
		for (const auto& [key, value] : merged) {
			g.edges_.push_back({key.first, key.second, value.first});
			if (any_sign)
				g.signs_.push_back(value.second);
		}
		g.signed_ = any_sign;
		return g;
	}

	std::size_t n() const { return n_; }
	const std::vector<Edge>& edges() const { return edges_; }
	std::size_t edge_count() const { return edges_.size(); }

	bool has_signs() const { return signed_; }
	const std::vector<int>& signs() const { return signs_; }

	bool has_labels() const { return !labels_.empty(); }
	const std::vector<std::string>& labels() const { return labels_; }

	DirectedGraph with_labels(std::vector<std::string> labels) const
	{
		if (!labels.empty() && labels.size() != n_)
			throw InputError("label count does not match vertex count");
		DirectedGraph g = *this;
		g.labels_ = std::move(labels);
		return g;
	}

	/// Dense weight matrix W(u, v).
	Eigen::MatrixXd weight_matrix() const
	{
		Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n_, n_);
		for (const auto& e : edges_)
			w(e.src, e.dst) = e.weight;
		return w;
	}

	/// Dense sign matrix; +1 where no edge exists.
	Eigen::MatrixXd sign_matrix() const
	{
		Eigen::MatrixXd s = Eigen::MatrixXd::Ones(n_, n_);
		for (std::size_t i = 0; i < edges_.size(); ++i)
			s(edges_[i].src, edges_[i].dst) = signed_ ? signs_[i] : 1;
		return s;
	}

	/// Every edge flipped; labels and signs carried along.
	DirectedGraph reversed() const
	{
		std::vector<EdgeRow> rows;
		rows.reserve(edges_.size());
		for (std::size_t i = 0; i < edges_.size(); ++i) {
			const auto& e = edges_[i];
			rows.push_back({e.dst, e.src, e.weight,
			                signed_ ? std::optional<int>(signs_[i]) : std::nullopt});
		}
		return from_edge_list(rows, n_).with_labels(labels_);
	}

	friend bool operator==(const DirectedGraph&, const DirectedGraph&) = default;

private:
	std::size_t n_ = 0;
	std::vector<Edge> edges_;
	std::vector<int> signs_;
	bool signed_ = false;
	std::vector<std::string> labels_;
};

/// Undirected weighted graph, one record per unordered pair (u < v).
class UndirectedGraph
{
public:
	UndirectedGraph() = default;

	explicit UndirectedGraph(std::size_t n)
	: n_(n)
	{
	}

	/// Accepts pairs in either orientation; repeated pairs are summed.
	static UndirectedGraph from_edges(std::size_t n, const std::vector<UndirectedEdge>& edges)
	{
		std::map<std::pair<VertexId, VertexId>, double> merged;
		for (const auto& e : edges) {
			if (e.u >= n || e.v >= n)
				throw InputError("undirected edge: vertex index out of range");
			if (e.u == e.v)
				throw InputError("undirected edge: self-loop on vertex " + std::to_string(e.u));
			if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
				throw InputError("undirected edge: weight must be non-negative and finite");
			merged[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.weight;
		}
		UndirectedGraph g(n);
		g.edges_.reserve(merged.size());
		for (const auto& [key, w] : merged)
			g.edges_.push_back({key.first, key.second, w});
		return g;
	}

	std::size_t n() const { return n_; }
	const std::vector<UndirectedEdge>& edges() const { return edges_; }
	std::size_t edge_count() const { return edges_.size(); }

	Eigen::MatrixXd weight_matrix() const
	{
		Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n_, n_);
		for (const auto& e : edges_) {
			w(e.u, e.v) = e.weight;
			w(e.v, e.u) = e.weight;
		}
		return w;
	}

	/// Weighted degree (strength) per vertex.
	Eigen::VectorXd strengths() const
	{
		Eigen::VectorXd d = Eigen::VectorXd::Zero(n_);
		for (const auto& e : edges_) {
			d(e.u) += e.weight;
			d(e.v) += e.weight;
		}
		return d;
	}

	/// Neighbor lists as (neighbor, weight), ascending neighbor id.
	std::vector<std::vector<std::pair<VertexId, double>>> adjacency() const
	{
		std::vector<std::vector<std::pair<VertexId, double>>> adj(n_);
		for (const auto& e : edges_) {
			adj[e.u].emplace_back(e.v, e.weight);
			adj[e.v].emplace_back(e.u, e.weight);
		}
		for (auto& list : adj)
			std::sort(list.begin(), list.end());
		return adj;
	}

	friend bool operator==(const UndirectedGraph&, const UndirectedGraph&) = default;

private:
	std::size_t n_ = 0;
	std::vector<UndirectedEdge> edges_;
};

/// Skew-symmetric flux A = W - W^T.
using FluxMatrix = Eigen::MatrixXd;

/// weight(u, v) = (W(u, v) + W(v, u)) / 2 on each unordered pair.
inline UndirectedGraph symmetrize(const DirectedGraph& g)
{
	std::vector<UndirectedEdge> half;
	half.reserve(g.edge_count());
	for (const auto& e : g.edges())
		half.push_back({e.src, e.dst, 0.5 * e.weight});
	return UndirectedGraph::from_edges(g.n(), half);
}

inline FluxMatrix flux(const DirectedGraph& g)
{
	FluxMatrix a = FluxMatrix::Zero(g.n(), g.n());
	for (const auto& e : g.edges()) {
		a(e.src, e.dst) += e.weight;
		a(e.dst, e.src) -= e.weight;
	}
	return a;
}

/// Connected-component id per vertex, numbered by smallest member.
inline std::vector<std::size_t> connected_components(const UndirectedGraph& g)
{
	std::vector<std::size_t> parent(g.n());
	std::iota(parent.begin(), parent.end(), 0);
	auto find = [&](std::size_t x) {
		while (parent[x] != x) {
			parent[x] = parent[parent[x]];
			x = parent[x];
		}
		return x;
	};
	for (const auto& e : g.edges()) {
		auto a = find(e.u), b = find(e.v);
		if (a != b)
			parent[std::max(a, b)] = std::min(a, b);
	}
	std::vector<std::size_t> label(g.n());
	std::vector<std::size_t> remap(g.n(), g.n());
	std::size_t next = 0;
	for (std::size_t v = 0; v < g.n(); ++v) {
		auto root = find(v);
		if (remap[root] == g.n())
			remap[root] = next++;
		label[v] = remap[root];
	}
	return label;
}

// ---------------------------------------------------------------------------
// Random generation

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit engine.
/// Independent of the standard library's distribution implementations, so
/// seeded output is identical across toolchains.
template<typename Engine>
double uniform01(Engine& rng)
{
	return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct BlockModelParams
{
	std::size_t blocks = 3;
	std::size_t block_size = 100;
	double p_in = 0.5;  // bidirectional pair probability inside a block
	double p_out = 0.7; // directed edge probability from block b to b+1
	std::uint64_t seed = 0;
};

/**
 * Directed cyclic block model. Inside each block every unordered pair is
 * joined in both directions (weight 1) with probability p_in; from block b
 * to block (b+1) mod blocks every ordered pair gets one directed edge with
 * probability p_out. Vertex v belongs to block v / block_size.
 */
inline DirectedGraph block_model_sample(const BlockModelParams& p)
{
	if (p.blocks < 2)
		throw InputError("block model needs at least two blocks");
	if (!(p.p_in >= 0.0 && p.p_in <= 1.0) || !(p.p_out >= 0.0 && p.p_out <= 1.0))
		throw InputError("block model probabilities must lie in [0, 1]");

	std::mt19937_64 rng(p.seed);
	const std::size_t n = p.blocks * p.block_size;
	std::vector<EdgeRow> rows;

	for (std::size_t b = 0; b < p.blocks; ++b) {
		const std::size_t base = b * p.block_size;
		for (std::size_t i = 0; i < p.block_size; ++i)
			for (std::size_t j = i + 1; j < p.block_size; ++j)
				if (uniform01(rng) < p.p_in) {
					rows.push_back({base + i, base + j, 1.0, std::nullopt});
					rows.push_back({base + j, base + i, 1.0, std::nullopt});
				}
	}
	for (std::size_t b = 0; b < p.blocks; ++b) {
		const std::size_t from = b * p.block_size;
		const std::size_t to = ((b + 1) % p.blocks) * p.block_size;
		for (std::size_t i = 0; i < p.block_size; ++i)
			for (std::size_t j = 0; j < p.block_size; ++j)
				if (uniform01(rng) < p.p_out)
					rows.push_back({from + i, to + j, 1.0, std::nullopt});
	}
	return DirectedGraph::from_edge_list(rows, n);
}

/// Block id per vertex for a block_model_sample layout.
inline std::vector<std::size_t> block_model_partition(const BlockModelParams& p)
{
	std::vector<std::size_t> part(p.blocks * p.block_size);
	for (std::size_t v = 0; v < part.size(); ++v)
		part[v] = v / p.block_size;
	return part;
}

} // namespace effgraph
