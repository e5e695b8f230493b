#pragma once

#include "effgraph/error.hpp"
#include "effgraph/graph.hpp"
#include "effgraph/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace effgraph {

/// Skew-symmetric edge flow, zero off the symmetrized support.
using EdgeFlow = Eigen::MatrixXd;

/// div(u) = sum_v F(u, v): net outflow.
inline Eigen::VectorXd divergence(const EdgeFlow& f)
{
	return f.rowwise().sum();
}

/// Triangle a < b < c of an undirected graph.
using Triangle = std::array<VertexId, 3>;

inline std::vector<Triangle> triangles(const UndirectedGraph& g)
{
	std::vector<std::vector<VertexId>> higher(g.n());
	for (const auto& e : g.edges())
		higher[e.u].push_back(e.v);
	std::vector<char> mark(g.n(), 0);
	std::vector<Triangle> out;
	for (VertexId a = 0; a < g.n(); ++a) {
		for (auto b : higher[a])
			mark[b] = 1;
		for (auto b : higher[a])
			for (auto c : higher[b])
				if (mark[c])
					out.push_back({a, b, c});
		for (auto b : higher[a])
			mark[b] = 0;
	}
	std::sort(out.begin(), out.end());
	return out;
}

/// F(a, b) + F(b, c) + F(c, a).
inline double circulation(const EdgeFlow& f, const Triangle& t)
{
	return f(t[0], t[1]) + f(t[1], t[2]) + f(t[2], t[0]);
}

/// Edge inner product: sum over u < v of X(u, v) Y(u, v).
inline double edge_inner(const EdgeFlow& x, const EdgeFlow& y)
{
	return 0.5 * x.cwiseProduct(y).sum();
}

struct HodgeComponents
{
	EdgeFlow gradient;
	EdgeFlow curl;
	EdgeFlow harmonic;
	Eigen::VectorXd potential; // gradient(u, v) = potential(v) - potential(u)
	double relative_residual = 0.0;
};

/// Unweighted support of the symmetrized graph.
inline UndirectedGraph support_graph(const DirectedGraph& g)
{
	const auto sym = symmetrize(g);
	std::vector<UndirectedEdge> edges;
	for (const auto& e : sym.edges())
		edges.push_back({e.u, e.v, 1.0});
	return UndirectedGraph::from_edges(g.n(), edges);
}

/**
 * Orthogonal split of the flux W - W^T into gradient, curl and harmonic
 * flows under the unweighted edge inner product. The potential solves
 * Delta_0 phi = -div F by pseudoinverse; the curl part is the projection onto
 * the span of the triangle boundaries of the support graph; the harmonic part
 * is what remains.
 */
inline HodgeComponents hodge_decompose(const DirectedGraph& g)
{
	const std::size_t n = g.n();
	const EdgeFlow f = flux(g);
	const UndirectedGraph support = support_graph(g);
	const auto& edges = support.edges();
	const auto m = static_cast<Eigen::Index>(edges.size());

	HodgeComponents out;
	const Eigen::VectorXd div = divergence(f);
	const Eigen::MatrixXd lap = combinatorial_laplacian(support);
	out.potential = symmetric_pseudoinverse(lap) * (-div);
	const double div_norm = div.norm();
	out.relative_residual = div_norm > 0.0 ? (lap * out.potential + div).norm() / div_norm : 0.0;

	out.gradient = EdgeFlow::Zero(n, n);
	Eigen::VectorXd residual(m);
	Eigen::MatrixXi edge_index = Eigen::MatrixXi::Constant(n, n, -1);
	for (Eigen::Index k = 0; k < m; ++k) {
		const auto& e = edges[static_cast<std::size_t>(k)];
		const double grad = out.potential(e.v) - out.potential(e.u);
		out.gradient(e.u, e.v) = grad;
		out.gradient(e.v, e.u) = -grad;
		residual(k) = f(e.u, e.v) - grad;
		edge_index(e.u, e.v) = static_cast<int>(k);
	}

	// Curl part: B c with c = argmin |B c - residual|, B the sparse edge x
	// triangle boundary (+ab, +bc, -ac). CG from zero stays in the row space,
	// so rank-deficient B (tetrahedra) is fine.
	const auto tris = triangles(support);
	Eigen::VectorXd curl_vec = Eigen::VectorXd::Zero(m);
	if (!tris.empty() && residual.norm() > 0.0) {
		std::vector<Eigen::Triplet<double>> entries;
		entries.reserve(3 * tris.size());
		for (std::size_t j = 0; j < tris.size(); ++j) {
			const auto& t = tris[j];
			const auto col = static_cast<Eigen::Index>(j);
			entries.emplace_back(edge_index(t[0], t[1]), col, 1.0);
			entries.emplace_back(edge_index(t[1], t[2]), col, 1.0);
			entries.emplace_back(edge_index(t[0], t[2]), col, -1.0);
		}
		Eigen::SparseMatrix<double> boundary(m, static_cast<Eigen::Index>(tris.size()));
		boundary.setFromTriplets(entries.begin(), entries.end());
		Eigen::LeastSquaresConjugateGradient<Eigen::SparseMatrix<double>> solver;
		solver.setTolerance(1e-14);
		solver.setMaxIterations(std::max<Eigen::Index>(1000, 10 * m));
		solver.compute(boundary);
		const Eigen::VectorXd c = solver.solve(residual);
		curl_vec = boundary * c;
		// the harmonic remainder must be orthogonal to every triangle boundary
		const double leak = (boundary.transpose() * (residual - curl_vec)).cwiseAbs().maxCoeff();
		if (!(leak <= 1e-9 * std::max(1.0, residual.cwiseAbs().maxCoeff())))
			throw NumericalError("hodge_decompose: curl projection did not converge (residual " +
			                     std::to_string(leak) + ")");
	}

	out.curl = EdgeFlow::Zero(n, n);
	out.harmonic = EdgeFlow::Zero(n, n);
	for (Eigen::Index k = 0; k < m; ++k) {
		const auto& e = edges[static_cast<std::size_t>(k)];
		out.curl(e.u, e.v) = curl_vec(k);
		out.curl(e.v, e.u) = -curl_vec(k);
		const double harm = residual(k) - curl_vec(k);
		out.harmonic(e.u, e.v) = harm;
		out.harmonic(e.v, e.u) = -harm;
	}
	return out;
}

// ---------------------------------------------------------------------------
// Rankings

enum class RankMethod
{
	hodge,
	spring,
	trophic,
};

/// unweighted: 0/1 adjacency (pairwise comparisons); weighted: W.
enum class RankWeighting
{
	unweighted,
	weighted,
};

/// Per-vertex score, mean zero on every connected component.
struct RankVector
{
	Eigen::VectorXd score;
	RankMethod method = RankMethod::spring;
};

namespace detail {

inline Eigen::MatrixXd rank_adjacency(const DirectedGraph& g, RankWeighting w)
{
	Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n(), g.n());
	for (const auto& e : g.edges())
		a(e.src, e.dst) = w == RankWeighting::weighted ? e.weight : 1.0;
	return a;
}

inline void center_per_component(Eigen::VectorXd& s, const DirectedGraph& g)
{
	const auto comp = connected_components(support_graph(g));
	const std::size_t k = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
	std::vector<double> sum(k, 0.0);
	std::vector<std::size_t> count(k, 0);
	for (std::size_t v = 0; v < comp.size(); ++v) {
		sum[comp[v]] += s(static_cast<Eigen::Index>(v));
		++count[comp[v]];
	}
	for (std::size_t v = 0; v < comp.size(); ++v)
		s(static_cast<Eigen::Index>(v)) -= sum[comp[v]] / static_cast<double>(count[comp[v]]);
}

inline Eigen::VectorXd spring_system_solve(const DirectedGraph& g, RankWeighting w, bool reverse_flux)
{
	const Eigen::MatrixXd a = rank_adjacency(g, w);
	const Eigen::VectorXd d_out = a.rowwise().sum();
	const Eigen::VectorXd d_in = a.colwise().sum().transpose();
	Eigen::MatrixXd lhs = -(a + a.transpose());
	lhs.diagonal() += d_in + d_out;
	const Eigen::VectorXd rhs = reverse_flux ? Eigen::VectorXd(d_in - d_out) : Eigen::VectorXd(d_out - d_in);
	Eigen::VectorXd s = symmetric_pseudoinverse(lhs) * rhs;
	center_per_component(s, g);
	return s;
}

} // namespace detail

/// Least-squares solution of (D_in + D_out - (A + A^T)) s = (D_out - D_in) 1.
/// Edges point down the hierarchy: sources score highest.
inline RankVector spring_rank(const DirectedGraph& g, RankWeighting w = RankWeighting::unweighted)
{
	return {detail::spring_system_solve(g, w, false), RankMethod::spring};
}

/// Same operator with the reversed flux: (D_in - D_out) 1 on the right.
inline RankVector trophic_levels(const DirectedGraph& g, RankWeighting w = RankWeighting::unweighted)
{
	return {detail::spring_system_solve(g, w, true), RankMethod::trophic};
}

/**
 * Pairwise-comparison HodgeRank. Each unordered pair with comparisons is an
 * edge of weight omega = A(u, v) + A(v, u) carrying the mean preference
 * Y = (A(u, v) - A(v, u)) / omega; the Helmholtz potential phi minimizes
 * sum omega (phi(v) - phi(u) - Y)^2 and the returned score is -phi, so that
 * the orientation matches spring_rank.
 */
inline RankVector hodge_rank(const DirectedGraph& g, RankWeighting w = RankWeighting::unweighted)
{
	const Eigen::MatrixXd a = detail::rank_adjacency(g, w);
	const auto pairs = support_graph(g).edges();
	const auto m = static_cast<Eigen::Index>(pairs.size());
	const auto n = static_cast<Eigen::Index>(g.n());

	Eigen::MatrixXd incidence = Eigen::MatrixXd::Zero(m, n);
	Eigen::VectorXd omega(m), y(m);
	for (Eigen::Index k = 0; k < m; ++k) {
		const auto& p = pairs[static_cast<std::size_t>(k)];
		incidence(k, p.u) = -1.0;
		incidence(k, p.v) = 1.0;
		omega(k) = a(p.u, p.v) + a(p.v, p.u);
		y(k) = (a(p.u, p.v) - a(p.v, p.u)) / omega(k);
	}
	const Eigen::MatrixXd normal = incidence.transpose() * omega.asDiagonal() * incidence;
	const Eigen::VectorXd rhs = incidence.transpose() * omega.cwiseProduct(y);
	Eigen::VectorXd score = -(symmetric_pseudoinverse(normal) * rhs);
	detail::center_per_component(score, g);
	return {std::move(score), RankMethod::hodge};
}

/// H(s) = 1/2 sum_{u,v} W(u, v) (s(u) - s(v) - 1)^2.
inline double spring_energy(const DirectedGraph& g, const Eigen::VectorXd& s)
{
	if (static_cast<std::size_t>(s.size()) != g.n())
		throw InputError("spring_energy: score length does not match graph");
	double h = 0.0;
	for (const auto& e : g.edges()) {
		const double d = s(e.src) - s(e.dst) - 1.0;
		h += e.weight * d * d;
	}
	return 0.5 * h;
}

// ---------------------------------------------------------------------------
// Per-component graphs and histograms

struct ComponentGraphs
{
	DirectedGraph gradient;
	DirectedGraph curl;
	DirectedGraph harmonic;
};

/// Directed graph with edge u -> v of weight |X(u, v)| wherever X(u, v) > tol.
inline DirectedGraph flow_to_graph(const EdgeFlow& x, double tol = 1e-10)
{
	std::vector<EdgeRow> rows;
	for (Eigen::Index u = 0; u < x.rows(); ++u)
		for (Eigen::Index v = 0; v < x.cols(); ++v)
			if (x(u, v) > tol)
				rows.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), x(u, v), std::nullopt});
	return DirectedGraph::from_edge_list(rows, static_cast<std::size_t>(x.rows()));
}

inline ComponentGraphs component_subgraphs(const HodgeComponents& h)
{
	const double scale = std::max({1.0, h.gradient.cwiseAbs().maxCoeff(), h.curl.cwiseAbs().maxCoeff(),
	                               h.harmonic.cwiseAbs().maxCoeff()});
	const double tol = 1e-10 * scale;
	return {flow_to_graph(h.gradient, tol), flow_to_graph(h.curl, tol), flow_to_graph(h.harmonic, tol)};
}

inline ComponentGraphs component_subgraphs(const DirectedGraph& g)
{
	return component_subgraphs(hodge_decompose(g));
}

struct Histogram
{
	std::vector<double> edges; // bins + 1 boundaries
	std::vector<std::size_t> counts;
};

/// Equal-width histogram over [min, max]; the last bin is closed.
inline Histogram weight_histogram(std::span<const double> values, std::size_t bins = 20)
{
	if (bins == 0)
		throw InputError("weight_histogram: bin count must be positive");
	Histogram h;
	h.counts.assign(bins, 0);
	double lo = 0.0, hi = 1.0;
	if (!values.empty()) {
		lo = *std::min_element(values.begin(), values.end());
		hi = *std::max_element(values.begin(), values.end());
	}
	if (hi <= lo) {
		lo -= 0.5;
		hi += 0.5;
	}
	const double width = (hi - lo) / static_cast<double>(bins);
	for (std::size_t i = 0; i <= bins; ++i)
		h.edges.push_back(lo + width * static_cast<double>(i));
	h.edges.back() = hi;
	for (double v : values) {
		auto bin = static_cast<std::size_t>((v - lo) / width);
		h.counts[std::min(bin, bins - 1)]++;
	}
	return h;
}

inline std::vector<double> edge_weights(const DirectedGraph& g)
{
	std::vector<double> w;
	w.reserve(g.edge_count());
	for (const auto& e : g.edges())
		w.push_back(e.weight);
	return w;
}

} // namespace effgraph
