#pragma once

#include "effgraph/deform.hpp"
#include "effgraph/error.hpp"
#include "effgraph/graph.hpp"
#include "effgraph/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace effgraph {

/**
 * Transport mismatch of a vertex signal across an edge,
 *   xi_f(u, v) = |f(u) - T(u, v) f(v)|.
 * With this orientation the Laplacian quadratic form f* L f equals
 * sum over unordered edges of w_s xi^2. For |T| = 1 the value is symmetric in
 * (u, v).
 */
inline double edge_discrepancy(const DirectedGraph& g, const GroupPotential& pot, const VertexSignal& f,
                               VertexId u, VertexId v)
{
	if (u >= g.n() || v >= g.n() || static_cast<std::size_t>(f.size()) != g.n() || pot.n() != g.n())
		throw InputError("edge_discrepancy: vertex or signal out of range");
	bool present = false;
	for (const auto& e : g.edges())
		if ((e.src == u && e.dst == v) || (e.src == v && e.dst == u)) {
			present = true;
			break;
		}
	if (!present)
		throw InputError("edge_discrepancy: no edge between " + std::to_string(u) + " and " + std::to_string(v));
	return std::abs(f(u) - pot(u, v) * f(v));
}

/// Componentwise f(u) / |f(u)|; zero entries stay zero.
inline VertexSignal unit_modulus(const VertexSignal& f)
{
	VertexSignal out = f;
	for (Eigen::Index i = 0; i < out.size(); ++i) {
		const double m = std::abs(out(i));
		if (m > 0.0)
			out(i) /= m;
	}
	return out;
}

/**
 * eta_f = (1/2) sum over ordered symmetrized edges of w_s xi_f^2 / Vol(G),
 * Vol(G) = sum of symmetrized degrees, after normalizing f to unit modulus.
 */
inline double generalized_frustration(const DirectedGraph& g, const GroupPotential& pot, const VertexSignal& f)
{
	if (static_cast<std::size_t>(f.size()) != g.n() || pot.n() != g.n())
		throw InputError("generalized_frustration: dimension mismatch");
	if (g.n() == 0 || f.cwiseAbs().maxCoeff() == 0.0)
		throw InputError("generalized_frustration: signal is identically zero");
	const VertexSignal h = unit_modulus(f);
	const UndirectedGraph sym = symmetrize(g);
	double num = 0.0, vol = 0.0;
	for (const auto& e : sym.edges()) {
		// both orientations, halved
		const double a = std::norm(h(e.u) - pot(e.u, e.v) * h(e.v));
		const double b = std::norm(h(e.v) - pot(e.v, e.u) * h(e.u));
		num += 0.5 * e.weight * (a + b);
		vol += 2.0 * e.weight;
	}
	return vol > 0.0 ? num / vol : 0.0;
}

// ---------------------------------------------------------------------------
// Strategy for the frustration problem

/// How the magnetic phases enter the combined solution.
enum class PhaseScaling
{
	literal,  // exp(i q theta_1) s: phases rescaled by the charge
	unscaled, // exp(i theta_1) s, the minimizer of the magnetic quadratic form
};

inline std::string to_string(PhaseScaling s)
{
	return s == PhaseScaling::literal ? "literal" : "unscaled";
}

struct StrategyParams
{
	double q = 0.0;
	double g = 0.0;
	PhaseScaling scaling = PhaseScaling::literal;
};

/**
 * theta_1: phases of the lowest eigenvector of the normalized magnetic
 * Laplacian at charge q. s: dilation_rank at parameter g (all ones when
 * g = 0). Returns exp(i c theta_1(u)) s(u) with c = q (literal) or 1.
 */
inline VertexSignal solve_frustration(const DirectedGraph& g, const StrategyParams& p)
{
	if (g.n() == 0)
		throw InputError("solve_frustration: empty graph");
	if (p.g < 0.0)
		throw InputError("solve_frustration: dilation parameter must be non-negative");
	const Eigen::VectorXcd v = magnetic_eigenvector(g, p.q, 0, true);
	const Eigen::VectorXd s = p.g > 0.0 ? dilation_rank(g, p.g) : Eigen::VectorXd::Ones(g.n());
	const double c = p.scaling == PhaseScaling::literal ? p.q : 1.0;
	VertexSignal f(g.n());
	for (Eigen::Index u = 0; u < f.size(); ++u)
		f(u) = std::polar(s(u), c * principal_angle(v(u)));
	return f;
}

// ---------------------------------------------------------------------------
// Effective graphs

struct EffectiveEdge
{
	VertexId u = 0; // u < v
	VertexId v = 0;
	double weight = 0.0;    // symmetrized weight w_s
	double effective = 0.0; // w_s exp(-beta xi^2)
};

struct Provenance
{
	double q = 0.0;
	double g = 0.0;
	std::string strategy;
};

/**
 * Undirected effective graph on the symmetrized support. One record per
 * unordered pair; the discrepancy is evaluated in the (u < v) orientation.
 */
struct EffectiveGraph
{
	std::size_t n = 0;
	std::vector<EffectiveEdge> edges;
	double beta = 1.0;
	Provenance provenance;

	/// Effective weights; edges that underflowed to zero are dropped.
	UndirectedGraph graph() const
	{
		std::vector<UndirectedEdge> out;
		out.reserve(edges.size());
		for (const auto& e : edges)
			if (e.effective > 0.0)
				out.push_back({e.u, e.v, e.effective});
		return UndirectedGraph::from_edges(n, out);
	}

	/// The symmetrized graph the weights were derived from.
	UndirectedGraph base() const
	{
		std::vector<UndirectedEdge> out;
		out.reserve(edges.size());
		for (const auto& e : edges)
			out.push_back({e.u, e.v, e.weight});
		return UndirectedGraph::from_edges(n, out);
	}

	Eigen::MatrixXd effective_matrix() const
	{
		Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
		for (const auto& e : edges)
			m(e.u, e.v) = m(e.v, e.u) = e.effective;
		return m;
	}
};

/// w_e(u, v) = w_s(u, v) exp(-beta xi_f(u, v)^2) on every symmetrized edge.
inline EffectiveGraph effective_weight(const DirectedGraph& g, const GroupPotential& pot, const VertexSignal& f,
                                       double beta, Provenance provenance = {})
{
	if (!(beta >= 0.0) || !std::isfinite(beta))
		throw InputError("effective_weight: beta must be non-negative");
	if (static_cast<std::size_t>(f.size()) != g.n() || pot.n() != g.n())
		throw InputError("effective_weight: dimension mismatch");
	if (provenance.strategy.empty()) {
		provenance.strategy = "explicit-signal";
		if (pot.kind == PotentialKind::magnetic)
			provenance.q = pot.parameter;
	}
	EffectiveGraph eff;
	eff.n = g.n();
	eff.beta = beta;
	eff.provenance = std::move(provenance);
	const UndirectedGraph sym = symmetrize(g);
	eff.edges.reserve(sym.edge_count());
	for (const auto& e : sym.edges()) {
		const double xi2 = std::norm(f(e.u) - pot(e.u, e.v) * f(e.v));
		eff.edges.push_back({e.u, e.v, e.weight, e.weight * std::exp(-beta * xi2)});
	}
	return eff;
}

struct EffectiveParams
{
	double q = 0.0;
	double g = 0.0;
	double beta = 1.0;
	PhaseScaling scaling = PhaseScaling::literal;
};

/// Strategy solve followed by the effective-weight map under the magnetic
/// potential at charge q.
inline EffectiveGraph effective_graph(const DirectedGraph& g, const EffectiveParams& p)
{
	const VertexSignal f = solve_frustration(g, {p.q, p.g, p.scaling});
	return effective_weight(g, magnetic_potential(g, p.q), f, p.beta,
	                        {p.q, p.g, "magnetic-dilation/" + to_string(p.scaling)});
}

/**
 * eta = -(beta / Vol(G)) sum over edges of w ln(w_e / w). Equals
 * beta^2 times the generalized frustration of the generating signal when
 * that signal has unit modulus; the two coincide at beta = 1.
 */
inline double log_potential_frustration(const EffectiveGraph& eff)
{
	double vol = 0.0, acc = 0.0;
	for (const auto& e : eff.edges) {
		if (!(e.effective > 0.0))
			throw InputError("log_potential_frustration: zero effective weight on edge " + std::to_string(e.u) +
			                 "-" + std::to_string(e.v));
		vol += 2.0 * e.weight;
		acc += e.weight * std::log(e.effective / e.weight);
	}
	return vol > 0.0 ? -eff.beta * acc / vol : 0.0;
}

} // namespace effgraph
