#pragma once

#include "effgraph/error.hpp"
#include "effgraph/graph.hpp"
#include "effgraph/linalg.hpp"

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <string>

namespace effgraph {

using Complex = std::complex<double>;
using VertexSignal = Eigen::VectorXcd;

enum class PotentialKind
{
	identity,
	magnetic, // U(1) phases, parameter = charge q
	dilation, // positive reals, parameter = alpha
	sign,     // +-1
};

inline std::string to_string(PotentialKind k)
{
	switch (k) {
	case PotentialKind::identity: return "identity";
	case PotentialKind::magnetic: return "magnetic";
	case PotentialKind::dilation: return "dilation";
	case PotentialKind::sign: return "sign";
	}
	return "unknown";
}

/**
 * Per-edge group element T(u, v), stored densely. Entries off the
 * symmetrized support are 1 and never read by the operators below.
 * Every constructor guarantees T(u, v) * T(v, u) = 1.
 */
struct GroupPotential
{
	PotentialKind kind = PotentialKind::identity;
	double parameter = 0.0;
	Eigen::MatrixXcd values;

	std::size_t n() const { return static_cast<std::size_t>(values.rows()); }
	Complex operator()(VertexId u, VertexId v) const { return values(u, v); }

	/// |T| = 1 everywhere: magnetic, sign and identity kinds.
	bool unit_modulus() const { return kind != PotentialKind::dilation; }
};

inline GroupPotential identity_potential(std::size_t n)
{
	return {PotentialKind::identity, 0.0, Eigen::MatrixXcd::Ones(n, n)};
}

/// T(u, v) = exp(i 2 pi q A(v, u)) with A = flux(g).
inline GroupPotential magnetic_potential(const DirectedGraph& g, double q)
{
	if (!(q >= 0.0 && q < 1.0))
		throw InputError("magnetic charge q must lie in [0, 1)");
	const FluxMatrix a = flux(g);
	const std::size_t n = g.n();
	Eigen::MatrixXcd t(n, n);
	for (std::size_t u = 0; u < n; ++u)
		for (std::size_t v = 0; v < n; ++v)
			t(u, v) = std::polar(1.0, 2.0 * std::numbers::pi * q * a(v, u));
	return {PotentialKind::magnetic, q, std::move(t)};
}

/// T(u, v) = exp(alpha A(v, u)) with A = flux(g).
inline GroupPotential dilation_potential(const DirectedGraph& g, double alpha)
{
	if (!(alpha > 0.0) || !std::isfinite(alpha))
		throw InputError("dilation parameter alpha must be positive");
	const FluxMatrix a = flux(g);
	const std::size_t n = g.n();
	Eigen::MatrixXcd t(n, n);
	for (std::size_t u = 0; u < n; ++u)
		for (std::size_t v = 0; v < n; ++v)
			t(u, v) = Complex(std::exp(alpha * a(v, u)), 0.0);
	return {PotentialKind::dilation, alpha, std::move(t)};
}

/// T(u, v) = sign of the edge joining u and v, in either direction.
inline GroupPotential sign_potential(const DirectedGraph& g)
{
	if (!g.has_signs() && g.edge_count() > 0)
		throw InputError("sign potential requires a signed graph");
	const std::size_t n = g.n();
	Eigen::MatrixXcd t = Eigen::MatrixXcd::Ones(n, n);
	Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(n, n);
	for (std::size_t i = 0; i < g.edge_count(); ++i) {
		const auto& e = g.edges()[i];
		const int s = g.signs()[i];
		if (seen(e.src, e.dst) && t(e.src, e.dst).real() != s)
			throw InputError("sign potential: edges " + std::to_string(e.src) + "<->" +
			                 std::to_string(e.dst) + " carry opposite signs");
		t(e.src, e.dst) = t(e.dst, e.src) = s;
		seen(e.src, e.dst) = seen(e.dst, e.src) = 1;
	}
	return {PotentialKind::sign, 0.0, std::move(t)};
}

/// P(u, v; t, z) = conj(T(v, u)) T(t, z).
inline Complex promotion(const GroupPotential& pot, VertexId u, VertexId v, VertexId t, VertexId z)
{
	return std::conj(pot(v, u)) * pot(t, z);
}

/**
 * Generalized degree of vertex u:
 *   sum over symmetrized neighbors v of
 *   w_s(u, v) * (P(v, u; u, v) H(u, v) f(v) - P(u, v; u, v) H(u, u) f(u)).
 */
inline Complex generalized_degree(const DirectedGraph& g, const GroupPotential& pot,
                                  const Eigen::MatrixXcd& h, const VertexSignal& f, VertexId u)
{
	const auto n = static_cast<Eigen::Index>(g.n());
	if (h.rows() != n || h.cols() != n || f.size() != n || static_cast<Eigen::Index>(pot.n()) != n)
		throw InputError("generalized_degree: dimension mismatch");
	if (u >= g.n())
		throw InputError("generalized_degree: vertex out of range");

	const Eigen::MatrixXd ws = symmetrize(g).weight_matrix();
	Complex total = 0.0;
	for (Eigen::Index v = 0; v < n; ++v) {
		if (ws(u, v) == 0.0)
			continue;
		const auto vv = static_cast<VertexId>(v);
		total += ws(u, v) * (promotion(pot, vv, u, u, vv) * h(u, v) * f(v) -
		                     promotion(pot, u, vv, u, vv) * h(u, u) * f(u));
	}
	return total;
}

struct DeformedLaplacian
{
	Eigen::MatrixXcd matrix;
	PotentialKind kind = PotentialKind::identity;
	bool normalized = false;

	std::size_t n() const { return static_cast<std::size_t>(matrix.rows()); }
	bool hermitian_kind() const { return kind != PotentialKind::dilation; }
};

/**
 * L(u, v) = -w_s(u, v) T(u, v) off the diagonal, L(u, u) = d_s(u).
 * Normalized: I - D_s^{-1/2} (W_s .* T) D_s^{-1/2}, isolated vertices get a
 * zero diagonal.
 */
inline DeformedLaplacian deformed_laplacian(const DirectedGraph& g, const GroupPotential& pot,
                                            bool normalized = false)
{
	if (pot.n() != g.n())
		throw InputError("deformed_laplacian: potential size does not match graph");
	const std::size_t n = g.n();
	const UndirectedGraph sym = symmetrize(g);
	const Eigen::VectorXd d = sym.strengths();

	Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(n, n);
	if (!normalized) {
		for (std::size_t u = 0; u < n; ++u)
			l(u, u) = d(u);
		for (const auto& e : sym.edges()) {
			l(e.u, e.v) = -e.weight * pot(e.u, e.v);
			l(e.v, e.u) = -e.weight * pot(e.v, e.u);
		}
	}
	else {
		Eigen::VectorXd inv_sqrt = Eigen::VectorXd::Zero(n);
		for (std::size_t u = 0; u < n; ++u)
			if (d(u) > 0.0) {
				inv_sqrt(u) = 1.0 / std::sqrt(d(u));
				l(u, u) = 1.0;
			}
		for (const auto& e : sym.edges()) {
			const double scale = e.weight * inv_sqrt(e.u) * inv_sqrt(e.v);
			l(e.u, e.v) = -scale * pot(e.u, e.v);
			l(e.v, e.u) = -scale * pot(e.v, e.u);
		}
	}
	return {std::move(l), pot.kind, normalized};
}

} // namespace effgraph
