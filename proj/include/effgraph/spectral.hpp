#pragma once

#include "effgraph/deform.hpp"
#include "effgraph/error.hpp"
#include "effgraph/graph.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

namespace effgraph {

/**
 * Full eigendecomposition. Eigenvalues ascend by real part (ties: smaller
 * |imag| first, then imag); eigenvectors are unit columns whose
 * largest-modulus component is real and positive.
 */
struct SpectrumResult
{
	Eigen::VectorXcd eigenvalues;
	Eigen::MatrixXcd eigenvectors;
	bool hermitian = true;

	std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }

	std::vector<double> real_eigenvalues() const
	{
		std::vector<double> out(size());
		for (std::size_t i = 0; i < out.size(); ++i)
			out[i] = eigenvalues(static_cast<Eigen::Index>(i)).real();
		return out;
	}
};

namespace detail {

inline void fix_phase_gauge(Eigen::MatrixXcd& vectors)
{
	for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
		auto col = vectors.col(c);
		const double norm = col.norm();
		if (norm > 0.0)
			col /= norm;
		Eigen::Index best = 0;
		double best_mod = -1.0;
		for (Eigen::Index r = 0; r < col.size(); ++r) {
			const double m = std::abs(col(r));
			if (m > best_mod) {
				best_mod = m;
				best = r;
			}
		}
		if (best_mod > 0.0)
			col *= std::conj(col(best)) / best_mod;
		col(best) = Complex(col(best).real(), 0.0);
	}
}

inline void check_residuals(const Eigen::MatrixXcd& a, const SpectrumResult& r)
{
	const double scale = std::max(a.norm(), 1.0);
	for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) {
		const double res = (a * r.eigenvectors.col(i) - r.eigenvalues(i) * r.eigenvectors.col(i)).norm();
		if (!(res <= 1e-8 * scale))
			throw NumericalError("eigendecompose: eigenpair " + std::to_string(i) +
			                     " residual " + std::to_string(res) + " exceeds tolerance");
	}
}

} // namespace detail

/// Decomposes a square matrix. `hermitian` selects the self-adjoint solver;
/// otherwise a general (real when possible) eigensolver is used.
inline SpectrumResult eigendecompose_matrix(const Eigen::MatrixXcd& a, bool hermitian)
{
	if (a.rows() != a.cols() || a.rows() == 0)
		throw InputError("eigendecompose: matrix must be square and non-empty");

	SpectrumResult result;
	result.hermitian = hermitian;

	if (hermitian) {
		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
		if (es.info() != Eigen::Success)
			throw NumericalError("eigendecompose: Hermitian eigensolver did not converge");
		result.eigenvalues = es.eigenvalues().cast<Complex>();
		result.eigenvectors = es.eigenvectors();
	}
	else {
		Eigen::VectorXcd values;
		Eigen::MatrixXcd vectors;
		if (a.imag().cwiseAbs().maxCoeff() == 0.0) {
			Eigen::EigenSolver<Eigen::MatrixXd> es(a.real());
			if (es.info() != Eigen::Success)
				throw NumericalError("eigendecompose: real eigensolver did not converge");
			values = es.eigenvalues();
			vectors = es.eigenvectors();
		}
		else {
			Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a);
			if (es.info() != Eigen::Success)
				throw NumericalError("eigendecompose: complex eigensolver did not converge");
			values = es.eigenvalues();
			vectors = es.eigenvectors();
		}
		std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
		std::iota(order.begin(), order.end(), Eigen::Index{0});
		std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
			const Complex a1 = values(x), b1 = values(y);
			if (a1.real() != b1.real())
				return a1.real() < b1.real();
			if (std::abs(a1.imag()) != std::abs(b1.imag()))
				return std::abs(a1.imag()) < std::abs(b1.imag());
			return a1.imag() < b1.imag();
		});
		result.eigenvalues.resize(values.size());
		result.eigenvectors.resize(vectors.rows(), vectors.cols());
		for (std::size_t i = 0; i < order.size(); ++i) {
			result.eigenvalues(static_cast<Eigen::Index>(i)) = values(order[i]);
			result.eigenvectors.col(static_cast<Eigen::Index>(i)) = vectors.col(order[i]);
		}
	}

	detail::fix_phase_gauge(result.eigenvectors);
	detail::check_residuals(a, result);
	return result;
}

inline SpectrumResult eigendecompose(const DeformedLaplacian& l)
{
	return eigendecompose_matrix(l.matrix, l.hermitian_kind());
}

// ---------------------------------------------------------------------------
// Magnetic specific heat

/// 64 log-spaced inverse temperatures in [1e-2, 1e3].
inline std::vector<double> default_beta_grid(std::size_t points = 64, double lo = 1e-2, double hi = 1e3)
{
	std::vector<double> grid(points);
	const double a = std::log10(lo), b = std::log10(hi);
	for (std::size_t i = 0; i < points; ++i) {
		const double t = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
		grid[i] = std::pow(10.0, a + t * (b - a));
	}
	return grid;
}

/**
 * c(beta) = beta^2 (<lambda^2> - <lambda>^2) under Boltzmann weights
 * exp(-beta lambda) / Z. The spectrum is shifted by its minimum before
 * exponentiation.
 */
inline std::vector<double> specific_heat(std::span<const double> eigenvalues, std::span<const double> betas)
{
	if (eigenvalues.empty())
		throw InputError("specific_heat: empty spectrum");
	const double lmin = *std::min_element(eigenvalues.begin(), eigenvalues.end());
	std::vector<double> out;
	out.reserve(betas.size());
	std::vector<double> p(eigenvalues.size());
	for (double beta : betas) {
		if (!(beta > 0.0))
			throw InputError("specific_heat: beta must be positive");
		double z = 0.0;
		for (std::size_t i = 0; i < p.size(); ++i) {
			p[i] = std::exp(-beta * (eigenvalues[i] - lmin));
			z += p[i];
		}
		double mean = 0.0;
		for (std::size_t i = 0; i < p.size(); ++i) {
			p[i] /= z;
			mean += p[i] * (eigenvalues[i] - lmin);
		}
		double var = 0.0;
		for (std::size_t i = 0; i < p.size(); ++i) {
			const double d = eigenvalues[i] - lmin - mean;
			var += p[i] * d * d;
		}
		out.push_back(beta * beta * var);
	}
	return out;
}

inline std::vector<double> specific_heat(const SpectrumResult& spectrum, std::span<const double> betas)
{
	if (!spectrum.hermitian)
		throw InputError("specific_heat: requires a Hermitian spectrum");
	const auto values = spectrum.real_eigenvalues();
	return specific_heat(std::span<const double>(values), betas);
}

// ---------------------------------------------------------------------------
// Eigenvector helpers shared by the frustration strategy, the embedding and
// the segmentation pipeline.

/// Eigenvector `index` (0-based, ascending eigenvalue) of the magnetic
/// Laplacian at charge q.
inline Eigen::VectorXcd magnetic_eigenvector(const DirectedGraph& g, double q, std::size_t index = 0,
                                             bool normalized = true)
{
	if (index >= g.n())
		throw InputError("magnetic_eigenvector: index out of range");
	const auto spectrum = eigendecompose(deformed_laplacian(g, magnetic_potential(g, q), normalized));
	return spectrum.eigenvectors.col(static_cast<Eigen::Index>(index));
}

/// Componentwise modulus of the first eigenvector (smallest real part) of the
/// unnormalized dilation Laplacian, scaled to unit root-mean-square so the
/// alpha -> 0 limit is the all-ones vector.
inline Eigen::VectorXd dilation_rank(const DirectedGraph& g, double alpha)
{
	const auto spectrum = eigendecompose(deformed_laplacian(g, dilation_potential(g, alpha), false));
	Eigen::VectorXd s = spectrum.eigenvectors.col(0).cwiseAbs();
	const double rms = s.norm() / std::sqrt(static_cast<double>(s.size()));
	if (rms > 0.0)
		s /= rms;
	return s;
}

// ---------------------------------------------------------------------------
// Polar embedding

struct EmbeddingPoint
{
	double theta = 0.0; // (-pi, pi]
	double s = 0.0;
	double x = 0.0;
	double y = 0.0;
};

/// Angle in (-pi, pi].
inline double principal_angle(Complex z)
{
	const double a = std::arg(z);
	return a <= -std::numbers::pi ? std::numbers::pi : a;
}

/**
 * Places vertex u at radius 1 - (s(u) - s_min) / (s_max - s_min) and angle
 * arg(phases(u)). A constant rank vector puts every vertex at the origin.
 */
inline std::vector<EmbeddingPoint> embed_from_vectors(const Eigen::VectorXcd& phases, const Eigen::VectorXd& rank)
{
	if (phases.size() != rank.size())
		throw InputError("embed: phase and rank vectors differ in length");
	std::vector<EmbeddingPoint> out(static_cast<std::size_t>(phases.size()));
	if (out.empty())
		return out;
	const double smin = rank.minCoeff(), smax = rank.maxCoeff();
	const double span = smax - smin;
	for (std::size_t u = 0; u < out.size(); ++u) {
		const auto i = static_cast<Eigen::Index>(u);
		auto& p = out[u];
		p.theta = principal_angle(phases(i));
		p.s = rank(i);
		const double radius = span > 0.0 ? 1.0 - (rank(i) - smin) / span : 0.0;
		p.x = radius * std::cos(p.theta);
		p.y = radius * std::sin(p.theta);
	}
	return out;
}

struct EmbedParams
{
	double q = 1.0 / 3.0;
	double g = 0.3;            // dilation parameter; 0 gives a constant rank
	std::size_t eigvec = 1;    // 1-based magnetic eigenvector index
	bool normalized = true;    // normalized magnetic Laplacian
};

inline std::vector<EmbeddingPoint> embed(const DirectedGraph& g, const EmbedParams& p)
{
	if (p.eigvec < 1 || p.eigvec > g.n())
		throw InputError("embed: eigenvector index must lie in [1, n]");
	if (p.g < 0.0)
		throw InputError("embed: dilation parameter must be non-negative");
	const Eigen::VectorXcd phases = magnetic_eigenvector(g, p.q, p.eigvec - 1, p.normalized);
	const Eigen::VectorXd rank = p.g > 0.0 ? dilation_rank(g, p.g) : Eigen::VectorXd::Ones(g.n());
	return embed_from_vectors(phases, rank);
}

} // namespace effgraph
