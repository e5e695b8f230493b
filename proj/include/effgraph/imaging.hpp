#pragma once

#include "effgraph/error.hpp"
#include "effgraph/graph.hpp"
#include "effgraph/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace effgraph {

/// Grayscale image, row-major, intensities in [0, 1]. Pixel id = row * width + col.
struct IntensityField
{
	std::size_t width = 0;
	std::size_t height = 0;
	std::vector<double> intensity;

	IntensityField() = default;

	IntensityField(std::size_t w, std::size_t h, std::vector<double> values)
	: width(w)
	, height(h)
	, intensity(std::move(values))
	{
		if (intensity.size() != width * height)
			throw InputError("image: pixel count does not match dimensions");
		for (double v : intensity)
			if (!(v >= 0.0 && v <= 1.0))
				throw InputError("image: intensities must lie in [0, 1]");
	}

	std::size_t size() const { return intensity.size(); }
	double operator()(std::size_t row, std::size_t col) const { return intensity[row * width + col]; }
	double at(VertexId u) const { return intensity[u]; }
	std::size_t row(VertexId u) const { return u / width; }
	std::size_t col(VertexId u) const { return u % width; }
	VertexId id(std::size_t row, std::size_t col) const { return row * width + col; }
};

enum class NeighborhoodMetric
{
	chebyshev,
	euclidean,
};

struct Neighborhood
{
	double radius = 1.0;
	NeighborhoodMetric metric = NeighborhoodMetric::chebyshev;
};

/// Offsets (drow, dcol) within the neighborhood, excluding (0, 0).
inline std::vector<std::array<int, 2>> neighborhood_offsets(const Neighborhood& nb)
{
	if (!(nb.radius >= 1.0))
		throw InputError("neighborhood radius must be at least 1");
	const int r = static_cast<int>(std::floor(nb.radius));
	std::vector<std::array<int, 2>> out;
	for (int dr = -r; dr <= r; ++dr)
		for (int dc = -r; dc <= r; ++dc) {
			if (dr == 0 && dc == 0)
				continue;
			const bool inside = nb.metric == NeighborhoodMetric::chebyshev
			                        ? true
			                        : std::hypot(dr, dc) <= nb.radius + 1e-12;
			if (inside)
				out.push_back({dr, dc});
		}
	return out;
}

namespace detail {

/// Calls fn(u, v, dr, dc) once per unordered neighbor pair with u < v.
template<typename Fn>
void for_each_neighbor_pair(const IntensityField& img, const Neighborhood& nb, Fn&& fn)
{
	const auto offsets = neighborhood_offsets(nb);
	for (std::size_t r = 0; r < img.height; ++r)
		for (std::size_t c = 0; c < img.width; ++c) {
			const VertexId u = img.id(r, c);
			for (const auto& [dr, dc] : offsets) {
				const auto rr = static_cast<std::ptrdiff_t>(r) + dr;
				const auto cc = static_cast<std::ptrdiff_t>(c) + dc;
				if (rr < 0 || cc < 0 || rr >= static_cast<std::ptrdiff_t>(img.height) ||
				    cc >= static_cast<std::ptrdiff_t>(img.width))
					continue;
				const VertexId v = img.id(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
				if (u < v)
					fn(u, v, dr, dc);
			}
		}
}

/// Direction rule shared by the kernel mappings: u -> v when I rises by
/// more than delta_min, v -> u when it falls by more, both otherwise.
inline void push_directed(std::vector<EdgeRow>& rows, const IntensityField& img, VertexId u, VertexId v,
                          double weight, double delta_min)
{
	const double diff = img.at(v) - img.at(u);
	if (diff > delta_min)
		rows.push_back({u, v, weight, std::nullopt});
	else if (diff < -delta_min)
		rows.push_back({v, u, weight, std::nullopt});
	else {
		rows.push_back({u, v, weight, std::nullopt});
		rows.push_back({v, u, weight, std::nullopt});
	}
}

} // namespace detail

struct KernelParams
{
	double sigma_s = 1.0;
	double sigma_i = 0.1;
	double delta_min = 0.0;
	Neighborhood neighborhood;
};

/// w = exp(-|p(u) - p(v)|^2 / sigma_s - |I(u) - I(v)| / sigma_I) with the
/// intensity direction rule.
inline DirectedGraph img_to_digraph_kernel(const IntensityField& img, const KernelParams& p)
{
	if (!(p.sigma_s > 0.0) || !(p.sigma_i > 0.0))
		throw InputError("kernel mapping: sigma_s and sigma_I must be positive");
	if (!(p.delta_min >= 0.0))
		throw InputError("kernel mapping: delta_I_min must be non-negative");
	std::vector<EdgeRow> rows;
	detail::for_each_neighbor_pair(img, p.neighborhood, [&](VertexId u, VertexId v, int dr, int dc) {
		const double dist2 = static_cast<double>(dr * dr + dc * dc);
		const double w = std::exp(-dist2 / p.sigma_s - std::abs(img.at(u) - img.at(v)) / p.sigma_i);
		if (w > 0.0)
			detail::push_directed(rows, img, u, v, w, p.delta_min);
	});
	return DirectedGraph::from_edge_list(rows, img.size());
}

struct TanhParams
{
	double alpha = 1.0;
	double delta_min = 0.0;
	Neighborhood neighborhood;
};

/// w = tanh(alpha |I(u) - I(v)|); pairs of equal intensity get no edge.
inline DirectedGraph img_to_digraph_tanh(const IntensityField& img, const TanhParams& p)
{
	if (!(p.alpha > 0.0))
		throw InputError("tanh mapping: alpha must be positive");
	if (!(p.delta_min >= 0.0))
		throw InputError("tanh mapping: delta_I_min must be non-negative");
	std::vector<EdgeRow> rows;
	detail::for_each_neighbor_pair(img, p.neighborhood, [&](VertexId u, VertexId v, int, int) {
		const double w = std::tanh(p.alpha * std::abs(img.at(u) - img.at(v)));
		if (w > 0.0)
			detail::push_directed(rows, img, u, v, w, p.delta_min);
	});
	return DirectedGraph::from_edge_list(rows, img.size());
}

/// Image gradient (d/drow, d/dcol) per pixel: 3x3 Sobel scaled by 1/8,
/// replicated borders. A linear ramp yields its exact slope.
inline std::vector<std::array<double, 2>> sobel_gradient(const IntensityField& img)
{
	std::vector<std::array<double, 2>> grad(img.size());
	auto at = [&](std::ptrdiff_t r, std::ptrdiff_t c) {
		r = std::clamp<std::ptrdiff_t>(r, 0, static_cast<std::ptrdiff_t>(img.height) - 1);
		c = std::clamp<std::ptrdiff_t>(c, 0, static_cast<std::ptrdiff_t>(img.width) - 1);
		return img(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
	};
	for (std::size_t r = 0; r < img.height; ++r)
		for (std::size_t c = 0; c < img.width; ++c) {
			const auto R = static_cast<std::ptrdiff_t>(r), C = static_cast<std::ptrdiff_t>(c);
			const double gc = (at(R - 1, C + 1) + 2.0 * at(R, C + 1) + at(R + 1, C + 1) -
			                   at(R - 1, C - 1) - 2.0 * at(R, C - 1) - at(R + 1, C - 1)) / 8.0;
			const double gr = (at(R + 1, C - 1) + 2.0 * at(R + 1, C) + at(R + 1, C + 1) -
			                   at(R - 1, C - 1) - 2.0 * at(R - 1, C) - at(R - 1, C + 1)) / 8.0;
			grad[img.id(r, c)] = {gr, gc};
		}
	return grad;
}

/// h(u, v) = max(grad(x) . d_uv, 0) with the gradient taken at pixel x and
/// d_uv the unit displacement from u to v.
inline double directional_slope(const IntensityField& img, const std::vector<std::array<double, 2>>& grad,
                                VertexId x, VertexId u, VertexId v)
{
	const double dr = static_cast<double>(img.row(v)) - static_cast<double>(img.row(u));
	const double dc = static_cast<double>(img.col(v)) - static_cast<double>(img.col(u));
	const double len = std::hypot(dr, dc);
	return std::max((grad[x][0] * dr + grad[x][1] * dc) / len, 0.0);
}

/// g(u, v) = max(grad(u) . d_uv, grad(v) . d_uv, 0): the two-endpoint form
/// that h(u, v) relaxes. Reversing the pair negates d_uv, so g(v, u) differs
/// from g(u, v) unless the endpoint slopes have opposite signs.
inline double two_endpoint_slope(const IntensityField& img, const std::vector<std::array<double, 2>>& grad,
                                 VertexId u, VertexId v)
{
	return std::max(directional_slope(img, grad, u, u, v), directional_slope(img, grad, v, u, v));
}

struct GradientParams
{
	double eta = 0.5;
	Neighborhood neighborhood;
};

/// Every ordered neighbor pair u -> v gets weight 1 / (1 + eta h(u, v)^2),
/// h evaluated with the gradient at u. The two directions may differ.
inline DirectedGraph img_to_digraph_gradient(const IntensityField& img, const GradientParams& p)
{
	if (!(p.eta >= 0.0))
		throw InputError("gradient mapping: eta must be non-negative");
	const auto grad = sobel_gradient(img);
	std::vector<EdgeRow> rows;
	detail::for_each_neighbor_pair(img, p.neighborhood, [&](VertexId u, VertexId v, int, int) {
		const double huv = directional_slope(img, grad, u, u, v);
		const double hvu = directional_slope(img, grad, v, v, u);
		rows.push_back({u, v, 1.0 / (1.0 + p.eta * huv * huv), std::nullopt});
		rows.push_back({v, u, 1.0 / (1.0 + p.eta * hvu * hvu), std::nullopt});
	});
	return DirectedGraph::from_edge_list(rows, img.size());
}

// ---------------------------------------------------------------------------
// Clustering

struct KMeansParams
{
	std::size_t k = 2;
	std::size_t max_iterations = 100;
	double tolerance = 1e-6;
	std::uint64_t seed = 0;
};

/**
 * Lloyd's k-means on the rows of `points` with k-means++ seeding. Labels are
 * renumbered so cluster centroids ascend along the first feature.
 */
inline std::vector<std::size_t> kmeans(const Eigen::MatrixXd& points, const KMeansParams& p)
{
	const auto n = static_cast<std::size_t>(points.rows());
	if (p.k < 1 || p.k > n)
		throw InputError("kmeans: k must lie in [1, number of points]");

	std::mt19937_64 rng(p.seed);
	Eigen::MatrixXd centers(p.k, points.cols());
	centers.row(0) = points.row(static_cast<Eigen::Index>(rng() % n));
	Eigen::VectorXd d2(n);
	for (std::size_t c = 1; c < p.k; ++c) {
		for (std::size_t i = 0; i < n; ++i) {
			double best = std::numeric_limits<double>::infinity();
			for (std::size_t j = 0; j < c; ++j)
				best = std::min(best, (points.row(i) - centers.row(j)).squaredNorm());
			d2(i) = best;
		}
		const double total = d2.sum();
		std::size_t pick = 0;
		if (total > 0.0) {
			double target = uniform01(rng) * total;
			while (pick + 1 < n && target >= d2(pick)) {
				target -= d2(pick);
				++pick;
			}
		}
		else
			pick = static_cast<std::size_t>(rng() % n);
		centers.row(c) = points.row(pick);
	}

	std::vector<std::size_t> label(n, 0);
	for (std::size_t it = 0; it < p.max_iterations; ++it) {
		for (std::size_t i = 0; i < n; ++i) {
			double best = std::numeric_limits<double>::infinity();
			for (std::size_t j = 0; j < p.k; ++j) {
				const double d = (points.row(i) - centers.row(j)).squaredNorm();
				if (d < best) {
					best = d;
					label[i] = j;
				}
			}
		}
		Eigen::MatrixXd next = Eigen::MatrixXd::Zero(p.k, points.cols());
		std::vector<std::size_t> count(p.k, 0);
		for (std::size_t i = 0; i < n; ++i) {
			next.row(label[i]) += points.row(i);
			++count[label[i]];
		}
		for (std::size_t j = 0; j < p.k; ++j)
			next.row(j) = count[j] ? Eigen::RowVectorXd(next.row(j) / static_cast<double>(count[j]))
			                       : Eigen::RowVectorXd(centers.row(j));
		const double shift = (next - centers).norm();
		centers = next;
		if (shift <= p.tolerance)
			break;
	}

	std::vector<std::size_t> order(p.k);
	std::iota(order.begin(), order.end(), std::size_t{0});
	std::stable_sort(order.begin(), order.end(),
	                 [&](std::size_t a, std::size_t b) { return centers(a, 0) < centers(b, 0); });
	std::vector<std::size_t> rank(p.k);
	for (std::size_t j = 0; j < p.k; ++j)
		rank[order[j]] = j;
	for (auto& l : label)
		l = rank[l];
	return label;
}

struct SegmentParams
{
	double q = 0.1;
	std::size_t k = 2;
	bool normalized = false; // magnetic Laplacian normalization
	std::uint64_t seed = 0;
};

/// k-means on |first magnetic eigenvector| per vertex.
inline std::vector<std::size_t> segment_magnetic(const DirectedGraph& g, const SegmentParams& p)
{
	if (p.k < 2)
		throw InputError("segment_magnetic: need at least two clusters");
	const Eigen::VectorXcd v = magnetic_eigenvector(g, p.q, 0, p.normalized);
	const Eigen::MatrixXd features = v.cwiseAbs();
	return kmeans(features, {p.k, 100, 1e-6, p.seed});
}

} // namespace effgraph
