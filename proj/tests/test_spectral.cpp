#include "support/corpus.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace effgraph;

namespace {

const double pi = std::numbers::pi;

double wrap(double a)
{
	a = std::fmod(a, 2.0 * pi);
	if (a <= -pi)
		a += 2.0 * pi;
	if (a > pi)
		a -= 2.0 * pi;
	return a;
}

// Hub 0 with three inward arms tip -> mid -> hub; tips form a directed cycle.
// Vertex of arm k at depth j (1 = mid, 2 = tip) is 1 + 2k + (j - 1).
DirectedGraph three_armed_graph()
{
	std::vector<EdgeRow> rows;
	for (std::size_t k = 0; k < 3; ++k) {
		const std::size_t mid = 1 + 2 * k, tip = 2 + 2 * k;
		rows.push_back({tip, mid, 1.0, std::nullopt});
		rows.push_back({mid, 0, 1.0, std::nullopt});
		rows.push_back({tip, 2 + 2 * ((k + 1) % 3), 1.0, std::nullopt});
	}
	return DirectedGraph::from_edge_list(rows, 7);
}

} // namespace

TEST(Eigendecompose, SingleEdgeLaplacian)
{
	const auto g = DirectedGraph::from_edge_list({{0, 1, 1.0, std::nullopt}, {1, 0, 1.0, std::nullopt}});
	const auto r = eigendecompose(deformed_laplacian(g, identity_potential(2)));
	EXPECT_TRUE(r.hermitian);
	EXPECT_NEAR(r.eigenvalues(0).real(), 0.0, 1e-14);
	EXPECT_NEAR(r.eigenvalues(1).real(), 2.0, 1e-14);
}

TEST(Eigendecompose, TraceAndResidualsOnRandomInstances)
{
	std::mt19937_64 rng(31);
	for (int i = 0; i < 60; ++i) {
		const auto g = testsupport::random_digraph(rng, 20);
		const bool dil = i % 3 == 0;
		const auto pot = dil ? dilation_potential(g, 0.3) : magnetic_potential(g, uniform01(rng));
		const auto l = deformed_laplacian(g, pot, i % 2 == 0 && !dil);
		const auto r = eigendecompose(l);
		EXPECT_NEAR(std::abs(r.eigenvalues.sum() - l.matrix.trace()), 0.0, 1e-10);
		const double scale = std::max(l.matrix.norm(), 1.0);
		for (Eigen::Index k = 0; k < r.eigenvalues.size(); ++k) {
			const Eigen::VectorXcd v = r.eigenvectors.col(k);
			EXPECT_NEAR(v.norm(), 1.0, 1e-12);
			EXPECT_LE((l.matrix * v - r.eigenvalues(k) * v).norm(), 1e-8 * scale);
		}
		if (!dil) {
			EXPECT_LE(r.eigenvalues.imag().cwiseAbs().maxCoeff(), 1e-10);
			for (Eigen::Index k = 1; k < r.eigenvalues.size(); ++k)
				EXPECT_LE(r.eigenvalues(k - 1).real(), r.eigenvalues(k).real());
		}
	}
}

TEST(Eigendecompose, GaugeMakesLargestComponentRealPositive)
{
	std::mt19937_64 rng(32);
	const auto g = testsupport::random_digraph(rng, 15, 0.4);
	const auto r = eigendecompose(deformed_laplacian(g, magnetic_potential(g, 0.27)));
	for (Eigen::Index k = 0; k < r.eigenvectors.cols(); ++k) {
		Eigen::Index arg = 0;
		r.eigenvectors.col(k).cwiseAbs().maxCoeff(&arg);
		EXPECT_EQ(r.eigenvectors(arg, k).imag(), 0.0);
		EXPECT_GT(r.eigenvectors(arg, k).real(), 0.0);
	}
}

TEST(Eigendecompose, DeterministicBitForBit)
{
	std::mt19937_64 rng(33);
	const auto g = testsupport::random_digraph(rng, 20, 0.3);
	for (const auto& pot : {magnetic_potential(g, 0.4), dilation_potential(g, 0.2)}) {
		const auto l = deformed_laplacian(g, pot);
		const auto a = eigendecompose(l), b = eigendecompose(l);
		EXPECT_EQ(a.eigenvalues, b.eigenvalues);
		EXPECT_EQ(a.eigenvectors, b.eigenvectors);
	}
}

TEST(Eigendecompose, MagneticThreeCycleMatchesRingSpectrum)
{
	// a ring with total flux Phi has levels 1 - cos((2 pi k + Phi) / 3)
	const auto g = testsupport::directed_cycle(3);
	for (double q : {0.0, 0.1, 0.2, 1.0 / 3.0, 0.45}) {
		const double phi = 3.0 * 2.0 * std::numbers::pi * q;
		std::array<double, 3> ref{};
		for (int k = 0; k < 3; ++k)
			ref[static_cast<std::size_t>(k)] = 1.0 - std::cos((2.0 * std::numbers::pi * k + phi) / 3.0);
		std::sort(ref.begin(), ref.end());
		const auto r = eigendecompose(deformed_laplacian(g, magnetic_potential(g, q)));
		for (int k = 0; k < 3; ++k)
			EXPECT_NEAR(r.eigenvalues(k).real(), ref[static_cast<std::size_t>(k)], 1e-12) << "q=" << q;
	}
}

TEST(Eigendecompose, DilationFirstVectorHasSmallestRealPart)
{
	const auto g = testsupport::directed_path(4);
	const auto r = eigendecompose(deformed_laplacian(g, dilation_potential(g, 0.5)));
	EXPECT_FALSE(r.hermitian);
	for (Eigen::Index k = 1; k < r.eigenvalues.size(); ++k)
		EXPECT_LE(r.eigenvalues(0).real(), r.eigenvalues(k).real());
}

TEST(SpecificHeat, EqualLevelsHaveZeroHeat)
{
	const std::vector<double> spectrum(5, 1.7);
	for (double c : specific_heat(spectrum, default_beta_grid()))
		EXPECT_EQ(c, 0.0);
}

TEST(SpecificHeat, TwoLevelClosedForm)
{
	const std::vector<double> spectrum = {0.0, 1.0};
	const auto grid = default_beta_grid();
	const auto c = specific_heat(spectrum, grid);
	for (std::size_t i = 0; i < grid.size(); ++i) {
		const double b = grid[i];
		EXPECT_NEAR(c[i], b * b * std::exp(-b) / std::pow(1.0 + std::exp(-b), 2), 1e-10);
	}
	EXPECT_NEAR(specific_heat(spectrum, std::vector<double>{1.0})[0], std::exp(1.0) / std::pow(1.0 + std::exp(1.0), 2),
	            1e-15);
}

TEST(SpecificHeat, HighTemperatureLimitIsScaledVariance)
{
	const std::vector<double> spectrum = {0.0, 0.5, 1.2, 3.0, 3.1};
	double mean = 0.0, var = 0.0;
	for (double l : spectrum)
		mean += l / 5.0;
	for (double l : spectrum)
		var += (l - mean) * (l - mean) / 5.0;
	const double beta = 1e-6;
	const double c = specific_heat(spectrum, std::vector<double>{beta})[0];
	EXPECT_NEAR(c / (beta * beta * var), 1.0, 1e-6);
}

TEST(SpecificHeat, NonNegativeOnMagneticSpectra)
{
	std::mt19937_64 rng(34);
	const auto grid = default_beta_grid();
	EXPECT_EQ(grid.size(), 64u);
	EXPECT_NEAR(grid.front(), 1e-2, 1e-15);
	EXPECT_NEAR(grid.back(), 1e3, 1e-9);
	for (int i = 0; i < 40; ++i) {
		const auto g = testsupport::random_digraph(rng, 25);
		const auto r = eigendecompose(deformed_laplacian(g, magnetic_potential(g, uniform01(rng))));
		for (double c : specific_heat(r, grid)) {
			EXPECT_GE(c, 0.0);
			EXPECT_TRUE(std::isfinite(c));
		}
	}
}

TEST(SpecificHeat, RejectsNonHermitianAndBadBeta)
{
	const auto g = testsupport::directed_path(3);
	const auto r = eigendecompose(deformed_laplacian(g, dilation_potential(g, 0.5)));
	EXPECT_THROW(specific_heat(r, default_beta_grid()), InputError);
	EXPECT_THROW(specific_heat(std::vector<double>{0.0, 1.0}, std::vector<double>{0.0}), InputError);
}

TEST(DilationRank, ZeroLimitIsAllOnes)
{
	std::mt19937_64 rng(35);
	const auto g = testsupport::random_connected_dag(rng, 5, 10);
	const auto s = dilation_rank(g, 1e-9);
	EXPECT_LE((s - Eigen::VectorXd::Ones(g.n())).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Embed, RadiiAndExtremes)
{
	std::mt19937_64 rng(36);
	for (int i = 0; i < 20; ++i) {
		const auto g = testsupport::random_connected_dag(rng, 4, 15);
		const auto pts = embed(g, {1.0 / 3.0, 0.3, 1, true});
		double smin = 1e300, smax = -1e300;
		for (const auto& p : pts) {
			smin = std::min(smin, p.s);
			smax = std::max(smax, p.s);
		}
		for (const auto& p : pts) {
			const double r = std::hypot(p.x, p.y);
			EXPECT_GE(r, -1e-15);
			EXPECT_LE(r, 1.0 + 1e-12);
			EXPECT_GT(p.theta, -pi);
			EXPECT_LE(p.theta, pi);
			if (p.s == smax) {
				EXPECT_EQ(r, 0.0);
			}
			if (p.s == smin) {
				EXPECT_NEAR(r, 1.0, 1e-12);
			}
		}
	}
}

TEST(Embed, ConstantRankCollapsesToOrigin)
{
	const auto pts = embed(testsupport::directed_cycle(5), {0.2, 0.0, 1, true});
	for (const auto& p : pts) {
		EXPECT_EQ(p.x, 0.0);
		EXPECT_EQ(p.y, 0.0);
	}
}

TEST(Embed, GlobalPhaseRotationShiftsAllAngles)
{
	std::mt19937_64 rng(37);
	const auto g = testsupport::random_digraph(rng, 10, 0.5);
	const Eigen::VectorXcd v = magnetic_eigenvector(g, 0.3, 1);
	const Eigen::VectorXd s = Eigen::VectorXd::LinSpaced(g.n(), 0.0, 1.0);
	const double alpha = 0.9;
	const auto a = embed_from_vectors(v, s);
	const auto b = embed_from_vectors(v * std::polar(1.0, alpha), s);
	for (std::size_t u = 0; u < a.size(); ++u) {
		EXPECT_NEAR(wrap(b[u].theta - a[u].theta - alpha), 0.0, 1e-12);
		EXPECT_NEAR(std::hypot(a[u].x, a[u].y), std::hypot(b[u].x, b[u].y), 1e-15);
	}
}

TEST(Embed, RejectsBadIndex)
{
	const auto g = testsupport::directed_cycle(3);
	EXPECT_THROW(embed(g, {0.3, 0.1, 0, true}), InputError);
	EXPECT_THROW(embed(g, {0.3, 0.1, 4, true}), InputError);
}

TEST(Embed, ThreeArmedGraphKeepsHubCentralAndArmsRotated)
{
	const auto g = three_armed_graph();
	const auto pts = embed(g, {1.0 / 3.0, 0.3, 1, true});
	// the hub collects all flow and ranks highest
	EXPECT_EQ(pts[0].x, 0.0);
	EXPECT_EQ(pts[0].y, 0.0);
	for (std::size_t depth = 0; depth < 2; ++depth) {
		const double a0 = pts[1 + depth].theta, a1 = pts[3 + depth].theta, a2 = pts[5 + depth].theta;
		const double step = wrap(a1 - a0);
		EXPECT_NEAR(std::abs(step), 2.0 * pi / 3.0, 0.05) << "depth " << depth;
		EXPECT_NEAR(wrap(a2 - a1 - step), 0.0, 0.05);
		EXPECT_NEAR(wrap(a0 - a2 - step), 0.0, 0.05);
		// all arms share the same radius at a given depth
		EXPECT_NEAR(std::hypot(pts[1 + depth].x, pts[1 + depth].y), std::hypot(pts[3 + depth].x, pts[3 + depth].y),
		            1e-9);
	}
}
