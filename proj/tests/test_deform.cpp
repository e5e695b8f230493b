#include "support/corpus.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace effgraph;
using testsupport::directed_cycle;

namespace {

const double pi = std::numbers::pi;

double max_abs(const Eigen::MatrixXcd& m)
{
	return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

} // namespace

TEST(MagneticPotential, ZeroChargeIsIdentity)
{
	std::mt19937_64 rng(1);
	const auto g = testsupport::random_digraph(rng, 10);
	const auto t = magnetic_potential(g, 0.0);
	EXPECT_EQ(max_abs(t.values - Eigen::MatrixXcd::Ones(g.n(), g.n())), 0.0);
}

TEST(MagneticPotential, SingleEdgeQuarterCharge)
{
	const auto g = DirectedGraph::from_edge_list({{0, 1, 1.0, std::nullopt}});
	const auto t = magnetic_potential(g, 0.25);
	// exp(i 2 pi q A^T): A(1, 0) = -1
	EXPECT_NEAR(std::abs(t(0, 1) - std::polar(1.0, -pi / 2.0)), 0.0, 1e-15);
	EXPECT_NEAR(std::abs(t(1, 0) - std::polar(1.0, pi / 2.0)), 0.0, 1e-15);
}

TEST(MagneticPotential, BalancedEdgesCarryNoPhase)
{
	const auto g = DirectedGraph::from_edge_list({{0, 1, 2.0, std::nullopt}, {1, 0, 2.0, std::nullopt}});
	EXPECT_EQ(magnetic_potential(g, 0.37)(0, 1), Complex(1.0, 0.0));
}

TEST(MagneticPotential, InverseConstraintAndReversalConjugates)
{
	std::mt19937_64 rng(2);
	for (int i = 0; i < 40; ++i) {
		const auto g = testsupport::random_digraph(rng, 12);
		const double q = uniform01(rng);
		const auto t = magnetic_potential(g, q);
		const auto r = magnetic_potential(g.reversed(), q);
		for (std::size_t u = 0; u < g.n(); ++u)
			for (std::size_t v = 0; v < g.n(); ++v) {
				EXPECT_NEAR(std::abs(t(u, v) * t(v, u) - 1.0), 0.0, 1e-14);
				EXPECT_NEAR(std::abs(t(u, v)), 1.0, 1e-14);
				EXPECT_EQ(r(u, v), std::conj(t(u, v)));
			}
	}
}

TEST(MagneticPotential, RejectsChargeOutsideUnitInterval)
{
	const auto g = directed_cycle(3);
	EXPECT_THROW(magnetic_potential(g, 1.0), InputError);
	EXPECT_THROW(magnetic_potential(g, -0.1), InputError);
}

TEST(DilationPotential, SingleEdge)
{
	const auto g = DirectedGraph::from_edge_list({{0, 1, 1.0, std::nullopt}});
	const auto t = dilation_potential(g, 0.1);
	EXPECT_NEAR(t(0, 1).real(), std::exp(-0.1), 1e-15);
	EXPECT_NEAR(t(1, 0).real(), std::exp(0.1), 1e-15);
	EXPECT_EQ(t(0, 1).imag(), 0.0);
}

TEST(DilationPotential, ContinuousAtZero)
{
	std::mt19937_64 rng(5);
	const auto g = testsupport::random_digraph(rng, 10);
	const auto t = dilation_potential(g, 1e-12);
	EXPECT_LE(max_abs(t.values - Eigen::MatrixXcd::Ones(g.n(), g.n())), 1e-9);
}

TEST(DilationPotential, ZeroFluxEdgeIsOne)
{
	const auto g = DirectedGraph::from_edge_list({{0, 1, 1.0, std::nullopt}, {1, 0, 1.0, std::nullopt}});
	EXPECT_EQ(dilation_potential(g, 0.7)(0, 1), Complex(1.0, 0.0));
}

TEST(DilationPotential, RejectsNonPositiveParameter)
{
	EXPECT_THROW(dilation_potential(directed_cycle(3), 0.0), InputError);
}

TEST(SignPotential, Values)
{
	const auto g = DirectedGraph::from_edge_list({{0, 1, 1.0, 1}, {1, 2, 1.0, -1}, {2, 0, 1.0, 1}});
	const auto t = sign_potential(g);
	EXPECT_EQ(t(0, 1), Complex(1.0));
	EXPECT_EQ(t(1, 2), Complex(-1.0));
	EXPECT_EQ(t(2, 1), Complex(-1.0));
	EXPECT_THROW(sign_potential(directed_cycle(3)), InputError);
}

TEST(SignPotential, BalancedTriangleHasPositiveProduct)
{
	const auto g = DirectedGraph::from_edge_list({{0, 1, 1.0, -1}, {1, 2, 1.0, -1}, {2, 0, 1.0, 1}});
	const auto t = sign_potential(g);
	EXPECT_EQ(t(0, 1) * t(1, 2) * t(2, 0), Complex(1.0));
}

TEST(Promotion, UnitModulusRoundTripIsOne)
{
	const auto t = magnetic_potential(directed_cycle(3), 0.2);
	EXPECT_NEAR(std::abs(promotion(t, 0, 1, 1, 0) - 1.0), 0.0, 1e-15);
}

TEST(GeneralizedDegree, ConstantSignalVanishes)
{
	std::mt19937_64 rng(8);
	const auto g = testsupport::random_digraph(rng, 10);
	const auto t = identity_potential(g.n());
	Eigen::MatrixXcd h = symmetrize(g).weight_matrix().cast<Complex>();
	for (Eigen::Index i = 0; i < h.rows(); ++i)
		for (Eigen::Index j = 0; j < h.cols(); ++j)
			h(i, j) = i == j || h(i, j) != 0.0 ? 1.0 : 0.0;
	const VertexSignal f = VertexSignal::Ones(g.n());
	for (std::size_t u = 0; u < g.n(); ++u)
		EXPECT_NEAR(std::abs(generalized_degree(g, t, h, f, u)), 0.0, 1e-14);
}

TEST(GeneralizedDegree, LinearSignalOnPathInterior)
{
	const auto g = testsupport::directed_path(3);
	const auto t = identity_potential(3);
	Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(3, 3);
	h(0, 1) = h(1, 0) = h(1, 2) = h(2, 1) = 1.0;
	VertexSignal f(3);
	f << 0.0, 1.0, 2.0;
	EXPECT_NEAR(std::abs(generalized_degree(g, t, h, f, 1)), 0.0, 1e-15);
}

TEST(GeneralizedDegree, ConsistentWindingOnThreeCycle)
{
	const auto g = directed_cycle(3);
	const auto t = magnetic_potential(g, 1.0 / 3.0);
	Eigen::MatrixXcd h = Eigen::MatrixXcd::Ones(3, 3);
	// f(k) = exp(i 2 pi k / 3) makes f(u) = T(u, v) f(v) on every cycle edge
	VertexSignal f(3);
	for (int k = 0; k < 3; ++k)
		f(k) = std::polar(1.0, 2.0 * pi * k / 3.0);
	for (std::size_t u = 0; u < 3; ++u)
		EXPECT_NEAR(std::abs(t(u, (u + 1) % 3) * f((u + 1) % 3) - f(u)), 0.0, 1e-12);
	for (std::size_t u = 0; u < 3; ++u)
		EXPECT_NEAR(std::abs(generalized_degree(g, t, h, f, u)), 0.0, 1e-12);
}

TEST(GeneralizedDegree, DimensionMismatch)
{
	const auto g = directed_cycle(3);
	EXPECT_THROW(generalized_degree(g, identity_potential(3), Eigen::MatrixXcd::Ones(2, 2), VertexSignal::Ones(3), 0),
	             InputError);
}

TEST(CombinatorialLaplacian, SingleEdgeAndPath)
{
	const auto l1 = combinatorial_laplacian(UndirectedGraph::from_edges(2, {{0, 1, 1.0}}));
	Eigen::Matrix2d e1;
	e1 << 1, -1, -1, 1;
	EXPECT_EQ(l1, Eigen::MatrixXd(e1));
	const auto l3 = combinatorial_laplacian(UndirectedGraph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}}));
	Eigen::Matrix3d e3;
	e3 << 1, -1, 0, -1, 2, -1, 0, -1, 1;
	EXPECT_EQ(l3, Eigen::MatrixXd(e3));
}

TEST(CombinatorialLaplacian, RowSumsVanish)
{
	std::mt19937_64 rng(4);
	for (int i = 0; i < 30; ++i) {
		const auto l = combinatorial_laplacian(symmetrize(testsupport::random_digraph(rng, 20)));
		EXPECT_LE(l.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
	}
}

TEST(DeformedLaplacian, ZeroChargeMatchesCombinatorial)
{
	std::mt19937_64 rng(6);
	for (int i = 0; i < 50; ++i) {
		const auto g = testsupport::random_digraph(rng, 30);
		const auto l = deformed_laplacian(g, magnetic_potential(g, 0.0));
		const Eigen::MatrixXcd ref = combinatorial_laplacian(symmetrize(g)).cast<Complex>();
		EXPECT_LE(max_abs(l.matrix - ref), 1e-14);
		const auto id = deformed_laplacian(g, identity_potential(g.n()));
		EXPECT_EQ(max_abs(id.matrix - ref), 0.0);
	}
}

TEST(DeformedLaplacian, MagneticIsHermitianPsd)
{
	std::mt19937_64 rng(7);
	for (int i = 0; i < 200; ++i) {
		const auto g = testsupport::random_digraph(rng, 30);
		const double q = 0.999 * uniform01(rng);
		for (bool normalized : {false, true}) {
			const auto l = deformed_laplacian(g, magnetic_potential(g, q), normalized);
			EXPECT_LE(max_abs(l.matrix - l.matrix.adjoint()), 1e-12);
			Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(l.matrix);
			EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
		}
	}
}

TEST(DeformedLaplacian, NormalizedIsolatedVertexHasZeroDiagonal)
{
	const auto g = DirectedGraph::from_edge_list({{0, 1, 1.0, std::nullopt}}, 3);
	const auto l = deformed_laplacian(g, magnetic_potential(g, 0.1), true);
	EXPECT_EQ(l.matrix(2, 2), Complex(0.0));
	EXPECT_EQ(l.matrix(0, 0), Complex(1.0));
}

TEST(DeformedLaplacian, ThreeCycleMatchesCharacteristicPolynomial)
{
	const auto g = directed_cycle(3);
	for (double q : {0.0, 0.1, 1.0 / 3.0, 0.45, 0.8}) {
		const auto l = deformed_laplacian(g, magnetic_potential(g, q));
		const auto ref = testsupport::hermitian3_eigenvalues(Eigen::Matrix3cd(l.matrix));
		const auto spectrum = eigendecompose(l);
		// q = 1/3 has a double root, which the coefficients fix only to about sqrt(eps)
		for (int k = 0; k < 3; ++k)
			EXPECT_NEAR(spectrum.eigenvalues(k).real(), ref[static_cast<std::size_t>(k)], 1e-7) << "q=" << q;
	}
}

TEST(DeformedLaplacian, BalancedSignedGraphIsGaugeEquivalent)
{
	// random vertex signs sigma; edge sign sigma(u) sigma(v) is balanced
	std::mt19937_64 rng(12);
	for (int i = 0; i < 30; ++i) {
		const auto base = testsupport::random_digraph(rng, 12);
		std::vector<int> sigma(base.n());
		for (auto& s : sigma)
			s = (rng() & 1) ? 1 : -1;
		std::vector<EdgeRow> rows;
		for (const auto& e : base.edges())
			rows.push_back({e.src, e.dst, e.weight, sigma[e.src] * sigma[e.dst]});
		const auto g = DirectedGraph::from_edge_list(rows, base.n());
		const auto ls = deformed_laplacian(g, sign_potential(g));
		const auto lu = deformed_laplacian(base, identity_potential(base.n()));
		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> a(ls.matrix), b(lu.matrix);
		EXPECT_LE((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10);
		// D L_s D = L_u with D = diag(sigma)
		Eigen::VectorXcd d(base.n());
		for (std::size_t u = 0; u < base.n(); ++u)
			d(u) = sigma[u];
		EXPECT_LE(max_abs(d.asDiagonal() * ls.matrix * d.asDiagonal() - lu.matrix), 1e-14);
	}
}

TEST(DeformedLaplacian, DilationIsRealAndGenerallyNonSymmetric)
{
	const auto g = testsupport::directed_path(3);
	const auto l = deformed_laplacian(g, dilation_potential(g, 0.5));
	EXPECT_FALSE(l.hermitian_kind());
	EXPECT_EQ(l.matrix.imag().cwiseAbs().maxCoeff(), 0.0);
	EXPECT_GT(max_abs(l.matrix - l.matrix.adjoint()), 0.1);
}
