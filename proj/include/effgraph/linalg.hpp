#pragma once

#include "effgraph/error.hpp"
#include "effgraph/graph.hpp"

#include <Eigen/Dense>

namespace effgraph {

/// Relative eigenvalue cutoff used by every pseudoinverse in the library.
inline constexpr double kPinvCutoff = 1e-10;

/// L = D - W of an undirected graph.
inline Eigen::MatrixXd combinatorial_laplacian(const UndirectedGraph& g)
{
	Eigen::MatrixXd l = Eigen::MatrixXd::Zero(g.n(), g.n());
	for (const auto& e : g.edges()) {
		l(e.u, e.u) += e.weight;
		l(e.v, e.v) += e.weight;
		l(e.u, e.v) -= e.weight;
		l(e.v, e.u) -= e.weight;
	}
	return l;
}

/// Moore-Penrose pseudoinverse of a real symmetric matrix via its
/// eigendecomposition; eigenvalues with |lambda| <= cutoff * max|lambda| are
/// treated as zero.
inline Eigen::MatrixXd symmetric_pseudoinverse(const Eigen::MatrixXd& m, double cutoff = kPinvCutoff)
{
	if (m.rows() != m.cols())
		throw InputError("pseudoinverse: matrix must be square");
	if (m.size() == 0)
		return m;
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
	if (es.info() != Eigen::Success)
		throw NumericalError("pseudoinverse: symmetric eigensolver did not converge");
	const Eigen::VectorXd& lambda = es.eigenvalues();
	const double threshold = cutoff * lambda.cwiseAbs().maxCoeff();
	Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
	for (Eigen::Index i = 0; i < lambda.size(); ++i)
		if (std::abs(lambda(i)) > threshold)
			inv(i) = 1.0 / lambda(i);
	const Eigen::MatrixXd& v = es.eigenvectors();
	return v * inv.asDiagonal() * v.transpose();
}

} // namespace effgraph
