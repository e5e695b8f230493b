// effgraph command-line tool. Exit codes: 0 success, 1 usage or input error,
// 2 numerical failure.

#include "effgraph/effgraph.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

using namespace effgraph;
namespace fs = std::filesystem;

namespace {

using detail::format_real;

// Writes to `path`, or stdout when the path is empty or "-".
class Sink
{
public:
	explicit Sink(const std::string& path)
	{
		if (!path.empty() && path != "-") {
			if (const auto parent = fs::path(path).parent_path(); !parent.empty())
				fs::create_directories(parent);
			file_ = detail::open_out(path);
		}
	}
	std::ostream& operator*() { return file_ ? static_cast<std::ostream&>(*file_) : std::cout; }

private:
	std::optional<std::ofstream> file_;
};

fs::path output_dir(const std::string& dir)
{
	if (dir.empty())
		throw InputError("an output directory is required (-o)");
	fs::create_directories(dir);
	return dir;
}

DirectedGraph load_graph(const std::string& path, const std::string& labels)
{
	return load_edge_list(path, labels.empty() ? std::nullopt : std::optional<std::string>(labels));
}

IntensityField load_image(const std::string& path)
{
	auto in = detail::open_in(path);
	return read_pgm(in, path);
}

// Vertex blocks from labels, numbered by sorted label.
std::vector<std::size_t> blocks_from_labels(const std::vector<std::string>& labels)
{
	std::set<std::string> sorted(labels.begin(), labels.end());
	std::map<std::string, std::size_t> index;
	for (const auto& l : sorted)
		index.emplace(l, index.size());
	std::vector<std::size_t> out;
	out.reserve(labels.size());
	for (const auto& l : labels)
		out.push_back(index.at(l));
	return out;
}

void write_dense_csv(std::ostream& out, const Eigen::MatrixXd& m)
{
	for (Eigen::Index r = 0; r < m.rows(); ++r) {
		for (Eigen::Index c = 0; c < m.cols(); ++c)
			out << (c ? "," : "") << format_real(m(r, c));
		out << '\n';
	}
}

void write_spectrum_csv(std::ostream& out, const SpectrumResult& s)
{
	out << "index,re,im\n";
	for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
		out << i << ',' << format_real(s.eigenvalues(i).real()) << ',' << format_real(s.eigenvalues(i).imag()) << '\n';
}

void write_betweenness(std::ostream& out, const std::vector<double>& b)
{
	out << "vertex,B\n";
	for (std::size_t v = 0; v < b.size(); ++v)
		out << v << ',' << format_real(b[v]) << '\n';
}

void write_ccdf(std::ostream& out, const std::vector<std::pair<std::size_t, double>>& c)
{
	out << "k,ccdf\n";
	for (const auto& [k, p] : c)
		out << k << ',' << format_real(p) << '\n';
}

void write_knn(std::ostream& out, const std::vector<std::pair<std::size_t, double>>& c)
{
	out << "k,knn\n";
	for (const auto& [k, v] : c)
		out << k << ',' << format_real(v) << '\n';
}

void write_histogram(std::ostream& out, const Histogram& h)
{
	out << "bin_lo,bin_hi,count\n";
	for (std::size_t i = 0; i < h.counts.size(); ++i)
		out << format_real(h.edges[i]) << ',' << format_real(h.edges[i + 1]) << ',' << h.counts[i] << '\n';
}

// Potential CSV: vertex, Helmholtz potential, SpringRank, trophic level.
void write_ranks(std::ostream& out, const DirectedGraph& g, RankWeighting w)
{
	const auto h = hodge_decompose(g);
	const auto spring = spring_rank(g, w).score;
	const auto trophic = trophic_levels(g, w).score;
	out << "vertex,phi,spring,trophic\n";
	for (std::size_t v = 0; v < g.n(); ++v) {
		const auto i = static_cast<Eigen::Index>(v);
		out << v << ',' << format_real(h.potential(i)) << ',' << format_real(spring(i)) << ','
		    << format_real(trophic(i)) << '\n';
	}
}

PhaseScaling parse_scaling(const std::string& s)
{
	return s == "unscaled" ? PhaseScaling::unscaled : PhaseScaling::literal;
}

struct NeighborhoodOpts
{
	double radius = 1.0;
	std::string metric = "chebyshev";

	Neighborhood get() const
	{
		return {radius, metric == "euclidean" ? NeighborhoodMetric::euclidean : NeighborhoodMetric::chebyshev};
	}
};

void add_neighborhood(CLI::App* app, NeighborhoodOpts& nb)
{
	app->add_option("--radius", nb.radius, "Neighborhood radius")->capture_default_str();
	app->add_option("--metric", nb.metric, "Neighborhood metric")
	    ->check(CLI::IsMember({"chebyshev", "euclidean"}))
	    ->capture_default_str();
}

struct ImageMapping
{
	std::string kind = "gradient";
	KernelParams kernel;
	TanhParams tanh;
	GradientParams gradient;
	NeighborhoodOpts nb;

	DirectedGraph apply(const IntensityField& img)
	{
		if (kind == "kernel") {
			kernel.neighborhood = nb.get();
			return img_to_digraph_kernel(img, kernel);
		}
		if (kind == "tanh") {
			tanh.neighborhood = nb.get();
			return img_to_digraph_tanh(img, tanh);
		}
		gradient.neighborhood = nb.get();
		return img_to_digraph_gradient(img, gradient);
	}
};

void add_kernel_opts(CLI::App* app, KernelParams& p)
{
	app->add_option("--sigma-s", p.sigma_s, "Spatial kernel scale")->capture_default_str();
	app->add_option("--sigma-i", p.sigma_i, "Intensity kernel scale")->capture_default_str();
	app->add_option("--delta", p.delta_min, "Intensity difference above which edges are one-way")
	    ->capture_default_str();
}

void add_tanh_opts(CLI::App* app, TanhParams& p)
{
	app->add_option("--alpha", p.alpha, "tanh slope")->capture_default_str();
	app->add_option("--delta", p.delta_min, "Intensity difference above which edges are one-way")
	    ->capture_default_str();
}

void add_gradient_opts(CLI::App* app, GradientParams& p)
{
	app->add_option("--eta", p.eta, "Slope penalty")->capture_default_str();
}

// Per-level RG outputs under `dir`.
void write_flow(const fs::path& dir, const RgFlowState& state, const RgParams& p, std::uint64_t seed)
{
	Sink purity((dir / "purity.csv").string());
	*purity << "# q=" << format_real(p.q) << " g=" << format_real(p.g) << " beta=" << format_real(p.beta)
	        << " alpha_disparity=" << format_real(p.alpha_disparity) << " seed=" << seed << '\n';
	*purity << "level,vertices,edges,purity\n";
	for (std::size_t k = 0; k < state.levels.size(); ++k) {
		const auto& level = state.levels[k];
		const std::string stem = "level" + std::to_string(k);
		*purity << k << ',' << level.graph.n() << ',' << level.graph.edge_count() << ','
		        << (level.purity ? format_real(*level.purity) : "") << '\n';
		{
			Sink out((dir / (stem + "_graph.tsv")).string());
			write_edge_list(*out, level.graph);
		}
		{
			Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(level.graph.n(), level.graph.n());
			for (const auto& e : level.graph.edges())
				adj(e.src, e.dst) = 1.0;
			Sink out((dir / (stem + "_adjacency.csv")).string());
			write_dense_csv(*out, adj);
		}
		{
			Sink out((dir / (stem + "_partition.csv")).string());
			*out << "fine,coarse\n";
			for (std::size_t v = 0; v < level.step_partition.size(); ++v)
				*out << v << ',' << level.step_partition[v] << '\n';
		}
		{
			Sink out((dir / (stem + "_effective.tsv")).string());
			write_effective(*out, level.effective);
		}
		const auto eg = level.effective.graph();
		{
			Sink out((dir / (stem + "_betweenness.csv")).string());
			write_betweenness(*out, betweenness(eg, true));
		}
		{
			Sink out((dir / (stem + "_ccdf.csv")).string());
			write_ccdf(*out, ccdf(eg));
		}
		{
			Sink out((dir / (stem + "_knn.csv")).string());
			write_knn(*out, knn_degree_correlation(eg));
		}
	}
}

/**
 * Expands every "--config FILE" into trailing "--key=value" arguments for keys
 * not already given on the command line, so they bind to the innermost
 * subcommand. "key=true" becomes a bare flag; "false" drops it.
 */
std::vector<std::string> expand_config(int argc, char** argv)
{
	std::vector<std::string> args(argv + 1, argv + argc);
	std::vector<std::string> files, kept;
	for (std::size_t i = 0; i < args.size(); ++i) {
		if (args[i] == "--config") {
			if (i + 1 == args.size())
				throw CLI::ArgumentMismatch("--config needs a file");
			files.push_back(args[++i]);
		}
		else if (args[i].rfind("--config=", 0) == 0)
			files.push_back(args[i].substr(9));
		else
			kept.push_back(args[i]);
	}
	std::set<std::string> given;
	for (const auto& a : kept)
		if (a.rfind("--", 0) == 0)
			given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
	for (const auto& path : files) {
		auto in = detail::open_in(path);
		std::string line;
		std::size_t lineno = 0;
		while (std::getline(in, line)) {
			++lineno;
			line = detail::trim(line);
			if (line.empty() || line[0] == '#' || line[0] == ';')
				continue;
			const auto eq = line.find('=');
			if (eq == std::string::npos)
				throw InputError(path + ":" + std::to_string(lineno) + ": expected key=value");
			const std::string key = detail::trim(line.substr(0, eq));
			const std::string value = detail::trim(line.substr(eq + 1));
			if (key.empty() || given.count(key))
				continue;
			given.insert(key);
			if (value == "true")
				kept.push_back("--" + key);
			else if (value != "false")
				kept.push_back("--" + key + "=" + value);
		}
	}
	return kept;
}

int run(int argc, char** argv)
{
	CLI::App app{"Directed-graph analysis with group-deformed Laplacians and effective graphs", "effgraph"};
	app.set_version_flag("--version", std::string("effgraph ") + kVersion + " (Eigen " +
	                                      std::to_string(EIGEN_WORLD_VERSION) + "." +
	                                      std::to_string(EIGEN_MAJOR_VERSION) + "." +
	                                      std::to_string(EIGEN_MINOR_VERSION) + ")");
	std::string config_doc;
	app.add_option("--config", config_doc, "key=value file of defaults for the subcommand; flags override");
	app.require_subcommand(1);

	std::string input, output, labels;

	// generate
	auto* generate = app.add_subcommand("generate", "Generate synthetic graphs");
	generate->require_subcommand(1);
	auto* gen_bm = generate->add_subcommand("block-model", "Directed cyclic block model");
	BlockModelParams bm;
	std::string bm_labels;
	gen_bm->add_option("--blocks", bm.blocks, "Number of blocks")->capture_default_str();
	gen_bm->add_option("--size", bm.block_size, "Vertices per block")->capture_default_str();
	gen_bm->add_option("--pc", bm.p_in, "Reciprocal pair probability inside a block")->capture_default_str();
	gen_bm->add_option("--pd", bm.p_out, "Edge probability from block b to b+1")->capture_default_str();
	gen_bm->add_option("--seed", bm.seed, "RNG seed")->capture_default_str();
	gen_bm->add_option("-o,--output", output, "Graph TSV (stdout when omitted)");
	gen_bm->add_option("--labels", bm_labels, "Also write block labels to this CSV");
	gen_bm->callback([&] {
		std::vector<std::string> names;
		for (auto b : block_model_partition(bm))
			names.push_back("block" + std::to_string(b));
		const auto g = block_model_sample(bm).with_labels(names);
		{
			Sink out(output);
			write_edge_list(*out, g);
		}
		if (!bm_labels.empty()) {
			Sink out(bm_labels);
			write_labels(*out, g.labels());
		}
	});

	// deform
	auto* deform = app.add_subcommand("deform", "Deformed Laplacian as dense CSV");
	std::string kind = "magnetic";
	double q = 0.0, alpha = 0.0;
	bool normalized = false;
	deform->add_option("--kind", kind, "Potential")
	    ->check(CLI::IsMember({"magnetic", "dilation", "sign"}))
	    ->capture_default_str();
	deform->add_option("--q", q, "Magnetic charge")->capture_default_str();
	deform->add_option("--alpha", alpha, "Dilation parameter")->capture_default_str();
	deform->add_flag("--normalized", normalized, "Symmetric normalization");
	deform->add_option("-i,--input", input, "Graph TSV")->required();
	deform->add_option("-o,--output", output, "Laplacian CSV");
	deform->callback([&] {
		const auto g = load_graph(input, "");
		const auto pot = kind == "magnetic" ? magnetic_potential(g, q)
		                 : kind == "dilation" ? dilation_potential(g, alpha)
		                                      : sign_potential(g);
		Sink out(output);
		write_matrix_csv(*out, deformed_laplacian(g, pot, normalized).matrix);
	});

	// spectrum
	auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of a Laplacian CSV");
	std::string vectors_path;
	spectrum->add_option("-i,--input", input, "Laplacian CSV")->required();
	spectrum->add_option("-o,--output", output, "Spectrum CSV (index,re,im)");
	spectrum->add_option("--vectors", vectors_path, "Also write eigenvectors (columns) to this CSV");
	spectrum->callback([&] {
		auto in = detail::open_in(input);
		const Eigen::MatrixXcd m = read_matrix_csv(in, input);
		if (m.rows() != m.cols())
			throw InputError(input + ": matrix is not square");
		const bool hermitian = (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff());
		const auto s = eigendecompose_matrix(m, hermitian);
		Sink out(output);
		write_spectrum_csv(*out, s);
		if (!vectors_path.empty()) {
			Sink vout(vectors_path);
			write_matrix_csv(*vout, s.eigenvectors);
		}
	});

	// specific-heat
	auto* heat = app.add_subcommand("specific-heat", "Specific heat of a Hermitian spectrum");
	double beta_min = 1e-2, beta_max = 1e3;
	std::size_t beta_points = 64;
	heat->add_option("-i,--input", input, "Spectrum CSV (index,re,im)")->required();
	heat->add_option("-o,--output", output, "CSV (beta,c)");
	heat->add_option("--beta-min", beta_min, "Smallest inverse temperature")->capture_default_str();
	heat->add_option("--beta-max", beta_max, "Largest inverse temperature")->capture_default_str();
	heat->add_option("--beta-points", beta_points, "Log-spaced grid size")->capture_default_str();
	heat->callback([&] {
		auto in = detail::open_in(input);
		std::string line;
		std::vector<double> levels;
		std::size_t lineno = 0;
		while (std::getline(in, line)) {
			++lineno;
			if (line.empty() || line.rfind("index", 0) == 0)
				continue;
			const auto f = detail::split(line, ',');
			const auto re = f.size() == 3 ? detail::parse_real(f[1]) : std::nullopt;
			const auto im = f.size() == 3 ? detail::parse_real(f[2]) : std::nullopt;
			if (!re || !im)
				throw InputError(input + ":" + std::to_string(lineno) + ": expected index,re,im");
			if (std::abs(*im) > 1e-9)
				throw InputError(input + ":" + std::to_string(lineno) + ": spectrum is not real");
			levels.push_back(*re);
		}
		if (!(beta_min > 0.0) || !(beta_max >= beta_min) || beta_points == 0)
			throw InputError("specific-heat: need 0 < beta-min <= beta-max and at least one point");
		const auto betas = default_beta_grid(beta_points, beta_min, beta_max);
		const auto c = specific_heat(std::span<const double>(levels), betas);
		Sink out(output);
		*out << "beta,c\n";
		for (std::size_t i = 0; i < betas.size(); ++i)
			*out << format_real(betas[i]) << ',' << format_real(c[i]) << '\n';
	});

	// effective
	auto* effective = app.add_subcommand("effective", "Frustration-damped effective graph");
	EffectiveParams ep;
	std::string scaling = "literal";
	effective->add_option("--q", ep.q, "Magnetic charge")->capture_default_str();
	effective->add_option("--g", ep.g, "Dilation parameter of the amplitude")->capture_default_str();
	effective->add_option("--beta", ep.beta, "Damping strength")->capture_default_str();
	effective->add_option("--scaling", scaling, "Phase scaling of the solver")
	    ->check(CLI::IsMember({"literal", "unscaled"}))
	    ->capture_default_str();
	effective->add_option("-i,--input", input, "Graph TSV")->required();
	effective->add_option("-o,--output", output, "Effective graph TSV");
	effective->callback([&] {
		ep.scaling = parse_scaling(scaling);
		const auto eff = effective_graph(load_graph(input, ""), ep);
		Sink out(output);
		write_effective(*out, eff);
	});

	// hodge
	auto* hodge = app.add_subcommand("hodge", "Hodge-Helmholtz decomposition and rankings");
	hodge->require_subcommand(1);
	bool weighted = false;
	std::size_t bins = 20;
	auto* h_dec = hodge->add_subcommand("decompose", "Gradient, curl and harmonic edge lists");
	auto* h_rank = hodge->add_subcommand("rank", "Potential, SpringRank and trophic levels");
	auto* h_hist = hodge->add_subcommand("histogram", "Weight histograms of each component");
	for (auto* sub : {h_dec, h_rank, h_hist}) {
		sub->add_option("-i,--input", input, "Graph TSV")->required();
		sub->add_option("-o,--output", output, "Output directory")->required();
	}
	h_rank->add_flag("--weighted", weighted, "Use edge weights instead of 0/1 comparisons");
	h_hist->add_option("--bins", bins, "Histogram bins")->capture_default_str();
	h_dec->callback([&] {
		const auto g = load_graph(input, "");
		const auto h = hodge_decompose(g);
		const auto dir = output_dir(output);
		const auto parts = component_subgraphs(h);
		for (const auto& [name, graph] : {std::pair{"gradient", &parts.gradient}, std::pair{"curl", &parts.curl},
		                                  std::pair{"harmonic", &parts.harmonic}}) {
			Sink out((dir / (std::string(name) + ".tsv")).string());
			write_edge_list(*out, *graph);
		}
		Sink pot((dir / "potential.csv").string());
		write_ranks(*pot, g, RankWeighting::unweighted);
		std::cout << "relative residual " << format_real(h.relative_residual) << '\n';
	});
	h_rank->callback([&] {
		const auto g = load_graph(input, "");
		Sink out((output_dir(output) / "potential.csv").string());
		write_ranks(*out, g, weighted ? RankWeighting::weighted : RankWeighting::unweighted);
	});
	h_hist->callback([&] {
		const auto parts = component_subgraphs(load_graph(input, ""));
		const auto dir = output_dir(output);
		for (const auto& [name, graph] : {std::pair{"gradient", &parts.gradient}, std::pair{"curl", &parts.curl},
		                                  std::pair{"harmonic", &parts.harmonic}}) {
			const auto w = edge_weights(*graph);
			Sink out((dir / (std::string(name) + "_histogram.csv")).string());
			write_histogram(*out, weight_histogram(std::span<const double>(w), bins));
		}
	});

	// rgeg
	auto* rgeg = app.add_subcommand("rgeg", "Effective-graph renormalization flow");
	RgParams rp;
	std::uint64_t seed = 0;
	std::size_t seeds = 1, jobs = 1;
	bool accumulate = false;
	rgeg->add_option("--q", rp.q, "Magnetic charge")->capture_default_str();
	rgeg->add_option("--g", rp.g, "Dilation parameter")->capture_default_str();
	rgeg->add_option("--beta", rp.beta, "Damping strength")->capture_default_str();
	rgeg->add_option("--alpha-disparity", rp.alpha_disparity, "Disparity filter threshold")->capture_default_str();
	rgeg->add_option("--steps", rp.steps, "Maximum RG steps")->capture_default_str();
	rgeg->add_option("--scaling", scaling, "Phase scaling of the solver")
	    ->check(CLI::IsMember({"literal", "unscaled"}))
	    ->capture_default_str();
	rgeg->add_flag("--accumulate", accumulate, "Coarse edge weight is the sum of fine weights");
	rgeg->add_option("-i,--input", input, "Graph TSV; when omitted a block model is generated per seed");
	rgeg->add_option("--labels", labels, "Vertex labels CSV for purity");
	rgeg->add_option("--blocks", bm.blocks, "Generated block count")->capture_default_str();
	rgeg->add_option("--size", bm.block_size, "Generated block size")->capture_default_str();
	rgeg->add_option("--pc", bm.p_in, "Generated in-block probability")->capture_default_str();
	rgeg->add_option("--pd", bm.p_out, "Generated cyclic probability")->capture_default_str();
	rgeg->add_option("--seed", seed, "First block-model seed")->capture_default_str();
	rgeg->add_option("--seeds", seeds, "Number of consecutive seeds to sweep")->capture_default_str();
	rgeg->add_option("--jobs", jobs, "Parallel workers for the seed sweep")->capture_default_str();
	rgeg->add_option("-o,--output", output, "Output directory")->required();
	rgeg->callback([&] {
		rp.scaling = parse_scaling(scaling);
		rp.accumulate_weights = accumulate;
		validate(rp);
		const auto dir = output_dir(output);
		if (!input.empty()) {
			if (seeds != 1)
				throw InputError("rgeg: --seeds applies to generated block models only");
			write_flow(dir, rgeg_flow(load_graph(input, labels), rp), rp, seed);
			return;
		}
		if (jobs == 0 || seeds == 0)
			throw InputError("rgeg: --jobs and --seeds must be positive");
		std::atomic<std::size_t> next{0};
		std::mutex failure_mutex;
		std::exception_ptr failure;
		auto worker = [&] {
			for (std::size_t i = next++; i < seeds; i = next++) {
				try {
					BlockModelParams p = bm;
					p.seed = seed + i;
					std::vector<std::string> names;
					for (auto b : block_model_partition(p))
						names.push_back("block" + std::to_string(b));
					const auto g = block_model_sample(p).with_labels(names);
					const auto sub = seeds == 1 ? dir : dir / ("seed" + std::to_string(p.seed));
					fs::create_directories(sub);
					write_flow(sub, rgeg_flow(g, rp), rp, p.seed);
				}
				catch (...) {
					std::lock_guard lock(failure_mutex);
					if (!failure)
						failure = std::current_exception();
				}
			}
		};
		std::vector<std::thread> pool;
		for (std::size_t t = 1; t < std::min(jobs, seeds); ++t)
			pool.emplace_back(worker);
		worker();
		for (auto& t : pool)
			t.join();
		if (failure)
			std::rethrow_exception(failure);
	});

	// embed
	auto* embed_cmd = app.add_subcommand("embed", "Polar embedding from magnetic phases and dilation rank");
	EmbedParams emp;
	bool unnormalized = false;
	embed_cmd->add_option("--q", emp.q, "Magnetic charge")->capture_default_str();
	embed_cmd->add_option("--g", emp.g, "Dilation parameter")->capture_default_str();
	embed_cmd->add_option("--eigvec-index", emp.eigvec, "1-based magnetic eigenvector")->capture_default_str();
	embed_cmd->add_flag("--unnormalized", unnormalized, "Use the unnormalized magnetic Laplacian");
	embed_cmd->add_option("-i,--input", input, "Graph TSV")->required();
	embed_cmd->add_option("-o,--output", output, "Embedding CSV (vertex,theta,s,x,y)");
	embed_cmd->callback([&] {
		emp.normalized = !unnormalized;
		const auto pts = embed(load_graph(input, ""), emp);
		Sink out(output);
		*out << "vertex,theta,s,x,y\n";
		for (std::size_t v = 0; v < pts.size(); ++v)
			*out << v << ',' << format_real(pts[v].theta) << ',' << format_real(pts[v].s) << ','
			     << format_real(pts[v].x) << ',' << format_real(pts[v].y) << '\n';
	});

	// measures
	auto* measures = app.add_subcommand("measures", "Network measures on the symmetrized or effective graph");
	measures->require_subcommand(1);
	std::string on = "symmetrized";
	auto* m_bet = measures->add_subcommand("betweenness", "Betweenness centrality (vertex,B)");
	auto* m_ccdf = measures->add_subcommand("ccdf", "Degree CCDF (k,ccdf)");
	auto* m_knn = measures->add_subcommand("knn", "Average neighbor degree (k,knn)");
	auto* m_bd = measures->add_subcommand("block-density", "Directed block density matrix");
	bool m_weighted = false;
	for (auto* sub : {m_bet, m_ccdf, m_knn, m_bd}) {
		sub->add_option("-i,--input", input, "Graph TSV")->required();
		sub->add_option("-o,--output", output, "Output CSV");
	}
	for (auto* sub : {m_bet, m_ccdf, m_knn}) {
		sub->add_option("--on", on, "Graph to measure")
		    ->check(CLI::IsMember({"symmetrized", "effective"}))
		    ->capture_default_str();
		sub->add_option("--q", ep.q, "Magnetic charge for the effective graph")->capture_default_str();
		sub->add_option("--g", ep.g, "Dilation parameter for the effective graph")->capture_default_str();
		sub->add_option("--beta", ep.beta, "Damping strength for the effective graph")->capture_default_str();
	}
	m_bet->add_flag("--weighted", m_weighted, "Distances are inverse weights");
	m_bd->add_option("--labels", labels, "Vertex labels CSV defining the blocks")->required();
	auto measured = [&] {
		const auto g = load_graph(input, "");
		return on == "effective" ? effective_graph(g, ep).graph() : symmetrize(g);
	};
	m_bet->callback([&] {
		Sink out(output);
		write_betweenness(*out, betweenness(measured(), m_weighted));
	});
	m_ccdf->callback([&] {
		Sink out(output);
		write_ccdf(*out, ccdf(measured()));
	});
	m_knn->callback([&] {
		Sink out(output);
		write_knn(*out, knn_degree_correlation(measured()));
	});
	m_bd->callback([&] {
		const auto g = load_graph(input, labels);
		Sink out(output);
		write_dense_csv(*out, block_density(g, blocks_from_labels(g.labels())));
	});

	// img2graph
	auto* img2graph = app.add_subcommand("img2graph", "Grayscale PGM to directed graph");
	img2graph->require_subcommand(1);
	ImageMapping mapping;
	auto* i_kernel = img2graph->add_subcommand("kernel", "Gaussian similarity kernel");
	auto* i_tanh = img2graph->add_subcommand("tanh", "tanh of intensity differences");
	auto* i_grad = img2graph->add_subcommand("gradient", "Sobel slope penalty");
	add_kernel_opts(i_kernel, mapping.kernel);
	add_tanh_opts(i_tanh, mapping.tanh);
	add_gradient_opts(i_grad, mapping.gradient);
	for (const auto& [sub, name] : std::initializer_list<std::pair<CLI::App*, const char*>>{
	         {i_kernel, "kernel"}, {i_tanh, "tanh"}, {i_grad, "gradient"}}) {
		add_neighborhood(sub, mapping.nb);
		sub->add_option("-i,--input", input, "Image PGM (P2)")->required();
		sub->add_option("-o,--output", output, "Graph TSV");
		sub->callback([&, name] {
			mapping.kind = name;
			const auto g = mapping.apply(load_image(input));
			Sink out(output);
			write_edge_list(*out, g);
		});
	}

	// segment
	auto* segment = app.add_subcommand("segment", "k-means on the first magnetic eigenvector modulus");
	SegmentParams sp;
	std::string labels_csv;
	segment->add_option("--mapping", mapping.kind, "Image-to-graph mapping")
	    ->check(CLI::IsMember({"kernel", "tanh", "gradient"}))
	    ->capture_default_str();
	add_gradient_opts(segment, mapping.gradient);
	segment->add_option("--sigma-s", mapping.kernel.sigma_s, "Kernel spatial scale")->capture_default_str();
	segment->add_option("--sigma-i", mapping.kernel.sigma_i, "Kernel intensity scale")->capture_default_str();
	segment->add_option("--alpha", mapping.tanh.alpha, "tanh slope")->capture_default_str();
	segment->add_option("--delta", mapping.kernel.delta_min, "One-way threshold for kernel and tanh")
	    ->capture_default_str();
	add_neighborhood(segment, mapping.nb);
	segment->add_option("--q", sp.q, "Magnetic charge")->capture_default_str();
	segment->add_option("--k", sp.k, "Clusters")->capture_default_str();
	segment->add_flag("--normalized", sp.normalized, "Use the normalized magnetic Laplacian");
	segment->add_option("--seed", sp.seed, "k-means seed")->capture_default_str();
	segment->add_option("-i,--input", input, "Image PGM (P2)")->required();
	segment->add_option("-o,--output", output, "Label image PGM");
	segment->add_option("--labels-csv", labels_csv, "Also write vertex,label CSV");
	segment->callback([&] {
		mapping.tanh.delta_min = mapping.kernel.delta_min;
		const auto img = load_image(input);
		const auto lab = segment_magnetic(mapping.apply(img), sp);
		{
			Sink out(output);
			write_pgm(*out, img.width, img.height, lab, sp.k - 1);
		}
		if (!labels_csv.empty()) {
			Sink out(labels_csv);
			*out << "vertex,label\n";
			for (std::size_t v = 0; v < lab.size(); ++v)
				*out << v << ',' << lab[v] << '\n';
		}
	});

	try {
		auto args = expand_config(argc, argv);
		std::reverse(args.begin(), args.end());
		app.parse(args);
	}
	catch (const CLI::Success& e) {
		return app.exit(e);
	}
	catch (const CLI::ParseError& e) {
		app.exit(e);
		return 1;
	}
	return 0;
}

} // namespace

int main(int argc, char** argv)
{
	try {
		return run(argc, argv);
	}
	catch (const InputError& e) {
		std::cerr << "effgraph: " << e.what() << '\n';
		return 1;
	}
	catch (const fs::filesystem_error& e) {
		std::cerr << "effgraph: " << e.what() << '\n';
		return 1;
	}
	catch (const NumericalError& e) {
		std::cerr << "effgraph: numerical failure: " << e.what() << '\n';
		return 2;
	}
	catch (const std::exception& e) {
		std::cerr << "effgraph: " << e.what() << '\n';
		return 2;
	}
}
