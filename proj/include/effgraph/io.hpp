#pragma once

#include "effgraph/effective.hpp"
#include "effgraph/error.hpp"
#include "effgraph/graph.hpp"
#include "effgraph/imaging.hpp"

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace effgraph {

namespace detail {

inline std::string trim(std::string_view s)
{
	const auto b = s.find_first_not_of(" \t\r\n");
	if (b == std::string_view::npos)
		return {};
	const auto e = s.find_last_not_of(" \t\r\n");
	return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(const std::string& line, char sep)
{
	std::vector<std::string> out;
	std::string field;
	std::istringstream in(line);
	while (std::getline(in, field, sep))
		out.push_back(trim(field));
	if (!line.empty() && line.back() == sep)
		out.emplace_back();
	return out;
}

inline std::optional<std::size_t> parse_index(const std::string& s)
{
	std::size_t value = 0;
	const auto* end = s.data() + s.size();
	const auto [ptr, ec] = std::from_chars(s.data(), end, value);
	if (ec != std::errc{} || ptr != end || s.empty())
		return std::nullopt;
	return value;
}

inline std::optional<double> parse_real(const std::string& s)
{
	if (s.empty())
		return std::nullopt;
	try {
		std::size_t used = 0;
		const double v = std::stod(s, &used);
		if (used != s.size())
			return std::nullopt;
		return v;
	}
	catch (const std::exception&) {
		return std::nullopt;
	}
}

inline std::string format_real(double v)
{
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.17g", v);
	return buf;
}

inline std::ifstream open_in(const std::string& path)
{
	std::ifstream in(path);
	if (!in)
		throw InputError("cannot open " + path);
	return in;
}

inline std::ofstream open_out(const std::string& path)
{
	std::ofstream out(path);
	if (!out)
		throw InputError("cannot write " + path);
	return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Edge lists

/**
 * Rows "src<TAB>dst[<TAB>weight[<TAB>sign]]", weight defaulting to 1. Lines
 * starting with '#' are comments, except "# vertices<TAB>N", which fixes the
 * vertex count so isolated trailing vertices survive a round trip.
 */
inline DirectedGraph read_edge_list(std::istream& in, const std::string& source = "<stream>")
{
	std::vector<EdgeRow> rows;
	std::optional<std::size_t> n;
	std::string line;
	std::size_t lineno = 0;
	auto fail = [&](const std::string& what) {
		throw InputError(source + ":" + std::to_string(lineno) + ": " + what);
	};
	while (std::getline(in, line)) {
		++lineno;
		const std::string t = detail::trim(line);
		if (t.empty())
			continue;
		if (t.front() == '#') {
			const auto fields = detail::split(detail::trim(t.substr(1)), '\t');
			if (fields.size() == 2 && fields[0] == "vertices") {
				n = detail::parse_index(fields[1]);
				if (!n)
					fail("bad vertex count '" + fields[1] + "'");
			}
			continue;
		}
		const auto fields = detail::split(t, '\t');
		if (fields.size() < 2 || fields.size() > 4)
			fail("expected 2 to 4 tab-separated fields, got " + std::to_string(fields.size()));
		const auto src = detail::parse_index(fields[0]);
		const auto dst = detail::parse_index(fields[1]);
		if (!src || !dst)
			fail("vertex ids must be non-negative integers");
		double w = 1.0;
		if (fields.size() >= 3) {
			const auto parsed = detail::parse_real(fields[2]);
			if (!parsed)
				fail("bad weight '" + fields[2] + "'");
			w = *parsed;
		}
		std::optional<int> sign;
		if (fields.size() == 4) {
			if (fields[3] == "1" || fields[3] == "+1")
				sign = 1;
			else if (fields[3] == "-1")
				sign = -1;
			else
				fail("sign must be +1 or -1");
		}
		if (*src == *dst)
			fail("self-loop at vertex " + fields[0]);
		if (!(w > 0.0) || !std::isfinite(w))
			fail("weight must be positive");
		rows.push_back({*src, *dst, w, sign});
	}
	try {
		return DirectedGraph::from_edge_list(rows, n);
	}
	catch (const InputError& e) {
		throw InputError(source + ": " + e.what());
	}
}

inline void write_edge_list(std::ostream& out, const DirectedGraph& g)
{
	out << "# vertices\t" << g.n() << '\n';
	const auto& signs = g.signs();
	for (std::size_t i = 0; i < g.edge_count(); ++i) {
		const auto& e = g.edges()[i];
		out << e.src << '\t' << e.dst << '\t' << detail::format_real(e.weight);
		if (g.has_signs())
			out << '\t' << (signs[i] > 0 ? "1" : "-1");
		out << '\n';
	}
}

/// Sidecar "vertex,label" CSV. Every vertex must be labeled exactly once.
inline std::vector<std::string> read_labels(std::istream& in, std::size_t n, const std::string& source = "<stream>")
{
	std::vector<std::optional<std::string>> labels(n);
	std::string line;
	std::size_t lineno = 0;
	auto fail = [&](const std::string& what) {
		throw InputError(source + ":" + std::to_string(lineno) + ": " + what);
	};
	bool header = false;
	while (std::getline(in, line)) {
		++lineno;
		const std::string t = detail::trim(line);
		if (t.empty() || t.front() == '#')
			continue;
		if (!header) {
			if (t != "vertex,label")
				fail("expected header 'vertex,label'");
			header = true;
			continue;
		}
		const auto comma = t.find(',');
		if (comma == std::string::npos)
			fail("expected 'vertex,label'");
		const auto v = detail::parse_index(detail::trim(t.substr(0, comma)));
		if (!v || *v >= n)
			fail("vertex id out of range");
		if (labels[*v])
			fail("vertex " + std::to_string(*v) + " labeled twice");
		labels[*v] = detail::trim(t.substr(comma + 1));
	}
	std::vector<std::string> out;
	out.reserve(n);
	for (std::size_t v = 0; v < n; ++v) {
		if (!labels[v])
			throw InputError(source + ": vertex " + std::to_string(v) + " has no label");
		out.push_back(*labels[v]);
	}
	return out;
}

inline void write_labels(std::ostream& out, const std::vector<std::string>& labels)
{
	out << "vertex,label\n";
	for (std::size_t v = 0; v < labels.size(); ++v)
		out << v << ',' << labels[v] << '\n';
}

inline DirectedGraph load_edge_list(const std::string& path, const std::optional<std::string>& labels_path = {})
{
	auto in = detail::open_in(path);
	DirectedGraph g = read_edge_list(in, path);
	if (labels_path) {
		auto lin = detail::open_in(*labels_path);
		g = g.with_labels(read_labels(lin, g.n(), *labels_path));
	}
	return g;
}

inline void save_edge_list(const DirectedGraph& g, const std::string& path,
                           const std::optional<std::string>& labels_path = {})
{
	auto out = detail::open_out(path);
	write_edge_list(out, g);
	if (labels_path && g.has_labels()) {
		auto lout = detail::open_out(*labels_path);
		write_labels(lout, g.labels());
	}
}

/// Undirected graphs use the same TSV, one row per edge with u < v.
inline void write_edge_list(std::ostream& out, const UndirectedGraph& g)
{
	out << "# vertices\t" << g.n() << '\n';
	for (const auto& e : g.edges())
		out << e.u << '\t' << e.v << '\t' << detail::format_real(e.weight) << '\n';
}

/// Effective graph TSV: "u<TAB>v<TAB>effective_weight", zero weights dropped.
inline void write_effective(std::ostream& out, const EffectiveGraph& eff)
{
	out << "# q\t" << detail::format_real(eff.provenance.q) << '\n';
	out << "# g\t" << detail::format_real(eff.provenance.g) << '\n';
	out << "# beta\t" << detail::format_real(eff.beta) << '\n';
	out << "# strategy\t" << eff.provenance.strategy << '\n';
	write_edge_list(out, eff.graph());
}

// ---------------------------------------------------------------------------
// Dense matrices

inline std::string format_complex(std::complex<double> z)
{
	if (z.imag() == 0.0)
		return detail::format_real(z.real());
	std::string s = detail::format_real(z.real());
	if (!std::signbit(z.imag()))
		s += '+';
	return s + detail::format_real(z.imag()) + 'i';
}

/// Accepts "a", "bi", "a+bi", "a-bi" with optional exponents.
inline std::optional<std::complex<double>> parse_complex(const std::string& text)
{
	const std::string s = detail::trim(text);
	if (s.empty())
		return std::nullopt;
	if (s.back() != 'i')
		if (auto r = detail::parse_real(s))
			return std::complex<double>(*r, 0.0);
	if (s.back() != 'i')
		return std::nullopt;
	const std::string body = s.substr(0, s.size() - 1);
	// split at the last sign that is not the leading one and not an exponent sign
	for (std::size_t k = body.size(); k-- > 1;) {
		if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
			const auto re = detail::parse_real(body.substr(0, k));
			const auto im = detail::parse_real(body.substr(k));
			if (re && im)
				return std::complex<double>(*re, *im);
			return std::nullopt;
		}
	}
	const std::string im_text = body == "+" || body == "-" || body.empty() ? body + "1" : body;
	if (auto im = detail::parse_real(im_text))
		return std::complex<double>(0.0, *im);
	return std::nullopt;
}

inline void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m)
{
	for (Eigen::Index r = 0; r < m.rows(); ++r) {
		for (Eigen::Index c = 0; c < m.cols(); ++c) {
			if (c)
				out << ',';
			out << format_complex(m(r, c));
		}
		out << '\n';
	}
}

inline void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m)
{
	write_matrix_csv(out, Eigen::MatrixXcd(m.cast<std::complex<double>>()));
}

inline Eigen::MatrixXcd read_matrix_csv(std::istream& in, const std::string& source = "<stream>")
{
	std::vector<std::vector<std::complex<double>>> rows;
	std::string line;
	std::size_t lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		const std::string t = detail::trim(line);
		if (t.empty() || t.front() == '#')
			continue;
		std::vector<std::complex<double>> row;
		for (const auto& field : detail::split(t, ',')) {
			const auto z = parse_complex(field);
			if (!z)
				throw InputError(source + ":" + std::to_string(lineno) + ": bad entry '" + field + "'");
			row.push_back(*z);
		}
		if (!rows.empty() && row.size() != rows.front().size())
			throw InputError(source + ":" + std::to_string(lineno) + ": ragged row");
		rows.push_back(std::move(row));
	}
	Eigen::MatrixXcd m(rows.size(), rows.empty() ? 0 : rows.front().size());
	for (std::size_t r = 0; r < rows.size(); ++r)
		for (std::size_t c = 0; c < rows[r].size(); ++c)
			m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
	return m;
}

// ---------------------------------------------------------------------------
// ASCII PGM (P2)

/// Intensities are scaled to [0, 1] by the declared maximum value.
inline IntensityField read_pgm(std::istream& in, const std::string& source = "<stream>")
{
	std::vector<std::string> tokens;
	std::string line;
	while (std::getline(in, line)) {
		const auto hash = line.find('#');
		if (hash != std::string::npos)
			line.erase(hash);
		std::istringstream ls(line);
		std::string tok;
		while (ls >> tok)
			tokens.push_back(tok);
	}
	if (tokens.size() < 4 || tokens[0] != "P2")
		throw InputError(source + ": not an ASCII PGM (P2) image");
	const auto w = detail::parse_index(tokens[1]);
	const auto h = detail::parse_index(tokens[2]);
	const auto maxval = detail::parse_index(tokens[3]);
	if (!w || !h || !maxval || *maxval == 0)
		throw InputError(source + ": bad PGM header");
	if (tokens.size() != 4 + *w * *h)
		throw InputError(source + ": expected " + std::to_string(*w * *h) + " pixels, got " +
		                 std::to_string(tokens.size() - 4));
	std::vector<double> values;
	values.reserve(*w * *h);
	for (std::size_t i = 4; i < tokens.size(); ++i) {
		const auto v = detail::parse_index(tokens[i]);
		if (!v || *v > *maxval)
			throw InputError(source + ": pixel " + std::to_string(i - 4) + " out of range");
		values.push_back(static_cast<double>(*v) / static_cast<double>(*maxval));
	}
	return IntensityField(*w, *h, std::move(values));
}

inline void write_pgm(std::ostream& out, std::size_t width, std::size_t height, const std::vector<std::size_t>& values,
                      std::size_t maxval)
{
	if (values.size() != width * height)
		throw InputError("write_pgm: pixel count does not match dimensions");
	out << "P2\n" << width << ' ' << height << '\n' << std::max<std::size_t>(maxval, 1) << '\n';
	for (std::size_t r = 0; r < height; ++r) {
		for (std::size_t c = 0; c < width; ++c)
			out << (c ? " " : "") << values[r * width + c];
		out << '\n';
	}
}

inline void write_pgm(std::ostream& out, const IntensityField& img, std::size_t maxval = 255)
{
	std::vector<std::size_t> values(img.size());
	for (std::size_t i = 0; i < img.size(); ++i)
		values[i] = static_cast<std::size_t>(std::lround(img.intensity[i] * static_cast<double>(maxval)));
	write_pgm(out, img.width, img.height, values, maxval);
}

} // namespace effgraph
