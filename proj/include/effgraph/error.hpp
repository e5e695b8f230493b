#pragma once

#include <stdexcept>
#include <string>

namespace effgraph {

/// Rejected input: malformed graphs, out-of-range parameters, bad files.
class InputError : public std::invalid_argument
{
public:
	explicit InputError(const std::string& what)
	: std::invalid_argument(what)
	{
	}
};

/// Eigensolver or linear-algebra failure. Never swallowed.
class NumericalError : public std::runtime_error
{
public:
	explicit NumericalError(const std::string& what)
	: std::runtime_error(what)
	{
	}
};

} // namespace effgraph
