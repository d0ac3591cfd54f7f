#pragma once

#include <stdexcept>
#include <string>

namespace mg {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input text: graph files, divisor files, scalar or point syntax.
struct ParseError : Error {
    using Error::Error;
};

/// Structurally invalid graph data or an invalid query against a valid graph.
struct GraphError : Error {
    using Error::Error;
};

/// Arithmetic inconsistency: singular systems, rank deficiency, bad domains.
struct NumericError : Error {
    using Error::Error;
};

}  // namespace mg
