#pragma once

#include <stdexcept>
#include <string>

namespace rshear {

/// A requested evaluation falls outside the sampled grids (line leaves the
/// image support, slope outside the sampled wedge, filter support exceeds
/// the slope range, ...).
struct coverage_error : std::runtime_error {
    explicit coverage_error(const std::string& what) : std::runtime_error(what) {}
};

/// A frequency-domain construction would place energy beyond the Nyquist box
/// of the target grid. Offending parameters are named in the message.
struct aliasing_error : std::runtime_error {
    explicit aliasing_error(const std::string& what) : std::runtime_error(what) {}
};

/// An operation was applied to data in the wrong processing stage
/// (e.g. a half-order multiplier applied twice).
struct stage_error : std::runtime_error {
    explicit stage_error(const std::string& what) : std::runtime_error(what) {}
};

/// A window pair fails the admissibility requirements (spectral mass at the
/// origin, vanishing energy, non-finite moment quadratures).
struct admissibility_error : std::runtime_error {
    explicit admissibility_error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file. Messages carry the byte offset where parsing failed.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

/// Well-formed input in a variant this build does not handle (e.g. PGM
/// maxval other than 255).
struct unsupported_error : std::runtime_error {
    explicit unsupported_error(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace rshear
